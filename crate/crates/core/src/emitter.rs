//! Cavity A: spontaneous emission of a polarization-entangled photon.
//!
//! The atom starts in `|e⟩` with an empty cavity. Under the non-Hermitian
//! effective Hamiltonian the intracavity state is
//! `s_e|e⟩ + s_1|g_L, L⟩ + s_2|g_R, R⟩`, and the norm it loses leaves either
//! through the cavity output (the photon we want) or by atomic decay.
//!
//! The closed-form amplitudes are expressed in the frame rotating at the atomic
//! frequency, where `ν = −(iΔ + κ/2 + γ/2)/2`. Spectra are reported against
//! `δ_ω = ω − ω_c`, which shifts both poles by `iΔ`; at `Δ = 0` the two frames
//! coincide.

use std::f64::consts::PI;

use crate::grid::{FrequencyGrid, SpectralFunction};
use crate::special::exp_sinhc;
use crate::{CavityParams, Error, Result, C64};

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Largest tolerated share of spectral weight outside the frequency grid.
pub const MAX_TRUNCATION_LOSS: f64 = 1e-3;

/// Roots `μ` and `ν` of the emitter's two-level dynamics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmitterRoots {
    pub mu: C64,
    pub nu: C64,
}

impl EmitterRoots {
    /// `(iΔ + κ/2 − γ/2)/2`, the half-difference of the two diagonal rates.
    pub fn half_splitting(p: &CavityParams) -> C64 {
        C64::new(p.kappa / 2.0 - p.gamma / 2.0, p.delta) / 2.0
    }

    /// Decay exponents `ν ± μ` of the cavity-frame amplitudes.
    pub fn cavity_frame_poles(&self, p: &CavityParams) -> (C64, C64) {
        let nu_c = self.nu + I * p.delta;
        (nu_c + self.mu, nu_c - self.mu)
    }

    pub fn is_decaying(&self) -> bool {
        (self.nu + self.mu).re < 0.0 && (self.nu - self.mu).re < 0.0
    }

    /// Absolute residuals of the two defining identities.
    pub fn residuals(&self, p: &CavityParams) -> (f64, f64) {
        let x = Self::half_splitting(p);
        let mu_sq = x * x - 2.0 * p.g * p.g;
        let nu = -C64::new(p.kappa / 2.0 + p.gamma / 2.0, p.delta) / 2.0;
        ((self.mu * self.mu - mu_sq).norm(), (self.nu - nu).norm())
    }

    pub fn negated_mu(self) -> Self {
        EmitterRoots {
            mu: -self.mu,
            nu: self.nu,
        }
    }
}

/// `μ = √(((iΔ + κ/2 − γ/2)/2)² − 2g²)` on the principal branch and
/// `ν = −(iΔ + κ/2 + γ/2)/2`.
pub fn emitter_roots(p: &CavityParams) -> EmitterRoots {
    let x = EmitterRoots::half_splitting(p);
    let mu = (x * x - 2.0 * p.g * p.g).sqrt();
    let nu = -C64::new(p.kappa / 2.0 + p.gamma / 2.0, p.delta) / 2.0;
    EmitterRoots { mu, nu }
}

fn require_decaying(roots: &EmitterRoots) -> Result<()> {
    if roots.is_decaying() {
        Ok(())
    } else {
        Err(Error::Divergent(format!(
            "emitter poles nu±mu = {}, {} do not decay",
            roots.nu + roots.mu,
            roots.nu - roots.mu
        )))
    }
}

/// Intracavity amplitudes of cavity A at time `t` (atomic frame).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmitterAmplitudes {
    pub s_e: C64,
    pub s_1: C64,
    pub s_2: C64,
    pub t: f64,
}

impl EmitterAmplitudes {
    pub fn norm_sqr(&self) -> f64 {
        self.s_e.norm_sqr() + self.s_1.norm_sqr() + self.s_2.norm_sqr()
    }

    /// The same amplitudes in the frame rotating at the cavity frequency.
    pub fn in_cavity_frame(&self, delta: f64) -> EmitterAmplitudes {
        let ph = C64::from_polar(1.0, delta * self.t);
        EmitterAmplitudes {
            s_e: self.s_e * ph,
            s_1: self.s_1 * ph,
            s_2: self.s_2 * ph,
            t: self.t,
        }
    }

    pub fn as_array(&self) -> [C64; 3] {
        [self.s_e, self.s_1, self.s_2]
    }
}

/// Closed-form amplitudes
/// `s_e = e^{νt}[x sinh(μt)/μ + cosh(μt)]`, `s_1 = s_2 = −i g e^{νt} sinh(μt)/μ`
/// with `x = (iΔ + κ/2 − γ/2)/2`.
pub fn emitter_amplitudes(p: &CavityParams, t: f64) -> Result<EmitterAmplitudes> {
    amplitudes_with_roots(p, &emitter_roots(p), t)
}

/// As above with precomputed roots; either square-root branch may be passed.
pub fn amplitudes_with_roots(
    p: &CavityParams,
    roots: &EmitterRoots,
    t: f64,
) -> Result<EmitterAmplitudes> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::Domain { what: "t", value: t });
    }
    let x = EmitterRoots::half_splitting(p);
    let sh = exp_sinhc(roots.nu, roots.mu, t);
    let ch = crate::special::exp_cosh(roots.nu, roots.mu, t);
    let s_e = x * sh + ch;
    let s_1 = -I * p.g * sh;
    Ok(EmitterAmplitudes {
        s_e,
        s_1,
        s_2: s_1,
        t,
    })
}

/// `∫₀^∞ e^{iδt} s_1(t) dt` with `s_1` in the cavity frame, written as
/// `−i g / (z² − μ²)`, `z = i(δ + Δ) + ν`. Even in μ by construction.
fn fourier_amplitude(p: &CavityParams, roots: &EmitterRoots, delta_omega: f64) -> C64 {
    let z = I * (delta_omega + p.delta) + roots.nu;
    -I * p.g / (z * z - roots.mu * roots.mu)
}

/// Emission spectrum of one polarization,
/// `T(δ) = (κ/2π) |∫₀^∞ e^{iδt} s_i(t) dt|²`.
pub fn emission_spectrum(p: &CavityParams, delta_omega: f64) -> Result<f64> {
    let roots = emitter_roots(p);
    require_decaying(&roots)?;
    Ok(spectrum_with_roots(p, &roots, delta_omega))
}

fn spectrum_with_roots(p: &CavityParams, roots: &EmitterRoots, delta_omega: f64) -> f64 {
    p.kappa / (2.0 * PI) * fourier_amplitude(p, roots, delta_omega).norm_sqr()
}

/// Probability that the excitation leaves cavity A as a photon,
/// `p_cav = κ g² / (2ν(μ² − ν²))`.
///
/// The closed form is real only at zero detuning; for `Δ ≠ 0` the same
/// quantity `2κ∫|s_1|²dt` is evaluated from the two-pole Gram sum instead.
pub fn emission_probability(p: &CavityParams) -> Result<f64> {
    let roots = emitter_roots(p);
    emission_probability_with_roots(p, &roots)
}

pub(crate) fn emission_probability_with_roots(
    p: &CavityParams,
    roots: &EmitterRoots,
) -> Result<f64> {
    require_decaying(roots)?;
    if p.g == 0.0 {
        return Ok(0.0);
    }
    let (mu, nu) = (roots.mu, roots.nu);
    let closed = p.kappa * p.g * p.g / (nu * (mu * mu - nu * nu) * 2.0);
    let value = if closed.im.abs() <= 1e-10 * closed.norm().max(1.0) {
        closed.re
    } else {
        2.0 * p.kappa * cavity_flux_integral(p, roots)
    };
    if !(-1e-10..=1.0 + 1e-10).contains(&value) {
        return Err(Error::InternalConsistency(format!(
            "emission probability {value} outside [0, 1]"
        )));
    }
    Ok(value.clamp(0.0, 1.0))
}

/// `∫₀^∞ |s_1(t)|² dt` from `s_1 = A(e^{p₊t} − e^{p₋t})`, `A = −ig/(2μ)`.
fn cavity_flux_integral(p: &CavityParams, roots: &EmitterRoots) -> f64 {
    let (pp, pm) = (roots.nu + roots.mu, roots.nu - roots.mu);
    let a2 = p.g * p.g / (4.0 * roots.mu.norm_sqr());
    let cross = C64::new(1.0, 0.0) / (pp + pm.conj());
    a2 * (-1.0 / (2.0 * pp.re) - 1.0 / (2.0 * pm.re) + 2.0 * cross.re)
}

/// Closed-form full width at half maximum of `T(δ)`,
/// `2√(−(ν² + μ²) + √(2(ν⁴ + μ⁴)))`.
///
/// Only valid at zero detuning with real μ. Use [`spectral_width`] for a
/// numeric fallback elsewhere.
pub fn fwhm(p: &CavityParams) -> Result<f64> {
    if p.delta != 0.0 {
        return Err(Error::UnsupportedRegime(
            "closed-form FWHM requires zero detuning".into(),
        ));
    }
    let x = EmitterRoots::half_splitting(p).re;
    let mu_sq = x * x - 2.0 * p.g * p.g;
    if mu_sq < 0.0 {
        return Err(Error::UnsupportedRegime(format!(
            "closed-form FWHM requires real mu (g < {:.6})",
            p.real_mu_bound()
        )));
    }
    let roots = emitter_roots(p);
    require_decaying(&roots)?;
    let nu = roots.nu.re;
    let (nu2, mu2) = (nu * nu, mu_sq);
    let inner = -(nu2 + mu2) + (2.0 * (nu2 * nu2 + mu2 * mu2)).sqrt();
    Ok(2.0 * inner.max(0.0).sqrt())
}

/// Full width at half maximum located numerically: distance between the
/// outermost half-maximum crossings of `T(δ)`.
pub fn fwhm_numeric(p: &CavityParams) -> Result<f64> {
    let roots = emitter_roots(p);
    require_decaying(&roots)?;
    if p.g == 0.0 {
        return Err(Error::UnsupportedRegime("no cavity emission at g = 0".into()));
    }
    let t = |d: f64| spectrum_with_roots(p, &roots, d);
    let scale = roots.nu.norm() + roots.mu.norm() + p.delta.abs() + p.g;
    let centre = -p.delta;
    let n = 20_001;
    let span = 40.0 * scale;
    let xs: Vec<f64> = (0..n)
        .map(|k| centre - span + 2.0 * span * k as f64 / (n - 1) as f64)
        .collect();
    let ys: Vec<f64> = xs.iter().map(|&d| t(d)).collect();
    let (imax, _) = ys
        .iter()
        .enumerate()
        .fold((0, f64::MIN), |acc, (k, &y)| if y > acc.1 { (k, y) } else { acc });
    // Golden-section refinement of the peak between neighbouring samples.
    let (mut a, mut b) = (xs[imax.saturating_sub(1)], xs[(imax + 1).min(n - 1)]);
    let r = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..200 {
        let c = b - r * (b - a);
        let d = a + r * (b - a);
        if t(c) > t(d) {
            b = d;
        } else {
            a = c;
        }
    }
    let half = 0.5 * t(0.5 * (a + b)).max(ys[imax]);
    let left = (1..n).find(|&k| ys[k] >= half);
    let right = (0..n - 1).rev().find(|&k| ys[k] >= half);
    let (Some(l), Some(r_idx)) = (left, right) else {
        return Err(Error::InternalConsistency("half maximum not bracketed".into()));
    };
    let bisect = |mut lo: f64, mut hi: f64| {
        // Invariant: sign(t(lo) − half) != sign(t(hi) − half).
        let flo = t(lo) - half;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if (t(mid) - half).signum() == flo.signum() {
                lo = mid;
            } else {
                hi = mid;
            }
            if (hi - lo).abs() <= 1e-15 * scale {
                break;
            }
        }
        0.5 * (lo + hi)
    };
    let x_left = bisect(xs[l - 1], xs[l]);
    let x_right = bisect(xs[r_idx + 1], xs[r_idx]);
    Ok(x_right - x_left)
}

/// Closed-form FWHM where available, numeric otherwise.
pub fn spectral_width(p: &CavityParams) -> Result<f64> {
    match fwhm(p) {
        Ok(w) => Ok(w),
        Err(Error::UnsupportedRegime(_)) => fwhm_numeric(p),
        Err(e) => Err(e),
    }
}

/// Default emitter-centred grid: half-width `width_factor` times the spectral
/// FWHM, `n_points` Simpson nodes.
pub fn emitter_grid(p: &CavityParams, width_factor: f64, n_points: usize) -> Result<FrequencyGrid> {
    let w = spectral_width(p)?;
    crate::grid::make_grid(width_factor * w, n_points)
}

/// Normalized photon spectral amplitude `s̃(δ)`.
///
/// Samples `(1/√2π) ∫₀^∞ s_1(t) e^{iδt} dt` on the grid and rescales to unit
/// grid norm, so its inverse transform is the normalized output pulse of
/// cavity A. Fails if more than [`MAX_TRUNCATION_LOSS`] of the analytic
/// spectral weight falls outside the grid.
pub fn spectral_amplitude(p: &CavityParams, grid: &FrequencyGrid) -> Result<SpectralFunction> {
    let roots = emitter_roots(p);
    require_decaying(&roots)?;
    if p.g == 0.0 {
        return Err(Error::UnsupportedRegime("no cavity emission at g = 0".into()));
    }
    let inv_sqrt_2pi = 1.0 / (2.0 * PI).sqrt();
    let values: Vec<C64> = grid
        .samples()
        .iter()
        .map(|&d| fourier_amplitude(p, &roots, d) * inv_sqrt_2pi)
        .collect();
    let raw = SpectralFunction::new(grid.clone(), values);
    // Parseval: the full-line weight equals ∫|s_1|²dt = p_cav/(2κ).
    let total = emission_probability_with_roots(p, &roots)? / (2.0 * p.kappa);
    let lost = 1.0 - raw.l2_norm() / total;
    if lost > MAX_TRUNCATION_LOSS {
        return Err(Error::Truncation {
            lost,
            limit: MAX_TRUNCATION_LOSS,
        });
    }
    raw.normalize()
}

/// Cavity-frame output pulse `s_1(t)/‖s_1‖`, the inverse transform of
/// [`spectral_amplitude`] on an unbounded grid.
pub fn normalized_pulse(p: &CavityParams, t: f64) -> Result<C64> {
    let roots = emitter_roots(p);
    let amp = amplitudes_with_roots(p, &roots, t)?.in_cavity_frame(p.delta);
    let norm = (emission_probability_with_roots(p, &roots)? / (2.0 * p.kappa)).sqrt();
    Ok(amp.s_1 / norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn fig2(g_scale: f64) -> CavityParams {
        let g = CavityParams::compromise_coupling(5.0, 0.05) * g_scale;
        CavityParams::new(g, 5.0, 0.05).unwrap()
    }

    #[test]
    fn roots_collapse_without_coupling() {
        let p = CavityParams::new(0.0, 4.0, 0.0).unwrap();
        let r = emitter_roots(&p);
        assert_relative_eq!(r.nu.re, -1.0, epsilon = 1e-15);
        assert_relative_eq!(r.mu.re, 1.0, epsilon = 1e-15);
        assert!(r.nu.im.abs() < 1e-15 && r.mu.im.abs() < 1e-15);
    }

    #[test]
    fn roots_satisfy_identities() {
        let p = CavityParams::detuned(0.4, 5.0, 0.05, 0.7).unwrap();
        let r = emitter_roots(&p);
        let (a, b) = r.residuals(&p);
        assert!(a < 1e-12 && b < 1e-12);
        assert!(r.is_decaying());
        assert!(r.mu.im.abs() > 1e-3, "detuning makes mu complex");
    }

    #[test]
    fn compromise_coupling_gives_real_positive_mu() {
        let r = emitter_roots(&fig2(1.0));
        assert!(r.mu.re > 0.0);
        assert!(r.mu.im.abs() < 1e-15);
    }

    #[test]
    fn initial_conditions() {
        let a = emitter_amplitudes(&fig2(1.0), 0.0).unwrap();
        assert_eq!(a.s_e, C64::new(1.0, 0.0));
        assert_eq!(a.s_1, C64::new(0.0, 0.0));
        assert_eq!(a.s_2, C64::new(0.0, 0.0));
    }

    #[test]
    fn negative_time_rejected() {
        assert!(matches!(
            emitter_amplitudes(&fig2(1.0), -1.0),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn polarizations_identical_and_norm_bounded() {
        let p = CavityParams::detuned(1.3, 2.0, 0.4, -0.6).unwrap();
        for k in 0..200 {
            let a = emitter_amplitudes(&p, k as f64 * 0.05).unwrap();
            assert_eq!(a.s_1, a.s_2);
            assert!(a.norm_sqr() <= 1.0 + 1e-14);
        }
    }

    #[test]
    fn lossless_atom_emits_with_certainty() {
        for g in [0.1, 0.4, 1.5, 3.0] {
            let p = CavityParams::new(g, 5.0, 0.0).unwrap();
            assert_relative_eq!(emission_probability(&p).unwrap(), 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn spectrum_even_at_zero_detuning() {
        let p = fig2(1.0);
        for d in [0.01, 0.3, 1.7, 12.0] {
            let a = emission_spectrum(&p, d).unwrap();
            let b = emission_spectrum(&p, -d).unwrap();
            assert!((a - b).abs() <= 1e-15 * a.max(1e-300));
        }
    }

    #[test]
    fn divergent_parameters_rejected() {
        // gamma = kappa = tiny but decaying; build a non-decaying root set by hand.
        let p = fig2(1.0);
        let r = EmitterRoots {
            mu: C64::new(10.0, 0.0),
            nu: C64::new(-1.0, 0.0),
        };
        assert!(matches!(require_decaying(&r), Err(Error::Divergent(_))));
        assert!(emission_probability_with_roots(&p, &r).is_err());
    }

    #[test]
    fn fwhm_requires_real_mu() {
        let p = CavityParams::new(2.0, 5.0, 0.05).unwrap();
        assert!(matches!(fwhm(&p), Err(Error::UnsupportedRegime(_))));
        assert!(spectral_width(&p).unwrap() > 0.0);
        let d = CavityParams::detuned(0.3, 5.0, 0.05, 0.2).unwrap();
        assert!(matches!(fwhm(&d), Err(Error::UnsupportedRegime(_))));
    }

    #[test]
    fn fwhm_closed_form_matches_bisection() {
        for s in [0.2, 0.6, 1.0, 1.6] {
            let p = fig2(s);
            let a = fwhm(&p).unwrap();
            let b = fwhm_numeric(&p).unwrap();
            assert_relative_eq!(a, b, max_relative = 1e-6);
        }
    }

    #[test]
    fn normalized_amplitude_peaks_at_centre_with_half_power_at_fwhm() {
        let p = fig2(1.0);
        let w = fwhm(&p).unwrap();
        let grid = emitter_grid(&p, 40.0, 4001).unwrap();
        let s = spectral_amplitude(&p, &grid).unwrap();
        assert!((s.l2_norm() - 1.0).abs() < 1e-12);
        let (kmax, _) = s
            .values()
            .iter()
            .enumerate()
            .fold((0, 0.0), |acc, (k, v)| if v.norm() > acc.1 { (k, v.norm()) } else { acc });
        assert_eq!(grid.samples()[kmax], 0.0);
        // |s̃|² at ±FWHM/2 through the same closed form used for sampling.
        let ratio = emission_spectrum(&p, w / 2.0).unwrap() / emission_spectrum(&p, 0.0).unwrap();
        assert_relative_eq!(ratio, 0.5, max_relative = 1e-9);
    }

    #[test]
    fn narrow_grid_is_a_truncation_error() {
        let p = fig2(1.0);
        let grid = emitter_grid(&p, 1.0, 201).unwrap();
        assert!(matches!(
            spectral_amplitude(&p, &grid),
            Err(Error::Truncation { .. })
        ));
    }

    #[test]
    fn branch_choice_is_invisible() {
        let p = CavityParams::detuned(0.9, 3.0, 0.2, 0.4).unwrap();
        let r = emitter_roots(&p);
        let n = r.negated_mu();
        for t in [0.0, 1e-7, 0.3, 2.0, 9.0] {
            let a = amplitudes_with_roots(&p, &r, t).unwrap();
            let b = amplitudes_with_roots(&p, &n, t).unwrap();
            for (x, y) in a.as_array().iter().zip(b.as_array()) {
                assert!((x - y).norm() <= 1e-12);
            }
        }
        for d in [-2.0, 0.0, 0.7] {
            let a = spectrum_with_roots(&p, &r, d);
            let b = spectrum_with_roots(&p, &n, d);
            assert!((a - b).abs() <= 1e-12 * a.max(1.0));
        }
        let a = emission_probability_with_roots(&p, &r).unwrap();
        let b = emission_probability_with_roots(&p, &n).unwrap();
        assert!((a - b).abs() <= 1e-12);
    }

    #[test]
    fn detuned_probability_uses_gram_sum_consistently() {
        // At zero detuning the Gram sum must agree with the closed form.
        let p = fig2(1.0);
        let r = emitter_roots(&p);
        let gram = 2.0 * p.kappa * cavity_flux_integral(&p, &r);
        assert_relative_eq!(gram, emission_probability(&p).unwrap(), max_relative = 1e-12);
    }
}
