//! Cavity B: reflection of a single polarized photon off a cavity holding a
//! Λ atom prepared in `|g_L⟩`.
//!
//! Intracavity basis order: `|e⟩, |g_L L⟩, |g_L R⟩, |g_R L⟩, |g_R R⟩`.
//! Only `|g_L L⟩` and `|g_R R⟩` couple to `|e⟩`; `|g_L R⟩` is an empty-cavity
//! mode and `|g_R L⟩` is never populated.
//!
//! Amplitudes carry the factor `e^{iωt}` of the incident component (the
//! `c̃_{j,ω}` of the photon-in-cavity problem), and the output of a component
//! switched on at `t = 0` is `√κ C_j(t)` plus direct reflection, with
//! `C_j(t) = −√κ ∫₀ᵗ c̃_j dt'`.

use crate::special::{exp_cosh, exp_sinhc, int_exp, int_exp_cosh, int_exp_sinhc};
use crate::{CavityParams, Error, Result, C64};

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// `λ`, `η`, `ρ` for one frequency offset `δ_ω`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterRoots {
    pub lambda: C64,
    pub eta: C64,
    pub rho: C64,
    pub delta_omega: f64,
}

/// `λ = −(−iΔ − 2iδ + κ/2 + γ/2)/2`, `η = √(((−iΔ − κ/2 + γ/2)/2)² − 2g²)`,
/// `ρ = (iδ − κ/2)/2`.
pub fn scatter_roots(p: &CavityParams, delta_omega: f64) -> ScatterRoots {
    let lambda = -C64::new(p.kappa / 2.0 + p.gamma / 2.0, -p.delta - 2.0 * delta_omega) / 2.0;
    let h = C64::new(-p.kappa / 2.0 + p.gamma / 2.0, -p.delta) / 2.0;
    let eta = (h * h - 2.0 * p.g * p.g).sqrt();
    let rho = C64::new(-p.kappa / 2.0, delta_omega) / 2.0;
    ScatterRoots {
        lambda,
        eta,
        rho,
        delta_omega,
    }
}

impl ScatterRoots {
    pub fn negated_eta(self) -> Self {
        ScatterRoots {
            eta: -self.eta,
            ..self
        }
    }

    /// `(2ρ − λ)/2`, the coefficient of `e^{λt} sinh(ηt)/η` in `c̃_1` and `c̃_4`.
    fn sinh_coeff(&self) -> C64 {
        (self.rho * 2.0 - self.lambda) / 2.0
    }
}

/// Intracavity amplitudes `c̃_{j,ω}(t)` for input polarization `α|L⟩ + β|R⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntracavityAmplitudes {
    pub c_e: C64,
    pub c_1: C64,
    pub c_2: C64,
    pub c_3: C64,
    pub c_4: C64,
    pub t: f64,
    pub delta_omega: f64,
    pub alpha: C64,
    pub beta: C64,
}

impl IntracavityAmplitudes {
    pub fn as_array(&self) -> [C64; 5] {
        [self.c_e, self.c_1, self.c_2, self.c_3, self.c_4]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.as_array().iter().map(|c| c.norm_sqr()).sum()
    }
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { what: "t", value: t })
    }
}

/// Closed-form solution of the effective Schrödinger equation of cavity B
/// starting from `|g_L⟩ ⊗ (α|L⟩ + β|R⟩)` inside the cavity.
pub fn intracavity_amplitudes(
    p: &CavityParams,
    delta_omega: f64,
    t: f64,
    alpha: C64,
    beta: C64,
) -> Result<IntracavityAmplitudes> {
    intracavity_with_roots(p, &scatter_roots(p, delta_omega), t, alpha, beta)
}

/// As above with precomputed roots; either square-root branch may be passed.
pub fn intracavity_with_roots(
    p: &CavityParams,
    r: &ScatterRoots,
    t: f64,
    alpha: C64,
    beta: C64,
) -> Result<IntracavityAmplitudes> {
    check_time(t)?;
    let sh = exp_sinhc(r.lambda, r.eta, t);
    let ch = exp_cosh(r.lambda, r.eta, t);
    let empty = (r.rho * 2.0 * t).exp();
    let common = r.sinh_coeff() * sh + ch * 0.5;
    Ok(IntracavityAmplitudes {
        c_e: -I * alpha * p.g * sh,
        c_1: alpha * (common + empty * 0.5),
        c_2: beta * empty,
        c_3: C64::new(0.0, 0.0),
        c_4: alpha * (common - empty * 0.5),
        t,
        delta_omega: r.delta_omega,
        alpha,
        beta,
    })
}

/// Time-integrated amplitudes `C_j(t) = −√κ ∫₀ᵗ c̃_j dt'` for
/// `j = e, 1, 2, 3, 4`.
///
/// `C_e` is not part of the output but completes the flux bookkeeping: the
/// five values are the intracavity amplitudes of a monochromatic drive that
/// was switched on at `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutputIntegrals {
    pub c_e: C64,
    pub c: [C64; 4],
}

pub fn output_time_integrals(
    p: &CavityParams,
    delta_omega: f64,
    t: f64,
    alpha: C64,
    beta: C64,
) -> Result<OutputIntegrals> {
    integrals_with_roots(p, &scatter_roots(p, delta_omega), t, alpha, beta)
}

/// As above with precomputed roots; either square-root branch may be passed.
pub fn integrals_with_roots(
    p: &CavityParams,
    r: &ScatterRoots,
    t: f64,
    alpha: C64,
    beta: C64,
) -> Result<OutputIntegrals> {
    check_time(t)?;
    let sk = -p.kappa.sqrt();
    let ish = int_exp_sinhc(r.lambda, r.eta, t);
    let ich = int_exp_cosh(r.lambda, r.eta, t);
    let iempty = int_exp(r.rho * 2.0, t);
    let common = r.sinh_coeff() * ish + ich * 0.5;
    Ok(OutputIntegrals {
        c_e: sk * (-I * alpha * p.g * ish),
        c: [
            sk * alpha * (common + iempty * 0.5),
            sk * beta * iempty,
            C64::new(0.0, 0.0),
            sk * alpha * (common - iempty * 0.5),
        ],
    })
}

/// Outgoing amplitudes of one frequency component on the four channels
/// `|g_L L⟩, |g_L R⟩, |g_R L⟩, |g_R R⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteredChannelAmplitudes {
    pub out: [C64; 4],
    /// Driven intracavity amplitudes `C_j(t)` on the four photon channels.
    pub intracavity: [C64; 4],
    /// Driven excited-state amplitude.
    pub excited: C64,
}

impl ScatteredChannelAmplitudes {
    pub fn out_norm_sqr(&self) -> f64 {
        self.out.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn residual_norm_sqr(&self) -> f64 {
        self.excited.norm_sqr() + self.intracavity.iter().map(|c| c.norm_sqr()).sum::<f64>()
    }
}

/// Cavity-mediated output `√κ C_j` plus direct mirror reflection of the input
/// on channels 1 and 2.
pub fn scatter_channel(
    p: &CavityParams,
    delta_omega: f64,
    t: f64,
    alpha: C64,
    beta: C64,
) -> Result<ScatteredChannelAmplitudes> {
    channel_with_roots(p, &scatter_roots(p, delta_omega), t, alpha, beta)
}

/// As above with precomputed roots; either square-root branch may be passed.
pub fn channel_with_roots(
    p: &CavityParams,
    r: &ScatterRoots,
    t: f64,
    alpha: C64,
    beta: C64,
) -> Result<ScatteredChannelAmplitudes> {
    let ints = integrals_with_roots(p, r, t, alpha, beta)?;
    let sk = p.kappa.sqrt();
    let direct = [alpha, beta, C64::new(0.0, 0.0), C64::new(0.0, 0.0)];
    let mut out = [C64::new(0.0, 0.0); 4];
    for j in 0..4 {
        out[j] = ints.c[j] * sk + direct[j];
    }
    Ok(ScatteredChannelAmplitudes {
        out,
        intracavity: ints.c,
        excited: ints.c_e,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn fig4_b() -> CavityParams {
        CavityParams::new(5.0, 2.0, 1.0).unwrap()
    }

    #[test]
    fn resonant_roots() {
        let p = CavityParams::new(3.3, 2.0, 0.0).unwrap();
        let r = scatter_roots(&p, 0.0);
        assert_relative_eq!(r.lambda.re, -0.5, epsilon = 1e-15);
        assert_relative_eq!(r.rho.re, -0.5, epsilon = 1e-15);
        assert_eq!(r.lambda.im, 0.0);
        let p = CavityParams::new(5.0, 2.0, 0.0).unwrap();
        let r = scatter_roots(&p, 0.0);
        assert!(r.eta.re.abs() < 1e-15);
        assert_relative_eq!(r.eta.im.abs(), (50.0f64 - 0.25).sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn roots_reevaluated_independently() {
        let p = CavityParams::detuned(1.7, 2.3, 0.4, -0.8).unwrap();
        let d = 0.37;
        let r = scatter_roots(&p, d);
        // Alternative evaluation order.
        let lam = (C64::new(0.0, p.delta) + C64::new(0.0, 2.0 * d) - p.kappa / 2.0 - p.gamma / 2.0) / 2.0;
        let x = (C64::new(0.0, -p.delta) - p.kappa / 2.0 + p.gamma / 2.0) * 0.5;
        let eta_sq = x * x - 2.0 * p.g * p.g;
        let rho = (C64::new(0.0, d) - p.kappa / 2.0) * 0.5;
        assert!((r.lambda - lam).norm() < 1e-14);
        assert!((r.eta * r.eta - eta_sq).norm() < 1e-14 * eta_sq.norm().max(1.0));
        assert!((r.rho - rho).norm() < 1e-14);
    }

    #[test]
    fn initial_state_and_dark_channel() {
        let (a, b) = (c(0.6), C64::new(0.0, 0.8));
        let s = intracavity_amplitudes(&fig4_b(), 0.3, 0.0, a, b).unwrap();
        assert!(s.c_e.norm() < 1e-15);
        assert!((s.c_1 - a).norm() < 1e-15);
        assert!((s.c_2 - b).norm() < 1e-15);
        assert!(s.c_4.norm() < 1e-15);
        for k in 0..50 {
            let s = intracavity_amplitudes(&fig4_b(), -0.4, k as f64 * 0.2, a, b).unwrap();
            assert_eq!(s.c_3, C64::new(0.0, 0.0));
            assert!(s.norm_sqr() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn empty_integrals_at_zero_time() {
        let o = output_time_integrals(&fig4_b(), 0.2, 0.0, c(0.6), c(0.8)).unwrap();
        assert!(o.c.iter().all(|x| x.norm() == 0.0));
        assert_eq!(o.c_e.norm(), 0.0);
    }

    #[test]
    fn negative_time_rejected() {
        assert!(intracavity_amplitudes(&fig4_b(), 0.0, -1e-3, c(1.0), c(0.0)).is_err());
        assert!(scatter_channel(&fig4_b(), 0.0, f64::NAN, c(1.0), c(0.0)).is_err());
    }

    #[test]
    fn empty_cavity_channel_reflects_with_sign_flip() {
        let p = fig4_b();
        let beta = c(0.8);
        let t = 1e3 / p.kappa;
        let o = output_time_integrals(&p, 0.0, t, c(0.6), beta).unwrap();
        let cavity_part = o.c[1] * p.kappa.sqrt();
        assert!((cavity_part - (-2.0 * beta)).norm() < 1e-12);
        let ch = scatter_channel(&p, 0.0, t, c(0.6), beta).unwrap();
        assert!((ch.out[1] + beta).norm() < 1e-12);
    }

    #[test]
    fn monochromatic_swap() {
        let p = CavityParams::new(5.0, 2.0, 0.0).unwrap();
        let (a, b) = (C64::new(0.6, 0.1), C64::new(-0.3, 0.734));
        let ch = scatter_channel(&p, 0.0, 1e3 / p.kappa, a, b).unwrap();
        assert!(ch.out[0].norm() < 1e-9);
        assert!((ch.out[1] + b).norm() < 1e-9);
        assert_eq!(ch.out[2], C64::new(0.0, 0.0));
        assert!((ch.out[3] - a).norm() < 1e-9);
    }

    #[test]
    fn uncoupled_atom_reflects_like_empty_cavity() {
        let p = CavityParams::new(0.0, 2.0, 0.0).unwrap();
        let ch = scatter_channel(&p, 0.0, 1e3 / p.kappa, c(1.0), c(0.0)).unwrap();
        assert!((ch.out[0] + c(1.0)).norm() < 1e-9);
        assert!(ch.out[3].norm() < 1e-9);
    }

    #[test]
    fn lossless_scattering_is_unitary_per_frequency() {
        let p = CavityParams::detuned(5.0, 2.0, 0.0, 0.3).unwrap();
        let (a, b) = (c(0.6), C64::new(0.0, 0.8));
        for k in -40..=40 {
            let d = k as f64 * 0.5;
            let ch = scatter_channel(&p, d, 1e3 / p.kappa, a, b).unwrap();
            assert_relative_eq!(ch.out_norm_sqr(), 1.0, max_relative = 1e-8);
        }
    }

    #[test]
    fn far_detuned_photon_reflects_unaffected() {
        let p = fig4_b();
        let (a, b) = (c(0.6), c(0.8));
        let d = 1e3 * p.kappa;
        let ch = scatter_channel(&p, d, 50.0 / p.kappa, a, b).unwrap();
        let dev = ((ch.out[0] - a).norm_sqr()
            + (ch.out[1] - b).norm_sqr()
            + ch.out[3].norm_sqr())
        .sqrt();
        assert!(dev < 1e-2, "deviation {dev}");
    }

    #[test]
    fn branch_choice_is_invisible() {
        let p = CavityParams::detuned(1.2, 2.0, 0.7, 0.25).unwrap();
        for d in [-1.0, 0.0, 0.4] {
            let r = scatter_roots(&p, d);
            let n = r.negated_eta();
            for t in [0.0, 1e-6, 0.5, 3.0, 40.0] {
                let a = intracavity_with_roots(&p, &r, t, c(0.6), c(0.8)).unwrap();
                let b = intracavity_with_roots(&p, &n, t, c(0.6), c(0.8)).unwrap();
                for (x, y) in a.as_array().iter().zip(b.as_array()) {
                    assert!((x - y).norm() <= 1e-12);
                }
                let a = channel_with_roots(&p, &r, t, c(0.6), c(0.8)).unwrap();
                let b = channel_with_roots(&p, &n, t, c(0.6), c(0.8)).unwrap();
                for (x, y) in a.out.iter().zip(b.out) {
                    assert!((x - y).norm() <= 1e-12);
                }
            }
        }
    }
}
