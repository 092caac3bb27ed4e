//! Time-domain input-output simulations that never touch a frequency grid.
//!
//! Cavity B is driven by an incoming field `b_in(t)` through
//! `ȧ = … − √κ b_in`, and the reflected field is `b_out = b_in + √κ a`. The
//! cascaded run feeds the output of cavity A, obtained from its own effective
//! Schrödinger equation, straight into cavity B.

use super::ode::{integrate, OdeOptions};
use crate::{CavityParams, Error, Result, C64};

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Samples of a driven cavity-B run.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeDomainRun {
    pub times: Vec<f64>,
    /// Reflected field on `|g_L L⟩, |g_L R⟩, |g_R L⟩, |g_R R⟩`.
    pub output: Vec<[C64; 4]>,
    /// Excited-state amplitude of atom B.
    pub excited: Vec<C64>,
    /// Intracavity amplitudes on the four photon channels.
    pub intracavity: Vec<[C64; 4]>,
}

/// Drives cavity B (atom in `|g_L⟩`) with `input(t)·(α|L⟩ + β|R⟩)`.
pub fn time_domain_scatter<F>(
    input: F,
    params: &CavityParams,
    alpha: C64,
    beta: C64,
    sample_times: &[f64],
    tol: f64,
) -> Result<TimeDomainRun>
where
    F: Fn(f64) -> C64,
{
    check_tol(tol)?;
    let p = *params;
    let sk = p.kappa.sqrt();
    let rhs = |t: f64, y: &[C64], dy: &mut [C64]| {
        let b = input(t);
        let (xe, y1, y2, y4) = (y[0], y[1], y[2], y[3]);
        dy[0] = C64::new(-p.gamma / 2.0, p.delta) * xe - I * p.g * (y1 + y4);
        dy[1] = -p.kappa / 2.0 * y1 - I * p.g * xe - sk * alpha * b;
        dy[2] = -p.kappa / 2.0 * y2 - sk * beta * b;
        dy[3] = -p.kappa / 2.0 * y4 - I * p.g * xe;
    };
    let zero = C64::new(0.0, 0.0);
    let sol = integrate(rhs, &[zero; 4], 0.0, sample_times, OdeOptions::with_tol(tol, tol * 1e-3))?;
    let mut run = TimeDomainRun {
        times: sol.times.clone(),
        output: Vec::with_capacity(sol.times.len()),
        excited: Vec::with_capacity(sol.times.len()),
        intracavity: Vec::with_capacity(sol.times.len()),
    };
    for (&t, y) in sol.times.iter().zip(&sol.states) {
        let b = input(t);
        run.output.push([
            alpha * b + sk * y[1],
            beta * b + sk * y[2],
            zero,
            sk * y[3],
        ]);
        run.excited.push(y[0]);
        run.intracavity.push([y[1], y[2], zero, y[3]]);
    }
    Ok(run)
}

/// Accumulated photon statistics of the cascaded A → B simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct CascadeRun {
    pub times: Vec<f64>,
    /// `∫₀ᵗ |b_A|² dt'`: photon probability emitted by cavity A so far.
    pub emitted_a: Vec<f64>,
    /// `∫₀ᵗ Σ|cc_k|² dt'`: probability reflected off cavity B so far.
    pub reflected: Vec<f64>,
    /// `∫₀ᵗ |cc_3 − cc_2|²/2 dt'`: singlet-projected part of `reflected`.
    pub singlet: Vec<f64>,
    /// Instantaneous reflected amplitudes `(cc_1, cc_2, cc_3)` on
    /// `|g_L g_L L⟩, |g_R g_L R⟩, |g_L g_R R⟩`.
    pub amplitudes: Vec<[C64; 3]>,
}

impl CascadeRun {
    /// Heralding probability per emitted photon and conditional singlet
    /// fidelity for clicks in `[times[i0], times[i1]]`, normalized by the
    /// emission recorded at `times[i_total]`.
    pub fn window(&self, i0: usize, i1: usize, i_total: usize) -> (f64, f64) {
        let r = self.reflected[i1] - self.reflected[i0];
        let s = self.singlet[i1] - self.singlet[i0];
        (r / self.emitted_a[i_total], s / r)
    }
}

/// Atom A excited at `t = 0`; its cavity output drives cavity B.
pub fn cascaded_heralding(
    params_a: &CavityParams,
    params_b: &CavityParams,
    sample_times: &[f64],
    tol: f64,
) -> Result<CascadeRun> {
    check_tol(tol)?;
    let (a, b) = (*params_a, *params_b);
    let (ska, skb) = (a.kappa.sqrt(), b.kappa.sqrt());
    // y = [s_e, s_L, s_R | x_e, y1, y4 | y2 | P_A, R, S]
    let rhs = |_t: f64, y: &[C64], dy: &mut [C64]| {
        let (se, sl, sr) = (y[0], y[1], y[2]);
        dy[0] = C64::new(-a.gamma / 2.0, a.delta) * se - I * a.g * (sl + sr);
        dy[1] = -a.kappa / 2.0 * sl - I * a.g * se;
        dy[2] = -a.kappa / 2.0 * sr - I * a.g * se;
        let (bl, br) = (ska * sl, ska * sr);
        let (xe, y1, y4, y2) = (y[3], y[4], y[5], y[6]);
        dy[3] = C64::new(-b.gamma / 2.0, b.delta) * xe - I * b.g * (y1 + y4);
        dy[4] = -b.kappa / 2.0 * y1 - I * b.g * xe - skb * bl;
        dy[5] = -b.kappa / 2.0 * y4 - I * b.g * xe;
        dy[6] = -b.kappa / 2.0 * y2 - skb * br;
        let cc = reflected(bl, br, y1, y2, y4, skb);
        dy[7] = C64::new(bl.norm_sqr() + br.norm_sqr(), 0.0);
        dy[8] = C64::new(cc.iter().map(|c| c.norm_sqr()).sum(), 0.0);
        dy[9] = C64::new((cc[2] - cc[1]).norm_sqr() / 2.0, 0.0);
    };
    let mut y0 = [C64::new(0.0, 0.0); 10];
    y0[0] = C64::new(1.0, 0.0);
    let sol = integrate(rhs, &y0, 0.0, sample_times, OdeOptions::with_tol(tol, tol * 1e-3))?;
    let mut run = CascadeRun {
        times: sol.times.clone(),
        emitted_a: Vec::new(),
        reflected: Vec::new(),
        singlet: Vec::new(),
        amplitudes: Vec::new(),
    };
    for y in &sol.states {
        run.emitted_a.push(y[7].re);
        run.reflected.push(y[8].re);
        run.singlet.push(y[9].re);
        run.amplitudes
            .push(reflected(ska * y[1], ska * y[2], y[4], y[6], y[5], skb));
    }
    Ok(run)
}

fn reflected(bl: C64, br: C64, y1: C64, y2: C64, y4: C64, skb: f64) -> [C64; 3] {
    [bl + skb * y1, br + skb * y2, skb * y4]
}

fn check_tol(tol: f64) -> Result<()> {
    if (1e-14..1.0).contains(&tol) {
        Ok(())
    } else {
        Err(Error::Config(format!("tolerance {tol} outside [1e-14, 1)")))
    }
}
