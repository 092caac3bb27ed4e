//! Hermitian single-excitation model of cavity A with an explicitly
//! discretized output reservoir.
//!
//! Each polarization mode couples to `n` reservoir modes spread uniformly over
//! `[−W, W]` with flat coupling `√(κ Δω / 2π)`. Atomic decay is kept as a
//! non-Hermitian `−iγ/2` term; with `γ = 0` the evolution is unitary.

use std::f64::consts::PI;

use super::ode::{integrate, OdeOptions};
use crate::emitter::spectral_width;
use crate::{CavityParams, Error, Result, C64};

/// Uniform reservoir discretization for one cavity.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretizedBathModel {
    pub params: CavityParams,
    pub frequencies: Vec<f64>,
    pub spacing: f64,
    pub coupling: f64,
}

impl DiscretizedBathModel {
    pub fn new(params: CavityParams, n_modes: usize, half_width: f64) -> Result<Self> {
        if n_modes < 201 || n_modes.is_multiple_of(2) {
            return Err(Error::Config(format!(
                "bath needs an odd mode count >= 201, got {n_modes}"
            )));
        }
        let width = spectral_width(&params)?;
        if half_width < 20.0 * width {
            return Err(Error::Config(format!(
                "bath half-width {half_width} below 20 x FWHM ({width})"
            )));
        }
        let m = (n_modes - 1) / 2;
        let spacing = half_width / m as f64;
        let frequencies = (0..n_modes).map(|k| (k as f64 - m as f64) * spacing).collect();
        Ok(DiscretizedBathModel {
            params,
            frequencies,
            spacing,
            coupling: (params.kappa * spacing / (2.0 * PI)).sqrt(),
        })
    }

    pub fn n_modes(&self) -> usize {
        self.frequencies.len()
    }

    /// State size: `|e⟩`, two cavity modes, two reservoirs.
    pub fn dimension(&self) -> usize {
        3 + 2 * self.n_modes()
    }

    /// Time after which the discrete reservoir starts to refocus.
    pub fn recurrence_time(&self) -> f64 {
        2.0 * PI / self.spacing
    }

    fn rhs(&self, y: &[C64], dy: &mut [C64]) {
        let n = self.n_modes();
        let p = &self.params;
        let i = C64::new(0.0, 1.0);
        let (e, cl, cr) = (y[0], y[1], y[2]);
        let (bl, br) = y[3..].split_at(n);
        let sum_l: C64 = bl.iter().sum();
        let sum_r: C64 = br.iter().sum();
        dy[0] = C64::new(-p.gamma / 2.0, p.delta) * e - i * p.g * (cl + cr);
        dy[1] = -i * p.g * e - sum_l * self.coupling;
        dy[2] = -i * p.g * e - sum_r * self.coupling;
        let (dl, dr) = dy[3..].split_at_mut(n);
        for k in 0..n {
            let w = self.frequencies[k];
            dl[k] = -i * w * bl[k] + cl * self.coupling;
            dr[k] = -i * w * br[k] + cr * self.coupling;
        }
    }
}

/// Outcome of a discretized-bath run.
#[derive(Debug, Clone, PartialEq)]
pub struct BathRun {
    pub frequencies: Vec<f64>,
    /// `(|b_L,k|² + |b_R,k|²)/Δω` at the final time.
    pub spectral_density: Vec<f64>,
    /// Total state norm at each checkpoint.
    pub norms: Vec<(f64, f64)>,
    /// Norm left in the atom and cavity at the final time.
    pub residual: f64,
    /// Sum of reservoir occupations at the final time.
    pub emitted: f64,
    /// False when more than 1e-3 of the excitation is still in the system.
    pub converged: bool,
}

impl BathRun {
    pub fn max_norm_drift(&self) -> f64 {
        self.norms
            .iter()
            .map(|&(_, n)| (n - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// Evolves the atom from `|e⟩` with an empty cavity and vacuum reservoir up to
/// `t_end`.
pub fn simulate_discretized_bath(
    params: CavityParams,
    n_modes: usize,
    half_width: f64,
    t_end: f64,
) -> Result<BathRun> {
    let model = DiscretizedBathModel::new(params, n_modes, half_width)?;
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::Domain {
            what: "t_end",
            value: t_end,
        });
    }
    let mut y0 = vec![C64::new(0.0, 0.0); model.dimension()];
    y0[0] = C64::new(1.0, 0.0);
    let checkpoints: Vec<f64> = (1..=50).map(|k| t_end * k as f64 / 50.0).collect();
    let opts = OdeOptions {
        rtol: 1e-12,
        atol: 1e-15,
        h_max: 0.5 / half_width,
        max_steps: 50_000_000,
    };
    let sol = integrate(|_, y, dy| model.rhs(y, dy), &y0, 0.0, &checkpoints, opts)?;
    let norms = sol
        .times
        .iter()
        .zip(&sol.states)
        .map(|(&t, s)| (t, s.iter().map(|c| c.norm_sqr()).sum()))
        .collect();
    let last = sol.last();
    let n = model.n_modes();
    let residual: f64 = last[..3].iter().map(|c| c.norm_sqr()).sum();
    let spectral_density: Vec<f64> = (0..n)
        .map(|k| (last[3 + k].norm_sqr() + last[3 + n + k].norm_sqr()) / model.spacing)
        .collect();
    let emitted = spectral_density.iter().sum::<f64>() * model.spacing;
    Ok(BathRun {
        frequencies: model.frequencies.clone(),
        spectral_density,
        norms,
        residual,
        emitted,
        converged: residual <= 1e-3,
    })
}
