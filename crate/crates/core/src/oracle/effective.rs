//! Direct integration of the non-Hermitian effective Schrödinger equations.
//!
//! Both generators are assembled here as explicit matrices from the cavity
//! Hamiltonian terms, independently of the closed-form solutions.

use super::ode::{integrate, OdeOptions, OdeSolution};
use crate::{CavityParams, Error, Result, C64};

const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Which effective Hamiltonian to integrate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EffectiveSystem {
    /// Cavity A in the atomic frame, basis `|e⟩, |g_L L⟩, |g_R R⟩`, starting
    /// from `|e⟩`.
    Emitter(CavityParams),
    /// Cavity B with the incident factor `e^{iωt}` removed, basis
    /// `|e⟩, |g_L L⟩, |g_L R⟩, |g_R L⟩, |g_R R⟩`, starting from
    /// `|g_L⟩ ⊗ (α|L⟩ + β|R⟩)`.
    Scatterer {
        params: CavityParams,
        delta_omega: f64,
        alpha: C64,
        beta: C64,
    },
}

impl EffectiveSystem {
    /// Energies (with `−i·rate/2` loss) and couplings of `H_eff`.
    pub fn hamiltonian(&self) -> Vec<Vec<C64>> {
        match *self {
            EffectiveSystem::Emitter(p) => {
                let e = C64::new(0.0, -p.gamma / 2.0);
                let cav = C64::new(p.delta, -p.kappa / 2.0);
                let g = C64::new(p.g, 0.0);
                vec![vec![e, g, g], vec![g, cav, 0.0.into()], vec![g, 0.0.into(), cav]]
            }
            EffectiveSystem::Scatterer {
                params: p,
                delta_omega,
                ..
            } => {
                // Cavity frame: atom at −Δ, cavity at 0; shift by −δ for e^{iωt}.
                let e = C64::new(-p.delta - delta_omega, -p.gamma / 2.0);
                let cav = C64::new(-delta_omega, -p.kappa / 2.0);
                let g = C64::new(p.g, 0.0);
                let z = C64::new(0.0, 0.0);
                vec![
                    vec![e, g, z, z, g],
                    vec![g, cav, z, z, z],
                    vec![z, z, cav, z, z],
                    vec![z, z, z, cav, z],
                    vec![g, z, z, z, cav],
                ]
            }
        }
    }

    pub fn initial_state(&self) -> Vec<C64> {
        let z = C64::new(0.0, 0.0);
        match *self {
            EffectiveSystem::Emitter(_) => vec![C64::new(1.0, 0.0), z, z],
            EffectiveSystem::Scatterer { alpha, beta, .. } => vec![z, alpha, beta, z, z],
        }
    }
}

/// Integrates `i dψ/dt = H_eff ψ` and records the state at `sample_times`.
pub fn integrate_effective(
    system: EffectiveSystem,
    sample_times: &[f64],
    tol: f64,
) -> Result<OdeSolution> {
    if !(tol >= 1e-14) {
        return Err(Error::Config(format!("tolerance {tol} below 1e-14")));
    }
    let h = system.hamiltonian();
    let y0 = system.initial_state();
    let rhs = move |_t: f64, y: &[C64], dy: &mut [C64]| {
        for (i, row) in h.iter().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for (hij, yj) in row.iter().zip(y) {
                acc += hij * yj;
            }
            dy[i] = -I * acc;
        }
    };
    integrate(rhs, &y0, 0.0, sample_times, OdeOptions::with_tol(tol, tol * 1e-2))
}
