//! Cavity parameters and unit handling.

use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Parameters of one atom-cavity system, all as angular frequencies.
///
/// `delta` is the atom-cavity detuning `ω_c − ω_e`. `omega_c` only enters
/// global phases and stays at zero in the rotating frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CavityParams {
    pub g: f64,
    pub kappa: f64,
    pub gamma: f64,
    #[serde(default)]
    pub delta: f64,
    #[serde(default)]
    pub omega_c: f64,
}

impl CavityParams {
    /// Resonant cavity (`Δ = 0`) in the rotating frame.
    pub fn new(g: f64, kappa: f64, gamma: f64) -> Result<Self> {
        Self::detuned(g, kappa, gamma, 0.0)
    }

    pub fn detuned(g: f64, kappa: f64, gamma: f64, delta: f64) -> Result<Self> {
        let p = CavityParams {
            g,
            kappa,
            gamma,
            delta,
            omega_c: 0.0,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (what, v) in [
            ("g", self.g),
            ("kappa", self.kappa),
            ("gamma", self.gamma),
            ("delta", self.delta),
            ("omega_c", self.omega_c),
        ] {
            if !v.is_finite() {
                return Err(Error::Domain { what, value: v });
            }
        }
        if self.kappa <= 0.0 {
            return Err(Error::Domain {
                what: "kappa",
                value: self.kappa,
            });
        }
        if self.g < 0.0 {
            return Err(Error::Domain {
                what: "g",
                value: self.g,
            });
        }
        if self.gamma < 0.0 {
            return Err(Error::Domain {
                what: "gamma",
                value: self.gamma,
            });
        }
        Ok(())
    }

    /// Upper coupling bound `(κ − γ)/(4√2)` below which the emitter root μ is
    /// real at zero detuning.
    pub fn real_mu_bound(&self) -> f64 {
        (self.kappa - self.gamma) / (4.0 * SQRT_2)
    }

    pub fn is_real_mu_regime(&self) -> bool {
        self.g < self.real_mu_bound()
    }

    /// The emitter coupling `(κ − γ)/(8√2)`: half the real-μ bound.
    pub fn compromise_coupling(kappa: f64, gamma: f64) -> f64 {
        (kappa - gamma) / (8.0 * SQRT_2)
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn with_g(mut self, g: f64) -> Self {
        self.g = g;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum UnitMode {
    #[default]
    Dimensionless,
    /// Rates quoted as `rate/2π` in MHz; times reported in μs.
    Physical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PhysicalUnits {
    pub mode: UnitMode,
}

impl PhysicalUnits {
    pub const PHYSICAL: PhysicalUnits = PhysicalUnits {
        mode: UnitMode::Physical,
    };

    pub fn frequency_unit(&self) -> &'static str {
        match self.mode {
            UnitMode::Dimensionless => "1",
            UnitMode::Physical => "MHz (rate/2pi)",
        }
    }

    pub fn time_unit(&self) -> &'static str {
        match self.mode {
            UnitMode::Dimensionless => "1",
            UnitMode::Physical => "us",
        }
    }
}

/// Rates of one cavity as entered by the user, before any 2π conversion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatesOver2Pi {
    pub g: f64,
    pub kappa: f64,
    pub gamma: f64,
    #[serde(default)]
    pub delta: f64,
}

/// Converts user-facing rates to angular [`CavityParams`].
///
/// In physical mode every rate is multiplied by 2π, giving rad/μs for MHz
/// input. Dimensionless rates pass through unchanged.
pub fn to_angular(rates: RatesOver2Pi, units: PhysicalUnits) -> Result<CavityParams> {
    let scale = match units.mode {
        UnitMode::Dimensionless => 1.0,
        UnitMode::Physical => 2.0 * PI,
    };
    CavityParams::detuned(
        rates.g * scale,
        rates.kappa * scale,
        rates.gamma * scale,
        rates.delta * scale,
    )
}
