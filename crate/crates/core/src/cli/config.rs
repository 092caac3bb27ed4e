//! Scenario files: TOML with one table per cavity.
//!
//! ```toml
//! units = "physical"
//!
//! [cavity_a]
//! g = 1.2
//! kappa = 15.0
//! gamma = 1.5
//!
//! [cavity_b]
//! g = 15.0
//! kappa = 6.0
//! gamma = 3.0
//!
//! [grid]
//! points = 4001
//! width_factor = 40.0
//! ```

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::entangler::{GridSettings, Timing};
use crate::{to_angular, CavityParams, Error, PhysicalUnits, RatesOver2Pi, Result, UnitMode};

/// Optional replacements for the default heralding window.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimingOverrides {
    pub t_start: Option<f64>,
    pub dt_wait: Option<f64>,
}

/// Range of the swept quantity of a figure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl SweepSpec {
    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.points - 1) as f64;
        (0..self.points).map(|k| self.start + k as f64 * step).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSettings {
    pub dir: Option<PathBuf>,
    #[serde(default)]
    pub svg: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub units: UnitMode,
    pub cavity_a: RatesOver2Pi,
    pub cavity_b: RatesOver2Pi,
    #[serde(default)]
    pub grid: GridSettings,
    #[serde(default)]
    pub timing: TimingOverrides,
    pub sweep: Option<SweepSpec>,
    #[serde(default)]
    pub output: OutputSettings,
}

impl ScenarioConfig {
    pub fn dimensionless(a: RatesOver2Pi, b: RatesOver2Pi) -> Self {
        ScenarioConfig {
            units: UnitMode::Dimensionless,
            cavity_a: a,
            cavity_b: b,
            grid: GridSettings::default(),
            timing: TimingOverrides::default(),
            sweep: None,
            output: OutputSettings::default(),
        }
    }

    /// The ⁸⁷Rb cavities, rates as `/2π` in MHz.
    pub fn rubidium() -> Self {
        ScenarioConfig {
            units: UnitMode::Physical,
            ..Self::dimensionless(rates(1.2, 15.0, 1.5), rates(15.0, 6.0, 3.0))
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: ScenarioConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        self.cavities()?;
        let GridSettings { points, width_factor } = self.grid;
        if points < 3 || points % 2 == 0 {
            return Err(Error::Config(format!("grid.points must be odd and >= 3, got {points}")));
        }
        if !(width_factor > 0.0 && width_factor.is_finite()) {
            return Err(Error::Config(format!("grid.width_factor must be positive, got {width_factor}")));
        }
        for (name, v) in [("timing.t_start", self.timing.t_start), ("timing.dt_wait", self.timing.dt_wait)] {
            if let Some(v) = v {
                if !(v >= 0.0 && v.is_finite()) {
                    return Err(Error::Config(format!("{name} must be finite and >= 0, got {v}")));
                }
            }
        }
        if let Some(s) = self.sweep {
            if s.points == 0 || !s.start.is_finite() || !s.stop.is_finite() {
                return Err(Error::Config(format!("invalid sweep {s:?}")));
            }
        }
        Ok(())
    }

    pub fn unit_system(&self) -> PhysicalUnits {
        PhysicalUnits { mode: self.units }
    }

    /// Angular-frequency parameters of cavities A and B.
    pub fn cavities(&self) -> Result<(CavityParams, CavityParams)> {
        let u = self.unit_system();
        let a = to_angular(self.cavity_a, u).map_err(|e| Error::Config(format!("cavity_a: {e}")))?;
        let b = to_angular(self.cavity_b, u).map_err(|e| Error::Config(format!("cavity_b: {e}")))?;
        Ok((a, b))
    }

    /// Default window for cavity B with any overrides applied.
    pub fn timing_for(&self, params_b: &CavityParams) -> Timing {
        let d = Timing::for_cavity(params_b);
        Timing {
            t_start: self.timing.t_start.unwrap_or(d.t_start),
            dt_wait: self.timing.dt_wait.unwrap_or(d.dt_wait),
        }
    }
}

pub fn rates(g: f64, kappa: f64, gamma: f64) -> RatesOver2Pi {
    RatesOver2Pi {
        g,
        kappa,
        gamma,
        delta: 0.0,
    }
}
