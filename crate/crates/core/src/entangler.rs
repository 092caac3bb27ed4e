//! Heralded two-atom state built from the emitted photon and its reflection
//! off cavity B.
//!
//! After reflection the atom-atom-photon state lives on three channels,
//! `|g_L g_L L⟩`, `|g_R g_L R⟩` and `|g_L g_R R⟩` (atom A first). A click on
//! the reflected photon projects the atoms onto the photon-traced mixture of
//! these channels; the singlet overlap of that mixture is the fidelity.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use serde::{Deserialize, Serialize};

use crate::emitter::{emission_probability, emitter_grid, spectral_amplitude};
use crate::grid::{simpson_weights, FrequencyGrid, SpectralFunction};
use crate::scatterer::{channel_with_roots, scatter_roots, ScatterRoots};
use crate::{CavityParams, Error, Execution, Result, C64};

/// Below this heralding probability the conditional fidelity is undefined.
pub const MIN_HERALD_PROBABILITY: f64 = 1e-12;

/// Frequency-resolved channel amplitudes at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct TripartiteState {
    pub grid: FrequencyGrid,
    pub a1: Vec<C64>,
    pub a2: Vec<C64>,
    pub a3: Vec<C64>,
    pub t: f64,
}

impl TripartiteState {
    /// `∫(|A1|² + |A2|² + |A3|²) dδ`.
    pub fn norm(&self) -> f64 {
        let sq: Vec<f64> = (0..self.a1.len())
            .map(|i| self.a1[i].norm_sqr() + self.a2[i].norm_sqr() + self.a3[i].norm_sqr())
            .collect();
        self.grid.integrate(&sq)
    }

    /// `∫|A3 − A2|²/2 dδ`, the weight on the two-atom singlet.
    pub fn singlet_weight(&self) -> f64 {
        let sq: Vec<f64> = self
            .a2
            .iter()
            .zip(&self.a3)
            .map(|(x, y)| (y - x).norm_sqr() / 2.0)
            .collect();
        self.grid.integrate(&sq)
    }
}

/// Precomputed per-frequency data reused across times.
#[derive(Debug, Clone)]
pub struct Synthesizer {
    spectrum: SpectralFunction,
    params_b: CavityParams,
    roots: Vec<ScatterRoots>,
    alpha: C64,
    beta: C64,
}

impl Synthesizer {
    pub fn new(spectrum: SpectralFunction, params_b: CavityParams, alpha: C64, beta: C64) -> Result<Self> {
        params_b.validate()?;
        let roots = spectrum
            .grid()
            .samples()
            .iter()
            .map(|&d| scatter_roots(&params_b, d))
            .collect();
        Ok(Synthesizer {
            spectrum,
            params_b,
            roots,
            alpha,
            beta,
        })
    }

    /// Entangled input `(|L⟩ + |R⟩)/√2` with `s̃` computed for cavity A.
    pub fn for_cavities(params_a: &CavityParams, params_b: &CavityParams, grid: &FrequencyGrid) -> Result<Self> {
        let s = spectral_amplitude(params_a, grid)?;
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        Self::new(s, *params_b, h, h)
    }

    pub fn spectrum(&self) -> &SpectralFunction {
        &self.spectrum
    }

    pub fn grid(&self) -> &FrequencyGrid {
        self.spectrum.grid()
    }

    /// Amplitudes `s̃·out_k·e^{−iδt}` for `k = 1, 2, 4` at grid index `i`.
    fn channels(&self, i: usize, t: f64) -> Result<[C64; 3]> {
        let r = &self.roots[i];
        let ch = channel_with_roots(&self.params_b, r, t, self.alpha, self.beta)?;
        let w = self.spectrum.values()[i] * C64::from_polar(1.0, -r.delta_omega * t);
        Ok([w * ch.out[0], w * ch.out[1], w * ch.out[3]])
    }

    pub fn state(&self, t: f64) -> Result<TripartiteState> {
        let n = self.roots.len();
        let (mut a1, mut a2, mut a3) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
        for i in 0..n {
            let [x, y, z] = self.channels(i, t)?;
            a1.push(x);
            a2.push(y);
            a3.push(z);
        }
        Ok(TripartiteState {
            grid: self.grid().clone(),
            a1,
            a2,
            a3,
            t,
        })
    }

    /// Reflected field at time `t` on the three channels,
    /// `cc_k(t) = (1/√2π) ∫ A_k(δ, t) dδ`.
    pub fn click_amplitudes(&self, t: f64) -> Result<[C64; 3]> {
        let w = self.grid().weights();
        let mut acc = [C64::new(0.0, 0.0); 3];
        for (i, wi) in w.iter().enumerate() {
            let a = self.channels(i, t)?;
            for k in 0..3 {
                acc[k] += a[k] * *wi;
            }
        }
        let s = 1.0 / (2.0 * PI).sqrt();
        Ok(acc.map(|c| c * s))
    }
}

/// Which fidelity and probability definition produced a [`HeraldResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    /// Photon-traced state `A_k(δ, t)` at a single time `t`.
    FrequencyResolved,
    /// Clicks integrated over the detection window `[t_start, t_start + Δt_wait]`.
    DetectionWindow,
}

impl Convention {
    pub fn name(self) -> &'static str {
        match self {
            Convention::FrequencyResolved => "frequency-resolved",
            Convention::DetectionWindow => "detection-window",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeraldResult {
    pub p: f64,
    pub fidelity: f64,
    pub p_overall: f64,
    pub t: f64,
    pub convention: Convention,
}

fn finish(p: f64, singlet: f64, p_cav: f64, t: f64, convention: Convention) -> Result<HeraldResult> {
    if !(p >= MIN_HERALD_PROBABILITY) {
        return Err(Error::UndefinedFidelity { p });
    }
    // A click probability can't exceed one. The frequency-resolved weight N(t)
    // can, briefly: cavity B's switch-on transient overshoots unit reflection.
    if convention == Convention::DetectionWindow && p > 1.0 + 1e-6 {
        return Err(Error::InternalConsistency(format!("click probability {p} above 1")));
    }
    Ok(HeraldResult {
        p,
        fidelity: (singlet / p).clamp(0.0, 1.0),
        p_overall: p_cav * p,
        t,
        convention,
    })
}

/// Heralding probability `N(t)` and conditional singlet fidelity of `state`.
pub fn herald(state: &TripartiteState, p_cav: f64) -> Result<HeraldResult> {
    finish(
        state.norm(),
        state.singlet_weight(),
        p_cav,
        state.t,
        Convention::FrequencyResolved,
    )
}

pub fn synthesize(
    params_a: &CavityParams,
    params_b: &CavityParams,
    t: f64,
    grid: &FrequencyGrid,
    alpha: C64,
    beta: C64,
) -> Result<TripartiteState> {
    let s = spectral_amplitude(params_a, grid)?;
    Synthesizer::new(s, *params_b, alpha, beta)?.state(t)
}

/// Heralding statistics for clicks in `[t0, t1]`, integrated with Simpson's
/// rule on `n_nodes` time nodes.
pub fn herald_window(
    syn: &Synthesizer,
    p_cav: f64,
    t0: f64,
    t1: f64,
    n_nodes: usize,
    exec: Execution,
) -> Result<HeraldResult> {
    if n_nodes < 3 || n_nodes.is_multiple_of(2) {
        return Err(Error::Config(format!("window needs an odd node count >= 3, got {n_nodes}")));
    }
    if !(t0 >= 0.0 && t1 > t0 && t1.is_finite()) {
        return Err(Error::Domain { what: "window end", value: t1 });
    }
    let h = (t1 - t0) / (n_nodes - 1) as f64;
    let cc = exec
        .map_range(n_nodes, |k| syn.click_amplitudes(t0 + k as f64 * h))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let w = simpson_weights(n_nodes, h);
    let mut p = 0.0;
    let mut singlet = 0.0;
    for (c, wk) in cc.iter().zip(&w) {
        p += wk * c.iter().map(|x| x.norm_sqr()).sum::<f64>();
        singlet += wk * (c[2] - c[1]).norm_sqr() / 2.0;
    }
    finish(p, singlet, p_cav, t1, Convention::DetectionWindow)
}

/// Heralding window measured from the photon's arrival at cavity B.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub t_start: f64,
    pub dt_wait: f64,
}

impl Timing {
    /// `t_start` in units of `2/κ₂`.
    pub const START: f64 = 2.05;
    /// `Δt_wait` in units of `2/κ₂`.
    pub const WAIT: f64 = 14.95;

    pub fn for_cavity(params_b: &CavityParams) -> Self {
        let unit = 2.0 / params_b.kappa;
        Timing {
            t_start: Self::START * unit,
            dt_wait: Self::WAIT * unit,
        }
    }

    pub fn t_end(&self) -> f64 {
        self.t_start + self.dt_wait
    }
}

/// Frequency grid relative to the emitter linewidth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSettings {
    pub points: usize,
    pub width_factor: f64,
}

impl Default for GridSettings {
    fn default() -> Self {
        GridSettings {
            points: 4001,
            width_factor: 40.0,
        }
    }
}

impl GridSettings {
    pub fn grid_for(&self, params_a: &CavityParams) -> Result<FrequencyGrid> {
        emitter_grid(params_a, self.width_factor, self.points)
    }

    pub fn refined(&self) -> Self {
        GridSettings {
            points: 2 * self.points - 1,
            ..*self
        }
    }
}

/// Both conventions evaluated for one pair of cavities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioOutcome {
    pub p_cav: f64,
    pub timing: Timing,
    pub frequency_resolved: HeraldResult,
    pub detection_window: HeraldResult,
}

/// Default number of Simpson nodes across the detection window.
pub const WINDOW_NODES: usize = 401;

pub fn evaluate_scenario(
    params_a: &CavityParams,
    params_b: &CavityParams,
    grid: GridSettings,
    timing: Timing,
    exec: Execution,
) -> Result<ScenarioOutcome> {
    let g = grid.grid_for(params_a)?;
    let syn = Synthesizer::for_cavities(params_a, params_b, &g)?;
    let p_cav = emission_probability(params_a)?;
    let state = syn.state(timing.t_end())?;
    Ok(ScenarioOutcome {
        p_cav,
        timing,
        frequency_resolved: herald(&state, p_cav)?,
        detection_window: herald_window(&syn, p_cav, timing.t_start, timing.t_end(), WINDOW_NODES, exec)?,
    })
}

/// Frequency-resolved heralding statistics at each time in `t_grid`.
pub fn fidelity_vs_time(
    params_a: &CavityParams,
    params_b: &CavityParams,
    t_grid: &[f64],
    grid: &FrequencyGrid,
    exec: Execution,
) -> Result<Vec<HeraldResult>> {
    let syn = Synthesizer::for_cavities(params_a, params_b, grid)?;
    let p_cav = emission_probability(params_a)?;
    exec.map(t_grid, |&t| syn.state(t).and_then(|s| herald(&s, p_cav)))
        .into_iter()
        .collect()
}

/// One point of the γ₁ sweep behind the fidelity and probability figures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaSweepPoint {
    pub gamma1: f64,
    pub gamma2: f64,
    pub p_cav: f64,
    pub herald: HeraldResult,
}

/// Sweeps `γ₁` with `g₁ = (κ₁ − γ₁)/(8√2)` and evaluates the heralded state
/// at `t_start + Δt_wait`.
pub fn herald_prob_vs_gamma(
    kappa1: f64,
    params_b: &CavityParams,
    gamma1_grid: &[f64],
    gamma2: f64,
    grid: GridSettings,
    exec: Execution,
) -> Result<Vec<GammaSweepPoint>> {
    let b = params_b.with_gamma(gamma2);
    b.validate()?;
    let timing = Timing::for_cavity(&b);
    exec.map(gamma1_grid, |&gamma1| {
        let a = CavityParams::new(CavityParams::compromise_coupling(kappa1, gamma1), kappa1, gamma1)?;
        let g = grid.grid_for(&a)?;
        let syn = Synthesizer::for_cavities(&a, &b, &g)?;
        let p_cav = emission_probability(&a)?;
        let herald = herald(&syn.state(timing.t_end())?, p_cav)?;
        Ok(GammaSweepPoint {
            gamma1,
            gamma2,
            p_cav,
            herald,
        })
    })
    .into_iter()
    .collect()
}
