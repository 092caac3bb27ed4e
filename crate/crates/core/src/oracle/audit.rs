//! Seeded comparison of every closed form against the ODE oracles.
//!
//! Each draw picks random cavity parameters, a frequency offset and an input
//! polarization, then checks emitter amplitudes, scatterer intracavity
//! amplitudes and the composed output channels against direct integration.
//! One row is reported per draw, carrying its worst component.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::effective::{integrate_effective, EffectiveSystem};
use super::time_domain::time_domain_scatter;
use crate::emitter::emitter_amplitudes;
use crate::exec::Execution;
use crate::scatterer::{intracavity_amplitudes, scatter_channel};
use crate::{CavityParams, Error, Result, C64};

/// Shipped absolute tolerance for closed form vs. oracle.
pub const AUDIT_TOLERANCE: f64 = 1e-7;
const ODE_TOL: f64 = 1e-12;
const TIMES: [f64; 6] = [0.0, 0.4, 1.1, 2.5, 4.0, 6.0];

#[derive(Debug, Clone, PartialEq)]
pub struct AuditRow {
    pub quantity: String,
    pub closed_form: f64,
    pub oracle: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl AuditRow {
    pub const HEADER: [&'static str; 7] = [
        "quantity",
        "closed_form",
        "oracle",
        "abs_err",
        "rel_err",
        "tolerance",
        "pass",
    ];

    pub fn record(&self) -> [String; 7] {
        [
            self.quantity.clone(),
            format!("{:.12e}", self.closed_form),
            format!("{:.12e}", self.oracle),
            format!("{:.6e}", self.abs_err),
            format!("{:.6e}", self.rel_err),
            format!("{:.1e}", self.tolerance),
            self.pass.to_string(),
        ]
    }
}

#[derive(Debug, Clone, Copy)]
struct Draw {
    params: CavityParams,
    delta_omega: f64,
    alpha: C64,
    beta: C64,
}

fn draw(rng: &mut ChaCha8Rng) -> Result<Draw> {
    let kappa = rng.random_range(0.5..5.0);
    let params = CavityParams::detuned(
        rng.random_range(0.0..3.0),
        kappa,
        rng.random_range(0.0..2.0),
        rng.random_range(-2.0..2.0),
    )?;
    let theta: f64 = rng.random_range(0.0..std::f64::consts::FRAC_PI_2);
    let phase: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    Ok(Draw {
        params,
        delta_omega: rng.random_range(-3.0..3.0),
        alpha: C64::new(theta.cos(), 0.0),
        beta: C64::from_polar(theta.sin(), phase),
    })
}

/// Largest discrepancy seen so far, with the values that produced it.
struct Worst {
    label: String,
    closed: C64,
    oracle: C64,
}

impl Worst {
    fn new() -> Self {
        Worst {
            label: String::from("none"),
            closed: C64::new(0.0, 0.0),
            oracle: C64::new(0.0, 0.0),
        }
    }

    fn err(&self) -> f64 {
        (self.closed - self.oracle).norm()
    }

    fn offer(&mut self, label: impl FnOnce() -> String, closed: C64, oracle: C64) {
        let e = (closed - oracle).norm();
        if e > self.err() || !e.is_finite() {
            self.label = label();
            self.closed = closed;
            self.oracle = oracle;
        }
    }
}

fn check_draw(d: &Draw) -> Result<Worst> {
    let mut worst = Worst::new();
    let p = d.params;

    let sol = integrate_effective(EffectiveSystem::Emitter(p), &TIMES, ODE_TOL)?;
    for (&t, y) in TIMES.iter().zip(&sol.states) {
        let a = emitter_amplitudes(&p, t)?.as_array();
        for (j, (x, z)) in a.iter().zip(y).enumerate() {
            worst.offer(|| format!("emitter[{j}](t={t})"), *x, *z);
        }
    }

    let sys = EffectiveSystem::Scatterer {
        params: p,
        delta_omega: d.delta_omega,
        alpha: d.alpha,
        beta: d.beta,
    };
    let sol = integrate_effective(sys, &TIMES, ODE_TOL)?;
    for (&t, y) in TIMES.iter().zip(&sol.states) {
        let a = intracavity_amplitudes(&p, d.delta_omega, t, d.alpha, d.beta)?.as_array();
        for (j, (x, z)) in a.iter().zip(y).enumerate() {
            worst.offer(|| format!("intracavity[{j}](t={t})"), *x, *z);
        }
    }

    // A monochromatic drive switched on at t = 0 reproduces the per-frequency
    // output once its carrier is removed.
    let w = d.delta_omega;
    let run = time_domain_scatter(
        |t| C64::from_polar(1.0, -w * t),
        &p,
        d.alpha,
        d.beta,
        &TIMES,
        ODE_TOL,
    )?;
    for (&t, o) in TIMES.iter().zip(&run.output) {
        let ch = scatter_channel(&p, w, t, d.alpha, d.beta)?;
        let carrier = C64::from_polar(1.0, w * t);
        for (j, (x, z)) in ch.out.iter().zip(o).enumerate() {
            worst.offer(|| format!("out[{j}](t={t})"), *x, z * carrier);
        }
    }
    Ok(worst)
}

fn row(index: usize, d: &Draw, outcome: Result<Worst>) -> AuditRow {
    let p = d.params;
    let tag = format!(
        "draw{index}:g={:.4},kappa={:.4},gamma={:.4},delta={:.4},dw={:.4}",
        p.g, p.kappa, p.gamma, p.delta, d.delta_omega
    );
    match outcome {
        Ok(w) => {
            let abs_err = w.err();
            let scale = w.oracle.norm();
            AuditRow {
                quantity: format!("{tag}:{}", w.label),
                closed_form: w.closed.norm(),
                oracle: scale,
                abs_err,
                rel_err: if scale > 0.0 { abs_err / scale } else { abs_err },
                tolerance: AUDIT_TOLERANCE,
                pass: abs_err <= AUDIT_TOLERANCE,
            }
        }
        Err(e) => AuditRow {
            quantity: format!("{tag}:error={e}"),
            closed_form: f64::NAN,
            oracle: f64::NAN,
            abs_err: f64::NAN,
            rel_err: f64::NAN,
            tolerance: AUDIT_TOLERANCE,
            pass: false,
        },
    }
}

/// Runs `n_draws` seeded comparisons. Rows come back in draw order whatever
/// the execution mode.
pub fn run_audit(seed: u64, n_draws: usize, exec: Execution) -> Result<Vec<AuditRow>> {
    if n_draws == 0 {
        return Err(Error::Config("audit needs at least one draw".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws = (0..n_draws).map(|_| draw(&mut rng)).collect::<Result<Vec<_>>>()?;
    Ok(exec.map_range(n_draws, |i| row(i, &draws[i], check_draw(&draws[i]))))
}
