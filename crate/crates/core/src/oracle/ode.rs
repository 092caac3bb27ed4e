//! Adaptive Dormand–Prince 5(4) integrator for complex linear systems.

use crate::{Error, Result, C64};

/// Tolerances and limits for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            rtol: 1e-11,
            atol: 1e-13,
            h_max: f64::INFINITY,
            max_steps: 5_000_000,
        }
    }
}

impl OdeOptions {
    pub fn with_tol(rtol: f64, atol: f64) -> Self {
        OdeOptions {
            rtol,
            atol,
            ..Default::default()
        }
    }
}

/// States recorded at the requested output times.
#[derive(Debug, Clone, PartialEq)]
pub struct OdeSolution {
    pub times: Vec<f64>,
    pub states: Vec<Vec<C64>>,
    pub rtol: f64,
    pub atol: f64,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

impl OdeSolution {
    pub fn last(&self) -> &[C64] {
        self.states.last().expect("solution has at least one sample")
    }
}

// Dormand–Prince tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// Difference between the 5th- and 4th-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Integrates `y' = f(t, y)` from `t0`, recording the state at every entry of
/// `sample_times` (nondecreasing, all `>= t0`).
pub fn integrate<F>(
    f: F,
    y0: &[C64],
    t0: f64,
    sample_times: &[f64],
    opts: OdeOptions,
) -> Result<OdeSolution>
where
    F: Fn(f64, &[C64], &mut [C64]),
{
    if !(opts.rtol > 0.0 && opts.atol > 0.0) {
        return Err(Error::Config("ODE tolerances must be positive".into()));
    }
    if sample_times.windows(2).any(|w| w[1] < w[0]) || sample_times.first().is_some_and(|&s| s < t0) {
        return Err(Error::Config("sample times must be sorted and >= t0".into()));
    }
    let n = y0.len();
    let mut y = y0.to_vec();
    let mut t = t0;
    let zero = C64::new(0.0, 0.0);
    let mut k = vec![vec![zero; n]; 7];
    let mut tmp = vec![zero; n];
    let mut y_new = vec![zero; n];

    let mut times = Vec::with_capacity(sample_times.len());
    let mut states = Vec::with_capacity(sample_times.len());
    let mut accepted = 0usize;
    let mut rejected = 0usize;

    f(t, &y, &mut k[0]);
    let mut h = initial_step(&y, &k[0], opts).min(opts.h_max);
    let mut steps = 0usize;

    for &target in sample_times {
        while t < target {
            steps += 1;
            if steps > opts.max_steps {
                return Err(Error::StepUnderflow { t, h });
            }
            let remaining = target - t;
            let last = h >= remaining;
            let h_try = if last { remaining } else { h };
            if h_try <= 1e-14 * t.abs().max(1.0) && !last {
                return Err(Error::StepUnderflow { t, h: h_try });
            }

            stage(&mut tmp, &y, h_try, &[(A21, &k[0])]);
            f(t + C2 * h_try, &tmp, &mut k[1]);
            stage(&mut tmp, &y, h_try, &[(A31, &k[0]), (A32, &k[1])]);
            f(t + C3 * h_try, &tmp, &mut k[2]);
            stage(&mut tmp, &y, h_try, &[(A41, &k[0]), (A42, &k[1]), (A43, &k[2])]);
            f(t + C4 * h_try, &tmp, &mut k[3]);
            stage(
                &mut tmp,
                &y,
                h_try,
                &[(A51, &k[0]), (A52, &k[1]), (A53, &k[2]), (A54, &k[3])],
            );
            f(t + C5 * h_try, &tmp, &mut k[4]);
            stage(
                &mut tmp,
                &y,
                h_try,
                &[(A61, &k[0]), (A62, &k[1]), (A63, &k[2]), (A64, &k[3]), (A65, &k[4])],
            );
            f(t + h_try, &tmp, &mut k[5]);
            stage(
                &mut y_new,
                &y,
                h_try,
                &[(B1, &k[0]), (B3, &k[2]), (B4, &k[3]), (B5, &k[4]), (B6, &k[5])],
            );
            let t_new = if last { target } else { t + h_try };
            f(t_new, &y_new, &mut k[6]);

            let mut err_sq = 0.0;
            for i in 0..n {
                let e = (k[0][i] * E1 + k[2][i] * E3 + k[3][i] * E4 + k[4][i] * E5 + k[5][i] * E6
                    + k[6][i] * E7)
                    * h_try;
                let sc = opts.atol + opts.rtol * y[i].norm().max(y_new[i].norm());
                err_sq += (e.norm() / sc).powi(2);
            }
            let err = (err_sq / n.max(1) as f64).sqrt();

            if err <= 1.0 {
                accepted += 1;
                t = t_new;
                std::mem::swap(&mut y, &mut y_new);
                k.swap(0, 6);
                let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                // Do not let a short final step shrink the step carried forward.
                h = (h.max(h_try) * fac).min(opts.h_max);
            } else {
                rejected += 1;
                h = h_try * (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
                if h <= 1e-14 * t.abs().max(1.0) {
                    return Err(Error::StepUnderflow { t, h });
                }
            }
        }
        times.push(target);
        states.push(y.clone());
    }

    Ok(OdeSolution {
        times,
        states,
        rtol: opts.rtol,
        atol: opts.atol,
        accepted_steps: accepted,
        rejected_steps: rejected,
    })
}

fn stage(out: &mut [C64], y: &[C64], h: f64, terms: &[(f64, &Vec<C64>)]) {
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = C64::new(0.0, 0.0);
        for (a, k) in terms {
            acc += k[i] * *a;
        }
        *o = y[i] + acc * h;
    }
}

fn initial_step(y: &[C64], dy: &[C64], opts: OdeOptions) -> f64 {
    let n = y.len().max(1) as f64;
    let mut d0 = 0.0;
    let mut d1 = 0.0;
    for (a, b) in y.iter().zip(dy) {
        let sc = opts.atol + opts.rtol * a.norm();
        d0 += (a.norm() / sc).powi(2);
        d1 += (b.norm() / sc).powi(2);
    }
    let (d0, d1) = ((d0 / n).sqrt(), (d1 / n).sqrt());
    if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    }
}
