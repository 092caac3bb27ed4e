//! Numerically stable complex exponential helpers.
//!
//! The closed-form amplitudes are built from `e^{lt} sinh(ht)/h`,
//! `e^{lt} cosh(ht)` and their time integrals. All helpers are even in `h`,
//! so the branch of the complex square root that produced `h` does not
//! matter, and they stay finite as `h → 0`.

use crate::C64;

/// Below this `|h t|` the `sinh(ht)/h` factor switches to its Taylor series.
pub const SINHC_CROSSOVER: f64 = 1e-4;

/// Below this `|h t|` the integrated `sinh` term switches to moment series.
const INT_SINHC_CROSSOVER: f64 = 1e-3;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// `e^{l t} sinh(h t) / h`.
pub fn exp_sinhc(l: C64, h: C64, t: f64) -> C64 {
    let ht = h * t;
    if ht.norm() < SINHC_CROSSOVER {
        let z2 = ht * ht;
        (l * t).exp() * t * (ONE + z2 / 6.0 + z2 * z2 / 120.0)
    } else {
        // Split the exponentials so large t never overflows cosh/sinh.
        (((l + h) * t).exp() - ((l - h) * t).exp()) / (h * 2.0)
    }
}

/// `e^{l t} cosh(h t)`.
pub fn exp_cosh(l: C64, h: C64, t: f64) -> C64 {
    (((l + h) * t).exp() + ((l - h) * t).exp()) * 0.5
}

/// `φ_k(z) = ∫₀¹ u^k e^{z u} du`.
pub fn phi(k: u32, z: C64) -> C64 {
    if z.norm() < 4.0 {
        // Σ zⁿ / (n! (n + k + 1))
        let mut term = ONE;
        let mut sum = ZERO;
        for n in 0..80u32 {
            let contrib = term / f64::from(n + k + 1);
            sum += contrib;
            if contrib.norm() < 1e-18 * sum.norm() {
                break;
            }
            term = term * z / f64::from(n + 1);
        }
        sum
    } else {
        // Upward recursion φ_k = (e^z − k φ_{k−1}) / z is stable for |z| > k.
        let ez = z.exp();
        let mut p = (ez - ONE) / z;
        for j in 1..=k {
            p = (ez - p * f64::from(j)) / z;
        }
        p
    }
}

/// `∫₀ᵗ s^k e^{p s} ds`.
pub fn moment(k: u32, p: C64, t: f64) -> C64 {
    phi(k, p * t) * t.powi(k as i32 + 1)
}

/// `∫₀ᵗ e^{p s} ds`, exact as `p → 0`.
pub fn int_exp(p: C64, t: f64) -> C64 {
    moment(0, p, t)
}

/// `∫₀ᵗ e^{l s} sinh(h s) / h ds`.
pub fn int_exp_sinhc(l: C64, h: C64, t: f64) -> C64 {
    let ht = (h * t).norm();
    if ht < INT_SINHC_CROSSOVER {
        let h2 = h * h;
        moment(1, l, t) + h2 * moment(3, l, t) / 6.0 + h2 * h2 * moment(5, l, t) / 120.0
    } else {
        (int_exp(l + h, t) - int_exp(l - h, t)) / (h * 2.0)
    }
}

/// `∫₀ᵗ e^{l s} cosh(h s) ds`.
pub fn int_exp_cosh(l: C64, h: C64, t: f64) -> C64 {
    (int_exp(l + h, t) + int_exp(l - h, t)) * 0.5
}
