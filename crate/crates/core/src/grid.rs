//! Uniform symmetric frequency grids with composite Simpson weights.

use crate::{Error, Result, C64};

/// Samples of the offset `δ_ω = ω − ω_c` on `[−W, W]` with Simpson weights.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyGrid {
    samples: Vec<f64>,
    weights: Vec<f64>,
    half_width: f64,
}

/// Builds a symmetric Simpson grid with `n_points` samples on `[−W, W]`.
///
/// `n_points` must be odd and at least 3.
pub fn make_grid(half_width: f64, n_points: usize) -> Result<FrequencyGrid> {
    if !(half_width.is_finite() && half_width > 0.0) {
        return Err(Error::Config(format!(
            "grid half-width must be positive, got {half_width}"
        )));
    }
    if n_points < 3 || n_points.is_multiple_of(2) {
        return Err(Error::Config(format!(
            "grid needs an odd number of points >= 3, got {n_points}"
        )));
    }
    let m = (n_points - 1) / 2;
    let h = half_width / m as f64;
    // Index from the centre so the grid is exactly symmetric.
    let samples = (0..n_points)
        .map(|k| (k as f64 - m as f64) * h)
        .collect();
    Ok(FrequencyGrid {
        samples,
        weights: simpson_weights(n_points, h),
        half_width,
    })
}

/// Composite Simpson weights for `n` (odd) equally spaced nodes of spacing `h`.
pub fn simpson_weights(n: usize, h: f64) -> Vec<f64> {
    debug_assert!(n >= 3 && n % 2 == 1);
    (0..n)
        .map(|k| {
            let c = if k == 0 || k == n - 1 {
                1.0
            } else if k % 2 == 1 {
                4.0
            } else {
                2.0
            };
            c * h / 3.0
        })
        .collect()
}

/// Simpson integral of uniformly sampled real data, summed in index order.
pub fn simpson(values: &[f64], h: f64) -> f64 {
    simpson_weights(values.len(), h)
        .iter()
        .zip(values)
        .map(|(w, v)| w * v)
        .sum()
}

impl FrequencyGrid {
    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn n_points(&self) -> usize {
        self.samples.len()
    }

    pub fn spacing(&self) -> f64 {
        self.samples[1] - self.samples[0]
    }

    /// Same half-width, twice the resolution (`2n − 1` points).
    pub fn refined(&self) -> FrequencyGrid {
        make_grid(self.half_width, 2 * self.n_points() - 1).expect("refining a valid grid")
    }

    /// Weighted sum `Σ w_k f_k` in fixed index order.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        assert_eq!(values.len(), self.samples.len());
        self.weights.iter().zip(values).map(|(w, v)| w * v).sum()
    }

    pub fn integrate_complex(&self, values: &[C64]) -> C64 {
        assert_eq!(values.len(), self.samples.len());
        self.weights
            .iter()
            .zip(values)
            .fold(C64::new(0.0, 0.0), |acc, (w, v)| acc + v * *w)
    }
}

/// A complex spectral amplitude sampled on a [`FrequencyGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralFunction {
    grid: FrequencyGrid,
    values: Vec<C64>,
    l2_norm: f64,
    normalized: bool,
}

impl SpectralFunction {
    pub fn new(grid: FrequencyGrid, values: Vec<C64>) -> Self {
        assert_eq!(grid.n_points(), values.len());
        let l2_norm = l2(&grid, &values);
        SpectralFunction {
            grid,
            values,
            l2_norm,
            normalized: false,
        }
    }

    /// Rescales so that `∫|f|² dδ = 1` on the grid.
    pub fn normalize(mut self) -> Result<Self> {
        if !(self.l2_norm > 0.0) {
            return Err(Error::InternalConsistency(
                "cannot normalize a spectral function with zero weight".into(),
            ));
        }
        let scale = 1.0 / self.l2_norm.sqrt();
        for v in &mut self.values {
            *v *= scale;
        }
        self.l2_norm = l2(&self.grid, &self.values);
        self.normalized = true;
        Ok(self)
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    /// Cached `∫|f|² dδ` (squared L2 norm).
    pub fn l2_norm(&self) -> f64 {
        self.l2_norm
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Multiplies every sample by `e^{iφ}`.
    pub fn with_global_phase(mut self, phi: f64) -> Self {
        let ph = C64::from_polar(1.0, phi);
        for v in &mut self.values {
            *v *= ph;
        }
        self.l2_norm = l2(&self.grid, &self.values);
        self
    }
}

fn l2(grid: &FrequencyGrid, values: &[C64]) -> f64 {
    let sq: Vec<f64> = values.iter().map(|v| v.norm_sqr()).collect();
    grid.integrate(&sq)
}
