//! Single-excitation cavity-QED simulator for heralded entanglement between
//! two distant Λ atoms.
//!
//! An excited atom in cavity A emits a photon whose polarization is entangled
//! with the atom's two ground states. The photon is reflected off cavity B,
//! where it swaps its polarization onto atom B. A detector click on the
//! reflected photon heralds a singlet between the two atoms.
//!
//! The crate is organised bottom-up:
//!
//! * [`params`], [`grid`], [`special`], [`exec`]: shared types, unit
//!   conversion, quadrature, stable complex helpers and the parallel/sequential
//!   execution switch.
//! * [`emitter`]: closed-form amplitudes and spectrum of cavity A.
//! * [`scatterer`]: frequency-resolved reflection off cavity B.
//! * [`entangler`]: the tripartite atom-atom-photon state and heralding
//!   statistics.
//! * [`oracle`]: independent numerical validators (adaptive ODE integration,
//!   a discretized Hermitian bath, and a cascaded time-domain simulation).
//! * [`cli`]: figure regeneration, the ⁸⁷Rb scenario and the oracle audit.
//!
//! All rates are angular frequencies and the dynamics are written in a frame
//! rotating at the cavity resonance, so `omega_c = 0` internally.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod emitter;
pub mod entangler;
mod error;
pub mod exec;
pub mod grid;
pub mod oracle;
pub mod params;
pub mod scatterer;
pub mod special;

pub use error::{Error, Result};
pub use exec::Execution;
pub use grid::{make_grid, FrequencyGrid, SpectralFunction};
pub use params::{to_angular, CavityParams, PhysicalUnits, RatesOver2Pi, UnitMode};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
