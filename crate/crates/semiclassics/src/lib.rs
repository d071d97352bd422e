//! Phase-space quantum kit on uniform power-of-two grids: Wigner functions and
//! marginals, the Moyal star product, WKB states, free propagation and stationary values.

pub mod grid;
pub mod propagation;
pub mod star;
pub mod stat;
pub mod states;
pub mod wigner;
pub mod wkb;

use thiserror::Error;

pub use num_complex::Complex64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SemiclassicsError {
    #[error("grid too coarse: {fraction:e} of the weight sits in the guard band")]
    GridTooCoarse { fraction: f64 },
    #[error("operands live on different grids")]
    GridMismatch,
    #[error("grid size {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("turning point: Van Vleck determinant {0:e}")]
    TurningPoint(f64),
    #[error("propagator is singular at zero time")]
    ZeroTime,
    #[error("no critical point found")]
    NoCriticalPoint,
}

pub use grid::GridWavefunction;
pub use propagation::{free_propagator, free_phase, propagate_free, propagate_free_periodic};
pub use star::{phase_integral, star_product, star_product_naive};
pub use stat::{compose_characteristic, stat_values, StatPoint};
pub use wigner::{cross_wigner, marginals, wigner_transform, PhaseGrid};
pub use wkb::{van_vleck, wkb_wavefunction};
