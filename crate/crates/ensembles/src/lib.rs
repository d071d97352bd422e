//! Phase-space statistical mechanics: Liouville measure, microcanonical shells
//! sampled by Monte Carlo, entropies and the cotangent-bundle metric volume.

pub mod entropy;
pub mod measure;
pub mod phase_metric;
pub mod shell;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EnsembleError {
    #[error("invalid phase region: {0}")]
    InvalidRegion(String),
    #[error("invalid shell: {0}")]
    InvalidShell(String),
    #[error("no sample hit the shell")]
    EmptyShell,
    #[error("probabilities sum to {0}, not 1")]
    NotNormalized(f64),
    #[error("negative probability {0}")]
    NegativeProbability(f64),
    #[error("configuration metric is not symmetric positive definite")]
    SingularMetric,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Poisson(#[from] phasecraft_core::poisson::PoissonError),
}

pub use entropy::{entropy_continuous, entropy_discrete, entropy_family, normalize_density};
pub use measure::{liouville_volume, PhaseRegion};
pub use phase_metric::{phase_metric, phase_metric_volume};
pub use shell::{
    interval_probability, invariance_check, shell_probability, shell_samples, InvarianceReport, ShellEnsemble,
    ShellEstimate, BATCHES,
};
