//! Scenario files in, CSV/JSON/raw artifacts and a hashed manifest out.

pub mod commands;
pub mod output;
pub mod scenario;
pub mod selftest;

use std::path::PathBuf;

use phasecraft_core::{CocycleError, LieError};
use phasecraft_dynamics::affine_body::AffineError;
use phasecraft_dynamics::DynamicsError;
use phasecraft_ensembles::EnsembleError;
use phasecraft_semiclassics::SemiclassicsError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}:{line}:{column}: {message}")]
    Schema { path: PathBuf, line: usize, column: usize, message: String },
    #[error("{0}")]
    Invalid(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("SingularConfiguration at t = {t}: {source}")]
    Collision { t: f64, source: AffineError },
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    Cocycle(#[from] CocycleError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Affine(#[from] AffineError),
    #[error(transparent)]
    Ensemble(#[from] EnsembleError),
    #[error(transparent)]
    Semiclassics(#[from] SemiclassicsError),
}

impl CliError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}
