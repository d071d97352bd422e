//! Algebraic core: Lie algebras and their matrix groups, Lie-algebra cohomology,
//! and Poisson brackets on phase spaces and coalgebras.

pub mod cocycle;
pub mod lie_core;
pub mod poisson;

pub use cocycle::{CocycleError, KForm};
pub use lie_core::{BilinearForm, GroupElement, GroupTag, LieAlgebraSpec, LieError};
pub use poisson::{BracketSign, PoissonError, PoissonStructure, ScalarField};
