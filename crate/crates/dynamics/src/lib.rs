//! Rigid and affine body dynamics on Lie groups.

pub mod affine_body;
pub mod euler_dynamics;

pub use euler_dynamics::{BodyState, Chirality, DynamicsError, InvariantModel, Method, Potential, Trajectory};
