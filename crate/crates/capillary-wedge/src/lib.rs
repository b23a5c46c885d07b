//! Steady free surfaces of a heavy fluid held in a wedge between two inclined walls.
//!
//! The solver shoots on a one-parameter family of exact profiles of the Euler–Lagrange
//! equation until the enclosed area matches the prescribed volume. A discrete variational
//! minimiser in [`oracle`] provides an independent check.

pub mod error;
pub mod case_opposite;
pub mod case_same;
pub mod curve;
pub mod model;
pub mod options;
pub mod oracle;
pub mod parallel;
pub mod profile;
pub mod quadrature;
pub mod roots;
pub mod solver;
pub mod sweep;

pub use error::{Error, Result};
pub use model::{ContactConfig, Dominant, FluidParams, RegimeTag, Side};
pub use parallel::Execution;
pub use options::SolveOptions;
pub use solver::{solve, Branch, Solution, SteadyState};
