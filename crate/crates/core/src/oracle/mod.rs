//! Independent cross-checks for the exact solver.
//!
//! Neither oracle shares code paths with the combinatorial algorithms they
//! check: the equilibrium utilities come from a floating-point interior-point
//! solve of the convex program, and balanced flows come from explicit
//! surplus targets followed by path rerouting.

mod eg;
mod equalize;

use thiserror::Error;

pub use eg::{solve_eg_numeric, EgSolution};
pub use equalize::{balanced_surplus_targets, equalize_balanced, equalize_from};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("tolerance must be at least 1e-9")]
    Tolerance,
    #[error("interior-point solve did not converge after {0} Newton steps")]
    NonConvergence(usize),
    #[error("network cannot route every budget")]
    NotSaturable,
    #[error("rerouting did not finish within {0} augmentations")]
    IterationLimit(usize),
    #[error("rerouted flow is not balanced")]
    NotBalanced,
}
