//! Exact equilibria of Fisher markets with budget-additive (capped linear)
//! utilities.
//!
//! A buyer `i` with budget `M_i`, cap `c_i` and per-unit utilities `u_ij`
//! derives utility `min(c_i, Σ_j u_ij x_ij)` from a bundle. Equilibria of such
//! markets form a lattice when restricted to *modest MBB* equilibria, where
//! buyers buy only maximum bang-per-buck goods and never spend beyond what
//! their cap requires. This crate computes the top of that lattice with a
//! descending-price algorithm, the bottom by postprocessing, meets and joins
//! of arbitrary pairs, and checks candidate equilibria exactly.
//!
//! All arithmetic is over arbitrary-precision rationals.
//!
//! ```
//! use capped_fisher::{solve_max_revenue, verify, Extended, Market, rational::int};
//!
//! let market = Market::new(
//!     vec![int(3), int(1)],
//!     vec![Extended::Finite(int(1)), Extended::Infinite],
//!     vec![vec![int(5), int(1)], vec![int(2), int(1)]],
//! )?;
//! let eq = solve_max_revenue(&market)?.equilibrium;
//! assert_eq!(eq.prices[0].to_string(), "10/13");
//! assert!(verify(&market, &eq)?.all_ok());
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod cli;
pub mod descend;
pub mod equilibrium;
pub mod flow;
pub mod generate;
pub mod io;
pub mod lattice;
pub mod market;
pub mod minrev;
pub mod oracle;
pub mod rational;
pub mod verify;

pub use descend::{solve_max_revenue, EventKind, EventRecord, Solution, SolveError, SolveStats, Solver};
pub use equilibrium::Equilibrium;
pub use lattice::{join, meet, partition, LatticeError, PricePartition};
pub use market::{Market, MarketError};
pub use minrev::{lowering_steps, min_revenue, MinRevenueError};
pub use rational::{Extended, Rational};
pub use verify::{verify, Condition, VerificationReport, Violation, VerifyError};
