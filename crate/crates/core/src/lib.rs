//! Exact analysis of the class-size profit model.
//!
//! A school with `Z` students chooses class sizes `n_1, ..., n_m` to
//! maximise `V * sum n_i p^{n_i} - m W`. The crate provides:
//!
//! - [`model`]: instances, class-size vectors and both profit functions;
//! - [`solver`]: a partition oracle and a nearly-equal-vector solver;
//! - [`polynomials`]: the marginal-value polynomials, their crossings and
//!   exact integer identities;
//! - [`regions`]: classification of the `(p, W)` plane and atlas output;
//! - [`multitype`]: schools with several student types;
//! - [`suites`]: invariant sweeps shared by tests and the CLI.

pub mod error;
pub mod format;
pub mod inequalities;
pub mod model;
pub mod multitype;
pub mod polynomials;
pub mod regions;
pub mod solver;
pub mod suites;

pub use error::{Error, Result};
pub use model::{
    evaluate_lazear, evaluate_output, evaluate_profit, lazear_dominates, ClassSizeVector, Instance,
    LazearComparison, LazearReduced, SolveResult,
};
