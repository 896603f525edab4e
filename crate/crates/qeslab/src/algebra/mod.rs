//! Exact arithmetic layer: scalars over ℚ and ℚ(√d), dense univariate
//! polynomials, differential operators with polynomial coefficients, and
//! matrices of such operators.
//!
//! Every invariance claim in this crate is an *equality* of operators, so the
//! whole verification path runs on exact arithmetic; floating point only
//! appears downstream in [`crate::numeric`].

mod diffop;
mod linalg;
mod matop;
mod poly;
mod scalar;

pub use diffop::DiffOp;
pub use linalg::{charpoly, solve_linear, LinearSolution, ScalarMat};
pub use matop::MatDiffOp;
pub use poly::Poly;
pub use scalar::{Rat, Scalar};
