//! Quasi-exactly-solvable (QES) matrix Schrödinger operators.
//!
//! A Schrödinger-type operator is quasi-exactly solvable when it maps a known
//! finite-dimensional space of functions into itself; restricting the operator
//! to that space turns part of the spectrum into an ordinary matrix eigenvalue
//! problem. This crate builds several families of matrix QES operators,
//! *proves* the invariance claims by exact rational (or quadratic-extension)
//! arithmetic, extracts the algebraic spectra from the restriction matrices,
//! and cross-validates every algebraic level against an independent
//! finite-difference discretization of the physical operator.
//!
//! Layout:
//!
//! * [`algebra`] — exact scalars, polynomials, differential operators with
//!   polynomial coefficients, matrices thereof, and rational linear algebra.
//! * [`spaces`] — dressed polynomial towers, exact invariance checking, and
//!   restriction matrices.
//! * [`sl2`] — the finite-dimensional sl(2) representation, the generators
//!   `Q_+`, `Q_0`, the triangular change of basis `P`, and the
//!   Clebsch–Gordan decomposition checks.
//! * [`anharmonic`] — the coupled anharmonic-oscillator family: gauged
//!   operator, physical potential, spectra, wavefunction reconstruction.
//! * [`elliptic`] — Jacobi elliptic functions, the complete elliptic
//!   integral, and the symbolic prefactor table for `x = sn²`.
//! * [`lame`] — Lamé-type matrix operators: the 2×2 coupling catalog, the
//!   3×3 constraint solver, trigonometric limits, and no-go scans.
//! * [`numeric`] — floating-point eigensolvers and finite-difference
//!   Schrödinger oracles (line and periodic).
//! * [`cli`] — the `qeslab` command-line surface.

pub mod algebra;
pub mod anharmonic;
pub mod cli;
pub mod elliptic;
pub mod lame;
pub mod numeric;
pub mod sl2;
pub mod spaces;

pub use algebra::{DiffOp, MatDiffOp, Poly, Scalar};
pub use spaces::{DressedSpace, InvarianceReport, RestrictionMatrix, Tower};

/// Version tag stamped on every JSON document the CLI emits.
pub const SCHEMA: &str = "qeslab/1";
