//! Floating-point layer: dense eigensolver for restriction matrices and the
//! independent finite-difference Schrödinger oracles that cross-validate
//! every algebraic eigenvalue.

mod band;
mod eig;
mod fd;

pub use band::{bisect_eigenvalues, jacobi_eigenvalues, CorrectedBand, SymBand};
pub use eig::{eig_dense, eig_values, EigError};
pub use fd::{
    fd_spectrum_line, fd_spectrum_periodic, residual_check, unmatched_levels, Boundary, GridSpec,
    MatrixPotential, OracleResult,
};
