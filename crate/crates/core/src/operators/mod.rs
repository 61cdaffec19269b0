//! Dense complex matrices, Hermitian eigensolvers, density-matrix validation and distances.

mod density;
mod eigen;
mod matrix;

pub use density::{
    hs_distance, is_density, mix, overlap, pseudo_distance, DensityDiagnostics, DensityMatrix,
    MixtureSpec, DENSITY_TOL,
};
pub use eigen::{eig_hermitian, min_eigenvalue, HermitianEigen};
pub use matrix::OperatorMatrix;
pub use num_complex::Complex64 as C64;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OperatorError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("expected {expected} entries, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("matrix is not Hermitian (defect {defect:e})")]
    NotHermitian { defect: f64 },
    #[error("Jacobi eigensolver did not converge in {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("not a density matrix: {0:?}")]
    NotDensity(DensityDiagnostics),
    #[error("invalid mixture: {0}")]
    InvalidMixture(String),
}
