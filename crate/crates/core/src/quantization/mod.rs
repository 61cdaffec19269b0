//! Geometry-independent quantization engine.

mod coherent;
mod covariant;
mod family;

pub use coherent::{cs_build, cs_family, reproducing_kernel, BasisMap, CsBasis};
pub use covariant::{
    covariance_check, covariant_c_rho, orbit_family, ChartTest, ComposeMap, GroupOrbitSpec,
};
pub use family::{DensityFamily, PointMap, ResolutionReport};

use thiserror::Error;

use crate::operators::OperatorError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuantError {
    #[error("function is not finite at node {node:?}")]
    NonFinite { node: Vec<f64> },
    #[error("operator dimension {got} does not match the family dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("kernel norm vanishes at {point:?}")]
    ZeroKernel { point: Vec<f64> },
    #[error("normalization constant must be positive and finite, got {0}")]
    InvalidNormalization(f64),
    #[error("group element {point:?} lies outside the chart")]
    OutsideChart { point: Vec<f64> },
    #[error(transparent)]
    Operator(#[from] OperatorError),
}
