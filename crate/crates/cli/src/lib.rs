//! Batch front end for `povm-quant`: verification suites and table reconstruction.

pub mod config;
pub mod reconstruct;
pub mod report;
pub mod suites;
