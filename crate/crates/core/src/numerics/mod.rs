//! Special functions and quadrature rules shared by every geometry.

mod quadrature;
mod special;

pub use quadrature::{chunked_reduce, make_rule, pairwise_sum, QuadratureRule, RuleKind, RuleSpec};
pub use special::{
    bessel_i, bessel_i_scaled, gamma, hyp2f1_terminating, laguerre, laguerre_complex,
    laguerre_sequence, ln_factorial, ln_gamma, BesselI,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericsError {
    #[error("{function}: argument {name} = {value} outside the domain")]
    Domain {
        function: &'static str,
        name: &'static str,
        value: f64,
    },
    #[error("hyp2f1: denominator Pochhammer factor vanishes at k = {k} (c = {c})")]
    Pole { k: usize, c: f64 },
    #[error("unsupported quadrature rule: {0}")]
    UnsupportedRule(String),
    #[error("{kind} rule needs at least {min} nodes, got {got}")]
    TooFewNodes {
        kind: &'static str,
        min: usize,
        got: usize,
    },
}
