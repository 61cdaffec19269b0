use std::fmt;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64 as C64;
use serde::Serialize;

use super::QuantError;
use crate::numerics::{chunked_reduce, pairwise_sum, QuadratureRule};
use crate::operators::{is_density, overlap, DensityDiagnostics, DensityMatrix, OperatorMatrix};

/// Point map `x ↦ ρ(x)`.
pub type PointMap = Arc<dyn Fn(&[f64]) -> OperatorMatrix + Send + Sync>;

/// Node matrices are cached only below this many complex entries in total.
const CACHE_LIMIT: usize = 1 << 22;
const CHUNK: usize = 64;

/// Result of comparing `Σ w_k ρ(x_k)` against the identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResolutionReport {
    pub defect: f64,
    pub worst_row: usize,
    pub worst_col: usize,
    /// Size of the top-left block the defect was measured on.
    pub block: usize,
}

/// Measure space together with a density-valued map resolving the identity on it.
#[derive(Clone)]
pub struct DensityFamily {
    label: String,
    hilbert_dim: usize,
    rule: QuadratureRule,
    map: PointMap,
    tolerance: f64,
    cache: Arc<OnceLock<Option<Vec<OperatorMatrix>>>>,
}

impl fmt::Debug for DensityFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DensityFamily")
            .field("label", &self.label)
            .field("hilbert_dim", &self.hilbert_dim)
            .field("nodes", &self.rule.len())
            .field("tolerance", &self.tolerance)
            .finish()
    }
}

impl DensityFamily {
    pub fn new(
        label: impl Into<String>,
        hilbert_dim: usize,
        rule: QuadratureRule,
        map: PointMap,
        tolerance: f64,
    ) -> Self {
        Self {
            label: label.into(),
            hilbert_dim,
            rule,
            map,
            tolerance,
            cache: Arc::new(OnceLock::new()),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn hilbert_dim(&self) -> usize {
        self.hilbert_dim
    }

    pub fn point_dim(&self) -> usize {
        self.rule.dim()
    }

    pub fn rule(&self) -> &QuadratureRule {
        &self.rule
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn with_rule(&self, rule: QuadratureRule) -> Self {
        Self::new(self.label.clone(), self.hilbert_dim, rule, self.map.clone(), self.tolerance)
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn evaluate(&self, x: &[f64]) -> DensityMatrix {
        DensityMatrix::new_unchecked((self.map)(x))
    }

    fn node_cache(&self) -> Option<&Vec<OperatorMatrix>> {
        self.cache
            .get_or_init(|| {
                let n = self.rule.len();
                if n * self.hilbert_dim * self.hilbert_dim > CACHE_LIMIT {
                    return None;
                }
                Some(
                    (0..n)
                        .map(|i| (self.map)(self.rule.node(i)))
                        .collect(),
                )
            })
            .as_ref()
    }

    fn with_node<R>(&self, i: usize, f: impl FnOnce(&OperatorMatrix) -> R) -> R {
        match self.node_cache() {
            Some(cache) => f(&cache[i]),
            None => f(&(self.map)(self.rule.node(i))),
        }
    }

    /// Worst density diagnostics over the rule nodes (by minimum eigenvalue).
    pub fn check_nodes(&self, tol: f64) -> DensityDiagnostics {
        let mut worst: Option<DensityDiagnostics> = None;
        for i in 0..self.rule.len() {
            let d = self.with_node(i, |m| is_density(m, tol));
            let replace = match &worst {
                None => true,
                Some(w) => (!d.is_density && w.is_density) || d.min_eigenvalue < w.min_eigenvalue,
            };
            if replace {
                worst = Some(d);
            }
        }
        worst.expect("quadrature rule has no nodes")
    }

    /// `Σ_k w_k g(x_k) ρ(x_k)`, reduced in a fixed order.
    pub fn integrate<G>(&self, g: G) -> OperatorMatrix
    where
        G: Fn(&[f64]) -> C64 + Sync,
    {
        let dim = self.hilbert_dim;
        let cache = self.node_cache();
        chunked_reduce(
            self.rule.len(),
            CHUNK,
            |range| {
                let mut acc = OperatorMatrix::zeros(dim);
                for i in range {
                    let x = self.rule.node(i);
                    let coeff = g(x) * self.rule.weights()[i];
                    if coeff == C64::new(0.0, 0.0) {
                        continue;
                    }
                    match cache {
                        Some(c) => acc.add_scaled(coeff, &c[i]),
                        None => acc.add_scaled(coeff, &(self.map)(x)),
                    }
                }
                acc
            },
            |mut a, b| {
                a += &b;
                a
            },
        )
        .unwrap_or_else(|| OperatorMatrix::zeros(dim))
    }

    pub fn resolution(&self) -> OperatorMatrix {
        self.integrate(|_| C64::new(1.0, 0.0))
    }

    pub fn check_resolution(&self) -> ResolutionReport {
        self.check_resolution_block(self.hilbert_dim)
    }

    /// Defect restricted to the top-left `m × m` block.
    pub fn check_resolution_block(&self, m: usize) -> ResolutionReport {
        let res = self.resolution().block(m);
        let (worst_row, worst_col, defect) = res.worst_entry_diff(&OperatorMatrix::identity(m));
        ResolutionReport {
            defect,
            worst_row,
            worst_col,
            block: m,
        }
    }

    /// POVM of a region given by its indicator.
    pub fn povm_region<I>(&self, indicator: I) -> OperatorMatrix
    where
        I: Fn(&[f64]) -> bool + Sync,
    {
        self.integrate(|x| {
            if indicator(x) {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    /// `p_{x0}(x) = tr(ρ(x0) ρ(x))`
    pub fn prob_kernel(&self, x0: &[f64], x: &[f64]) -> f64 {
        overlap(&(self.map)(x0), &(self.map)(x)).expect("family dimensions are fixed")
    }

    /// `∫ p_{x0}(x) dν(x)` on the rule.
    pub fn kernel_mass(&self, x0: &[f64]) -> f64 {
        let r0 = (self.map)(x0);
        let terms: Vec<f64> = (0..self.rule.len())
            .map(|i| self.rule.weights()[i] * self.with_node(i, |m| r0.trace_product(m).re))
            .collect();
        pairwise_sum(&terms)
    }

    /// `A_f = ∫ f(x) ρ(x) dν(x)`
    pub fn quantize<F>(&self, f: F) -> Result<OperatorMatrix, QuantError>
    where
        F: Fn(&[f64]) -> C64 + Sync,
    {
        if let Some(i) = (0..self.rule.len()).find(|&i| {
            let v = f(self.rule.node(i));
            !(v.re.is_finite() && v.im.is_finite())
        }) {
            return Err(QuantError::NonFinite {
                node: self.rule.node(i).to_vec(),
            });
        }
        Ok(self.integrate(f))
    }

    pub fn quantize_real<F>(&self, f: F) -> Result<OperatorMatrix, QuantError>
    where
        F: Fn(&[f64]) -> f64 + Sync,
    {
        self.quantize(|x| C64::new(f(x), 0.0))
    }

    /// `tr(ρ(x) A)`
    pub fn lower_symbol(&self, a: &OperatorMatrix, x: &[f64]) -> Result<C64, QuantError> {
        if a.dim() != self.hilbert_dim {
            return Err(QuantError::DimensionMismatch {
                expected: self.hilbert_dim,
                got: a.dim(),
            });
        }
        Ok((self.map)(x).trace_product(a))
    }

    /// `∫ f(x') p_x(x') dν(x')`, evaluated without forming `A_f`.
    pub fn berezin_transform<F>(&self, f: F, x: &[f64]) -> C64
    where
        F: Fn(&[f64]) -> C64,
    {
        let r = (self.map)(x);
        let mut re = Vec::with_capacity(self.rule.len());
        let mut im = Vec::with_capacity(self.rule.len());
        for i in 0..self.rule.len() {
            let p = self.with_node(i, |m| r.trace_product(m).re);
            let v = f(self.rule.node(i)) * (p * self.rule.weights()[i]);
            re.push(v.re);
            im.push(v.im);
        }
        C64::new(pairwise_sum(&re), pairwise_sum(&im))
    }

    /// Expectation of the measurement of `f` in state `ρ_m`, by both evaluation orders:
    /// `tr(ρ_m A_f)` and `∫ f(x) tr(ρ_m ρ(x)) dν(x)`.
    pub fn measurement_expectation<F>(
        &self,
        rho_m: &OperatorMatrix,
        f: F,
    ) -> Result<(C64, C64), QuantError>
    where
        F: Fn(&[f64]) -> C64 + Sync,
    {
        if rho_m.dim() != self.hilbert_dim {
            return Err(QuantError::DimensionMismatch {
                expected: self.hilbert_dim,
                got: rho_m.dim(),
            });
        }
        let via_operator = rho_m.trace_product(&self.quantize(&f)?);
        let mut re = Vec::with_capacity(self.rule.len());
        let mut im = Vec::with_capacity(self.rule.len());
        for i in 0..self.rule.len() {
            let p = self.with_node(i, |m| rho_m.trace_product(m).re);
            let v = f(self.rule.node(i)) * (p * self.rule.weights()[i]);
            re.push(v.re);
            im.push(v.im);
        }
        Ok((via_operator, C64::new(pairwise_sum(&re), pairwise_sum(&im))))
    }
}
