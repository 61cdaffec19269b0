use std::sync::Arc;

use num_complex::Complex64 as C64;

use super::{DensityFamily, PointMap, QuantError};
use crate::numerics::{pairwise_sum, QuadratureRule};
use crate::operators::{DensityMatrix, OperatorMatrix};

/// `(g0, g) ↦ g0⁻¹ g` in chart coordinates.
pub type ComposeMap = Arc<dyn Fn(&[f64], &[f64]) -> Vec<f64> + Send + Sync>;
pub type ChartTest = Arc<dyn Fn(&[f64]) -> bool + Send + Sync>;

/// Orbit of a fiducial density under a (possibly truncated) unitary representation.
#[derive(Clone)]
pub struct GroupOrbitSpec {
    pub label: String,
    pub representation: PointMap,
    pub fiducial: DensityMatrix,
    pub probe: DensityMatrix,
    /// Rule for the left Haar measure `dμ(g)`.
    pub rule: QuadratureRule,
    pub inverse_compose: ComposeMap,
    pub in_chart: ChartTest,
    /// Closed-form `ρ(g)` used instead of `U(g) ρ U(g)†` when the truncation of `U` is lossy.
    pub orbit: Option<PointMap>,
    /// Block on which operator identities are asserted (the full matrix when `None`).
    pub check_block: Option<usize>,
    pub tolerance: f64,
}

impl GroupOrbitSpec {
    pub fn hilbert_dim(&self) -> usize {
        self.fiducial.dim()
    }

    pub fn orbit_density(&self, g: &[f64]) -> OperatorMatrix {
        match &self.orbit {
            Some(map) => map(g),
            None => self.fiducial.conjugate_by(&(self.representation)(g)),
        }
    }

    /// Largest `‖U†U - I‖_max` over the group nodes; a diagnostic for truncated representations.
    pub fn representation_defect(&self) -> f64 {
        self.rule
            .nodes()
            .map(|g| (self.representation)(g).unitarity_defect())
            .fold(0.0, f64::max)
    }

    fn block(&self) -> usize {
        self.check_block.unwrap_or(self.hilbert_dim())
    }
}

/// `c_ρ = ∫ tr(ρ0 ρ(g)) dμ(g)`
pub fn covariant_c_rho(spec: &GroupOrbitSpec) -> Result<f64, QuantError> {
    let terms: Vec<f64> = spec
        .rule
        .nodes()
        .zip(spec.rule.weights())
        .map(|(g, w)| w * spec.probe.trace_product(&spec.orbit_density(g)).re)
        .collect();
    let c = pairwise_sum(&terms);
    if !(c > 0.0) || !c.is_finite() {
        return Err(QuantError::InvalidNormalization(c));
    }
    Ok(c)
}

/// Orbit family on the normalized measure `dμ / c_ρ`.
pub fn orbit_family(spec: &GroupOrbitSpec) -> Result<DensityFamily, QuantError> {
    let c = covariant_c_rho(spec)?;
    let s = spec.clone();
    let map: PointMap = Arc::new(move |g: &[f64]| s.orbit_density(g));
    Ok(DensityFamily::new(
        spec.label.clone(),
        spec.hilbert_dim(),
        spec.rule.scaled(1.0 / c),
        map,
        spec.tolerance,
    ))
}

/// `‖U(g0) A_f U(g0)† - A_{f(g0⁻¹ ·)}‖_max` on the check block.
pub fn covariance_check<F>(
    spec: &GroupOrbitSpec,
    family: &DensityFamily,
    f: F,
    g0: &[f64],
) -> Result<f64, QuantError>
where
    F: Fn(&[f64]) -> C64 + Sync,
{
    if !(spec.in_chart)(g0) {
        return Err(QuantError::OutsideChart { point: g0.to_vec() });
    }
    let a = family.quantize(&f)?;
    let moved = family.quantize(|g| f(&(spec.inverse_compose)(g0, g)))?;
    let u = (spec.representation)(g0);
    let lhs = a.conjugate_by(&u);
    Ok(lhs.block_max_abs_diff(&moved, spec.block()))
}
