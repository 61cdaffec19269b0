use std::sync::Arc;

use num_complex::Complex64 as C64;

use super::{DensityFamily, PointMap, QuantError};
use crate::numerics::QuadratureRule;
use crate::operators::OperatorMatrix;

/// Values `(φ_0(x), ..., φ_{N-1}(x))` of an orthonormal set.
pub type BasisMap = Arc<dyn Fn(&[f64]) -> Vec<C64> + Send + Sync>;

/// Orthonormal functions on `(X, μ)` used to build coherent states.
#[derive(Clone)]
pub struct CsBasis {
    pub size: usize,
    pub functions: BasisMap,
    /// Rule for the base measure `dμ`.
    pub rule: QuadratureRule,
}

impl CsBasis {
    pub fn new(size: usize, functions: BasisMap, rule: QuadratureRule) -> Self {
        Self {
            size,
            functions,
            rule,
        }
    }

    /// `∫ φ̄_m φ_n dμ` on the base rule.
    pub fn gram(&self) -> OperatorMatrix {
        let mut g = OperatorMatrix::zeros(self.size);
        for (x, w) in self.rule.nodes().zip(self.rule.weights()) {
            let phi = (self.functions)(x);
            for m in 0..self.size {
                for n in 0..self.size {
                    g[(m, n)] += phi[m].conj() * phi[n] * *w;
                }
            }
        }
        g
    }

    pub fn gram_defect(&self) -> f64 {
        self.gram().max_abs_diff(&OperatorMatrix::identity(self.size))
    }

    /// `𝒩(x) = Σ_n |φ_n(x)|²`
    pub fn kernel_norm(&self, x: &[f64]) -> f64 {
        (self.functions)(x).iter().map(|z| z.norm_sqr()).sum()
    }
}

/// `|x⟩ = 𝒩(x)^{-1/2} Σ_n φ̄_n(x) |e_n⟩` together with `𝒩(x)`.
pub fn cs_build(basis: &CsBasis, x: &[f64]) -> Result<(Vec<C64>, f64), QuantError> {
    let phi = (basis.functions)(x);
    let norm: f64 = phi.iter().map(|z| z.norm_sqr()).sum();
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(QuantError::ZeroKernel { point: x.to_vec() });
    }
    let s = norm.sqrt();
    Ok((phi.iter().map(|z| z.conj() / s).collect(), norm))
}

/// `⟨x|x'⟩`
pub fn reproducing_kernel(basis: &CsBasis, x: &[f64], xp: &[f64]) -> Result<C64, QuantError> {
    let (u, _) = cs_build(basis, x)?;
    let (v, _) = cs_build(basis, xp)?;
    Ok(u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum())
}

/// Rank-one family `|x⟩⟨x|` on the measure `dν = 𝒩 dμ`.
pub fn cs_family(basis: &CsBasis, label: &str, tolerance: f64) -> Result<DensityFamily, QuantError> {
    let mut weights = Vec::with_capacity(basis.rule.len());
    for (x, w) in basis.rule.nodes().zip(basis.rule.weights()) {
        let (_, norm) = cs_build(basis, x)?;
        weights.push(w * norm);
    }
    let nodes: Vec<f64> = basis.rule.nodes().flatten().copied().collect();
    let rule = QuadratureRule::from_parts(
        basis.rule.dim(),
        nodes,
        weights,
        basis.rule.kind(),
        None,
    );
    let b = basis.clone();
    let map: PointMap = Arc::new(move |x: &[f64]| {
        let (v, _) = cs_build(&b, x).expect("kernel norm checked at construction");
        OperatorMatrix::projector(&v)
    });
    Ok(DensityFamily::new(label, basis.size, rule, map, tolerance))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{make_rule, RuleSpec};
    use std::f64::consts::PI;

    fn fourier_basis(n: usize) -> CsBasis {
        let rule = make_rule(&RuleSpec::circle(4 * n, 1.0)).unwrap();
        let f: BasisMap = Arc::new(move |x: &[f64]| {
            (0..n)
                .map(|k| C64::from_polar(1.0 / (2.0 * PI).sqrt(), k as f64 * x[0]))
                .collect()
        });
        CsBasis::new(n, f, rule)
    }

    #[test]
    fn fourier_basis_kernel_is_constant() {
        let b = fourier_basis(5);
        assert!(b.gram_defect() < 1e-14);
        for &x in &[0.0, 0.7, 4.0] {
            assert!((b.kernel_norm(&[x]) - 5.0 / (2.0 * PI)).abs() < 1e-14);
            let (v, _) = cs_build(&b, &[x]).unwrap();
            let n: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            assert!((n - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn coherent_family_resolves_identity() {
        let b = fourier_basis(4);
        let fam = cs_family(&b, "fourier", 1e-12).unwrap();
        assert!(fam.check_resolution().defect < 1e-13);
        let (x, xp) = ([0.4], [2.1]);
        let k = reproducing_kernel(&b, &x, &xp).unwrap();
        assert!((k.norm_sqr() - fam.prob_kernel(&x, &xp)).abs() < 1e-14);
    }

    #[test]
    fn zero_kernel_rejected() {
        let rule = make_rule(&RuleSpec::circle(4, 1.0)).unwrap();
        let f: BasisMap = Arc::new(|x: &[f64]| vec![C64::new(x[0].sin(), 0.0)]);
        let b = CsBasis::new(1, f, rule);
        assert!(matches!(cs_build(&b, &[0.0]), Err(QuantError::ZeroKernel { .. })));
    }
}
