use std::ops::Deref;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::eigen::min_eigenvalue;
use super::{OperatorError, OperatorMatrix};

/// Default slack for density-matrix validation.
pub const DENSITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityDiagnostics {
    pub hermiticity_defect: f64,
    pub trace_defect: f64,
    pub min_eigenvalue: f64,
    pub is_density: bool,
}

/// Hermiticity, unit trace and positivity, each within `tol`.
pub fn is_density(m: &OperatorMatrix, tol: f64) -> DensityDiagnostics {
    let hermiticity_defect = m.hermiticity_defect();
    let trace_defect = (m.trace() - C64::new(1.0, 0.0)).norm();
    // Only the Hermitian part has a meaningful spectrum; symmetrize before solving.
    let herm = (m + &m.adjoint()).scale_real(0.5);
    let min_eigenvalue = min_eigenvalue(&herm).unwrap_or(f64::NAN);
    let is_density = m.is_finite()
        && hermiticity_defect <= tol
        && trace_defect <= tol
        && min_eigenvalue >= -tol;
    DensityDiagnostics {
        hermiticity_defect,
        trace_defect,
        min_eigenvalue,
        is_density,
    }
}

/// A validated density matrix. Dereferences to the underlying [`OperatorMatrix`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityMatrix(OperatorMatrix);

impl DensityMatrix {
    pub fn new(m: OperatorMatrix) -> Result<Self, OperatorError> {
        Self::with_tolerance(m, DENSITY_TOL)
    }

    pub fn with_tolerance(m: OperatorMatrix, tol: f64) -> Result<Self, OperatorError> {
        let diag = is_density(&m, tol);
        if diag.is_density {
            Ok(Self(m))
        } else {
            Err(OperatorError::NotDensity(diag))
        }
    }

    /// Wrap without validation; for matrices that are densities by construction.
    pub fn new_unchecked(m: OperatorMatrix) -> Self {
        Self(m)
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self(OperatorMatrix::identity(dim).scale_real(1.0 / dim as f64))
    }

    /// `|ψ⟩⟨ψ| / ⟨ψ|ψ⟩`
    pub fn pure(psi: &[C64]) -> Result<Self, OperatorError> {
        let norm_sqr: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        if !(norm_sqr > 0.0) || !norm_sqr.is_finite() {
            return Err(OperatorError::InvalidMixture(
                "pure state from a zero or non-finite vector".into(),
            ));
        }
        Ok(Self(OperatorMatrix::projector(psi).scale_real(1.0 / norm_sqr)))
    }

    pub fn purity(&self) -> f64 {
        self.0.trace_product(&self.0).re
    }

    pub fn as_operator(&self) -> &OperatorMatrix {
        &self.0
    }

    pub fn into_operator(self) -> OperatorMatrix {
        self.0
    }
}

impl Deref for DensityMatrix {
    type Target = OperatorMatrix;
    fn deref(&self) -> &OperatorMatrix {
        &self.0
    }
}

fn check_dims(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<(), OperatorError> {
    if a.dim() != b.dim() {
        return Err(OperatorError::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(())
}

/// `tr(ρ ρ')`, real for Hermitian arguments.
pub fn overlap(r1: &OperatorMatrix, r2: &OperatorMatrix) -> Result<f64, OperatorError> {
    check_dims(r1, r2)?;
    Ok(r1.trace_product(r2).re)
}

/// `√tr((ρ - ρ')²)`, the Frobenius norm of the difference.
pub fn hs_distance(r1: &DensityMatrix, r2: &DensityMatrix) -> Result<f64, OperatorError> {
    check_dims(r1, r2)?;
    Ok((&**r1 - &**r2).frobenius_norm())
}

/// `[-ln(tr(ρρ') / √(tr ρ² tr ρ'²))]^{1/2}`; `+∞` once the overlap vanishes.
pub fn pseudo_distance(r1: &DensityMatrix, r2: &DensityMatrix) -> Result<f64, OperatorError> {
    let cross = overlap(r1, r2)?;
    if cross <= 0.0 {
        return Ok(f64::INFINITY);
    }
    let ratio = cross / (r1.purity() * r2.purity()).sqrt();
    let d2 = -ratio.ln();
    // Rounding in the normalization leaves a few ulps when the states coincide.
    if d2 <= 8.0 * f64::EPSILON {
        return Ok(0.0);
    }
    Ok(d2.sqrt())
}

/// Statistical mixture `Σ p_i |ψ_i⟩⟨ψ_i|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixtureSpec {
    pub weights: Vec<f64>,
    pub states: Vec<Vec<C64>>,
}

impl MixtureSpec {
    pub fn validate(&self, tol: f64) -> Result<usize, OperatorError> {
        if self.weights.is_empty() || self.weights.len() != self.states.len() {
            return Err(OperatorError::InvalidMixture(format!(
                "{} weights for {} states",
                self.weights.len(),
                self.states.len()
            )));
        }
        let dim = self.states[0].len();
        if dim == 0 {
            return Err(OperatorError::InvalidMixture("empty state vector".into()));
        }
        if let Some(w) = self.weights.iter().find(|w| !(0.0..=1.0).contains(*w)) {
            return Err(OperatorError::InvalidMixture(format!(
                "weight {w} outside [0, 1]"
            )));
        }
        let total: f64 = self.weights.iter().sum();
        if (total - 1.0).abs() > tol {
            return Err(OperatorError::InvalidMixture(format!(
                "weights sum to {total}"
            )));
        }
        for (i, psi) in self.states.iter().enumerate() {
            if psi.len() != dim {
                return Err(OperatorError::InvalidMixture(format!(
                    "state {i} has length {}, expected {dim}",
                    psi.len()
                )));
            }
            let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if (norm - 1.0).abs() > tol {
                return Err(OperatorError::InvalidMixture(format!(
                    "state {i} has norm {norm}"
                )));
            }
        }
        Ok(dim)
    }
}

pub fn mix(spec: &MixtureSpec) -> Result<DensityMatrix, OperatorError> {
    let dim = spec.validate(1e-12)?;
    let mut out = OperatorMatrix::zeros(dim);
    for (p, psi) in spec.weights.iter().zip(&spec.states) {
        out.add_scaled_real(*p, &OperatorMatrix::projector(psi));
    }
    DensityMatrix::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::eig_hermitian;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_unit(rng: &mut ChaCha8Rng, n: usize) -> Vec<C64> {
        let v: Vec<C64> = (0..n)
            .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.into_iter().map(|z| z / norm).collect()
    }

    fn random_density(rng: &mut ChaCha8Rng, n: usize) -> DensityMatrix {
        let k = rng.random_range(1..=n + 1);
        let mut weights: Vec<f64> = (0..k).map(|_| rng.random_range(0.01..1.0)).collect();
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);
        let states = (0..k).map(|_| random_unit(rng, n)).collect();
        mix(&MixtureSpec { weights, states }).unwrap()
    }

    #[test]
    fn validity_examples() {
        assert!(is_density(&OperatorMatrix::identity(3).scale_real(1.0 / 3.0), 1e-12).is_density);
        let bad = OperatorMatrix::from_real_rows(&[&[0.6, 0.5], &[0.5, 0.4]]);
        let diag = is_density(&bad, 1e-12);
        assert!(!diag.is_density);
        // det = -0.01: λ_min = (1 - √1.04)/2
        assert!((diag.min_eigenvalue - 0.5 * (1.0 - 1.04f64.sqrt())).abs() < 1e-14);
        assert!((diag.min_eigenvalue + 0.0099).abs() < 1e-4);
        let psi = [c(0.6, 0.0), c(0.0, 0.8)];
        assert!(is_density(&OperatorMatrix::projector(&psi), 1e-12).is_density);
    }

    #[test]
    fn distance_examples() {
        let up = DensityMatrix::pure(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let down = DensityMatrix::pure(&[c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(hs_distance(&up, &up).unwrap(), 0.0);
        assert!((hs_distance(&up, &down).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(pseudo_distance(&up, &up).unwrap(), 0.0);
        assert_eq!(pseudo_distance(&up, &down).unwrap(), f64::INFINITY);
        let three = DensityMatrix::maximally_mixed(3);
        assert!(matches!(
            hs_distance(&up, &three),
            Err(OperatorError::DimensionMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn pseudo_distance_real_two_by_two() {
        // ½(I + r[[cos 2θ, sin 2θ], [sin 2θ, -cos 2θ]]) at r = 0.5, angles 0 and π/4
        let rho = |theta: f64| {
            let r = 0.5;
            let (cs, sn) = ((2.0 * theta).cos(), (2.0 * theta).sin());
            DensityMatrix::new(OperatorMatrix::from_real_rows(&[
                &[0.5 * (1.0 + r * cs), 0.5 * r * sn],
                &[0.5 * r * sn, 0.5 * (1.0 - r * cs)],
            ]))
            .unwrap()
        };
        let d = pseudo_distance(&rho(0.0), &rho(PI / 4.0)).unwrap();
        assert!((d * d - (-(0.8f64).ln())).abs() < 1e-14);
        assert!((d * d - 0.22314).abs() < 1e-5);
    }

    #[test]
    fn mixture_examples() {
        let psi = vec![c(FRAC_1_SQRT_2, 0.0), c(0.0, FRAC_1_SQRT_2)];
        let single = mix(&MixtureSpec {
            weights: vec![1.0],
            states: vec![psi.clone()],
        })
        .unwrap();
        assert!(single.max_abs_diff(&OperatorMatrix::projector(&psi)) < 1e-15);
        let half = mix(&MixtureSpec {
            weights: vec![0.5, 0.5],
            states: vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]],
        })
        .unwrap();
        assert!(half.max_abs_diff(&DensityMatrix::maximally_mixed(2)) < 1e-15);
        assert!(mix(&MixtureSpec {
            weights: vec![0.7, 0.7],
            states: vec![psi.clone(), psi],
        })
        .is_err());
    }

    #[test]
    fn mixed_kernel_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let spec = |rng: &mut ChaCha8Rng| {
            let w: Vec<f64> = (0..3).map(|_| rng.random_range(0.1..1.0)).collect();
            let t: f64 = w.iter().sum();
            MixtureSpec {
                weights: w.iter().map(|x| x / t).collect(),
                states: (0..3).map(|_| random_unit(rng, 3)).collect(),
            }
        };
        let s1 = spec(&mut rng);
        let s2 = spec(&mut rng);
        let lhs = overlap(&mix(&s1).unwrap(), &mix(&s2).unwrap()).unwrap();
        let mut rhs = 0.0;
        for (p, u) in s1.weights.iter().zip(&s1.states) {
            for (q, v) in s2.weights.iter().zip(&s2.states) {
                let ip: C64 = u.iter().zip(v).map(|(a, b)| a.conj() * b).sum();
                rhs += p * q * ip.norm_sqr();
            }
        }
        assert!((lhs - rhs).abs() < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn overlap_bounds_and_symmetry(seed in any::<u64>(), n in 1usize..6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_density(&mut rng, n);
            let b = random_density(&mut rng, n);
            let ab = overlap(&a, &b).unwrap();
            let ba = overlap(&b, &a).unwrap();
            prop_assert!(ab >= -1e-14 && ab <= 1.0 + 1e-14);
            prop_assert!((ab - ba).abs() < 1e-14);
            let dab = pseudo_distance(&a, &b).unwrap();
            let dba = pseudo_distance(&b, &a).unwrap();
            prop_assert!(dab == dba || (dab - dba).abs() < 1e-12);
            prop_assert_eq!(pseudo_distance(&a, &a).unwrap(), 0.0);
        }

        #[test]
        fn hs_triangle_inequality(seed in any::<u64>(), n in 1usize..6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_density(&mut rng, n);
            let b = random_density(&mut rng, n);
            let c = random_density(&mut rng, n);
            let ab = hs_distance(&a, &b).unwrap();
            let bc = hs_distance(&b, &c).unwrap();
            let ac = hs_distance(&a, &c).unwrap();
            prop_assert!(ac <= ab + bc + 1e-14);
            prop_assert!(ab <= 2f64.sqrt() + 1e-14);
        }

        #[test]
        fn purity_detects_rank_one(seed in any::<u64>(), n in 1usize..6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_density(&mut rng, n);
            let p = a.purity();
            prop_assert!(p > 0.0 && p <= 1.0 + 1e-12);
            let values = eig_hermitian(&a).unwrap().values;
            let rank = values.iter().filter(|v| **v > 1e-9).count();
            prop_assert_eq!((p - 1.0).abs() < 1e-9, rank == 1);
            let pure = DensityMatrix::pure(&random_unit(&mut rng, n)).unwrap();
            prop_assert!((pure.purity() - 1.0).abs() < 1e-12);
        }
    }
}
