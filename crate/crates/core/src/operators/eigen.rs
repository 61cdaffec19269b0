use num_complex::Complex64 as C64;

use super::{OperatorError, OperatorMatrix};

const HERMITIAN_TOL: f64 = 1e-10;
const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with orthonormal eigenvectors stored as columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: OperatorMatrix,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k)
    }

    /// `V Λ V†`
    pub fn reconstruct(&self) -> OperatorMatrix {
        let lambda = OperatorMatrix::real_diagonal(&self.values);
        self.vectors
            .matmul(&lambda)
            .matmul(&self.vectors.adjoint())
    }
}

pub fn eig_hermitian(m: &OperatorMatrix) -> Result<HermitianEigen, OperatorError> {
    let defect = m.hermiticity_defect();
    if defect > HERMITIAN_TOL * m.max_abs().max(1.0) {
        return Err(OperatorError::NotHermitian { defect });
    }
    match m.dim() {
        1 => Ok(HermitianEigen {
            values: vec![m[(0, 0)].re],
            vectors: OperatorMatrix::identity(1),
        }),
        2 => Ok(eig_2x2(m)),
        _ => jacobi(m),
    }
}

/// Smallest eigenvalue only.
pub fn min_eigenvalue(m: &OperatorMatrix) -> Result<f64, OperatorError> {
    Ok(eig_hermitian(m)?.values[0])
}

fn eig_2x2(m: &OperatorMatrix) -> HermitianEigen {
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    // Average the two off-diagonal entries to absorb rounding asymmetry.
    let b = 0.5 * (m[(0, 1)] + m[(1, 0)].conj());
    let mean = 0.5 * (a + d);
    let radius = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    let values = vec![mean - radius, mean + radius];
    if b.norm() == 0.0 {
        let (lo, hi) = if a <= d { (0, 1) } else { (1, 0) };
        let mut vectors = OperatorMatrix::zeros(2);
        vectors[(lo, 0)] = C64::new(1.0, 0.0);
        vectors[(hi, 1)] = C64::new(1.0, 0.0);
        return HermitianEigen {
            values: vec![a.min(d), a.max(d)],
            vectors,
        };
    }
    let mut vectors = OperatorMatrix::zeros(2);
    for (k, &lambda) in values.iter().enumerate() {
        // Two candidate null vectors of (M - λ); the longer one is better conditioned.
        let u = [b, C64::new(lambda - a, 0.0)];
        let w = [C64::new(lambda - d, 0.0), b.conj()];
        let nu = (u[0].norm_sqr() + u[1].norm_sqr()).sqrt();
        let nw = (w[0].norm_sqr() + w[1].norm_sqr()).sqrt();
        let (v, n) = if nu >= nw { (u, nu) } else { (w, nw) };
        vectors[(0, k)] = v[0] / n;
        vectors[(1, k)] = v[1] / n;
    }
    HermitianEigen { values, vectors }
}

fn off_diagonal_norm_sqr(a: &OperatorMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s
}

/// Cyclic complex Jacobi. Each rotation is `G = diag(1, e^{-iφ}) R(θ)` with `φ = arg a_pq`,
/// which turns the 2×2 pivot block real symmetric before the usual real rotation.
fn jacobi(m: &OperatorMatrix) -> Result<HermitianEigen, OperatorError> {
    let n = m.dim();
    let mut a = m.clone();
    for i in 0..n {
        a[(i, i)] = C64::new(a[(i, i)].re, 0.0);
    }
    let mut v = OperatorMatrix::identity(n);
    let scale = m.frobenius_norm().max(f64::MIN_POSITIVE);
    let target = (f64::EPSILON * scale).powi(2);
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm_sqr(&a) <= target {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag <= f64::EPSILON * 1e-3 * scale {
                    continue;
                }
                let phase = apq / mag;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (2.0 * mag);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (theta * theta + 1.0).sqrt())
                } else {
                    -1.0 / (-theta + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let ph = phase.conj();
                let g_pp = C64::new(c, 0.0);
                let g_pq = C64::new(s, 0.0);
                let g_qp = -ph * s;
                let g_qq = ph * c;
                // A <- A G
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * g_pp + akq * g_qp;
                    a[(k, q)] = akp * g_pq + akq * g_qq;
                }
                // A <- G† A
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
                    a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
                }
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * g_pp + vkq * g_qp;
                    v[(k, q)] = vkp * g_pq + vkq * g_qq;
                }
            }
        }
    }
    if !converged && off_diagonal_norm_sqr(&a) > target * 1e4 {
        return Err(OperatorError::NoConvergence {
            sweeps: MAX_SWEEPS,
        });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = OperatorMatrix::from_fn(n, |i, k| v[(i, order[k])]);
    Ok(HermitianEigen { values, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(n: usize, seed: u64) -> OperatorMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = OperatorMatrix::from_fn(n, |_, _| {
            C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        &g + &g.adjoint()
    }

    fn check(m: &OperatorMatrix, tol: f64) {
        let e = eig_hermitian(m).unwrap();
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        assert!(e.vectors.unitarity_defect() < tol);
        let norm = m.max_abs().max(1.0);
        for k in 0..m.dim() {
            let v = e.vector(k);
            let mv = m.apply(&v);
            for i in 0..m.dim() {
                assert!((mv[i] - v[i] * e.values[k]).norm() < tol * norm);
            }
        }
        assert!(e.reconstruct().max_abs_diff(m) < tol * norm);
    }

    #[test]
    fn two_by_two_density_eigenvalue() {
        // M(a, b) with a = 0.7, b = 0.2: Δ = 0.17, λ_max = (1 + √0.32)/2
        let m = OperatorMatrix::from_real_rows(&[&[0.7, 0.2], &[0.2, 0.3]]);
        let e = eig_hermitian(&m).unwrap();
        let disc: f64 = 1.0 - 4.0 * 0.17;
        assert!((e.values[1] - 0.5 * (1.0 + disc.sqrt())).abs() < 1e-15);
        assert!((e.values[1] - 0.782842712).abs() < 1e-9);
        check(&m, 1e-14);
    }

    #[test]
    fn diagonal_input_sorted() {
        let m = OperatorMatrix::real_diagonal(&[3.0, -1.0, 2.0, 0.5]);
        let e = eig_hermitian(&m).unwrap();
        assert_eq!(e.values, vec![-1.0, 0.5, 2.0, 3.0]);
        let m2 = OperatorMatrix::real_diagonal(&[2.0, 1.0]);
        assert_eq!(eig_hermitian(&m2).unwrap().values, vec![1.0, 2.0]);
        check(&m2, 1e-15);
    }

    #[test]
    fn random_six_by_six_reconstructs() {
        check(&random_hermitian(6, 7), 1e-10);
    }

    #[test]
    fn degenerate_spectrum() {
        let m = OperatorMatrix::identity(5).scale_real(2.0);
        let e = eig_hermitian(&m).unwrap();
        assert!(e.values.iter().all(|v| (v - 2.0).abs() < 1e-15));
        let p = OperatorMatrix::projector(&[
            C64::new(0.5, 0.0),
            C64::new(0.0, 0.5),
            C64::new(0.5, 0.0),
            C64::new(0.0, -0.5),
        ]);
        check(&p, 1e-12);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = OperatorMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(
            eig_hermitian(&m),
            Err(OperatorError::NotHermitian { .. })
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn random_hermitian_eigenpairs(n in 1usize..12, seed in any::<u64>()) {
            check(&random_hermitian(n, seed), 1e-10);
        }
    }
}
