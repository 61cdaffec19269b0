//! Thermal states transported by the affine group of the real line.
//!
//! `U(q, p)ψ(x) = e^{ipx} ψ(x/q) / √q` on `L²(ℝ₊, dx)` with the α-Laguerre basis.
//! Matrix elements `⟨e_i|U(q, p)|e_n⟩` are integrals of `x^α e^{-βx}` times a polynomial,
//! `β = (1 + 1/q)/2 - ip`; rotating the contour onto `βx ∈ ℝ₊` makes generalized
//! Gauss–Laguerre exact for them.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::Arc;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::numerics::{
    bessel_i_scaled, laguerre, laguerre_complex, ln_factorial, ln_gamma, pairwise_sum, QuadratureRule,
    RuleKind,
};
use crate::operators::{DensityMatrix, OperatorMatrix};
use crate::quantization::{DensityFamily, GroupOrbitSpec, PointMap};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HalfPlaneError {
    #[error("alpha = {0} must be positive")]
    Alpha(f64),
    #[error("Boltzmann factor t = {0} outside [0, 1)")]
    Temperature(f64),
    #[error("basis size must be at least 1")]
    Dimension,
    #[error("x = {0} is negative")]
    NegativeX(f64),
    #[error("dilation q = {0} must be positive")]
    Dilation(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AffineParams {
    pub alpha: f64,
    pub t: f64,
    /// Number of thermal levels kept.
    pub dim: usize,
}

impl AffineParams {
    pub fn new(alpha: f64, t: f64, dim: usize) -> Result<Self, HalfPlaneError> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(HalfPlaneError::Alpha(alpha));
        }
        if !(0.0..1.0).contains(&t) {
            return Err(HalfPlaneError::Temperature(t));
        }
        if dim == 0 {
            return Err(HalfPlaneError::Dimension);
        }
        Ok(Self { alpha, t, dim })
    }

    /// `(1 - t) tⁿ`, `n < dim`.
    pub fn weights(&self) -> Vec<f64> {
        (0..self.dim).map(|n| (1.0 - self.t) * self.t.powi(n as i32)).collect()
    }

    pub fn truncation_mass(&self) -> f64 {
        1.0 - self.t.powi(self.dim as i32)
    }

    /// `2π/α`, the value for the untruncated thermal state.
    pub fn c_rho(&self) -> f64 {
        2.0 * PI / self.alpha
    }

    /// `(2π/α)(1 - t^dim)`, the value for the truncated state.
    pub fn c_rho_truncated(&self) -> f64 {
        self.c_rho() * self.truncation_mass()
    }

    /// The form `2π(1 - t)/α`.
    pub fn c_rho_alt(&self) -> f64 {
        2.0 * PI * (1.0 - self.t) / self.alpha
    }
}

fn basis_norm(n: usize, alpha: f64) -> f64 {
    (0.5 * (ln_factorial(n) - ln_gamma(n as f64 + alpha + 1.0))).exp()
}

/// `e_n(x) = √(n!/Γ(n+α+1)) e^{-x/2} x^{α/2} L_n^{(α)}(x)`
pub fn laguerre_basis(n: usize, alpha: f64, x: f64) -> Result<f64, HalfPlaneError> {
    if x < 0.0 {
        return Err(HalfPlaneError::NegativeX(x));
    }
    let l = laguerre(n, alpha, x).map_err(|_| HalfPlaneError::Alpha(alpha))?;
    Ok(basis_norm(n, alpha) * (-0.5 * x).exp() * x.powf(0.5 * alpha) * l)
}

/// Generalized Gauss–Laguerre rule for weight `x^α e^{-x}`, exact on the basis Gram matrix up to `size`.
pub fn basis_rule(alpha: f64, size: usize) -> QuadratureRule {
    QuadratureRule::gauss_laguerre(size + 1, alpha).expect("alpha > -1")
}

/// `max |∫ e_n e_{n′} dx - δ|` over `n, n′ < size`.
pub fn gram_defect(alpha: f64, size: usize) -> f64 {
    let rule = basis_rule(alpha, size);
    let mut worst: f64 = 0.0;
    for n in 0..size {
        for np in 0..size {
            let v = rule.integrate(|x| {
                basis_norm(n, alpha)
                    * basis_norm(np, alpha)
                    * laguerre(n, alpha, x[0]).unwrap()
                    * laguerre(np, alpha, x[0]).unwrap()
            });
            let target = if n == np { 1.0 } else { 0.0 };
            worst = worst.max((v - target).abs());
        }
    }
    worst
}

/// `∫ e_n(x)² dx / x`, equal to `1/α` for every `n`.
pub fn inverse_moment(n: usize, alpha: f64) -> f64 {
    let rule = QuadratureRule::gauss_laguerre(n + 1, alpha - 1.0).expect("alpha > 0");
    let c = basis_norm(n, alpha).powi(2);
    rule.integrate(|x| c * laguerre(n, alpha, x[0]).unwrap().powi(2))
}

/// `(U(q, p)ψ)(x) = e^{ipx} ψ(x/q) / √q` at the sample points `xs`.
pub fn affine_action<F>(q: f64, p: f64, psi: F, xs: &[f64]) -> Result<Vec<C64>, HalfPlaneError>
where
    F: Fn(f64) -> C64,
{
    if !(q > 0.0) {
        return Err(HalfPlaneError::Dilation(q));
    }
    let s = 1.0 / q.sqrt();
    Ok(xs
        .iter()
        .map(|&x| C64::from_polar(s, p * x) * psi(x / q))
        .collect())
}

/// `(q, p)(q₀, p₀) = (q q₀, p₀/q + p)`
pub fn compose(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 * b.0, b.1 / a.0 + a.1)
}

/// `g₀⁻¹ g = (q/q₀, q₀(p - p₀))`
pub fn inverse_compose(g0: (f64, f64), g: (f64, f64)) -> (f64, f64) {
    (g.0 / g0.0, g0.0 * (g.1 - g0.1))
}

/// `⟨e_i|U(q, p)|e_n⟩` for `i < rows`, `n < cols`, row-major.
pub fn matrix_elements(q: f64, p: f64, alpha: f64, rows: usize, cols: usize) -> Vec<C64> {
    let beta = C64::new(0.5 * (1.0 + 1.0 / q), -p);
    let rule = QuadratureRule::gauss_laguerre((rows + cols) / 2 + 1, alpha).expect("alpha > -1");
    let inv_beta = beta.inv();
    // N_i N_n q^{-(α+1)/2} β^{-(α+1)}
    let pre = (-(alpha + 1.0) * (0.5 * q.ln() + beta.ln())).exp();
    let mut out = vec![C64::new(0.0, 0.0); rows * cols];
    let mut li = vec![C64::new(0.0, 0.0); rows];
    let mut ln = vec![C64::new(0.0, 0.0); cols];
    for (s, w) in rule.nodes().zip(rule.weights()) {
        let x = inv_beta * s[0];
        laguerre_complex(alpha, x, &mut li);
        laguerre_complex(alpha, x / q, &mut ln);
        for i in 0..rows {
            let a = li[i] * *w;
            for n in 0..cols {
                out[i * cols + n] += a * ln[n];
            }
        }
    }
    for i in 0..rows {
        let ni = basis_norm(i, alpha);
        for n in 0..cols {
            out[i * cols + n] *= pre * ni * basis_norm(n, alpha);
        }
    }
    out
}

/// `⟨e_i|ρ_T(q, p)|e_j⟩` for `i, j < block`.
pub fn rho_qp(q: f64, p: f64, params: &AffineParams, block: usize) -> OperatorMatrix {
    let u = matrix_elements(q, p, params.alpha, block, params.dim);
    let w = params.weights();
    let dim = params.dim;
    OperatorMatrix::from_fn(block, |i, j| {
        (0..dim)
            .map(|n| u[i * dim + n] * u[j * dim + n].conj() * w[n])
            .sum()
    })
}

/// Product grid in `u = ln q` and `φ`, with `p = β_r(q) tan φ`, `β_r = (1 + 1/q)/2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AffineGrid {
    pub u_min: f64,
    pub u_max: f64,
    pub n_u: usize,
    pub n_phi: usize,
}

impl AffineGrid {
    /// Range from the decay `q^{-α}` at large `q` and `q^{α+2}` at small `q`.
    pub fn for_params(params: &AffineParams) -> Self {
        let l = 30.0;
        let u_min = -(l / (params.alpha + 2.0)) - 8.0;
        let u_max = l / params.alpha + 8.0;
        Self {
            u_min,
            u_max,
            n_u: (6.0 * (u_max - u_min)).ceil() as usize,
            n_phi: 96,
        }
    }

    /// Twice the nodes in each direction over the same range.
    pub fn refined(&self) -> Self {
        Self {
            n_u: 2 * self.n_u,
            n_phi: 2 * self.n_phi,
            ..self.clone()
        }
    }

    /// Rule for `dq dp` with nodes `(q, p)`.
    pub fn rule(&self) -> QuadratureRule {
        let panels = ((self.u_max - self.u_min) / 2.0).ceil().max(1.0) as usize;
        let per = (self.n_u / panels).max(4);
        let u = QuadratureRule::composite_legendre(&[self.u_min, self.u_max], panels, per).expect("positive node count");
        let phi = QuadratureRule::gauss_legendre(self.n_phi, -FRAC_PI_2, FRAC_PI_2).expect("positive node count");
        let rule = u.product(&phi).mapped(2, |x| {
            let q = x[0].exp();
            let scale = 0.5 * (1.0 + 1.0 / q);
            let c = x[1].cos();
            (vec![q, scale * x[1].tan()], q * scale / (c * c))
        });
        let weights = rule.weights().to_vec();
        let nodes = rule.nodes().flatten().copied().collect();
        QuadratureRule::from_parts(2, nodes, weights, RuleKind::Product, None)
    }
}

/// `c_ρ = ∫ ⟨e₀|ρ_T(q, p)|e₀⟩ dq dp` on the grid.
pub fn c_rho_quadrature(params: &AffineParams, grid: &AffineGrid) -> f64 {
    let rule = grid.rule();
    let w = params.weights();
    let terms: Vec<f64> = rule
        .nodes()
        .zip(rule.weights())
        .collect::<Vec<_>>()
        .par_iter()
        .map(|(g, wt)| {
            let u = matrix_elements(g[0], g[1], params.alpha, 1, params.dim);
            *wt * u.iter().zip(&w).map(|(x, wn)| wn * x.norm_sqr()).sum::<f64>()
        })
        .collect();
    pairwise_sum(&terms)
}

/// `(1/c_ρ) ∫ ρ_T(q, p) dq dp` on the top-left `block`, with its `c_ρ`.
pub fn resolution_block(params: &AffineParams, grid: &AffineGrid, block: usize) -> (OperatorMatrix, f64) {
    let rule = grid.rule();
    let w = params.weights();
    let dim = params.dim;
    let nodes: Vec<(&[f64], f64)> = rule.nodes().zip(rule.weights().iter().copied()).collect();
    let parts: Vec<Vec<C64>> = nodes
        .par_chunks(64)
        .map(|chunk| {
            let mut acc = vec![C64::new(0.0, 0.0); block * block];
            for (g, wt) in chunk {
                let u = matrix_elements(g[0], g[1], params.alpha, block, dim);
                for i in 0..block {
                    for j in 0..block {
                        let v: C64 = (0..dim).map(|n| u[i * dim + n] * u[j * dim + n].conj() * w[n]).sum();
                        acc[i * block + j] += v * *wt;
                    }
                }
            }
            acc
        })
        .collect();
    let mut total = vec![C64::new(0.0, 0.0); block * block];
    for acc in &parts {
        total.iter_mut().zip(acc).for_each(|(a, b)| *a += b);
    }
    let c_rho = total[0].re;
    let m = OperatorMatrix::from_row_major(block, total).expect("square data");
    (m.scale_real(1.0 / c_rho), c_rho)
}

/// Resolution defects on a grid and on its refinement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResolutionStudy {
    pub block: usize,
    pub c_rho: f64,
    pub coarse_defect: f64,
    pub fine_defect: f64,
    pub diagonal_00: f64,
    pub offdiagonal_01: f64,
}

impl ResolutionStudy {
    /// Refinement did not make things worse (beyond rounding).
    pub fn converging(&self) -> bool {
        self.fine_defect <= self.coarse_defect.max(1e-12)
    }
}

pub fn affine_resolution_check(params: &AffineParams, grid: &AffineGrid, block: usize) -> ResolutionStudy {
    let id = OperatorMatrix::identity(block);
    let (coarse, _) = resolution_block(params, grid, block);
    let (fine, c_rho) = resolution_block(params, &grid.refined(), block);
    ResolutionStudy {
        block,
        c_rho,
        coarse_defect: coarse.max_abs_diff(&id),
        fine_defect: fine.max_abs_diff(&id),
        diagonal_00: fine[(0, 0)].re,
        offdiagonal_01: if block > 1 { fine[(0, 1)].norm() } else { 0.0 },
    }
}

/// `K_T(x, y) = t^{-α/2} e^{-(1+t)(x+y)/(2(1-t))} I_α(2√(txy)/(1-t))`, the kernel of `ρ_T`.
pub fn thermal_kernel(x: f64, y: f64, params: &AffineParams) -> f64 {
    let t = params.t;
    let arg = 2.0 * (t * x * y).sqrt() / (1.0 - t);
    let i = bessel_i_scaled(params.alpha, arg).expect("alpha > 0");
    t.powf(-0.5 * params.alpha) * (arg - 0.5 * (1.0 + t) * (x + y) / (1.0 - t)).exp() * i
}

/// The form `(1-t) t^{-α/2} e^{-t(x+y)/(2(1-t))} I_α(2√(txy)/(1-t))`.
pub fn thermal_kernel_alt(x: f64, y: f64, params: &AffineParams) -> f64 {
    let t = params.t;
    let arg = 2.0 * (t * x * y).sqrt() / (1.0 - t);
    let i = bessel_i_scaled(params.alpha, arg).expect("alpha > 0");
    (1.0 - t) * t.powf(-0.5 * params.alpha) * (arg - 0.5 * t * (x + y) / (1.0 - t)).exp() * i
}

/// Eigenvalue of `e_n` under the integral operator with kernel `kernel`, fitted on the samples `xs`,
/// with the largest pointwise residual `|∫ K(x, y) e_n(y) dy - λ e_n(x)|`.
pub fn kernel_eigen_factor(
    n: usize,
    xs: &[f64],
    params: &AffineParams,
    kernel: impl Fn(f64, f64, &AffineParams) -> f64,
) -> (f64, f64) {
    let a = params.alpha;
    let rule = QuadratureRule::gauss_laguerre(48, a).expect("alpha > -1");
    let image: Vec<f64> = xs
        .iter()
        .map(|&x| {
            rule.integrate(|y| {
                let y = y[0];
                kernel(x, y, params) * laguerre_basis(n, a, y).unwrap() * y.powf(-a) * y.exp()
            })
        })
        .collect();
    let basis: Vec<f64> = xs.iter().map(|&x| laguerre_basis(n, a, x).unwrap()).collect();
    let lambda = image.iter().zip(&basis).map(|(k, e)| k * e).sum::<f64>()
        / basis.iter().map(|e| e * e).sum::<f64>();
    let residual = image
        .iter()
        .zip(&basis)
        .map(|(k, e)| (k - lambda * e).abs())
        .fold(0.0, f64::max);
    (lambda, residual)
}

/// `∫ K(x, x) dx`, the trace of `ρ_T`.
pub fn kernel_trace(params: &AffineParams) -> f64 {
    let a = params.alpha;
    let rule = QuadratureRule::gauss_laguerre(48, a).expect("alpha > -1");
    rule.integrate(|x| thermal_kernel(x[0], x[0], params) * x[0].powf(-a) * x[0].exp())
}

/// Orbit of the truncated thermal state with probe `|e₀⟩⟨e₀|` on the block `span{e_0..e_{block-1}}`.
pub fn affine_orbit_spec(params: &AffineParams, grid: &AffineGrid, block: usize) -> GroupOrbitSpec {
    let p = *params;
    let representation: PointMap = Arc::new(move |g: &[f64]| {
        let u = matrix_elements(g[0], g[1], p.alpha, block, block);
        OperatorMatrix::from_row_major(block, u).expect("square data")
    });
    let orbit: PointMap = Arc::new(move |g: &[f64]| rho_qp(g[0], g[1], &p, block));
    let mut fid = OperatorMatrix::zeros(block);
    for (n, w) in params.weights().iter().take(block).enumerate() {
        fid[(n, n)] = C64::new(*w, 0.0);
    }
    let mut probe = OperatorMatrix::zeros(block);
    probe[(0, 0)] = C64::new(1.0, 0.0);
    GroupOrbitSpec {
        label: format!("affine(alpha={}, t={})", params.alpha, params.t),
        representation,
        fiducial: DensityMatrix::new_unchecked(fid),
        probe: DensityMatrix::new_unchecked(probe),
        rule: grid.rule(),
        inverse_compose: Arc::new(|g0: &[f64], g: &[f64]| {
            let (q, p) = inverse_compose((g0[0], g0[1]), (g[0], g[1]));
            vec![q, p]
        }),
        in_chart: Arc::new(|g: &[f64]| g[0] > 0.0 && g[1].is_finite()),
        orbit: Some(orbit),
        check_block: None,
        tolerance: 1e-3,
    }
}

/// Density family of block-truncated orbit states on `dq dp / c_ρ`.
pub fn affine_family(params: &AffineParams, grid: &AffineGrid, block: usize) -> DensityFamily {
    let c = c_rho_quadrature(params, grid);
    let p = *params;
    let map: PointMap = Arc::new(move |g: &[f64]| rho_qp(g[0], g[1], &p, block));
    DensityFamily::new(
        format!("halfplane(alpha={}, t={})", params.alpha, params.t),
        block,
        grid.rule().scaled(1.0 / c),
        map,
        1e-3,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::gamma;
    use crate::quantization::covariant_c_rho;

    #[test]
    fn basis_examples() {
        assert!(gram_defect(1.5, 6) < 1e-13);
        assert!((inverse_moment(0, 2.0) - 0.5).abs() < 1e-14);
        for n in 0..5 {
            assert!((inverse_moment(n, 0.7) - 1.0 / 0.7).abs() < 1e-12);
        }
        // Γ(α)/Γ(α+1) = 1/α
        assert!((gamma(2.3) / gamma(3.3) - 1.0 / 2.3).abs() < 1e-15);
        assert!(laguerre_basis(0, 1.0, -1.0).is_err());
        // e_0 for α = 1: x^{1/2} e^{-x/2}
        let v = laguerre_basis(0, 1.0, 2.0).unwrap();
        assert!((v - 2f64.sqrt() * (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn affine_action_examples() {
        let e0 = |x: f64| C64::new(laguerre_basis(0, 2.0, x).unwrap(), 0.0);
        let xs = [0.1, 0.7, 2.0, 5.5];
        let id = affine_action(1.0, 0.0, e0, &xs).unwrap();
        for (x, v) in xs.iter().zip(&id) {
            assert!((v - e0(*x)).norm() < 1e-16);
        }
        assert!(affine_action(0.0, 1.0, e0, &xs).is_err());

        // unitarity on a rule scaled to the dilation
        let rule = QuadratureRule::half_line(40, 0.0, 2.0).unwrap();
        let xs: Vec<f64> = rule.nodes().map(|x| x[0]).collect();
        let img = affine_action(2.0, 0.7, e0, &xs).unwrap();
        let norm: f64 = img.iter().zip(rule.weights()).map(|(v, w)| v.norm_sqr() * w).sum();
        assert!((norm - 1.0).abs() < 1e-10);

        // group law
        let (g, g0) = ((2.0, 1.0), (0.5, -1.0));
        let xs = [0.2, 1.0, 3.0];
        let inner = |x: f64| affine_action(g0.0, g0.1, e0, &[x]).unwrap()[0];
        let twice = affine_action(g.0, g.1, inner, &xs).unwrap();
        let (q, p) = compose(g, g0);
        let once = affine_action(q, p, e0, &xs).unwrap();
        for (a, b) in twice.iter().zip(&once) {
            assert!((a - b).norm() < 1e-12);
        }
        let back = inverse_compose(g0, compose(g0, g));
        assert!((back.0 - g.0).abs() < 1e-15 && (back.1 - g.1).abs() < 1e-15);
    }

    #[test]
    fn matrix_elements_match_direct_quadrature() {
        let alpha = 2.0;
        let (q, p) = (1.7, -0.8);
        let u = matrix_elements(q, p, alpha, 3, 4);
        let rule = QuadratureRule::composite_legendre(&[0.0, 80.0], 80, 20).unwrap();
        for i in 0..3 {
            for n in 0..4 {
                let re = rule.integrate(|x| {
                    let x = x[0];
                    let v = C64::from_polar(1.0 / q.sqrt(), p * x) * laguerre_basis(n, alpha, x / q).unwrap();
                    laguerre_basis(i, alpha, x).unwrap() * v.re
                });
                let im = rule.integrate(|x| {
                    let x = x[0];
                    let v = C64::from_polar(1.0 / q.sqrt(), p * x) * laguerre_basis(n, alpha, x / q).unwrap();
                    laguerre_basis(i, alpha, x).unwrap() * v.im
                });
                assert!((u[i * 4 + n] - C64::new(re, im)).norm() < 1e-10, "{i} {n} {} {re} {im}", u[i * 4 + n]);
            }
        }
        let id = matrix_elements(1.0, 0.0, alpha, 4, 4);
        for i in 0..4 {
            for n in 0..4 {
                let target = if i == n { 1.0 } else { 0.0 };
                assert!((id[i * 4 + n] - target).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn kernel_examples() {
        let params = AffineParams::new(1.0, 0.3, 30).unwrap();
        assert_eq!(thermal_kernel(0.4, 1.9, &params), thermal_kernel(1.9, 0.4, &params));
        let xs = [0.3, 1.0, 2.5, 6.0];
        for n in 0..=4 {
            let target = 0.7 * 0.3f64.powi(n as i32);
            let (lambda, residual) = kernel_eigen_factor(n, &xs, &params, thermal_kernel);
            assert!((lambda - target).abs() < 1e-8, "n={n} lambda={lambda}");
            assert!(residual < 1e-8);
        }
        let (_, residual) = kernel_eigen_factor(0, &xs, &params, thermal_kernel_alt);
        assert!(residual > 1e-3);
        assert!((kernel_trace(&params) - 1.0).abs() < 1e-9);
        // kernel against the truncated eigen-expansion
        let s: f64 = params
            .weights()
            .iter()
            .enumerate()
            .map(|(n, w)| w * laguerre_basis(n, 1.0, 0.8).unwrap() * laguerre_basis(n, 1.0, 1.3).unwrap())
            .sum();
        assert!((s - thermal_kernel(0.8, 1.3, &params)).abs() < 1e-12);
    }

    #[test]
    fn admissibility_constant() {
        for &(alpha, t) in &[(2.0, 0.25), (1.0, 0.0), (3.0, 0.5)] {
            let params = AffineParams::new(alpha, t, 24).unwrap();
            let grid = AffineGrid::for_params(&params);
            let c = c_rho_quadrature(&params, &grid);
            assert!((c - params.c_rho_truncated()).abs() < 1e-8, "alpha={alpha} t={t} c={c}");
        }
        let params = AffineParams::new(2.0, 0.25, 24).unwrap();
        assert!((params.c_rho_alt() - 0.75 * PI).abs() < 1e-15);
    }

    #[test]
    fn resolution_on_block() {
        let params = AffineParams::new(2.0, 0.25, 16).unwrap();
        let grid = AffineGrid::for_params(&params);
        let study = affine_resolution_check(&params, &grid, 4);
        assert!(study.fine_defect < 1e-3, "{study:?}");
        assert!(study.converging());
        assert!((study.diagonal_00 - 1.0).abs() < 1e-3);
        assert!(study.offdiagonal_01 < 1e-3);
        let spec = affine_orbit_spec(&params, &grid, 2);
        let c = covariant_c_rho(&spec).unwrap();
        assert!((c - params.c_rho_truncated()).abs() < 1e-8);
    }
}
