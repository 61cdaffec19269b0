//! Displaced thermal states on a truncated Fock space.
//!
//! `ρ_T(z) = D(z) ρ_T D(z)†` with `ρ_T = (1 - t) Σ tⁿ |n⟩⟨n|` resolves the identity
//! on `d²z / π`. Matrix entries are exact elements of the infinite matrices restricted
//! to the first `dim` levels; only operator products feel the truncation.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::numerics::{
    bessel_i_scaled, chunked_reduce, gamma, hyp2f1_terminating, laguerre_sequence, ln_factorial,
    pairwise_sum, QuadratureRule,
};
use crate::operators::{DensityMatrix, OperatorMatrix};
use crate::quantization::{DensityFamily, PointMap};

/// Largest `|z|²` at which Laguerre entries are evaluated.
const MAX_ABS2: f64 = 200.0;
/// Thermal weights below this are dropped from sums over levels.
const WEIGHT_CUTOFF: f64 = 1e-18;
const MAX_LEVELS: usize = 250;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlaneError {
    #[error("Boltzmann factor t = {0} outside [0, 1)")]
    Temperature(f64),
    #[error("Fock dimension must be at least 1")]
    Dimension,
    #[error("|z|² = {abs2} exceeds the truncation threshold dim/4 = {limit}")]
    Threshold { abs2: f64, limit: f64 },
    #[error("function is not finite at z = {0}")]
    NonFinite(C64),
}

/// Ladder operators on `span{|0⟩, …, |dim-1⟩}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FockSpace {
    pub dim: usize,
}

impl FockSpace {
    pub fn new(dim: usize) -> Result<Self, PlaneError> {
        if dim == 0 {
            return Err(PlaneError::Dimension);
        }
        Ok(Self { dim })
    }

    /// `a |n⟩ = √n |n-1⟩`
    pub fn annihilation(&self) -> OperatorMatrix {
        let mut a = OperatorMatrix::zeros(self.dim);
        for n in 1..self.dim {
            a[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
        }
        a
    }

    pub fn creation(&self) -> OperatorMatrix {
        self.annihilation().adjoint()
    }

    pub fn number(&self) -> OperatorMatrix {
        OperatorMatrix::real_diagonal(&(0..self.dim).map(|n| n as f64).collect::<Vec<_>>())
    }

    /// `Q = (a + a†)/√2`
    pub fn position(&self) -> OperatorMatrix {
        let a = self.annihilation();
        (&a + &a.adjoint()).scale_real(0.5f64.sqrt())
    }

    /// `P = (a - a†)/(√2 i)`
    pub fn momentum(&self) -> OperatorMatrix {
        let a = self.annihilation();
        (&a - &a.adjoint()).scale(C64::new(0.0, -(0.5f64.sqrt())))
    }

    /// `Σ (-1)ⁿ |n⟩⟨n|`
    pub fn parity(&self) -> OperatorMatrix {
        OperatorMatrix::real_diagonal(&(0..self.dim).map(|n| if n % 2 == 0 { 1.0 } else { -1.0 }).collect::<Vec<_>>())
    }

    /// `U(θ)|n⟩ = e^{i(n + ν)θ}|n⟩`
    pub fn torus(&self, theta: f64, nu: f64) -> OperatorMatrix {
        OperatorMatrix::diagonal(
            &(0..self.dim)
                .map(|n| C64::from_polar(1.0, (n as f64 + nu) * theta))
                .collect::<Vec<_>>(),
        )
    }

    /// `[a, a†] - I`; zero except the corner entry `-dim`.
    pub fn ccr_defect(&self) -> OperatorMatrix {
        let a = self.annihilation();
        let mut c = a.commutator(&a.adjoint());
        c.add_scaled_real(-1.0, &OperatorMatrix::identity(self.dim));
        c
    }

    /// Top-left half, where truncation does not reach operator identities.
    pub fn protected_block(&self) -> usize {
        (self.dim / 2).max(1)
    }
}

/// Thermal state parameters; `t = e^{-ħω/k_B T}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThermalParams {
    pub t: f64,
    pub dim: usize,
}

impl ThermalParams {
    pub fn new(t: f64, dim: usize) -> Result<Self, PlaneError> {
        if !(0.0..1.0).contains(&t) {
            return Err(PlaneError::Temperature(t));
        }
        if dim == 0 {
            return Err(PlaneError::Dimension);
        }
        Ok(Self { t, dim })
    }

    pub fn fock(&self) -> FockSpace {
        FockSpace { dim: self.dim }
    }

    /// `(1 - t) tⁿ` for `n < dim`.
    pub fn weights(&self) -> Vec<f64> {
        self.level_weights(self.dim)
    }

    fn level_weights(&self, count: usize) -> Vec<f64> {
        (0..count).map(|n| (1.0 - self.t) * self.t.powi(n as i32)).collect()
    }

    /// `1 - t^dim`, the thermal mass kept by the truncation.
    pub fn truncation_mass(&self) -> f64 {
        1.0 - self.t.powi(self.dim as i32)
    }

    /// Number of levels with weight above the cutoff.
    pub fn levels(&self) -> usize {
        if self.t == 0.0 {
            return 1;
        }
        let n = (WEIGHT_CUTOFF.ln() / self.t.ln()).ceil() as usize + 1;
        n.clamp(1, MAX_LEVELS)
    }

    /// `s = -coth(ħω / 2k_B T) = -(1 + t)/(1 - t)`
    pub fn s(&self) -> f64 {
        -(1.0 + self.t) / (1.0 - self.t)
    }

    /// `tr ρ_T² = (1 - t)/(1 + t)`
    pub fn purity(&self) -> f64 {
        (1.0 - self.t) / (1.0 + self.t)
    }

    /// `E₀ = (1 - s)/2`, lowest eigenvalue of `A_{|z|²}`.
    pub fn ground_energy(&self) -> f64 {
        0.5 * (1.0 - self.s())
    }

    /// `E_m = [min A_{q²} + min A_{p²}]/2 = -s/2`.
    pub fn potential_minimum(&self) -> f64 {
        -0.5 * self.s()
    }

    pub fn rho(&self) -> DensityMatrix {
        DensityMatrix::new_unchecked(OperatorMatrix::real_diagonal(&self.weights()))
    }
}

/// `D_{mn}(x)` for real `x ≥ 0`, `m < rows`, `n < cols`, row-major.
fn displacement_real(x: f64, rows: usize, cols: usize) -> Vec<f64> {
    let u = x * x;
    let mut out = vec![0.0; rows * cols];
    if x == 0.0 {
        for k in 0..rows.min(cols) {
            out[k * cols + k] = 1.0;
        }
        return out;
    }
    let lnx = x.ln();
    // m ≥ n: √(n!/m!) e^{-u/2} x^{m-n} L_n^{(m-n)}(u)
    for k in 0..rows {
        let count = cols.min(rows - k);
        if count == 0 {
            break;
        }
        let ls = laguerre_sequence(count - 1, k as f64, u).expect("integer order");
        for (n, l) in ls.iter().enumerate() {
            let m = n + k;
            let pre = (0.5 * (ln_factorial(n) - ln_factorial(m)) - 0.5 * u + k as f64 * lnx).exp();
            out[m * cols + n] = pre * l;
        }
    }
    // n > m: √(m!/n!) e^{-u/2} (-x)^{n-m} L_m^{(n-m)}(u)
    for k in 1..cols {
        let count = rows.min(cols - k);
        if count == 0 {
            break;
        }
        let ls = laguerre_sequence(count - 1, k as f64, u).expect("integer order");
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        for (m, l) in ls.iter().enumerate() {
            let n = m + k;
            let pre = (0.5 * (ln_factorial(m) - ln_factorial(n)) - 0.5 * u + k as f64 * lnx).exp();
            out[m * cols + n] = sign * pre * l;
        }
    }
    out
}

/// `⟨m|D(z)|n⟩` for `m, n < dim`.
pub fn displacement(z: C64, dim: usize) -> OperatorMatrix {
    let (x, g) = z.to_polar();
    let real = displacement_real(x, dim, dim);
    OperatorMatrix::from_fn(dim, |m, n| {
        C64::from_polar(real[m * dim + n], (m as f64 - n as f64) * g)
    })
}

/// Real radial matrix `⟨m|ρ_T(√u)|m′⟩`, exact over all thermal levels above the cutoff.
pub fn radial_density(u: f64, params: &ThermalParams) -> Vec<f64> {
    let dim = params.dim;
    let levels = params.levels();
    let d = displacement_real(u.max(0.0).sqrt(), dim, levels);
    let w = params.level_weights(levels);
    let mut out = vec![0.0; dim * dim];
    for m in 0..dim {
        let rm = &d[m * levels..(m + 1) * levels];
        for mp in m..dim {
            let rp = &d[mp * levels..(mp + 1) * levels];
            let v: f64 = (0..levels).map(|n| w[n] * rm[n] * rp[n]).sum();
            out[m * dim + mp] = v;
            out[mp * dim + m] = v;
        }
    }
    out
}

/// `⟨m|ρ_T(z)|m′⟩ = e^{i(m - m′) arg z} ⟨m|ρ_T(|z|)|m′⟩`, no threshold check.
pub fn thermal_block(z: C64, params: &ThermalParams) -> OperatorMatrix {
    let (x, g) = z.to_polar();
    let dim = params.dim;
    let r = radial_density((x * x).min(MAX_ABS2), params);
    OperatorMatrix::from_fn(dim, |m, mp| {
        C64::from_polar(r[m * dim + mp], (m as f64 - mp as f64) * g)
    })
}

/// `D(z) ρ_T D(z)†` restricted to the truncated space.
pub fn displaced_thermal(z: C64, params: &ThermalParams) -> Result<DensityMatrix, PlaneError> {
    let limit = params.dim as f64 / 4.0;
    if z.norm_sqr() >= limit {
        return Err(PlaneError::Threshold {
            abs2: z.norm_sqr(),
            limit,
        });
    }
    Ok(DensityMatrix::new_unchecked(thermal_block(z, params)))
}

/// `tr(ρ_T(z₀) ρ_T(z))` from the truncated matrices.
pub fn prob_matrix(z0: C64, z: C64, params: &ThermalParams) -> Result<f64, PlaneError> {
    let a = displaced_thermal(z0, params)?;
    let b = displaced_thermal(z, params)?;
    Ok(a.trace_product(&b).re)
}

/// Double series over levels `n, n′ < levels` with coefficient `c(n, n′)` in front of
/// `w^{n′-n} (L_n^{(n′-n)}(w))²`.
fn level_series(w: f64, t: f64, levels: usize, coeff: impl Fn(usize, usize) -> f64) -> f64 {
    let mut terms = Vec::new();
    for k in 0..levels {
        let ls = laguerre_sequence(levels - 1 - k, k as f64, w).expect("integer order");
        for (n, l) in ls.iter().enumerate() {
            let np = n + k;
            let c = coeff(n, np);
            if c == 0.0 {
                continue;
            }
            let mult = if k == 0 { 1.0 } else { 2.0 };
            let wk = if k == 0 { 1.0 } else { w.powi(k as i32) };
            terms.push(mult * c * t.powi((n + np) as i32) * wk * l * l);
        }
    }
    pairwise_sum(&terms)
}

/// `(1 - t)² e^{-w} [Σ t²ⁿ L_n(w)² + 2 Σ_{n′>n} t^{n+n′} (n!/n′!) w^{n′-n} (L_n^{(n′-n)}(w))²]`, `w = |z - z₀|²`.
pub fn prob_series(w: f64, t: f64, levels: usize) -> f64 {
    let s = level_series(w, t, levels, |n, np| (ln_factorial(n) - ln_factorial(np)).exp());
    (1.0 - t).powi(2) * (-w).exp() * s
}

/// The series with the ratio `n/n′` in place of `n!/n′!`.
pub fn prob_series_alt(w: f64, t: f64, levels: usize) -> f64 {
    let s = level_series(w, t, levels, |n, np| if np == n { 1.0 } else { n as f64 / np as f64 });
    (1.0 - t).powi(2) * (-w).exp() * s
}

/// `Σ_{n<levels} t²ⁿ L_n(w)²`
pub fn diagonal_sum(w: f64, t: f64, levels: usize) -> f64 {
    let ls = laguerre_sequence(levels.max(1) - 1, 0.0, w).expect("integer order");
    let terms: Vec<f64> = ls.iter().enumerate().map(|(n, l)| t.powi(2 * n as i32) * l * l).collect();
    pairwise_sum(&terms)
}

/// `e^{-2w t²/(1-t²)} I₀(2tw/(1-t²)) / (1 - t²)`
pub fn diagonal_sum_closed(w: f64, t: f64) -> f64 {
    let d = 1.0 - t * t;
    let arg = 2.0 * t * w / d;
    let i0 = bessel_i_scaled(0.0, arg).expect("order zero");
    (arg - 2.0 * w * t * t / d).exp() * i0 / d
}

/// The closed form with exponent `-w t²/(1-t²)`.
pub fn diagonal_sum_closed_alt(w: f64, t: f64) -> f64 {
    let d = 1.0 - t * t;
    let arg = 2.0 * t * w / d;
    let i0 = bessel_i_scaled(0.0, arg).expect("order zero");
    (arg - w * t * t / d).exp() * i0 / d
}

/// `((1 - t)/(1 + t)) e^{-w (1 - t)/(1 + t)}`: the overlap of two Gaussian states.
pub fn prob_closed(w: f64, t: f64) -> f64 {
    let p = (1.0 - t) / (1.0 + t);
    p * (-w * p).exp()
}

/// `√2 √(tr ρ_T² - p)`
pub fn hs_distance_closed(w: f64, t: f64) -> f64 {
    let p = (1.0 - t) / (1.0 + t);
    (2.0 * (p - prob_closed(w, t))).max(0.0).sqrt()
}

/// The form `√2 √(((1 - t)/(1 + t))² - p)`.
pub fn hs_distance_closed_alt(w: f64, t: f64) -> f64 {
    let p = (1.0 - t) / (1.0 + t);
    (2.0 * (p * p - prob_closed(w, t))).sqrt()
}

/// `δ = |z - z₀| √((1 - t)/(1 + t))`
pub fn pseudo_distance_closed(w: f64, t: f64) -> f64 {
    (w * (1.0 - t) / (1.0 + t)).sqrt()
}

/// `n_T = δ - |z - z₀|`
pub fn thermal_excess(w: f64, t: f64) -> f64 {
    pseudo_distance_closed(w, t) - w.sqrt()
}

/// Polar grid in `|z|` and `γ = arg z`; `d²z/π = 2|z| d|z| dγ/2π`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlaneGrid {
    /// Largest `|z|²` covered.
    pub u_max: f64,
    /// Panel width in `|z|`.
    pub panel_width: f64,
    pub nodes_per_panel: usize,
    pub angular: usize,
}

impl PlaneGrid {
    /// Radial range covering the thermal spread of every level below `dim`.
    pub fn for_params(params: &ThermalParams) -> Self {
        let m = params.dim as f64;
        let spread = ((1.0 + params.t) / (1.0 - params.t) * (m + 1.0)).sqrt();
        let u_max = (m + 10.0 * spread + 20.0 / (1.0 - params.t)).min(MAX_ABS2);
        Self {
            u_max,
            panel_width: 0.5,
            nodes_per_panel: 16,
            angular: 4 * params.dim + 64,
        }
    }

    pub fn with_radius(mut self, radius: f64) -> Self {
        self.u_max = (radius * radius).min(MAX_ABS2);
        self
    }

    /// Rule in `u = |z|²` (Gauss–Legendre in `|z|` underneath), plain `du` weights.
    pub fn radial_rule(&self) -> QuadratureRule {
        let r_max = self.u_max.sqrt();
        let panels = (r_max / self.panel_width).ceil().max(1.0) as usize;
        QuadratureRule::composite_legendre(&[0.0, r_max], panels, self.nodes_per_panel)
            .expect("positive node count")
            .mapped(1, |x| (vec![x[0] * x[0]], 2.0 * x[0]))
    }

    /// Trapezoid in `γ` with weights summing to one.
    pub fn angular_rule(&self) -> QuadratureRule {
        QuadratureRule::periodic_trapezoid(self.angular, 0.0, 2.0 * PI, 1.0 / (2.0 * PI))
            .expect("positive node count")
    }
}

/// Composite Gauss–Legendre in `γ ∈ [0, 2π)`, split at `breaks`, weights summing to one.
pub fn angular_panels(panels: usize, nodes: usize, breaks: &[f64]) -> QuadratureRule {
    let mut cuts: Vec<f64> = (0..=panels).map(|k| 2.0 * PI * k as f64 / panels as f64).collect();
    cuts.extend(breaks.iter().map(|b| b.rem_euclid(2.0 * PI)));
    QuadratureRule::composite_legendre(&cuts, 1, nodes)
        .expect("positive node count")
        .scaled(1.0 / (2.0 * PI))
}

/// Quantizer for the plane that separates radial matrices from angular Fourier factors:
/// `A_f[m, m′] = ∫ du ⟨m|ρ_T(√u)|m′⟩ ∫ dγ/2π f(√u e^{iγ}) e^{i(m-m′)γ}`.
#[derive(Clone)]
pub struct PlaneQuantizer {
    params: ThermalParams,
    grid: PlaneGrid,
    radial_nodes: Vec<f64>,
    radial_weights: Vec<f64>,
    radial: Arc<Vec<Vec<f64>>>,
    angular: QuadratureRule,
}

impl PlaneQuantizer {
    pub fn new(params: ThermalParams, grid: PlaneGrid) -> Self {
        let rule = grid.radial_rule();
        let radial_nodes: Vec<f64> = rule.nodes().map(|x| x[0]).collect();
        let radial_weights = rule.weights().to_vec();
        let radial = radial_nodes.par_iter().map(|&u| radial_density(u, &params)).collect();
        let angular = grid.angular_rule();
        Self {
            params,
            grid,
            radial_nodes,
            radial_weights,
            radial: Arc::new(radial),
            angular,
        }
    }

    pub fn params(&self) -> &ThermalParams {
        &self.params
    }

    pub fn grid(&self) -> &PlaneGrid {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.params.dim
    }

    pub fn with_angular(&self, rule: QuadratureRule) -> Self {
        let mut out = self.clone();
        out.angular = rule;
        out
    }

    /// Quantize from angular Fourier data: `coeff(u, out)` fills
    /// `out[k + dim - 1] = ∫ dγ/2π f(√u e^{iγ}) e^{ikγ}` for `|k| < dim`.
    pub fn quantize_fourier<C>(&self, coeff: C) -> Result<OperatorMatrix, PlaneError>
    where
        C: Fn(f64, &mut [C64]) -> Result<(), PlaneError> + Sync,
    {
        let dim = self.dim();
        let reduced = chunked_reduce(
            self.radial_nodes.len(),
            16,
            |range| -> Result<Vec<C64>, PlaneError> {
                let mut acc = vec![C64::new(0.0, 0.0); dim * dim];
                let mut c = vec![C64::new(0.0, 0.0); 2 * dim - 1];
                for j in range {
                    coeff(self.radial_nodes[j], &mut c)?;
                    let r = &self.radial[j];
                    let w = self.radial_weights[j];
                    for m in 0..dim {
                        for mp in 0..dim {
                            acc[m * dim + mp] += c[m + dim - 1 - mp] * (w * r[m * dim + mp]);
                        }
                    }
                }
                Ok(acc)
            },
            |a, b| {
                let (mut a, b) = (a?, b?);
                a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                Ok(a)
            },
        )
        .expect("non-empty radial rule")?;
        Ok(OperatorMatrix::from_row_major(dim, reduced).expect("square data"))
    }

    /// `A_f = ∫ f(z) ρ_T(z) d²z/π` on the polar grid.
    pub fn quantize<F>(&self, f: F) -> Result<OperatorMatrix, PlaneError>
    where
        F: Fn(C64) -> C64 + Sync,
    {
        let dim = self.dim();
        let gammas: Vec<f64> = self.angular.nodes().map(|x| x[0]).collect();
        let weights = self.angular.weights();
        let phases: Vec<Vec<C64>> = gammas
            .iter()
            .map(|&g| {
                (0..2 * dim - 1)
                    .map(|i| C64::from_polar(1.0, (i as f64 - (dim - 1) as f64) * g))
                    .collect()
            })
            .collect();
        self.quantize_fourier(|u, out| {
            out.iter_mut().for_each(|c| *c = C64::new(0.0, 0.0));
            let x = u.sqrt();
            for (j, &g) in gammas.iter().enumerate() {
                let z = C64::from_polar(x, g);
                let v = f(z);
                if !v.re.is_finite() || !v.im.is_finite() {
                    return Err(PlaneError::NonFinite(z));
                }
                let v = v * weights[j];
                for (c, p) in out.iter_mut().zip(&phases[j]) {
                    *c += v * p;
                }
            }
            Ok(())
        })
    }

    pub fn resolution(&self) -> OperatorMatrix {
        self.quantize(|_| C64::new(1.0, 0.0)).expect("finite constant")
    }

    /// `‖Σ w ρ - I‖_max` on the top-left `block`.
    pub fn resolution_defect(&self, block: usize) -> f64 {
        self.resolution()
            .block_max_abs_diff(&OperatorMatrix::identity(self.dim()), block)
    }

    /// Generic density family on `(Re z, Im z)` over the same polar grid.
    pub fn family(&self) -> DensityFamily {
        let params = self.params;
        let map: PointMap = Arc::new(move |x: &[f64]| thermal_block(C64::new(x[0], x[1]), &params));
        let rule = self
            .grid
            .radial_rule()
            .product(&self.angular)
            .mapped(2, |p| {
                let z = C64::from_polar(p[0].sqrt(), p[1]);
                (vec![z.re, z.im], 1.0)
            });
        DensityFamily::new(
            format!("plane(t={}, dim={})", params.t, params.dim),
            params.dim,
            rule,
            map,
            1e-6,
        )
    }
}

/// Closed forms of the quantized canonical pair and quadratics.
pub struct PlaneClosedForms {
    pub q: OperatorMatrix,
    pub p: OperatorMatrix,
    pub q2: OperatorMatrix,
    pub p2: OperatorMatrix,
    pub abs2: OperatorMatrix,
}

/// `A_q = Q`, `A_p = P`, `A_{q²} = Q² - s/2`, `A_{p²} = P² - s/2`, `A_{|z|²} = N + (1 - s)/2`.
pub fn closed_forms(params: &ThermalParams) -> PlaneClosedForms {
    let fock = params.fock();
    let id = OperatorMatrix::identity(params.dim);
    let q = fock.position();
    let p = fock.momentum();
    let mut q2 = q.matmul(&q);
    q2.add_scaled_real(-0.5 * params.s(), &id);
    let mut p2 = p.matmul(&p);
    p2.add_scaled_real(-0.5 * params.s(), &id);
    let mut abs2 = fock.number();
    abs2.add_scaled_real(params.ground_energy(), &id);
    PlaneClosedForms { q, p, q2, p2, abs2 }
}

/// `q = √2 Re z`
pub fn q_of(z: C64) -> f64 {
    2f64.sqrt() * z.re
}

/// `p = √2 Im z`
pub fn p_of(z: C64) -> f64 {
    2f64.sqrt() * z.im
}

/// `𝔤(γ) = γ mod 2π`
pub fn angle_function(gamma: f64) -> f64 {
    gamma.rem_euclid(2.0 * PI)
}

/// `F_{mm′}` in the alternative form:
/// `(1 - t) Γ((m+m′)/2 + 1)/√(m m′) (1 - t)^{(m′-m)/2} ₂F₁(-m, (m′-m)/2; -(m+m′)/2; t)`.
/// `None` where the expression is singular (`m` or `m′` zero, or a vanishing denominator).
pub fn phase_f_alt(m: usize, mp: usize, t: f64) -> Option<f64> {
    if m == 0 || mp == 0 {
        return None;
    }
    let (lo, hi) = (m.min(mp), m.max(mp));
    let h = phase_hyp(lo, hi, t)?;
    Some((1.0 - t) * gamma(0.5 * (lo + hi) as f64 + 1.0) / ((lo * hi) as f64).sqrt() * h)
}

/// `F_{mm′} = Γ((m+m′)/2 + 1)/√(m! m′!) (1 - t)^{(m′-m)/2} ₂F₁(-m, (m′-m)/2; -(m+m′)/2; t)` with `m ≤ m′`,
/// the value of `∫_0^∞ ⟨m|ρ_T(√J)|m′⟩ dJ`.
pub fn phase_f(m: usize, mp: usize, t: f64) -> f64 {
    let (lo, hi) = (m.min(mp), m.max(mp));
    let h = phase_hyp(lo, hi, t).expect("c = -(m+m')/2 < -m for m < m'");
    let ln = crate::numerics::ln_gamma(0.5 * (lo + hi) as f64 + 1.0) - 0.5 * (ln_factorial(lo) + ln_factorial(hi));
    ln.exp() * h
}

fn phase_hyp(lo: usize, hi: usize, t: f64) -> Option<f64> {
    let b = 0.5 * (hi - lo) as f64;
    let c = -0.5 * (lo + hi) as f64;
    let h = hyp2f1_terminating(lo, b, c, t).ok()?;
    Some((1.0 - t).powf(b) * h)
}

/// `πI + i Σ_{m≠m′} F_{mm′}/(m′ - m) |m⟩⟨m′|` from a coefficient table.
pub fn phase_from_coefficients(dim: usize, f: impl Fn(usize, usize) -> f64) -> OperatorMatrix {
    OperatorMatrix::from_fn(dim, |m, mp| {
        if m == mp {
            C64::new(PI, 0.0)
        } else {
            C64::new(0.0, f(m, mp) / (mp as f64 - m as f64))
        }
    })
}

/// Phase operator by direct quadrature of `∫dJ ∫dγ/2π 𝔤(γ - θ₀) ρ_T(√J e^{iγ})`,
/// angular panels split at the jump.
pub fn phase_quadrature(q: &PlaneQuantizer, theta0: f64) -> Result<OperatorMatrix, PlaneError> {
    let panels = (q.dim() / 2).max(4);
    let rule = angular_panels(panels, 16, &[theta0]);
    q.with_angular(rule)
        .quantize(|z| C64::new(angle_function(z.arg() - theta0), 0.0))
}

/// One row of the phase comparison table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseEntry {
    pub m: usize,
    pub mp: usize,
    pub quadrature: f64,
    pub closed: f64,
    pub alt: Option<f64>,
}

/// `F_{mm′}` read off the quadrature phase operator, against the closed forms.
pub fn phase_table(a: &OperatorMatrix, t: f64, size: usize) -> Vec<PhaseEntry> {
    let mut out = Vec::new();
    for m in 0..size.min(a.dim()) {
        for mp in m + 1..size.min(a.dim()) {
            out.push(PhaseEntry {
                m,
                mp,
                quadrature: a[(m, mp)].im * (mp as f64 - m as f64),
                closed: phase_f(m, mp, t),
                alt: phase_f_alt(m, mp, t),
            });
        }
    }
    out
}

/// Defects of the four covariance identities on the protected block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CovarianceReport {
    pub dim: usize,
    pub translation: f64,
    pub rotation: f64,
    pub parity: f64,
    pub conjugation: f64,
}

impl CovarianceReport {
    pub fn worst(&self) -> f64 {
        self.translation.max(self.rotation).max(self.parity).max(self.conjugation)
    }
}

fn bump(z: C64) -> C64 {
    let c = C64::new(0.3, -0.2);
    C64::new((-(z - c).norm_sqr() / 2.0).exp(), 0.0)
}

/// Test function without symmetry: Gaussian bump plus an angular harmonic.
fn probe(z: C64) -> C64 {
    let harmonic = if z.norm_sqr() == 0.0 {
        0.0
    } else {
        (z.arg()).cos() * (-z.norm_sqr() / 8.0).exp()
    };
    bump(z) + C64::new(0.4 * harmonic, 0.0)
}

pub fn covariance_suite(q: &PlaneQuantizer, z0: C64, theta: f64) -> Result<CovarianceReport, PlaneError> {
    let dim = q.dim();
    let fock = q.params().fock();
    let block = fock.protected_block();

    let a = q.quantize(bump)?;
    let moved = q.quantize(|z| bump(z - z0))?;
    let translation = a.conjugate_by(&displacement(z0, dim)).block_max_abs_diff(&moved, block);

    let a = q.quantize(probe)?;
    let rot = q.quantize(|z| probe(z * C64::from_polar(1.0, -theta)))?;
    let rotation = a.conjugate_by(&fock.torus(theta, 0.3)).block_max_abs_diff(&rot, block);

    let par = q.quantize(|z| probe(-z))?;
    let parity = a.conjugate_by(&fock.parity()).block_max_abs_diff(&par, block);

    let g = |z: C64| probe(z) * C64::from_polar(1.0, z.arg()) * C64::new(0.5, 1.0);
    let ag = q.quantize(g)?;
    let agbar = q.quantize(|z| g(z).conj())?;
    let conjugation = ag.adjoint().block_max_abs_diff(&agbar, block);

    Ok(CovarianceReport {
        dim,
        translation,
        rotation,
        parity,
        conjugation,
    })
}
