//! Real 2×2 density matrices on the unit circle.
//!
//! Points of the unit disk `(r, Φ)` label real densities
//! `R(r, Φ) = ½(I + r 𝓡(Φ) σ₃)`; the circle family is `ρ_{r,φ}(θ) = R(r, 2(φ + θ))`
//! on the measure `dθ/π`.

use std::f64::consts::{FRAC_PI_4, PI};
use std::sync::Arc;

use num_complex::Complex64 as C64;
use serde::Serialize;
use thiserror::Error;

use crate::numerics::{make_rule, pairwise_sum, QuadratureRule, RuleSpec};
use crate::operators::{DensityMatrix, OperatorMatrix};
use crate::quantization::{DensityFamily, GroupOrbitSpec, PointMap};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CircleError {
    #[error("disk radius r = {0} outside [0, 1]")]
    Radius(f64),
    #[error("a = {a}, b = {b} do not define a density (determinant {det})")]
    NotDensity { a: f64, b: f64, det: f64 },
}

fn check_radius(r: f64) -> Result<(), CircleError> {
    if !(0.0..=1.0).contains(&r) {
        return Err(CircleError::Radius(r));
    }
    Ok(())
}

/// Canonical parameters: `φ` mod π, `θ` mod 2π, and `φ = 0` whenever `r = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CircleDensityParams {
    pub r: f64,
    pub phi: f64,
    pub theta: f64,
}

impl CircleDensityParams {
    pub fn new(r: f64, phi: f64, theta: f64) -> Result<Self, CircleError> {
        check_radius(r)?;
        let phi = if r == 0.0 { 0.0 } else { phi.rem_euclid(PI) };
        Ok(Self {
            r,
            phi,
            theta: theta.rem_euclid(2.0 * PI),
        })
    }

    /// Doubled polar angle `Φ = 2(φ + θ)` of the disk point.
    pub fn big_phi(&self) -> f64 {
        2.0 * (self.phi + self.theta)
    }

    pub fn matrix(&self) -> OperatorMatrix {
        r_matrix(self.r, self.big_phi())
    }
}

/// Rotation `𝓡(ω)` of the plane.
pub fn rotation(omega: f64) -> OperatorMatrix {
    let (s, c) = omega.sin_cos();
    OperatorMatrix::from_real_rows(&[&[c, -s], &[s, c]])
}

pub fn sigma2() -> OperatorMatrix {
    OperatorMatrix::from_rows(&[
        &[C64::new(0.0, 0.0), C64::new(0.0, -1.0)],
        &[C64::new(0.0, 1.0), C64::new(0.0, 0.0)],
    ])
}

pub fn sigma3() -> OperatorMatrix {
    OperatorMatrix::real_diagonal(&[1.0, -1.0])
}

/// `R(r, Φ) = ½(I + r 𝓡(Φ) σ₃)`
pub fn r_matrix(r: f64, big_phi: f64) -> OperatorMatrix {
    let (s, c) = big_phi.sin_cos();
    OperatorMatrix::from_real_rows(&[
        &[0.5 + 0.5 * r * c, 0.5 * r * s],
        &[0.5 * r * s, 0.5 - 0.5 * r * c],
    ])
}

/// `ρ_{r,φ}(θ) = 𝓡(θ) ρ_{r,φ} 𝓡(-θ) = ρ_{r,φ+θ}`
pub fn rho_circle(r: f64, phi: f64, theta: f64) -> Result<DensityMatrix, CircleError> {
    let p = CircleDensityParams::new(r, phi, theta)?;
    Ok(DensityMatrix::new_unchecked(p.matrix()))
}

/// Spectral data of `M(a, b) = [[a, b], [b, 1 - a]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AbDecomposition {
    /// Largest eigenvalue.
    pub lambda: f64,
    pub r: f64,
    /// Eigenvector angle in `[-π/2, π/2]`.
    pub phi: f64,
}

pub fn from_ab(a: f64, b: f64) -> Result<AbDecomposition, CircleError> {
    let det = a * (1.0 - a) - b * b;
    if !(0.0..=1.0).contains(&a) || det < -1e-15 {
        return Err(CircleError::NotDensity { a, b, det });
    }
    let det = det.max(0.0);
    let lambda = 0.5 * (1.0 + (1.0 - 4.0 * det).max(0.0).sqrt());
    let r = 2.0 * lambda - 1.0;
    let phi = if r == 0.0 {
        0.0
    } else {
        0.5 * b.atan2(a - 0.5)
    };
    Ok(AbDecomposition { lambda, r, phi })
}

/// Inverse of [`from_ab`]: `a - ½ = (r/2) cos 2φ`, `b = (r/2) sin 2φ`.
pub fn to_ab(r: f64, phi: f64) -> (f64, f64) {
    let (s, c) = (2.0 * phi).sin_cos();
    (0.5 + 0.5 * r * c, 0.5 * r * s)
}

/// `λ |φ⟩⟨φ| + (1 - λ) |φ + π/2⟩⟨φ + π/2|`
pub fn spectral_matrix(d: &AbDecomposition) -> OperatorMatrix {
    let ket = |a: f64| [C64::new(a.cos(), 0.0), C64::new(a.sin(), 0.0)];
    let mut m = OperatorMatrix::projector(&ket(d.phi)).scale_real(d.lambda);
    m.add_scaled_real(1.0 - d.lambda, &OperatorMatrix::projector(&ket(d.phi + 0.5 * PI)));
    m
}

/// Products of two real densities against their closed forms.
#[derive(Debug, Clone, Serialize)]
pub struct AlgebraReport {
    pub product_defect: f64,
    pub commutator_defect: f64,
    pub anticommutator_defect: f64,
    /// Distance from the commutator to `-i r r' sin(Φ - Φ') σ₂` (no factor ½).
    pub alt_commutator_defect: f64,
    /// Distance from the anticommutator to `ρ + ρ' + (cos(Φ - Φ') - ½) I`.
    pub alt_anticommutator_defect: f64,
}

pub struct Algebra {
    pub product: OperatorMatrix,
    pub commutator: OperatorMatrix,
    pub anticommutator: OperatorMatrix,
}

pub fn product_and_algebra(p1: &CircleDensityParams, p2: &CircleDensityParams) -> (Algebra, AlgebraReport) {
    let (r, rp) = (p1.r, p2.r);
    let (big, bigp) = (p1.big_phi(), p2.big_phi());
    let rho = p1.matrix();
    let rhop = p2.matrix();
    let product = rho.matmul(&rhop);
    let commutator = rho.commutator(&rhop);
    let anticommutator = rho.anticommutator(&rhop);

    let id = OperatorMatrix::identity(2);
    let mut product_formula = &rho + &rhop;
    product_formula.add_scaled_real(0.5 * r * rp, &rotation(big - bigp));
    product_formula.add_scaled_real(-0.5, &id);
    let product_formula = product_formula.scale_real(0.5);

    let delta = big - bigp;
    let comm_formula = sigma2().scale(C64::new(0.0, -0.5 * r * rp * delta.sin()));
    let comm_alt = sigma2().scale(C64::new(0.0, -r * rp * delta.sin()));
    let mut anti_formula = &rho + &rhop;
    anti_formula.add_scaled_real(0.5 * r * rp * delta.cos() - 0.5, &id);
    let mut anti_alt = &rho + &rhop;
    anti_alt.add_scaled_real(delta.cos() - 0.5, &id);

    let report = AlgebraReport {
        product_defect: product.max_abs_diff(&product_formula),
        commutator_defect: commutator.max_abs_diff(&comm_formula),
        anticommutator_defect: anticommutator.max_abs_diff(&anti_formula),
        alt_commutator_defect: commutator.max_abs_diff(&comm_alt),
        alt_anticommutator_defect: anticommutator.max_abs_diff(&anti_alt),
    };
    (
        Algebra {
            product,
            commutator,
            anticommutator,
        },
        report,
    )
}

/// Defects of the four disk integrals of `R(r, θ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MarginalReport {
    /// `(1/π) ∫ R(r, θ) dθ = I`
    pub angular: f64,
    /// `(1/π) ∫ R(r, θ + 2ω) dω = I`
    pub rotated: f64,
    /// `∫_0^1 R(r, θ) r dr = (1/3) R(1, θ) + (1/12) I`, worst over sampled θ
    pub radial: f64,
    /// `(2/π) ∫_𝒟 R dS = I`
    pub disk: f64,
}

pub fn marginal_integrals(r: f64, nodes: usize) -> Result<MarginalReport, CircleError> {
    check_radius(r)?;
    let id = OperatorMatrix::identity(2);
    let trap = make_rule(&RuleSpec::circle(nodes, 1.0 / PI)).expect("positive node count");
    let integrate = |rule: &QuadratureRule, f: &dyn Fn(&[f64]) -> OperatorMatrix| {
        let mut acc = OperatorMatrix::zeros(2);
        for (x, w) in rule.nodes().zip(rule.weights()) {
            acc.add_scaled_real(*w, &f(x));
        }
        acc
    };
    let angular = integrate(&trap, &|x| r_matrix(r, x[0])).max_abs_diff(&id);
    let theta0 = 0.37;
    let rotated = integrate(&trap, &|x| r_matrix(r, theta0 + 2.0 * x[0])).max_abs_diff(&id);
    let radial_rule = QuadratureRule::gauss_legendre(nodes.max(2), 0.0, 1.0).expect("positive node count");
    let mut radial: f64 = 0.0;
    for k in 0..8 {
        let theta = 2.0 * PI * k as f64 / 8.0;
        let lhs = integrate(&radial_rule, &|x| r_matrix(x[0], theta).scale_real(x[0]));
        let mut rhs = r_matrix(1.0, theta).scale_real(1.0 / 3.0);
        rhs.add_scaled_real(1.0 / 12.0, &id);
        radial = radial.max(lhs.max_abs_diff(&rhs));
    }
    let disk_rule = radial_rule.product(&trap.scaled(PI)).scaled(2.0 / PI);
    let disk = integrate(&disk_rule, &|x| r_matrix(x[0], x[1]).scale_real(x[0])).max_abs_diff(&id);
    Ok(MarginalReport {
        angular,
        rotated,
        radial,
        disk,
    })
}

/// Circle family on a trapezoid rule in θ with weight `1/π`.
pub fn circle_family(r: f64, phi: f64, nodes: usize) -> Result<DensityFamily, CircleError> {
    let rule = make_rule(&RuleSpec::circle(nodes, 1.0 / PI)).expect("positive node count");
    circle_family_on(r, phi, rule)
}

/// Gauss–Legendre panels on `[0, 2π)` split at `breaks`, weighted `dθ/π`.
pub fn panel_rule(nodes_per_panel: usize, breaks: &[f64]) -> QuadratureRule {
    let mut cuts: Vec<f64> = breaks.iter().map(|b| b.rem_euclid(2.0 * PI)).collect();
    cuts.extend([0.0, 2.0 * PI]);
    QuadratureRule::composite_legendre(&cuts, 1, nodes_per_panel)
        .expect("positive node count")
        .scaled(1.0 / PI)
}

pub fn circle_family_on(r: f64, phi: f64, rule: QuadratureRule) -> Result<DensityFamily, CircleError> {
    let p = CircleDensityParams::new(r, phi, 0.0)?;
    let map: PointMap = Arc::new(move |x: &[f64]| r_matrix(p.r, 2.0 * (p.phi + x[0])));
    Ok(DensityFamily::new(
        format!("circle(r={r}, phi={phi})"),
        2,
        rule,
        map,
        1e-12,
    ))
}

/// `𝔤(θ)`: the 2π-periodic extension of `θ ↦ θ` on `[0, 2π)`.
pub fn angle_function(theta: f64) -> f64 {
    theta.rem_euclid(2.0 * PI)
}

/// `⟨f⟩`, `C_c` and `C_s` computed on a rule that carries weight `1/π`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FourierData {
    pub mean: f64,
    pub cc: f64,
    pub cs: f64,
}

pub fn fourier_data<F: Fn(f64) -> f64>(f: F, rule: &QuadratureRule) -> FourierData {
    let mut m = Vec::with_capacity(rule.len());
    let mut c = Vec::with_capacity(rule.len());
    let mut s = Vec::with_capacity(rule.len());
    for (x, w) in rule.nodes().zip(rule.weights()) {
        let v = f(x[0]) * w;
        m.push(0.5 * v);
        c.push(v * (2.0 * x[0]).cos());
        s.push(v * (2.0 * x[0]).sin());
    }
    FourierData {
        mean: pairwise_sum(&m),
        cc: pairwise_sum(&c),
        cs: pairwise_sum(&s),
    }
}

/// `⟨f⟩ I + (r/2)[[C_c, C_s], [C_s, -C_c]]` evaluated on the shifted function
/// `θ ↦ f(θ - shift)`. The direct integral corresponds to `shift = φ`.
pub fn fourier_route<F: Fn(f64) -> f64>(f: F, r: f64, shift: f64, rule: &QuadratureRule) -> OperatorMatrix {
    let d = fourier_data(|t| f(t - shift), rule);
    OperatorMatrix::from_real_rows(&[
        &[d.mean + 0.5 * r * d.cc, 0.5 * r * d.cs],
        &[0.5 * r * d.cs, d.mean - 0.5 * r * d.cc],
    ])
}

/// Closed form of the quantized angle function.
pub fn angle_operator(r: f64, phi: f64) -> OperatorMatrix {
    let (s, c) = (2.0 * phi).sin_cos();
    OperatorMatrix::from_real_rows(&[
        &[PI + 0.5 * r * s, -0.5 * r * c],
        &[-0.5 * r * c, PI - 0.5 * r * s],
    ])
}

/// Expected eigenpairs of the angle operator: `π ∓ r/2` on `|φ ± π/4⟩`.
pub fn angle_eigenpairs(r: f64, phi: f64) -> [(f64, [f64; 2]); 2] {
    let ket = |a: f64| [a.cos(), a.sin()];
    [(PI - 0.5 * r, ket(phi + FRAC_PI_4)), (PI + 0.5 * r, ket(phi - FRAC_PI_4))]
}

/// `tr(ρ_{r,φ}(θ) A_𝔤) = π - (r²/2) sin 2θ`, independent of φ.
pub fn angle_lower_symbol(r: f64, theta: f64) -> f64 {
    PI - 0.5 * r * r * (2.0 * theta).sin()
}

/// The lower symbol in the form `π - r² sin θ`.
pub fn angle_lower_symbol_alt(r: f64, theta: f64) -> f64 {
    PI - r * r * theta.sin()
}

/// `p_{θ0}(θ) = ½(1 + r² cos 2(θ - θ0))`
pub fn prob_closed(r: f64, theta0: f64, theta: f64) -> f64 {
    0.5 * (1.0 + r * r * (2.0 * (theta - theta0)).cos())
}

/// `δ_r²(θ, θ') = -ln[(1 + r² cos 2(θ - θ')) / (1 + r²)]`
pub fn pseudo_distance_sq_closed(r: f64, delta: f64) -> f64 {
    -((1.0 + r * r * (2.0 * delta).cos()) / (1.0 + r * r)).ln()
}

/// `√2 r |sin(θ - θ')|`
pub fn hs_distance_closed(r: f64, delta: f64) -> f64 {
    2f64.sqrt() * r * delta.sin().abs()
}

/// Leading coefficient of `δ_r` at small separation, `√2 r / √(1 + r²)`.
pub fn small_separation_coefficient(r: f64) -> f64 {
    2f64.sqrt() * r / (1.0 + r * r).sqrt()
}

/// The coefficient in the form `2r / √(1 + r²)`.
pub fn small_separation_coefficient_alt(r: f64) -> f64 {
    2.0 * r / (1.0 + r * r).sqrt()
}

/// SO(2) orbit of `ρ_{r,φ}` with Haar rule `dθ` on `[0, 2π)`.
pub fn circle_orbit_spec(r: f64, phi: f64, nodes: usize) -> Result<GroupOrbitSpec, CircleError> {
    let fid = rho_circle(r, phi, 0.0)?;
    Ok(GroupOrbitSpec {
        label: format!("so2(r={r}, phi={phi})"),
        representation: Arc::new(|g: &[f64]| rotation(g[0])),
        fiducial: fid.clone(),
        probe: fid,
        rule: make_rule(&RuleSpec::circle(nodes, 1.0)).expect("positive node count"),
        inverse_compose: Arc::new(|g0: &[f64], g: &[f64]| vec![(g[0] - g0[0]).rem_euclid(2.0 * PI)]),
        in_chart: Arc::new(|g: &[f64]| g[0].is_finite()),
        orbit: None,
        check_block: None,
        tolerance: 1e-12,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{eig_hermitian, hs_distance, min_eigenvalue, pseudo_distance};
    use proptest::prelude::*;

    #[test]
    fn density_examples() {
        let m = rho_circle(0.0, 1.2, 0.4).unwrap();
        assert!(m.max_abs_diff(&DensityMatrix::maximally_mixed(2)) < 1e-16);
        let p = rho_circle(1.0, 0.0, 0.0).unwrap();
        assert!(p.max_abs_diff(&OperatorMatrix::real_diagonal(&[1.0, 0.0])) < 1e-16);
        assert!(rho_circle(1.2, 0.0, 0.0).is_err());
        let ket = [C64::new(0.7f64.cos(), 0.0), C64::new(0.7f64.sin(), 0.0)];
        let proj = rho_circle(1.0, 0.3, 0.4).unwrap();
        assert!(proj.max_abs_diff(&OperatorMatrix::projector(&ket)) < 1e-15);
    }

    #[test]
    fn rotation_covariance() {
        let (r, phi, w) = (0.6, 0.3, 1.1);
        let lhs = rho_circle(r, phi, 0.0).unwrap().conjugate_by(&rotation(w));
        let rhs = rho_circle(r, phi + w, 0.0).unwrap();
        assert!(lhs.max_abs_diff(&rhs) < 1e-15);
        assert!(rho_circle(r, phi + PI, 0.0).unwrap().max_abs_diff(&rhs.conjugate_by(&rotation(-w))) < 1e-15);
    }

    #[test]
    fn ab_parametrization() {
        let d = from_ab(0.5, 0.0).unwrap();
        assert_eq!((d.lambda, d.r, d.phi), (0.5, 0.0, 0.0));
        let d = from_ab(1.0, 0.0).unwrap();
        assert_eq!((d.lambda, d.r, d.phi), (1.0, 1.0, 0.0));
        let d = from_ab(0.7, 0.2).unwrap();
        assert!((d.r - 0.32f64.sqrt()).abs() < 1e-15);
        let m = OperatorMatrix::from_real_rows(&[&[0.7, 0.2], &[0.2, 0.3]]);
        assert!(spectral_matrix(&d).max_abs_diff(&m) < 1e-15);
        let (a, b) = to_ab(d.r, d.phi);
        assert!((a - 0.7).abs() < 1e-15 && (b - 0.2).abs() < 1e-15);
        assert!(from_ab(0.6, 0.5).is_err());
    }

    #[test]
    fn algebra_special_cases() {
        let p = CircleDensityParams::new(1.0, 0.4, 0.0).unwrap();
        let (alg, _) = product_and_algebra(&p, &p);
        assert!(alg.product.max_abs_diff(&p.matrix()) < 1e-15);
        assert!(alg.commutator.max_abs() < 1e-16);
        let q = CircleDensityParams::new(1.0, 0.4 - PI / 4.0, 0.0).unwrap();
        let (alg, rep) = product_and_algebra(&p, &q);
        // Φ - Φ' = π/2: commutator = -(i/2) σ₂, i.e. entries ∓½
        assert!((alg.commutator[(0, 1)] - C64::new(-0.5, 0.0)).norm() < 1e-15);
        assert!(rep.commutator_defect < 1e-15);
        assert!((rep.alt_commutator_defect - 0.5).abs() < 1e-15);
    }

    #[test]
    fn marginals() {
        let m = marginal_integrals(0.8, 8).unwrap();
        assert!(m.angular < 1e-14 && m.rotated < 1e-14);
        assert!(m.radial < 1e-14);
        let m = marginal_integrals(0.8, 16).unwrap();
        assert!(m.disk < 1e-12);
        // diagonal of the radial marginal at θ = 0: ∫(½ + (r/2) cos θ) r dr = ¼ + cos θ / 6
        let rule = QuadratureRule::gauss_legendre(4, 0.0, 1.0).unwrap();
        let v = rule.integrate(|x| (0.5 + 0.5 * x[0]) * x[0]);
        assert!((v - (0.25 + 1.0 / 6.0)).abs() < 1e-15);
    }

    #[test]
    fn angle_operator_routes() {
        for &(r, phi) in &[(0.8, 0.0), (0.5, 0.7), (1.0, 2.9)] {
            let rule = panel_rule(40, &[]);
            let fam = circle_family_on(r, phi, rule.clone()).unwrap();
            let a = fam.quantize_real(|x| angle_function(x[0])).unwrap();
            assert!(a.max_abs_diff(&angle_operator(r, phi)) < 1e-12);
            let direct = fourier_route(angle_function, r, phi, &panel_rule(40, &[phi]));
            assert!(direct.max_abs_diff(&a) < 1e-12);
            let e = eig_hermitian(&a).unwrap();
            for (k, (val, vec)) in angle_eigenpairs(r, phi).iter().enumerate() {
                assert!((e.values[k] - val).abs() < 1e-12);
                let ov = e.vectors[(0, k)] * vec[0] + e.vectors[(1, k)] * vec[1];
                assert!((ov.norm() - 1.0).abs() < 1e-12);
            }
            for &t in &[0.1, 1.0, 2.5] {
                let s = fam.lower_symbol(&a, &[t]).unwrap();
                assert!((s.re - angle_lower_symbol(r, t)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn reverse_shift_differs_from_direct_integral() {
        let rule = panel_rule(40, &[0.7, -0.7]);
        let direct = fourier_route(angle_function, 0.9, 0.7, &rule);
        let reverse = fourier_route(angle_function, 0.9, -0.7, &rule);
        assert!(direct.max_abs_diff(&angle_operator(0.9, 0.7)) < 1e-12);
        assert!(reverse.max_abs_diff(&angle_operator(0.9, 0.7)) > 0.1);
    }

    #[test]
    fn cos2_two_routes() {
        let rule = make_rule(&RuleSpec::circle(16, 1.0 / PI)).unwrap();
        let fam = circle_family_on(0.7, 0.0, rule.clone()).unwrap();
        let f = |t: f64| (2.0 * t).cos();
        let a = fam.quantize_real(|x| f(x[0])).unwrap();
        let b = fourier_route(f, 0.7, 0.0, &rule);
        assert!(a.max_abs_diff(&b) < 1e-14);
        assert!(a.max_abs_diff(&sigma3().scale_real(0.35)) < 1e-14);
    }

    #[test]
    fn povm_half_circle() {
        let fam = circle_family(0.6, 0.2, 64).unwrap();
        let half = fam.povm_region(|x| x[0] < PI);
        let rest = fam.povm_region(|x| x[0] >= PI);
        assert!((&half + &rest).max_abs_diff(&OperatorMatrix::identity(2)) < 1e-14);
        assert!(min_eigenvalue(&half).unwrap() > 0.0);
    }

    proptest! {
        #[test]
        fn kernels_and_distances(r in 0.0f64..=1.0, phi in 0.0f64..PI, t0 in 0.0f64..6.2, t in 0.0f64..6.2) {
            let fam = circle_family(r, phi, 8).unwrap();
            prop_assert!((fam.prob_kernel(&[t0], &[t]) - prob_closed(r, t0, t)).abs() < 1e-14);
            let a = rho_circle(r, phi, t0).unwrap();
            let b = rho_circle(r, phi, t).unwrap();
            prop_assert!((hs_distance(&a, &b).unwrap() - hs_distance_closed(r, t - t0)).abs() < 1e-13);
            let d = pseudo_distance(&a, &b).unwrap();
            let closed = pseudo_distance_sq_closed(r, t - t0);
            if closed.is_finite() && d.is_finite() {
                prop_assert!((d * d - closed).abs() < 1e-12);
            }
        }
    }
}
