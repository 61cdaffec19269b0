//! Complex 2×2 densities labelled by the unit sphere.
//!
//! Rotations are handled with unit quaternions; the family `ρ_r(θ, φ)` is the
//! SU(2) transport of `diag((1 + r)/2, (1 - r)/2)` from the north pole, on the
//! measure `sin θ dθ dφ / 2π`.

use std::f64::consts::PI;
use std::ops::Mul;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use serde::Serialize;
use thiserror::Error;

use crate::numerics::{QuadratureRule, RuleKind};
use crate::operators::{DensityMatrix, OperatorMatrix};
use crate::quantization::{DensityFamily, PointMap};

pub type Vec3 = [f64; 3];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SphereError {
    #[error("radius r = {0} outside [0, 1]")]
    Radius(f64),
    #[error("the zero quaternion has no inverse")]
    ZeroQuaternion,
    #[error("rotation axis has norm {0}, expected 1")]
    NonUnitAxis(f64),
}

fn check_radius(r: f64) -> Result<(), SphereError> {
    if !(0.0..=1.0).contains(&r) {
        return Err(SphereError::Radius(r));
    }
    Ok(())
}

fn dot(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn axpy(a: f64, x: &Vec3, y: &Vec3) -> Vec3 {
    [a * x[0] + y[0], a * x[1] + y[1], a * x[2] + y[2]]
}

fn scale(a: f64, x: &Vec3) -> Vec3 {
    [a * x[0], a * x[1], a * x[2]]
}

/// Unit vector with spherical coordinates `(θ, φ)`.
pub fn unit_vector(theta: f64, phi: f64) -> Vec3 {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    [st * cp, st * sp, ct]
}

/// Spherical coordinates `(θ, φ)` of a nonzero vector, `φ ∈ [0, 2π)`.
pub fn spherical_coordinates(v: &Vec3) -> (f64, f64) {
    let rho = v[0].hypot(v[1]);
    (rho.atan2(v[2]), v[1].atan2(v[0]).rem_euclid(2.0 * PI))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Quaternion {
    pub q0: f64,
    pub qv: Vec3,
}

impl Quaternion {
    pub const ONE: Quaternion = Quaternion {
        q0: 1.0,
        qv: [0.0; 3],
    };

    pub fn new(q0: f64, qv: Vec3) -> Self {
        Self { q0, qv }
    }

    /// Pure quaternion `(0, v)`.
    pub fn pure(v: Vec3) -> Self {
        Self { q0: 0.0, qv: v }
    }

    /// Basis element `e_a`, `a = 0..=3`.
    pub fn basis(a: usize) -> Self {
        let mut qv = [0.0; 3];
        if a == 0 {
            return Self::ONE;
        }
        qv[a - 1] = 1.0;
        Self { q0: 0.0, qv }
    }

    /// `(cos(ω/2), sin(ω/2) n̂)`
    pub fn rotation(omega: f64, axis: &Vec3) -> Result<Self, SphereError> {
        let n = dot(axis, axis).sqrt();
        if (n - 1.0).abs() > 1e-12 {
            return Err(SphereError::NonUnitAxis(n));
        }
        let (s, c) = (0.5 * omega).sin_cos();
        Ok(Self {
            q0: c,
            qv: scale(s, axis),
        })
    }

    pub fn conj(&self) -> Self {
        Self {
            q0: self.q0,
            qv: scale(-1.0, &self.qv),
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.q0 * self.q0 + dot(&self.qv, &self.qv)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn inverse(&self) -> Result<Self, SphereError> {
        let n2 = self.norm_sqr();
        if n2 == 0.0 {
            return Err(SphereError::ZeroQuaternion);
        }
        let c = self.conj();
        Ok(Self {
            q0: c.q0 / n2,
            qv: scale(1.0 / n2, &c.qv),
        })
    }

    /// `ξ (0, v) ξ̄` for a unit quaternion `ξ`.
    pub fn rotate(&self, v: &Vec3) -> Vec3 {
        (*self * Self::pure(*v) * self.conj()).qv
    }

    /// 2×2 image under `e_a ↦ (-1)^{a+1} i σ_a`.
    pub fn to_matrix(&self) -> OperatorMatrix {
        let [x1, x2, x3] = self.qv;
        OperatorMatrix::from_rows(&[
            &[C64::new(self.q0, x3), C64::new(-x2, x1)],
            &[C64::new(x2, x1), C64::new(self.q0, -x3)],
        ])
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (0..3)
            .map(|k| (self.qv[k] - other.qv[k]).abs())
            .fold((self.q0 - other.q0).abs(), f64::max)
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;

    fn mul(self, b: Quaternion) -> Quaternion {
        let qv = axpy(self.q0, &b.qv, &axpy(b.q0, &self.qv, &cross(&self.qv, &b.qv)));
        Quaternion {
            q0: self.q0 * b.q0 - dot(&self.qv, &b.qv),
            qv,
        }
    }
}

/// `r·n̂ n̂ + cos ω n̂ × (r × n̂) + sin ω n̂ × r`
pub fn rodrigues(omega: f64, axis: &Vec3, v: &Vec3) -> Result<Vec3, SphereError> {
    let n = dot(axis, axis).sqrt();
    if (n - 1.0).abs() > 1e-12 {
        return Err(SphereError::NonUnitAxis(n));
    }
    let (s, c) = omega.sin_cos();
    let parallel = scale(dot(v, axis), axis);
    let perp = cross(axis, &cross(v, axis));
    let side = cross(axis, v);
    Ok(axpy(s, &side, &axpy(c, &perp, &parallel)))
}

/// Quaternion rotation of `v` by `ω` about `n̂`.
pub fn rotate_vector(omega: f64, axis: &Vec3, v: &Vec3) -> Result<Vec3, SphereError> {
    Ok(Quaternion::rotation(omega, axis)?.rotate(v))
}

/// `ξ = (cos(θ/2), sin(θ/2) û_φ)`, `û_φ = (-sin φ, cos φ, 0)`: carries `k̂` to `n̂(θ, φ)`.
pub fn xi_north(theta: f64, phi: f64) -> Quaternion {
    let (s, c) = (0.5 * theta).sin_cos();
    Quaternion {
        q0: c,
        qv: [-s * phi.sin(), s * phi.cos(), 0.0],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SphereDensityParams {
    pub r: f64,
    pub theta: f64,
    pub phi: f64,
}

impl SphereDensityParams {
    pub fn new(r: f64, theta: f64, phi: f64) -> Result<Self, SphereError> {
        check_radius(r)?;
        Ok(Self {
            r,
            theta,
            phi: phi.rem_euclid(2.0 * PI),
        })
    }

    pub fn bloch_vector(&self) -> Vec3 {
        scale(self.r, &unit_vector(self.theta, self.phi))
    }
}

/// `ρ_d = ½(1 - i 𝐝)` where `𝐝` is the matrix image of `(0, d)`.
pub fn rho_from_vector(d: &Vec3) -> OperatorMatrix {
    let mut m = OperatorMatrix::identity(2);
    m.add_scaled(C64::new(0.0, -1.0), &Quaternion::pure(*d).to_matrix());
    m.scale_real(0.5)
}

/// `½ [[1 + r cos θ, r sin θ e^{iφ}], [r sin θ e^{-iφ}, 1 - r cos θ]]`
pub fn rho_sphere(r: f64, theta: f64, phi: f64) -> Result<DensityMatrix, SphereError> {
    check_radius(r)?;
    Ok(DensityMatrix::new_unchecked(rho_closed(r, theta, phi)))
}

fn rho_closed(r: f64, theta: f64, phi: f64) -> OperatorMatrix {
    let (st, ct) = theta.sin_cos();
    let off = C64::from_polar(0.5 * r * st, phi);
    OperatorMatrix::from_rows(&[
        &[C64::new(0.5 * (1.0 + r * ct), 0.0), off],
        &[off.conj(), C64::new(0.5 * (1.0 - r * ct), 0.0)],
    ])
}

/// `ξ(θ, φ) ρ_d ξ(θ, φ)†` for an arbitrary Bloch vector `d`.
pub fn rho_transported(d: &Vec3, theta: f64, phi: f64) -> OperatorMatrix {
    rho_from_vector(d).conjugate_by(&xi_north(theta, phi).to_matrix())
}

/// Spin-½ coherent state `cos(θ/2)|↑⟩ + sin(θ/2) e^{-iφ}|↓⟩`, whose projector is `ρ_1(θ, φ)`.
pub fn spin_coherent_state(theta: f64, phi: f64) -> [C64; 2] {
    let (s, c) = (0.5 * theta).sin_cos();
    [C64::new(c, 0.0), C64::from_polar(s, -phi)]
}

/// Gauss–Legendre in `cos θ` times trapezoid in `φ`, weight `dν = d(cos θ) dφ / 2π`.
/// Nodes are returned as `(θ, φ)`.
pub fn sphere_rule(n_theta: usize, n_phi: usize) -> QuadratureRule {
    let u = QuadratureRule::gauss_legendre(n_theta, -1.0, 1.0).expect("positive node count");
    let phi = QuadratureRule::periodic_trapezoid(n_phi, 0.0, 2.0 * PI, 1.0 / (2.0 * PI))
        .expect("positive node count");
    u.product(&phi).mapped(2, |x| (vec![x[0].acos(), x[1]], 1.0))
}

/// Gauss–Legendre in `θ` (weight `sin θ` folded in) times Gauss–Legendre in `φ` on `[0, 2π]`.
/// Suited to functions that are smooth in `(θ, φ)` but not periodic in `φ`.
pub fn sphere_rule_polar(n_theta: usize, n_phi: usize) -> QuadratureRule {
    let t = QuadratureRule::gauss_legendre(n_theta, 0.0, PI).expect("positive node count");
    let phi = QuadratureRule::gauss_legendre(n_phi, 0.0, 2.0 * PI).expect("positive node count");
    let rule = t.product(&phi).mapped(2, |x| (x.to_vec(), x[0].sin() / (2.0 * PI)));
    let weights = rule.weights().to_vec();
    let nodes = rule.nodes().flatten().copied().collect();
    QuadratureRule::from_parts(2, nodes, weights, RuleKind::Product, None)
}

pub fn sphere_family(r: f64, rule: QuadratureRule) -> Result<DensityFamily, SphereError> {
    check_radius(r)?;
    let map: PointMap = Arc::new(move |x: &[f64]| rho_closed(r, x[0], x[1]));
    Ok(DensityFamily::new(format!("sphere(r={r})"), 2, rule, map, 1e-12))
}

/// `∫ ξ ρ_d ξ̄ dν` for a general Bloch vector `d`; equals `I + (x σ₁ - y σ₂)/2`.
pub fn transported_resolution(d: &Vec3, rule: &QuadratureRule) -> OperatorMatrix {
    let mut acc = OperatorMatrix::zeros(2);
    for (x, w) in rule.nodes().zip(rule.weights()) {
        acc.add_scaled_real(*w, &rho_transported(d, x[0], x[1]));
    }
    acc
}

/// `⟨f⟩`, `C_c` and `C_s` of a function on the sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SphereFourier {
    pub mean: f64,
    pub cc: f64,
    pub cs: C64,
}

/// Coefficients on a rule carrying `dν = sin θ dθ dφ / 2π`.
pub fn sphere_fourier<F: Fn(f64, f64) -> f64>(f: F, rule: &QuadratureRule) -> SphereFourier {
    let mut mean = Vec::with_capacity(rule.len());
    let mut cc = Vec::with_capacity(rule.len());
    let mut cs_re = Vec::with_capacity(rule.len());
    let mut cs_im = Vec::with_capacity(rule.len());
    for (x, w) in rule.nodes().zip(rule.weights()) {
        let (theta, phi) = (x[0], x[1]);
        let v = 0.5 * w * f(theta, phi);
        mean.push(v);
        cc.push(v * theta.cos());
        let c = C64::from_polar(v * theta.sin(), phi);
        cs_re.push(c.re);
        cs_im.push(c.im);
    }
    use crate::numerics::pairwise_sum;
    SphereFourier {
        mean: pairwise_sum(&mean),
        cc: pairwise_sum(&cc),
        cs: C64::new(pairwise_sum(&cs_re), pairwise_sum(&cs_im)),
    }
}

/// `[[⟨f⟩ + r C_c, r C_s], [r C_s*, ⟨f⟩ - r C_c]]`
pub fn fourier_route<F: Fn(f64, f64) -> f64>(f: F, r: f64, rule: &QuadratureRule) -> OperatorMatrix {
    let d = sphere_fourier(f, rule);
    OperatorMatrix::from_rows(&[
        &[C64::new(d.mean + r * d.cc, 0.0), d.cs * r],
        &[d.cs.conj() * r, C64::new(d.mean - r * d.cc, 0.0)],
    ])
}

pub fn pauli(a: usize) -> OperatorMatrix {
    let (z, o, i) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 1.0));
    match a {
        1 => OperatorMatrix::from_rows(&[&[z, o], &[o, z]]),
        2 => OperatorMatrix::from_rows(&[&[z, -i], &[i, z]]),
        3 => OperatorMatrix::from_rows(&[&[o, z], &[z, -o]]),
        _ => OperatorMatrix::identity(2),
    }
}

/// `A_q = π I + (π r / 4) σ₂` for `q = φ ∈ [0, 2π)`.
pub fn a_q(r: f64) -> OperatorMatrix {
    let mut m = OperatorMatrix::identity(2).scale_real(PI);
    m.add_scaled_real(0.25 * PI * r, &pauli(2));
    m
}

/// `A_p = (r/3) σ₃` for `p = cos θ`.
pub fn a_p(r: f64) -> OperatorMatrix {
    pauli(3).scale_real(r / 3.0)
}

/// `[A_q, A_p] = i (π r² / 6) σ₁`
pub fn qp_commutator(r: f64) -> OperatorMatrix {
    pauli(1).scale(C64::new(0.0, PI * r * r / 6.0))
}

/// `q̌(θ, φ) = π - (π r² / 4) sin θ sin φ`
pub fn q_lower_symbol(r: f64, theta: f64, phi: f64) -> f64 {
    PI - 0.25 * PI * r * r * theta.sin() * phi.sin()
}

/// `p̌(θ, φ) = (r² / 3) cos θ`
pub fn p_lower_symbol(r: f64, theta: f64) -> f64 {
    r * r * theta.cos() / 3.0
}

/// The lower symbol of `A_p` in the form `(π r² / 3) cos θ`.
pub fn p_lower_symbol_alt(r: f64, theta: f64) -> f64 {
    PI * r * r * theta.cos() / 3.0
}

/// `½(1 + r² n̂₀·n̂)`
pub fn prob_closed(r: f64, a: (f64, f64), b: (f64, f64)) -> f64 {
    0.5 * (1.0 + r * r * dot(&unit_vector(a.0, a.1), &unit_vector(b.0, b.1)))
}

/// `δ_r² = -ln[(1 + r² n̂·n̂′) / (1 + r²)]`
pub fn pseudo_distance_sq_closed(r: f64, a: (f64, f64), b: (f64, f64)) -> f64 {
    let c = dot(&unit_vector(a.0, a.1), &unit_vector(b.0, b.1));
    -((1.0 + r * r * c) / (1.0 + r * r)).ln()
}

/// `‖r⃗ - r⃗′‖ / √2`
pub fn hs_distance_closed(r: f64, a: (f64, f64), b: (f64, f64)) -> f64 {
    let d = axpy(-1.0, &unit_vector(b.0, b.1), &unit_vector(a.0, a.1));
    r * dot(&d, &d).sqrt() / 2f64.sqrt()
}

/// Arc length to second order, `√(Δθ² + Δφ² sin²((θ + θ′)/2))`.
pub fn local_arc(a: (f64, f64), b: (f64, f64)) -> f64 {
    let s = (0.5 * (a.0 + b.0)).sin();
    ((a.0 - b.0).powi(2) + ((a.1 - b.1) * s).powi(2)).sqrt()
}

/// Leading coefficient of `δ_r` against [`local_arc`], `r / √(2(1 + r²))`.
pub fn small_separation_coefficient(r: f64) -> f64 {
    r / (2.0 * (1.0 + r * r)).sqrt()
}

/// The coefficient in the form `r / √(1 + r²)`.
pub fn small_separation_coefficient_alt(r: f64) -> f64 {
    r / (1.0 + r * r).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{eig_hermitian, hs_distance, pseudo_distance};
    use proptest::prelude::*;

    fn close(a: &Vec3, b: &Vec3, tol: f64) -> bool {
        (0..3).all(|k| (a[k] - b[k]).abs() < tol)
    }

    #[test]
    fn quaternion_basis() {
        let e = Quaternion::basis;
        assert_eq!(e(1) * e(2), e(3));
        assert_eq!(e(2) * e(3), e(1));
        assert_eq!(e(3) * e(1), e(2));
        assert_eq!(e(1) * e(1), Quaternion::new(-1.0, [0.0; 3]));
        let i = C64::new(0.0, 1.0);
        for a in 1..=3 {
            let sign = if a % 2 == 1 { 1.0 } else { -1.0 };
            let expected = pauli(a).scale(i * sign);
            assert!(e(a).to_matrix().max_abs_diff(&expected) < 1e-16);
        }
        assert!(Quaternion::new(0.0, [0.0; 3]).inverse().is_err());
    }

    #[test]
    fn matrix_image_is_multiplicative() {
        let a = Quaternion::new(0.3, [-1.2, 0.4, 0.9]);
        let b = Quaternion::new(-0.7, [0.2, 1.1, -0.5]);
        let lhs = (a * b).to_matrix();
        let rhs = a.to_matrix().matmul(&b.to_matrix());
        assert!(lhs.max_abs_diff(&rhs) < 1e-15);
        assert!(a.conj().to_matrix().max_abs_diff(&a.to_matrix().adjoint()) < 1e-16);
    }

    #[test]
    fn rotation_examples() {
        let k = [0.0, 0.0, 1.0];
        let v = [1.0, 0.0, 0.0];
        assert!(close(&rotate_vector(0.0, &k, &v).unwrap(), &v, 1e-16));
        assert!(close(&rotate_vector(PI / 2.0, &k, &v).unwrap(), &[0.0, 1.0, 0.0], 1e-15));
        assert!(close(&rodrigues(PI / 2.0, &k, &v).unwrap(), &[0.0, 1.0, 0.0], 1e-15));
        assert!(rodrigues(1.0, &[1.0, 1.0, 0.0], &v).is_err());
    }

    #[test]
    fn xi_north_examples() {
        assert_eq!(xi_north(0.0, 1.3), Quaternion::ONE);
        let img = xi_north(PI / 2.0, 0.0).rotate(&[0.0, 0.0, 1.0]);
        assert!(close(&img, &[1.0, 0.0, 0.0], 1e-15));
    }

    #[test]
    fn density_examples() {
        let m = rho_sphere(0.0, 1.0, 2.0).unwrap();
        assert!(m.max_abs_diff(&DensityMatrix::maximally_mixed(2)) < 1e-16);
        let m = rho_sphere(0.4, 0.0, 2.0).unwrap();
        assert!(m.max_abs_diff(&OperatorMatrix::real_diagonal(&[0.7, 0.3])) < 1e-16);
        let h = 0.5f64.sqrt();
        let psi = [C64::new(h, 0.0), C64::new(h, 0.0)];
        let m = rho_sphere(1.0, PI / 2.0, 0.0).unwrap();
        assert!(m.max_abs_diff(&OperatorMatrix::projector(&psi)) < 1e-15);
        assert!(rho_sphere(1.5, 0.0, 0.0).is_err());
    }

    #[test]
    fn resolution_and_general_vectors() {
        let fam = sphere_family(0.8, sphere_rule(8, 8)).unwrap();
        assert!(fam.check_resolution().defect < 1e-14);
        let d = [0.3, -0.4, 0.5];
        let m = transported_resolution(&d, &sphere_rule(8, 8));
        assert!((m[(0, 1)] - C64::new(0.15, -0.2)).norm() < 1e-14);
        assert!((m[(0, 0)] - 1.0).norm() < 1e-14 && (m[(1, 1)] - 1.0).norm() < 1e-14);
    }

    #[test]
    fn canonical_pair() {
        let r = 0.6;
        let rule = sphere_rule_polar(24, 24);
        let fam = sphere_family(r, rule.clone()).unwrap();
        let aq = fam.quantize_real(|x| x[1]).unwrap();
        let ap = fam.quantize_real(|x| x[0].cos()).unwrap();
        assert!(aq.max_abs_diff(&a_q(r)) < 1e-12);
        assert!(ap.max_abs_diff(&a_p(r)) < 1e-12);
        assert!(fourier_route(|_, p| p, r, &rule).max_abs_diff(&aq) < 1e-12);
        assert!(ap.max_abs_diff(&OperatorMatrix::real_diagonal(&[0.2, -0.2])) < 1e-12);
        assert!(aq.commutator(&ap).max_abs_diff(&qp_commutator(r)) < 1e-12);
        let e = eig_hermitian(&aq).unwrap();
        assert!((e.values[0] - 0.85 * PI).abs() < 1e-12 && (e.values[1] - 1.15 * PI).abs() < 1e-12);
        // upper eigenvector ∝ (1, i)
        let v = e.vector(1);
        assert!((v[1] / v[0] - C64::new(0.0, 1.0)).norm() < 1e-12);
        for &(t, p) in &[(0.3, 0.2), (1.4, 4.0), (2.9, 5.5)] {
            assert!((fam.lower_symbol(&aq, &[t, p]).unwrap().re - q_lower_symbol(r, t, p)).abs() < 1e-12);
            assert!((fam.lower_symbol(&ap, &[t, p]).unwrap().re - p_lower_symbol(r, t)).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn routes_agree(w in -7.0f64..7.0, t in 0.0f64..PI, p in 0.0f64..6.2,
                        v in prop::array::uniform3(-2.0f64..2.0)) {
            let n = unit_vector(t, p);
            let a = rotate_vector(w, &n, &v).unwrap();
            let b = rodrigues(w, &n, &v).unwrap();
            prop_assert!(close(&a, &b, 1e-13));
            prop_assert!((dot(&a, &a) - dot(&v, &v)).abs() < 1e-12);
        }

        #[test]
        fn xi_maps_north_pole(t in 0.01f64..3.13, p in 0.0f64..6.2) {
            let xi = xi_north(t, p);
            prop_assert!((xi.norm() - 1.0).abs() < 1e-15);
            let img = xi.rotate(&[0.0, 0.0, 1.0]);
            prop_assert!(close(&img, &unit_vector(t, p), 1e-14));
            let (tt, pp) = spherical_coordinates(&img);
            prop_assert!((tt - t).abs() < 1e-13 && (pp - p).abs() < 1e-13);
            let q = Quaternion::new(t, [p, -t, 0.5]);
            prop_assert!((q * q.inverse().unwrap()).max_abs_diff(&Quaternion::ONE) < 1e-14);
        }

        #[test]
        fn closed_form_matches_transport(r in 0.0f64..=1.0, t in 0.0f64..PI, p in 0.0f64..6.2) {
            let a = rho_sphere(r, t, p).unwrap();
            let b = rho_transported(&[0.0, 0.0, r], t, p);
            prop_assert!(a.max_abs_diff(&b) < 1e-13);
            let cs = spin_coherent_state(t, p);
            let pure = rho_sphere(1.0, t, p).unwrap();
            prop_assert!(pure.max_abs_diff(&OperatorMatrix::projector(&cs)) < 1e-15);
        }

        #[test]
        fn kernels_and_distances(r in 0.0f64..=1.0, t0 in 0.0f64..PI, p0 in 0.0f64..6.2,
                                 t in 0.0f64..PI, p in 0.0f64..6.2) {
            let fam = sphere_family(r, sphere_rule(2, 2)).unwrap();
            let k = fam.prob_kernel(&[t0, p0], &[t, p]);
            prop_assert!((k - prob_closed(r, (t0, p0), (t, p))).abs() < 1e-13);
            let a = rho_sphere(r, t0, p0).unwrap();
            let b = rho_sphere(r, t, p).unwrap();
            prop_assert!((hs_distance(&a, &b).unwrap() - hs_distance_closed(r, (t0, p0), (t, p))).abs() < 1e-13);
            let d = pseudo_distance(&a, &b).unwrap();
            let closed = pseudo_distance_sq_closed(r, (t0, p0), (t, p));
            if d.is_finite() && closed.is_finite() {
                prop_assert!((d * d - closed).abs() < 1e-12);
            }
            if r == 1.0 {
                let ov = spin_coherent_state(t0, p0)[0].conj() * spin_coherent_state(t, p)[0]
                    + spin_coherent_state(t0, p0)[1].conj() * spin_coherent_state(t, p)[1];
                prop_assert!((ov.norm_sqr() - k).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn small_separation() {
        let r = 0.7;
        let a = (1.1, 0.4);
        let b = (1.1 + 6e-4, 0.4 + 8e-4);
        let d = pseudo_distance_sq_closed(r, a, b).sqrt();
        let approx = small_separation_coefficient(r) * local_arc(a, b);
        assert!((d / approx - 1.0).abs() < 1e-2);
        let alt = small_separation_coefficient_alt(r) * local_arc(a, b);
        assert!((d / alt - 1.0).abs() > 0.2);
    }
}
