//! Generic quantization properties on every geometry.

use std::f64::consts::PI;
use std::sync::OnceLock;

use povm_quant::circle::circle_family;
use povm_quant::halfplane::{affine_family, AffineGrid, AffineParams};
use povm_quant::operators::OperatorMatrix;
use povm_quant::plane::{PlaneGrid, PlaneQuantizer, ThermalParams};
use povm_quant::quantization::DensityFamily;
use povm_quant::sphere::{sphere_family, sphere_rule};
use proptest::prelude::*;

fn plane() -> &'static DensityFamily {
    static F: OnceLock<DensityFamily> = OnceLock::new();
    F.get_or_init(|| {
        let p = ThermalParams::new(0.3, 8).unwrap();
        PlaneQuantizer::new(p, PlaneGrid::for_params(&p)).family()
    })
}

fn halfplane() -> &'static DensityFamily {
    static F: OnceLock<DensityFamily> = OnceLock::new();
    F.get_or_init(|| {
        let p = AffineParams::new(2.0, 0.25, 10).unwrap();
        let mut grid = AffineGrid::for_params(&p);
        grid.n_phi = 64;
        affine_family(&p, &grid, 3)
    })
}

/// `c₀ cos(a₀·x + b₀) + c₁ cos(a₁·x + b₁)`
fn trig(c: [f64; 2], a: [f64; 4], b: [f64; 2], x: &[f64]) -> f64 {
    let phase = |k: usize| x.iter().enumerate().map(|(i, xi)| a[2 * k + i] * xi).sum::<f64>() + b[k];
    c[0] * phase(0).cos() + c[1] * phase(1).cos()
}

/// Linearity, the constant function, kernel row sums, contraction and the two measurement routes.
fn properties(
    fam: &DensityFamily,
    block: usize,
    tol: f64,
    (c, a, b): ([f64; 2], [f64; 4], [f64; 2]),
    (s1, s2): (f64, f64),
    x0: &[f64],
    x1: &[f64],
) -> Result<(), TestCaseError> {
    let f = |x: &[f64]| trig(c, a, b, x);
    let g = |x: &[f64]| (x[0] * 0.7).sin();
    let af = fam.quantize_real(f).unwrap();
    let ag = fam.quantize_real(g).unwrap();
    let combo = fam.quantize_real(|x| s1 * f(x) + s2 * g(x)).unwrap();
    let mut expect = af.scale_real(s1);
    expect.add_scaled_real(s2, &ag);
    prop_assert!(combo.max_abs_diff(&expect) < 1e-12 * (1.0 + expect.max_abs()));

    let id = OperatorMatrix::identity(fam.hilbert_dim());
    let one = fam.quantize_real(|_| 1.0).unwrap();
    prop_assert!(one.block_max_abs_diff(&id, block) < tol);

    let trace = fam.lower_symbol(&id, x0).unwrap().re;
    prop_assert!((fam.kernel_mass(x0) - trace).abs() < tol);

    let sup = c[0].abs() + c[1].abs();
    prop_assert!(fam.lower_symbol(&af, x1).unwrap().norm() <= sup + tol);

    let state = fam.evaluate(x1);
    let (v1, v2) = fam
        .measurement_expectation(state.as_operator(), |x| num_complex::Complex64::new(f(x), 0.0))
        .unwrap();
    prop_assert!((v1 - v2).norm() < 1e-12);
    Ok(())
}

fn fdata() -> impl Strategy<Value = ([f64; 2], [f64; 4], [f64; 2])> {
    (
        prop::array::uniform2(-1.0f64..1.0),
        prop::array::uniform4(-2.0f64..2.0),
        prop::array::uniform2(0.0f64..6.2),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn circle_properties(r in 0.0f64..=1.0, phi in 0.0f64..PI, f in fdata(), s in (-2.0f64..2.0, -2.0f64..2.0),
                         t0 in 0.0f64..6.2, t1 in 0.0f64..6.2) {
        let fam = circle_family(r, phi, 32).unwrap();
        properties(&fam, 2, 1e-12, f, s, &[t0], &[t1])?;
    }

    #[test]
    fn sphere_properties(r in 0.0f64..=1.0, f in fdata(), s in (-2.0f64..2.0, -2.0f64..2.0),
                         x0 in (0.0f64..PI, 0.0f64..6.2), x1 in (0.0f64..PI, 0.0f64..6.2)) {
        let fam = sphere_family(r, sphere_rule(8, 8)).unwrap();
        properties(&fam, 2, 1e-12, f, s, &[x0.0, x0.1], &[x1.0, x1.1])?;
    }

    #[test]
    fn plane_properties(f in fdata(), s in (-2.0f64..2.0, -2.0f64..2.0),
                        x0 in (-1.5f64..1.5, -1.5f64..1.5), x1 in (-1.5f64..1.5, -1.5f64..1.5)) {
        properties(plane(), 8, 1e-6, f, s, &[x0.0, x0.1], &[x1.0, x1.1])?;
    }

    #[test]
    fn halfplane_properties(f in fdata(), s in (-2.0f64..2.0, -2.0f64..2.0),
                            x0 in (-1.0f64..1.0, -2.0f64..2.0), x1 in (-1.0f64..1.0, -2.0f64..2.0)) {
        properties(halfplane(), 3, 1e-6, f, s, &[x0.0.exp(), x0.1], &[x1.0.exp(), x1.1])?;
    }
}
