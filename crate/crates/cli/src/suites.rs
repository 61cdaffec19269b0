//! Verification suites, one per geometry.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use povm_quant::circle::{self, CircleDensityParams};
use povm_quant::finite::{
    feasibility_bounds, gram_probabilities, random_resolving_family, reconstruct, ReconstructOptions,
};
use povm_quant::halfplane::{self, AffineGrid, AffineParams};
use povm_quant::operators::{eig_hermitian, hs_distance, pseudo_distance, DensityMatrix, OperatorMatrix};
use povm_quant::plane::{self, PlaneGrid, PlaneQuantizer, ThermalParams};
use povm_quant::quantization::DensityFamily;
use povm_quant::sphere;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::config::{Geometry, Overrides};
use crate::report::{Check, Report};

pub const DEFAULT_SEED: u64 = 7;

pub fn run(geometry: Geometry, o: &Overrides) -> Vec<Report> {
    geometry
        .suites()
        .into_iter()
        .map(|g| run_one(g, o))
        .collect()
}

pub fn run_parallel(geometry: Geometry, o: &Overrides) -> Vec<Report> {
    use rayon::prelude::*;
    geometry
        .suites()
        .into_par_iter()
        .map(|g| run_one(g, o))
        .collect()
}

fn run_one(g: Geometry, o: &Overrides) -> Report {
    let report = match g {
        Geometry::Circle => circle_suite(o),
        Geometry::Sphere => sphere_suite(o),
        Geometry::Plane => plane_suite(o),
        Geometry::Halfplane => halfplane_suite(o),
        Geometry::Finite => finite_suite(o),
        Geometry::Core => core_suite(o),
        Geometry::All => unreachable!("expanded by Geometry::suites"),
    };
    report.with_tolerance(o.tol)
}

/// `extra` followed by `first` unless already present.
fn sweep(first: f64, extra: &[f64]) -> Vec<f64> {
    let mut v = extra.to_vec();
    if !v.iter().any(|x| (x - first).abs() < 1e-15) {
        v.push(first);
    }
    v
}

fn c_re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

pub fn circle_suite(o: &Overrides) -> Report {
    let r = o.r.unwrap_or(0.8);
    let phi = 0.3;
    let nodes = o.grid.unwrap_or(64);
    let seed = o.seed.unwrap_or(DEFAULT_SEED);
    let mut rep = Report::new("circle", json!({"r": r, "phi": phi, "nodes": nodes, "seed": seed}));

    for rr in sweep(r, &[0.0, 0.3, 0.7, 1.0]) {
        let fam = circle::circle_family(rr, phi, nodes).expect("validated radius");
        rep.push(Check::defect(
            &format!("circle.resolution.r={rr}"),
            "circle resolution of identity",
            fam.check_resolution().defect,
            1e-13,
        ));
    }

    for rr in sweep(r, &[0.25, 0.5, 1.0]) {
        let fam = circle::circle_family_on(rr, phi, circle::panel_rule(40, &[])).expect("validated radius");
        let a = fam.quantize_real(|x| circle::angle_function(x[0])).expect("finite function");
        let e = eig_hermitian(&a).expect("2x2 Hermitian");
        let pairs = circle::angle_eigenpairs(rr, phi);
        rep.push(Check::vector(
            &format!("circle.angle.eigenvalues.r={rr}"),
            "angle operator spectrum pi -+ r/2",
            &e.values,
            &[pairs[0].0, pairs[1].0],
            1e-10,
        ));
        if rr > 0.0 {
            let overlap_defect = (0..2)
                .map(|k| {
                    let v = pairs[k].1;
                    1.0 - (e.vectors[(0, k)] * v[0] + e.vectors[(1, k)] * v[1]).norm()
                })
                .fold(0.0, f64::max);
            rep.push(Check::defect(
                &format!("circle.angle.eigenvectors.r={rr}"),
                "angle operator eigenvectors |phi -+ pi/4>",
                overlap_defect.abs(),
                1e-10,
            ));
        }
        rep.push(Check::defect(
            &format!("circle.angle.operator.r={rr}"),
            "angle operator closed form",
            a.max_abs_diff(&circle::angle_operator(rr, phi)),
            1e-10,
        ));
        let thetas = [0.1, 0.9, 2.0, 4.4];
        let lower: Vec<f64> = thetas
            .iter()
            .map(|t| fam.lower_symbol(&a, &[*t]).expect("2x2").re)
            .collect();
        let closed: Vec<f64> = thetas.iter().map(|t| circle::angle_lower_symbol(rr, *t)).collect();
        let alt: Vec<f64> = thetas
            .iter()
            .map(|t| circle::angle_lower_symbol_alt(rr, *t))
            .collect();
        rep.push(Check::vector(
            &format!("circle.angle.lower_symbol.r={rr}"),
            "angle operator lower symbol",
            &lower,
            &closed,
            1e-10,
        ));
        rep.push(Check::note(
            &format!("circle.angle.lower_symbol_alt.r={rr}"),
            "angle operator lower symbol, alternative form",
            json!(lower),
            json!(alt),
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut prod, mut comm, mut anti, mut comm_p, mut anti_p) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..100 {
        let mut draw = || {
            CircleDensityParams::new(rng.random_range(0.0..=1.0), rng.random_range(0.0..PI), rng.random_range(0.0..2.0 * PI))
                .expect("radius in range")
        };
        let (p1, p2) = (draw(), draw());
        let (_, a) = circle::product_and_algebra(&p1, &p2);
        prod = prod.max(a.product_defect);
        comm = comm.max(a.commutator_defect);
        anti = anti.max(a.anticommutator_defect);
        comm_p = comm_p.max(a.alt_commutator_defect);
        anti_p = anti_p.max(a.alt_anticommutator_defect);
    }
    rep.push(Check::defect("circle.algebra.product", "real density product formula", prod, 1e-13));
    rep.push(Check::defect("circle.algebra.commutator", "real density commutator", comm, 1e-13));
    rep.push(Check::defect("circle.algebra.anticommutator", "real density anticommutator", anti, 1e-13));
    rep.push(Check::note(
        "circle.algebra.commutator_alt",
        "real density commutator, alternative form",
        json!(comm_p),
        json!(0.0),
    ));
    rep.push(Check::note(
        "circle.algebra.anticommutator_alt",
        "real density anticommutator, alternative form",
        json!(anti_p),
        json!(0.0),
    ));

    let m = circle::marginal_integrals(r, 16).expect("validated radius");
    for (name, v) in [("angular", m.angular), ("rotated", m.rotated), ("radial", m.radial), ("disk", m.disk)] {
        rep.push(Check::defect(
            &format!("circle.marginal.{name}"),
            "disk marginals of the real density",
            v,
            1e-12,
        ));
    }

    let fam = circle::circle_family(r, phi, 8).expect("validated radius");
    let pairs = [(0.2, 1.1), (0.0, 2.5), (4.0, 0.7), (1.3, 1.3)];
    let (mut kp, mut kc, mut hp, mut hc, mut dp, mut dc) = (vec![], vec![], vec![], vec![], vec![], vec![]);
    for &(t0, t) in &pairs {
        kp.push(fam.prob_kernel(&[t0], &[t]));
        kc.push(circle::prob_closed(r, t0, t));
        let a = circle::rho_circle(r, phi, t0).expect("validated radius");
        let b = circle::rho_circle(r, phi, t).expect("validated radius");
        hp.push(hs_distance(&a, &b).expect("2x2"));
        hc.push(circle::hs_distance_closed(r, t - t0));
        let closed = circle::pseudo_distance_sq_closed(r, t - t0);
        let d = pseudo_distance(&a, &b).expect("2x2");
        if closed.is_finite() && d.is_finite() {
            dp.push(d * d);
            dc.push(closed);
        }
    }
    rep.push(Check::vector("circle.prob.kernel", "circle probability kernel", &kp, &kc, 1e-12));
    rep.push(Check::vector("circle.distance.hs", "circle Hilbert-Schmidt distance", &hp, &hc, 1e-12));
    rep.push(Check::vector("circle.distance.pseudo", "circle pseudo-distance squared", &dp, &dc, 1e-12));
    small_separation(
        &mut rep,
        "circle",
        r,
        circle::pseudo_distance_sq_closed(r, 1e-3).sqrt(),
        circle::small_separation_coefficient(r) * 1e-3,
        circle::small_separation_coefficient_alt(r) * 1e-3,
    );
    rep
}

fn small_separation(rep: &mut Report, geometry: &str, r: f64, exact: f64, law: f64, alt: f64) {
    if r == 0.0 {
        rep.push(Check::close(
            &format!("{geometry}.distance.small_separation"),
            "pseudo-distance at small separation",
            exact,
            0.0,
            1e-15,
        ));
        return;
    }
    rep.push(Check::close(
        &format!("{geometry}.distance.small_separation"),
        "pseudo-distance at small separation",
        exact / law,
        1.0,
        1e-2,
    ));
    rep.push(Check::note(
        &format!("{geometry}.distance.small_separation_alt"),
        "pseudo-distance at small separation, alternative coefficient",
        json!(exact / alt),
        json!(1.0),
    ));
}

pub fn sphere_suite(o: &Overrides) -> Report {
    let r = o.r.unwrap_or(0.6);
    let n = o.grid.unwrap_or(24);
    let mut rep = Report::new("sphere", json!({"r": r, "grid": n}));

    let fam = sphere::sphere_family(r, sphere::sphere_rule(8, 8)).expect("validated radius");
    rep.push(Check::defect(
        "sphere.resolution",
        "sphere resolution of identity",
        fam.check_resolution().defect,
        1e-12,
    ));
    let d = [0.3, -0.4, 0.5];
    let m = sphere::transported_resolution(&d, &sphere::sphere_rule(8, 8));
    rep.push(Check::vector(
        "sphere.resolution.general_vector",
        "transport of a general Bloch vector",
        &[m[(0, 0)].re, m[(1, 1)].re, m[(0, 1)].re, m[(0, 1)].im],
        &[1.0, 1.0, d[0] / 2.0, d[1] / 2.0],
        1e-12,
    ));

    let fam = sphere::sphere_family(r, sphere::sphere_rule_polar(n, n)).expect("validated radius");
    let aq = fam.quantize_real(|x| x[1]).expect("finite function");
    let ap = fam.quantize_real(|x| x[0].cos()).expect("finite function");
    rep.push(Check::defect("sphere.quantize.q", "quantized azimuth", aq.max_abs_diff(&sphere::a_q(r)), 1e-10));
    rep.push(Check::defect("sphere.quantize.p", "quantized cos theta", ap.max_abs_diff(&sphere::a_p(r)), 1e-10));
    rep.push(Check::defect(
        "sphere.quantize.commutator",
        "commutator of the quantized pair",
        aq.commutator(&ap).max_abs_diff(&sphere::qp_commutator(r)),
        1e-10,
    ));
    let points = [(0.3, 0.2), (1.4, 4.0), (2.9, 5.5), (1.0, 1.0)];
    let lq: Vec<f64> = points.iter().map(|&(t, p)| fam.lower_symbol(&aq, &[t, p]).expect("2x2").re).collect();
    let cq: Vec<f64> = points.iter().map(|&(t, p)| sphere::q_lower_symbol(r, t, p)).collect();
    rep.push(Check::vector("sphere.lower_symbol.q", "lower symbol of the quantized azimuth", &lq, &cq, 1e-10));
    let lp: Vec<f64> = points.iter().map(|&(t, p)| fam.lower_symbol(&ap, &[t, p]).expect("2x2").re).collect();
    let cp: Vec<f64> = points.iter().map(|&(t, _)| sphere::p_lower_symbol(r, t)).collect();
    let pp: Vec<f64> = points.iter().map(|&(t, _)| sphere::p_lower_symbol_alt(r, t)).collect();
    rep.push(Check::vector("sphere.lower_symbol.p", "lower symbol of the quantized cos theta", &lp, &cp, 1e-10));
    rep.push(Check::note(
        "sphere.lower_symbol.p_alt",
        "lower symbol of the quantized cos theta, alternative form",
        json!(lp),
        json!(pp),
    ));

    let pairs = [((0.4, 0.1), (2.0, 3.0)), ((1.2, 5.0), (1.2, 5.0)), ((0.0, 0.0), (PI, 0.0)), ((2.2, 1.0), (0.7, 4.4))];
    let (mut kp, mut kc, mut hp, mut hc, mut dp, mut dc) = (vec![], vec![], vec![], vec![], vec![], vec![]);
    for &(a, b) in &pairs {
        kp.push(fam.prob_kernel(&[a.0, a.1], &[b.0, b.1]));
        kc.push(sphere::prob_closed(r, a, b));
        let ra = sphere::rho_sphere(r, a.0, a.1).expect("validated radius");
        let rb = sphere::rho_sphere(r, b.0, b.1).expect("validated radius");
        hp.push(hs_distance(&ra, &rb).expect("2x2"));
        hc.push(sphere::hs_distance_closed(r, a, b));
        let closed = sphere::pseudo_distance_sq_closed(r, a, b);
        let d = pseudo_distance(&ra, &rb).expect("2x2");
        if closed.is_finite() && d.is_finite() {
            dp.push(d * d);
            dc.push(closed);
        }
    }
    rep.push(Check::vector("sphere.prob.kernel", "sphere probability kernel", &kp, &kc, 1e-12));
    rep.push(Check::vector("sphere.distance.hs", "sphere Hilbert-Schmidt distance", &hp, &hc, 1e-12));
    rep.push(Check::vector("sphere.distance.pseudo", "sphere pseudo-distance squared", &dp, &dc, 1e-12));
    if r == 0.0 {
        let worst = kp.iter().map(|p| (p - 0.5).abs()).fold(0.0, f64::max);
        rep.push(Check::defect("sphere.prob.uniform", "uniform kernel at r = 0", worst, 1e-15));
    }
    let a = (1.1, 0.4);
    let b = (1.1 + 6e-4, 0.4 + 8e-4);
    let arc = sphere::local_arc(a, b);
    small_separation(
        &mut rep,
        "sphere",
        r,
        sphere::pseudo_distance_sq_closed(r, a, b).sqrt(),
        sphere::small_separation_coefficient(r) * arc,
        sphere::small_separation_coefficient_alt(r) * arc,
    );
    rep
}

/// Purity of displaced thermal states at `dim` for a sweep of `t`.
pub fn plane_purity_checks(t: f64, dim: usize) -> Vec<Check> {
    sweep(t, &[0.1, 0.3, 0.5])
        .into_iter()
        .map(|tt| {
            let p = ThermalParams::new(tt, dim).expect("validated t");
            let rho = plane::displaced_thermal(C64::new(0.6, -0.4), &p).expect("inside the truncation");
            Check::close(
                &format!("plane.purity.t={tt}.dim={dim}"),
                "purity of the displaced thermal state",
                rho.trace_product(&rho).re,
                (1.0 - tt) / (1.0 + tt),
                1e-9,
            )
        })
        .collect()
}

/// Translation used by the covariance checks; far enough out for the truncation to show.
pub const COVARIANCE_SHIFT: f64 = 2.5;

/// Covariance defects at `dim`, each below `1e-5`.
pub fn plane_covariance(t: f64, dim: usize) -> plane::CovarianceReport {
    let p = ThermalParams::new(t, dim).expect("validated t");
    let q = PlaneQuantizer::new(p, PlaneGrid::for_params(&p));
    plane::covariance_suite(&q, C64::new(COVARIANCE_SHIFT, 0.0), 0.7).expect("finite test functions")
}

pub fn plane_suite(o: &Overrides) -> Report {
    let t = o.t.unwrap_or(0.3);
    let dim = o.dim.unwrap_or(48);
    let mut rep = Report::new("plane", json!({"t": t, "dim": dim, "covariance_shift": COVARIANCE_SHIFT}));
    let params = ThermalParams::new(t, dim).expect("validated t");

    rep.extend(plane_purity_checks(t, dim));
    if dim != 64 {
        rep.extend(plane_purity_checks(t, 64));
    }
    for w in [0.5, 1.7, 3.0] {
        let levels = params.levels();
        rep.push(Check::close(
            &format!("plane.bessel_sum.w={w}"),
            "Poisson-Bessel diagonal sum",
            plane::diagonal_sum(w, t, levels),
            plane::diagonal_sum_closed(w, t),
            1e-10,
        ));
        rep.push(Check::note(
            &format!("plane.bessel_sum_alt.w={w}"),
            "Poisson-Bessel diagonal sum, alternative exponent",
            json!(plane::diagonal_sum(w, t, levels)),
            json!(plane::diagonal_sum_closed_alt(w, t)),
        ));
        rep.push(Check::close(
            &format!("plane.prob.series.w={w}"),
            "plane probability series",
            plane::prob_series(w, t, levels),
            plane::prob_closed(w, t),
            1e-10,
        ));
        rep.push(Check::note(
            &format!("plane.prob.series_alt.w={w}"),
            "plane probability series, alternative coefficients",
            json!(plane::prob_series_alt(w, t, levels)),
            json!(plane::prob_closed(w, t)),
        ));
    }
    let z0 = C64::new(0.4, 0.3);
    let z = C64::new(-0.5, 0.9);
    let w = (z - z0).norm_sqr();
    rep.push(Check::close(
        "plane.prob.matrix",
        "plane probability kernel",
        plane::prob_matrix(z0, z, &params).expect("inside the truncation"),
        plane::prob_closed(w, t),
        1e-8,
    ));
    let a = plane::displaced_thermal(z0, &params).expect("inside the truncation");
    let b = plane::displaced_thermal(z, &params).expect("inside the truncation");
    rep.push(Check::close(
        "plane.distance.hs",
        "plane Hilbert-Schmidt distance",
        hs_distance(&a, &b).expect("same dimension"),
        plane::hs_distance_closed(w, t),
        1e-8,
    ));
    rep.push(Check::note(
        "plane.distance.hs_alt",
        "plane Hilbert-Schmidt distance, alternative form",
        json!(hs_distance(&a, &b).expect("same dimension")),
        json!(plane::hs_distance_closed_alt(w, t)),
    ));
    rep.push(Check::close(
        "plane.distance.pseudo",
        "plane pseudo-distance",
        pseudo_distance(&a, &b).expect("same dimension"),
        plane::pseudo_distance_closed(w, t),
        1e-8,
    ));
    let excess = plane::thermal_excess(w, t);
    rep.push(Check::holds(
        "plane.distance.thermal_excess",
        "pseudo-distance excess over the euclidean distance",
        json!(excess),
        json!("<= 0"),
        excess <= 0.0,
    ));

    let q = PlaneQuantizer::new(params, PlaneGrid::for_params(&params));
    let block = params.fock().protected_block();
    let cf = plane::closed_forms(&params);
    let id = OperatorMatrix::identity(dim);
    rep.push(Check::defect(
        "plane.resolution",
        "plane resolution of identity",
        q.resolution_defect(block),
        1e-6,
    ));
    let aq = q.quantize(|z| c_re(plane::q_of(z))).expect("finite function");
    let ap = q.quantize(|z| c_re(plane::p_of(z))).expect("finite function");
    rep.push(Check::defect("plane.quantize.q", "quantized position", aq.block_max_abs_diff(&cf.q, block), 1e-6));
    rep.push(Check::defect("plane.quantize.p", "quantized momentum", ap.block_max_abs_diff(&cf.p, block), 1e-6));
    rep.push(Check::defect(
        "plane.ccr",
        "canonical commutation rule",
        aq.commutator(&ap).block_max_abs_diff(&id.scale(C64::new(0.0, 1.0)), block),
        1e-8,
    ));
    let shift = id.scale_real(-0.5 * params.s());
    let q2 = cf.q.matmul(&cf.q);
    let p2 = cf.p.matmul(&cf.p);
    let aq2 = q.quantize(|z| c_re(plane::q_of(z).powi(2))).expect("finite function");
    let ap2 = q.quantize(|z| c_re(plane::p_of(z).powi(2))).expect("finite function");
    rep.push(Check::defect(
        "plane.quantize.q2",
        "quantized position squared",
        (&aq2 - &q2).block_max_abs_diff(&shift, block),
        1e-5,
    ));
    rep.push(Check::defect(
        "plane.quantize.p2",
        "quantized momentum squared",
        (&ap2 - &p2).block_max_abs_diff(&shift, block),
        1e-5,
    ));
    let an = q.quantize(|z| c_re(z.norm_sqr())).expect("finite function");
    rep.push(Check::defect(
        "plane.quantize.abs2",
        "quantized oscillator energy",
        an.block_max_abs_diff(&cf.abs2, block),
        1e-5,
    ));
    rep.push(Check::close(
        "plane.energy.ground",
        "oscillator ground energy",
        an[(0, 0)].re,
        params.ground_energy(),
        1e-6,
    ));
    for tt in sweep(t, &[0.0, 0.2, 0.5, 0.9]) {
        let p = ThermalParams::new(tt, dim).expect("validated t");
        rep.push(Check::close(
            &format!("plane.energy.gap.t={tt}"),
            "ground energy above the potential minimum",
            p.ground_energy() - p.potential_minimum(),
            0.5,
            1e-15,
        ));
    }

    let mut previous: Option<plane::CovarianceReport> = None;
    for d in [dim, dim + 16] {
        let c = plane_covariance(t, d);
        for (name, v) in [
            ("translation", c.translation),
            ("rotation", c.rotation),
            ("parity", c.parity),
            ("conjugation", c.conjugation),
        ] {
            rep.push(Check::defect(
                &format!("plane.covariance.{name}.dim={d}"),
                "plane covariance",
                v,
                1e-5,
            ));
        }
        if let Some(prev) = previous {
            rep.push(covariance_trend(&prev, &c));
        }
        previous = Some(c);
    }

    rep.extend(phase_checks(t, 32));
    rep
}

/// Defect floor below which defects are compared as rounding noise.
pub const ROUNDING_FLOOR: f64 = 1e-12;

/// Worst covariance defect strictly decreases from `a` to `b`, unless both sit at the rounding floor.
/// Rotation, parity and conjugation commute with the truncation, so translation dominates.
pub fn covariance_trend(a: &plane::CovarianceReport, b: &plane::CovarianceReport) -> Check {
    let (wa, wb) = (a.worst(), b.worst());
    Check::holds(
        &format!("plane.covariance.trend.dim={}->{}", a.dim, b.dim),
        "plane covariance convergence in the truncation",
        json!([wa, wb]),
        json!("strictly decreasing"),
        wb < wa || wa.max(wb) <= ROUNDING_FLOOR,
    )
}

pub fn phase_checks(t: f64, dim: usize) -> Vec<Check> {
    let p = ThermalParams::new(t, dim).expect("validated t");
    let q = PlaneQuantizer::new(p, PlaneGrid::for_params(&p));
    let block = p.fock().protected_block();
    let a = plane::phase_quadrature(&q, 0.0).expect("finite function");
    let mut out = vec![Check::defect(
        "plane.phase.hermitian",
        "phase operator by quadrature",
        a.hermiticity_defect(),
        1e-6,
    )];
    let diag: Vec<f64> = (0..block).map(|m| a[(m, m)].re).collect();
    out.push(Check::vector(
        "plane.phase.diagonal",
        "phase operator diagonal",
        &diag,
        &vec![PI; block],
        1e-6,
    ));
    let theta = 0.9;
    let moved = plane::phase_quadrature(&q, theta).expect("finite function");
    out.push(Check::defect(
        "plane.phase.covariance",
        "angular covariance of the phase operator",
        a.conjugate_by(&p.fock().torus(theta, 0.0)).block_max_abs_diff(&moved, block),
        1e-6,
    ));
    for e in plane::phase_table(&a, t, 6) {
        out.push(Check::close(
            &format!("plane.phase.F[{},{}]", e.m, e.mp),
            "phase operator coefficients",
            e.quadrature,
            e.closed,
            1e-6,
        ));
        out.push(Check::note(
            &format!("plane.phase.F_alt[{},{}]", e.m, e.mp),
            "phase operator coefficients, alternative form",
            json!(e.quadrature),
            e.alt.map_or(Value::Null, |v| json!(v)),
        ));
    }
    out
}

pub fn halfplane_suite(o: &Overrides) -> Report {
    let alpha = o.alpha.unwrap_or(2.0);
    let t = o.t.unwrap_or(0.25);
    let dim = o.dim.unwrap_or(16);
    let block = 6;
    let params = AffineParams::new(alpha, t, dim).expect("validated parameters");
    let mut grid = AffineGrid::for_params(&params);
    if let Some(g) = o.grid {
        grid.n_phi = g;
    }
    let mut rep = Report::new(
        "halfplane",
        json!({"alpha": alpha, "t": t, "dim": dim, "block": block, "grid": grid}),
    );

    rep.push(Check::defect(
        "halfplane.basis.gram",
        "orthonormality of the Laguerre basis",
        halfplane::gram_defect(alpha, 8),
        1e-12,
    ));
    let moments: Vec<f64> = (0..5).map(|n| halfplane::inverse_moment(n, alpha)).collect();
    rep.push(Check::vector(
        "halfplane.basis.inverse_moment",
        "inverse moment of the Laguerre basis",
        &moments,
        &[1.0 / alpha; 5],
        1e-12,
    ));

    let e0 = |x: f64| c_re(halfplane::laguerre_basis(0, alpha, x).expect("x >= 0"));
    let (qd, pd) = (2.0, 0.7);
    let rule = povm_quant::numerics::QuadratureRule::half_line(40, 0.0, qd).expect("positive nodes");
    let xs: Vec<f64> = rule.nodes().map(|x| x[0]).collect();
    let img = halfplane::affine_action(qd, pd, e0, &xs).expect("q > 0");
    let norm: f64 = img.iter().zip(rule.weights()).map(|(v, w)| v.norm_sqr() * w).sum();
    rep.push(Check::close("halfplane.unitarity", "unitarity of the affine action", norm, 1.0, 1e-10));
    let (g, g0) = ((2.0, 1.0), (0.5, -1.0));
    let xs = [0.2, 1.0, 3.0];
    let inner = |x: f64| halfplane::affine_action(g0.0, g0.1, e0, &[x]).expect("q > 0")[0];
    let twice = halfplane::affine_action(g.0, g.1, inner, &xs).expect("q > 0");
    let (qc, pc) = halfplane::compose(g, g0);
    let once = halfplane::affine_action(qc, pc, e0, &xs).expect("q > 0");
    let law = twice.iter().zip(&once).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    rep.push(Check::defect("halfplane.group_law", "affine group law", law, 1e-12));

    let xs = [0.3, 1.0, 2.5, 6.0];
    for n in 0..=4 {
        let (lambda, residual) = halfplane::kernel_eigen_factor(n, &xs, &params, halfplane::thermal_kernel);
        rep.push(Check::close(
            &format!("halfplane.kernel.eigenvalue.n={n}"),
            "thermal kernel eigen-relation",
            lambda,
            (1.0 - t) * t.powi(n as i32),
            1e-8,
        ));
        rep.push(Check::defect(
            &format!("halfplane.kernel.eigenfunction.n={n}"),
            "thermal kernel eigen-relation",
            residual,
            1e-8,
        ));
    }
    let (lambda, residual) = halfplane::kernel_eigen_factor(0, &xs, &params, halfplane::thermal_kernel_alt);
    rep.push(Check::note(
        "halfplane.kernel.eigen_alt.n=0",
        "thermal kernel eigen-relation, alternative kernel",
        json!([lambda, residual]),
        json!([1.0 - t, 0.0]),
    ));
    rep.push(Check::close("halfplane.kernel.trace", "trace of the thermal kernel", halfplane::kernel_trace(&params), 1.0, 1e-8));
    let sym = (halfplane::thermal_kernel(0.4, 1.9, &params) - halfplane::thermal_kernel(1.9, 0.4, &params)).abs();
    rep.push(Check::defect("halfplane.kernel.symmetric", "symmetry of the thermal kernel", sym, 1e-15));

    let c = halfplane::c_rho_quadrature(&params, &grid);
    rep.push(Check::close(
        "halfplane.c_rho",
        "admissibility constant",
        c,
        params.c_rho_truncated(),
        1e-8,
    ));
    rep.push(Check::note(
        "halfplane.c_rho_alt",
        "admissibility constant, alternative form",
        json!(c),
        json!(params.c_rho_alt()),
    ));
    rep.push(Check::note(
        "halfplane.c_rho_untruncated",
        "admissibility constant of the full thermal state",
        json!(c / params.truncation_mass()),
        json!(params.c_rho()),
    ));

    let study = halfplane::affine_resolution_check(&params, &grid, block);
    rep.push(Check::defect(
        "halfplane.resolution",
        "truncated resolution of identity",
        study.fine_defect,
        1e-3,
    ));
    rep.push(Check::close(
        "halfplane.resolution.diagonal",
        "truncated resolution of identity",
        study.diagonal_00,
        1.0,
        1e-3,
    ));
    rep.push(Check::holds(
        "halfplane.resolution.refinement",
        "truncated resolution of identity under refinement",
        json!([study.coarse_defect, study.fine_defect]),
        json!("non-increasing"),
        study.converging(),
    ));
    rep
}

pub fn finite_suite(o: &Overrides) -> Report {
    let seed = o.seed.unwrap_or(DEFAULT_SEED);
    let mut rep = Report::new("finite", json!({"n": 2, "seed": seed, "restarts": 8}));

    for n in 2..=4 {
        let f = feasibility_bounds(n, false);
        rep.push(Check::holds(
            &format!("finite.feasibility.n={n}"),
            "full-rank point-count bound",
            json!(f.max_points),
            json!(2 * n * n - 2),
            f.max_points == 2 * n * n - 2 && f.admits(2 * n * n - 2) && !f.admits(2 * n * n - 1),
        ));
        let r1 = feasibility_bounds(n, true);
        rep.push(Check::note(
            &format!("finite.feasibility_rank_one.n={n}"),
            "rank-one point-count range",
            json!([r1.min_points, r1.max_points]),
            json!(r1.alt_upper),
        ));
    }

    let opts = ReconstructOptions {
        seed,
        restarts: 8,
        ..Default::default()
    };
    for points in [3, 4, 2] {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(points as u64));
        let (family, measure) = random_resolving_family(2, points, false, &mut rng).expect("spanning seeds");
        let table = gram_probabilities(&family, &measure).expect("resolving family");
        match reconstruct(&table, &opts) {
            Ok(sol) => {
                rep.push(Check::defect(
                    &format!("finite.roundtrip.N={points}"),
                    "reconstruction from the probability table",
                    sol.table_error,
                    1e-6,
                ));
                rep.push(Check::defect(
                    &format!("finite.roundtrip.resolution.N={points}"),
                    "reconstructed family resolves the identity",
                    sol.resolution_defect,
                    1e-6,
                ));
                if points == 2 {
                    let comm = sol.family[0].commutator(&sol.family[1]).max_abs();
                    rep.push(Check::defect(
                        "finite.commuting_pair",
                        "two-point families commute",
                        comm,
                        1e-8,
                    ));
                }
            }
            Err(e) => rep.push(Check::holds(
                &format!("finite.roundtrip.N={points}"),
                "reconstruction from the probability table",
                json!(e.to_string()),
                json!("converged"),
                false,
            )),
        }
    }
    rep
}

/// A geometry's family with its block size and random point and function samplers.
struct Geometry11 {
    name: &'static str,
    family: DensityFamily,
    block: usize,
    resolution_tol: f64,
    point: fn(&mut ChaCha8Rng) -> Vec<f64>,
}

fn core_families(o: &Overrides) -> Vec<Geometry11> {
    let r = o.r.unwrap_or(0.7);
    let circle_point: fn(&mut ChaCha8Rng) -> Vec<f64> = |g| vec![g.random_range(0.0..2.0 * PI)];
    let sphere_point: fn(&mut ChaCha8Rng) -> Vec<f64> = |g| vec![g.random_range(0.0..PI), g.random_range(0.0..2.0 * PI)];
    let plane_point: fn(&mut ChaCha8Rng) -> Vec<f64> = |g| vec![g.random_range(-1.5..1.5), g.random_range(-1.5..1.5)];
    let half_point: fn(&mut ChaCha8Rng) -> Vec<f64> = |g| vec![g.random_range(-1.0f64..1.0).exp(), g.random_range(-2.0..2.0)];

    let pp = ThermalParams::new(0.3, 8).expect("valid parameters");
    let plane_family = PlaneQuantizer::new(pp, PlaneGrid::for_params(&pp)).family();
    let hp = AffineParams::new(2.0, 0.25, 10).expect("valid parameters");
    let mut grid = AffineGrid::for_params(&hp);
    grid.n_phi = 64;
    vec![
        Geometry11 {
            name: "circle",
            family: circle::circle_family(r, 0.3, 32).expect("valid radius"),
            block: 2,
            resolution_tol: 1e-12,
            point: circle_point,
        },
        Geometry11 {
            name: "sphere",
            family: sphere::sphere_family(r, sphere::sphere_rule(8, 8)).expect("valid radius"),
            block: 2,
            resolution_tol: 1e-12,
            point: sphere_point,
        },
        Geometry11 {
            name: "plane",
            family: plane_family,
            block: 8,
            resolution_tol: 1e-6,
            point: plane_point,
        },
        Geometry11 {
            name: "halfplane",
            family: halfplane::affine_family(&hp, &grid, 3),
            block: 3,
            resolution_tol: 1e-6,
            point: half_point,
        },
    ]
}

/// Bounded test function `Σ c_k cos(a_k · x + b_k)` with random data.
#[derive(Clone)]
struct Trig {
    terms: Vec<(f64, Vec<f64>, f64)>,
}

impl Trig {
    fn random(rng: &mut ChaCha8Rng, dim: usize) -> Self {
        let terms = (0..3)
            .map(|_| {
                (
                    rng.random_range(-1.0..1.0),
                    (0..dim).map(|_| rng.random_range(-2.0..2.0)).collect(),
                    rng.random_range(0.0..2.0 * PI),
                )
            })
            .collect();
        Self { terms }
    }

    fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(c, a, b)| c * (a.iter().zip(x).map(|(ai, xi)| ai * xi).sum::<f64>() + b).cos())
            .sum()
    }

    fn sup(&self) -> f64 {
        self.terms.iter().map(|t| t.0.abs()).sum()
    }
}

pub const CORE_DRAWS: usize = 50;

pub fn core_suite(o: &Overrides) -> Report {
    let seed = o.seed.unwrap_or(DEFAULT_SEED);
    let mut rep = Report::new("core", json!({"seed": seed, "draws": CORE_DRAWS, "r": o.r.unwrap_or(0.7)}));
    for (gi, g) in core_families(o).into_iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(gi as u64);
        let fam = &g.family;
        let pdim = fam.point_dim();
        let id = OperatorMatrix::identity(fam.hilbert_dim());
        let one = fam.quantize_real(|_| 1.0).expect("finite function");
        rep.push(Check::defect(
            &format!("core.{}.quantize_one", g.name),
            "quantization of the constant function",
            one.block_max_abs_diff(&id, g.block),
            g.resolution_tol,
        ));
        let (mut lin, mut row, mut contraction, mut routes) = (0.0f64, 0.0f64, f64::NEG_INFINITY, 0.0f64);
        for _ in 0..CORE_DRAWS {
            let f = Trig::random(&mut rng, pdim);
            let h = Trig::random(&mut rng, pdim);
            let (a, b) = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let af = fam.quantize_real(|x| f.eval(x)).expect("finite function");
            let ah = fam.quantize_real(|x| h.eval(x)).expect("finite function");
            let combo = fam.quantize_real(|x| a * f.eval(x) + b * h.eval(x)).expect("finite function");
            let mut expect = af.scale_real(a);
            expect.add_scaled_real(b, &ah);
            lin = lin.max(combo.max_abs_diff(&expect) / (1.0 + expect.max_abs()));

            let x0 = (g.point)(&mut rng);
            let trace = fam.lower_symbol(&id, &x0).expect("same dimension").re;
            row = row.max((fam.kernel_mass(&x0) - trace).abs());

            let x = (g.point)(&mut rng);
            let s = fam.lower_symbol(&af, &x).expect("same dimension").norm();
            contraction = contraction.max(s - f.sup());

            let rho_m: DensityMatrix = fam.evaluate(&(g.point)(&mut rng));
            let (v1, v2) = fam
                .measurement_expectation(rho_m.as_operator(), |x| c_re(f.eval(x)))
                .expect("same dimension");
            routes = routes.max((v1 - v2).norm());
        }
        rep.push(Check::defect(&format!("core.{}.linearity", g.name), "linearity of quantization", lin, 1e-12));
        rep.push(Check::defect(
            &format!("core.{}.row_normalization", g.name),
            "probability kernel row normalization",
            row,
            g.resolution_tol,
        ));
        rep.push(Check::holds(
            &format!("core.{}.contraction", g.name),
            "lower symbol sup-norm contraction",
            json!(contraction),
            json!("<= 0"),
            contraction <= g.resolution_tol,
        ));
        rep.push(Check::defect(
            &format!("core.{}.measurement_routes", g.name),
            "measurement expectation by two routes",
            routes,
            1e-12,
        ));
    }
    rep
}
