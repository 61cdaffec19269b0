use std::f64::consts::PI;
use std::ops::Range;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::special::ln_gamma;
use super::NumericsError;

const PAIRWISE_BLOCK: usize = 32;

/// Sum with pairwise (cascade) splitting; error grows like O(log n) instead of O(n).
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= PAIRWISE_BLOCK {
        return xs.iter().sum();
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

/// Reduce `0..len` in fixed chunks evaluated in parallel, then combine the chunk
/// results pairwise in index order. The result does not depend on the thread count.
pub fn chunked_reduce<T, M, C>(len: usize, chunk: usize, map_chunk: M, combine: C) -> Option<T>
where
    T: Send,
    M: Fn(Range<usize>) -> T + Sync,
    C: Fn(T, T) -> T + Sync,
{
    let chunk = chunk.max(1);
    let ranges: Vec<Range<usize>> = (0..len)
        .step_by(chunk)
        .map(|lo| lo..(lo + chunk).min(len))
        .collect();
    let mut parts: Vec<T> = ranges.into_par_iter().map(&map_chunk).collect();
    while parts.len() > 1 {
        let mut next = Vec::with_capacity(parts.len().div_ceil(2));
        let mut it = parts.into_iter();
        while let Some(a) = it.next() {
            match it.next() {
                Some(b) => next.push(combine(a, b)),
                None => next.push(a),
            }
        }
        parts = next;
    }
    parts.pop()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleKind {
    PeriodicTrapezoid,
    GaussLegendre,
    GaussLaguerre { alpha: f64 },
    Product,
}

/// Nodes and weights realizing a measure. Points are stored flat, `dim` coordinates each.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    dim: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    kind: RuleKind,
    /// Polynomial (or trigonometric, for the trapezoid) degree integrated exactly.
    exact_degree: Option<usize>,
}

impl QuadratureRule {
    pub fn from_parts(
        dim: usize,
        nodes: Vec<f64>,
        weights: Vec<f64>,
        kind: RuleKind,
        exact_degree: Option<usize>,
    ) -> Self {
        assert!(dim >= 1, "quadrature points need at least one coordinate");
        assert_eq!(nodes.len(), dim * weights.len(), "node/weight count mismatch");
        assert!(weights.iter().all(|w| w.is_finite()), "non-finite weight");
        Self {
            dim,
            nodes,
            weights,
            kind,
            exact_degree,
        }
    }

    /// `n` equispaced nodes on `[start, start + length)`, each weighted `density * length / n`.
    pub fn periodic_trapezoid(n: usize, start: f64, length: f64, density: f64) -> Result<Self, NumericsError> {
        if n < 1 {
            return Err(NumericsError::TooFewNodes {
                kind: "periodic-trapezoid",
                min: 1,
                got: n,
            });
        }
        let h = length / n as f64;
        let nodes = (0..n).map(|k| start + h * k as f64).collect();
        Ok(Self::from_parts(
            1,
            nodes,
            vec![density * h; n],
            RuleKind::PeriodicTrapezoid,
            Some(n - 1),
        ))
    }

    /// Gauss–Legendre on `[a, b]` with plain `dx` weights.
    pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Result<Self, NumericsError> {
        if n < 1 {
            return Err(NumericsError::TooFewNodes {
                kind: "gauss-legendre",
                min: 1,
                got: n,
            });
        }
        let (xs, ws) = legendre_nodes(n);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        let nodes = xs.iter().map(|x| mid + half * x).collect();
        let weights = ws.iter().map(|w| half * w).collect();
        Ok(Self::from_parts(
            1,
            nodes,
            weights,
            RuleKind::GaussLegendre,
            Some(2 * n - 1),
        ))
    }

    /// Composite Gauss–Legendre: every interval between consecutive sorted `breaks`
    /// is cut into `panels` equal panels of `n` nodes each.
    pub fn composite_legendre(breaks: &[f64], panels: usize, n: usize) -> Result<Self, NumericsError> {
        if breaks.len() < 2 || panels < 1 {
            return Err(NumericsError::TooFewNodes {
                kind: "composite gauss-legendre",
                min: 2,
                got: breaks.len().min(panels + 1),
            });
        }
        let mut cuts = breaks.to_vec();
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let base = Self::gauss_legendre(n, -1.0, 1.0)?;
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        for seg in cuts.windows(2) {
            let h = (seg[1] - seg[0]) / panels as f64;
            for p in 0..panels {
                let a = seg[0] + h * p as f64;
                for (x, w) in base.nodes.iter().zip(&base.weights) {
                    nodes.push(a + 0.5 * h * (x + 1.0));
                    weights.push(0.5 * h * w);
                }
            }
        }
        Ok(Self::from_parts(
            1,
            nodes,
            weights,
            RuleKind::GaussLegendre,
            Some(2 * n - 1),
        ))
    }

    /// Gauss–Laguerre for `∫_0^∞ f(x) x^α e^{-x} dx`; the weight function is folded into the weights.
    pub fn gauss_laguerre(n: usize, alpha: f64) -> Result<Self, NumericsError> {
        if n < 1 {
            return Err(NumericsError::TooFewNodes {
                kind: "gauss-laguerre",
                min: 1,
                got: n,
            });
        }
        if !(alpha > -1.0) {
            return Err(NumericsError::Domain {
                function: "gauss_laguerre",
                name: "alpha",
                value: alpha,
            });
        }
        let (xs, ws) = laguerre_nodes(n, alpha)?;
        Ok(Self::from_parts(
            1,
            xs,
            ws,
            RuleKind::GaussLaguerre { alpha },
            Some(2 * n - 1),
        ))
    }

    /// Laguerre nodes scaled by `scale`, weights converted to the plain measure `dx` on `[0, ∞)`.
    pub fn half_line(n: usize, alpha: f64, scale: f64) -> Result<Self, NumericsError> {
        let base = Self::gauss_laguerre(n, alpha)?;
        let nodes = base.nodes.iter().map(|x| scale * x).collect();
        let weights = base
            .nodes
            .iter()
            .zip(&base.weights)
            .map(|(&x, &w)| scale * w * (x - alpha * x.ln()).exp())
            .collect();
        Ok(Self::from_parts(1, nodes, weights, base.kind, None))
    }

    /// Tensor product; coordinates of `self` come first.
    pub fn product(&self, other: &Self) -> Self {
        let dim = self.dim + other.dim;
        let mut nodes = Vec::with_capacity(dim * self.len() * other.len());
        let mut weights = Vec::with_capacity(self.len() * other.len());
        for i in 0..self.len() {
            for j in 0..other.len() {
                nodes.extend_from_slice(self.node(i));
                nodes.extend_from_slice(other.node(j));
                weights.push(self.weights[i] * other.weights[j]);
            }
        }
        let exact_degree = match (self.exact_degree, other.exact_degree) {
            (Some(a), Some(b)) => Some(a.min(b)),
            _ => None,
        };
        Self::from_parts(dim, nodes, weights, RuleKind::Product, exact_degree)
    }

    /// Push every node through `map`, which returns the new point and the Jacobian factor.
    pub fn mapped<F>(&self, new_dim: usize, map: F) -> Self
    where
        F: Fn(&[f64]) -> (Vec<f64>, f64),
    {
        let mut nodes = Vec::with_capacity(new_dim * self.len());
        let mut weights = Vec::with_capacity(self.len());
        for i in 0..self.len() {
            let (x, jac) = map(self.node(i));
            assert_eq!(x.len(), new_dim, "mapped point has the wrong dimension");
            nodes.extend(x);
            weights.push(self.weights[i] * jac);
        }
        Self::from_parts(new_dim, nodes, weights, self.kind, None)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.weights.iter_mut().for_each(|w| *w *= factor);
        out
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    pub fn exact_degree(&self) -> Option<usize> {
        self.exact_degree
    }

    pub fn node(&self, i: usize) -> &[f64] {
        &self.nodes[i * self.dim..(i + 1) * self.dim]
    }

    pub fn nodes(&self) -> impl Iterator<Item = &[f64]> {
        self.nodes.chunks_exact(self.dim)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total_weight(&self) -> f64 {
        pairwise_sum(&self.weights)
    }

    pub fn integrate<F: Fn(&[f64]) -> f64>(&self, f: F) -> f64 {
        let terms: Vec<f64> = self
            .nodes()
            .zip(&self.weights)
            .map(|(x, w)| w * f(x))
            .collect();
        pairwise_sum(&terms)
    }

    pub fn integrate_par<F: Fn(&[f64]) -> f64 + Sync>(&self, f: F) -> f64 {
        let terms: Vec<f64> = (0..self.len())
            .into_par_iter()
            .map(|i| self.weights[i] * f(self.node(i)))
            .collect();
        pairwise_sum(&terms)
    }
}

/// Declarative rule description accepted by [`make_rule`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RuleSpec {
    PeriodicTrapezoid {
        n: usize,
        start: f64,
        length: f64,
        density: f64,
    },
    GaussLegendre {
        n: usize,
        a: f64,
        b: f64,
    },
    GaussLaguerre {
        n: usize,
        alpha: f64,
    },
    HalfLine {
        n: usize,
        alpha: f64,
        scale: f64,
    },
    Product {
        first: Box<RuleSpec>,
        second: Box<RuleSpec>,
    },
}

impl RuleSpec {
    /// Trapezoid on `[0, 2π)` with weight density `density`.
    pub fn circle(n: usize, density: f64) -> Self {
        RuleSpec::PeriodicTrapezoid {
            n,
            start: 0.0,
            length: 2.0 * PI,
            density,
        }
    }

    pub fn times(self, other: RuleSpec) -> Self {
        RuleSpec::Product {
            first: Box::new(self),
            second: Box::new(other),
        }
    }
}

pub fn make_rule(spec: &RuleSpec) -> Result<QuadratureRule, NumericsError> {
    match spec {
        RuleSpec::PeriodicTrapezoid {
            n,
            start,
            length,
            density,
        } => QuadratureRule::periodic_trapezoid(*n, *start, *length, *density),
        RuleSpec::GaussLegendre { n, a, b } => QuadratureRule::gauss_legendre(*n, *a, *b),
        RuleSpec::GaussLaguerre { n, alpha } => QuadratureRule::gauss_laguerre(*n, *alpha),
        RuleSpec::HalfLine { n, alpha, scale } => QuadratureRule::half_line(*n, *alpha, *scale),
        RuleSpec::Product { first, second } => {
            if matches!(**first, RuleSpec::Product { .. }) && matches!(**second, RuleSpec::Product { .. }) {
                return Err(NumericsError::UnsupportedRule(
                    "product of two product rules".into(),
                ));
            }
            Ok(make_rule(first)?.product(&make_rule(second)?))
        }
    }
}

fn legendre_nodes(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = vec![0.0; n];
    let mut ws = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        xs[i] = -x;
        xs[n - 1 - i] = x;
        ws[i] = w;
        ws[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        xs[n / 2] = 0.0;
    }
    (xs, ws)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// `(L_n^{(α)}(x), L_{n-1}^{(α)}(x))` without the validated-range assertion of the public routine.
fn laguerre_pair(n: usize, alpha: f64, x: f64) -> (f64, f64) {
    let mut prev = 1.0;
    let mut cur = 1.0 + alpha - x;
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

fn laguerre_nodes(n: usize, alpha: f64) -> Result<(Vec<f64>, Vec<f64>), NumericsError> {
    // Golub–Welsch eigenvalues of the Jacobi matrix, then Newton polishing.
    let mut d: Vec<f64> = (0..n).map(|i| 2.0 * i as f64 + alpha + 1.0).collect();
    let mut e: Vec<f64> = (0..n)
        .map(|i| {
            let k = (i + 1) as f64;
            if i + 1 < n {
                (k * (k + alpha)).sqrt()
            } else {
                0.0
            }
        })
        .collect();
    tridiagonal_eigenvalues(&mut d, &mut e)?;
    d.sort_by(|a, b| a.total_cmp(b));
    let nf = n as f64;
    let ln_norm = ln_gamma(nf + alpha + 1.0) - ln_gamma(nf + 1.0);
    let mut xs = Vec::with_capacity(n);
    let mut ws = Vec::with_capacity(n);
    for &x0 in &d {
        let mut x = x0;
        for _ in 0..8 {
            let (ln, lm1) = laguerre_pair(n, alpha, x);
            let deriv = (nf * ln - (nf + alpha) * lm1) / x;
            let dx = ln / deriv;
            x -= dx;
            if dx.abs() <= 1e-15 * x.abs() {
                break;
            }
        }
        let (_, lm1) = laguerre_pair(n, alpha, x);
        let ln_w = ln_norm + x.ln() - 2.0 * ((nf + alpha) * lm1.abs()).ln();
        xs.push(x);
        ws.push(ln_w.exp());
    }
    Ok((xs, ws))
}

/// Eigenvalues of a symmetric tridiagonal matrix by implicit QL.
/// `e[i]` couples rows `i` and `i + 1`; both slices are overwritten.
fn tridiagonal_eigenvalues(d: &mut [f64], e: &mut [f64]) -> Result<(), NumericsError> {
    let n = d.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(NumericsError::UnsupportedRule(
                    "tridiagonal QL iteration did not converge".into(),
                ));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composite_legendre_splits_at_jumps() {
        let rule = QuadratureRule::composite_legendre(&[0.0, 1.0, 3.0], 2, 6).unwrap();
        assert_eq!(rule.len(), 24);
        assert!((rule.total_weight() - 3.0).abs() < 1e-15);
        // step function with the jump at a break is integrated exactly
        let v = rule.integrate(|x| if x[0] < 1.0 { 2.0 } else { x[0] * x[0] });
        assert!((v - (2.0 + 26.0 / 3.0)).abs() < 1e-13);
        assert!(QuadratureRule::composite_legendre(&[1.0], 2, 4).is_err());
    }
    use proptest::prelude::*;

    #[test]
    fn trapezoid_total_measure() {
        let rule = make_rule(&RuleSpec::circle(8, 1.0 / PI)).unwrap();
        assert!((rule.total_weight() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn trapezoid_integrates_fourier_modes() {
        let n = 12;
        let rule = QuadratureRule::periodic_trapezoid(n, 0.0, 2.0 * PI, 1.0).unwrap();
        for k in 1..n as i32 {
            let c = rule.integrate(|x| (k as f64 * x[0]).cos());
            let s = rule.integrate(|x| (k as f64 * x[0]).sin());
            assert!(c.abs() < 1e-13 && s.abs() < 1e-13, "k = {k}");
        }
        let c = rule.integrate(|x| (n as f64 * x[0]).cos());
        assert!((c - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn legendre_polynomial_exactness() {
        let rule = make_rule(&RuleSpec::GaussLegendre { n: 16, a: -1.0, b: 1.0 }).unwrap();
        assert!((rule.integrate(|x| x[0] * x[0]) - 2.0 / 3.0).abs() < 1e-14);
        for k in 0..32 {
            let exact = if k % 2 == 0 { 2.0 / (k as f64 + 1.0) } else { 0.0 };
            let got = rule.integrate(|x| x[0].powi(k));
            assert!((got - exact).abs() < 1e-14, "k = {k}");
        }
    }

    #[test]
    fn legendre_on_shifted_interval() {
        let rule = QuadratureRule::gauss_legendre(5, 1.0, 3.0).unwrap();
        assert!((rule.integrate(|x| x[0].powi(3)) - 20.0).abs() < 1e-12);
    }

    #[test]
    fn laguerre_normalization() {
        let rule = make_rule(&RuleSpec::GaussLaguerre { n: 24, alpha: 1.0 }).unwrap();
        assert!((rule.total_weight() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn laguerre_moment_exactness() {
        for &alpha in &[0.0, -0.5, 0.5, 1.0, 2.5] {
            for &n in &[3usize, 10, 30] {
                let rule = QuadratureRule::gauss_laguerre(n, alpha).unwrap();
                for k in 0..2 * n {
                    let exact = (ln_gamma(k as f64 + alpha + 1.0)).exp();
                    let got = rule.integrate(|x| x[0].powi(k as i32));
                    assert!(
                        (got - exact).abs() <= 1e-11 * exact,
                        "alpha={alpha} n={n} k={k}: {got} vs {exact}"
                    );
                }
            }
        }
    }

    #[test]
    fn half_line_plain_measure() {
        let rule = QuadratureRule::half_line(40, 0.0, 0.5).unwrap();
        // ∫ e^{-2x} dx = 1/2, nodes compressed to match the decay
        assert!((rule.integrate(|x| (-2.0 * x[0]).exp()) - 0.5).abs() < 1e-13);
    }

    #[test]
    fn product_rule_disk_area() {
        // polar coordinates: ∫_0^1 ∫_0^{2π} r dθ dr = π
        let rule = make_rule(
            &RuleSpec::GaussLegendre { n: 8, a: 0.0, b: 1.0 }.times(RuleSpec::circle(8, 1.0)),
        )
        .unwrap();
        assert_eq!(rule.dim(), 2);
        assert_eq!(rule.kind(), RuleKind::Product);
        assert!((rule.integrate(|x| x[0]) - PI).abs() < 1e-13);
    }

    #[test]
    fn rejects_empty_rules() {
        assert!(matches!(
            make_rule(&RuleSpec::GaussLegendre { n: 0, a: 0.0, b: 1.0 }),
            Err(NumericsError::TooFewNodes { .. })
        ));
        assert!(QuadratureRule::gauss_laguerre(4, -1.0).is_err());
    }

    #[test]
    fn chunked_reduce_is_order_stable() {
        let xs: Vec<f64> = (0..10_000).map(|i| 1.0 / (1.0 + i as f64)).collect();
        let sum = |chunk| {
            chunked_reduce(xs.len(), chunk, |r| xs[r].iter().sum::<f64>(), |a, b| a + b).unwrap()
        };
        let a = sum(64);
        let b = sum(64);
        assert_eq!(a.to_bits(), b.to_bits());
        assert!((a - sum(1000)).abs() < 1e-12);
        assert!(chunked_reduce(0, 8, |_| 0.0, |a: f64, b| a + b).is_none());
    }

    proptest! {
        #[test]
        fn pairwise_matches_naive(xs in proptest::collection::vec(-1e3f64..1e3, 0..500)) {
            let naive: f64 = xs.iter().sum();
            prop_assert!((pairwise_sum(&xs) - naive).abs() < 1e-9);
        }

        #[test]
        fn legendre_weights_sum_to_length(n in 1usize..60, a in -5.0f64..5.0, len in 0.1f64..10.0) {
            let rule = QuadratureRule::gauss_legendre(n, a, a + len).unwrap();
            prop_assert!((rule.total_weight() - len).abs() < 1e-12 * len.max(1.0));
        }
    }
}
