//! Density families on a finite measure space and their recovery from probability tables.

mod reconstruct;

pub use reconstruct::{
    random_resolving_family, reconstruct, ReconstructOptions, Reconstruction,
};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::operators::{DensityMatrix, OperatorError, OperatorMatrix};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FiniteError {
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("{points} points cannot carry a {mode} family on C^{n} (allowed {min}..={max})")]
    Infeasible {
        points: usize,
        n: usize,
        mode: &'static str,
        min: usize,
        max: usize,
    },
    #[error("resolution defect {defect:e} exceeds {tol:e}")]
    Resolution { defect: f64, tol: f64 },
    #[error("no restart converged; best residual {best_residual:e}")]
    NoConvergence {
        best_residual: f64,
        best: Box<Reconstruction>,
    },
    #[error(transparent)]
    Operator(#[from] OperatorError),
}

/// Point weights `ν_i > 0` of a finite measure space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteMeasure {
    pub weights: Vec<f64>,
}

impl FiniteMeasure {
    pub fn new(weights: Vec<f64>) -> Result<Self, FiniteError> {
        if weights.is_empty() {
            return Err(FiniteError::Validation("empty measure".into()));
        }
        if let Some(w) = weights.iter().find(|w| !(**w > 0.0) || !w.is_finite()) {
            return Err(FiniteError::Validation(format!(
                "weights must be positive, got {w}"
            )));
        }
        Ok(Self { weights })
    }

    pub fn uniform(points: usize, n: usize) -> Self {
        Self {
            weights: vec![n as f64 / points as f64; points],
        }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// The only Hilbert dimension compatible with the trace of the resolution.
    pub fn compatible_dim(&self, tol: f64) -> Option<usize> {
        let t = self.total();
        let n = t.round();
        ((t - n).abs() <= tol && n >= 1.0).then_some(n as usize)
    }
}

/// Symmetric table `p_ij = tr(ρ_i ρ_j)` with its measure and Hilbert dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbTable {
    /// Row-major `N × N` entries.
    pub p: Vec<f64>,
    pub nu: Vec<f64>,
    pub n: usize,
}

impl ProbTable {
    pub fn points(&self) -> usize {
        self.nu.len()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.p[i * self.points() + j]
    }

    pub fn measure(&self) -> Result<FiniteMeasure, FiniteError> {
        FiniteMeasure::new(self.nu.clone())
    }

    pub fn validate(&self, tol: f64) -> Result<(), FiniteError> {
        let big_n = self.points();
        let measure = self.measure()?;
        if self.p.len() != big_n * big_n {
            return Err(FiniteError::Validation(format!(
                "table has {} entries for {big_n} points",
                self.p.len()
            )));
        }
        if self.n < 1 {
            return Err(FiniteError::Validation("Hilbert dimension must be positive".into()));
        }
        if (measure.total() - self.n as f64).abs() > tol {
            return Err(FiniteError::Validation(format!(
                "weights sum to {} but the Hilbert dimension is {}",
                measure.total(),
                self.n
            )));
        }
        for i in 0..big_n {
            for j in 0..big_n {
                let v = self.get(i, j);
                if !(-tol..=1.0 + tol).contains(&v) {
                    return Err(FiniteError::Validation(format!(
                        "p[{i}][{j}] = {v} outside [0, 1]"
                    )));
                }
                if (v - self.get(j, i)).abs() > tol {
                    return Err(FiniteError::Validation(format!(
                        "table is not symmetric at ({i}, {j})"
                    )));
                }
            }
            let row: f64 = (0..big_n).map(|j| self.nu[j] * self.get(i, j)).sum();
            if (row - 1.0).abs() > tol {
                return Err(FiniteError::Validation(format!(
                    "row {i} sums to {row} against the measure, expected 1"
                )));
            }
        }
        Ok(())
    }

    /// Largest entrywise difference between two tables of the same shape.
    pub fn max_diff(&self, other: &ProbTable) -> f64 {
        self.p
            .iter()
            .zip(&other.p)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Allowed range of point counts for a given Hilbert dimension.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Feasibility {
    pub n: usize,
    pub rank_one: bool,
    pub min_points: usize,
    pub max_points: usize,
    /// Real roots of the counting quadratic bracketing the admissible range.
    pub roots: (f64, f64),
    /// Only trivial families exist (no free parameters at all).
    pub degenerate: bool,
    /// Upper bound from the alternative closed-form range (rank-one case), kept for comparison.
    pub alt_upper: Option<f64>,
}

impl Feasibility {
    pub fn admits(&self, points: usize) -> bool {
        !self.degenerate && points >= self.min_points && points <= self.max_points
    }

    pub fn free_parameters(&self, points: usize) -> i64 {
        free_parameter_count(points, self.n, self.rank_one)
    }
}

/// `N (2nk - k² - 1) - (n² - 1)` with `k = n` (full rank) or `k = 1` (rank one).
pub fn free_parameter_count(points: usize, n: usize, rank_one: bool) -> i64 {
    let (big_n, n) = (points as i64, n as i64);
    let k = if rank_one { 1 } else { n };
    big_n * (2 * n * k - k * k - 1) - (n * n - 1)
}

pub fn feasibility_bounds(n: usize, rank_one: bool) -> Feasibility {
    let nf = n as f64;
    if !rank_one {
        // N² - N(2n² - 1) + 2n² - 2 = (N - 1)(N - 2n² + 2)
        let upper = 2 * n * n;
        let max_points = upper.saturating_sub(2);
        return Feasibility {
            n,
            rank_one,
            min_points: 1,
            max_points,
            roots: (1.0, max_points as f64),
            degenerate: n <= 1,
            alt_upper: None,
        };
    }
    // N² - N(4n - 1) + 2n² - n ≤ 0, together with N ≥ n for a Parseval frame.
    let b = 4.0 * nf - 1.0;
    let disc = (b * b - 4.0 * (2.0 * nf * nf - nf)).sqrt();
    let roots = (0.5 * (b - disc), 0.5 * (b + disc));
    let alt_upper = 0.5 * (b - (8.0 * nf * nf - 8.0 * nf + 9.0).sqrt());
    Feasibility {
        n,
        rank_one,
        min_points: n.max(roots.0.ceil().max(1.0) as usize),
        max_points: (roots.1 + 1e-9).floor() as usize,
        roots,
        degenerate: n <= 1,
        alt_upper: Some(alt_upper),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParsevalReport {
    /// `‖Σ ν_i |x_i⟩⟨x_i| - I‖_max`
    pub defect: f64,
    /// Same quantity from the coordinate sums `Σ_i ν_i ξ_{li} ξ̄_{l'i} - δ_{ll'}`.
    pub coordinate_defect: f64,
}

pub fn parseval_check(vectors: &[Vec<C64>], weights: &[f64]) -> Result<ParsevalReport, FiniteError> {
    if vectors.is_empty() || vectors.len() != weights.len() {
        return Err(FiniteError::Validation(format!(
            "{} vectors for {} weights",
            vectors.len(),
            weights.len()
        )));
    }
    let n = vectors[0].len();
    for (i, v) in vectors.iter().enumerate() {
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if v.len() != n || (norm - 1.0).abs() > 1e-10 {
            return Err(FiniteError::Validation(format!(
                "vector {i} is not a unit vector in C^{n}"
            )));
        }
    }
    let mut frame = OperatorMatrix::zeros(n);
    for (v, w) in vectors.iter().zip(weights) {
        frame.add_scaled_real(*w, &OperatorMatrix::projector(v));
    }
    let defect = frame.max_abs_diff(&OperatorMatrix::identity(n));
    let mut coordinate_defect: f64 = 0.0;
    for l in 0..n {
        for lp in 0..n {
            let s: C64 = vectors
                .iter()
                .zip(weights)
                .map(|(v, w)| v[l] * v[lp].conj() * *w)
                .sum();
            let target = if l == lp { 1.0 } else { 0.0 };
            coordinate_defect = coordinate_defect.max((s - target).norm());
        }
    }
    Ok(ParsevalReport {
        defect,
        coordinate_defect,
    })
}

/// `‖Σ ν_i ρ_i - I‖_max`
pub fn resolution_defect(family: &[DensityMatrix], measure: &FiniteMeasure) -> f64 {
    let n = family[0].dim();
    let mut sum = OperatorMatrix::zeros(n);
    for (rho, w) in family.iter().zip(&measure.weights) {
        sum.add_scaled_real(*w, rho);
    }
    sum.max_abs_diff(&OperatorMatrix::identity(n))
}

pub fn gram_probabilities(
    family: &[DensityMatrix],
    measure: &FiniteMeasure,
) -> Result<ProbTable, FiniteError> {
    if family.is_empty() || family.len() != measure.len() {
        return Err(FiniteError::Validation(format!(
            "{} densities for {} points",
            family.len(),
            measure.len()
        )));
    }
    let n = family[0].dim();
    if family.iter().any(|r| r.dim() != n) {
        return Err(FiniteError::Validation("densities of unequal dimension".into()));
    }
    let defect = resolution_defect(family, measure);
    if defect > 1e-10 {
        return Err(FiniteError::Resolution { defect, tol: 1e-10 });
    }
    let big_n = family.len();
    let mut p = vec![0.0; big_n * big_n];
    for i in 0..big_n {
        for j in i..big_n {
            let v = family[i].trace_product(&family[j]).re;
            p[i * big_n + j] = v;
            p[j * big_n + i] = v;
        }
    }
    Ok(ProbTable {
        p,
        nu: measure.weights.clone(),
        n,
    })
}
