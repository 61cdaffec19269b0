use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use super::{
    feasibility_bounds, free_parameter_count, gram_probabilities, resolution_defect,
    FiniteError, FiniteMeasure, ProbTable,
};
use crate::operators::{eig_hermitian, DensityMatrix, OperatorMatrix};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReconstructOptions {
    pub rank_one: bool,
    pub seed: u64,
    pub restarts: usize,
    pub max_iterations: usize,
    /// Success threshold on the objective (sum of squared table and resolution residuals).
    pub tolerance: f64,
    pub resolution_weight: f64,
}

impl Default for ReconstructOptions {
    fn default() -> Self {
        Self {
            rank_one: false,
            seed: 0,
            restarts: 8,
            max_iterations: 400,
            tolerance: 1e-8,
            resolution_weight: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Reconstruction {
    pub family: Vec<DensityMatrix>,
    /// Objective value at the returned point.
    pub residual: f64,
    /// Largest entrywise deviation from the input table.
    pub table_error: f64,
    pub resolution_defect: f64,
    pub restart: usize,
    pub iterations: usize,
    pub free_parameters: i64,
}

/// Parametrization `ρ_i = B_i B_i† / tr(B_i B_i†)` with `B_i` an `n × k` complex matrix.
struct Problem<'a> {
    table: &'a ProbTable,
    n: usize,
    k: usize,
    penalty: f64,
}

impl Problem<'_> {
    fn points(&self) -> usize {
        self.table.points()
    }

    fn block_len(&self) -> usize {
        2 * self.n * self.k
    }

    fn param_len(&self) -> usize {
        self.points() * self.block_len()
    }

    fn density(&self, x: &[f64], i: usize) -> OperatorMatrix {
        let (n, k) = (self.n, self.k);
        let b = &x[i * self.block_len()..(i + 1) * self.block_len()];
        let entry = |r: usize, c: usize| C64::new(b[2 * (r * k + c)], b[2 * (r * k + c) + 1]);
        let mut rho = OperatorMatrix::from_fn(n, |r, s| {
            (0..k).map(|c| entry(r, c) * entry(s, c).conj()).sum()
        });
        let tr = rho.trace().re;
        rho = rho.scale_real(1.0 / tr);
        rho
    }

    fn family(&self, x: &[f64]) -> Vec<OperatorMatrix> {
        (0..self.points()).map(|i| self.density(x, i)).collect()
    }

    fn residuals(&self, x: &[f64]) -> Vec<f64> {
        let fam = self.family(x);
        let big_n = self.points();
        let mut out = Vec::with_capacity(big_n * (big_n + 1) / 2 + self.n * self.n);
        for i in 0..big_n {
            for j in i..big_n {
                out.push(fam[i].trace_product(&fam[j]).re - self.table.get(i, j));
            }
        }
        let mut sum = OperatorMatrix::identity(self.n).scale_real(-1.0);
        for (rho, w) in fam.iter().zip(&self.table.nu) {
            sum.add_scaled_real(*w, rho);
        }
        for r in 0..self.n {
            out.push(self.penalty * sum[(r, r)].re);
            for s in r + 1..self.n {
                out.push(self.penalty * sum[(r, s)].re);
                out.push(self.penalty * sum[(r, s)].im);
            }
        }
        out
    }

    fn cost(&self, x: &[f64]) -> f64 {
        self.residuals(x).iter().map(|r| r * r).sum()
    }

    /// Central-difference Jacobian, row-major `residuals × params`.
    fn jacobian(&self, x: &[f64]) -> (Vec<f64>, usize) {
        let p = self.param_len();
        let mut xs = x.to_vec();
        let mut cols = Vec::with_capacity(p);
        for j in 0..p {
            let h = 1e-6 * x[j].abs().max(1.0);
            xs[j] = x[j] + h;
            let plus = self.residuals(&xs);
            xs[j] = x[j] - h;
            let minus = self.residuals(&xs);
            xs[j] = x[j];
            cols.push(
                plus.iter()
                    .zip(&minus)
                    .map(|(a, b)| (a - b) / (2.0 * h))
                    .collect::<Vec<f64>>(),
            );
        }
        let m = cols[0].len();
        let mut jac = vec![0.0; m * p];
        for (j, col) in cols.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                jac[i * p + j] = *v;
            }
        }
        (jac, m)
    }
}

/// Solve `A x = b` for symmetric positive definite `A` (row-major) by Cholesky.
fn cholesky_solve(a: &[f64], b: &[f64]) -> Option<Vec<f64>> {
    let n = b.len();
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if s <= 0.0 {
                    return None;
                }
                l[i * n + i] = s.sqrt();
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    let mut y = vec![0.0; n];
    for i in 0..n {
        let s: f64 = (0..i).map(|k| l[i * n + k] * y[k]).sum();
        y[i] = (b[i] - s) / l[i * n + i];
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| l[k * n + i] * x[k]).sum();
        x[i] = (y[i] - s) / l[i * n + i];
    }
    Some(x)
}

/// Levenberg–Marquardt from `x`; returns the final point, cost and iteration count.
fn levenberg_marquardt(problem: &Problem<'_>, mut x: Vec<f64>, opts: &ReconstructOptions) -> (Vec<f64>, f64, usize) {
    let p = problem.param_len();
    let mut cost = problem.cost(&x);
    let mut lambda = 1e-3;
    let mut iterations = 0;
    // Far below the acceptance tolerance so the reported residual has margin.
    let stop = (opts.tolerance * 1e-12).max(1e-30);
    while iterations < opts.max_iterations && cost > stop {
        iterations += 1;
        let r = problem.residuals(&x);
        let (jac, m) = problem.jacobian(&x);
        let mut jtj = vec![0.0; p * p];
        let mut jtr = vec![0.0; p];
        for i in 0..m {
            let row = &jac[i * p..(i + 1) * p];
            for a in 0..p {
                if row[a] == 0.0 {
                    continue;
                }
                jtr[a] += row[a] * r[i];
                for b in a..p {
                    jtj[a * p + b] += row[a] * row[b];
                }
            }
        }
        for a in 0..p {
            for b in 0..a {
                jtj[a * p + b] = jtj[b * p + a];
            }
        }
        let mut improved = false;
        while lambda < 1e16 {
            let mut damped = jtj.clone();
            for a in 0..p {
                damped[a * p + a] += lambda * (1.0 + jtj[a * p + a]);
            }
            if let Some(step) = cholesky_solve(&damped, &jtr) {
                let trial: Vec<f64> = x.iter().zip(&step).map(|(a, s)| a - s).collect();
                let trial_cost = problem.cost(&trial);
                if trial_cost.is_finite() && trial_cost < cost {
                    let gain = cost - trial_cost;
                    x = trial;
                    lambda = (lambda / 3.0).max(1e-15);
                    if gain <= f64::EPSILON * cost {
                        return (x, trial_cost, iterations);
                    }
                    cost = trial_cost;
                    improved = true;
                    break;
                }
            }
            lambda *= 4.0;
        }
        if !improved {
            break;
        }
    }
    (x, cost, iterations)
}

fn restart_rng(seed: u64, restart: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    rng
}

/// Recover densities `ρ_i` with `tr(ρ_i ρ_j) = p_ij` and `Σ ν_i ρ_i = I`.
///
/// Solutions are unique at best up to a common unitary, so callers should compare
/// the regenerated table rather than the matrices.
pub fn reconstruct(table: &ProbTable, opts: &ReconstructOptions) -> Result<Reconstruction, FiniteError> {
    table.validate(1e-9)?;
    let n = table.n;
    let big_n = table.points();
    let bounds = feasibility_bounds(n, opts.rank_one);
    let mode = if opts.rank_one { "rank-one" } else { "full-rank" };
    if !bounds.admits(big_n) {
        return Err(FiniteError::Infeasible {
            points: big_n,
            n,
            mode,
            min: bounds.min_points,
            max: bounds.max_points,
        });
    }
    let problem = Problem {
        table,
        n,
        k: if opts.rank_one { 1 } else { n },
        penalty: opts.resolution_weight,
    };
    let measure = table.measure()?;
    let runs: Vec<Reconstruction> = (0..opts.restarts.max(1))
        .into_par_iter()
        .map(|restart| {
            let mut rng = restart_rng(opts.seed, restart);
            let x0: Vec<f64> = (0..problem.param_len())
                .map(|_| rng.sample(StandardNormal))
                .collect();
            let (x, cost, iterations) = levenberg_marquardt(&problem, x0, opts);
            let family: Vec<DensityMatrix> = problem
                .family(&x)
                .into_iter()
                .map(DensityMatrix::new_unchecked)
                .collect();
            let resolution_defect = resolution_defect(&family, &measure);
            let table_error = (0..big_n)
                .flat_map(|i| (0..big_n).map(move |j| (i, j)))
                .map(|(i, j)| (family[i].trace_product(&family[j]).re - table.get(i, j)).abs())
                .fold(0.0, f64::max);
            Reconstruction {
                family,
                residual: cost,
                table_error,
                resolution_defect,
                restart,
                iterations,
                free_parameters: free_parameter_count(big_n, n, opts.rank_one),
            }
        })
        .collect();
    let best = runs
        .into_iter()
        .min_by(|a, b| {
            a.residual
                .total_cmp(&b.residual)
                .then(a.resolution_defect.total_cmp(&b.resolution_defect))
                .then(a.restart.cmp(&b.restart))
        })
        .expect("at least one restart");
    if best.residual < opts.tolerance {
        Ok(best)
    } else {
        Err(FiniteError::NoConvergence {
            best_residual: best.residual,
            best: Box::new(best),
        })
    }
}

/// A random family resolving the identity: `ρ̃_i = S^{-1/2} A_i S^{-1/2}` with `S = Σ A_i`,
/// then `ν_i = tr ρ̃_i` and `ρ_i = ρ̃_i / ν_i`.
pub fn random_resolving_family<R: Rng>(
    n: usize,
    points: usize,
    rank_one: bool,
    rng: &mut R,
) -> Result<(Vec<DensityMatrix>, FiniteMeasure), FiniteError> {
    if points < n && rank_one {
        return Err(FiniteError::Validation(format!(
            "{points} rank-one projectors cannot span C^{n}"
        )));
    }
    let k = if rank_one { 1 } else { n };
    let mut seeds = Vec::with_capacity(points);
    for _ in 0..points {
        let b: Vec<C64> = (0..n * k)
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        seeds.push(OperatorMatrix::from_fn(n, |r, s| {
            (0..k).map(|c| b[r * k + c] * b[s * k + c].conj()).sum()
        }));
    }
    let mut total = OperatorMatrix::zeros(n);
    for a in &seeds {
        total += a;
    }
    let eig = eig_hermitian(&total)?;
    if eig.values[0] <= 1e-8 * eig.values[n - 1] {
        return Err(FiniteError::Validation("random seeds do not span the space".into()));
    }
    let inv_sqrt: Vec<f64> = eig.values.iter().map(|v| 1.0 / v.sqrt()).collect();
    let s = eig
        .vectors
        .matmul(&OperatorMatrix::real_diagonal(&inv_sqrt))
        .matmul(&eig.vectors.adjoint());
    let mut family = Vec::with_capacity(points);
    let mut weights = Vec::with_capacity(points);
    for a in &seeds {
        let t = s.matmul(a).matmul(&s);
        let nu = t.trace().re;
        let mut rho = t.scale_real(1.0 / nu);
        // Remove rounding-level anti-Hermitian parts.
        rho = (&rho + &rho.adjoint()).scale_real(0.5);
        family.push(DensityMatrix::new_unchecked(rho));
        weights.push(nu);
    }
    let measure = FiniteMeasure::new(weights)?;
    // Validates the construction end to end.
    gram_probabilities(&family, &measure)?;
    Ok((family, measure))
}
