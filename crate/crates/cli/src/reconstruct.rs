//! Front end for recovering a density family from a probability table.

use povm_quant::finite::{feasibility_bounds, reconstruct, FiniteError, ProbTable, ReconstructOptions, Reconstruction};
use povm_quant::operators::DensityMatrix;
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_NO_CONVERGENCE: i32 = 4;

/// Exit code and the report to write.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub report: Value,
}

fn matrix_rows(rho: &DensityMatrix) -> Value {
    let m = rho.as_operator();
    let n = m.dim();
    Value::Array(
        (0..n)
            .map(|i| Value::Array((0..n).map(|j| json!([m[(i, j)].re, m[(i, j)].im])).collect()))
            .collect(),
    )
}

fn solution(sol: &Reconstruction) -> Value {
    json!({
        "residual": sol.residual,
        "table_error": sol.table_error,
        "resolution_defect": sol.resolution_defect,
        "restart": sol.restart,
        "iterations": sol.iterations,
        "free_parameters": sol.free_parameters,
        "family": sol.family.iter().map(matrix_rows).collect::<Vec<_>>(),
    })
}

pub fn run_reconstruct(table_json: &str, opts: &ReconstructOptions) -> Outcome {
    let table: ProbTable = match serde_json::from_str(table_json) {
        Ok(t) => t,
        Err(e) => {
            return Outcome {
                code: EXIT_INVALID,
                report: json!({"status": "invalid", "message": format!("malformed table: {e}")}),
            }
        }
    };
    let feasibility = feasibility_bounds(table.n, opts.rank_one);
    let params = json!({
        "n": table.n,
        "points": table.points(),
        "rank_one": opts.rank_one,
        "seed": opts.seed,
        "restarts": opts.restarts,
    });
    let base = |status: &str| {
        json!({
            "suite": "reconstruct",
            "params": params,
            "status": status,
            "feasibility": {
                "min_points": feasibility.min_points,
                "max_points": feasibility.max_points,
                "admits": feasibility.admits(table.points()),
            },
        })
    };
    match reconstruct(&table, opts) {
        Ok(sol) => {
            let mut report = base("solved");
            report["solution"] = solution(&sol);
            Outcome { code: EXIT_OK, report }
        }
        Err(FiniteError::Infeasible { .. }) => {
            let mut report = base("infeasible");
            report["message"] = json!(reconstruct(&table, opts).unwrap_err().to_string());
            Outcome {
                code: EXIT_INFEASIBLE,
                report,
            }
        }
        Err(FiniteError::NoConvergence { best_residual, best }) => {
            let mut report = base("no_convergence");
            report["best_residual"] = json!(best_residual);
            report["solution"] = solution(&best);
            Outcome {
                code: EXIT_NO_CONVERGENCE,
                report,
            }
        }
        Err(e) => {
            let mut report = base("invalid");
            report["message"] = json!(e.to_string());
            Outcome {
                code: EXIT_INVALID,
                report,
            }
        }
    }
}
