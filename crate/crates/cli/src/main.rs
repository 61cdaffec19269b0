use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use povm_quant::finite::ReconstructOptions;
use povm_quant_cli::config::{Format, Geometry, Overrides, RunConfig};
use povm_quant_cli::reconstruct::{run_reconstruct, EXIT_INVALID};
use povm_quant_cli::report::render;
use povm_quant_cli::suites;

#[derive(Parser)]
#[command(name = "povmq", version, about = "Verify integral quantization identities and reconstruct finite families")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the verification suite of a geometry.
    Verify(VerifyArgs),
    /// Recover densities from a probability table (JSON).
    Reconstruct(ReconstructArgs),
}

#[derive(Args)]
struct VerifyArgs {
    geometry: Geometry,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    dim: Option<usize>,
    /// Grid size override.
    #[arg(long)]
    grid: Option<usize>,
    /// Replace every check tolerance.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// JSON file of parameter overrides; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Run suites concurrently (report order is unchanged).
    #[arg(long)]
    parallel: bool,
}

#[derive(Args)]
struct ReconstructArgs {
    table: PathBuf,
    #[arg(long)]
    rank_one: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 8)]
    restarts: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn verify(args: VerifyArgs) -> u8 {
    let flags = Overrides {
        r: args.r,
        t: args.t,
        alpha: args.alpha,
        dim: args.dim,
        grid: args.grid,
        tol: args.tol,
        seed: args.seed,
    };
    let overrides = match &args.config {
        Some(path) => match Overrides::from_file(path) {
            Ok(file) => flags.over(file),
            Err(e) => {
                eprintln!("error: {e}");
                return 2;
            }
        },
        None => flags,
    };
    let config = RunConfig {
        geometry: args.geometry,
        overrides,
        out: args.out,
        format: args.format,
        parallel: args.parallel,
    };
    if let Err(e) = config.validate() {
        eprintln!("error: {e}");
        return 2;
    }
    let reports = if config.parallel {
        suites::run_parallel(config.geometry, &config.overrides)
    } else {
        suites::run(config.geometry, &config.overrides)
    };
    let text = match render(&reports, config.format) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    if let Err(e) = emit(&text, config.out.as_ref()) {
        eprintln!("error: {e}");
        return 2;
    }
    let mut failed = false;
    for r in &reports {
        for c in r.failures() {
            eprintln!("FAIL {} {}", r.suite, c.id);
            failed = true;
        }
    }
    u8::from(failed)
}

fn reconstruct(args: ReconstructArgs) -> u8 {
    let text = match std::fs::read_to_string(&args.table) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", args.table.display());
            return EXIT_INVALID as u8;
        }
    };
    let opts = ReconstructOptions {
        rank_one: args.rank_one,
        seed: args.seed,
        restarts: args.restarts,
        ..Default::default()
    };
    let outcome = run_reconstruct(&text, &opts);
    if let Some(msg) = outcome.report.get("message").and_then(|m| m.as_str()) {
        eprintln!("error: {msg}");
    }
    let body = serde_json::to_string_pretty(&outcome.report).expect("plain JSON values") + "\n";
    if let Err(e) = emit(&body, args.out.as_ref()) {
        eprintln!("error: {e}");
        return EXIT_INVALID as u8;
    }
    outcome.code as u8
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Verify(args) => verify(args),
        Command::Reconstruct(args) => reconstruct(args),
    };
    ExitCode::from(code)
}
