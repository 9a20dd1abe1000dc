use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use num_complex::Complex64;
use openrwa::bounds::{theorem41_bound, theorem41_bound_uniform, BoundInputs};
use openrwa::norms::{
    diamond_numeric, diamond_numeric_general, diamond_qubit_subunital, diamond_sandwich, is_qubit_subunital,
    ChoiMatrix,
};
use openrwa::Matrix;
use openrwa_cli::output::write_csv;
use openrwa_cli::{run, ExampleKind, ExperimentConfig};
use serde::Deserialize;
use serde_json::json;

#[derive(Parser)]
#[command(name = "openrwa", version, about = "Rotating-wave and secular approximation error bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep an example and write `omega,kappa,exact_distance,bound,equation_tag` rows.
    Run {
        #[arg(long, value_enum)]
        example: Option<ExampleKind>,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output CSV; falls back to the config's `output`, then stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Bounds {
        #[command(subcommand)]
        action: BoundsAction,
    },
    Norms {
        #[command(subcommand)]
        action: NormsAction,
    },
}

#[derive(Subcommand)]
enum BoundsAction {
    /// Evaluate the convergence bound for constants given as JSON.
    Eval {
        #[arg(long)]
        inputs: PathBuf,
    },
}

#[derive(Subcommand)]
enum NormsAction {
    /// Diamond norm of the map whose Choi coefficient matrix is stored in a JSON file.
    Diamond {
        #[arg(long)]
        choi: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = openrwa::norms::DEFAULT_RESTARTS)]
        restarts: usize,
    },
}

#[derive(Deserialize)]
struct BoundRequest {
    #[serde(flatten)]
    inputs: BoundInputs<f64>,
    #[serde(default)]
    peripheral: bool,
    /// Evaluation time for the peripheral transient; defaults to the horizon.
    t: Option<f64>,
    /// When present, the peripheral bound is made uniform on `[tau, T]`.
    tau: Option<f64>,
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Run { example, config, out } => run_command(example, config, out),
        Command::Bounds { action: BoundsAction::Eval { inputs } } => {
            let text = std::fs::read_to_string(&inputs).with_context(|| format!("reading {}", inputs.display()))?;
            let req: BoundRequest = serde_json::from_str(&text).context("parsing bound inputs")?;
            let report = match req.tau {
                Some(tau) => theorem41_bound_uniform(&req.inputs, tau)?,
                None => theorem41_bound(&req.inputs, req.peripheral, req.t.unwrap_or(req.inputs.horizon))?,
            };
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Norms { action: NormsAction::Diamond { choi, seed, restarts } } => {
            let text = std::fs::read_to_string(&choi).with_context(|| format!("reading {}", choi.display()))?;
            let rows: Vec<Vec<[f64; 2]>> = serde_json::from_str(&text).context("parsing Choi coefficients")?;
            let rows: Vec<Vec<Complex64>> = rows
                .iter()
                .map(|r| r.iter().map(|[re, im]| Complex64::new(*re, *im)).collect())
                .collect();
            let c = Matrix::from_rows(&rows)?;
            let dim = (c.rows() as f64).sqrt().round() as usize;
            if dim * dim != c.rows() {
                bail!("coefficient matrix must be d^2 x d^2, got {} rows", c.rows());
            }
            let phi = ChoiMatrix::from_coefficients(dim, c)?.to_superop();
            let (lower, upper) = diamond_sandwich(&phi)?;
            let (value, method) = if is_qubit_subunital(&phi) {
                (diamond_qubit_subunital(&phi)?, "qubit_subunital")
            } else if phi.is_hermiticity_preserving() {
                (diamond_numeric(&phi, restarts, seed)?, "numeric")
            } else {
                (diamond_numeric_general(&phi, restarts, seed)?, "numeric_general")
            };
            let out = json!({
                "dimension": dim,
                "diamond": value,
                "method": method,
                "choi_trace_norm": lower,
                "upper": upper,
                "seed": seed,
            });
            println!("{}", serde_json::to_string_pretty(&out)?);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn run_command(example: Option<ExampleKind>, config: Option<PathBuf>, out: Option<PathBuf>) -> anyhow::Result<ExitCode> {
    let cfg = match &config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    let Some(example) = example.or(cfg.example) else {
        bail!("no example given; pass --example or set `example` in the config");
    };
    let rows = run(example, &cfg)?;
    match out.or_else(|| cfg.output.clone()) {
        Some(path) => {
            let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
            let mut w = BufWriter::new(file);
            write_csv(&rows, &mut w)?;
            w.flush()?;
        }
        None => write_csv(&rows, std::io::stdout().lock())?,
    }
    let violations: Vec<_> = rows.iter().filter(|r| !r.dominated()).collect();
    if violations.is_empty() {
        return Ok(ExitCode::SUCCESS);
    }
    for r in &violations {
        eprintln!(
            "dominance violated: omega = {}, kappa = {:?}, distance = {:.6e} > bound = {:.6e} ({})",
            r.omega, r.kappa, r.exact_distance, r.bound, r.equation_tag
        );
    }
    Ok(ExitCode::from(2))
}
