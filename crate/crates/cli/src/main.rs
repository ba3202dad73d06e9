//! Command-line front end for certified dimension reduction of symmetric
//! polynomial optimization: support analysis, minimizer-support bounds,
//! Hessian forms, partition instances, and numerical spot checks.
//!
//! Exit codes: 0 on success, 1 when a consistency experiment disagrees or
//! a counterexample is confirmed, 2 on usage or input errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod expr;

#[derive(Parser)]
#[command(name = "multisym", version, about = "Dimension reduction for symmetric polynomials over variable arrays")]
struct Cli {
    /// Emit machine-readable JSON instead of text
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SearchArgs {
    /// Squared sphere radii to scan, comma separated
    #[arg(long, value_delimiter = ',')]
    radii: Option<Vec<f64>>,
    /// Random starts per instance and radius
    #[arg(long, default_value_t = 256)]
    starts: usize,
    /// Seed for the deterministic start sampler
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Shape, symmetry, degrees, support profile and applicable bounds
    Analyze {
        file: PathBuf,
        /// Largest weight tried by the simplex fit
        #[arg(long, default_value_t = 6)]
        cap: u32,
    },
    /// Minimizer-support bound for a symmetric polynomial
    Kappa {
        file: PathBuf,
        /// Column weights for the weighted-degree bound (default: best of all methods)
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<u32>>,
        /// Largest weight tried by the simplex fit
        #[arg(long, default_value_t = 6)]
        cap: u32,
    },
    /// Hessian quadratic form on the doubled variable array
    Hessform {
        file: PathBuf,
        /// Write the form to this file instead of stdout
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Support profiles and bounds on the Hessian-form side
    Hf {
        file: PathBuf,
        /// Column weights for the weighted Hessian bound
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<u32>>,
    },
    /// Write every partition instance with at most m parts
    Reduce {
        file: PathBuf,
        /// Largest number of parts (distinct row values)
        #[arg(long)]
        m: u32,
        /// Output directory (default: instances)
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Compare full-sphere minima against the partition-instance sweep
    Verify {
        file: PathBuf,
        /// Number of parts to reduce to (default: the best bound at cap 6)
        #[arg(long)]
        m: Option<u32>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Convexity check: exact for quadratics, Hessian-form scan otherwise
    Convexity {
        file: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
    },
}

fn init_threads() {
    if let Ok(v) = std::env::var("MULTISYM_THREADS") {
        if let Ok(n) = v.trim().parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn run(cli: Cli) -> multisym::Result<i32> {
    match cli.command {
        Command::Analyze { file, cap } => commands::analyze(&file, cap, cli.json),
        Command::Kappa { file, weights, cap } => commands::kappa(&file, weights, cap, cli.json),
        Command::Hessform { file, out } => commands::hessform(&file, out.as_deref(), cli.json),
        Command::Hf { file, weights } => commands::hf(&file, weights, cli.json),
        Command::Reduce { file, m, out } => commands::reduce(&file, m, out.as_deref(), cli.json),
        Command::Verify { file, m, search } => {
            let radii = search.radii.unwrap_or_else(|| vec![1.0, 4.0, 9.0]);
            commands::verify(&file, m, &radii, search.starts, search.seed, cli.json)
        }
        Command::Convexity { file, search } => {
            let radii = search.radii.unwrap_or_else(|| vec![1.0, 4.0, 16.0]);
            commands::convexity(&file, &radii, search.starts, search.seed, cli.json)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_threads();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(2)
        }
    }
}
