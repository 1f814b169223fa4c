//! Command-line front end for the gvks solver.
//!
//! Exit codes: 0 success, 1 unreadable or malformed input, 2 packing fails
//! validation, 3 a computation ran out of budget.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use gvks::generate::{generate_instance, Profile};
use gvks::io::{read_instance, read_packing, to_json, write_json};
use gvks::model::validate_packing;
use gvks::oracle::{exact_gvks_small, OracleBudget};
use gvks::report::{csv_row, RunReport, CSV_HEADER};
use gvks::solver::solve_gvks_with_stats;
use gvks::svg::render_svg;
use gvks::{Error, KnapsackInstance, SolverParams};

#[derive(Parser)]
#[command(name = "gvks", version, about = "2-D geometric knapsack with vector constraints")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a random instance as JSON.
    Generate {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long, default_value_t = 10)]
        n: usize,
        #[arg(short, long, default_value_t = 1)]
        d: usize,
        #[arg(long, default_value = "uniform", value_parser = parse_profile)]
        profile: Profile,
        #[arg(long)]
        rotations: bool,
        /// Output file (default: stdout).
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Solve an instance; the packing goes to stdout or --out, the run report to stderr or --report.
    Solve {
        instance: PathBuf,
        #[command(flatten)]
        params: ParamArgs,
        /// Also run the exact oracle and report the ratio.
        #[arg(long)]
        oracle: bool,
        #[arg(long, value_name = "PATH")]
        svg: Option<PathBuf>,
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Check a packing against an instance.
    Validate { instance: PathBuf, packing: PathBuf },
    /// Solve an instance exactly (small instances only).
    Oracle {
        instance: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Solve a range of generated instances and print a CSV line per seed.
    Bench {
        /// First seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of seeds.
        #[arg(long, default_value_t = 20)]
        count: u64,
        #[arg(short, long, default_value_t = 6)]
        n: usize,
        #[arg(short, long, default_value_t = 1)]
        d: usize,
        #[arg(long, default_value = "uniform", value_parser = parse_profile)]
        profile: Profile,
        #[arg(long)]
        rotations: bool,
        #[arg(long)]
        oracle: bool,
        #[command(flatten)]
        params: ParamArgs,
    },
}

#[derive(Args, Clone)]
struct ParamArgs {
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    #[arg(long, default_value_t = 2)]
    c_max: usize,
    #[arg(long, default_value_t = 2)]
    sum_depth: usize,
    /// Maximum number of container configurations to evaluate.
    #[arg(long)]
    budget: Option<usize>,
    /// Largest big-item set guessed by the container packing PTAS (default: its theorem bound).
    #[arg(long)]
    x_max: Option<usize>,
}

impl ParamArgs {
    fn params(&self) -> SolverParams {
        SolverParams { c_max: self.c_max, sum_depth: self.sum_depth, config_budget: self.budget, x_max: self.x_max, ..SolverParams::with_eps(self.eps) }
    }
}

fn parse_profile(s: &str) -> Result<Profile, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// A failure with its exit code.
struct Failure(u8, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_budget() { 3 } else { 1 };
        Failure(code, e.to_string())
    }
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure(1, format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run_one(instance: &KnapsackInstance, params: &SolverParams, oracle: bool) -> Result<(RunReport, gvks::solver::GvksSolution), Failure> {
    let started = Instant::now();
    let solution = solve_gvks_with_stats(instance, params)?;
    let wall_ms = started.elapsed().as_secs_f64() * 1e3;
    let report = validate_packing(&solution.packing, instance)?;
    if !report.is_valid() {
        let listing: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
        return Err(Failure(2, format!("solver produced an invalid packing:\n{}", listing.join("\n"))));
    }
    let oracle_profit =
        if oracle { Some(exact_gvks_small(instance, &OracleBudget::default())?.profit) } else { None };
    let run = RunReport::new(instance, solution.packing.packed_profit, oracle_profit, wall_ms, solution.stats.clone(), params.clone());
    Ok((run, solution))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Generate { seed, n, d, profile, rotations, out } => {
            let inst = generate_instance(seed, n, d, profile, rotations)?;
            emit(out.as_deref(), &to_json(&inst))
        }
        Command::Solve { instance, params, oracle, svg, out, report } => {
            let inst = read_instance(&instance)?;
            let (run, solution) = run_one(&inst, &params.params(), oracle)?;
            emit(out.as_deref(), &to_json(&solution.packing))?;
            match report {
                Some(p) => write_json(&p, &run)?,
                None => eprint!("{}", to_json(&run)),
            }
            if let Some(p) = svg {
                let text = render_svg(&inst, &solution.packing, &solution.containers);
                std::fs::write(&p, text).map_err(|e| Failure(1, format!("{}: {e}", p.display())))?;
            }
            Ok(())
        }
        Command::Validate { instance, packing } => {
            let inst = read_instance(&instance)?;
            let packing = read_packing(&packing)?;
            let report = validate_packing(&packing, &inst)?;
            if report.is_valid() {
                return Ok(());
            }
            for v in &report.violations {
                println!("{v}");
            }
            Err(Failure(2, format!("{} violation(s)", report.violations.len())))
        }
        Command::Oracle { instance, out } => {
            let inst = read_instance(&instance)?;
            let result = exact_gvks_small(&inst, &OracleBudget::default())?;
            emit(out.as_deref(), &to_json(&result.witness))
        }
        Command::Bench { seed, count, n, d, profile, rotations, oracle, params } => {
            let params = params.params();
            let rows: Vec<Result<String, Failure>> = (seed..seed.saturating_add(count))
                .into_par_iter()
                .map(|s| {
                    let inst = generate_instance(s, n, d, profile, rotations)?;
                    let (run, _) = run_one(&inst, &params, oracle)?;
                    Ok(csv_row(s, &run))
                })
                .collect();
            println!("{CSV_HEADER}");
            for row in rows {
                println!("{}", row?);
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    if let Some(threads) = std::env::var("GVKS_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // Fails only if a pool already exists, which cannot happen this early.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads.max(1)).build_global();
    }
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
