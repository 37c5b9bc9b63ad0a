//! Command-line front end: `solve`, `verify` and `generate`.
//!
//! Exit codes: 0 success, 1 verification failed, 2 malformed input or
//! arguments, 3 solver guard or invariant failure.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::descend::solve_max_revenue;
use crate::generate::{generate, MarketShape};
use crate::io::{equilibrium_to_json, instance_to_json, parse_equilibrium, parse_instance, report_to_json, trace_to_ndjson};
use crate::minrev::min_revenue;
use crate::verify::verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECTED: i32 = 1;
pub const EXIT_MALFORMED: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Objective {
    MaxRevenue,
    MinRevenue,
}

#[derive(Debug, Parser)]
#[command(name = "capped-fisher", version, about = "Exact equilibria of Fisher markets with capped linear utilities")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute an equilibrium and print it as JSON.
    Solve {
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "max-revenue")]
        objective: Objective,
        /// Write the event log (one JSON record per line) here.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Check a candidate equilibrium; exits 1 if any condition fails.
    Verify {
        instance: PathBuf,
        #[arg(long)]
        equilibrium: PathBuf,
    },
    /// Print a random integer instance.
    Generate {
        #[arg(long)]
        buyers: usize,
        #[arg(long)]
        goods: usize,
        #[arg(long)]
        max_value: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Make every cap unbounded.
        #[arg(long)]
        linear: bool,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_MALFORMED } else { EXIT_OK };
        }
    };
    match args.command {
        Command::Solve {
            instance,
            objective,
            trace,
        } => cmd_solve(&instance, objective, trace.as_deref(), out, err),
        Command::Verify { instance, equilibrium } => cmd_verify(&instance, &equilibrium, out, err),
        Command::Generate {
            buyers,
            goods,
            max_value,
            seed,
            linear,
        } => {
            let shape = MarketShape {
                linear,
                ..MarketShape::new(buyers, goods, max_value, seed)
            };
            cmd_generate(&shape, out, err)
        }
    }
}

fn read(path: &Path, err: &mut dyn Write) -> Option<String> {
    match fs::read_to_string(path) {
        Ok(text) => Some(text),
        Err(e) => {
            let _ = writeln!(err, "cannot read {}: {e}", path.display());
            None
        }
    }
}

pub fn cmd_solve(
    instance: &Path,
    objective: Objective,
    trace: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let Some(text) = read(instance, err) else { return EXIT_MALFORMED };
    let market = match parse_instance(&text) {
        Ok(m) => m,
        Err(e) => {
            let _ = writeln!(err, "{}: {e}", instance.display());
            return EXIT_MALFORMED;
        }
    };
    let solution = match solve_max_revenue(&market) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(err, "solver failed: {e}");
            return EXIT_INTERNAL;
        }
    };
    if let Some(path) = trace {
        if let Err(e) = fs::write(path, trace_to_ndjson(&solution.trace)) {
            let _ = writeln!(err, "cannot write {}: {e}", path.display());
            return EXIT_MALFORMED;
        }
    }
    let eq = match objective {
        Objective::MaxRevenue => solution.equilibrium,
        Objective::MinRevenue => match min_revenue(&market, &solution.equilibrium) {
            Ok(eq) => eq,
            Err(e) => {
                let _ = writeln!(err, "price lowering failed: {e}");
                return EXIT_INTERNAL;
            }
        },
    };
    let _ = writeln!(out, "{}", equilibrium_to_json(&eq));
    EXIT_OK
}

pub fn cmd_verify(instance: &Path, equilibrium: &Path, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let Some(text) = read(instance, err) else { return EXIT_MALFORMED };
    let market = match parse_instance(&text) {
        Ok(m) => m,
        Err(e) => {
            let _ = writeln!(err, "{}: {e}", instance.display());
            return EXIT_MALFORMED;
        }
    };
    let Some(text) = read(equilibrium, err) else { return EXIT_MALFORMED };
    let eq = match parse_equilibrium(&market, &text) {
        Ok(eq) => eq,
        Err(e) => {
            let _ = writeln!(err, "{}: {e}", equilibrium.display());
            return EXIT_MALFORMED;
        }
    };
    let report = verify(&market, &eq).expect("dimensions checked while parsing");
    let _ = writeln!(out, "{}", report_to_json(&report));
    if report.all_ok() {
        EXIT_OK
    } else {
        for v in &report.violations {
            let _ = writeln!(
                err,
                "{} (buyer {:?}, good {:?}): {} vs {}",
                v.condition, v.buyer, v.good, v.lhs, v.rhs
            );
        }
        EXIT_REJECTED
    }
}

pub fn cmd_generate(shape: &MarketShape, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match generate(shape) {
        Ok(market) => {
            let _ = writeln!(out, "{}", instance_to_json(&market));
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(err, "{e}");
            EXIT_MALFORMED
        }
    }
}
