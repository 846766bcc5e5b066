use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use postlie_cli::{
    cmd_adjoint_rep, cmd_classify, cmd_orbit_test, cmd_postlie_check, cmd_random_so3, cmd_search,
    cmd_verify_canon, CommandReport, Status,
};
use postlie_core::mateq::{DEFAULT_BUDGET, DEFAULT_TOL};
use postlie_core::solver::{SearchOptions, DEFAULT_MAX_ITER, DEFAULT_RADIUS, DEFAULT_SOLVE_TOL};

/// PostLie algebra structures on sl(2,C).
#[derive(Parser)]
#[command(name = "postlie", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact check of the canonical representatives of every family.
    VerifyCanon,
    /// Classify a solution matrix read from a JSON file.
    Classify {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Search for a congruence witness with this seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
    },
    /// Check the PostLie identities for a product or a matrix.
    PostlieCheck {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Test whether two matrices are SO(3,C)-congruent.
    OrbitTest {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Multistart Newton search for solutions.
    Search {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        starts: usize,
        #[arg(long, default_value_t = DEFAULT_RADIUS)]
        radius: f64,
        #[arg(long, default_value_t = DEFAULT_SOLVE_TOL)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
        max_iter: usize,
    },
    /// Sample a random element of SO(3,C).
    RandomSo3 {
        #[arg(long)]
        seed: u64,
        /// Sample with Gaussian-rational entries instead.
        #[arg(long)]
        exact: bool,
    },
    /// Image of an invertible 2x2 matrix under the adjoint representation.
    AdjointRep { file: PathBuf },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            let command = std::env::args().nth(1).unwrap_or_default();
            let report = CommandReport::error(&command, e.kind().to_string());
            return emit(&report);
        }
    };
    let report = match cli.command {
        Command::VerifyCanon => cmd_verify_canon(),
        Command::Classify {
            file,
            tol,
            seed,
            budget,
        } => cmd_classify(&file, tol, seed.map(|s| (budget, s))),
        Command::PostlieCheck { file, tol } => cmd_postlie_check(&file, tol),
        Command::OrbitTest {
            a,
            b,
            seed,
            budget,
            tol,
        } => cmd_orbit_test(&a, &b, budget, seed, tol),
        Command::Search {
            seed,
            starts,
            radius,
            tol,
            max_iter,
        } => cmd_search(&SearchOptions {
            starts,
            seed,
            radius,
            tol,
            max_iter,
        }),
        Command::RandomSo3 { seed, exact } => cmd_random_so3(seed, exact),
        Command::AdjointRep { file } => cmd_adjoint_rep(&file),
    };
    if report.status == Status::Error {
        if let Some(msg) = report.payload.get("error").and_then(|m| m.as_str()) {
            eprintln!("postlie {}: {msg}", report.command);
        }
    }
    emit(&report)
}

fn emit(report: &CommandReport) -> ExitCode {
    let text = serde_json::to_string_pretty(&report.to_json()).expect("serializable report");
    // A closed pipe downstream is not an error of ours.
    let _ = writeln!(std::io::stdout().lock(), "{text}");
    ExitCode::from(report.status.exit_code() as u8)
}
