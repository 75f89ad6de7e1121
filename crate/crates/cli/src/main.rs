use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;

#[derive(Parser, Debug)]
#[command(
    name = "typeiia",
    version,
    about = "SU(3)-structure torsion and Type IIA flow on six-dimensional Lie algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the full invariant suite on one algebra or on all of them.
    Verify(Common),
    /// Recompute c, |w2|^2, c/|w2|^2 and the flow regime for every algebra.
    Table(Common),
    /// Sample a flow trajectory.
    Flow(FlowArgs),
    /// Randomized commutator/wedge agreement and eigen-constraint campaigns.
    Lemmas(LemmaArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Catalog name, or "all".
    #[arg(long, default_value = "all")]
    pub algebra: String,
    /// Parameter a > 0 of A5_17.
    #[arg(long, default_value_t = 1.0)]
    pub param_a: f64,
    /// Initial norm F0 = |phi(0)|.
    #[arg(long, default_value_t = 2.0)]
    pub f0: f64,
    #[arg(long, default_value_t = 1e-9)]
    pub epsilon: f64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Args, Debug, Clone)]
pub struct FlowArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub t0: f64,
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    pub t1: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    /// Trajectory solver: closed-form or rk4.
    #[arg(long, default_value = "closed-form")]
    pub method: String,
}

#[derive(Args, Debug, Clone)]
pub struct LemmaArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// How a command ended, mapped to the exit code.
#[derive(Debug)]
pub enum Failure {
    /// Bad arguments: exit 2.
    Usage(String),
    /// A check failed or the computation could not run: exit 1.
    Check(String),
}

impl From<typeiia_core::Error> for Failure {
    fn from(e: typeiia_core::Error) -> Self {
        use typeiia_core::Error as E;
        match e {
            E::UnknownAlgebra(_)
            | E::UnknownSolver(_)
            | E::InvalidParameter { .. }
            | E::OutsideInterval { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Check(e.to_string()),
        }
    }
}

/// Rendered output plus whether every executed check passed.
pub struct Output {
    pub body: String,
    pub pass: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify(c) => commands::validate(c).and_then(|_| commands::verify(c)),
        Command::Table(c) => commands::validate(c).and_then(|_| commands::table(c)),
        Command::Flow(f) => commands::validate(&f.common).and_then(|_| commands::flow(f)),
        Command::Lemmas(l) => commands::validate(&l.common).and_then(|_| commands::lemmas(l)),
    };
    match result {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            // a closed pipe is not a failure of the checks
            let _ = stdout.write_all(out.body.as_bytes());
            if out.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
    }
}
