//! `hecke`: command-line front end for hecke-core.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use hecke_core::{Error, DEFAULT_BUDGET};

const EXIT_PARSE: u8 = 64;
const EXIT_DOMAIN: u8 = 65;
const EXIT_BUDGET: u8 = 69;
/// `spherical-scan --expect-negative` found nothing.
const EXIT_NO_CERTIFICATE: u8 = 2;
/// `verify` ran and some property failed.
const EXIT_VERIFY_FAILED: u8 = 1;

#[derive(Parser, Debug)]
#[command(name = "hecke", version, about = "Exact computation in Hecke algebras of Hecke pairs")]
pub struct Cli {
    /// Hecke pair: finite:<path>, dihedral, dyadic or sl2:<prime>
    #[arg(long, global = true)]
    pair: Option<PairSelector>,

    /// Cap on the number of cosets a single enumeration may produce
    #[arg(long, global = true, env = "HECKE_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: usize,

    /// Seed for the randomized property suites
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    output: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PairSelector {
    Finite(PathBuf),
    Dihedral,
    Dyadic,
    Sl2(u64),
}

impl FromStr for PairSelector {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if let Some(path) = s.strip_prefix("finite:") {
            return Ok(PairSelector::Finite(PathBuf::from(path)));
        }
        if let Some(q) = s.strip_prefix("sl2:") {
            return q.parse().map(PairSelector::Sl2).map_err(|_| format!("bad prime in {s:?}"));
        }
        match s {
            "dihedral" => Ok(PairSelector::Dihedral),
            "dyadic" => Ok(PairSelector::Dyadic),
            _ => Err(format!("unknown pair {s:?}; expected finite:<path>, dihedral, dyadic or sl2:<q>")),
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Canonical double coset of an element with L, R and Δ
    Classify {
        /// Element as JSON, or a path to a file holding it
        element: String,
    },
    /// Operations in the Hecke algebra
    #[command(subcommand)]
    Algebra(AlgebraCommand),
    /// Evaluate π_z(⟨f, f⟩_R) over a grid of z and look for a negative value
    SphericalScan {
        /// Prime q; defaults to the q of --pair sl2:<q>
        #[arg(long)]
        q: Option<u64>,
        /// Coset function file, builtin:counterexample or builtin:unit
        #[arg(long, default_value = "builtin:counterexample")]
        f: String,
        /// Comma-separated rationals; "default" inserts the default grid
        #[arg(long = "z-grid", default_value = "default", allow_hyphen_values = true)]
        z_grid: String,
        /// Exit with status 2 unless a certificate is found
        #[arg(long)]
        expect_negative: bool,
        /// Admit z outside [-q, -1/q] ∪ [1/q, q]; such values are informational only
        #[arg(long)]
        allow_outside_domain: bool,
    },
    /// Run the randomized property suites
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// L(Aⁿ) growth report for a set A of double cosets
    Growth {
        /// JSON array of elements, or a path to a file holding it
        #[arg(long)]
        set: String,
        #[arg(long, default_value_t = 10)]
        nmax: u32,
        /// Classifier band around 1 for the successive ratios
        #[arg(long, default_value_t = 0.02)]
        band: f64,
        /// Number of trailing ratios the classifier looks at
        #[arg(long, default_value_t = 5)]
        window: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum AlgebraCommand {
    /// Convolution product of two Hecke elements
    Mul { left: String, right: String },
    /// Involution of a Hecke element
    Star { operand: String },
    /// L¹-norm of a Hecke element
    Norm { operand: String },
    /// Right inner product ⟨f, g⟩_R = f* * g of two coset functions
    Rinner { left: String, right: String },
}

/// A command failure together with its exit status.
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) => EXIT_PARSE,
            Error::BudgetExceeded { .. } => EXIT_BUDGET,
            _ => EXIT_DOMAIN,
        };
        Failure { code, message: e.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(outcome) => {
            print!("{}", outcome.text);
            ExitCode::from(outcome.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
