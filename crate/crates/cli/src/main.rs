//! `limitlab` command-line front end.
//!
//! Exit status: 0 on success, 1 when an input fails validation, 2 on
//! parse or configuration errors.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use limitlab::bits::BitString;
use limitlab::complexity::ConditionMode;
use limitlab::rational::Rational;

#[derive(Parser, Debug)]
#[command(name = "limitlab", version, about = "Staged families, liminf covers and toy complexity")]
pub struct Cli {
    /// Input file; standard input when omitted.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// A comma-separated list of rationals such as `0,1/4,1/2,3/4,1`.
#[derive(Clone, Debug)]
pub struct Grid(pub Vec<Rational>);

impl FromStr for Grid {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',')
            .map(|v| v.trim().parse::<Rational>().map_err(|e| format!("grid value {v:?}: {e}")))
            .collect::<Result<_, _>>()
            .map(Grid)
    }
}

/// A binary string; `-` stands for the empty string.
#[derive(Clone, Debug)]
pub struct Bits(pub BitString);

impl FromStr for Bits {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s == "-" {
            return Ok(Bits(BitString::empty()));
        }
        s.parse().map(Bits).map_err(|e| format!("{e}"))
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a presentation's invariants.
    Validate {
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        epsilon: Option<Rational>,
    },
    /// Breakpoints and the exact liminf of a presentation.
    Liminf {
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        epsilon: Option<Rational>,
    },
    /// Cover the liminf of a set family by fewer than 2^k elements.
    CoverSets {
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        nmax: Option<u64>,
    },
    /// Cover the liminf of a flat semimeasure family.
    CoverSemimeasure {
        #[arg(long)]
        grid: Grid,
        #[arg(long)]
        nmax: Option<u64>,
    },
    /// Cover the liminf of a tree semimeasure family.
    CoverTree {
        #[arg(long)]
        grid: Grid,
        #[arg(long)]
        nmax: Option<u64>,
    },
    /// Cover the liminf of an open family within measure epsilon.
    CoverOpen {
        #[arg(long)]
        lmax: usize,
        #[arg(long)]
        epsilon: Option<Rational>,
        #[arg(long)]
        nmax: Option<u64>,
    },
    /// Cover the liminf of a granular open family within epsilon'.
    CoverOpenStrong {
        #[arg(long)]
        epsilon_prime: Rational,
        #[arg(long)]
        epsilon: Option<Rational>,
    },
    /// Split the liminf of a granular open family into disjoint pieces.
    Decompose {
        #[arg(long)]
        epsilon: Option<Rational>,
    },
    /// Run the forcing procedure on a query instance.
    Lowbasis {
        #[arg(long)]
        witness_length: usize,
    },
    /// Emit the reference complexity table for strings up to `--nmax` bits.
    Complexity {
        #[arg(long)]
        nmax: usize,
        #[arg(long, default_value = "conditional")]
        mode: ConditionMode,
        /// Write the plain-text table format instead of JSON.
        #[arg(long)]
        text: bool,
    },
    /// Deficiencies d and dbar along a prefix.
    Deficiency {
        #[arg(long)]
        omega: Bits,
        #[arg(long)]
        horizon: usize,
        #[arg(long)]
        c: u64,
    },
    /// Event log of the open family built from deficiency sets.
    DeficiencyFamily {
        #[arg(long)]
        c: u64,
        #[arg(long)]
        nmin: u64,
        #[arg(long)]
        nmax: u64,
    },
    /// Prefix lengths whose complexity is within c of the length.
    RandomnessReport {
        #[arg(long)]
        omega: Bits,
        #[arg(long)]
        c: u64,
    },
    /// Ordinal codes for the strings covered by an open family.
    OrdinalCodes {
        #[arg(long)]
        c: u64,
    },
    /// Exact limit frequencies of an eventually periodic trace.
    Freq,
    /// Semimeasure event log built from a trace.
    TraceToFamily {
        #[arg(long)]
        nmax: u64,
        #[arg(long)]
        grid: Grid,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(failure.exit_code())
        }
    }
}
