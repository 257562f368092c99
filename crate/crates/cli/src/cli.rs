use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use crate::report::Format;

#[derive(Parser, Debug, Clone)]
#[command(
    name = "ostrowski",
    version,
    about = "Continued fractions, double exponential sums and discrepancy checks for irrational rotations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Args, Debug, Clone)]
pub struct Opts {
    /// phi, sqrt:D, surd:P,D,Q (for (P+√D)/Q) or cf:a0;a1,...,(b1,...)
    #[arg(long, global = true)]
    pub alpha: Option<String>,
    /// Level n (also N for `discrepancy`, and the last index for `expand`/`convergents`)
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Integer m (Ostrowski input, reciprocal-sum length, or an Ostrowski-sum sample)
    #[arg(long, global = true)]
    pub m: Option<BigInt>,
    /// Sum length M
    #[arg(long = "M", global = true)]
    pub big_m: Option<u64>,
    /// Evaluate levels up to n-max instead of the single level --n
    #[arg(long = "n-max", global = true)]
    pub n_max: Option<usize>,
    /// Pass threshold for `verify`/`scan`/`discrepancy`
    #[arg(long, global = true)]
    pub cap: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Largest q_n, M or N² to evaluate (OSTROWSKI_BUDGET takes precedence)
    #[arg(long, global = true)]
    pub budget: Option<u64>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Partial quotients a_0..a_n
    Expand,
    /// Convergents p_k/q_k and ξ_k for k ≤ n
    Convergents,
    /// Ostrowski digits of m
    Ostrowski,
    /// T_M and its parts, or Σ_{k≤m} 1/{{kα}}
    Sum {
        #[arg(value_enum)]
        kind: SumKind,
    },
    /// D_N of {α}, …, {Nα} against the digit-sum bound
    Discrepancy,
    /// Check one statement and gate the exit code on it
    Verify {
        #[arg(value_enum)]
        check: Check,
    },
    /// |T_{q_n}| against B_n for n = 0..=n-max
    Scan,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SumKind {
    Naive,
    Closed,
    S2cot,
    Recip,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Check {
    Theorem,
    Sinai,
    Hl,
    LemmaNew,
    LemmaOst,
    Telescope,
    Outer,
    Ck,
}

impl Command {
    pub fn name(&self) -> String {
        match self {
            Command::Expand => "expand".into(),
            Command::Convergents => "convergents".into(),
            Command::Ostrowski => "ostrowski".into(),
            Command::Sum { kind } => format!("sum {}", value_name(*kind)),
            Command::Discrepancy => "discrepancy".into(),
            Command::Verify { check } => format!("verify {}", value_name(*check)),
            Command::Scan => "scan".into(),
        }
    }
}

fn value_name(v: impl ValueEnum) -> String {
    v.to_possible_value().expect("no skipped variants").get_name().to_owned()
}
