use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{CommandKind, Overrides};

#[derive(Debug, Parser)]
#[command(name = "longmem", version, about = "Simulate and analyze long-memory processes")]
pub struct Cli {
    /// TOML file with `command`, `seed`, `input`, `output` and a `[params]` table.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a simulated series or path (fgn, fbm, hermite, cascade, subordinated).
    Simulate(Flags),
    /// Estimate scaling from a series file (rs, aggvar, periodogram, partition).
    Estimate(Flags),
    /// Generate a binomial cascade and compare estimated and exact tau(q).
    Cascade(Flags),
    /// Distribution of normalized partial sums for a list of sample sizes.
    Analyze(Flags),
}

impl Command {
    pub fn split(self) -> (CommandKind, Flags) {
        match self {
            Command::Simulate(f) => (CommandKind::Simulate, f),
            Command::Estimate(f) => (CommandKind::Estimate, f),
            Command::Cascade(f) => (CommandKind::Cascade, f),
            Command::Analyze(f) => (CommandKind::Analyze, f),
        }
    }
}

/// Every subcommand accepts the same flags; a flag the command does not
/// read is reported as an error.
#[derive(Debug, Args, Default)]
pub struct Flags {
    /// Process (simulate) or source (analyze: iid, fgn).
    #[arg(long)]
    pub process: Option<String>,
    #[arg(long)]
    pub hurst: Option<String>,
    /// Hermite order k; for analyze, k >= 2 applies h_k to the source.
    #[arg(long)]
    pub order: Option<String>,
    /// Sample size (a comma list for analyze).
    #[arg(long)]
    pub n: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Generator (fast, exact, oracle) or estimator (rs, aggvar, periodogram, partition).
    #[arg(long)]
    pub method: Option<String>,
    /// Comma list of moment orders.
    #[arg(long)]
    pub q: Option<String>,
    #[arg(long)]
    pub depth: Option<String>,
    #[arg(long)]
    pub m0: Option<String>,
    /// Cascade multiplier law: two-point or deterministic.
    #[arg(long)]
    pub law: Option<String>,
    /// Comma list of window or block sizes.
    #[arg(long)]
    pub windows: Option<String>,
    /// Use half-overlapping R/S windows.
    #[arg(long)]
    pub overlap: bool,
    /// Fraction of Fourier frequencies used by the periodogram.
    #[arg(long)]
    pub cutoff: Option<String>,
    #[arg(long)]
    pub dt: Option<String>,
    /// Inner points per output step of the fast Hermite generator.
    #[arg(long)]
    pub inner: Option<String>,
    /// Partial-sum normalization for analyze: exact or empirical.
    #[arg(long)]
    pub normalization: Option<String>,
    #[arg(long)]
    pub replicates: Option<String>,
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

impl From<Flags> for Overrides {
    fn from(f: Flags) -> Self {
        let mut o = Overrides {
            input: f.input,
            output: f.output,
            seed: f.seed,
            ..Overrides::default()
        };
        let pairs = [
            ("process", f.process),
            ("hurst", f.hurst),
            ("order", f.order),
            ("n", f.n),
            ("method", f.method),
            ("q", f.q),
            ("depth", f.depth),
            ("m0", f.m0),
            ("law", f.law),
            ("windows", f.windows),
            ("cutoff", f.cutoff),
            ("dt", f.dt),
            ("inner", f.inner),
            ("normalization", f.normalization),
            ("replicates", f.replicates),
            ("overlap", f.overlap.then(|| "true".to_string())),
        ];
        for (k, v) in pairs {
            if let Some(v) = v {
                o.params.insert(k.to_string(), v);
            }
        }
        o
    }
}
