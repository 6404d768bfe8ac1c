use std::path::PathBuf;

use clap::{Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "voi-lab",
    version,
    about = "Exact channel-interaction analysis for finite Bayesian decision problems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the built-in worked example and self-check every value
    Demo {
        /// Emit the report as JSON (rationals as strings)
        #[arg(long)]
        json: bool,
    },
    /// Evaluate the interaction of two channels at one belief
    Eval {
        /// Instance file (JSON; numbers as rational strings)
        instance: PathBuf,
        /// Belief as comma-separated rationals, e.g. 1/4,1/6,7/12
        #[arg(long)]
        belief: String,
        /// Name of the channel observed first
        #[arg(long = "i", value_name = "NAME")]
        channel_i: String,
        /// Name of the channel whose value change is measured
        #[arg(long = "j", value_name = "NAME")]
        channel_j: String,
        /// Emit the report as JSON (rationals as strings)
        #[arg(long)]
        json: bool,
    },
    /// Emit plot-ready CSV sweeps of the interaction
    Scan {
        #[command(subcommand)]
        mode: ScanMode,
    },
    /// Randomized falsification of the exact identities and theorems
    Verify {
        /// RNG seed; runs are fully deterministic given the seed
        #[arg(long)]
        seed: u64,
        /// Number of random cases
        #[arg(long)]
        cases: u64,
        /// States per random problem (2..=5)
        #[arg(long, default_value_t = 5)]
        max_states: usize,
        /// Actions per random problem (2..=5)
        #[arg(long, default_value_t = 5)]
        max_actions: usize,
        /// Outcomes per random channel (1..=4)
        #[arg(long, default_value_t = 4)]
        max_outcomes: usize,
        /// Denominator bound for random rationals
        #[arg(long, default_value_t = 12)]
        denom_bound: i64,
    },
}

#[derive(Debug, Subcommand)]
pub enum ScanMode {
    /// Evaluate every barycentric lattice point k/N of the simplex
    Grid {
        /// Instance file; defaults to the built-in worked example
        instance: Option<PathBuf>,
        /// Lattice denominator N
        #[arg(long, default_value_t = 120)]
        n: u32,
        /// Name of the channel observed first
        #[arg(long = "i", value_name = "NAME", default_value = "i")]
        channel_i: String,
        /// Name of the channel whose value change is measured
        #[arg(long = "j", value_name = "NAME", default_value = "j")]
        channel_j: String,
        /// Write CSV here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact piecewise-linear scan along origin + t*direction
    Ray {
        /// Instance file; defaults to the built-in worked example
        instance: Option<PathBuf>,
        /// Ray origin belief, comma-separated rationals
        #[arg(long)]
        origin: String,
        /// Ray direction, comma-separated rationals summing to 0
        #[arg(long)]
        dir: String,
        /// Upper end of the scanned parameter range
        #[arg(long = "t-max")]
        t_max: String,
        /// Name of the channel observed first
        #[arg(long = "i", value_name = "NAME", default_value = "i")]
        channel_i: String,
        /// Name of the channel whose value change is measured
        #[arg(long = "j", value_name = "NAME", default_value = "j")]
        channel_j: String,
        /// Write CSV here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
}
