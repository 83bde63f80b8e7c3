//! `divlab`: command-line front end for divlab-core.
//!
//! Exit status: 0 for ok/found, 1 for fail/none-found, 2 for usage, parse
//! and input errors. Reports go to stdout as JSON; a one-line summary goes to
//! stderr.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "divlab", version, about = "Exact computations with finite diversities")]
pub struct Cli {
    /// Use the brute-force reference evaluators where a command has one.
    #[arg(long, global = true)]
    pub oracle: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum Which {
    Diam,
    Steiner,
    Sandwich,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum Battery {
    /// Random admissible functions on random small subsets.
    Random,
    /// Copies of existing points; the deficit is always zero.
    Kappa,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the diversity axioms.
    Validate {
        /// Diversity JSON file.
        input: PathBuf,
    },
    /// Print the induced metric `d(a, b) = δ({a, b})`.
    Metric { input: PathBuf },
    /// Diameter or Steiner diversity of the induced metric, or the sandwich check.
    Bounds {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        which: Which,
        /// With `--which steiner`, report one lightest tree covering these labels instead.
        #[arg(long)]
        terminals: Option<String>,
    },
    /// Check the admissibility conditions for a function file.
    AdmissibleCheck { input: PathBuf },
    /// Extension diversity of a family of admissible functions on one base.
    Hatdelta {
        #[arg(long, num_args = 1.., required = true)]
        inputs: Vec<PathBuf>,
    },
    /// Maximal extension to the whole base of a function's restriction to a support.
    Extend {
        input: PathBuf,
        /// Space-separated labels of the support.
        #[arg(long)]
        support: String,
    },
    /// Check whether a set of labels is a support of a function.
    SupportCheck {
        input: PathBuf,
        #[arg(long)]
        support: String,
    },
    /// Adjoin a new point realizing an admissible function.
    Amalgamate {
        input: PathBuf,
        #[arg(long)]
        label: String,
    },
    /// Find a host point realizing a query within its epsilon.
    Realize {
        #[arg(long)]
        host: PathBuf,
        #[arg(long)]
        query: PathBuf,
    },
    /// Find an isomorphism between two diversities.
    Iso { first: PathBuf, second: PathBuf },
    /// Find a value-preserving injection of one diversity into another.
    Embed { small: PathBuf, big: PathBuf },
    /// Move a query's function to nearby host points, keeping it admissible.
    Perturb {
        #[arg(long)]
        host: PathBuf,
        #[arg(long)]
        query: PathBuf,
        /// Image of each query point, as `a:a2 b:b2`.
        #[arg(long)]
        map: String,
        /// Per-point slack, a rational such as `1/20`.
        #[arg(long)]
        eps0: String,
    },
    /// Grow a tower of one-point extensions.
    Grow {
        #[arg(long)]
        rounds: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Growth policy JSON; defaults apply to missing fields.
        #[arg(long)]
        policy: Option<PathBuf>,
        /// Continue an existing tower instead of starting from a single point.
        #[arg(long)]
        from: Option<PathBuf>,
        /// Write the tower here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Extension deficit after each recorded round of a tower.
    Deficit {
        #[arg(long)]
        tower: PathBuf,
        /// Queries per round.
        #[arg(long)]
        battery: usize,
        #[arg(long, value_enum, default_value_t = Battery::Random)]
        kind: Battery,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Policy for sampling queries; defaults to the one stored in the tower.
        #[arg(long)]
        policy: Option<PathBuf>,
        /// Write rows here; without it the CSV goes to stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(out) => {
            print!("{}", out.stdout());
            if !out.summary().is_empty() {
                eprintln!("{}", out.summary());
            }
            ExitCode::from(out.exit_code())
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
