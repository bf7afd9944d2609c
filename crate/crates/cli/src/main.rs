use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use parity_forge::verify::BranchPolicy;

mod commands;
mod output;

#[derive(Parser, Debug)]
#[command(
    name = "parity-forge",
    version,
    about = "Constant-depth code deformations on the parity architecture"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Logical qubit count.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// QAOA layers.
    #[arg(long, global = true, default_value_t = 1)]
    pub p: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Outcome branches to simulate: random, enumerate or forced:<bits>.
    /// Without it, branches are enumerated up to the simulator's limit and
    /// sampled beyond it.
    #[arg(long, global = true, value_parser = parse_policy)]
    pub policy: Option<PolicyArg>,
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolicyArg {
    Random,
    Enumerate,
    Forced(Vec<bool>),
}

impl PolicyArg {
    pub fn to_policy(&self, seed: u64) -> BranchPolicy {
        match self {
            PolicyArg::Random => BranchPolicy::Sample {
                count: parity_forge::verify::SAMPLED_BRANCHES,
                seed,
            },
            PolicyArg::Enumerate => BranchPolicy::Enumerate,
            PolicyArg::Forced(bits) => BranchPolicy::Forced(bits.clone()),
        }
    }
}

fn parse_policy(s: &str) -> Result<PolicyArg, String> {
    match s {
        "random" => Ok(PolicyArg::Random),
        "enumerate" => Ok(PolicyArg::Enumerate),
        _ => {
            let bits = s
                .strip_prefix("forced:")
                .ok_or_else(|| format!("unknown policy {s:?}"))?;
            bits.chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(format!("forced outcomes must be 0 or 1, got {c:?}")),
                })
                .collect::<Result<Vec<_>, _>>()
                .map(PolicyArg::Forced)
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Emit the LHZ layout for --n as code JSON.
    Layout {
        /// Leave out the data qubits.
        #[arg(long)]
        no_data: bool,
    },
    /// Check closure, independence and locality of a code JSON file.
    Validate { code: PathBuf },
    /// Compile a measurement-based encode (default: full LHZ from the data
    /// qubits).
    Encode {
        #[arg(long, requires = "to")]
        from: Option<PathBuf>,
        #[arg(long, requires = "from")]
        to: Option<PathBuf>,
        #[arg(long)]
        verify: bool,
    },
    /// Compile a measurement-based decode (default: every parity qubit of
    /// the LHZ layout).
    Decode {
        #[arg(long)]
        code: Option<PathBuf>,
        /// Comma-separated labels such as 0-1,1-2.
        #[arg(long, requires = "code", value_delimiter = ',')]
        remove: Vec<String>,
        #[arg(long)]
        verify: bool,
    },
    /// Parity QAOA on the LHZ layout: an energy landscape or an optimization.
    Qaoa {
        /// Problem JSON; a random two-body problem otherwise.
        #[arg(long)]
        problem: Option<PathBuf>,
        /// Grid size of a p = 1 landscape over [0, pi)^2.
        #[arg(long, conflicts_with = "budget")]
        landscape: Option<usize>,
        /// Energy evaluations for the optimizer.
        #[arg(long, default_value_t = 200)]
        budget: usize,
    },
    /// Compile the strip QFT and optionally check it against the dense one.
    Qft {
        #[arg(long)]
        verify: bool,
        /// Random input states for --verify.
        #[arg(long, default_value_t = 20)]
        inputs: usize,
    },
    /// Prepare a graph state through the parity encoding.
    Graphstate {
        /// Graph JSON; a random graph on --n vertices otherwise.
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        verify: bool,
    },
    /// Branch determinism and correction-oracle equivalence for the full
    /// LHZ encode and decode.
    Verify {
        /// Random outcome assignments for the oracle comparison.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Depth tables for one QAOA layer and the strip QFT.
    Report {
        #[arg(long)]
        qaoa: bool,
        #[arg(long)]
        qft: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli.command, &cli.global)
        .and_then(|r| output::emit(&r, &cli.global).map(|_| r.pass))
    {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
