use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "locality",
    version,
    about = "Paging under working-set locality"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Replay a trace through one replacement policy.
    Simulate(SimulateArgs),
    /// Generate the adversarial sequence for a policy and check its fault rate.
    Adversary(AdversaryArgs),
    /// Print alpha and the FIFO bound for a locality function.
    Bounds(BoundsArgs),
    /// Check a trace against a locality function.
    Conform(ConformArgs),
    /// Tightest locality function a trace satisfies.
    Profile(ProfileArgs),
    /// Run a bound-verification harness.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Density-greedy or exact knapsack on an instance file.
    Knapsack {
        #[arg(value_enum)]
        solver: KnapsackSolver,
        #[arg(long)]
        instance: PathBuf,
    },
    /// Generate margin datasets or train the perceptron.
    #[command(subcommand)]
    Perceptron(PerceptronCommand),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    Lru,
    Fifo,
    Opt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OnlinePolicyArg {
    Lru,
    Fifo,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub policy: PolicyArg,
    #[arg(long)]
    pub k: usize,
    /// Initial cache contents as trace tokens, oldest first. Cold if omitted.
    #[arg(long, value_delimiter = ',')]
    pub warm: Option<Vec<String>>,
    #[arg(long)]
    pub trace: PathBuf,
    /// Include fault indices and the eviction log.
    #[arg(long)]
    pub detail: bool,
}

#[derive(Debug, Args)]
pub struct AdversaryArgs {
    #[arg(long, value_enum)]
    pub policy: OnlinePolicyArg,
    /// identity, sqrt, log2, witness or table:PATH. Ignored with --always-miss.
    #[arg(long, default_value = "identity")]
    pub f: String,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 1)]
    pub reps: usize,
    /// Request the missing page every time instead, for LEN requests.
    #[arg(long, value_name = "LEN")]
    pub always_miss: Option<usize>,
    /// Write the generated trace here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub f: String,
    #[arg(long)]
    pub k: usize,
}

#[derive(Debug, Args)]
pub struct ConformArgs {
    #[arg(long)]
    pub f: String,
    #[arg(long)]
    pub trace: PathBuf,
    /// Use the quadratic reference checker.
    #[arg(long)]
    pub naive: bool,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    #[arg(long)]
    pub trace: PathBuf,
    /// Longest window to measure; defaults to the trace length.
    #[arg(long)]
    pub max_window: Option<usize>,
    /// Write the normalized function as a table file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    /// The adversarial sequence realizes alpha exactly and conforms.
    Lower {
        #[arg(long, value_enum)]
        policy: OnlinePolicyArg,
        #[arg(long)]
        f: String,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 10)]
        reps: usize,
    },
    /// LRU stays within alpha on random conforming sequences.
    LruUpper(UpperArgs),
    /// FIFO stays within its bound on random conforming sequences.
    FifoUpper(UpperArgs),
    /// FIFO and LRU on the separating witness.
    Separation {
        #[arg(long, default_value_t = 100)]
        reps: usize,
    },
}

#[derive(Debug, Args)]
pub struct UpperArgs {
    #[arg(long)]
    pub f: String,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    #[arg(long, default_value_t = 10_000)]
    pub len: usize,
    /// Distinct pages available to the generator; defaults to k + 1.
    #[arg(long)]
    pub pages: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KnapsackSolver {
    Greedy,
    Exact,
}

#[derive(Debug, Subcommand)]
pub enum PerceptronCommand {
    /// Write a seeded dataset with margin at least MU.
    Gen {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        mu: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Train on a dataset file.
    Train {
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        max_updates: usize,
        /// Known margin; enables the mistake-bound check.
        #[arg(long)]
        mu: Option<f64>,
        /// Include per-update norms.
        #[arg(long)]
        log: bool,
    },
}
