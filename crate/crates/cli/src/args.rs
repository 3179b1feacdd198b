use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "schurlab", version, about = "Sum-free partitions and Schur-type numbers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a certificate file against its declared rule.
    Verify(VerifyArgs),
    /// Find the largest n whose 1..=n splits into K sum-free blocks.
    Solve(SolveArgs),
    /// List every valid coloring of 1..=n into K blocks.
    Enumerate(EnumerateArgs),
    /// Build the transformation set between maximal partitions and test it
    /// for group structure.
    Rset(RsetArgs),
    /// Generate the self-correlated sequence 1, 3, 4, 5, 7, ...
    Seq(SeqArgs),
    /// Write the coloring problem as DIMACS CNF.
    Cnf(CnfArgs),
    /// Turn a SAT model for a `cnf` document back into a certificate.
    Decode(DecodeArgs),
    /// Basis, operators and ground state of the constrained many-body model.
    Manybody(ManybodyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Classic,
    Weak,
}

#[derive(Args, Debug)]
pub struct Common {
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Worker threads (defaults to SCHURLAB_THREADS, then 1).
    #[arg(long, env = "SCHURLAB_THREADS", default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: u16,
}

#[derive(Args, Debug)]
pub struct RuleArgs {
    #[arg(long, value_enum, default_value = "classic")]
    pub kind: Kind,
    /// Compare sums modulo M (selects the modular variant of --kind).
    #[arg(long = "mod", value_name = "M", value_parser = clap::value_parser!(u32).range(1..))]
    pub modulus: Option<u32>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long, value_name = "FILE")]
    pub cert: PathBuf,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[command(flatten)]
    pub rule: RuleArgs,
    #[arg(short = 'k', value_name = "K", value_parser = clap::value_parser!(u32).range(1..=255))]
    pub k: u32,
    /// Exhaust the search tree and certify maximality (default).
    #[arg(long, conflicts_with = "lower_bound")]
    pub prove: bool,
    /// Report the best coloring found within the budget.
    #[arg(long)]
    pub lower_bound: bool,
    /// Wall-clock budget in seconds.
    #[arg(long, value_name = "SECONDS")]
    pub budget: Option<f64>,
    /// Stop a lower-bound search once this value is reached.
    #[arg(long, value_name = "N", requires = "lower_bound")]
    pub target: Option<u32>,
    /// Certificate whose prefix seeds the search.
    #[arg(long, value_name = "FILE")]
    pub hint: Option<PathBuf>,
    /// Run proofs that are refused by default as too large.
    #[arg(long)]
    pub allow_long: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct EnumerateArgs {
    #[command(flatten)]
    pub rule: RuleArgs,
    #[arg(short = 'k', value_name = "K", value_parser = clap::value_parser!(u32).range(1..=255))]
    pub k: u32,
    #[arg(short = 'n', value_name = "N")]
    pub n: u32,
    /// One coloring per set of block labels.
    #[arg(long)]
    pub canonical: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct RsetArgs {
    #[command(flatten)]
    pub rule: RuleArgs,
    #[arg(short = 'k', value_name = "K", value_parser = clap::value_parser!(u32).range(1..=255))]
    pub k: u32,
    /// Refuse sets larger than this.
    #[arg(long, default_value_t = 1024)]
    pub max_elements: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct SeqArgs {
    #[arg(long, value_name = "N", default_value_t = 14)]
    pub terms: usize,
    #[arg(long)]
    pub check_fractal: bool,
    /// Compare with the product generating function truncated to E factors.
    #[arg(long, value_name = "E")]
    pub check_genfun: Option<usize>,
    /// Render sites 1..=S as a 0/1 occupancy string.
    #[arg(long, value_name = "S")]
    pub occupancy: Option<u64>,
    /// Print every term instead of the first 100.
    #[arg(long)]
    pub all: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct CnfArgs {
    #[command(flatten)]
    pub rule: RuleArgs,
    #[arg(short = 'k', value_name = "K", value_parser = clap::value_parser!(u32).range(1..=255))]
    pub k: u32,
    #[arg(short = 'n', value_name = "N")]
    pub n: u32,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct DecodeArgs {
    /// The DIMACS document written by `cnf`.
    #[arg(long, value_name = "FILE")]
    pub cnf: PathBuf,
    /// Solver output: `v` lines or bare literals.
    #[arg(long, value_name = "FILE")]
    pub model: PathBuf,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ManybodyReport {
    /// Ground energy, degeneracy and ground states.
    Ground,
    /// Exact ladder-operator identities and their deviations.
    Algebra,
    /// The basis states.
    Basis,
    /// The Hamiltonian matrix.
    Hamiltonian,
}

#[derive(Args, Debug)]
pub struct ManybodyArgs {
    #[command(flatten)]
    pub rule: RuleArgs,
    #[arg(long, value_name = "K", value_parser = clap::value_parser!(u32).range(1..=255))]
    pub levels: u32,
    /// Values 1..=N are placed.
    #[arg(long, value_name = "N")]
    pub values: u32,
    /// Level energies E1,..,EK (default 1,2,..,K).
    #[arg(long, value_name = "E1,..,EK", value_delimiter = ',', allow_hyphen_values = true)]
    pub energies: Option<Vec<f64>>,
    #[arg(long, value_name = "J", default_value_t = 0.0, allow_hyphen_values = true)]
    pub hop: f64,
    #[arg(long = "int", value_name = "L", default_value_t = 0.0, allow_hyphen_values = true)]
    pub interaction: f64,
    /// Let values be absent from every level.
    #[arg(long)]
    pub absent: bool,
    #[arg(long, value_enum, default_value = "ground")]
    pub report: ManybodyReport,
    #[arg(long, default_value_t = 1e-10)]
    pub tolerance: f64,
    #[command(flatten)]
    pub common: Common,
}
