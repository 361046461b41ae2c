//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use regreal::filters::Filter;
use regreal::verify::DEFAULT_SEED;

#[derive(Parser, Debug)]
#[command(
    name = "regreal",
    version,
    about = "Reductions between linear recurrences, orbit hitting and regular realizability"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Output style: `text`, or `lines` for one JSON object per field.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Worker threads.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    /// Write produced files here instead of standard output.
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    /// Manifest path; defaults to `manifest.json` in the output directory,
    /// else one line on standard error.
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Lines,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Linear recurrence sequences.
    #[command(subcommand)]
    Lrs(LrsCmd),
    /// Weighted digraphs.
    #[command(subcommand)]
    Digraph(DigraphCmd),
    /// Finite automata.
    #[command(subcommand)]
    Dfa(DfaCmd),
    /// Reductions between problems.
    #[command(subcommand)]
    Reduce(ReduceCmd),
    /// Block-word filters.
    #[command(subcommand)]
    Filter(FilterCmd),
    /// Integer lattices and cones.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Complete deciders.
    #[command(subcommand)]
    Decide(DecideCmd),
    /// Orbit hitting problems.
    #[command(subcommand)]
    Hit(HitCmd),
    /// Run an acceptance suite by number or name, or `all`.
    Verify { suite: String },
    /// Re-run a manifest and compare output digests.
    Replay { manifest: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum LrsCmd {
    /// Terms `x_n, ..., x_{n+count-1}`.
    Eval {
        file: PathBuf,
        n: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// Integer sequence `N^{n+1} x_n`.
    Scale { file: PathBuf },
    /// Automata pair with count difference `x_n` at length `ℓn`.
    ToPair {
        file: PathBuf,
        #[arg(long)]
        ell: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
pub enum DigraphCmd {
    /// Weighted digraph whose length-n walk weights sum to `x_n`.
    BuildLrs { file: PathBuf },
    /// Digraph with exactly `n` walks of length `k`.
    BuildCount { n: String, k: usize },
    /// Total weight of length-n walks from `s` to `f`.
    Walksum { file: PathBuf, n: usize },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum CombineMode {
    And,
    Or,
    Diff,
}

#[derive(Subcommand, Debug)]
pub enum DfaCmd {
    /// Number of accepted words of length `n`.
    Count { file: PathBuf, n: usize },
    /// Product automaton.
    Combine {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum)]
        mode: CombineMode,
    },
    /// Run on a word.
    Run { file: PathBuf, word: String },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum RelationArg {
    Exact,
    Down,
    Up,
}

#[derive(Subcommand, Debug)]
pub enum ReduceCmd {
    /// Chamber constraints to a permutation-filter automaton.
    ChpToPb { file: PathBuf },
    /// Automaton to walk-weight hitting instances, one per valid element.
    PbToWwhp {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = RelationArg::Exact)]
        relation: RelationArg,
    },
    /// Exact walk hitting to integer cone hitting.
    WwhpToIhp { file: PathBuf },
    /// Cone hitting through polyhedral queries answered by a bounded scan.
    IhpToPhp {
        file: PathBuf,
        #[arg(long)]
        bound: u64,
        #[arg(long)]
        budget: u64,
    },
    /// Integer matrices to a permutation-filter automaton.
    ZurcToPepe { file: PathBuf },
}

fn parse_filter(s: &str) -> Result<Filter, String> {
    Filter::parse(s).ok_or_else(|| format!("unknown filter {s:?}; use pb, inj, sur or per"))
}

#[derive(Subcommand, Debug)]
pub enum FilterCmd {
    /// Membership of a block word.
    Check {
        #[arg(value_parser = parse_filter)]
        filter: Filter,
        word: String,
        /// Block alphabet, space separated.
        #[arg(long, default_value = "0 1")]
        alphabet: String,
    },
    /// Least accepted filter word up to a rank.
    Brute {
        #[arg(value_parser = parse_filter)]
        filter: Filter,
        file: PathBuf,
        #[arg(long)]
        max_rank: usize,
        #[arg(long)]
        budget: u64,
        #[arg(long, default_value_t = 2)]
        slack: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum LatticeCmd {
    /// Smith normal form `U D V = M`.
    Snf { file: PathBuf },
    /// Hilbert basis of a simplicial cone.
    Hilbert {
        file: PathBuf,
        #[arg(long)]
        budget: u64,
    },
    /// Finite union of simplicial translates equal to an integer cone.
    Caratheodory {
        file: PathBuf,
        #[arg(long)]
        budget: u64,
    },
    /// Times at which an integer orbit meets a lattice coset.
    Hitset { file: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum DecideCmd {
    /// Does the automaton accept an injective block word?
    Inj { file: PathBuf },
    /// Does the automaton accept a surjective block word?
    Sur { file: PathBuf },
    /// Up-hitting for a walk instance.
    Up { file: PathBuf },
    /// Down-hitting for a walk instance.
    Down { file: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum HitCmd {
    /// Scan the orbit up to a bound.
    Scan {
        file: PathBuf,
        #[arg(long)]
        bound: u64,
    },
    /// Complement a chamber instance into a description instance or back.
    Roundtrip { file: PathBuf },
}
