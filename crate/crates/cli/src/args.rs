use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Partial difference distribution tables and differential knowledge graphs
/// for SIMON.
#[derive(Debug, Parser)]
#[command(name = "diffgraph", version, arg_required_else_help = true, args_override_self = true)]
pub struct Cli {
    /// Key-value TOML file supplying defaults for the subcommand's flags
    /// (keys are flag names without dashes). Flags on the command line win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build, sample and summarize tables.
    #[command(subcommand)]
    Pddt(PddtCmd),
    /// Build, query and export differential graphs.
    #[command(subcommand)]
    Graph(GraphCmd),
    /// Monte Carlo baseline and comparison with the exhaustive search.
    #[command(subcommand)]
    Bench(BenchCmd),
}

#[derive(Debug, Subcommand)]
pub enum PddtCmd {
    /// Build the table of all differentials with probability >= threshold.
    Build {
        /// Word size in bits.
        #[arg(long)]
        n: u32,
        #[arg(long)]
        threshold: f64,
        /// Abort when the table grows beyond this many entries.
        #[arg(long, default_value_t = diffgraph::pddt::DEFAULT_MAX_ELEMENTS)]
        max_elements: usize,
        /// Output CSV (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded quota sample of a table.
    Sample {
        #[command(flatten)]
        input: TableInput,
        #[arg(long, default_value_t = 0.03)]
        fraction: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Plain random sample without the one-per-output quota.
        #[arg(long)]
        no_quota: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Entry count, probability range and weight histogram.
    Stats {
        #[command(flatten)]
        input: TableInput,
    },
}

#[derive(Debug, Args)]
pub struct TableInput {
    /// Table CSV (`id,a,b,c,dp,hw`), or whitespace-separated `a b c [p]`
    /// text with --text.
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,
    /// Word size; inferred from the hex width when omitted (required with --text).
    #[arg(long)]
    pub n: Option<u32>,
    /// Read whitespace-separated triples instead of CSV.
    #[arg(long)]
    pub text: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Fixture {
    /// Two nodes, one edge.
    TwoNode,
    /// 0 -> {1, 2} -> 3 with probabilities 1/8 and 1/2 in the middle.
    Diamond,
    /// 240 nodes, 4 hubs, 960 edges.
    Hub240,
    /// Binary descent tree with root-to-leaf weights 0, 1, 2, 3.
    Tree,
}

#[derive(Debug, Args)]
pub struct GraphInput {
    /// Graph stem: reads STEM.nodes.csv and STEM.edges.csv.
    #[arg(long, value_name = "STEM", conflicts_with = "fixture", required_unless_present = "fixture")]
    pub graph: Option<PathBuf>,
    /// Use a built-in graph instead.
    #[arg(long, value_enum)]
    pub fixture: Option<Fixture>,
    /// Treat edges as undirected when traversing.
    #[arg(long)]
    pub undirected: bool,
}

#[derive(Debug, Subcommand)]
pub enum GraphCmd {
    /// Build a graph from a (sampled) table with an edge rule.
    Build {
        #[command(flatten)]
        input: TableInput,
        /// Rule preset: `default` (output=0 to weight>=0.5) or `printed`
        /// (output<=0 to weight<=0.5).
        #[arg(long, default_value = "default")]
        rule: String,
        /// Source predicate overriding the preset, e.g. `output=0`.
        #[arg(long)]
        source: Option<String>,
        /// Target predicate overriding the preset, e.g. `weight>=0.5`.
        #[arg(long)]
        target: Option<String>,
        #[arg(long)]
        no_self_loops: bool,
        #[arg(long)]
        undirected: bool,
        #[arg(long)]
        label: Option<String>,
        /// Output stem: writes STEM.nodes.csv and STEM.edges.csv.
        #[arg(long, value_name = "STEM")]
        out: PathBuf,
    },
    /// Degrees, hubs, components and clustering.
    Stats {
        #[command(flatten)]
        input: GraphInput,
    },
    /// Ranked simple paths between two nodes.
    Paths {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long)]
        src: u64,
        #[arg(long)]
        dst: u64,
        #[arg(long, default_value_t = 4)]
        max_hops: usize,
        #[arg(long, default_value_t = 10)]
        limit: usize,
    },
    /// Write the graph as csv, graphml, dot or cypher.
    Export {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long)]
        format: String,
        /// Keep only the first N relationships.
        #[arg(long)]
        limit: Option<usize>,
        /// Output file (for csv: a stem, as for `graph build`).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct McsArgs {
    #[command(flatten)]
    pub input: GraphInput,
    #[arg(long)]
    pub start: u64,
    /// Only walks reaching this node count.
    #[arg(long)]
    pub dst: Option<u64>,
    #[arg(long, default_value_t = 1000)]
    pub playouts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 8)]
    pub max_depth: usize,
    #[arg(long, default_value_t = 0)]
    pub target_hw: u64,
    /// Report CSV (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum BenchCmd {
    /// Seeded Monte Carlo search.
    Mcs(McsArgs),
    /// Monte Carlo search against the exhaustive graph search.
    Compare(McsArgs),
}
