//! `diffgraph` command-line entry point: build -> sample -> graph -> query
//! -> bench -> export.
//!
//! Exit codes: 0 success, 2 usage error (bad flags, unreadable or invalid
//! input, out-of-domain parameters), 1 runtime failure.

mod args;
mod config;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::Parser;
use diffgraph::graph::{
    self, export_graph, extract_subgraph, find_optimal_paths, fixtures, graph_stats, read_graph_csv,
    DiffGraph, EdgeRule, ExportFormat,
};
use diffgraph::pddt::{
    self, build_pddt, pddt_stats, plan_sample, read_pddt_csv, read_triples_text, sample_pddt, Pddt,
    PddtConfig, SampleSpec,
};
use diffgraph::search::{self, McsConfig};
use diffgraph::dyadic::dp_decimal;

use args::{BenchCmd, Cli, Command, Fixture, GraphCmd, GraphInput, McsArgs, PddtCmd, TableInput};

const THREADS_ENV: &str = "DIFFGRAPH_THREADS";

enum Failure {
    /// Already reported (clap prints its own diagnostics).
    UsageReported,
    Usage(anyhow::Error),
    Runtime(anyhow::Error),
}

impl From<diffgraph::Error> for Failure {
    fn from(e: diffgraph::Error) -> Self {
        use diffgraph::Error::*;
        match e {
            TooManyElements { .. } | Io { .. } => Failure::Runtime(e.into()),
            _ => Failure::Usage(e.into()),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn usage(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Usage(e.into())
}

fn runtime(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Runtime(e.into())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(std::env::args_os().collect()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::UsageReported) => ExitCode::from(2),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(mut argv: Vec<OsString>) -> CmdResult {
    if let Some(path) = config::take_config_arg(&mut argv).map_err(usage)? {
        let flags = config::config_flags(Path::new(&path)).map_err(usage)?;
        config::splice(&mut argv, flags);
    }
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // --help / --version are not failures
            if !e.use_stderr() {
                let _ = e.print();
                return Ok(());
            }
            let _ = e.print();
            return Err(Failure::UsageReported);
        }
    };
    configure_threads()?;
    match cli.command {
        Command::Pddt(cmd) => pddt_cmd(cmd),
        Command::Graph(cmd) => graph_cmd(cmd),
        Command::Bench(cmd) => bench_cmd(cmd),
    }
}

fn configure_threads() -> CmdResult {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .map_err(|_| usage(anyhow!("{THREADS_ENV}={value:?} is not a worker count")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(runtime)
}

fn open(path: &Path) -> Result<BufReader<File>, Failure> {
    File::open(path)
        .map(BufReader::new)
        .with_context(|| format!("cannot read {}", path.display()))
        .map_err(usage)
}

fn write_out(path: Option<&Path>, bytes: &[u8]) -> CmdResult {
    match path {
        Some(p) => std::fs::write(p, bytes)
            .map_err(|e| diffgraph::Error::io(p, e))
            .map_err(Failure::from),
        None => io::stdout().write_all(bytes).context("writing stdout").map_err(runtime),
    }
}

fn with_suffix(stem: &Path, suffix: &str) -> PathBuf {
    let mut s = stem.as_os_str().to_owned();
    s.push(".");
    s.push(suffix);
    PathBuf::from(s)
}

fn load_table(input: &TableInput) -> Result<Pddt, Failure> {
    let reader = open(&input.input)?;
    let table = if input.text {
        let n = input
            .n
            .ok_or_else(|| usage(anyhow!("--text needs --n")))?;
        let entries = read_triples_text(reader, n)?;
        let threshold = entries
            .iter()
            .map(|d| d.dp())
            .fold(1.0, f64::min);
        Pddt::from_entries(PddtConfig::new(n, threshold)?, entries)?
    } else {
        read_pddt_csv(reader, input.n, None)?
    };
    Ok(table)
}

fn pddt_cmd(cmd: PddtCmd) -> CmdResult {
    match cmd {
        PddtCmd::Build { n, threshold, max_elements, out } => {
            let cfg = PddtConfig::new(n, threshold)?.with_max_elements(Some(max_elements));
            let table = build_pddt(&cfg)?;
            log::info!("built {} entries (n = {n}, threshold = {threshold})", table.len());
            write_out(out.as_deref(), &pddt::pddt_to_csv_bytes(&table))
        }
        PddtCmd::Sample { input, fraction, seed, no_quota, out } => {
            let table = load_table(&input)?;
            let spec = SampleSpec { fraction, quota: !no_quota, seed };
            let plan = plan_sample(&table, &spec)?;
            let sample = sample_pddt(&table, &spec)?;
            eprintln!(
                "# seed: {seed}, fraction: {fraction}, quota: {}, sampled {} of {} ({} output classes)",
                spec.quota,
                sample.len(),
                table.len(),
                plan.classes.len()
            );
            write_out(out.as_deref(), &pddt::pddt_to_csv_bytes(&sample))
        }
        PddtCmd::Stats { input } => {
            let table = load_table(&input)?;
            let s = pddt_stats(&table);
            let mut text = format!(
                "word_size: {}\nentries: {}\ndistinct_outputs: {}\n",
                table.config().word_size,
                s.entries,
                s.distinct_outputs
            );
            let fmt = |v: Option<f64>| v.map_or("-".to_string(), |v| v.to_string());
            text += &format!("min_dp: {}\nmax_dp: {}\n", fmt(s.min_dp), fmt(s.max_dp));
            text += "dp,hw,count\n";
            for (hw, count) in &s.by_weight {
                text += &format!("{},{hw},{count}\n", dp_decimal(*hw));
            }
            write_out(None, text.as_bytes())
        }
    }
}

fn load_graph(input: &GraphInput) -> Result<DiffGraph, Failure> {
    if let Some(f) = input.fixture {
        return Ok(match f {
            Fixture::TwoNode => fixtures::two_node(),
            Fixture::Diamond => fixtures::diamond(),
            Fixture::Hub240 => fixtures::hub_fixture(),
            Fixture::Tree => search::tree_fixture(),
        });
    }
    let stem = input.graph.as_deref().expect("clap requires --graph or --fixture");
    let nodes = open(&with_suffix(stem, "nodes.csv"))?;
    let edges = open(&with_suffix(stem, "edges.csv"))?;
    Ok(read_graph_csv(nodes, edges, None, !input.undirected)?)
}

fn graph_cmd(cmd: GraphCmd) -> CmdResult {
    match cmd {
        GraphCmd::Build { input, rule, source, target, no_self_loops, undirected, label, out } => {
            let table = load_table(&input)?;
            let mut rule = EdgeRule::preset(&rule)?;
            if let Some(s) = source {
                rule.source = s.parse()?;
            }
            if let Some(t) = target {
                rule.target = t.parse()?;
            }
            if let Some(l) = label {
                rule.label = l;
            }
            rule.allow_self_loops = !no_self_loops;
            rule.directed = !undirected;
            let g = graph::build_graph(&table, &rule)?;
            eprintln!(
                "# rule: source {} target {} self_loops {} directed {}; {} nodes, {} edges",
                rule.source,
                rule.target,
                rule.allow_self_loops,
                rule.directed,
                g.nodes().len(),
                g.edges().len()
            );
            write_export(&g, ExportFormat::Csv, Some(&out))
        }
        GraphCmd::Stats { input } => {
            let g = load_graph(&input)?;
            let s = graph_stats(&g);
            let mut text = format!(
                "nodes: {}\nedges: {}\nhubs: {:?}\nhub_in_degree: {}\ncomponents: {}\nlargest_components: {:?}\nmean_clustering: {:.6}\n",
                s.nodes,
                s.edges,
                s.hubs,
                s.hub_in_degree,
                s.components.len(),
                &s.components[..s.components.len().min(5)],
                s.mean_clustering
            );
            text += "degree,count\n";
            for (d, c) in &s.degree_distribution {
                text += &format!("{d},{c}\n");
            }
            write_out(None, text.as_bytes())
        }
        GraphCmd::Paths { input, src, dst, max_hops, limit } => {
            let g = load_graph(&input)?;
            let paths = find_optimal_paths(&g, src, dst, max_hops, limit)?;
            let mut text = String::from("rank,hops,total_dp,total_hw,nodes\n");
            for (i, p) in paths.iter().enumerate() {
                let nodes: Vec<String> = p.nodes.iter().map(u64::to_string).collect();
                text += &format!("{},{},{},{},{}\n", i + 1, p.hops, p.total_dp, p.total_hw, nodes.join(" "));
            }
            write_out(None, text.as_bytes())
        }
        GraphCmd::Export { input, format, limit, out } => {
            let format: ExportFormat = format.parse()?;
            let mut g = load_graph(&input)?;
            if let Some(l) = limit {
                g = extract_subgraph(&g, l);
            }
            write_export(&g, format, out.as_deref())
        }
    }
}

fn write_export(g: &DiffGraph, format: ExportFormat, out: Option<&Path>) -> CmdResult {
    let files = export_graph(g, format);
    if files.len() == 1 {
        return write_out(out, &files[0].bytes);
    }
    match out {
        Some(stem) => {
            for f in &files {
                write_out(Some(&with_suffix(stem, f.suffix)), &f.bytes)?;
            }
            Ok(())
        }
        None => {
            for f in &files {
                write_out(None, &f.bytes)?;
            }
            Ok(())
        }
    }
}

fn bench_cmd(cmd: BenchCmd) -> CmdResult {
    let (args, compare) = match cmd {
        BenchCmd::Mcs(a) => (a, false),
        BenchCmd::Compare(a) => (a, true),
    };
    let McsArgs { input, start, dst, playouts, seed, max_depth, target_hw, out } = args;
    let g = load_graph(&input)?;
    let cfg = McsConfig { playouts, target_hw, seed, max_depth };
    let doc = if compare {
        let c = search::compare(&g, start, dst, &cfg)?;
        if !c.guided_dominates() {
            return Err(runtime(anyhow!("exhaustive search ranked below the sampled search")));
        }
        search::reports_to_csv(&[&c.mcs, &c.guided])
    } else {
        let r = search::mcs_search_with(&g, start, dst, &cfg, diffgraph::Exec::Parallel)?;
        search::reports_to_csv(&[&r])
    };
    write_out(out.as_deref(), doc.as_bytes())
}
