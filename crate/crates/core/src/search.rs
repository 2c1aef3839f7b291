//! Seeded Monte Carlo search baseline and its comparison with the
//! deterministic graph search.
//!
//! A playout is a random walk from the start node that picks uniformly
//! among unvisited successors until it gets stuck, reaches the goal (when
//! one is given) or hits the depth limit. Each playout draws from its own
//! ChaCha stream selected by `(seed, playout index)`, so reports do not
//! depend on how playouts are scheduled.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::graph::{
    find_best_walks, find_optimal_paths_counted, DiffGraph, DiffNode, Edge, NodeId, PathResult,
};

pub const REPORT_VERSION_LINE: &str = "# diffgraph search report v1";
pub const REPORT_HEADER: &str = "method,seed,playouts,best_hops,best_total_dp,expansions,elapsed_ms";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct McsConfig {
    pub playouts: usize,
    /// A walk whose summed weight is at most this counts as reaching the
    /// target; the first such playout is recorded in the report.
    pub target_hw: u64,
    pub seed: u64,
    pub max_depth: usize,
}

impl Default for McsConfig {
    fn default() -> Self {
        McsConfig {
            playouts: 1000,
            target_hw: 0,
            seed: 0,
            max_depth: 8,
        }
    }
}

impl McsConfig {
    pub fn validate(&self) -> Result<()> {
        if self.playouts == 0 {
            return Err(Error::param("playouts must be at least 1"));
        }
        if self.max_depth == 0 {
            return Err(Error::param("max_depth must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    MonteCarlo,
    GraphGuided,
}

impl Method {
    pub fn tag(self) -> &'static str {
        match self {
            Method::MonteCarlo => "mcs",
            Method::GraphGuided => "graph",
        }
    }
}

/// Summary of one playout.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Walk {
    pub hops: usize,
    pub total_hw: u64,
    /// The walk is a candidate path (it moved, and reached the goal if one
    /// was set).
    pub candidate: bool,
}

#[derive(Clone, Debug)]
pub struct SearchReport {
    pub method: Method,
    pub seed: Option<u64>,
    pub playouts: usize,
    /// Empty when nothing was found.
    pub best_path: PathResult,
    /// Nodes visited by all playouts, or partial paths extended by the
    /// exhaustive search.
    pub expansions: u64,
    pub elapsed: Duration,
    /// Best path after each playout.
    pub trace: Vec<PathResult>,
    pub walks: Vec<Walk>,
    /// Index of the first playout whose candidate met `target_hw`.
    pub target_reached_at: Option<usize>,
}

/// Equality of everything but wall time.
impl PartialEq for SearchReport {
    fn eq(&self, other: &Self) -> bool {
        self.method == other.method
            && self.seed == other.seed
            && self.playouts == other.playouts
            && self.best_path == other.best_path
            && self.expansions == other.expansions
            && self.trace == other.trace
            && self.walks == other.walks
            && self.target_reached_at == other.target_reached_at
    }
}

impl SearchReport {
    /// Share of playouts whose candidate walk has summed weight `<= hw`.
    pub fn fraction_with_hw_at_most(&self, hw: u64) -> f64 {
        if self.walks.is_empty() {
            return 0.0;
        }
        let hits = self.walks.iter().filter(|w| w.candidate && w.total_hw <= hw).count();
        hits as f64 / self.walks.len() as f64
    }

    pub fn csv_row(&self) -> String {
        let seed = self.seed.map(|s| s.to_string()).unwrap_or_default();
        let playouts = match self.method {
            Method::MonteCarlo => self.playouts.to_string(),
            Method::GraphGuided => String::new(),
        };
        let (hops, dp) = if self.best_path.is_empty() {
            (String::new(), String::new())
        } else {
            (self.best_path.hops.to_string(), self.best_path.total_dp.to_string())
        };
        format!(
            "{},{seed},{playouts},{hops},{dp},{},{:.3}",
            self.method.tag(),
            self.expansions,
            self.elapsed.as_secs_f64() * 1e3
        )
    }
}

/// Versioned CSV document with one row per report.
pub fn reports_to_csv(reports: &[&SearchReport]) -> String {
    let mut s = format!("{REPORT_VERSION_LINE}\n{REPORT_HEADER}\n");
    for r in reports {
        let _ = writeln!(s, "{}", r.csv_row());
    }
    s
}

/// Goal-free search: every maximal walk from `start` is a candidate.
pub fn mcs_search(graph: &DiffGraph, start: NodeId, config: &McsConfig) -> Result<SearchReport> {
    mcs_search_with(graph, start, None, config, Exec::Parallel)
}

/// Only walks that reach `goal` are candidates; they stop there.
pub fn mcs_search_to(
    graph: &DiffGraph,
    start: NodeId,
    goal: NodeId,
    config: &McsConfig,
) -> Result<SearchReport> {
    mcs_search_with(graph, start, Some(goal), config, Exec::Parallel)
}

pub fn mcs_search_with(
    graph: &DiffGraph,
    start: NodeId,
    goal: Option<NodeId>,
    config: &McsConfig,
    exec: Exec,
) -> Result<SearchReport> {
    config.validate()?;
    if !graph.contains(start) {
        return Err(Error::UnknownNode(start));
    }
    if let Some(g) = goal {
        if !graph.contains(g) {
            return Err(Error::UnknownNode(g));
        }
    }
    let timer = Instant::now();
    let runs = exec::map_range(exec, config.playouts, |i| playout(graph, start, goal, config, i as u64));

    let mut best = PathResult::empty();
    let mut trace = Vec::with_capacity(runs.len());
    let mut walks = Vec::with_capacity(runs.len());
    let mut expansions = 0u64;
    let mut target_reached_at = None;
    for (i, (path, walk)) in runs.into_iter().enumerate() {
        expansions += walk.hops as u64 + 1;
        if walk.candidate {
            if target_reached_at.is_none() && walk.total_hw <= config.target_hw {
                target_reached_at = Some(i);
            }
            if path < best {
                best = path;
            }
        }
        trace.push(best.clone());
        walks.push(walk);
    }
    Ok(SearchReport {
        method: Method::MonteCarlo,
        seed: Some(config.seed),
        playouts: config.playouts,
        best_path: best,
        expansions,
        elapsed: timer.elapsed(),
        trace,
        walks,
        target_reached_at,
    })
}

fn playout(
    graph: &DiffGraph,
    start: NodeId,
    goal: Option<NodeId>,
    config: &McsConfig,
    index: u64,
) -> (PathResult, Walk) {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(index);
    let mut path = vec![start];
    let mut reached = goal == Some(start);
    while !reached && path.len() - 1 < config.max_depth {
        let here = *path.last().expect("non-empty");
        let open: Vec<NodeId> = graph.successors(here).filter(|v| !path.contains(v)).collect();
        if open.is_empty() {
            break;
        }
        let next = open[rng.gen_range(0..open.len())];
        path.push(next);
        reached = goal == Some(next);
    }
    let candidate = match goal {
        Some(_) => reached,
        None => path.len() > 1,
    };
    let mut result = PathResult::empty();
    let mut total_hw = 0;
    for &id in &path {
        total_hw += graph.node(id).expect("walk stays in graph").hw as u64;
    }
    if candidate {
        result = path_result(graph, &path);
    }
    (
        result,
        Walk {
            hops: path.len() - 1,
            total_hw,
            candidate,
        },
    )
}

fn path_result(graph: &DiffGraph, ids: &[NodeId]) -> PathResult {
    let mut out = PathResult::empty();
    for &id in ids {
        let hw = graph.node(id).expect("walk stays in graph").hw;
        out.total_dp = out.total_dp.add_hw(hw);
        out.total_hw += hw as u64;
        out.nodes.push(id);
    }
    out.hops = ids.len().saturating_sub(1);
    out
}

/// Exhaustive search over the same candidate set a playout draws from.
pub fn guided_search(
    graph: &DiffGraph,
    start: NodeId,
    goal: Option<NodeId>,
    max_depth: usize,
) -> Result<SearchReport> {
    let timer = Instant::now();
    let search = match goal {
        Some(g) => find_optimal_paths_counted(graph, start, g, max_depth.max(1), 1)?,
        None => find_best_walks(graph, start, max_depth, 1)?,
    };
    let best_path = search.paths.into_iter().next().unwrap_or_else(PathResult::empty);
    Ok(SearchReport {
        method: Method::GraphGuided,
        seed: None,
        playouts: 0,
        best_path: best_path.clone(),
        expansions: search.expansions,
        elapsed: timer.elapsed(),
        trace: vec![best_path],
        walks: Vec::new(),
        target_reached_at: None,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub mcs: SearchReport,
    pub guided: SearchReport,
}

impl Comparison {
    /// The exhaustive result ranks at least as well as the sampled one.
    pub fn guided_dominates(&self) -> bool {
        self.guided.best_path.dominates(&self.mcs.best_path)
    }
}

/// Runs both methods on identical inputs.
pub fn compare(
    graph: &DiffGraph,
    start: NodeId,
    goal: Option<NodeId>,
    config: &McsConfig,
) -> Result<Comparison> {
    let mcs = mcs_search_with(graph, start, goal, config, Exec::Parallel)?;
    let guided = guided_search(graph, start, goal, config.max_depth)?;
    Ok(Comparison { mcs, guided })
}

pub const TREE_DEPTH: usize = 2;
pub const TREE_LEAVES: usize = 4;

/// Binary search tree for the random-descent baseline, at n = 16:
///
/// ```text
///              0 (hw 0)
///            /          \
///      1 (hw 0)        2 (hw 1)
///      /      \        /      \
///  3 (hw 0) 4 (hw 1) 5 (hw 1) 6 (hw 2)
/// ```
///
/// Root-to-leaf weights are 0, 1, 2 and 3, so a uniform descent ends with
/// total weight at most 1 exactly half the time. The lightest path
/// `0-1-3` also has the largest probability sum.
pub fn tree_fixture() -> DiffGraph {
    let node = |id, a, b, c, hw| DiffNode { id, a, b, c, hw };
    let nodes = vec![
        node(0, 0, 0, 0, 0),
        node(1, 0x8000, 0x8000, 0, 0),
        node(2, 1, 1, 0, 1),
        node(3, 0x8000, 0, 0x8000, 0),
        node(4, 2, 2, 0, 1),
        node(5, 4, 4, 0, 1),
        node(6, 3, 3, 0, 2),
    ];
    let e = |src, dst| Edge { src, dst, label: "BRANCH".to_string() };
    let edges = vec![e(0, 1), e(0, 2), e(1, 3), e(1, 4), e(2, 5), e(2, 6)];
    DiffGraph::from_parts(16, true, nodes, edges).expect("valid fixture")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diff::differential_weight;
    use crate::graph::fixtures;

    fn cfg(playouts: usize, seed: u64) -> McsConfig {
        McsConfig { playouts, target_hw: 1, seed, max_depth: 8 }
    }

    #[test]
    fn tree_structure() {
        let g = tree_fixture();
        for n in g.nodes() {
            assert_eq!(differential_weight(n.a, n.b, n.c, 16).unwrap(), n.hw);
        }
        let leaves: Vec<_> = g.nodes().iter().filter(|n| g.successors(n.id).count() == 0).collect();
        assert_eq!(leaves.len(), TREE_LEAVES);
        let walks = find_best_walks(&g, 0, 10, 100).unwrap().paths;
        assert_eq!(walks.len(), TREE_LEAVES);
        assert!(walks.iter().all(|w| w.hops == TREE_DEPTH));
        let light = walks.iter().filter(|w| w.total_hw <= 1).count();
        assert_eq!(2 * light, walks.len());
        let lightest = walks.iter().min_by_key(|w| w.total_hw).unwrap();
        assert_eq!(lightest, &walks[0]);
    }

    #[test]
    fn single_node_graph() {
        let g = DiffGraph::from_parts(4, true, vec![DiffNode { id: 0, a: 0, b: 0, c: 0, hw: 0 }], vec![]).unwrap();
        let r = mcs_search(&g, 0, &cfg(5, 1)).unwrap();
        assert!(r.best_path.is_empty());
        assert_eq!(r.walks.len(), 5);
        assert!(mcs_search(&g, 3, &cfg(5, 1)).is_err());
    }

    #[test]
    fn reproducible_and_schedule_independent() {
        let g = tree_fixture();
        let a = mcs_search(&g, 0, &cfg(300, 17)).unwrap();
        let b = mcs_search(&g, 0, &cfg(300, 17)).unwrap();
        let c = mcs_search_with(&g, 0, None, &cfg(300, 17), Exec::Sequential).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        let d = mcs_search(&g, 0, &cfg(300, 18)).unwrap();
        assert_ne!(a.walks, d.walks);
    }

    #[test]
    fn trace_is_monotone() {
        let g = tree_fixture();
        let r = mcs_search(&g, 0, &cfg(200, 3)).unwrap();
        assert!(r.trace.windows(2).all(|w| w[1] <= w[0]));
        assert_eq!(r.trace.last().unwrap(), &r.best_path);
        assert!(r.target_reached_at.is_some());
    }

    #[test]
    fn goal_directed_walks_stop_at_goal() {
        let g = fixtures::diamond();
        let r = mcs_search_to(&g, 0, 3, &cfg(50, 5)).unwrap();
        assert!(r.walks.iter().all(|w| w.candidate && w.hops == 2));
        assert_eq!(r.best_path.nodes, vec![0, 2, 3]);
    }

    #[test]
    fn compare_small_fixtures() {
        let g = fixtures::diamond();
        let c = compare(&g, 0, Some(3), &cfg(100, 1)).unwrap();
        assert!(c.guided_dominates());
        assert_eq!(c.guided.best_path, c.mcs.best_path);
        assert!(c.guided.expansions <= c.mcs.expansions);

        let empty = DiffGraph::from_parts(
            4,
            true,
            vec![
                DiffNode { id: 0, a: 0, b: 0, c: 0, hw: 0 },
                DiffNode { id: 1, a: 1, b: 1, c: 0, hw: 1 },
            ],
            vec![],
        )
        .unwrap();
        let c = compare(&empty, 0, Some(1), &cfg(10, 1)).unwrap();
        assert!(c.mcs.best_path.is_empty() && c.guided.best_path.is_empty());
        let c = compare(&empty, 0, None, &cfg(10, 1)).unwrap();
        assert!(c.mcs.best_path.is_empty() && c.guided.best_path.is_empty());
    }

    #[test]
    fn report_csv() {
        let g = fixtures::diamond();
        let c = compare(&g, 0, Some(3), &cfg(10, 9)).unwrap();
        let doc = reports_to_csv(&[&c.mcs, &c.guided]);
        let lines: Vec<&str> = doc.lines().collect();
        assert_eq!(lines[0], REPORT_VERSION_LINE);
        assert_eq!(lines[1], REPORT_HEADER);
        assert!(lines[2].starts_with("mcs,9,10,2,2.5,30,"));
        assert!(lines[3].starts_with("graph,,,2,2.5,"));
    }

    #[test]
    fn config_validation() {
        let g = tree_fixture();
        assert!(mcs_search(&g, 0, &McsConfig { playouts: 0, ..cfg(1, 1) }).is_err());
        assert!(mcs_search(&g, 0, &McsConfig { max_depth: 0, ..cfg(1, 1) }).is_err());
    }
}
