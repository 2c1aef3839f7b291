//! The differential knowledge graph: nodes are sampled table entries, edges
//! are produced by an [`EdgeRule`] over every (source, target) node pair.

use std::collections::{BTreeMap, HashMap, HashSet};

use crate::diff::Differential;
use crate::dyadic::dp_from_hw;
use crate::error::{Error, Result};
use crate::pddt::Pddt;
use crate::simon::word_mask;

mod export;
pub mod fixtures;
mod paths;
mod rule;

pub use export::{
    export_graph, graph_to_csv, read_graph_csv, ExportFile, ExportFormat, EDGES_CSV_HEADER,
    NODES_CSV_HEADER,
};
pub use paths::{find_best_walks, find_optimal_paths, find_optimal_paths_counted, PathResult, PathSearch};
pub use rule::{CmpOp, EdgeRule, Field, Predicate, Value, OUTPUT_WEIGHT};

pub type NodeId = u64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DiffNode {
    pub id: NodeId,
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub hw: u32,
}

impl DiffNode {
    pub fn from_differential(id: NodeId, d: &Differential) -> Self {
        DiffNode {
            id,
            a: d.a,
            b: d.b,
            c: d.c,
            hw: d.hw,
        }
    }

    /// Probability of the differential; shown as the node "weight".
    pub fn dp(&self) -> f64 {
        dp_from_hw(self.hw)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub src: NodeId,
    pub dst: NodeId,
    pub label: String,
}

/// Immutable graph. Nodes are kept sorted by id and edges by
/// `(src, dst, label)`.
#[derive(Clone, Debug)]
pub struct DiffGraph {
    word_size: u32,
    directed: bool,
    nodes: Vec<DiffNode>,
    edges: Vec<Edge>,
    index: HashMap<NodeId, usize>,
    in_degree: Vec<usize>,
    out_degree: Vec<usize>,
    /// Neighbours used for path traversal, as node indices, ascending and
    /// without self-loops. Both directions when the graph is undirected.
    walk: Vec<Vec<usize>>,
}

impl PartialEq for DiffGraph {
    fn eq(&self, other: &Self) -> bool {
        self.word_size == other.word_size
            && self.directed == other.directed
            && self.nodes == other.nodes
            && self.edges == other.edges
    }
}

impl DiffGraph {
    pub fn from_parts(
        word_size: u32,
        directed: bool,
        mut nodes: Vec<DiffNode>,
        mut edges: Vec<Edge>,
    ) -> Result<Self> {
        if !(1..=64).contains(&word_size) {
            return Err(Error::param(format!("word size {word_size} outside 1..=64")));
        }
        nodes.sort_unstable_by_key(|n| n.id);
        let mut triples = HashSet::with_capacity(nodes.len());
        let mut index = HashMap::with_capacity(nodes.len());
        for (i, n) in nodes.iter().enumerate() {
            if (n.a | n.b | n.c) & !word_mask(word_size) != 0 {
                return Err(Error::param(format!("node {} has words wider than {word_size} bits", n.id)));
            }
            if index.insert(n.id, i).is_some() {
                return Err(Error::param(format!("duplicate node id {}", n.id)));
            }
            if !triples.insert((n.a, n.b, n.c)) {
                return Err(Error::param(format!(
                    "differential ({:#x}, {:#x} -> {:#x}) appears twice",
                    n.a, n.b, n.c
                )));
            }
        }
        edges.sort_unstable();
        let mut in_degree = vec![0; nodes.len()];
        let mut out_degree = vec![0; nodes.len()];
        let mut walk = vec![Vec::new(); nodes.len()];
        for e in &edges {
            if e.label.is_empty() || !e.label.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(Error::param(format!("bad relationship label {:?}", e.label)));
            }
            let s = *index.get(&e.src).ok_or(Error::UnknownNode(e.src))?;
            let d = *index.get(&e.dst).ok_or(Error::UnknownNode(e.dst))?;
            out_degree[s] += 1;
            in_degree[d] += 1;
            if s != d {
                walk[s].push(d);
                if !directed {
                    walk[d].push(s);
                }
            }
        }
        for w in &mut walk {
            w.sort_unstable();
            w.dedup();
        }
        Ok(DiffGraph {
            word_size,
            directed,
            nodes,
            edges,
            index,
            in_degree,
            out_degree,
            walk,
        })
    }

    pub fn word_size(&self) -> u32 {
        self.word_size
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn nodes(&self) -> &[DiffNode] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node(&self, id: NodeId) -> Option<&DiffNode> {
        self.index.get(&id).map(|&i| &self.nodes[i])
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.index.contains_key(&id)
    }

    pub fn in_degree(&self, id: NodeId) -> Option<usize> {
        self.index.get(&id).map(|&i| self.in_degree[i])
    }

    pub fn out_degree(&self, id: NodeId) -> Option<usize> {
        self.index.get(&id).map(|&i| self.out_degree[i])
    }

    /// Traversal successors of `id` (ascending id, self excluded).
    pub fn successors(&self, id: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        let i = self.index.get(&id).copied();
        i.into_iter()
            .flat_map(move |i| self.walk[i].iter().map(move |&j| self.nodes[j].id))
    }

    pub(crate) fn index_of(&self, id: NodeId) -> Result<usize> {
        self.index.get(&id).copied().ok_or(Error::UnknownNode(id))
    }

    pub(crate) fn walk_adj(&self) -> &[Vec<usize>] {
        &self.walk
    }
}

/// Nodes are the table entries (id = row index); edges join every node
/// matching the source predicate to every node matching the target
/// predicate.
pub fn build_graph(sample: &Pddt, rule: &EdgeRule) -> Result<DiffGraph> {
    if sample.is_empty() {
        return Err(Error::param("cannot build a graph from an empty sample"));
    }
    let nodes = sample
        .entries()
        .iter()
        .enumerate()
        .map(|(i, d)| DiffNode::from_differential(i as NodeId, d))
        .collect();
    build_graph_from_nodes(sample.config().word_size, nodes, rule)
}

pub fn build_graph_from_nodes(word_size: u32, nodes: Vec<DiffNode>, rule: &EdgeRule) -> Result<DiffGraph> {
    rule.validate()?;
    let mut sorted = nodes;
    sorted.sort_unstable_by_key(|n| n.id);
    let sources: Vec<NodeId> = sorted.iter().filter(|n| rule.source.matches(n)).map(|n| n.id).collect();
    let targets: Vec<NodeId> = sorted.iter().filter(|n| rule.target.matches(n)).map(|n| n.id).collect();
    let mut edges = Vec::with_capacity(sources.len() * targets.len());
    for &s in &sources {
        for &t in &targets {
            if s == t && !rule.allow_self_loops {
                continue;
            }
            edges.push(Edge {
                src: s,
                dst: t,
                label: rule.label.clone(),
            });
        }
    }
    DiffGraph::from_parts(word_size, rule.directed, sorted, edges)
}

/// The first `limit` edges in `(src, dst)` order together with their
/// endpoints. A limit covering every edge returns the graph unchanged.
pub fn extract_subgraph(graph: &DiffGraph, limit: usize) -> DiffGraph {
    if limit >= graph.edges.len() {
        return graph.clone();
    }
    let edges: Vec<Edge> = graph.edges[..limit].to_vec();
    let keep: HashSet<NodeId> = edges.iter().flat_map(|e| [e.src, e.dst]).collect();
    let nodes = graph.nodes.iter().filter(|n| keep.contains(&n.id)).copied().collect();
    DiffGraph::from_parts(graph.word_size, graph.directed, nodes, edges)
        .expect("a subset of a valid graph is valid")
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct GraphStats {
    pub nodes: usize,
    pub edges: usize,
    /// Number of nodes per total (in + out) degree.
    pub degree_distribution: BTreeMap<usize, usize>,
    /// Nodes with the largest in-degree, ascending id. Empty when no node
    /// has an incoming edge.
    pub hubs: Vec<NodeId>,
    pub hub_in_degree: usize,
    /// Weakly connected component sizes, largest first.
    pub components: Vec<usize>,
    /// Local clustering coefficient of every node on the underlying simple
    /// undirected graph, ascending id.
    pub clustering: Vec<(NodeId, f64)>,
    pub mean_clustering: f64,
}

pub fn graph_stats(graph: &DiffGraph) -> GraphStats {
    let n = graph.nodes.len();
    let mut stats = GraphStats {
        nodes: n,
        edges: graph.edges.len(),
        ..Default::default()
    };
    if n == 0 {
        return stats;
    }
    for i in 0..n {
        *stats
            .degree_distribution
            .entry(graph.in_degree[i] + graph.out_degree[i])
            .or_default() += 1;
    }
    let max_in = graph.in_degree.iter().copied().max().unwrap_or(0);
    if max_in > 0 {
        stats.hub_in_degree = max_in;
        stats.hubs = (0..n)
            .filter(|&i| graph.in_degree[i] == max_in)
            .map(|i| graph.nodes[i].id)
            .collect();
    }

    // simple undirected view
    let mut undirected: Vec<Vec<usize>> = vec![Vec::new(); n];
    for e in &graph.edges {
        let (s, d) = (graph.index[&e.src], graph.index[&e.dst]);
        if s != d {
            undirected[s].push(d);
            undirected[d].push(s);
        }
    }
    for u in &mut undirected {
        u.sort_unstable();
        u.dedup();
    }

    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (u, nbrs) in undirected.iter().enumerate() {
        for &v in nbrs {
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru != rv {
                parent[ru.max(rv)] = ru.min(rv);
            }
        }
    }
    let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
    for u in 0..n {
        *sizes.entry(find(&mut parent, u)).or_default() += 1;
    }
    stats.components = sizes.into_values().collect();
    stats.components.sort_unstable_by(|a, b| b.cmp(a));

    let mut sum = 0.0;
    for (u, nbrs) in undirected.iter().enumerate() {
        let k = nbrs.len();
        let coeff = if k < 2 {
            0.0
        } else {
            let mut links = 0usize;
            for (i, &v) in nbrs.iter().enumerate() {
                for &w in &nbrs[i + 1..] {
                    if undirected[v].binary_search(&w).is_ok() {
                        links += 1;
                    }
                }
            }
            2.0 * links as f64 / (k * (k - 1)) as f64
        };
        sum += coeff;
        stats.clustering.push((graph.nodes[u].id, coeff));
    }
    stats.mean_clustering = sum / n as f64;
    stats
}
