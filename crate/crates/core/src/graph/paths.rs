//! Exhaustive ranked path search.
//!
//! Paths are ranked by fewest hops, then largest summed probability, then
//! lexicographically smallest node-id sequence. The tie-break makes the
//! ranking a total order, so results are fully deterministic.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, VecDeque};

use crate::dyadic::DyadicSum;
use crate::error::{Error, Result};

use super::{DiffGraph, NodeId};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PathResult {
    pub nodes: Vec<NodeId>,
    pub hops: usize,
    /// Sum of node probabilities along the path, exact.
    pub total_dp: DyadicSum,
    /// Sum of node weights along the path.
    pub total_hw: u64,
}

impl PathResult {
    pub fn empty() -> Self {
        PathResult {
            nodes: Vec::new(),
            hops: 0,
            total_dp: DyadicSum::ZERO,
            total_hw: 0,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub(crate) fn from_indices(graph: &DiffGraph, idx: &[usize]) -> Self {
        let mut total_dp = DyadicSum::ZERO;
        let mut total_hw = 0u64;
        let nodes = idx
            .iter()
            .map(|&i| {
                let n = &graph.nodes[i];
                total_dp = total_dp.add_hw(n.hw);
                total_hw += n.hw as u64;
                n.id
            })
            .collect();
        PathResult {
            nodes,
            hops: idx.len().saturating_sub(1),
            total_dp,
            total_hw,
        }
    }

    /// `Less` means `self` ranks ahead of `other`. The empty path ranks
    /// behind every real path.
    pub fn rank_cmp(&self, other: &Self) -> Ordering {
        match (self.is_empty(), other.is_empty()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Greater,
            (false, true) => return Ordering::Less,
            _ => {}
        }
        self.hops
            .cmp(&other.hops)
            .then_with(|| other.total_dp.cmp(&self.total_dp))
            .then_with(|| self.nodes.cmp(&other.nodes))
    }

    /// At least as good as `other` under the ranking.
    pub fn dominates(&self, other: &Self) -> bool {
        self.rank_cmp(other) != Ordering::Greater
    }
}

impl Ord for PathResult {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank_cmp(other)
    }
}

impl PartialOrd for PathResult {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Ranked results plus the amount of work done.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathSearch {
    pub paths: Vec<PathResult>,
    /// Partial paths extended during the search.
    pub expansions: u64,
}

/// Keeps the `limit` best paths seen so far.
struct Best {
    limit: usize,
    heap: BinaryHeap<PathResult>,
}

impl Best {
    fn new(limit: usize) -> Self {
        Best {
            limit,
            heap: BinaryHeap::new(),
        }
    }

    fn offer(&mut self, p: PathResult) {
        if self.limit == 0 {
            return;
        }
        if self.heap.len() < self.limit {
            self.heap.push(p);
        } else if p < *self.heap.peek().expect("non-empty") {
            self.heap.pop();
            self.heap.push(p);
        }
    }

    fn full(&self) -> bool {
        self.heap.len() >= self.limit
    }

    /// Smallest probability sum a new path needs to possibly enter.
    fn worst_dp(&self) -> Option<DyadicSum> {
        if self.full() {
            self.heap.peek().map(|p| p.total_dp)
        } else {
            None
        }
    }

    fn into_sorted(self) -> Vec<PathResult> {
        self.heap.into_sorted_vec()
    }
}

/// Best simple paths from `src` to `dst` with at most `max_hops` hops.
pub fn find_optimal_paths(
    graph: &DiffGraph,
    src: NodeId,
    dst: NodeId,
    max_hops: usize,
    limit: usize,
) -> Result<Vec<PathResult>> {
    find_optimal_paths_counted(graph, src, dst, max_hops, limit).map(|s| s.paths)
}

pub fn find_optimal_paths_counted(
    graph: &DiffGraph,
    src: NodeId,
    dst: NodeId,
    max_hops: usize,
    limit: usize,
) -> Result<PathSearch> {
    let s = graph.index_of(src)?;
    let t = graph.index_of(dst)?;
    if max_hops == 0 {
        return Err(Error::param("max_hops must be at least 1"));
    }
    if s == t {
        let paths = if limit > 0 {
            vec![PathResult::from_indices(graph, &[s])]
        } else {
            vec![]
        };
        return Ok(PathSearch { paths, expansions: 1 });
    }

    let adj = graph.walk_adj();
    let dist = distances_to(adj, t);
    let min_hw = graph.nodes.iter().map(|n| n.hw).min().unwrap_or(0);

    let mut out = Vec::new();
    let mut expansions = 0u64;
    // hops dominate the ranking, so search one path length at a time
    for hops in 1..=max_hops {
        if out.len() >= limit {
            break;
        }
        if dist[s] > hops {
            continue;
        }
        let mut best = Best::new(limit - out.len());
        let mut stack = vec![s];
        let mut on_path = vec![false; adj.len()];
        on_path[s] = true;
        let mut ctx = Dfs {
            graph,
            adj,
            dist: &dist,
            target: t,
            hops,
            min_hw,
            expansions: &mut expansions,
        };
        ctx.run(&mut stack, &mut on_path, DyadicSum::from_hw(graph.nodes[s].hw), &mut best);
        out.extend(best.into_sorted());
    }
    Ok(PathSearch {
        paths: out,
        expansions,
    })
}

struct Dfs<'a> {
    graph: &'a DiffGraph,
    adj: &'a [Vec<usize>],
    dist: &'a [usize],
    target: usize,
    hops: usize,
    min_hw: u32,
    expansions: &'a mut u64,
}

impl Dfs<'_> {
    fn run(&mut self, stack: &mut Vec<usize>, on_path: &mut [bool], sum: DyadicSum, best: &mut Best) {
        *self.expansions += 1;
        let here = *stack.last().expect("non-empty");
        let used = stack.len() - 1;
        if here == self.target {
            if used == self.hops {
                best.offer(PathResult::from_indices(self.graph, stack));
            }
            return;
        }
        let left = self.hops - used;
        if self.dist[here] > left {
            return;
        }
        if let Some(worst) = best.worst_dp() {
            // every remaining node contributes at most the largest probability
            let mut bound = sum;
            for _ in 0..left {
                bound = bound.add_hw(self.min_hw);
            }
            if bound < worst {
                return;
            }
        }
        for &next in &self.adj[here] {
            if on_path[next] {
                continue;
            }
            on_path[next] = true;
            stack.push(next);
            let hw = self.graph.nodes[next].hw;
            self.run(stack, on_path, sum.add_hw(hw), best);
            stack.pop();
            on_path[next] = false;
        }
    }
}

/// Hop distance from every node to `target` along traversal edges.
fn distances_to(adj: &[Vec<usize>], target: usize) -> Vec<usize> {
    let mut rev = vec![Vec::new(); adj.len()];
    for (u, nbrs) in adj.iter().enumerate() {
        for &v in nbrs {
            rev[v].push(u);
        }
    }
    let mut dist = vec![usize::MAX; adj.len()];
    dist[target] = 0;
    let mut queue = VecDeque::from([target]);
    while let Some(v) = queue.pop_front() {
        for &u in &rev[v] {
            if dist[u] == usize::MAX {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        }
    }
    dist
}

/// Best maximal walks from `start`: simple paths that stop at a node with
/// no unvisited successor or after `max_hops` hops. This is the candidate
/// set a goal-free random playout draws from. A start node without
/// successors has no walks.
pub fn find_best_walks(
    graph: &DiffGraph,
    start: NodeId,
    max_hops: usize,
    limit: usize,
) -> Result<PathSearch> {
    let s = graph.index_of(start)?;
    let adj = graph.walk_adj();
    let mut best = Best::new(limit);
    let mut expansions = 0u64;
    let mut stack = vec![s];
    let mut on_path = vec![false; adj.len()];
    on_path[s] = true;
    walk_rec(graph, adj, max_hops, &mut stack, &mut on_path, &mut best, &mut expansions);
    Ok(PathSearch {
        paths: best.into_sorted(),
        expansions,
    })
}

fn walk_rec(
    graph: &DiffGraph,
    adj: &[Vec<usize>],
    max_hops: usize,
    stack: &mut Vec<usize>,
    on_path: &mut [bool],
    best: &mut Best,
    expansions: &mut u64,
) {
    *expansions += 1;
    let here = *stack.last().expect("non-empty");
    let open: Vec<usize> = adj[here].iter().copied().filter(|&v| !on_path[v]).collect();
    if stack.len() - 1 == max_hops || open.is_empty() {
        if stack.len() > 1 {
            best.offer(PathResult::from_indices(graph, stack));
        }
        return;
    }
    for next in open {
        on_path[next] = true;
        stack.push(next);
        walk_rec(graph, adj, max_hops, stack, on_path, best, expansions);
        stack.pop();
        on_path[next] = false;
    }
}
