//! Small reference graphs used by the tests, the benches and the CLI.

use crate::diff::Differential;
use crate::pddt::{Pddt, PddtConfig};

use super::{build_graph, DiffGraph, DiffNode, Edge, EdgeRule, OUTPUT_WEIGHT};

pub const HUB_FIXTURE_NODES: usize = 240;
pub const HUB_FIXTURE_HUBS: usize = 4;
pub const HUB_FIXTURE_WORD_SIZE: u32 = 16;

/// The sampled table behind [`hub_fixture`]: 240 differentials `(x, x -> 0)`
/// at n = 16. Four have probability 1/2 (`x` = 1, 2, 4, 8); the other 236
/// are the smallest `x < 2^15` with two or three set bits (probability 1/4
/// or 1/8). No entry has probability 1.
pub fn hub_fixture_table() -> Pddt {
    let n = HUB_FIXTURE_WORD_SIZE;
    let mut entries: Vec<Differential> = [1u64, 2, 4, 8]
        .iter()
        .map(|&x| Differential::new(x, x, 0, n).expect("valid"))
        .collect();
    entries.extend(
        (1u64..1 << 15)
            .filter(|x| (2..=3).contains(&x.count_ones()))
            .take(HUB_FIXTURE_NODES - HUB_FIXTURE_HUBS)
            .map(|x| Differential::new(x, x, 0, n).expect("valid")),
    );
    let config = PddtConfig::new(n, 0.125).expect("valid config");
    Pddt::from_entries(config, entries).expect("valid table")
}

/// [`hub_fixture_table`] under the default edge rule: every node is a
/// source, the four probability-1/2 nodes are the targets, giving 960
/// directed edges including the hubs' self-loops.
pub fn hub_fixture() -> DiffGraph {
    build_graph(&hub_fixture_table(), &EdgeRule::default()).expect("valid fixture")
}

/// Two nodes `(0,0 -> 0)` and `(1,1 -> 0)` at n = 4 joined by one edge.
pub fn two_node() -> DiffGraph {
    let nodes = vec![
        DiffNode { id: 0, a: 0, b: 0, c: 0, hw: 0 },
        DiffNode { id: 1, a: 1, b: 1, c: 0, hw: 1 },
    ];
    let edges = vec![Edge { src: 0, dst: 1, label: OUTPUT_WEIGHT.to_string() }];
    DiffGraph::from_parts(4, true, nodes, edges).expect("valid fixture")
}

/// `0 -> {1, 2} -> 3` at n = 8. Node 1 has probability 1/8, node 2 has 1/2.
pub fn diamond() -> DiffGraph {
    let nodes = vec![
        DiffNode { id: 0, a: 0, b: 0, c: 0, hw: 0 },
        DiffNode { id: 1, a: 7, b: 7, c: 0, hw: 3 },
        DiffNode { id: 2, a: 1, b: 1, c: 0, hw: 1 },
        DiffNode { id: 3, a: 0x80, b: 0x80, c: 0, hw: 0 },
    ];
    let e = |src, dst| Edge { src, dst, label: OUTPUT_WEIGHT.to_string() };
    let edges = vec![e(0, 1), e(0, 2), e(1, 3), e(2, 3)];
    DiffGraph::from_parts(8, true, nodes, edges).expect("valid fixture")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diff::differential_weight;

    #[test]
    fn fixture_nodes_are_real_differentials() {
        for g in [two_node(), diamond(), hub_fixture()] {
            for n in g.nodes() {
                assert_eq!(differential_weight(n.a, n.b, n.c, g.word_size()).unwrap(), n.hw);
            }
        }
    }

    #[test]
    fn hub_table_shape() {
        let t = hub_fixture_table();
        assert_eq!(t.len(), HUB_FIXTURE_NODES);
        assert_eq!(t.entries().iter().filter(|d| d.hw == 1).count(), HUB_FIXTURE_HUBS);
        assert!(t.entries().iter().all(|d| d.hw >= 1 && d.c == 0));
    }
}
