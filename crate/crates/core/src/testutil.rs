use alloc::vec::Vec;

use crate::graph::AttributedGraph;

/// Graph on `n` vertices from a flat edge-flag list and cost list over the
/// pairs `i < j` in lexicographic order.
pub fn graph_from_parts(n: usize, edge_flags: &[bool], costs: &[i64]) -> AttributedGraph {
    let mut edges = Vec::new();
    let mut pc = Vec::new();
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            if edge_flags[k] {
                edges.push((i, j));
            }
            pc.push((i, j, costs[k]));
            k += 1;
        }
    }
    AttributedGraph::from_pair_costs(n, &edges, &pc).unwrap()
}

/// Minimum objective over all partitions into connected blocks, by
/// restricted-growth enumeration of every set partition.
pub fn brute_force_optimum(g: &AttributedGraph) -> i64 {
    fn go(g: &AttributedGraph, v: usize, labels: &mut Vec<usize>, blocks: usize, best: &mut i64) {
        let n = g.n();
        if v == n {
            let mut total = 0;
            for b in 0..blocks {
                let members: Vec<usize> = (0..n).filter(|&u| labels[u] == b).collect();
                if !g.connected_unchecked(&members) {
                    return;
                }
                total += g.cost_unchecked(&members);
            }
            *best = (*best).min(total);
            return;
        }
        for b in 0..=blocks {
            labels[v] = b;
            go(g, v + 1, labels, blocks.max(b + 1), best);
        }
    }
    let mut best = i64::MAX;
    go(g, 0, &mut alloc::vec![0; g.n()], 0, &mut best);
    best
}
