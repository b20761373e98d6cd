//! Reference computations written directly from the problem definition,
//! sharing no code with the solvers.

#![allow(dead_code)]

use gccp_core::AttributedGraph;

/// Breadth-first search restricted to `members`.
pub fn connected(g: &AttributedGraph, members: &[usize]) -> bool {
    if members.is_empty() {
        return false;
    }
    let mut seen = vec![members[0]];
    let mut k = 0;
    while k < seen.len() {
        let u = seen[k];
        for &v in members {
            if !seen.contains(&v) && g.has_edge(u, v) {
                seen.push(v);
            }
        }
        k += 1;
    }
    seen.len() == members.len()
}

pub fn block_cost(g: &AttributedGraph, members: &[usize]) -> i64 {
    let mut total = 0;
    for (a, &u) in members.iter().enumerate() {
        for &v in &members[a + 1..] {
            total += g.cost(u, v);
        }
    }
    total
}

/// Minimum objective over all partitions into connected blocks, by
/// enumerating restricted growth strings.
pub fn brute_force_partition(g: &AttributedGraph) -> i64 {
    fn rec(g: &AttributedGraph, i: usize, used: usize, labels: &mut Vec<usize>, best: &mut i64) {
        let n = g.n();
        if i == n {
            let mut total = 0;
            for b in 0..used {
                let block: Vec<usize> = (0..n).filter(|&v| labels[v] == b).collect();
                if !connected(g, &block) {
                    return;
                }
                total += block_cost(g, &block);
            }
            *best = (*best).min(total);
            return;
        }
        for b in 0..=used {
            labels[i] = b;
            rec(g, i + 1, used.max(b + 1), labels, best);
        }
    }
    let mut best = i64::MAX;
    rec(g, 0, 0, &mut vec![0; g.n()], &mut best);
    best
}

fn mask_members(mask: u64, n: usize) -> Vec<usize> {
    (0..n).filter(|&v| mask >> v & 1 == 1).collect()
}

/// Every nonempty connected vertex subset, as a member list.
pub fn connected_subsets(g: &AttributedGraph) -> Vec<Vec<usize>> {
    let n = g.n();
    assert!(n <= 20);
    (1u64..1 << n)
        .map(|m| mask_members(m, n))
        .filter(|s| connected(g, s))
        .collect()
}

/// `min(0, min over connected S of c_S - sum_{i in S} gamma_i)`.
pub fn min_reduced_cost(g: &AttributedGraph, gamma: &[f64]) -> f64 {
    connected_subsets(g)
        .iter()
        .map(|s| block_cost(g, s) as f64 - s.iter().map(|&i| gamma[i]).sum::<f64>())
        .fold(0.0, f64::min)
}

/// Checks exact cover and connectivity and returns the recomputed objective.
pub fn check_partition(g: &AttributedGraph, blocks: &[Vec<usize>]) -> Result<i64, String> {
    let mut count = vec![0; g.n()];
    let mut total = 0;
    for b in blocks {
        for &v in b {
            if v >= g.n() {
                return Err(format!("vertex {v} out of range"));
            }
            count[v] += 1;
        }
        if !connected(g, b) {
            return Err(format!("block {b:?} is not connected"));
        }
        total += block_cost(g, b);
    }
    if let Some(v) = count.iter().position(|&c| c != 1) {
        return Err(format!("vertex {v} covered {} times", count[v]));
    }
    Ok(total)
}
