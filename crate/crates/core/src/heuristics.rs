//! Shrink contraction and the multi-start Random Shrink heuristic.
//!
//! A [`ShrinkState`] is a contracted graph whose nodes (aggregates) are
//! connected vertex sets of the original graph. Shrinking an edge merges its
//! two aggregates and accumulates their costs. Random Shrink alternates a few
//! weighted random shrinks with a greedy descent and keeps the best local
//! optimum; the same machinery, with node weights `-gamma_i`, serves as a
//! heuristic pricer.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::clock::{Clock, Deadline};
use crate::graph::{evaluate_partition, AttributedGraph, Cost, Partition, VertexSet};
use crate::pricing::{Harvest, PricingError, PricingInput, PricingResult};
use crate::EPS_FEAS;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ShrinkError {
    #[error("({0}, {1}) is not an active edge")]
    NotAnEdge(usize, usize),
}

/// Whether the state scores a whole partition (sum of clique costs) or the
/// single best aggregate (minimum clique cost).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShrinkMode {
    Partition,
    Pricing,
}

/// Contracted graph `<V^h, E^h, c^h, pi^h>`. Aggregates are indexed by the
/// original vertex that represents them.
#[derive(Clone, Debug)]
pub struct ShrinkState {
    n: usize,
    mode: ShrinkMode,
    active: Vec<bool>,
    members: Vec<Vec<usize>>,
    nbrs: Vec<Vec<usize>>,
    /// Merged pair costs, `n x n`, meaningful between active aggregates.
    c: Vec<Cost>,
    /// Internal pair cost of each aggregate.
    clique: Vec<Cost>,
    /// Node weight of each aggregate (zero in partition mode).
    weight: Vec<f64>,
    /// Aggregate pairs that must not be merged (pricing mode, from apart
    /// constraints).
    blocked: Vec<bool>,
    total: Cost,
}

impl ShrinkState {
    /// All singletons, `pi = 0`, `f = 0`.
    pub fn new(graph: &AttributedGraph) -> Self {
        Self::build(graph, ShrinkMode::Partition, vec![0.0; graph.n()], &[])
    }

    /// Pricing-mode start: singleton `i` carries `pi_i = -gamma_i`, and no
    /// shrink may join the two ends of an `apart` pair.
    pub fn new_pricing(graph: &AttributedGraph, gamma: &[f64], apart: &[(usize, usize)]) -> Self {
        let weight = gamma.iter().map(|g| -g).collect();
        Self::build(graph, ShrinkMode::Pricing, weight, apart)
    }

    fn build(graph: &AttributedGraph, mode: ShrinkMode, weight: Vec<f64>, apart: &[(usize, usize)]) -> Self {
        let n = graph.n();
        let mut c = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    c[i * n + j] = graph.cost(i, j);
                }
            }
        }
        let mut blocked = vec![false; n * n];
        for &(a, b) in apart {
            blocked[a * n + b] = true;
            blocked[b * n + a] = true;
        }
        ShrinkState {
            n,
            mode,
            active: vec![true; n],
            members: (0..n).map(|v| vec![v]).collect(),
            nbrs: (0..n).map(|v| graph.neighbors(v).to_vec()).collect(),
            c,
            clique: vec![0; n],
            weight,
            blocked,
            total: 0,
        }
    }

    pub fn mode(&self) -> ShrinkMode {
        self.mode
    }

    pub fn is_active(&self, i: usize) -> bool {
        self.active[i]
    }

    /// Active aggregates with their original vertices (unsorted).
    pub fn aggregates(&self) -> impl Iterator<Item = (usize, &[usize])> + '_ {
        (0..self.n)
            .filter(|&i| self.active[i])
            .map(|i| (i, self.members[i].as_slice()))
    }

    pub fn num_aggregates(&self) -> usize {
        self.active.iter().filter(|&&a| a).count()
    }

    /// Merged cost between two active aggregates.
    pub fn pair_cost(&self, i: usize, j: usize) -> Cost {
        self.c[i * self.n + j]
    }

    /// `pi_i`: internal cost plus node weight.
    pub fn pi(&self, i: usize) -> f64 {
        self.clique[i] as f64 + self.weight[i]
    }

    /// Internal pair cost of aggregate `i`.
    pub fn clique_cost(&self, i: usize) -> Cost {
        self.clique[i]
    }

    /// Sum of the internal costs of all aggregates.
    pub fn partition_cost(&self) -> Cost {
        self.total
    }

    /// `f(V^h)`: the sum of `pi` in partition mode, the minimum `pi` in
    /// pricing mode.
    pub fn objective(&self) -> f64 {
        match self.mode {
            ShrinkMode::Partition => self.total as f64,
            ShrinkMode::Pricing => (0..self.n)
                .filter(|&i| self.active[i])
                .map(|i| self.pi(i))
                .fold(f64::INFINITY, f64::min),
        }
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && self.active[i] && self.active[j] && self.nbrs[i].contains(&j)
    }

    fn mergeable(&self, i: usize, j: usize) -> bool {
        !self.blocked[i * self.n + j]
    }

    /// Active edges `(i, j)`, `i < j`, that may be shrunk.
    pub fn active_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            if !self.active[i] {
                continue;
            }
            for &j in &self.nbrs[i] {
                if i < j && self.mergeable(i, j) {
                    out.push((i, j));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Cheapest shrinkable edge, ties broken by the smallest `(i, j)`.
    pub fn min_edge(&self) -> Option<(usize, usize, Cost)> {
        let mut best: Option<(usize, usize, Cost)> = None;
        for i in 0..self.n {
            if !self.active[i] {
                continue;
            }
            for &j in &self.nbrs[i] {
                if i >= j || !self.mergeable(i, j) {
                    continue;
                }
                let cost = self.c[i * self.n + j];
                let better = match best {
                    None => true,
                    Some((bi, bj, bc)) => cost < bc || (cost == bc && (i, j) < (bi, bj)),
                };
                if better {
                    best = Some((i, j, cost));
                }
            }
        }
        best
    }

    /// Merges aggregate `j` into aggregate `i`.
    pub fn shrink(&mut self, i: usize, j: usize) -> Result<(), ShrinkError> {
        if i == j || !self.has_edge(i, j) {
            return Err(ShrinkError::NotAnEdge(i, j));
        }
        let n = self.n;
        let cij = self.c[i * n + j];
        self.clique[i] += self.clique[j] + cij;
        self.weight[i] += self.weight[j];
        self.total += cij;
        self.active[j] = false;
        for k in 0..n {
            if self.active[k] && k != i {
                let merged = self.c[i * n + k] + self.c[j * n + k];
                self.c[i * n + k] = merged;
                self.c[k * n + i] = merged;
                let b = self.blocked[i * n + k] || self.blocked[j * n + k];
                self.blocked[i * n + k] = b;
                self.blocked[k * n + i] = b;
            }
        }
        let moved = core::mem::take(&mut self.nbrs[j]);
        for k in moved {
            if k == i {
                continue;
            }
            let list = &mut self.nbrs[k];
            list.retain(|&x| x != j);
            if !list.contains(&i) {
                list.push(i);
            }
            if !self.nbrs[i].contains(&k) {
                self.nbrs[i].push(k);
            }
        }
        self.nbrs[i].retain(|&x| x != j);
        let absorbed = core::mem::take(&mut self.members[j]);
        self.members[i].extend(absorbed);
        Ok(())
    }

    /// Greedy descent: shrink the cheapest edge while its cost is negative.
    /// Returns the number of shrinks.
    pub fn greedy(&mut self) -> usize {
        let mut steps = 0;
        while let Some((i, j, cost)) = self.min_edge() {
            if cost >= 0 {
                break;
            }
            self.shrink(i, j).expect("edge from min_edge");
            steps += 1;
        }
        steps
    }

    /// The aggregates as vertex sets, sorted.
    pub fn blocks(&self) -> Vec<VertexSet> {
        let mut out: Vec<VertexSet> = self
            .aggregates()
            .map(|(_, m)| VertexSet::new(m.iter().copied()))
            .collect();
        out.sort();
        out
    }

    /// The current partition, evaluated from scratch on `graph`.
    pub fn to_partition(&self, graph: &AttributedGraph) -> Partition {
        evaluate_partition(graph, self.blocks()).expect("aggregates form a connected partition")
    }

    /// Aggregate label of every original vertex.
    pub fn labels(&self) -> Vec<usize> {
        let mut out = vec![usize::MAX; self.n];
        for (rep, m) in self.aggregates() {
            for &v in m {
                out[v] = rep;
            }
        }
        out
    }
}

/// Diversification memory: one weight per original edge, raised each time a
/// local optimum separates the edge's endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiversificationWeights {
    edges: Vec<(usize, usize)>,
    w: Vec<u64>,
    total: u64,
}

impl DiversificationWeights {
    /// Every edge starts with weight 1.
    pub fn new(graph: &AttributedGraph) -> Self {
        let edges = graph.edges().to_vec();
        let m = edges.len();
        DiversificationWeights {
            edges,
            w: vec![1; m],
            total: m as u64,
        }
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn weight(&self, k: usize) -> u64 {
        self.w[k]
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn probability(&self, k: usize) -> f64 {
        self.w[k] as f64 / self.total as f64
    }

    /// Draws an edge index with probability `w_k / W`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<usize> {
        self.sample_where(rng, |_| true)
    }

    /// Draws among the edges accepted by `keep`, proportionally to weight.
    pub fn sample_where<R: Rng + ?Sized>(&self, rng: &mut R, keep: impl Fn(usize) -> bool) -> Option<usize> {
        let total: u64 = (0..self.w.len()).filter(|&k| keep(k)).map(|k| self.w[k]).sum();
        if total == 0 {
            return None;
        }
        let mut r = rng.gen_range(0..total);
        for k in 0..self.w.len() {
            if !keep(k) {
                continue;
            }
            if r < self.w[k] {
                return Some(k);
            }
            r -= self.w[k];
        }
        unreachable!("draw below the total weight")
    }

    /// Adds one to every edge whose endpoints carry different labels.
    pub fn update(&mut self, labels: &[usize]) {
        for (k, &(i, j)) in self.edges.iter().enumerate() {
            if labels[i] != labels[j] {
                self.w[k] += 1;
                self.total += 1;
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RsConfig {
    pub max_start: usize,
    /// Upper end of the uniform draw of random shrinks per start; 0 turns
    /// every start into the greedy one.
    pub max_random_move: usize,
    pub seed: u64,
    pub time_limit: Option<f64>,
    /// Record `(start, f)` at every local optimum.
    pub trace: bool,
}

impl RsConfig {
    /// `max_start = 10 n`, `max_random_move = ceil(n / 3)`.
    pub fn for_size(n: usize, seed: u64) -> Self {
        RsConfig {
            max_start: (10 * n).max(1),
            max_random_move: n.div_ceil(3).max(1),
            seed,
            time_limit: None,
            trace: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RsOutcome {
    pub best: Partition,
    /// 1-based start at which the best partition first appeared.
    pub best_start: usize,
    pub starts: usize,
    /// Distinct blocks over all local optima.
    pub blocks: BTreeSet<VertexSet>,
    pub weights: DiversificationWeights,
    pub trace: Vec<(usize, Cost)>,
}

/// Multi-start Random Shrink on the whole partition problem. Start 1 is the
/// pure greedy descent; later starts first perform `Unif(1, max_random_move)`
/// weighted random shrinks. `max_start = 0` is treated as 1.
pub fn random_shrink(graph: &AttributedGraph, config: &RsConfig, clock: &dyn Clock) -> RsOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let deadline = Deadline::after(clock, config.time_limit);
    let mut weights = DiversificationWeights::new(graph);
    let mut best = Partition::singletons(graph.n());
    let mut best_start = 1;
    let mut blocks = BTreeSet::new();
    let mut trace = Vec::new();
    let mut starts = 0;
    for s in 1..=config.max_start.max(1) {
        if s > 1 && deadline.expired(clock) {
            break;
        }
        starts = s;
        let mut state = ShrinkState::new(graph);
        if s > 1 && config.max_random_move > 0 {
            let moves = rng.gen_range(1..=config.max_random_move);
            for _ in 0..moves {
                let labels = state.labels();
                let Some(k) = weights.sample_where(&mut rng, |k| {
                    let (i, j) = weights.edges[k];
                    labels[i] != labels[j]
                }) else {
                    break;
                };
                let (i, j) = weights.edges[k];
                let (a, b) = (labels[i].min(labels[j]), labels[i].max(labels[j]));
                state.shrink(a, b).expect("crossing edge joins two aggregates");
            }
        }
        state.greedy();
        let f = state.partition_cost();
        if config.trace {
            trace.push((s, f));
        }
        if f < best.objective() {
            best = state.to_partition(graph);
            best_start = s;
        }
        blocks.extend(state.blocks());
        weights.update(&state.labels());
    }
    RsOutcome {
        best,
        best_start,
        starts,
        blocks,
        weights,
        trace,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RsPricingConfig {
    pub starts: usize,
    pub max_random_move: usize,
    pub max_columns: usize,
    pub seed: u64,
}

impl RsPricingConfig {
    pub fn for_size(n: usize, seed: u64) -> Self {
        RsPricingConfig {
            starts: n.clamp(1, 50),
            max_random_move: n.div_ceil(3).max(1),
            max_columns: 50,
            seed,
        }
    }
}

/// Random Shrink as a pricing heuristic: every aggregate met on the way
/// (singletons included) is a candidate column. Random moves pick uniformly
/// among the shrinkable edges. Never claims optimality.
pub fn random_shrink_pricing(input: &PricingInput, config: &RsPricingConfig) -> Result<PricingResult, PricingError> {
    input.validate()?;
    let g = input.graph;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut harvest = Harvest::new(config.max_columns);
    let mut best: Option<(VertexSet, f64)> = None;
    let mut offer = |state: &ShrinkState, i: usize, best: &mut Option<(VertexSet, f64)>| {
        let pi = state.pi(i);
        if pi >= -EPS_FEAS {
            return;
        }
        let set = VertexSet::new(state.members[i].iter().copied());
        if !input.respects_pairs(&set) {
            return;
        }
        if crate::pricing::better(pi, &set, best) {
            *best = Some((set.clone(), pi));
        }
        harvest.offer(set, pi);
    };
    let fresh = ShrinkState::new_pricing(g, input.gamma, input.differ_pairs);
    for i in 0..g.n() {
        offer(&fresh, i, &mut best);
    }
    for s in 1..=config.starts.max(1) {
        let mut state = fresh.clone();
        if s > 1 && config.max_random_move > 0 {
            let moves = rng.gen_range(1..=config.max_random_move);
            for _ in 0..moves {
                let edges = state.active_edges();
                if edges.is_empty() {
                    break;
                }
                let (i, j) = edges[rng.gen_range(0..edges.len())];
                state.shrink(i, j).expect("active edge");
                offer(&state, i, &mut best);
            }
        }
        while let Some((i, j, cost)) = state.min_edge() {
            if cost >= 0 {
                break;
            }
            state.shrink(i, j).expect("edge from min_edge");
            offer(&state, i, &mut best);
        }
    }
    Ok(PricingResult {
        best,
        negatives: harvest.into_vec(),
        proved_optimal: false,
    })
}
