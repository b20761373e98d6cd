use alloc::vec;
use alloc::vec::Vec;

use super::{better, reduced_cost, same_classes, Harvest, PricingError, PricingInput, PricingOptions, PricingResult};
use crate::clock::{Clock, Deadline};
use crate::graph::VertexSet;

const CLOCK_EVERY: u64 = 1 << 12;

struct Search<'a> {
    n: usize,
    adj: Vec<u64>,
    cost: Vec<f64>,
    neg_half: Vec<f64>,
    weight: Vec<f64>,
    differ: Vec<u64>,
    same: Vec<u64>,
    best: Option<(VertexSet, f64)>,
    threshold: f64,
    harvest: Harvest,
    deadline: Deadline,
    clock: &'a dyn Clock,
    visited: u64,
    aborted: bool,
    gains: Vec<Vec<f64>>,
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    core::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

impl Search<'_> {
    fn bound_limit(&self) -> f64 {
        match &self.best {
            Some((_, r)) => r.min(self.threshold),
            None => self.threshold,
        }
    }

    /// Vertices outside `s` reachable from `s` inside `open`.
    fn reach(&self, s: u64, open: u64) -> u64 {
        let mut seen = s;
        let mut front = s;
        while front != 0 {
            let mut next = 0u64;
            for v in bits(front) {
                next |= self.adj[v];
            }
            next &= open & !seen;
            seen |= next;
            front = next;
        }
        seen & !s
    }

    /// Lower bound on every extension of `s` by vertices of `reach`: each
    /// pair's negative cost is split between its endpoints.
    fn lower_bound(&self, val: f64, gain: &[f64], reach: u64) -> f64 {
        let mut lb = val;
        for v in bits(reach) {
            let mut extra = gain[v];
            for w in bits(reach) {
                if w != v {
                    extra += self.neg_half[v * self.n + w];
                }
            }
            if extra < 0.0 {
                lb += extra;
            }
        }
        lb
    }

    fn record(&mut self, s: u64, val: f64) {
        let set = VertexSet::from_mask(s);
        if val < self.threshold && better(val, &set, &self.best) {
            self.best = Some((set.clone(), val));
        }
        self.harvest.offer(set, val);
    }

    fn extend(&mut self, depth: usize, s: u64, val: f64, frontier: u64, excluded: u64, allowed: u64) {
        if self.aborted {
            return;
        }
        self.visited += 1;
        if self.visited % CLOCK_EVERY == 0 && self.deadline.expired(self.clock) {
            self.aborted = true;
            return;
        }
        let mut need = 0u64;
        for v in bits(s) {
            need |= self.same[v];
        }
        if need & (excluded | !allowed) & !s != 0 {
            return;
        }
        if need & !s == 0 {
            self.record(s, val);
        }
        let reach = self.reach(s, allowed & !excluded);
        if need & !s & !reach != 0 {
            return;
        }
        let limit = self.bound_limit();
        if self.lower_bound(val, &self.gains[depth], reach) > limit + 1e-9 {
            return;
        }
        let mut x = excluded;
        let mut f = frontier;
        while f != 0 {
            let v = f.trailing_zeros() as usize;
            f &= f - 1;
            if self.differ[v] & s == 0 {
                let ns = s | (1u64 << v);
                let nx = x | self.differ[v];
                let nf = (f | (self.adj[v] & allowed)) & !ns & !nx;
                let nval = val + self.gains[depth][v];
                let (head, tail) = self.gains.split_at_mut(depth + 1);
                let (cur, next) = (&head[depth], &mut tail[0]);
                for w in 0..self.n {
                    next[w] = cur[w] + self.cost[v * self.n + w];
                }
                self.extend(depth + 1, ns, nval, nf, nx, allowed);
                if self.aborted {
                    return;
                }
            }
            x |= 1u64 << v;
        }
    }
}

/// Exact pricing by enumerating connected sets grown from their smallest
/// vertex, pruned by a bound on the best possible extension.
pub fn solve_pricing_combinatorial(
    input: &PricingInput,
    options: &PricingOptions,
    clock: &dyn Clock,
) -> Result<PricingResult, PricingError> {
    input.validate()?;
    let g = input.graph;
    let n = g.n();
    let limit = options.combinatorial_limit.min(64);
    if n > limit {
        return Err(PricingError::TooLarge { n, limit });
    }
    if n == 0 {
        return Ok(super::empty_result());
    }
    let adj = g.adjacency_masks().expect("n <= 64");
    let mut cost = vec![0.0; n * n];
    let mut neg_half = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let c = g.cost(i, j) as f64;
                cost[i * n + j] = c;
                neg_half[i * n + j] = c.min(0.0) / 2.0;
            }
        }
    }
    let mut differ = vec![0u64; n];
    for &(a, b) in input.differ_pairs {
        differ[a] |= 1 << b;
        differ[b] |= 1 << a;
    }
    let class = same_classes(n, input.same_pairs);
    let mut same = vec![0u64; n];
    for v in 0..n {
        for w in 0..n {
            if w != v && class[w] == class[v] {
                same[v] |= 1 << w;
            }
        }
    }
    let weight: Vec<f64> = input.gamma.iter().map(|g| -g).collect();
    let mut search = Search {
        n,
        adj,
        cost,
        neg_half,
        weight,
        differ,
        same,
        best: None,
        threshold: options.cutoff.unwrap_or(f64::INFINITY),
        harvest: Harvest::new(options.max_columns),
        deadline: Deadline::after(clock, options.time_limit),
        clock,
        visited: 0,
        aborted: false,
        gains: vec![vec![0.0; n]; n + 1],
    };
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    for r in 0..n {
        // sets whose smallest vertex is r
        let allowed = full & !((1u64 << r) - 1) & !(1u64 << r);
        if search.same[r] & ((1u64 << r) - 1) != 0 {
            continue;
        }
        for w in 0..n {
            search.gains[1][w] = search.weight[w] + search.cost[r * n + w];
        }
        let s = 1u64 << r;
        let excluded = search.differ[r];
        let frontier = search.adj[r] & allowed & !excluded;
        let val = search.weight[r];
        search.extend(1, s, val, frontier, excluded, allowed | s);
        if search.aborted {
            break;
        }
    }
    let proved_optimal = !search.aborted;
    let best = search.best.take();
    if let Some((set, rc)) = &best {
        debug_assert!((reduced_cost(g, input.gamma, set) - rc).abs() < 1e-6);
    }
    Ok(PricingResult {
        best,
        negatives: search.harvest.into_vec(),
        proved_optimal,
    })
}
