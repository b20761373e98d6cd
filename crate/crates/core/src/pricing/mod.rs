//! Pricing: find a connected vertex set `S` minimizing
//! `c_S - sum_{i in S} gamma_i` under pairwise together/apart constraints.
//!
//! Seven strategies build a mixed-integer model and hand it to
//! [`crate::lp::solve_milp`]; [`Strategy::Combinatorial`] enumerates
//! connected sets directly with bound pruning.
//!
//! Every model admits the empty set (value 0) except [`Strategy::Mtz0`],
//! which forces one root arc. Results are therefore compared through
//! [`PricingResult::min_reduced_cost`], which is `min(0, best)`.

mod combinatorial;
mod model;
mod separation;

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

pub use combinatorial::solve_pricing_combinatorial;
pub use model::{build_model, PricingModel, AUX};
pub use separation::{clique_separation, connectivity_separation, BridgeCallback, BridgeCut, LinkCut};

use crate::clock::Clock;
use crate::graph::{induced_connected, AttributedGraph, VertexSet};
use crate::lp::{solve_milp, LpError, LpStatus, MilpLimits};
use crate::EPS_FEAS;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strategy {
    Flow,
    Mtz,
    FlowCliqueRelax,
    MtzCliqueRelax,
    ConnectivityRelax,
    Flow0,
    Mtz0,
    Combinatorial,
}

impl Strategy {
    pub const ALL: [Strategy; 8] = [
        Strategy::Flow,
        Strategy::Mtz,
        Strategy::FlowCliqueRelax,
        Strategy::MtzCliqueRelax,
        Strategy::ConnectivityRelax,
        Strategy::Flow0,
        Strategy::Mtz0,
        Strategy::Combinatorial,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Flow => "flow",
            Strategy::Mtz => "mtz",
            Strategy::FlowCliqueRelax => "flow-clique-relax",
            Strategy::MtzCliqueRelax => "mtz-clique-relax",
            Strategy::ConnectivityRelax => "conn-relax",
            Strategy::Flow0 => "flow0",
            Strategy::Mtz0 => "mtz0",
            Strategy::Combinatorial => "comb",
        }
    }

    /// Whether the strategy drops the pair-linking rows and separates them
    /// lazily.
    pub fn clique_relaxed(self) -> bool {
        matches!(self, Strategy::FlowCliqueRelax | Strategy::MtzCliqueRelax)
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown pricing strategy `{0}`")]
pub struct UnknownStrategy(pub String);

impl FromStr for Strategy {
    type Err = UnknownStrategy;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| UnknownStrategy(s.into()))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct PricingInput<'a> {
    pub graph: &'a AttributedGraph,
    pub gamma: &'a [f64],
    pub same_pairs: &'a [(usize, usize)],
    pub differ_pairs: &'a [(usize, usize)],
    pub strategy: Strategy,
    pub strengthen: bool,
}

impl<'a> PricingInput<'a> {
    pub fn new(graph: &'a AttributedGraph, gamma: &'a [f64], strategy: Strategy) -> Self {
        PricingInput {
            graph,
            gamma,
            same_pairs: &[],
            differ_pairs: &[],
            strategy,
            strengthen: false,
        }
    }

    pub fn with_pairs(mut self, same: &'a [(usize, usize)], differ: &'a [(usize, usize)]) -> Self {
        self.same_pairs = same;
        self.differ_pairs = differ;
        self
    }

    pub fn strengthened(mut self, on: bool) -> Self {
        self.strengthen = on;
        self
    }

    /// Checks lengths, indices, and that no differ pair falls inside a
    /// class of the transitive closure of the same pairs.
    pub fn validate(&self) -> Result<(), PricingError> {
        let n = self.graph.n();
        if self.gamma.len() != n {
            return Err(PricingError::GammaLength {
                expected: n,
                got: self.gamma.len(),
            });
        }
        for &(a, b) in self.same_pairs.iter().chain(self.differ_pairs) {
            if a >= n || b >= n || a == b {
                return Err(PricingError::BadPair(a, b));
            }
        }
        let class = same_classes(n, self.same_pairs);
        for &(a, b) in self.differ_pairs {
            if class[a] == class[b] {
                return Err(PricingError::InconsistentPairs(a, b));
            }
        }
        Ok(())
    }

    /// Whether `set` meets every together/apart constraint.
    pub fn respects_pairs(&self, set: &VertexSet) -> bool {
        self.same_pairs
            .iter()
            .all(|&(a, b)| set.contains(a) == set.contains(b))
            && self
                .differ_pairs
                .iter()
                .all(|&(a, b)| !(set.contains(a) && set.contains(b)))
    }
}

/// Class representative of every vertex under the transitive closure of
/// `pairs`.
pub fn same_classes(n: usize, pairs: &[(usize, usize)]) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut v: usize) -> usize {
        while p[v] != v {
            p[v] = p[p[v]];
            v = p[v];
        }
        v
    }
    for &(a, b) in pairs {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    (0..n).map(|v| find(&mut parent, v)).collect()
}

#[derive(Clone, Debug)]
pub struct PricingOptions {
    /// Upper limit on harvested improving sets per call.
    pub max_columns: usize,
    pub time_limit: Option<f64>,
    pub node_limit: Option<usize>,
    /// Only sets with reduced cost strictly below this value are searched
    /// for. `Some(0.0)` turns the search into a pure "is there a negative
    /// column" test.
    pub cutoff: Option<f64>,
    /// Size guard of the combinatorial strategy.
    pub combinatorial_limit: usize,
    /// Run the bridge separation on fractional points as well.
    pub fractional_separation: bool,
}

impl Default for PricingOptions {
    fn default() -> Self {
        PricingOptions {
            max_columns: 10,
            time_limit: None,
            node_limit: None,
            cutoff: None,
            combinatorial_limit: 32,
            fractional_separation: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PricingResult {
    /// Best nonempty set found with its reduced cost. `None` when nothing
    /// below the cutoff (or below 0 for the model strategies) exists.
    pub best: Option<(VertexSet, f64)>,
    /// Distinct sets with reduced cost below `-EPS_FEAS`, best first.
    pub negatives: Vec<(VertexSet, f64)>,
    pub proved_optimal: bool,
}

impl PricingResult {
    /// `min(0, best reduced cost)`: the empty set is always available.
    pub fn min_reduced_cost(&self) -> f64 {
        self.best.as_ref().map_or(0.0, |b| b.1.min(0.0))
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PricingError {
    #[error("gamma has {got} entries, graph has {expected} vertices")]
    GammaLength { expected: usize, got: usize },
    #[error("invalid vertex pair ({0}, {1})")]
    BadPair(usize, usize),
    #[error("vertices {0} and {1} are required both together and apart")]
    InconsistentPairs(usize, usize),
    #[error("combinatorial pricing refuses n = {n} (limit {limit})")]
    TooLarge { n: usize, limit: usize },
    #[error("strategy {0} has no model")]
    NoModel(Strategy),
    #[error("model returned an infeasible set {0}")]
    InvalidSet(VertexSet),
    #[error(transparent)]
    Lp(#[from] LpError),
}

/// `c_S - sum_{i in S} gamma_i`.
pub fn reduced_cost(graph: &AttributedGraph, gamma: &[f64], set: &VertexSet) -> f64 {
    let members = set.members();
    let mut total = 0.0;
    for (a, &i) in members.iter().enumerate() {
        total -= gamma[i];
        for &j in &members[a + 1..] {
            total += graph.cost(i, j) as f64;
        }
    }
    total
}

/// Keeps the `k` best distinct sets, ordered by (reduced cost, set).
#[derive(Clone, Debug)]
pub(crate) struct Harvest {
    k: usize,
    items: Vec<(VertexSet, f64)>,
    seen: BTreeSet<VertexSet>,
}

impl Harvest {
    pub(crate) fn new(k: usize) -> Self {
        Harvest {
            k,
            items: Vec::new(),
            seen: BTreeSet::new(),
        }
    }

    pub(crate) fn offer(&mut self, set: VertexSet, rc: f64) {
        if rc >= -EPS_FEAS || self.k == 0 || self.seen.contains(&set) {
            return;
        }
        let pos = self
            .items
            .iter()
            .position(|(s, r)| rc < *r - 1e-9 || (rc <= *r + 1e-9 && set < *s))
            .unwrap_or(self.items.len());
        if pos >= self.k {
            return;
        }
        self.seen.insert(set.clone());
        self.items.insert(pos, (set, rc));
        if self.items.len() > self.k {
            let (dropped, _) = self.items.pop().unwrap();
            self.seen.remove(&dropped);
        }
    }

    pub(crate) fn into_vec(self) -> Vec<(VertexSet, f64)> {
        self.items
    }
}

pub(crate) fn better(rc: f64, set: &VertexSet, best: &Option<(VertexSet, f64)>) -> bool {
    match best {
        None => true,
        Some((s, r)) => rc < *r - 1e-9 || (rc <= *r + 1e-9 && set < s),
    }
}

/// Solves the pricing problem with the strategy named in `input`.
pub fn solve_pricing(input: &PricingInput, options: &PricingOptions, clock: &dyn Clock) -> Result<PricingResult, PricingError> {
    input.validate()?;
    if input.strategy == Strategy::Combinatorial {
        return solve_pricing_combinatorial(input, options, clock);
    }
    let model = build_model(input)?;
    let limits = MilpLimits {
        node_limit: options.node_limit,
        time_limit: options.time_limit,
        cutoff: Some(options.cutoff.unwrap_or(0.0).min(0.0)),
        ..MilpLimits::default()
    };
    let mut clique = separation::CliqueCallback::new(&model);
    let mut bridge = separation::BridgeCallback::new(input.graph, &model, options.fractional_separation);
    let outcome = match input.strategy {
        s if s.clique_relaxed() => solve_milp(&model.lp, &mut [&mut clique], &limits, clock)?,
        Strategy::ConnectivityRelax => solve_milp(&model.lp, &mut [&mut bridge], &limits, clock)?,
        _ => solve_milp(&model.lp, &mut [], &limits, clock)?,
    };
    let proved_optimal = matches!(outcome.solution.status, LpStatus::Optimal | LpStatus::Infeasible);

    let mut best: Option<(VertexSet, f64)> = None;
    let mut harvest = Harvest::new(options.max_columns);
    for (_, x) in &outcome.pool {
        let members: Vec<usize> = (0..input.graph.n()).filter(|&i| x[model.x[i].0] > 0.5).collect();
        if members.is_empty() {
            continue;
        }
        let set = VertexSet::new(members);
        if !induced_connected(input.graph, &set).unwrap_or(false) || !input.respects_pairs(&set) {
            return Err(PricingError::InvalidSet(set));
        }
        let rc = reduced_cost(input.graph, input.gamma, &set);
        if better(rc, &set, &best) {
            best = Some((set.clone(), rc));
        }
        harvest.offer(set, rc);
    }
    Ok(PricingResult {
        best,
        negatives: harvest.into_vec(),
        proved_optimal,
    })
}

/// Every nonempty connected set of a small graph that respects the pairs,
/// with its reduced cost. Exponential; meant for checks at n <= 16.
pub fn enumerate_connected_sets(input: &PricingInput) -> Vec<(VertexSet, f64)> {
    let n = input.graph.n();
    assert!(n <= 20, "enumeration is exponential");
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << n) {
        let set = VertexSet::from_mask(mask);
        if input.graph.connected_unchecked(set.members()) && input.respects_pairs(&set) {
            let rc = reduced_cost(input.graph, input.gamma, &set);
            out.push((set, rc));
        }
    }
    out
}

pub(crate) fn empty_result() -> PricingResult {
    PricingResult {
        best: None,
        negatives: vec![],
        proved_optimal: true,
    }
}

#[cfg(test)]
mod tests;
