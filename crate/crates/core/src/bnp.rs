//! Branch-and-price over the set-partitioning master problem.
//!
//! The restricted master `min sum c_S y_S, sum_{S ni i} y_S = 1, y >= 0` is
//! kept in one persistent simplex for the whole tree; nodes only change
//! column bounds. Each node is priced by Random Shrink first and by an exact
//! strategy when the heuristic finds nothing. Branching is on vertex pairs
//! (together / apart).

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::clock::{Clock, Deadline};
use crate::graph::{evaluate_partition, AttributedGraph, Cost, Partition, VertexSet};
use crate::heuristics::{random_shrink, random_shrink_pricing, RsConfig, RsPricingConfig};
use crate::lp::simplex::{Simplex, SimplexStatus};
use crate::math::ceil;
use crate::pricing::{same_classes, solve_pricing, PricingError, PricingInput, PricingOptions, Strategy};
use crate::{EPS_FEAS, EPS_INT};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColumnOrigin {
    /// Singletons, pairs and Random Shrink blocks of the start.
    Initial,
    /// Whole together-classes added when a node is opened.
    Branching,
    Heuristic,
    Exact,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Column {
    pub set: VertexSet,
    pub cost: Cost,
    /// A disconnected set priced at the big-M cost; never part of a real
    /// solution.
    pub fictitious: bool,
    pub origin: ColumnOrigin,
}

/// Deduplicated columns in insertion order.
#[derive(Clone, Debug, Default)]
pub struct ColumnPool {
    columns: Vec<Column>,
    index: BTreeMap<VertexSet, usize>,
}

impl ColumnPool {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a column unless its set is already present; returns its index
    /// when added.
    pub fn insert(&mut self, column: Column) -> Option<usize> {
        if self.index.contains_key(&column.set) {
            return None;
        }
        let k = self.columns.len();
        self.index.insert(column.set.clone(), k);
        self.columns.push(column);
        Some(k)
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn get(&self, k: usize) -> &Column {
        &self.columns[k]
    }

    pub fn find(&self, set: &VertexSet) -> Option<usize> {
        self.index.get(set).copied()
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn count(&self, origin: ColumnOrigin) -> usize {
        self.columns.iter().filter(|c| c.origin == origin).count()
    }
}

/// Big-M cost of fictitious columns: `1 + sum_{i<j} |c_ij|`.
pub fn big_m(graph: &AttributedGraph) -> Cost {
    1 + graph.total_abs_cost()
}

/// A node of the search tree: the together/apart decisions on its path.
#[derive(Clone, Debug, PartialEq)]
pub struct BnpNode {
    pub id: usize,
    pub depth: usize,
    pub same_pairs: Vec<(usize, usize)>,
    pub differ_pairs: Vec<(usize, usize)>,
    /// Best valid lower bound known for the node.
    pub bound: f64,
}

impl BnpNode {
    pub fn root() -> Self {
        BnpNode {
            id: 0,
            depth: 0,
            same_pairs: Vec::new(),
            differ_pairs: Vec::new(),
            bound: f64::NEG_INFINITY,
        }
    }

    /// Whether a column may be used at this node.
    pub fn admits(&self, set: &VertexSet) -> bool {
        self.same_pairs
            .iter()
            .all(|&(a, b)| set.contains(a) == set.contains(b))
            && self
                .differ_pairs
                .iter()
                .all(|&(a, b)| !(set.contains(a) && set.contains(b)))
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BnpError {
    #[error("branching called on an integral master solution")]
    IntegralSolution,
    #[error("master LP failed: {0:?}")]
    Master(MasterStatus),
    #[error(transparent)]
    Pricing(#[from] PricingError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MasterStatus {
    Infeasible,
    Unbounded,
    IterationLimit,
    Numerical,
}

/// Optimal restricted master solution.
#[derive(Clone, Debug, PartialEq)]
pub struct MasterSolution {
    /// Dual value of every partition row.
    pub gamma: Vec<f64>,
    /// Primal value of every pool column (0 for inactive ones).
    pub y: Vec<f64>,
    pub objective: f64,
}

/// The restricted master LP over a growing pool.
#[derive(Clone, Debug)]
pub struct MasterLp {
    simplex: Simplex,
    n: usize,
}

impl MasterLp {
    pub fn new(n: usize) -> Self {
        let mut simplex = Simplex::new();
        for _ in 0..n {
            simplex.add_row(&[], 1.0, 1.0);
        }
        MasterLp { simplex, n }
    }

    pub fn num_columns(&self) -> usize {
        self.simplex.num_structurals()
    }

    /// Appends the pool columns the LP does not have yet.
    pub fn sync(&mut self, pool: &ColumnPool) {
        for k in self.num_columns()..pool.len() {
            let c = pool.get(k);
            let entries = c.set.iter().map(|i| (i, 1.0)).collect();
            self.simplex.add_column(c.cost as f64, 0.0, f64::INFINITY, entries);
        }
    }

    /// Fixes the columns the node forbids to zero and frees the others.
    pub fn apply_node(&mut self, pool: &ColumnPool, node: &BnpNode) {
        self.sync(pool);
        for (k, c) in pool.columns().iter().enumerate() {
            let upper = if node.admits(&c.set) { f64::INFINITY } else { 0.0 };
            if self.simplex.bounds(k).1 != upper {
                self.simplex.set_bounds(k, 0.0, upper);
            }
        }
    }

    pub fn solve(&mut self) -> Result<MasterSolution, MasterStatus> {
        let mut status = self.simplex.solve();
        if matches!(status, SimplexStatus::Numerical | SimplexStatus::IterationLimit) {
            self.simplex.reset_basis();
            status = self.simplex.solve();
        }
        match status {
            SimplexStatus::Optimal => Ok(MasterSolution {
                gamma: self.simplex.duals(),
                y: self.simplex.values(),
                objective: self.simplex.objective(),
            }),
            SimplexStatus::Infeasible => Err(MasterStatus::Infeasible),
            SimplexStatus::Unbounded => Err(MasterStatus::Unbounded),
            SimplexStatus::IterationLimit => Err(MasterStatus::IterationLimit),
            SimplexStatus::Numerical => Err(MasterStatus::Numerical),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// Solves the restricted master of `node` over `pool` from scratch.
pub fn solve_master_lp(pool: &ColumnPool, node: &BnpNode, n: usize) -> Result<MasterSolution, MasterStatus> {
    let mut lp = MasterLp::new(n);
    lp.apply_node(pool, node);
    lp.solve()
}

/// Largest `sum_{i in S} gamma_i - c_S` over the columns the node admits.
pub fn max_dual_violation(pool: &ColumnPool, node: &BnpNode, gamma: &[f64]) -> f64 {
    pool.columns()
        .iter()
        .filter(|c| node.admits(&c.set))
        .map(|c| c.set.iter().map(|i| gamma[i]).sum::<f64>() - c.cost as f64)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Largest `|sum_{S ni i} y_S - 1|`.
pub fn max_primal_violation(pool: &ColumnPool, y: &[f64], n: usize) -> f64 {
    let mut cover = vec![0.0; n];
    for (c, &v) in pool.columns().iter().zip(y) {
        for i in c.set.iter() {
            cover[i] += v;
        }
    }
    cover.iter().map(|s| (s - 1.0).abs()).fold(0.0, f64::max)
}

pub fn is_integral(y: &[f64]) -> bool {
    y.iter().all(|&v| v.abs() <= EPS_INT || (v - 1.0).abs() <= EPS_INT)
}

/// `sum_{S ni i, j} y_S` for every pair that some column with positive
/// value covers.
pub fn pair_coverage(pool: &ColumnPool, y: &[f64]) -> BTreeMap<(usize, usize), f64> {
    let mut cov = BTreeMap::new();
    for (c, &v) in pool.columns().iter().zip(y) {
        if v <= EPS_INT {
            continue;
        }
        let m = c.set.members();
        for (a, &i) in m.iter().enumerate() {
            for &j in &m[a + 1..] {
                *cov.entry((i, j)).or_insert(0.0) += v;
            }
        }
    }
    cov
}

/// Splits `node` on the pair whose coverage is closest to 1/2 (smallest
/// pair on ties). The first child keeps the pair apart, the second keeps it
/// together.
pub fn branch(node: &BnpNode, pool: &ColumnPool, y: &[f64], next_id: usize) -> Result<(BnpNode, BnpNode), BnpError> {
    let mut pick: Option<((usize, usize), f64)> = None;
    for (&pair, &v) in &pair_coverage(pool, y) {
        if v <= EPS_INT || v >= 1.0 - EPS_INT {
            continue;
        }
        let d = (v - 0.5).abs();
        if pick.is_none_or(|(_, best)| d < best - 1e-12) {
            pick = Some((pair, d));
        }
    }
    let ((a, b), _) = pick.ok_or(BnpError::IntegralSolution)?;
    let mut apart = node.clone();
    apart.id = next_id;
    apart.depth += 1;
    apart.differ_pairs.push((a, b));
    let mut together = node.clone();
    together.id = next_id + 1;
    together.depth += 1;
    together.same_pairs.push((a, b));
    Ok((apart, together))
}

#[derive(Clone, Debug, PartialEq)]
pub struct BnpConfig {
    pub strategy: Strategy,
    pub strengthen: bool,
    /// Try Random Shrink before every exact pricing call.
    pub heuristic_pricing: bool,
    /// Starts of the initial Random Shrink run; 0 skips it (the pool then
    /// holds only singletons and pairs, the incumbent is all singletons).
    pub init_starts: usize,
    pub max_random_move: usize,
    pub pricing_starts: usize,
    pub heuristic_columns: usize,
    pub exact_columns: usize,
    pub combinatorial_limit: usize,
    pub time_limit: Option<f64>,
    pub node_limit: Option<usize>,
    pub seed: u64,
}

impl BnpConfig {
    /// Combinatorial exact pricing, cascade on, `10 n` initial starts,
    /// `ceil(n / 3)` random moves.
    pub fn for_size(n: usize) -> Self {
        let rs = RsPricingConfig::for_size(n, 0);
        BnpConfig {
            strategy: Strategy::Combinatorial,
            strengthen: false,
            heuristic_pricing: true,
            init_starts: 10 * n,
            max_random_move: rs.max_random_move,
            pricing_starts: rs.starts,
            heuristic_columns: rs.max_columns,
            exact_columns: 10,
            combinatorial_limit: 64,
            time_limit: None,
            node_limit: None,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport {
    pub best: Partition,
    pub optimal: bool,
    /// The time or node limit stopped the search.
    pub timed_out: bool,
    /// Valid lower bound (exact mode only).
    pub lower_bound: Option<f64>,
    /// `(upper - lower) / |lower|`; 0 when optimal. `None` in truncated mode.
    pub gap: Option<f64>,
    pub time: f64,
    pub initial_columns: usize,
    pub branching_columns: usize,
    pub heuristic_columns: usize,
    pub exact_columns: usize,
    pub total_columns: usize,
    pub exact_iterations: usize,
    pub heuristic_iterations: usize,
    pub master_solves: usize,
    pub nodes: usize,
    pub root_lp: Option<f64>,
    pub root_bound: Option<f64>,
    /// `(upper after the root - root bound) / |root bound|`.
    pub root_gap: Option<f64>,
    pub pricing_time: f64,
    pub exact_pricing_time: f64,
    /// Every `sum gamma + n min c` bound recorded at the root.
    pub root_lb_records: Vec<f64>,
    pub max_dual_violation: f64,
    pub max_primal_violation: f64,
    /// Objective of the Random Shrink start.
    pub initial_objective: Cost,
}

impl SolveReport {
    pub fn pricing_time_fraction(&self) -> f64 {
        if self.time > 0.0 {
            self.pricing_time / self.time
        } else {
            0.0
        }
    }
}

/// Relative gap `(upper - lower) / |lower|`, 0 when both are equal.
pub fn relative_gap(upper: f64, lower: f64) -> f64 {
    if (upper - lower).abs() <= 1e-9 {
        0.0
    } else if lower == 0.0 {
        f64::INFINITY
    } else {
        (upper - lower) / lower.abs()
    }
}

/// Builds the start pool (singletons, all pairs, Random Shrink blocks) and
/// the starting incumbent.
pub fn initialize(graph: &AttributedGraph, config: &BnpConfig, clock: &dyn Clock) -> (ColumnPool, Partition) {
    let n = graph.n();
    let m = big_m(graph);
    let mut pool = ColumnPool::new();
    for i in 0..n {
        pool.insert(Column {
            set: VertexSet::singleton(i),
            cost: 0,
            fictitious: false,
            origin: ColumnOrigin::Initial,
        });
    }
    for i in 0..n {
        for j in i + 1..n {
            let edge = graph.has_edge(i, j);
            pool.insert(Column {
                set: VertexSet::new([i, j]),
                cost: if edge { graph.cost(i, j) } else { m },
                fictitious: !edge,
                origin: ColumnOrigin::Initial,
            });
        }
    }
    let mut incumbent = Partition::singletons(n);
    if config.init_starts > 0 {
        let rs = RsConfig {
            max_start: config.init_starts,
            max_random_move: config.max_random_move,
            seed: config.seed,
            time_limit: config.time_limit,
            trace: false,
        };
        let out = random_shrink(graph, &rs, clock);
        for set in out.blocks {
            let cost = graph.cost_of(&set);
            pool.insert(Column {
                set,
                cost,
                fictitious: false,
                origin: ColumnOrigin::Initial,
            });
        }
        incumbent = out.best;
    }
    (pool, incumbent)
}

enum NodeEnd {
    /// Pricing converged (or, truncated, the heuristic ran dry).
    Priced(MasterSolution),
    Infeasible,
    OutOfTime(Option<MasterSolution>),
}

struct Engine<'a> {
    graph: &'a AttributedGraph,
    config: &'a BnpConfig,
    clock: &'a dyn Clock,
    deadline: Deadline,
    exact: bool,
    pool: ColumnPool,
    master: MasterLp,
    incumbent: Partition,
    report: SolveReport,
    pricing_calls: u64,
}

impl<'a> Engine<'a> {
    fn new(graph: &'a AttributedGraph, config: &'a BnpConfig, clock: &'a dyn Clock, exact: bool) -> Self {
        let deadline = Deadline::after(clock, config.time_limit);
        let (pool, incumbent) = initialize(graph, config, clock);
        let report = SolveReport {
            best: incumbent.clone(),
            optimal: false,
            timed_out: false,
            lower_bound: None,
            gap: None,
            time: 0.0,
            initial_columns: pool.len(),
            branching_columns: 0,
            heuristic_columns: 0,
            exact_columns: 0,
            total_columns: 0,
            exact_iterations: 0,
            heuristic_iterations: 0,
            master_solves: 0,
            nodes: 0,
            root_lp: None,
            root_bound: None,
            root_gap: None,
            pricing_time: 0.0,
            exact_pricing_time: 0.0,
            root_lb_records: Vec::new(),
            max_dual_violation: f64::NEG_INFINITY,
            max_primal_violation: 0.0,
            initial_objective: incumbent.objective(),
        };
        Engine {
            graph,
            config,
            clock,
            deadline,
            exact,
            pool,
            master: MasterLp::new(graph.n()),
            incumbent,
            report,
            pricing_calls: 0,
        }
    }

    /// Makes sure every together-class of the node is a column, so the
    /// partition into classes keeps the node's master feasible.
    fn add_class_columns(&mut self, node: &BnpNode) {
        let n = self.graph.n();
        let class = same_classes(n, &node.same_pairs);
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..n {
            groups.entry(class[v]).or_default().push(v);
        }
        for members in groups.into_values() {
            if members.len() < 3 {
                continue;
            }
            let set = VertexSet::new(members);
            let connected = self.graph.is_connected_set(&set);
            let cost = if connected { self.graph.cost_of(&set) } else { big_m(self.graph) };
            let added = self.pool.insert(Column {
                set,
                cost,
                fictitious: !connected,
                origin: ColumnOrigin::Branching,
            });
            if added.is_some() {
                self.report.branching_columns += 1;
            }
        }
    }

    fn add_columns(&mut self, sets: Vec<(VertexSet, f64)>, origin: ColumnOrigin) -> usize {
        let mut added = 0;
        for (set, _) in sets {
            let cost = self.graph.cost_of(&set);
            if self
                .pool
                .insert(Column {
                    set,
                    cost,
                    fictitious: false,
                    origin,
                })
                .is_some()
            {
                added += 1;
            }
        }
        added
    }

    fn solve_master(&mut self, node: &BnpNode) -> Result<MasterSolution, MasterStatus> {
        self.master.sync(&self.pool);
        let sol = self.master.solve()?;
        self.report.master_solves += 1;
        let dv = max_dual_violation(&self.pool, node, &sol.gamma);
        let pv = max_primal_violation(&self.pool, &sol.y, self.graph.n());
        self.report.max_dual_violation = self.report.max_dual_violation.max(dv);
        self.report.max_primal_violation = self.report.max_primal_violation.max(pv);
        Ok(sol)
    }

    /// Column generation at one node. Updates `node.bound` with every exact
    /// Lagrangian bound.
    fn price_loop(&mut self, node: &mut BnpNode) -> Result<NodeEnd, BnpError> {
        let n = self.graph.n();
        self.add_class_columns(node);
        self.master.apply_node(&self.pool, node);
        loop {
            let sol = match self.solve_master(node) {
                Ok(s) => s,
                Err(MasterStatus::Infeasible) => return Ok(NodeEnd::Infeasible),
                Err(e) => return Err(BnpError::Master(e)),
            };
            if self.deadline.expired(self.clock) {
                return Ok(NodeEnd::OutOfTime(Some(sol)));
            }
            let input = PricingInput::new(self.graph, &sol.gamma, self.config.strategy)
                .with_pairs(&node.same_pairs, &node.differ_pairs)
                .strengthened(self.config.strengthen);
            if self.config.heuristic_pricing || !self.exact {
                self.pricing_calls += 1;
                let rs = RsPricingConfig {
                    starts: self.config.pricing_starts,
                    max_random_move: self.config.max_random_move,
                    max_columns: self.config.heuristic_columns,
                    seed: self.config.seed.wrapping_add(self.pricing_calls),
                };
                let t0 = self.clock.now();
                let found = random_shrink_pricing(&input, &rs)?;
                self.report.pricing_time += self.clock.now() - t0;
                self.report.heuristic_iterations += 1;
                let added = self.add_columns(found.negatives, ColumnOrigin::Heuristic);
                self.report.heuristic_columns += added;
                if added > 0 {
                    continue;
                }
                if !self.exact {
                    return Ok(NodeEnd::Priced(sol));
                }
            }
            let options = PricingOptions {
                max_columns: self.config.exact_columns,
                time_limit: self.deadline.remaining(self.clock),
                combinatorial_limit: self.config.combinatorial_limit,
                ..PricingOptions::default()
            };
            let t0 = self.clock.now();
            let found = solve_pricing(&input, &options, self.clock)?;
            let dt = self.clock.now() - t0;
            self.report.pricing_time += dt;
            self.report.exact_pricing_time += dt;
            self.report.exact_iterations += 1;
            if !found.proved_optimal {
                return Ok(NodeEnd::OutOfTime(Some(sol)));
            }
            let min_rc = found.min_reduced_cost();
            let lb = sol.gamma.iter().sum::<f64>() + n as f64 * min_rc;
            if node.depth == 0 {
                self.report.root_lb_records.push(lb);
            }
            node.bound = node.bound.max(lb);
            if min_rc >= -EPS_FEAS {
                node.bound = node.bound.max(sol.objective);
                return Ok(NodeEnd::Priced(sol));
            }
            let added = self.add_columns(found.negatives, ColumnOrigin::Exact);
            self.report.exact_columns += added;
            if added == 0 {
                // every improving set is already in the pool: the master is
                // at its optimum up to tolerance
                node.bound = node.bound.max(sol.objective);
                return Ok(NodeEnd::Priced(sol));
            }
        }
    }

    fn incumbent_from(&self, y: &[f64]) -> Option<Partition> {
        let mut blocks = Vec::new();
        for (c, &v) in self.pool.columns().iter().zip(y) {
            if v > 0.5 {
                if c.fictitious {
                    return None;
                }
                blocks.push(c.set.clone());
            }
        }
        blocks.sort();
        evaluate_partition(self.graph, blocks).ok()
    }

    /// Node bound rounded up to the next integer objective.
    fn can_improve(&self, bound: f64) -> bool {
        let b = if bound.is_finite() { ceil(bound - 1e-6) } else { bound };
        b < self.incumbent.objective() as f64 - 0.5
    }

    fn run(mut self) -> Result<SolveReport, BnpError> {
        let start = self.clock.now();
        let mut open: Vec<BnpNode> = vec![BnpNode::root()];
        let mut next_id = 1;
        let mut timed_out = false;
        let mut frontier_bound = f64::INFINITY;
        while !open.is_empty() {
            if self.deadline.expired(self.clock) || self.config.node_limit.is_some_and(|l| self.report.nodes >= l) {
                timed_out = true;
                break;
            }
            // best bound first, oldest first on ties
            let mut k = 0;
            for (i, nd) in open.iter().enumerate() {
                if nd.bound < open[k].bound {
                    k = i;
                }
            }
            let mut node = open.remove(k);
            if !self.can_improve(node.bound) {
                continue;
            }
            self.report.nodes += 1;
            let end = self.price_loop(&mut node)?;
            let sol = match end {
                NodeEnd::Infeasible => continue,
                NodeEnd::OutOfTime(sol) => {
                    if let Some(s) = sol {
                        if is_integral(&s.y) {
                            self.offer_incumbent(&s.y);
                        }
                    }
                    frontier_bound = frontier_bound.min(node.bound);
                    timed_out = true;
                    break;
                }
                NodeEnd::Priced(sol) => sol,
            };
            if !self.exact {
                // the heuristic LP value is used as if it were a bound
                node.bound = node.bound.max(sol.objective);
            }
            if node.depth == 0 {
                self.report.root_lp = Some(sol.objective);
                if self.exact {
                    self.report.root_bound = Some(node.bound);
                }
            }
            if is_integral(&sol.y) {
                self.offer_incumbent(&sol.y);
            }
            if node.depth == 0 && self.exact {
                let ub = self.incumbent.objective() as f64;
                self.report.root_gap = Some(relative_gap(ub, node.bound.min(ub)));
            }
            if is_integral(&sol.y) || !self.can_improve(node.bound) {
                continue;
            }
            let (a, b) = branch(&node, &self.pool, &sol.y, next_id)?;
            next_id += 2;
            open.push(a);
            open.push(b);
        }
        let upper = self.incumbent.objective() as f64;
        let lower = open
            .iter()
            .map(|nd| nd.bound)
            .fold(frontier_bound, f64::min)
            .min(upper);
        let optimal = self.exact && !timed_out;
        self.report.optimal = optimal;
        self.report.timed_out = timed_out;
        if self.exact {
            let lower = if optimal { upper } else { lower };
            self.report.lower_bound = Some(lower);
            self.report.gap = Some(if optimal { 0.0 } else { relative_gap(upper, lower) });
        }
        self.report.best = self.incumbent.clone();
        self.report.total_columns = self.pool.len();
        self.report.time = self.clock.now() - start;
        if self.report.max_dual_violation == f64::NEG_INFINITY {
            self.report.max_dual_violation = 0.0;
        }
        Ok(self.report)
    }

    fn offer_incumbent(&mut self, y: &[f64]) {
        if let Some(p) = self.incumbent_from(y) {
            if p.objective() < self.incumbent.objective() {
                self.incumbent = p;
            }
        }
    }
}

/// Exact branch-and-price.
pub fn solve(graph: &AttributedGraph, config: &BnpConfig, clock: &dyn Clock) -> Result<SolveReport, BnpError> {
    Engine::new(graph, config, clock, true).run()
}

/// The matheuristic: the same search with Random Shrink as the only pricer.
/// The node LP values are not bounds, so the report carries no gap.
pub fn solve_truncated(graph: &AttributedGraph, config: &BnpConfig, clock: &dyn Clock) -> Result<SolveReport, BnpError> {
    Engine::new(graph, config, clock, false).run()
}

/// All connected sets of the pool's graph with their costs, as a pool; the
/// full column universe for small checks.
pub fn full_pool(graph: &AttributedGraph) -> ColumnPool {
    let n = graph.n();
    assert!(n <= 20, "full enumeration is exponential");
    let mut pool = ColumnPool::new();
    let mut seen = BTreeSet::new();
    for mask in 1u64..(1u64 << n) {
        let set = VertexSet::from_mask(mask);
        if graph.is_connected_set(&set) && seen.insert(set.clone()) {
            let cost = graph.cost_of(&set);
            pool.insert(Column {
                set,
                cost,
                fictitious: false,
                origin: ColumnOrigin::Initial,
            });
        }
    }
    pool
}
