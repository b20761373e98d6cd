use alloc::collections::BinaryHeap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::{extract, merge_terms, row_bounds, status_of, Cmp, Constraint, LinearProgram, LpError, LpSolution, LpStatus, Sense, VarId};
use crate::clock::{Clock, Deadline};
use crate::lp::simplex::SimplexStatus;
use crate::math::{ceil, floor, round};
use crate::{EPS_FEAS, EPS_INT};

const PRUNE_TOL: f64 = 1e-7;

/// A row produced by a separation callback. It is added to every node of
/// the search, not just the current one.
#[derive(Clone, Debug, PartialEq)]
pub struct Cut {
    pub name: String,
    pub terms: Vec<(VarId, f64)>,
    pub cmp: Cmp,
    pub rhs: f64,
}

impl Cut {
    pub fn new(name: impl Into<String>, terms: Vec<(VarId, f64)>, cmp: Cmp, rhs: f64) -> Self {
        Cut {
            name: name.into(),
            terms,
            cmp,
            rhs,
        }
    }

    fn as_constraint(&self) -> Constraint {
        Constraint {
            name: self.name.clone(),
            terms: self.terms.clone(),
            cmp: self.cmp,
            rhs: self.rhs,
        }
    }
}

/// Lazy constraint generator. Every returned cut must be violated by the
/// point it was given by more than the feasibility tolerance; anything else
/// aborts the solve with [`LpError::CutNotViolated`].
pub trait CutCallback {
    /// `integral` is true when all integer variables of `x` are integral
    /// (they are rounded before the call in that case).
    fn separate(&mut self, x: &[f64], integral: bool) -> Vec<Cut>;

    /// Whether the callback should also see fractional LP points.
    fn separates_fractional(&self) -> bool {
        false
    }
}

#[derive(Clone, Debug)]
pub struct MilpLimits {
    pub node_limit: Option<usize>,
    pub time_limit: Option<f64>,
    /// Only solutions strictly better than this objective are of interest.
    pub cutoff: Option<f64>,
    /// Separation rounds on fractional points per node.
    pub fractional_rounds: usize,
}

impl Default for MilpLimits {
    fn default() -> Self {
        MilpLimits {
            node_limit: None,
            time_limit: None,
            cutoff: None,
            fractional_rounds: 10,
        }
    }
}

#[derive(Clone, Debug)]
pub struct MilpOutcome {
    /// Incumbent (empty `primal` when none was found). Status is `Optimal`
    /// when the search finished with an incumbent, `Infeasible` when it
    /// finished without one (or none beat the cutoff), `Numerical` when a
    /// node had to be dropped; the incumbent is kept in that case.
    pub solution: LpSolution,
    pub best_bound: f64,
    pub nodes: usize,
    /// Every integral point accepted during the search with its objective.
    pub pool: Vec<(f64, Vec<f64>)>,
    pub incumbent_trace: Vec<f64>,
    pub bound_trace: Vec<f64>,
    pub cuts: Vec<Cut>,
    pub lp_iterations: usize,
}

struct Node {
    bound: f64,
    seq: usize,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Node {
    // max-heap: smallest bound first, then oldest
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .bound
            .total_cmp(&self.bound)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

fn collect_cuts(callbacks: &mut [&mut dyn CutCallback], x: &[f64], integral: bool) -> Result<Vec<Cut>, LpError> {
    let mut cuts = Vec::new();
    for cb in callbacks.iter_mut() {
        if !integral && !cb.separates_fractional() {
            continue;
        }
        for cut in cb.separate(x, integral) {
            let violation = cut.as_constraint().violation(x);
            if !(violation > EPS_FEAS) {
                return Err(LpError::CutNotViolated { violation });
            }
            cuts.push(cut);
        }
    }
    Ok(cuts)
}

/// Best-bound branch and bound on the integer variables of `lp`, branching
/// on the most fractional one (lowest index on ties).
pub fn solve_milp(
    lp: &LinearProgram,
    callbacks: &mut [&mut dyn CutCallback],
    limits: &MilpLimits,
    clock: &dyn Clock,
) -> Result<MilpOutcome, LpError> {
    lp.validate()?;
    let deadline = Deadline::after(clock, limits.time_limit);
    let flip = if lp.sense == Sense::Maximize { -1.0 } else { 1.0 };
    let mut s = lp.build_simplex();
    let int_vars: Vec<usize> = (0..lp.vars.len()).filter(|&j| lp.vars[j].integer).collect();
    let mut check = lp.clone();

    let mut incumbent_value = limits.cutoff.map_or(f64::INFINITY, |c| flip * c);
    let mut incumbent: Option<Vec<f64>> = None;
    let mut pool = Vec::new();
    let mut incumbent_trace = Vec::new();
    let mut bound_trace = Vec::new();
    let mut cuts_added = Vec::new();
    let mut nodes = 0usize;
    let mut numerical = false;
    let mut unbounded = false;
    let mut stop: Option<LpStatus> = None;
    let mut global_bound = f64::NEG_INFINITY;

    let mut heap = BinaryHeap::new();
    heap.push(Node {
        bound: f64::NEG_INFINITY,
        seq: 0,
        lower: int_vars.iter().map(|&j| ceil(lp.vars[j].lower - EPS_INT)).collect(),
        upper: int_vars.iter().map(|&j| floor(lp.vars[j].upper + EPS_INT)).collect(),
    });
    let mut seq = 1usize;

    while let Some(node) = heap.pop() {
        if node.bound >= incumbent_value - PRUNE_TOL {
            continue;
        }
        if deadline.expired(clock) {
            heap.push(node);
            stop = Some(LpStatus::TimeLimit);
            break;
        }
        if limits.node_limit.is_some_and(|l| nodes >= l) {
            heap.push(node);
            stop = Some(LpStatus::NodeLimit);
            break;
        }
        nodes += 1;
        for (t, &j) in int_vars.iter().enumerate() {
            s.set_bounds(j, node.lower[t], node.upper[t]);
        }
        let mut rounds = 0usize;
        loop {
            let st = s.solve();
            match st {
                SimplexStatus::Optimal => {}
                SimplexStatus::Infeasible => break,
                SimplexStatus::Unbounded => {
                    unbounded = true;
                    break;
                }
                _ => {
                    numerical = true;
                    s.reset_basis();
                    break;
                }
            }
            let obj = s.objective();
            if obj >= incumbent_value - PRUNE_TOL {
                break;
            }
            let mut x = s.values();
            let mut branch_var = None;
            let mut best_frac = EPS_INT;
            for (t, &j) in int_vars.iter().enumerate() {
                let f = x[j] - floor(x[j]);
                let dist = f.min(1.0 - f);
                if dist > best_frac + 1e-12 {
                    best_frac = dist;
                    branch_var = Some(t);
                }
            }
            match branch_var {
                None => {
                    for &j in &int_vars {
                        x[j] = round(x[j]);
                    }
                    let cuts = collect_cuts(callbacks, &x, true)?;
                    if !cuts.is_empty() {
                        add_cuts(&mut s, &mut check, &cuts, &mut cuts_added);
                        continue;
                    }
                    if check.max_violation(&x) > EPS_FEAS {
                        numerical = true;
                        break;
                    }
                    let value = flip * lp.objective_value(&x);
                    pool.push((flip * value, x.clone()));
                    if value < incumbent_value - PRUNE_TOL {
                        incumbent_value = value;
                        incumbent = Some(x);
                        incumbent_trace.push(flip * value);
                    }
                    break;
                }
                Some(t) => {
                    if rounds < limits.fractional_rounds {
                        let cuts = collect_cuts(callbacks, &x, false)?;
                        if !cuts.is_empty() {
                            rounds += 1;
                            add_cuts(&mut s, &mut check, &cuts, &mut cuts_added);
                            continue;
                        }
                    }
                    let j = int_vars[t];
                    let v = x[j];
                    let mut down = Node {
                        bound: obj,
                        seq,
                        lower: node.lower.clone(),
                        upper: node.upper.clone(),
                    };
                    down.upper[t] = floor(v);
                    let mut up = Node {
                        bound: obj,
                        seq: seq + 1,
                        lower: node.lower.clone(),
                        upper: node.upper.clone(),
                    };
                    up.lower[t] = ceil(v);
                    seq += 2;
                    heap.push(down);
                    heap.push(up);
                    break;
                }
            }
        }
        if unbounded {
            break;
        }
        let open = heap.iter().map(|n| n.bound).fold(f64::INFINITY, f64::min);
        let lb = open.min(incumbent_value);
        if lb > global_bound {
            global_bound = lb;
        }
        bound_trace.push(flip * global_bound);
    }

    if stop.is_none() && !unbounded {
        global_bound = incumbent_value;
    } else if stop.is_some() {
        let open = heap.iter().map(|n| n.bound).fold(f64::INFINITY, f64::min);
        global_bound = global_bound.max(open.min(incumbent_value));
    }

    let status = if unbounded {
        LpStatus::Unbounded
    } else if let Some(st) = stop {
        st
    } else if numerical {
        LpStatus::Numerical
    } else if incumbent.is_some() {
        LpStatus::Optimal
    } else {
        LpStatus::Infeasible
    };
    let solution = match incumbent {
        Some(x) => LpSolution {
            status,
            objective: lp.objective_value(&x),
            primal: x,
            duals: Vec::new(),
        },
        None => {
            let mut sol = extract(lp, &s, status_of(SimplexStatus::Infeasible));
            sol.status = status;
            sol.primal.clear();
            sol.duals.clear();
            sol.objective = flip * f64::INFINITY;
            sol
        }
    };
    Ok(MilpOutcome {
        solution,
        best_bound: flip * global_bound,
        nodes,
        pool,
        incumbent_trace,
        bound_trace,
        cuts: cuts_added,
        lp_iterations: s.iterations(),
    })
}

fn add_cuts(s: &mut super::simplex::Simplex, check: &mut LinearProgram, cuts: &[Cut], log: &mut Vec<Cut>) {
    for cut in cuts {
        let (lo, hi) = row_bounds(cut.cmp, cut.rhs);
        let terms = merge_terms(cut.terms.iter().map(|&(v, a)| (v.0, a)).collect());
        s.add_row(&terms, lo, hi);
        check.constraints.push(cut.as_constraint());
        log.push(cut.clone());
    }
}
