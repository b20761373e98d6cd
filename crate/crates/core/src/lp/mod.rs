//! Linear and mixed-integer programming kernel.
//!
//! [`LinearProgram`] is a plain model builder. [`solve_lp`] runs a bounded
//! revised simplex on it; [`solve_milp`] adds best-bound branch and bound
//! with lazy cut callbacks. Both are dense and meant for models with at most
//! a few thousand rows.

mod format;
mod milp;
pub(crate) mod simplex;

use alloc::string::String;
use alloc::vec::Vec;

pub use format::to_lp_format;
pub use milp::{solve_milp, Cut, CutCallback, MilpLimits, MilpOutcome};

use simplex::{Simplex, SimplexStatus};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Ge,
    Eq,
}

/// Handle of a variable inside its [`LinearProgram`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub usize);

#[derive(Clone, Debug, PartialEq)]
pub struct Variable {
    pub name: String,
    pub lower: f64,
    pub upper: f64,
    pub objective: f64,
    pub integer: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub name: String,
    pub terms: Vec<(VarId, f64)>,
    pub cmp: Cmp,
    pub rhs: f64,
}

impl Constraint {
    pub fn activity(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|&(v, c)| c * x[v.0]).sum()
    }

    /// Amount by which `x` violates the row (0 when satisfied).
    pub fn violation(&self, x: &[f64]) -> f64 {
        let lhs = self.activity(x);
        match self.cmp {
            Cmp::Le => (lhs - self.rhs).max(0.0),
            Cmp::Ge => (self.rhs - lhs).max(0.0),
            Cmp::Eq => (lhs - self.rhs).abs(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LpError {
    #[error("constraint {constraint} references unknown variable {var}")]
    UnknownVariable { constraint: usize, var: usize },
    #[error("variable {0} has lower bound above upper bound")]
    BadBounds(usize),
    #[error("model contains a non-finite coefficient")]
    NotFinite,
    #[error("cut callback returned a row violated by only {violation}")]
    CutNotViolated { violation: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
    NodeLimit,
    TimeLimit,
    /// The simplex lost accuracy and could not recover.
    Numerical,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub primal: Vec<f64>,
    /// One dual per constraint, in the model's own objective sense.
    pub duals: Vec<f64>,
    pub objective: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinearProgram {
    pub sense: Sense,
    pub vars: Vec<Variable>,
    pub constraints: Vec<Constraint>,
}

impl LinearProgram {
    pub fn new(sense: Sense) -> Self {
        LinearProgram {
            sense,
            vars: Vec::new(),
            constraints: Vec::new(),
        }
    }

    pub fn add_var(&mut self, name: impl Into<String>, lower: f64, upper: f64, objective: f64, integer: bool) -> VarId {
        self.vars.push(Variable {
            name: name.into(),
            lower,
            upper,
            objective,
            integer,
        });
        VarId(self.vars.len() - 1)
    }

    pub fn add_binary(&mut self, name: impl Into<String>, objective: f64) -> VarId {
        self.add_var(name, 0.0, 1.0, objective, true)
    }

    pub fn add_constraint(&mut self, name: impl Into<String>, terms: Vec<(VarId, f64)>, cmp: Cmp, rhs: f64) -> usize {
        self.constraints.push(Constraint {
            name: name.into(),
            terms,
            cmp,
            rhs,
        });
        self.constraints.len() - 1
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.vars.iter().zip(x).map(|(v, &xv)| v.objective * xv).sum()
    }

    pub fn validate(&self) -> Result<(), LpError> {
        for (j, v) in self.vars.iter().enumerate() {
            if v.lower.is_nan() || v.upper.is_nan() || !v.objective.is_finite() {
                return Err(LpError::NotFinite);
            }
            if v.lower > v.upper {
                return Err(LpError::BadBounds(j));
            }
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if !c.rhs.is_finite() {
                return Err(LpError::NotFinite);
            }
            for &(v, a) in &c.terms {
                if v.0 >= self.vars.len() {
                    return Err(LpError::UnknownVariable { constraint: i, var: v.0 });
                }
                if !a.is_finite() {
                    return Err(LpError::NotFinite);
                }
            }
        }
        Ok(())
    }

    /// Largest bound, row, or integrality violation of `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for (v, &xv) in self.vars.iter().zip(x) {
            worst = worst.max(v.lower - xv).max(xv - v.upper);
            if v.integer {
                worst = worst.max((xv - crate::math::round(xv)).abs());
            }
        }
        for c in &self.constraints {
            worst = worst.max(c.violation(x));
        }
        worst
    }

    pub(crate) fn build_simplex(&self) -> Simplex {
        let mut s = Simplex::new();
        let flip = if self.sense == Sense::Maximize { -1.0 } else { 1.0 };
        for v in &self.vars {
            s.add_column(flip * v.objective, v.lower, v.upper, Vec::new());
        }
        for c in &self.constraints {
            let (lo, hi) = row_bounds(c.cmp, c.rhs);
            let terms: Vec<(usize, f64)> = c.terms.iter().map(|&(v, a)| (v.0, a)).collect();
            s.add_row(&merge_terms(terms), lo, hi);
        }
        s
    }
}

pub(crate) fn row_bounds(cmp: Cmp, rhs: f64) -> (f64, f64) {
    match cmp {
        Cmp::Le => (f64::NEG_INFINITY, rhs),
        Cmp::Ge => (rhs, f64::INFINITY),
        Cmp::Eq => (rhs, rhs),
    }
}

/// Sums duplicate variables in a term list.
pub(crate) fn merge_terms(mut terms: Vec<(usize, f64)>) -> Vec<(usize, f64)> {
    terms.sort_by_key(|t| t.0);
    let mut out: Vec<(usize, f64)> = Vec::with_capacity(terms.len());
    for (k, a) in terms {
        match out.last_mut() {
            Some(last) if last.0 == k => last.1 += a,
            _ => out.push((k, a)),
        }
    }
    out.retain(|t| t.1 != 0.0);
    out
}

pub(crate) fn status_of(s: SimplexStatus) -> LpStatus {
    match s {
        SimplexStatus::Optimal => LpStatus::Optimal,
        SimplexStatus::Infeasible => LpStatus::Infeasible,
        SimplexStatus::Unbounded => LpStatus::Unbounded,
        SimplexStatus::IterationLimit => LpStatus::IterationLimit,
        SimplexStatus::Numerical => LpStatus::Numerical,
    }
}

/// Solves the continuous relaxation of `lp` (integrality is ignored).
pub fn solve_lp(lp: &LinearProgram) -> Result<LpSolution, LpError> {
    lp.validate()?;
    let mut s = lp.build_simplex();
    let status = status_of(s.solve());
    Ok(extract(lp, &s, status))
}

pub(crate) fn extract(lp: &LinearProgram, s: &Simplex, status: LpStatus) -> LpSolution {
    let primal = s.values();
    let flip = if lp.sense == Sense::Maximize { -1.0 } else { 1.0 };
    let duals = s.duals().into_iter().map(|y| flip * y).collect();
    let objective = lp.objective_value(&primal);
    LpSolution {
        status,
        primal,
        duals,
        objective,
    }
}
