// Dense bounded-variable revised simplex.
//
// Every row i of `A x (cmp) b` gets a row variable r_i with column -e_i, so
// the system becomes `A x - r = 0` and all constraint senses move into the
// bounds of r_i. The basis inverse is kept explicitly (dense m x m) and
// updated by elementary row operations; it is rebuilt from scratch every
// REFACTOR_EVERY pivots, counted across solves.

use alloc::vec;
use alloc::vec::Vec;

const PRIMAL_TOL: f64 = 1e-9;
const DUAL_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-9;
const SINGULAR_TOL: f64 = 1e-11;
const REFACTOR_EVERY: usize = 64;
const DEGENERATE_SWITCH: usize = 40;
const INF: f64 = f64::INFINITY;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum SimplexStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
    Numerical,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum State {
    Basic,
    Lower,
    Upper,
    // nonbasic at zero with both bounds infinite
    Free,
}

#[derive(Clone, Copy, Debug)]
enum Kind {
    Structural(usize),
    Row(usize),
}

#[derive(Clone, Debug)]
pub(crate) struct Simplex {
    m: usize,
    kinds: Vec<Kind>,
    structural: Vec<usize>,
    rows: Vec<usize>,
    cols: Vec<Vec<(usize, f64)>>,
    cost: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    state: Vec<State>,
    x: Vec<f64>,
    basis: Vec<usize>,
    binv: Vec<f64>,
    since_refactor: usize,
    iterations: usize,
    /// `iterations` when the current solve started; the limit is per solve.
    solve_start: usize,
    iteration_limit: usize,
}

impl Simplex {
    pub(crate) fn new() -> Self {
        Simplex {
            m: 0,
            kinds: Vec::new(),
            structural: Vec::new(),
            rows: Vec::new(),
            cols: Vec::new(),
            cost: Vec::new(),
            lower: Vec::new(),
            upper: Vec::new(),
            state: Vec::new(),
            x: Vec::new(),
            basis: Vec::new(),
            binv: Vec::new(),
            since_refactor: 0,
            iterations: 0,
            solve_start: 0,
            iteration_limit: 200_000,
        }
    }

    pub(crate) fn iterations(&self) -> usize {
        self.iterations
    }

    pub(crate) fn num_structurals(&self) -> usize {
        self.structural.len()
    }

    fn nonbasic_state(lower: f64, upper: f64) -> (State, f64) {
        if lower.is_finite() {
            (State::Lower, lower)
        } else if upper.is_finite() {
            (State::Upper, upper)
        } else {
            (State::Free, 0.0)
        }
    }

    /// Adds a structural column (nonbasic at a bound); returns its index.
    /// `entries` holds `(row, coefficient)` pairs for existing rows.
    pub(crate) fn add_column(&mut self, cost: f64, lower: f64, upper: f64, entries: Vec<(usize, f64)>) -> usize {
        let k = self.cols.len();
        let var = self.kinds.len();
        self.kinds.push(Kind::Structural(k));
        self.structural.push(var);
        self.cols.push(entries.into_iter().filter(|&(_, v)| v != 0.0).collect());
        self.cost.push(cost);
        let (st, val) = Self::nonbasic_state(lower, upper);
        self.lower.push(lower);
        self.upper.push(upper);
        self.state.push(st);
        self.x.push(val);
        k
    }

    /// Adds a row `lower <= sum(coef * x_k) <= upper` over structural indices.
    /// The new row variable enters the basis, so the current basis stays
    /// dual feasible.
    pub(crate) fn add_row(&mut self, terms: &[(usize, f64)], lower: f64, upper: f64) -> usize {
        let i = self.m;
        let var = self.kinds.len();
        self.kinds.push(Kind::Row(i));
        self.rows.push(var);
        self.cost.push(0.0);
        self.lower.push(lower);
        self.upper.push(upper);
        self.state.push(State::Basic);
        let mut activity = 0.0;
        for &(k, v) in terms {
            if v != 0.0 {
                self.cols[k].push((i, v));
                activity += v * self.x[self.structural[k]];
            }
        }
        self.x.push(activity);

        // new inverse = [[B^-1, 0], [a_B^T B^-1, -1]]
        let m = self.m;
        let nm = m + 1;
        let mut a_b = vec![0.0; m];
        for (r, &bv) in self.basis.iter().enumerate() {
            if let Kind::Structural(k) = self.kinds[bv] {
                if let Some(&(_, v)) = self.cols[k].iter().find(|&&(row, _)| row == i) {
                    a_b[r] = v;
                }
            }
        }
        let mut binv = vec![0.0; nm * nm];
        for r in 0..m {
            binv[r * nm..r * nm + m].copy_from_slice(&self.binv[r * m..(r + 1) * m]);
        }
        for r in 0..m {
            if a_b[r] != 0.0 {
                let row = &self.binv[r * m..(r + 1) * m];
                for c in 0..m {
                    binv[m * nm + c] += a_b[r] * row[c];
                }
            }
        }
        binv[m * nm + m] = -1.0;
        self.binv = binv;
        self.basis.push(var);
        self.m = nm;
        i
    }

    pub(crate) fn set_bounds(&mut self, k: usize, lower: f64, upper: f64) {
        let j = self.structural[k];
        self.set_var_bounds(j, lower, upper);
    }

    fn set_var_bounds(&mut self, j: usize, lower: f64, upper: f64) {
        self.lower[j] = lower;
        self.upper[j] = upper;
        match self.state[j] {
            State::Basic => {}
            State::Lower if lower.is_finite() => self.x[j] = lower,
            State::Upper if upper.is_finite() => self.x[j] = upper,
            _ => {
                let (st, val) = Self::nonbasic_state(lower, upper);
                self.state[j] = st;
                self.x[j] = val;
            }
        }
    }

    pub(crate) fn bounds(&self, k: usize) -> (f64, f64) {
        let j = self.structural[k];
        (self.lower[j], self.upper[j])
    }

    #[cfg(test)]
    pub(crate) fn value(&self, k: usize) -> f64 {
        self.x[self.structural[k]]
    }

    pub(crate) fn values(&self) -> Vec<f64> {
        self.structural.iter().map(|&j| self.x[j]).collect()
    }

    pub(crate) fn objective(&self) -> f64 {
        self.structural
            .iter()
            .map(|&j| self.cost[j] * self.x[j])
            .sum()
    }

    /// Row duals `y = c_B B^-1` of the current basis.
    pub(crate) fn duals(&self) -> Vec<f64> {
        let cb: Vec<f64> = self.basis.iter().map(|&j| self.cost[j]).collect();
        self.btran(&cb)
    }

    fn btran(&self, cb: &[f64]) -> Vec<f64> {
        let m = self.m;
        let mut y = vec![0.0; m];
        for r in 0..m {
            let c = cb[r];
            if c != 0.0 {
                let row = &self.binv[r * m..(r + 1) * m];
                for i in 0..m {
                    y[i] += c * row[i];
                }
            }
        }
        y
    }

    #[inline]
    fn dot_column(&self, j: usize, y: &[f64]) -> f64 {
        match self.kinds[j] {
            Kind::Structural(k) => self.cols[k].iter().map(|&(i, v)| y[i] * v).sum(),
            Kind::Row(i) => -y[i],
        }
    }

    fn ftran(&self, j: usize) -> Vec<f64> {
        let m = self.m;
        let mut out = vec![0.0; m];
        match self.kinds[j] {
            Kind::Structural(k) => {
                for &(i, v) in &self.cols[k] {
                    for r in 0..m {
                        out[r] += self.binv[r * m + i] * v;
                    }
                }
            }
            Kind::Row(i) => {
                for r in 0..m {
                    out[r] = -self.binv[r * m + i];
                }
            }
        }
        out
    }

    fn pivot(&mut self, r: usize, q: usize, alpha: &[f64]) {
        let m = self.m;
        let piv = alpha[r];
        {
            let row = &mut self.binv[r * m..(r + 1) * m];
            for v in row.iter_mut() {
                *v /= piv;
            }
        }
        let pivot_row: Vec<f64> = self.binv[r * m..(r + 1) * m].to_vec();
        for i in 0..m {
            if i != r {
                let a = alpha[i];
                if a != 0.0 {
                    let row = &mut self.binv[i * m..(i + 1) * m];
                    for c in 0..m {
                        row[c] -= a * pivot_row[c];
                    }
                }
            }
        }
        self.basis[r] = q;
        self.state[q] = State::Basic;
        self.since_refactor += 1;
    }

    /// Rebuilds the basis inverse and basic values. Dependent basis columns
    /// are swapped for row variables.
    pub(crate) fn refactor(&mut self) {
        let m = self.m;
        if m == 0 {
            self.binv.clear();
            self.since_refactor = 0;
            return;
        }
        for attempt in 0.. {
            if attempt == 4 {
                self.reset_basis();
                return;
            }
            let mut mat = vec![0.0; m * m];
            for (c, &j) in self.basis.iter().enumerate() {
                match self.kinds[j] {
                    Kind::Structural(k) => {
                        for &(i, v) in &self.cols[k] {
                            mat[i * m + c] = v;
                        }
                    }
                    Kind::Row(i) => mat[i * m + c] = -1.0,
                }
            }
            match invert(&mut mat, m) {
                Ok(inv) => {
                    // inv is the inverse of mat, indexed [basis position][row]
                    self.binv = inv;
                    break;
                }
                Err(bad_cols) => {
                    let mut covered = vec![false; m];
                    for (c, &j) in self.basis.iter().enumerate() {
                        if bad_cols.contains(&c) {
                            continue;
                        }
                        if let Kind::Row(i) = self.kinds[j] {
                            covered[i] = true;
                        }
                    }
                    let free_rows: Vec<usize> = (0..m)
                        .filter(|&i| !covered[i] && !self.basis.iter().any(|&j| j == self.rows[i]))
                        .collect();
                    let mut free_rows = free_rows.into_iter();
                    for c in bad_cols {
                        let Some(i) = free_rows.next() else { break };
                        let out = self.basis[c];
                        let (st, val) = self.snap_to_bound(out);
                        self.state[out] = st;
                        self.x[out] = val;
                        let row_var = self.rows[i];
                        self.basis[c] = row_var;
                        self.state[row_var] = State::Basic;
                    }
                }
            }
        }
        self.since_refactor = 0;
        self.recompute_basic_values();
    }

    fn snap_to_bound(&self, j: usize) -> (State, f64) {
        let (l, u, v) = (self.lower[j], self.upper[j], self.x[j]);
        match (l.is_finite(), u.is_finite()) {
            (true, true) => {
                if (v - l).abs() <= (u - v).abs() {
                    (State::Lower, l)
                } else {
                    (State::Upper, u)
                }
            }
            (true, false) => (State::Lower, l),
            (false, true) => (State::Upper, u),
            (false, false) => (State::Free, 0.0),
        }
    }

    /// `x_B = -B^-1 N x_N`.
    pub(crate) fn recompute_basic_values(&mut self) {
        let m = self.m;
        let mut rhs = vec![0.0; m];
        for j in 0..self.kinds.len() {
            if self.state[j] == State::Basic {
                continue;
            }
            let v = self.x[j];
            if v == 0.0 {
                continue;
            }
            match self.kinds[j] {
                Kind::Structural(k) => {
                    for &(i, a) in &self.cols[k] {
                        rhs[i] -= a * v;
                    }
                }
                Kind::Row(i) => rhs[i] += v,
            }
        }
        for r in 0..m {
            let row = &self.binv[r * m..(r + 1) * m];
            let mut s = 0.0;
            for i in 0..m {
                s += row[i] * rhs[i];
            }
            self.x[self.basis[r]] = s;
        }
    }

    fn infeasibility(&self, j: usize) -> f64 {
        let v = self.x[j];
        if v < self.lower[j] - PRIMAL_TOL {
            self.lower[j] - v
        } else if v > self.upper[j] + PRIMAL_TOL {
            v - self.upper[j]
        } else {
            0.0
        }
    }

    fn primal_feasible(&self) -> bool {
        self.basis.iter().all(|&j| self.infeasibility(j) == 0.0)
    }

    fn dual_feasible(&self) -> bool {
        let y = self.duals();
        (0..self.kinds.len()).all(|j| {
            if self.lower[j] == self.upper[j] {
                return true;
            }
            let d = self.cost[j] - self.dot_column(j, &y);
            match self.state[j] {
                State::Basic => true,
                State::Lower => d >= -DUAL_TOL * 10.0,
                State::Upper => d <= DUAL_TOL * 10.0,
                State::Free => d.abs() <= DUAL_TOL * 10.0,
            }
        })
    }

    /// Solves from the current basis, choosing primal or dual simplex.
    pub(crate) fn solve(&mut self) -> SimplexStatus {
        self.solve_start = self.iterations;
        if self.basis.len() != self.m {
            self.reset_basis();
        }
        // bound changes and added rows keep the inverse valid
        if self.since_refactor >= REFACTOR_EVERY {
            self.refactor();
        } else {
            self.recompute_basic_values();
        }
        for _ in 0..4 {
            let status = if self.primal_feasible() {
                self.primal()
            } else if self.dual_feasible() {
                match self.dual() {
                    SimplexStatus::Numerical => self.primal(),
                    s => s,
                }
            } else {
                self.primal()
            };
            if status != SimplexStatus::Optimal {
                return status;
            }
            if self.since_refactor >= REFACTOR_EVERY {
                self.refactor();
            } else {
                self.recompute_basic_values();
            }
            if self.primal_feasible() && self.dual_feasible() {
                return SimplexStatus::Optimal;
            }
        }
        SimplexStatus::Numerical
    }

    /// Slack basis: every row variable basic.
    pub(crate) fn reset_basis(&mut self) {
        for j in 0..self.kinds.len() {
            if matches!(self.kinds[j], Kind::Structural(_)) {
                let (st, val) = Self::nonbasic_state(self.lower[j], self.upper[j]);
                self.state[j] = st;
                self.x[j] = val;
            }
        }
        self.basis = self.rows.clone();
        for &j in &self.rows {
            self.state[j] = State::Basic;
        }
        let m = self.m;
        self.binv = vec![0.0; m * m];
        for i in 0..m {
            self.binv[i * m + i] = -1.0;
        }
        self.since_refactor = 0;
        self.recompute_basic_values();
    }

    fn working_bounds(&self, j: usize, phase1: bool) -> (f64, f64) {
        let (l, u, v) = (self.lower[j], self.upper[j], self.x[j]);
        if phase1 {
            if v < l - PRIMAL_TOL {
                return (-INF, l);
            }
            if v > u + PRIMAL_TOL {
                return (u, INF);
            }
        }
        (l, u)
    }

    fn primal(&mut self) -> SimplexStatus {
        let mut degenerate = 0usize;
        loop {
            if self.iterations - self.solve_start >= self.iteration_limit {
                return SimplexStatus::IterationLimit;
            }
            if self.since_refactor >= REFACTOR_EVERY {
                self.refactor();
            }
            let m = self.m;
            let mut phase1 = false;
            let mut cb = vec![0.0; m];
            for r in 0..m {
                let j = self.basis[r];
                let v = self.x[j];
                if v < self.lower[j] - PRIMAL_TOL {
                    cb[r] = -1.0;
                    phase1 = true;
                } else if v > self.upper[j] + PRIMAL_TOL {
                    cb[r] = 1.0;
                    phase1 = true;
                }
            }
            if !phase1 {
                for r in 0..m {
                    cb[r] = self.cost[self.basis[r]];
                }
            }
            let y = self.btran(&cb);
            let bland = degenerate >= DEGENERATE_SWITCH;

            let mut entering = None;
            let mut best_score = 0.0;
            for j in 0..self.kinds.len() {
                let st = self.state[j];
                if st == State::Basic || self.lower[j] == self.upper[j] {
                    continue;
                }
                let c = if phase1 { 0.0 } else { self.cost[j] };
                let d = c - self.dot_column(j, &y);
                let eligible = match st {
                    State::Lower => d < -DUAL_TOL,
                    State::Upper => d > DUAL_TOL,
                    State::Free => d.abs() > DUAL_TOL,
                    State::Basic => false,
                };
                if !eligible {
                    continue;
                }
                if bland {
                    entering = Some((j, d));
                    break;
                }
                let score = d.abs();
                if score > best_score {
                    best_score = score;
                    entering = Some((j, d));
                }
            }
            let Some((q, dq)) = entering else {
                return if phase1 {
                    SimplexStatus::Infeasible
                } else {
                    SimplexStatus::Optimal
                };
            };
            let dir = if dq < 0.0 { 1.0 } else { -1.0 };
            let alpha = self.ftran(q);

            let mut theta = self.upper[q] - self.lower[q];
            let mut leave: Option<(usize, f64)> = None;
            let mut leave_alpha = 0.0;
            for r in 0..m {
                let a = alpha[r];
                if a.abs() < PIVOT_TOL {
                    continue;
                }
                let j = self.basis[r];
                let rate = -dir * a;
                let (lo, hi) = self.working_bounds(j, phase1);
                let (t, bound) = if rate < 0.0 {
                    if !lo.is_finite() {
                        continue;
                    }
                    (((self.x[j] - lo) / -rate).max(0.0), lo)
                } else {
                    if !hi.is_finite() {
                        continue;
                    }
                    (((hi - self.x[j]) / rate).max(0.0), hi)
                };
                let better = match leave {
                    None => t < theta,
                    Some((lr, _)) => {
                        if t < theta - 1e-12 {
                            true
                        } else if t <= theta + 1e-12 {
                            if bland {
                                j < self.basis[lr]
                            } else {
                                a.abs() > leave_alpha
                            }
                        } else {
                            false
                        }
                    }
                };
                if better {
                    theta = t;
                    leave = Some((r, bound));
                    leave_alpha = a.abs();
                }
            }
            if !theta.is_finite() {
                return if phase1 {
                    SimplexStatus::Numerical
                } else {
                    SimplexStatus::Unbounded
                };
            }
            if theta <= 1e-12 {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            self.iterations += 1;
            for r in 0..m {
                let a = alpha[r];
                if a != 0.0 {
                    let j = self.basis[r];
                    self.x[j] -= dir * theta * a;
                }
            }
            self.x[q] += dir * theta;
            match leave {
                None => {
                    // bound flip
                    if dir > 0.0 {
                        self.state[q] = State::Upper;
                        self.x[q] = self.upper[q];
                    } else {
                        self.state[q] = State::Lower;
                        self.x[q] = self.lower[q];
                    }
                }
                Some((r, bound)) => {
                    let out = self.basis[r];
                    self.x[out] = bound;
                    self.state[out] = if bound == self.lower[out] {
                        State::Lower
                    } else {
                        State::Upper
                    };
                    self.pivot(r, q, &alpha);
                }
            }
        }
    }

    fn dual(&mut self) -> SimplexStatus {
        let mut stalls = 0usize;
        loop {
            if self.iterations - self.solve_start >= self.iteration_limit {
                return SimplexStatus::IterationLimit;
            }
            if self.since_refactor >= REFACTOR_EVERY {
                self.refactor();
            }
            let m = self.m;
            let bland = stalls >= DEGENERATE_SWITCH;
            let mut leave = None;
            let mut worst = 0.0;
            for r in 0..m {
                let inf = self.infeasibility(self.basis[r]);
                if inf > 0.0 {
                    if bland {
                        if leave.map_or(true, |lr: usize| self.basis[r] < self.basis[lr]) {
                            leave = Some(r);
                        }
                    } else if inf > worst {
                        worst = inf;
                        leave = Some(r);
                    }
                }
            }
            let Some(r) = leave else {
                return SimplexStatus::Optimal;
            };
            let out = self.basis[r];
            let increase = self.x[out] < self.lower[out];
            let target = if increase { self.lower[out] } else { self.upper[out] };

            let cb: Vec<f64> = self.basis.iter().map(|&j| self.cost[j]).collect();
            let y = self.btran(&cb);
            let rho: Vec<f64> = self.binv[r * m..(r + 1) * m].to_vec();

            let mut entering = None;
            let mut best_ratio = INF;
            let mut best_alpha = 0.0;
            for j in 0..self.kinds.len() {
                let st = self.state[j];
                if st == State::Basic || self.lower[j] == self.upper[j] {
                    continue;
                }
                let arj = self.dot_column(j, &rho);
                if arj.abs() < PIVOT_TOL {
                    continue;
                }
                // x_out changes by -arj * dx_j
                let can_up = matches!(st, State::Lower | State::Free);
                let can_down = matches!(st, State::Upper | State::Free);
                let ok = if increase {
                    (can_up && arj < 0.0) || (can_down && arj > 0.0)
                } else {
                    (can_up && arj > 0.0) || (can_down && arj < 0.0)
                };
                if !ok {
                    continue;
                }
                let d = self.cost[j] - self.dot_column(j, &y);
                let ratio = d.abs() / arj.abs();
                let better = if ratio < best_ratio - 1e-12 {
                    true
                } else if ratio <= best_ratio + 1e-12 {
                    if bland {
                        entering.map_or(true, |e| j < e)
                    } else {
                        arj.abs() > best_alpha
                    }
                } else {
                    false
                };
                if better {
                    best_ratio = ratio;
                    best_alpha = arj.abs();
                    entering = Some(j);
                }
            }
            let Some(q) = entering else {
                return SimplexStatus::Infeasible;
            };
            let alpha = self.ftran(q);
            if alpha[r].abs() < PIVOT_TOL {
                return SimplexStatus::Numerical;
            }
            let dq = (self.x[out] - target) / alpha[r];
            if best_ratio <= 1e-12 {
                stalls += 1;
            } else {
                stalls = 0;
            }
            self.iterations += 1;
            for i in 0..m {
                let a = alpha[i];
                if a != 0.0 {
                    let j = self.basis[i];
                    self.x[j] -= a * dq;
                }
            }
            self.x[q] += dq;
            self.x[out] = target;
            self.state[out] = if target == self.lower[out] {
                State::Lower
            } else {
                State::Upper
            };
            self.pivot(r, q, &alpha);
        }
    }
}

/// Gauss-Jordan inversion with partial pivoting. On failure returns the
/// columns that could not be pivoted.
fn invert(mat: &mut [f64], m: usize) -> Result<Vec<f64>, Vec<usize>> {
    // Solve mat * X = I; X[c][i] gives the inverse with rows indexed by column
    // of mat (basis position) and columns by constraint row.
    let mut inv = vec![0.0; m * m];
    for i in 0..m {
        inv[i * m + i] = 1.0;
    }
    let mut row_of_col = vec![usize::MAX; m];
    let mut used = vec![false; m];
    let mut bad = Vec::new();
    for c in 0..m {
        let mut best = SINGULAR_TOL;
        let mut p = usize::MAX;
        for i in 0..m {
            if !used[i] {
                let v = mat[i * m + c].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
        }
        if p == usize::MAX {
            bad.push(c);
            continue;
        }
        used[p] = true;
        row_of_col[c] = p;
        let piv = mat[p * m + c];
        // bases are mostly unit columns; only touch the pivot row's nonzeros
        let mat_nz: Vec<usize> = (0..m).filter(|&k| mat[p * m + k] != 0.0).collect();
        let inv_nz: Vec<usize> = (0..m).filter(|&k| inv[p * m + k] != 0.0).collect();
        for &k in &mat_nz {
            mat[p * m + k] /= piv;
        }
        for &k in &inv_nz {
            inv[p * m + k] /= piv;
        }
        for i in 0..m {
            if i != p {
                let f = mat[i * m + c];
                if f != 0.0 {
                    for &k in &mat_nz {
                        mat[i * m + k] -= f * mat[p * m + k];
                    }
                    for &k in &inv_nz {
                        inv[i * m + k] -= f * inv[p * m + k];
                    }
                }
            }
        }
    }
    if !bad.is_empty() {
        return Err(bad);
    }
    // After elimination, row row_of_col[c] of inv is row c of the inverse.
    let mut out = vec![0.0; m * m];
    for c in 0..m {
        let p = row_of_col[c];
        out[c * m..(c + 1) * m].copy_from_slice(&inv[p * m..(p + 1) * m]);
    }
    Ok(out)
}
