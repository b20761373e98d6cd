use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::{PricingError, PricingInput, Strategy};
use crate::lp::{Cmp, LinearProgram, Sense, VarId};

/// Index standing for the auxiliary root node in [`PricingModel::arcs`].
pub const AUX: usize = usize::MAX;

/// A pricing formulation: the program plus handles on its variable blocks
/// and the row indices of every constraint family.
#[derive(Clone, Debug)]
pub struct PricingModel {
    pub lp: LinearProgram,
    pub strategy: Strategy,
    n: usize,
    pub x: Vec<VarId>,
    z: Vec<Option<VarId>>,
    /// Directed arcs: both orientations of every edge, then `(AUX, i)`
    /// for the auxiliary-node strategies.
    pub arcs: Vec<(usize, usize)>,
    /// Flow per arc (empty for the arborescence models).
    pub f: Vec<VarId>,
    /// Arc selection per arc (empty for the flow models).
    pub t: Vec<VarId>,
    pub ell: Vec<VarId>,
    /// Root-link binaries of the auxiliary flow model.
    pub z0: Vec<VarId>,
    families: BTreeMap<&'static str, Vec<usize>>,
}

impl PricingModel {
    fn new(input: &PricingInput, z_upper: f64) -> Self {
        let g = input.graph;
        let n = g.n();
        let mut lp = LinearProgram::new(Sense::Minimize);
        let x = (0..n)
            .map(|i| lp.add_binary(format!("x_{}", i + 1), -input.gamma[i]))
            .collect();
        let mut z = vec![None; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let v = lp.add_var(format!("z_{}_{}", i + 1, j + 1), 0.0, z_upper, g.cost(i, j) as f64, false);
                z[i * n + j] = Some(v);
            }
        }
        let mut arcs = Vec::with_capacity(2 * g.edges().len());
        for &(i, j) in g.edges() {
            arcs.push((i, j));
            arcs.push((j, i));
        }
        PricingModel {
            lp,
            strategy: input.strategy,
            n,
            x,
            z,
            arcs,
            f: Vec::new(),
            t: Vec::new(),
            ell: Vec::new(),
            z0: Vec::new(),
            families: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The pair variable of `{i, j}` (either order).
    pub fn z(&self, i: usize, j: usize) -> VarId {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.z[a * self.n + b].expect("pair variable")
    }

    pub fn num_z(&self) -> usize {
        self.z.iter().filter(|v| v.is_some()).count()
    }

    /// Row indices of a constraint family (empty when absent).
    pub fn family(&self, name: &str) -> &[usize] {
        self.families.get(name).map_or(&[], |v| v.as_slice())
    }

    /// Family names with their row counts.
    pub fn families(&self) -> impl Iterator<Item = (&'static str, usize)> + '_ {
        self.families.iter().map(|(k, v)| (*k, v.len()))
    }

    fn row(&mut self, family: &'static str, terms: Vec<(VarId, f64)>, cmp: Cmp, rhs: f64) {
        let mut merged: Vec<(VarId, f64)> = Vec::with_capacity(terms.len());
        let mut sorted = terms;
        sorted.sort_by_key(|t| t.0);
        for (v, a) in sorted {
            match merged.last_mut() {
                Some(last) if last.0 == v => last.1 += a,
                _ => merged.push((v, a)),
            }
        }
        merged.retain(|t| t.1 != 0.0);
        let k = self.families.get(family).map_or(0, |v| v.len());
        let idx = self
            .lp
            .add_constraint(format!("{family}#{}", k + 1), merged, cmp, rhs);
        self.families.entry(family).or_default().push(idx);
    }

    fn link_rows(&mut self) {
        let n = self.n;
        for i in 0..n {
            for j in i + 1..n {
                let (z, xi, xj) = (self.z(i, j), self.x[i], self.x[j]);
                self.row("link-i", vec![(z, 1.0), (xi, -1.0)], Cmp::Le, 0.0);
                self.row("link-j", vec![(z, 1.0), (xj, -1.0)], Cmp::Le, 0.0);
                self.row("link-both", vec![(z, 1.0), (xi, -1.0), (xj, -1.0)], Cmp::Ge, -1.0);
            }
        }
    }

    fn pair_rows(&mut self, input: &PricingInput) {
        for &(a, b) in input.same_pairs {
            let terms = vec![(self.x[a], 1.0), (self.x[b], -1.0)];
            self.row("same", terms, Cmp::Eq, 0.0);
        }
        for &(a, b) in input.differ_pairs {
            let terms = vec![(self.x[a], 1.0), (self.x[b], 1.0)];
            self.row("differ", terms, Cmp::Le, 1.0);
        }
    }

    fn arc_name(prefix: &str, (i, j): (usize, usize)) -> alloc::string::String {
        let a = if i == AUX { 0 } else { i + 1 };
        format!("{prefix}_{a}_{}", j + 1)
    }

    fn in_arcs(&self, k: usize) -> impl Iterator<Item = usize> + '_ {
        self.arcs
            .iter()
            .enumerate()
            .filter(move |(_, &(a, b))| b == k && a != AUX)
            .map(|(p, _)| p)
    }

    fn out_arcs(&self, k: usize) -> impl Iterator<Item = usize> + '_ {
        self.arcs
            .iter()
            .enumerate()
            .filter(move |(_, &(a, _))| a == k)
            .map(|(p, _)| p)
    }

    fn aux_arc(&self, k: usize) -> usize {
        self.arcs
            .iter()
            .position(|&(a, b)| a == AUX && b == k)
            .expect("auxiliary arc")
    }

    /// Position of arc `(j, i)` given the position of `(i, j)` for a graph
    /// arc (orientations are stored adjacently).
    fn reverse(p: usize) -> usize {
        p ^ 1
    }
}

/// Builds the formulation of `input.strategy`.
pub fn build_model(input: &PricingInput) -> Result<PricingModel, PricingError> {
    input.validate()?;
    Ok(match input.strategy {
        Strategy::Flow | Strategy::FlowCliqueRelax => build_flow(input),
        Strategy::Mtz | Strategy::MtzCliqueRelax => build_mtz(input),
        Strategy::Flow0 => build_flow0(input),
        Strategy::Mtz0 => build_mtz0(input),
        Strategy::ConnectivityRelax => build_connectivity(input),
        Strategy::Combinatorial => return Err(PricingError::NoModel(Strategy::Combinatorial)),
    })
}

fn build_flow(input: &PricingInput) -> PricingModel {
    let relaxed = input.strategy.clique_relaxed();
    let mut m = PricingModel::new(input, if relaxed { 1.0 } else { f64::INFINITY });
    let n = m.n;
    let nf = n as f64;
    for p in 0..m.arcs.len() {
        let name = PricingModel::arc_name("f", m.arcs[p]);
        let v = m.lp.add_var(name, 0.0, f64::INFINITY, 0.0, false);
        m.f.push(v);
    }
    if !relaxed {
        m.link_rows();
    }
    // net inflow of every non-source member is at least one; the largest
    // member is the only source and sends at most n - 2 units
    for k in 0..n {
        for j in k + 1..n {
            let mut terms: Vec<(VarId, f64)> = m.in_arcs(k).map(|p| (m.f[p], 1.0)).collect();
            terms.extend(m.out_arcs(k).map(|p| (m.f[p], -1.0)));
            terms.push((m.x[k], -1.0));
            terms.push((m.x[j], -(nf - 1.0)));
            m.row("flow-balance", terms, Cmp::Ge, -(nf - 1.0));
        }
    }
    for i in 0..n {
        let mut terms: Vec<(VarId, f64)> = m.out_arcs(i).map(|p| (m.f[p], 1.0)).collect();
        terms.extend((0..n).filter(|&j| j != i).map(|j| (m.z(i, j), -1.0)));
        m.row("outflow-cap", terms, Cmp::Le, 0.0);
    }
    if input.strengthen {
        for i in 0..n {
            let mut terms: Vec<(VarId, f64)> = m.out_arcs(i).map(|p| (m.f[p], 1.0)).collect();
            terms.extend((0..i).map(|k| (m.x[k], -1.0)));
            terms.extend((i + 1..n).map(|k| (m.z(i, k), nf)));
            terms.push((m.x[i], -nf));
            m.row("source-outflow", terms, Cmp::Ge, -nf);
        }
        for p in (0..m.arcs.len()).step_by(2) {
            let (i, j) = m.arcs[p];
            let q = PricingModel::reverse(p);
            let terms = vec![(m.f[p], 1.0), (m.f[q], 1.0), (m.z(i, j), -(nf - 1.0))];
            m.row("edge-flow", terms, Cmp::Le, 0.0);
        }
        for p in (0..m.arcs.len()).step_by(2) {
            let (i, j) = m.arcs[p];
            let q = PricingModel::reverse(p);
            let mut terms = vec![(m.f[p], 1.0), (m.f[q], 1.0), (m.z(i, j), -(nf - 2.0))];
            terms.extend((i + 1..n).map(|k| (m.z(i, k), -1.0)));
            m.row("edge-flow-tight", terms, Cmp::Le, 0.0);
        }
    }
    m.pair_rows(input);
    m
}

fn add_arc_binaries(m: &mut PricingModel) {
    for p in 0..m.arcs.len() {
        let name = PricingModel::arc_name("t", m.arcs[p]);
        let v = m.lp.add_binary(name, 0.0);
        m.t.push(v);
    }
    for i in 0..m.n {
        let v = m
            .lp
            .add_var(format!("l_{}", i + 1), f64::NEG_INFINITY, f64::INFINITY, 0.0, false);
        m.ell.push(v);
    }
}

fn order_and_pair_rows(m: &mut PricingModel) {
    let nf = m.n as f64;
    for p in 0..m.arcs.len() {
        let (i, j) = m.arcs[p];
        if i == AUX {
            continue;
        }
        let terms = vec![(m.ell[i], 1.0), (m.ell[j], -1.0), (m.t[p], nf)];
        m.row("mtz-order", terms, Cmp::Le, nf - 1.0);
    }
    for p in 0..m.arcs.len() {
        let (i, j) = m.arcs[p];
        if i == AUX || i > j {
            continue;
        }
        let q = PricingModel::reverse(p);
        let terms = vec![(m.t[p], 1.0), (m.t[q], 1.0), (m.z(i, j), -1.0)];
        m.row("arc-pair", terms, Cmp::Le, 0.0);
    }
}

fn build_mtz(input: &PricingInput) -> PricingModel {
    let relaxed = input.strategy.clique_relaxed();
    let mut m = PricingModel::new(input, if relaxed { 1.0 } else { f64::INFINITY });
    let n = m.n;
    let nf = n as f64;
    add_arc_binaries(&mut m);
    if !relaxed {
        m.link_rows();
    }
    order_and_pair_rows(&mut m);
    for k in 0..n {
        for j in k + 1..n {
            let mut terms: Vec<(VarId, f64)> = m.in_arcs(k).map(|p| (m.t[p], 1.0)).collect();
            terms.push((m.x[j], -1.0));
            terms.push((m.x[k], -1.0));
            m.row("in-arc", terms, Cmp::Ge, -1.0);
        }
    }
    if input.strengthen {
        for j in 0..n {
            let mut terms: Vec<(VarId, f64)> = m.in_arcs(j).map(|p| (m.t[p], 1.0)).collect();
            terms.push((m.x[j], -1.0));
            m.row("in-degree", terms, Cmp::Le, 0.0);
        }
        for j in 0..n {
            let mut terms: Vec<(VarId, f64)> = m.in_arcs(j).map(|p| (m.t[p], 1.0)).collect();
            terms.extend((j + 1..n).map(|k| (m.z(j, k), -1.0)));
            m.row("root-no-in", terms, Cmp::Le, 0.0);
        }
        for j in 0..n {
            let mut terms: Vec<(VarId, f64)> = m.in_arcs(j).map(|p| (m.t[p], -(nf - 1.0))).collect();
            terms.push((m.ell[j], 1.0));
            m.row("label-upper", terms, Cmp::Le, 0.0);
        }
        for i in 0..n {
            let mut terms: Vec<(VarId, f64)> = m.in_arcs(i).map(|p| (m.t[p], -1.0)).collect();
            terms.push((m.ell[i], 1.0));
            m.row("label-lower", terms, Cmp::Ge, 0.0);
        }
    }
    m.pair_rows(input);
    m
}

fn build_flow0(input: &PricingInput) -> PricingModel {
    let mut m = PricingModel::new(input, f64::INFINITY);
    let n = m.n;
    let nf = n as f64;
    for i in 0..n {
        m.arcs.push((AUX, i));
    }
    for p in 0..m.arcs.len() {
        let name = PricingModel::arc_name("f", m.arcs[p]);
        let v = m.lp.add_var(name, 0.0, f64::INFINITY, 0.0, false);
        m.f.push(v);
    }
    for i in 0..n {
        let v = m.lp.add_binary(format!("z_0_{}", i + 1), 0.0);
        m.z0.push(v);
    }
    m.link_rows();
    let graph_arcs = 2 * input.graph.edges().len();
    for p in (0..graph_arcs).step_by(2) {
        let (i, j) = m.arcs[p];
        let q = PricingModel::reverse(p);
        let terms = vec![(m.f[p], 1.0), (m.f[q], 1.0), (m.z(i, j), -(nf - 1.0))];
        m.row("aux-edge-flow", terms, Cmp::Le, 0.0);
    }
    let mut supply: Vec<(VarId, f64)> = (0..n).map(|i| (m.f[m.aux_arc(i)], 1.0)).collect();
    supply.extend((0..n).map(|i| (m.x[i], -1.0)));
    m.row("aux-supply", supply, Cmp::Eq, 0.0);
    for i in 0..n {
        let mut terms = vec![(m.f[m.aux_arc(i)], 1.0)];
        terms.extend(m.in_arcs(i).map(|p| (m.f[p], 1.0)));
        terms.extend(m.out_arcs(i).map(|p| (m.f[p], -1.0)));
        terms.push((m.x[i], -1.0));
        m.row("aux-balance", terms, Cmp::Eq, 0.0);
    }
    for i in 0..n {
        let terms = vec![(m.z0[i], 1.0), (m.x[i], -1.0)];
        m.row("aux-link", terms, Cmp::Le, 0.0);
    }
    for i in 0..n {
        let terms = vec![(m.f[m.aux_arc(i)], 1.0), (m.z0[i], -nf)];
        m.row("aux-cap", terms, Cmp::Le, 0.0);
    }
    let single = (0..n).map(|i| (m.z0[i], 1.0)).collect();
    m.row("aux-single", single, Cmp::Le, 1.0);
    m.pair_rows(input);
    m
}

fn build_mtz0(input: &PricingInput) -> PricingModel {
    let mut m = PricingModel::new(input, f64::INFINITY);
    let n = m.n;
    let nf = n as f64;
    for i in 0..n {
        m.arcs.push((AUX, i));
    }
    add_arc_binaries(&mut m);
    m.link_rows();
    order_and_pair_rows(&mut m);
    for j in 0..n {
        let mut terms = vec![(m.t[m.aux_arc(j)], 1.0)];
        terms.extend(m.in_arcs(j).map(|p| (m.t[p], 1.0)));
        terms.push((m.x[j], -1.0));
        m.row("aux-in-arc", terms, Cmp::Eq, 0.0);
    }
    let roots = (0..n).map(|j| (m.t[m.aux_arc(j)], 1.0)).collect();
    m.row("aux-single-root", roots, Cmp::Eq, 1.0);
    if input.strengthen {
        let graph_arcs = 2 * input.graph.edges().len();
        for p in (0..graph_arcs).step_by(2) {
            let (i, j) = m.arcs[p];
            let terms = vec![(m.t[m.aux_arc(j)], 1.0), (m.z(i, j), 1.0), (m.x[j], -1.0)];
            m.row("aux-root-min", terms, Cmp::Le, 0.0);
        }
        for i in 0..n {
            let terms = vec![(m.ell[i], 1.0), (m.x[i], -1.0), (m.t[m.aux_arc(i)], 1.0)];
            m.row("aux-label-lower", terms, Cmp::Ge, 0.0);
        }
        for j in 0..n {
            let terms = vec![(m.ell[j], 1.0), (m.t[m.aux_arc(j)], nf - 1.0)];
            m.row("aux-label-upper", terms, Cmp::Le, nf - 1.0);
        }
    }
    m.pair_rows(input);
    m
}

fn build_connectivity(input: &PricingInput) -> PricingModel {
    let mut m = PricingModel::new(input, f64::INFINITY);
    m.link_rows();
    m.pair_rows(input);
    m
}
