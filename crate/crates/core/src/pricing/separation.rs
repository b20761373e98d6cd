use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::model::PricingModel;
use crate::graph::AttributedGraph;
use crate::lp::{Cmp, Cut, CutCallback};
use crate::EPS_FEAS;

const SUPPORT_TOL: f64 = 1e-9;

/// One of the three rows tying `z_ij` to `x_i x_j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LinkCut {
    /// `z_ij <= x_i`
    BelowI(usize, usize),
    /// `z_ij <= x_j`
    BelowJ(usize, usize),
    /// `z_ij >= x_i + x_j - 1`
    Above(usize, usize),
}

impl LinkCut {
    pub fn violation(&self, x: &[f64], z: &dyn Fn(usize, usize) -> f64) -> f64 {
        match *self {
            LinkCut::BelowI(i, j) => z(i, j) - x[i],
            LinkCut::BelowJ(i, j) => z(i, j) - x[j],
            LinkCut::Above(i, j) => x[i] + x[j] - 1.0 - z(i, j),
        }
    }
}

/// Enumerates all pair-linking rows and returns those violated by more than
/// the feasibility tolerance.
pub fn clique_separation(x: &[f64], z: &dyn Fn(usize, usize) -> f64) -> Vec<LinkCut> {
    let n = x.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for cut in [LinkCut::BelowI(i, j), LinkCut::BelowJ(i, j), LinkCut::Above(i, j)] {
                if cut.violation(x, z) > EPS_FEAS {
                    out.push(cut);
                }
            }
        }
    }
    out
}

/// `sum_{(a,b) in bridges} z_ab - z_ij >= 0`: if `i` and `j` share a set,
/// some vertex outside the current support joins them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BridgeCut {
    pub i: usize,
    pub j: usize,
    /// Pairs `(min, max)` of `i` with every vertex outside the support.
    pub bridges: Vec<(usize, usize)>,
}

impl BridgeCut {
    pub fn lhs(&self, z: &dyn Fn(usize, usize) -> f64) -> f64 {
        self.bridges.iter().map(|&(a, b)| z(a, b)).sum::<f64>() - z(self.i, self.j)
    }
}

/// Bridge cuts for every pair of the support `{k : x_k > 0}` that is split
/// across components of the induced subgraph, keeping only those violated
/// by the given point.
pub fn connectivity_separation(graph: &AttributedGraph, x: &[f64], z: &dyn Fn(usize, usize) -> f64) -> Vec<BridgeCut> {
    let n = graph.n();
    let support: Vec<usize> = (0..n).filter(|&k| x[k] > SUPPORT_TOL).collect();
    let mut comp = vec![usize::MAX; n];
    for (c, block) in graph.induced_components(&support).iter().enumerate() {
        for &v in block {
            comp[v] = c;
        }
    }
    let mut out = Vec::new();
    for (a, &i) in support.iter().enumerate() {
        for &j in &support[a + 1..] {
            if comp[i] == comp[j] {
                continue;
            }
            let bridges = (0..n)
                .filter(|&l| comp[l] == usize::MAX)
                .map(|l| if l > i { (i, l) } else { (l, i) })
                .collect();
            let cut = BridgeCut { i, j, bridges };
            if cut.lhs(z) < -EPS_FEAS {
                out.push(cut);
            }
        }
    }
    out
}

fn pair_value<'a>(model: &'a PricingModel, point: &'a [f64]) -> impl Fn(usize, usize) -> f64 + 'a {
    move |i, j| point[model.z(i, j).0]
}

pub(crate) struct CliqueCallback<'m> {
    model: &'m PricingModel,
}

impl<'m> CliqueCallback<'m> {
    pub(crate) fn new(model: &'m PricingModel) -> Self {
        CliqueCallback { model }
    }
}

impl CutCallback for CliqueCallback<'_> {
    fn separate(&mut self, point: &[f64], _integral: bool) -> Vec<Cut> {
        let m = self.model;
        let x: Vec<f64> = m.x.iter().map(|v| point[v.0]).collect();
        let z = pair_value(m, point);
        clique_separation(&x, &z)
            .into_iter()
            .map(|cut| match cut {
                LinkCut::BelowI(i, j) => Cut::new(
                    format!("link-i[{i},{j}]"),
                    vec![(m.z(i, j), 1.0), (m.x[i], -1.0)],
                    Cmp::Le,
                    0.0,
                ),
                LinkCut::BelowJ(i, j) => Cut::new(
                    format!("link-j[{i},{j}]"),
                    vec![(m.z(i, j), 1.0), (m.x[j], -1.0)],
                    Cmp::Le,
                    0.0,
                ),
                LinkCut::Above(i, j) => Cut::new(
                    format!("link-both[{i},{j}]"),
                    vec![(m.z(i, j), 1.0), (m.x[i], -1.0), (m.x[j], -1.0)],
                    Cmp::Ge,
                    -1.0,
                ),
            })
            .collect()
    }
}

/// Lazy bridge-cut generator for the connectivity-relaxed model. With
/// [`BridgeCallback::recording`] every emitted cut is kept together with the
/// model point that triggered it.
pub struct BridgeCallback<'g, 'm> {
    graph: &'g AttributedGraph,
    model: &'m PricingModel,
    fractional: bool,
    log: Option<Vec<(Vec<f64>, BridgeCut)>>,
}

impl<'g, 'm> BridgeCallback<'g, 'm> {
    pub fn new(graph: &'g AttributedGraph, model: &'m PricingModel, fractional: bool) -> Self {
        BridgeCallback {
            graph,
            model,
            fractional,
            log: None,
        }
    }

    pub fn recording(mut self) -> Self {
        self.log = Some(Vec::new());
        self
    }

    pub fn log(&self) -> &[(Vec<f64>, BridgeCut)] {
        self.log.as_deref().unwrap_or(&[])
    }
}

impl CutCallback for BridgeCallback<'_, '_> {
    fn separate(&mut self, point: &[f64], _integral: bool) -> Vec<Cut> {
        let m = self.model;
        let x: Vec<f64> = m.x.iter().map(|v| point[v.0]).collect();
        let z = pair_value(m, point);
        let cuts = connectivity_separation(self.graph, &x, &z);
        if let Some(log) = &mut self.log {
            log.extend(cuts.iter().map(|c| (point.to_vec(), c.clone())));
        }
        cuts.into_iter()
            .map(|cut| {
                let mut terms: Vec<_> = cut.bridges.iter().map(|&(a, b)| (m.z(a, b), 1.0)).collect();
                terms.push((m.z(cut.i, cut.j), -1.0));
                Cut::new(format!("bridge[{},{}]", cut.i, cut.j), terms, Cmp::Ge, 0.0)
            })
            .collect()
    }

    fn separates_fractional(&self) -> bool {
        self.fractional
    }
}
