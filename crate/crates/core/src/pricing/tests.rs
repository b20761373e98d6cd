use super::*;
use crate::clock::NoClock;
use crate::lp::Constraint;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use proptest::prelude::*;
use super::Strategy;
use proptest::strategy::Strategy as PropStrategy;
use crate::testutil::graph_from_parts;

fn path3() -> AttributedGraph {
    AttributedGraph::from_pair_costs(3, &[(0, 1), (1, 2)], &[(0, 1, -5), (1, 2, -5), (0, 2, 10)]).unwrap()
}

fn run(input: &PricingInput) -> PricingResult {
    solve_pricing(input, &PricingOptions::default(), &NoClock).unwrap()
}

fn oracle_min(input: &PricingInput) -> f64 {
    enumerate_connected_sets(input)
        .into_iter()
        .map(|(_, rc)| rc)
        .fold(0.0, f64::min)
}

#[test]
fn path_example_all_strategies() {
    let g = path3();
    let gamma = [0.0; 3];
    for st in Strategy::ALL {
        for strengthen in [false, true] {
            let input = PricingInput::new(&g, &gamma, st).strengthened(strengthen);
            let r = run(&input);
            assert!(r.proved_optimal, "{st}");
            assert_eq!(r.min_reduced_cost(), -5.0, "{st}");
            let (set, rc) = r.best.clone().unwrap();
            assert_eq!(rc, -5.0);
            assert!(set == VertexSet::new([0, 1]) || set == VertexSet::new([1, 2]), "{st}: {set}");
            for (s, rc) in &r.negatives {
                assert_eq!(reduced_cost(&g, &gamma, s), *rc);
            }
        }
    }
    // lexicographic tie-break in the enumerating strategy
    let r = run(&PricingInput::new(&g, &gamma, Strategy::Combinatorial));
    assert_eq!(r.best.unwrap().0, VertexSet::new([0, 1]));
}

#[test]
fn differ_pair_leaves_only_the_other_edge() {
    let g = path3();
    let gamma = [0.0; 3];
    let differ = [(0, 1)];
    for st in Strategy::ALL {
        let input = PricingInput::new(&g, &gamma, st).with_pairs(&[], &differ);
        let r = run(&input);
        let (set, rc) = r.best.unwrap();
        assert_eq!((set, rc), (VertexSet::new([1, 2]), -5.0), "{st}");
        assert!(r.negatives.iter().all(|(s, _)| !(s.contains(0) && s.contains(1))));
    }
}

#[test]
fn same_pair_across_a_gap_needs_the_middle_vertex() {
    // together(0, 2) on the path forces vertex 1 in: {0,1,2} costs 0
    let g = path3();
    let gamma = [1.0, 0.0, 1.0];
    let same = [(0, 2)];
    for st in Strategy::ALL {
        let input = PricingInput::new(&g, &gamma, st).with_pairs(&same, &[]);
        let r = run(&input);
        assert_eq!(r.min_reduced_cost(), -2.0, "{st}");
        assert_eq!(r.best.unwrap().0, VertexSet::new([0, 1, 2]), "{st}");
    }
}

#[test]
fn nonnegative_costs_and_negative_duals_give_no_column() {
    let g = AttributedGraph::from_pair_costs(3, &[(0, 1), (1, 2)], &[(0, 1, 2), (1, 2, 0), (0, 2, 4)]).unwrap();
    let gamma = [-1.0; 3];
    let comb = run(&PricingInput::new(&g, &gamma, Strategy::Combinatorial));
    assert!(comb.proved_optimal && comb.negatives.is_empty());
    assert_eq!(comb.best.unwrap().1, 1.0);
    for st in Strategy::ALL {
        let r = run(&PricingInput::new(&g, &gamma, st));
        assert!(r.proved_optimal && r.negatives.is_empty());
        assert_eq!(r.min_reduced_cost(), 0.0);
    }
}

#[test]
fn single_vertex_and_disconnected_pair() {
    let g = AttributedGraph::from_pair_costs(1, &[], &[]).unwrap();
    let r = run(&PricingInput::new(&g, &[2.5], Strategy::Combinatorial));
    assert_eq!(r.best.unwrap(), (VertexSet::singleton(0), -2.5));

    let g = AttributedGraph::from_pair_costs(2, &[], &[(0, 1, -100)]).unwrap();
    let gamma = [1.0, 3.0];
    for st in Strategy::ALL {
        let r = run(&PricingInput::new(&g, &gamma, st));
        assert_eq!(r.best.unwrap(), (VertexSet::singleton(1), -3.0), "{st}");
    }
}

#[test]
fn inconsistent_pairs_and_size_guard() {
    let g = path3();
    let gamma = [0.0; 3];
    let input = PricingInput::new(&g, &gamma, Strategy::Flow).with_pairs(&[(0, 1), (1, 2)], &[(0, 2)]);
    assert_eq!(input.validate(), Err(PricingError::InconsistentPairs(0, 2)));
    assert!(matches!(
        solve_pricing(&PricingInput::new(&g, &[0.0], Strategy::Flow), &PricingOptions::default(), &NoClock),
        Err(PricingError::GammaLength { .. })
    ));
    let opts = PricingOptions {
        combinatorial_limit: 2,
        ..PricingOptions::default()
    };
    let err = solve_pricing(&PricingInput::new(&g, &gamma, Strategy::Combinatorial), &opts, &NoClock).unwrap_err();
    assert_eq!(err, PricingError::TooLarge { n: 3, limit: 2 });
}

#[test]
fn model_sizes_on_the_path() {
    let g = path3();
    let gamma = [0.0; 3];
    let flow = build_model(&PricingInput::new(&g, &gamma, Strategy::Flow)).unwrap();
    assert_eq!((flow.x.len(), flow.num_z(), flow.f.len()), (3, 3, 4));
    let mtz = build_model(&PricingInput::new(&g, &gamma, Strategy::Mtz)).unwrap();
    assert_eq!((mtz.t.len(), mtz.ell.len()), (4, 3));
    let f0 = build_model(&PricingInput::new(&g, &gamma, Strategy::Flow0)).unwrap();
    assert_eq!(f0.arcs.len(), 7);
    assert_eq!(f0.arcs.iter().filter(|a| a.0 == AUX).count(), 3);
    let m0 = build_model(&PricingInput::new(&g, &gamma, Strategy::Mtz0)).unwrap();
    let row = &m0.lp.constraints[m0.family("aux-single-root")[0]];
    let roots: BTreeSet<usize> = m0.arcs.iter().enumerate().filter(|(_, a)| a.0 == AUX).map(|(p, _)| m0.t[p].0).collect();
    assert_eq!(row.cmp, crate::lp::Cmp::Eq);
    assert_eq!(row.rhs, 1.0);
    assert_eq!(row.terms.iter().map(|t| t.0 .0).collect::<BTreeSet<_>>(), roots);
    assert!(row.terms.iter().all(|t| t.1 == 1.0));
}

fn family_names(m: &PricingModel) -> BTreeSet<&'static str> {
    m.families().map(|(k, _)| k).collect()
}

#[test]
fn relaxations_and_strengthening_toggle_whole_families() {
    let g = path3();
    let gamma = [0.0; 3];
    let names = |st, s| family_names(&build_model(&PricingInput::new(&g, &gamma, st).strengthened(s)).unwrap());
    let link: BTreeSet<_> = ["link-i", "link-j", "link-both"].into();
    for (full, relaxed) in [(Strategy::Flow, Strategy::FlowCliqueRelax), (Strategy::Mtz, Strategy::MtzCliqueRelax)] {
        let diff: BTreeSet<_> = names(full, false).difference(&names(relaxed, false)).copied().collect();
        assert_eq!(diff, link);
        assert!(names(relaxed, false).is_subset(&names(full, false)));
    }
    let added = |st| -> BTreeSet<&str> { names(st, true).difference(&names(st, false)).copied().collect() };
    assert_eq!(added(Strategy::Mtz), ["in-degree", "root-no-in", "label-upper", "label-lower"].into());
    assert_eq!(added(Strategy::Flow), ["source-outflow", "edge-flow", "edge-flow-tight"].into());
    assert_eq!(added(Strategy::Mtz0), ["aux-root-min", "aux-label-lower", "aux-label-upper"].into());
    assert!(added(Strategy::Flow0).is_empty());
    assert!(names(Strategy::ConnectivityRelax, false).is_subset(&link));
}

// ---- independent transcription of the flow and arborescence rows ----

fn render(lp: &crate::lp::LinearProgram, c: &Constraint) -> String {
    let mut terms: Vec<(String, i64)> = c
        .terms
        .iter()
        .map(|&(v, a)| (lp.vars[v.0].name.clone(), a as i64))
        .filter(|t| t.1 != 0)
        .collect();
    terms.sort();
    let op = match c.cmp {
        crate::lp::Cmp::Le => "<=",
        crate::lp::Cmp::Ge => ">=",
        crate::lp::Cmp::Eq => "=",
    };
    let body: Vec<String> = terms.iter().map(|(n, a)| format!("{a:+} {n}")).collect();
    format!("{} {op} {}", body.join(" "), c.rhs as i64)
}

/// Expands textual row templates over 1-based indices; terms are merged by
/// name so duplicated variables add up.
fn expand(terms: Vec<(i64, String)>, op: &str, rhs: i64) -> String {
    let mut acc: alloc::collections::BTreeMap<String, i64> = Default::default();
    for (a, name) in terms {
        *acc.entry(name).or_default() += a;
    }
    let body: Vec<String> = acc.into_iter().filter(|t| t.1 != 0).map(|(n, a)| format!("{a:+} {n}")).collect();
    format!("{} {op} {rhs}", body.join(" "))
}

fn zname(i: usize, j: usize) -> String {
    format!("z_{}_{}", i.min(j), i.max(j))
}

fn transcribe(n: usize, edges: &[(usize, usize)], mtz: bool, strengthen: bool) -> BTreeSet<String> {
    let nn = n as i64;
    let mut arcs = Vec::new();
    for &(i, j) in edges {
        arcs.push((i, j));
        arcs.push((j, i));
    }
    let mut rows = BTreeSet::new();
    for i in 1..=n {
        for j in i + 1..=n {
            rows.insert(expand(vec![(1, zname(i, j)), (-1, format!("x_{i}"))], "<=", 0));
            rows.insert(expand(vec![(1, zname(i, j)), (-1, format!("x_{j}"))], "<=", 0));
            rows.insert(expand(vec![(1, zname(i, j)), (-1, format!("x_{i}")), (-1, format!("x_{j}"))], ">=", -1));
        }
    }
    let into = |k: usize, p: &str| -> Vec<(i64, String)> {
        arcs.iter().filter(|a| a.1 == k).map(|a| (1, format!("{p}_{}_{}", a.0, a.1))).collect()
    };
    let out_of = |k: usize, p: &str| -> Vec<(i64, String)> {
        arcs.iter().filter(|a| a.0 == k).map(|a| (1, format!("{p}_{}_{}", a.0, a.1))).collect()
    };
    if !mtz {
        for k in 1..=n {
            for j in k + 1..=n {
                let mut t = into(k, "f");
                t.extend(out_of(k, "f").into_iter().map(|(a, s)| (-a, s)));
                t.push((-1, format!("x_{k}")));
                t.push((-(nn - 1), format!("x_{j}")));
                rows.insert(expand(t, ">=", -(nn - 1)));
            }
        }
        for i in 1..=n {
            let mut t = out_of(i, "f");
            t.extend((1..=n).filter(|&j| j != i).map(|j| (-1, zname(i, j))));
            rows.insert(expand(t, "<=", 0));
        }
        if strengthen {
            for i in 1..=n {
                let mut t = out_of(i, "f");
                t.extend((1..i).map(|k| (-1, format!("x_{k}"))));
                t.extend((i + 1..=n).map(|k| (nn, zname(i, k))));
                t.push((-nn, format!("x_{i}")));
                rows.insert(expand(t, ">=", -nn));
            }
            for &(i, j) in edges {
                let f = vec![(1, format!("f_{i}_{j}")), (1, format!("f_{j}_{i}"))];
                let mut a = f.clone();
                a.push((-(nn - 1), zname(i, j)));
                rows.insert(expand(a, "<=", 0));
                let mut b = f;
                b.push((-(nn - 2), zname(i, j)));
                b.extend((i + 1..=n).map(|k| (-1, zname(i, k))));
                rows.insert(expand(b, "<=", 0));
            }
        }
    } else {
        for &(i, j) in &arcs {
            rows.insert(expand(
                vec![(1, format!("l_{i}")), (-1, format!("l_{j}")), (nn, format!("t_{i}_{j}"))],
                "<=",
                nn - 1,
            ));
        }
        for &(i, j) in edges {
            rows.insert(expand(
                vec![(1, format!("t_{i}_{j}")), (1, format!("t_{j}_{i}")), (-1, zname(i, j))],
                "<=",
                0,
            ));
        }
        for k in 1..=n {
            for j in k + 1..=n {
                let mut t = into(k, "t");
                t.push((-1, format!("x_{j}")));
                t.push((-1, format!("x_{k}")));
                rows.insert(expand(t, ">=", -1));
            }
        }
        if strengthen {
            for j in 1..=n {
                let mut a = into(j, "t");
                a.push((-1, format!("x_{j}")));
                rows.insert(expand(a, "<=", 0));
                let mut b = into(j, "t");
                b.extend((j + 1..=n).map(|k| (-1, zname(j, k))));
                rows.insert(expand(b, "<=", 0));
                let mut c: Vec<(i64, String)> = into(j, "t").into_iter().map(|(_, s)| (-(nn - 1), s)).collect();
                c.push((1, format!("l_{j}")));
                rows.insert(expand(c, "<=", 0));
                let mut d: Vec<(i64, String)> = into(j, "t").into_iter().map(|(_, s)| (-1, s)).collect();
                d.push((1, format!("l_{j}")));
                rows.insert(expand(d, ">=", 0));
            }
        }
    }
    rows
}

#[test]
fn rows_match_an_independent_transcription() {
    // 4-cycle plus a chord, 1-based edges for the expander
    let edges1 = [(1, 2), (2, 3), (3, 4), (1, 4), (1, 3)];
    let edges0: Vec<(usize, usize)> = edges1.iter().map(|&(a, b)| (a - 1, b - 1)).collect();
    let g = AttributedGraph::from_pair_costs(4, &edges0, &[]).unwrap();
    let gamma = [0.0; 4];
    for (st, mtz) in [(Strategy::Flow, false), (Strategy::Mtz, true)] {
        for strengthen in [false, true] {
            let model = build_model(&PricingInput::new(&g, &gamma, st).strengthened(strengthen)).unwrap();
            let built: BTreeSet<String> = model.lp.constraints.iter().map(|c| render(&model.lp, c)).collect();
            assert_eq!(built, transcribe(4, &edges1, mtz, strengthen), "{st} strengthen={strengthen}");
        }
    }
}

// ---- separation ----

fn z_from(values: &[((usize, usize), f64)]) -> impl Fn(usize, usize) -> f64 + '_ {
    move |i, j| {
        values
            .iter()
            .find(|(p, _)| *p == (i.min(j), i.max(j)))
            .map_or(0.0, |(_, v)| *v)
    }
}

#[test]
fn bridge_cut_on_the_path() {
    let g = path3();
    let x = [1.0, 0.0, 1.0];
    let zv = [((0, 2), 1.0)];
    let cuts = connectivity_separation(&g, &x, &z_from(&zv));
    assert_eq!(cuts, vec![BridgeCut { i: 0, j: 2, bridges: vec![(0, 1)] }]);
}

#[test]
fn connected_support_gives_no_cut() {
    let g = path3();
    let x = [1.0, 1.0, 1.0];
    let zv = [((0, 1), 1.0), ((0, 2), 1.0), ((1, 2), 1.0)];
    assert!(connectivity_separation(&g, &x, &z_from(&zv)).is_empty());
}

#[test]
fn star_leaves_are_bridged_by_the_center() {
    // center is vertex 1 (0-based), leaves 0, 2, 3
    let g = AttributedGraph::from_pair_costs(4, &[(0, 1), (1, 2), (1, 3)], &[]).unwrap();
    let x = [1.0, 0.0, 1.0, 1.0];
    let zv = [((0, 2), 1.0), ((0, 3), 1.0), ((2, 3), 1.0)];
    let cuts = connectivity_separation(&g, &x, &z_from(&zv));
    let got: Vec<((usize, usize), Vec<(usize, usize)>)> = cuts.into_iter().map(|c| ((c.i, c.j), c.bridges)).collect();
    assert_eq!(
        got,
        vec![
            ((0, 2), vec![(0, 1)]),
            ((0, 3), vec![(0, 1)]),
            ((2, 3), vec![(1, 2)]),
        ]
    );
}

#[test]
fn link_cuts_detect_inconsistent_pairs() {
    let x = [1.0, 1.0, 0.0];
    let zv = [((0, 2), 1.0)];
    let cuts = clique_separation(&x, &z_from(&zv));
    assert_eq!(cuts, vec![LinkCut::Above(0, 1), LinkCut::BelowJ(0, 2)]);
}

#[test]
fn strategy_names_round_trip() {
    for st in Strategy::ALL {
        assert_eq!(st.name().parse::<Strategy>().unwrap(), st);
        assert_eq!(st.to_string(), st.name());
    }
    assert!("simplex".parse::<Strategy>().is_err());
}

fn pricing_case() -> impl PropStrategy<Value = (AttributedGraph, Vec<f64>, Vec<(usize, usize)>, Vec<(usize, usize)>)> {
    (2usize..=6).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        (
            Just(n),
            proptest::collection::vec(proptest::bool::weighted(0.5), pairs),
            proptest::collection::vec(-8i64..=8, pairs),
            proptest::collection::vec(-50i32..=50, n),
            proptest::collection::vec((0..n, 0..n, any::<bool>()), 0..3),
        )
            .prop_map(|(n, flags, costs, gamma, pairs)| {
                let g = graph_from_parts(n, &flags, &costs);
                let gamma: Vec<f64> = gamma.into_iter().map(|v| v as f64 / 10.0).collect();
                let mut same = Vec::new();
                let mut differ = Vec::new();
                for (a, b, together) in pairs {
                    if a == b {
                        continue;
                    }
                    let mut s2 = same.clone();
                    let mut d2 = differ.clone();
                    if together {
                        s2.push((a, b));
                    } else {
                        d2.push((a, b));
                    }
                    let probe = PricingInput::new(&g, &gamma, Strategy::Combinatorial).with_pairs(&s2, &d2);
                    if probe.validate().is_ok() {
                        same = s2;
                        differ = d2;
                    }
                }
                (g, gamma, same, differ)
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn strategies_agree_with_enumeration((g, gamma, same, differ) in pricing_case()) {
        let base = PricingInput::new(&g, &gamma, Strategy::Combinatorial).with_pairs(&same, &differ);
        let expected = oracle_min(&base);
        for st in Strategy::ALL {
            for strengthen in [false, true] {
                let input = PricingInput { strategy: st, strengthen, ..base };
                let r = run(&input);
                prop_assert!(r.proved_optimal);
                prop_assert!((r.min_reduced_cost() - expected).abs() < 1e-6, "{} {}: {} vs {}", st, strengthen, r.min_reduced_cost(), expected);
                for (s, rc) in r.negatives.iter().chain(r.best.iter()) {
                    prop_assert!(g.connected_unchecked(s.members()));
                    prop_assert!(input.respects_pairs(s));
                    prop_assert!((reduced_cost(&g, &gamma, s) - rc).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn bridge_cuts_are_violated_and_valid(
        n in 2usize..=8,
        flags in proptest::collection::vec(proptest::bool::weighted(0.35), 28),
        xs in proptest::collection::vec(0u8..=2, 8),
        zs in proptest::collection::vec(0u8..=2, 28),
    ) {
        let g = graph_from_parts(n, &flags, &[0; 28]);
        let x: Vec<f64> = xs[..n].iter().map(|&v| v as f64 / 2.0).collect();
        let mut zv = Vec::new();
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                zv.push(((i, j), (zs[k] as f64 / 2.0).min(x[i]).min(x[j])));
                k += 1;
            }
        }
        let z = z_from(&zv);
        for cut in connectivity_separation(&g, &x, &z) {
            prop_assert!(cut.lhs(&z) < -1e-6);
            for mask in 1u64..(1 << n) {
                let set = VertexSet::from_mask(mask);
                if !g.connected_unchecked(set.members()) {
                    continue;
                }
                let zi = |a: usize, b: usize| if set.contains(a) && set.contains(b) { 1.0 } else { 0.0 };
                prop_assert!(cut.lhs(&zi) >= 0.0);
            }
        }
    }
}
