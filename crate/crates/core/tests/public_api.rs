use gccp_core::bnp::{solve, solve_truncated, BnpConfig};
use gccp_core::clock::NoClock;
use gccp_core::generator::{generate, GeneratorConfig};
use gccp_core::heuristics::{random_shrink, RsConfig};
use gccp_core::pricing::{solve_pricing, PricingInput, PricingOptions, Strategy};
use gccp_core::{AttributedGraph, Partition, VertexSet};

// path 0-1-2-3; the heavy middle pair keeps the two ends apart
fn path4() -> AttributedGraph {
    let edges = [(0, 1), (1, 2), (2, 3)];
    let costs = [(0, 1, -3), (1, 2, 5), (2, 3, -2), (0, 2, -1), (0, 3, 4), (1, 3, -1)];
    AttributedGraph::from_pair_costs(4, &edges, &costs).unwrap()
}

fn sorted_blocks(p: &Partition) -> Vec<Vec<usize>> {
    let mut b: Vec<Vec<usize>> = p.blocks().iter().map(|s| s.members().to_vec()).collect();
    b.sort();
    b
}

fn assert_feasible(g: &AttributedGraph, p: &Partition) {
    let mut seen = vec![false; g.n()];
    let mut total = 0;
    for b in p.blocks() {
        assert!(g.is_connected_set(b), "block {:?} is not connected", b.members());
        for v in b.iter() {
            assert!(!seen[v]);
            seen[v] = true;
        }
        total += g.cost_of(b);
    }
    assert!(seen.iter().all(|&s| s));
    assert_eq!(total, p.objective());
}

#[test]
fn exact_solve_on_hand_instance() {
    let g = path4();
    let r = solve(&g, &BnpConfig::for_size(4), &NoClock).unwrap();
    assert!(r.optimal);
    assert_eq!(r.best.objective(), -5);
    assert_eq!(sorted_blocks(&r.best), vec![vec![0, 1], vec![2, 3]]);
}

#[test]
fn heuristics_are_feasible_and_not_below_optimum() {
    let g = path4();
    let mh = solve_truncated(&g, &BnpConfig::for_size(4), &NoClock).unwrap();
    assert_feasible(&g, &mh.best);
    assert!(mh.best.objective() >= -5);
    let rs = random_shrink(&g, &RsConfig::for_size(4, 1), &NoClock);
    assert_feasible(&g, &rs.best);
    assert!(rs.best.objective() >= -5);
}

#[test]
fn every_strategy_prices_the_hand_instance() {
    let g = path4();
    let gamma = [0.0; 4];
    for st in Strategy::ALL {
        for strengthen in [false, true] {
            let input = PricingInput::new(&g, &gamma, st).strengthened(strengthen);
            let r = solve_pricing(&input, &PricingOptions::default(), &NoClock).unwrap();
            assert!(r.proved_optimal, "{st}");
            let (set, rc) = r.best.unwrap();
            assert_eq!(set, VertexSet::new([0, 1]), "{st}");
            assert!((rc + 3.0).abs() < 1e-9, "{st}: {rc}");
        }
    }
}

#[test]
fn generator_is_deterministic_per_seed() {
    let a = generate(&GeneratorConfig::new(12, 7)).unwrap().graph;
    let b = generate(&GeneratorConfig::new(12, 7)).unwrap().graph;
    let c = generate(&GeneratorConfig::new(12, 8)).unwrap().graph;
    assert_eq!(a.edges(), b.edges());
    assert_eq!(a.features(), b.features());
    assert!(a.edges() != c.edges() || a.features() != c.features());
}
