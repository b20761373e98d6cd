//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails. Tolerances are the constants below.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gccp_core::bnp::{solve, solve_truncated, BnpConfig, SolveReport};
use gccp_core::clock::{NoClock, StdClock};
use gccp_core::generator::{generate, GeneratorConfig};
use gccp_core::heuristics::{random_shrink, RsConfig, ShrinkState};
use gccp_core::lp::{solve_milp, MilpLimits};
use gccp_core::pricing::{build_model, solve_pricing, BridgeCallback, PricingInput, PricingOptions, Strategy};
use gccp_core::{AttributedGraph, Partition};

mod common;
use common::{block_cost, brute_force_partition, check_partition, connected_subsets, min_reduced_cost};

const RC_TOL: f64 = 1e-6;
const CUT_TOL: f64 = 1e-6;
const CASCADE_TIME_SHARE: f64 = 2.0 / 3.0;
const N20_TIME_LIMIT: f64 = 300.0;
const RS_MEAN_GAP_MAX: f64 = 5.0;
const RS_TIME_MAX: f64 = 1.0;
const EXACT_CAP_N40: f64 = 1800.0;
const INVARIANT_TOL: f64 = 1e-6;
const SHRINK_SEQUENCES: usize = 10_000;
const DEGREE_TOL: f64 = 0.15;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn instance(n: usize, seed: u64) -> AttributedGraph {
    generate(&GeneratorConfig::new(n, seed)).unwrap().graph
}

fn blocks(p: &Partition) -> Vec<Vec<usize>> {
    p.blocks().iter().map(|b| b.members().to_vec()).collect()
}

fn gap_pct(value: i64, best: i64) -> f64 {
    100.0 * (value - best) as f64 / best.abs().max(1) as f64
}

/// Shared bookkeeping for criterion 8, filled by every exact solve below.
#[derive(Default)]
struct Invariants {
    solves: usize,
    worst_dual: f64,
    worst_primal: f64,
    lb_records: usize,
    lb_violations: usize,
    bad_incumbents: usize,
}

impl Invariants {
    fn record(&mut self, g: &AttributedGraph, r: &SolveReport, optimum: Option<i64>) {
        self.solves += 1;
        self.worst_dual = self.worst_dual.max(r.max_dual_violation);
        self.worst_primal = self.worst_primal.max(r.max_primal_violation);
        if let Some(opt) = optimum {
            self.lb_records += r.root_lb_records.len();
            self.lb_violations += r.root_lb_records.iter().filter(|&&lb| lb > opt as f64 + INVARIANT_TOL).count();
        }
        // a fictitious column is a disconnected set; the final partition must
        // contain none
        if check_partition(g, &blocks(&r.best)) != Ok(r.best.objective()) {
            self.bad_incumbents += 1;
        }
    }
}

fn criterion_1(inv: &mut Invariants) -> Verdict {
    let mut mismatches = Vec::new();
    for k in 0..100u64 {
        let n = [6, 8, 10][(k % 3) as usize];
        let g = instance(n, 1000 + k);
        let r = solve(&g, &BnpConfig::for_size(n), &NoClock).unwrap();
        let opt = brute_force_partition(&g);
        inv.record(&g, &r, Some(opt));
        if !r.optimal || r.best.objective() != opt {
            mismatches.push(format!("n={n} seed={} got {} want {opt}", 1000 + k, r.best.objective()));
        }
    }
    verdict(mismatches.is_empty(), format!("100 instances, {} mismatches {:?}", mismatches.len(), mismatches))
}

fn criterion_2() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut failures = Vec::new();
    let mut runs = 0;
    let options = PricingOptions {
        combinatorial_limit: 64,
        ..PricingOptions::default()
    };
    for k in 0..200u64 {
        let n = [4, 6, 8, 10, 12][(k % 5) as usize];
        let g = instance(n, 2000 + k);
        let gamma: Vec<f64> = (0..n).map(|_| rng.gen_range(-5.0..=5.0)).collect();
        let oracle = min_reduced_cost(&g, &gamma);
        for st in Strategy::ALL {
            for strengthen in [false, true] {
                let input = PricingInput::new(&g, &gamma, st).strengthened(strengthen);
                let r = solve_pricing(&input, &options, &NoClock).unwrap();
                runs += 1;
                if !r.proved_optimal || (r.min_reduced_cost() - oracle).abs() > RC_TOL {
                    failures.push(format!("seed {} {st} s={strengthen}: {} vs {oracle}", 2000 + k, r.min_reduced_cost()));
                }
            }
        }
    }
    verdict(failures.is_empty(), format!("{runs} pricing runs, {} disagreements {:?}", failures.len(), failures))
}

fn criterion_3() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut cuts = 0;
    let mut weak = 0;
    let mut invalid = 0;
    for k in 0..120u64 {
        let n = [4, 6, 8][(k % 3) as usize];
        // sparse edges make split supports likely
        let cfg = GeneratorConfig {
            p_in: 0.35,
            p_out: 0.05,
            ..GeneratorConfig::new(n, 3000 + k)
        };
        let g = generate(&cfg).unwrap().graph;
        let gamma: Vec<f64> = (0..n).map(|_| rng.gen_range(-5.0..=5.0)).collect();
        let sets = connected_subsets(&g);
        for fractional in [false, true] {
            let input = PricingInput::new(&g, &gamma, Strategy::ConnectivityRelax);
            let model = build_model(&input).unwrap();
            let mut cb = BridgeCallback::new(&g, &model, fractional).recording();
            let limits = MilpLimits {
                cutoff: Some(0.0),
                ..MilpLimits::default()
            };
            solve_milp(&model.lp, &mut [&mut cb], &limits, &NoClock).unwrap();
            for (point, cut) in cb.log() {
                cuts += 1;
                let at_point = cut.lhs(&|a, b| point[model.z(a, b).0]);
                if at_point >= -CUT_TOL {
                    weak += 1;
                }
                for s in &sets {
                    let z = |a: usize, b: usize| if s.contains(&a) && s.contains(&b) { 1.0 } else { 0.0 };
                    if cut.lhs(&z) < 0.0 {
                        invalid += 1;
                    }
                }
            }
        }
    }
    verdict(
        cuts > 0 && weak == 0 && invalid == 0,
        format!("{cuts} cuts, {weak} not violated at their point, {invalid} cut off a connected set"),
    )
}

fn timed(g: &AttributedGraph, cfg: &BnpConfig) -> (SolveReport, f64) {
    let t = Instant::now();
    let r = solve(g, cfg, &StdClock::start()).unwrap();
    (r, t.elapsed().as_secs_f64())
}

fn criterion_4(inv: &mut Invariants) -> Verdict {
    const REPEATS: usize = 3;
    let (mut it_on, mut it_off, mut ex_on, mut ex_off) = (0.0, 0.0, 0.0, 0.0);
    let mut faster = 0;
    let (mut wall_on, mut wall_off) = (0.0, 0.0);
    for seed in 1..=30u64 {
        let g = instance(20, 4000 + seed);
        let mut on = BnpConfig::for_size(20);
        on.seed = seed;
        let off = BnpConfig {
            heuristic_pricing: false,
            ..on.clone()
        };
        // wall time is the minimum over a few repeats; counters are
        // deterministic
        let mut t_on = f64::INFINITY;
        let mut t_off = f64::INFINITY;
        let mut last = None;
        for _ in 0..REPEATS {
            let (a, ta) = timed(&g, &on);
            let (b, tb) = timed(&g, &off);
            t_on = t_on.min(ta);
            t_off = t_off.min(tb);
            last = Some((a, b));
        }
        let (a, b) = last.unwrap();
        inv.record(&g, &a, Some(a.best.objective()));
        inv.record(&g, &b, Some(b.best.objective()));
        it_on += a.exact_iterations as f64;
        it_off += b.exact_iterations as f64;
        ex_on += a.exact_pricing_time;
        ex_off += b.exact_pricing_time;
        wall_on += t_on;
        wall_off += t_off;
        if t_on < t_off {
            faster += 1;
        }
    }
    let share = faster as f64 / 30.0;
    verdict(
        it_on < it_off && ex_on < ex_off && share >= CASCADE_TIME_SHARE,
        format!(
            "mean ExactIter {:.2} vs {:.2}, mean exact pricing time {:.4}s vs {:.4}s, mean wall time {:.4}s vs {:.4}s, faster on {faster}/30",
            it_on / 30.0,
            it_off / 30.0,
            ex_on / 30.0,
            ex_off / 30.0,
            wall_on / 30.0,
            wall_off / 30.0
        ),
    )
}

fn criterion_5(inv: &mut Invariants) -> Verdict {
    let mut worst: f64 = 0.0;
    let mut unsolved = 0;
    for seed in 1..=10u64 {
        let g = instance(20, 5000 + seed);
        let mut cfg = BnpConfig::for_size(20);
        cfg.time_limit = Some(N20_TIME_LIMIT);
        let (r, t) = timed(&g, &cfg);
        inv.record(&g, &r, r.optimal.then(|| r.best.objective()));
        worst = worst.max(t);
        if !r.optimal || t >= N20_TIME_LIMIT {
            unsolved += 1;
        }
    }
    verdict(unsolved == 0, format!("10 instances, {unsolved} unsolved, slowest {worst:.2}s"))
}

fn criterion_6(inv: &mut Invariants) -> Verdict {
    let mut gaps = Vec::new();
    let mut slowest: f64 = 0.0;
    let mut infeasible = 0;
    for seed in 1..=10u64 {
        let g = instance(36, 6000 + seed);
        let r = solve(&g, &BnpConfig::for_size(36), &StdClock::start()).unwrap();
        assert!(r.optimal);
        inv.record(&g, &r, Some(r.best.objective()));
        let t = Instant::now();
        let rs = random_shrink(&g, &RsConfig::for_size(36, seed), &StdClock::start());
        slowest = slowest.max(t.elapsed().as_secs_f64());
        if check_partition(&g, &blocks(&rs.best)) != Ok(rs.best.objective()) {
            infeasible += 1;
        }
        gaps.push(gap_pct(rs.best.objective(), r.best.objective()));
    }
    let mean = gaps.iter().sum::<f64>() / gaps.len() as f64;
    verdict(
        mean <= RS_MEAN_GAP_MAX && slowest < RS_TIME_MAX && infeasible == 0,
        format!("mean gap {mean:.2}% (per instance {gaps:.1?}), slowest RS {slowest:.3}s"),
    )
}

fn criterion_7(inv: &mut Invariants) -> Verdict {
    let mut ok = true;
    let mut parts = Vec::new();
    for n in [40usize, 50, 60] {
        let (mut g_rs, mut g_mh) = (0.0, 0.0);
        let mut infeasible = 0;
        let mut below_opt = 0;
        let mut exact_solved = 0;
        for seed in 1..=10u64 {
            let g = instance(n, 7000 + 100 * n as u64 + seed);
            let rs = random_shrink(&g, &RsConfig::for_size(n, seed), &StdClock::start());
            let mut cfg = BnpConfig::for_size(n);
            cfg.seed = seed;
            let rs_mh = solve_truncated(&g, &cfg, &StdClock::start()).unwrap();
            let mh = solve_truncated(
                &g,
                &BnpConfig {
                    init_starts: 0,
                    ..cfg.clone()
                },
                &StdClock::start(),
            )
            .unwrap();
            for p in [&rs.best, &rs_mh.best, &mh.best] {
                if check_partition(&g, &blocks(p)) != Ok(p.objective()) {
                    infeasible += 1;
                }
            }
            let mut best = rs.best.objective().min(rs_mh.best.objective()).min(mh.best.objective());
            if n == 40 {
                let exact = solve(
                    &g,
                    &BnpConfig {
                        time_limit: Some(EXACT_CAP_N40),
                        ..BnpConfig::for_size(n)
                    },
                    &StdClock::start(),
                )
                .unwrap();
                if exact.optimal {
                    exact_solved += 1;
                    let opt = exact.best.objective();
                    inv.record(&g, &exact, Some(opt));
                    if rs_mh.best.objective() < opt || mh.best.objective() < opt {
                        below_opt += 1;
                    }
                    best = best.min(opt);
                }
            }
            g_rs += gap_pct(rs.best.objective(), best) / 10.0;
            g_mh += gap_pct(rs_mh.best.objective(), best) / 10.0;
        }
        ok &= g_mh <= g_rs && infeasible == 0 && below_opt == 0;
        let exact = if n == 40 { format!(", exact {exact_solved}/10") } else { String::new() };
        parts.push(format!("n={n}: RS {g_rs:.2}% vs RS+MH {g_mh:.2}%{exact}, infeasible {infeasible}, below optimum {below_opt}"));
    }
    verdict(ok, parts.join("; "))
}

fn criterion_8(inv: &Invariants) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut shrinks = 0;
    let mut mismatches = 0;
    for _ in 0..SHRINK_SEQUENCES {
        let n = rng.gen_range(2..=14);
        let mut edges = Vec::new();
        let mut costs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen_bool(0.4) {
                    edges.push((i, j));
                }
                costs.push((i, j, rng.gen_range(-6..=6)));
            }
        }
        let g = AttributedGraph::from_pair_costs(n, &edges, &costs).unwrap();
        let mut s = ShrinkState::new(&g);
        loop {
            let active = s.active_edges();
            if active.is_empty() || rng.gen_bool(0.1) {
                break;
            }
            let (i, j) = active[rng.gen_range(0..active.len())];
            s.shrink(i, j).unwrap();
            shrinks += 1;
            let bl: Vec<Vec<usize>> = s.blocks().iter().map(|b| b.members().to_vec()).collect();
            let recomputed = check_partition(&g, &bl);
            let direct: i64 = bl.iter().map(|b| block_cost(&g, b)).sum();
            if recomputed != Ok(s.partition_cost()) || direct != s.partition_cost() || s.objective() != direct as f64 {
                mismatches += 1;
            }
        }
    }
    let pass = mismatches == 0
        && inv.worst_dual <= INVARIANT_TOL
        && inv.worst_primal <= INVARIANT_TOL
        && inv.lb_violations == 0
        && inv.bad_incumbents == 0
        && inv.solves > 0;
    verdict(
        pass,
        format!(
            "{SHRINK_SEQUENCES} sequences / {shrinks} shrinks, {mismatches} bookkeeping mismatches; {} solves: worst dual violation {:.1e}, worst primal {:.1e}, {} LB records above optimum of {}, {} incumbents with fictitious blocks",
            inv.solves, inv.worst_dual, inv.worst_primal, inv.lb_violations, inv.lb_records, inv.bad_incumbents
        ),
    )
}

fn criterion_9() -> Verdict {
    let n = 40;
    let (mut same, mut cross) = (0.0, 0.0);
    for seed in 0..200u64 {
        let inst = generate(&GeneratorConfig::new(n, 9000 + seed)).unwrap();
        for v in 0..n {
            for u in 0..n {
                if u != v && inst.graph.has_edge(u, v) {
                    if inst.truth[u] == inst.truth[v] {
                        same += 1.0;
                    } else {
                        cross += 1.0;
                    }
                }
            }
        }
    }
    let samples = 200.0 * n as f64;
    let (same, cross) = (same / samples, cross / samples);
    let cfg = GeneratorConfig::new(n, 0);
    let (want_same, want_cross) = (n as f64 * cfg.p_in / 2.0, n as f64 * cfg.p_out / 2.0);
    let rel = |x: f64, want: f64| (x - want).abs() / want;
    verdict(
        rel(same, want_same) <= DEGREE_TOL && rel(cross, want_cross) <= DEGREE_TOL,
        format!("mean same-group degree {same:.3} (target {want_same}), cross-group {cross:.3} (target {want_cross})"),
    )
}

fn main() {
    // `cargo test` passes harness flags such as `--nocapture`; `--list` must
    // not run anything.
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    // GCCP_ACCEPTANCE=2,3 runs a subset
    let only: Option<Vec<usize>> = std::env::var("GCCP_ACCEPTANCE")
        .ok()
        .map(|v| v.split(',').filter_map(|t| t.trim().parse().ok()).collect());
    let mut inv = Invariants::default();
    let mut failed = Vec::new();
    let mut report = |k: usize, f: &mut dyn FnMut() -> Verdict| {
        if only.as_ref().is_some_and(|o| !o.contains(&k)) {
            return;
        }
        let t = Instant::now();
        let v = f();
        let state = if v.pass { "PASS" } else { "FAIL" };
        println!("criterion {k}: {state} [{:.1}s] {}", t.elapsed().as_secs_f64(), v.detail);
        if !v.pass {
            failed.push(k);
        }
    };
    report(1, &mut || criterion_1(&mut inv));
    report(2, &mut criterion_2);
    report(3, &mut criterion_3);
    report(4, &mut || criterion_4(&mut inv));
    report(5, &mut || criterion_5(&mut inv));
    report(6, &mut || criterion_6(&mut inv));
    report(7, &mut || criterion_7(&mut inv));
    report(8, &mut || criterion_8(&inv));
    report(9, &mut criterion_9);
    if failed.is_empty() {
        println!("acceptance: no failing criteria");
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
