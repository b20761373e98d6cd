//! Benchmark harness: a matrix of solver settings over an instance family,
//! per-configuration summaries and solved-over-time profiles.

use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;

use gccp_core::bnp::BnpError;
use gccp_core::{AttributedGraph, Cost};

use crate::report::{run_solver, Mode, RunRow, SolverSettings};

pub const WORKERS_ENV: &str = "GCCP_WORKERS";

pub struct BenchInstance {
    pub id: String,
    pub graph: AttributedGraph,
}

/// Cartesian product of modes, pricers, strengthen and heurvar choices.
/// Modes that ignore the pricer appear once.
pub fn config_matrix(
    modes: &[Mode],
    pricers: &[gccp_core::pricing::Strategy],
    strengthen: &[bool],
    heurvar: &[bool],
    base: &SolverSettings,
) -> Vec<SolverSettings> {
    let mut out: Vec<SolverSettings> = Vec::new();
    for &mode in modes {
        if !mode.uses_pricer() {
            out.push(SolverSettings { mode, ..base.clone() });
            continue;
        }
        for &pricer in pricers {
            for &s in strengthen {
                for &h in heurvar {
                    out.push(SolverSettings {
                        mode,
                        pricer,
                        strengthen: s,
                        heurvar: h,
                        ..base.clone()
                    });
                }
            }
        }
    }
    out.dedup_by(|a, b| a.label() == b.label());
    out
}

/// Worker count from the environment, at least 1.
pub fn workers_from_env() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&w| w > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Runs every configuration on every instance. Results come back grouped by
/// configuration, instances in input order, whatever the worker count.
pub fn run_bench(
    instances: &[BenchInstance],
    configs: &[SolverSettings],
    workers: usize,
) -> Result<Vec<(SolverSettings, Vec<RunRow>)>, BnpError> {
    let jobs: Vec<(usize, usize)> = (0..configs.len())
        .flat_map(|c| (0..instances.len()).map(move |i| (c, i)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("worker pool");
    let rows: Vec<RunRow> = pool.install(|| {
        jobs.par_iter()
            .map(|&(c, i)| run_solver(&instances[i].id, &instances[i].graph, &configs[c]).map(|o| o.row))
            .collect::<Result<_, _>>()
    })?;
    let mut rows = rows.into_iter();
    Ok(configs
        .iter()
        .map(|c| (c.clone(), rows.by_ref().take(instances.len()).collect()))
        .collect())
}

/// Exact runs count as solved when optimal, heuristic runs when they used
/// their whole start budget inside the time limit.
pub fn is_solved(row: &RunRow) -> bool {
    if row.mode == Mode::Exact {
        row.optimal
    } else {
        !row.timed_out
    }
}

/// `100 (value - best) / |best|`; a zero best divides by 1.
pub fn gap_percent(value: Cost, best: Cost) -> f64 {
    100.0 * (value - best) as f64 / (best.abs().max(1)) as f64
}

/// Best objective per instance over all rows and any known values.
pub fn best_values<'a>(rows: impl IntoIterator<Item = &'a RunRow>, known: &BTreeMap<String, Cost>) -> BTreeMap<String, Cost> {
    let mut best = known.clone();
    for r in rows {
        best.entry(r.instance.clone())
            .and_modify(|b| *b = (*b).min(r.objective))
            .or_insert(r.objective);
    }
    best
}

#[derive(Clone, Debug, PartialEq)]
pub struct SummaryRow {
    pub config: String,
    pub instances: usize,
    pub solved: usize,
    pub unsol: usize,
    pub av_time: f64,
    /// Mean percent gap to the best known value.
    pub av_gap: f64,
    /// Mean final optimality gap, percent (exact mode).
    pub av_opt_gap: Option<f64>,
}

pub fn summarize(settings: &SolverSettings, rows: &[RunRow], best: &BTreeMap<String, Cost>) -> SummaryRow {
    let k = rows.len().max(1) as f64;
    let solved = rows.iter().filter(|r| is_solved(r)).count();
    let gaps: Vec<f64> = rows.iter().filter_map(|r| r.gap).collect();
    SummaryRow {
        config: settings.label(),
        instances: rows.len(),
        solved,
        unsol: rows.len() - solved,
        av_time: rows.iter().map(|r| r.time).sum::<f64>() / k,
        av_gap: rows
            .iter()
            .map(|r| gap_percent(r.objective, best.get(&r.instance).copied().unwrap_or(r.objective)))
            .sum::<f64>()
            / k,
        av_opt_gap: (settings.mode == Mode::Exact && !gaps.is_empty())
            .then(|| gaps.iter().sum::<f64>() / gaps.len() as f64),
    }
}

/// `(time, solved so far)` after each solved run, in time order.
pub fn profile(rows: &[RunRow]) -> Vec<(f64, usize)> {
    let mut times: Vec<f64> = rows.iter().filter(|r| is_solved(r)).map(|r| r.time).collect();
    times.sort_by(f64::total_cmp);
    times.into_iter().enumerate().map(|(k, t)| (t, k + 1)).collect()
}

pub fn write_summary(out: &mut dyn Write, rows: &[SummaryRow]) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["config", "instances", "solved", "unsol", "av_time", "av_gap", "av_opt_gap"])?;
    for r in rows {
        w.write_record([
            r.config.clone(),
            r.instances.to_string(),
            r.solved.to_string(),
            r.unsol.to_string(),
            format!("{:.6}", r.av_time),
            format!("{:.2}", r.av_gap),
            r.av_opt_gap.map_or(String::new(), |g| format!("{g:.2}")),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_profile(out: &mut dyn Write, profiles: &[(String, Vec<(f64, usize)>)]) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["config", "time", "solved"])?;
    for (label, points) in profiles {
        for &(t, k) in points {
            w.write_record([label.clone(), format!("{t:.6}"), k.to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Human-readable table in the Av.Time / Av.GAP / Unsol layout.
pub fn format_table(rows: &[SummaryRow]) -> String {
    let width = rows.iter().map(|r| r.config.len()).max().unwrap_or(6).max(6);
    let mut s = format!("{:<width$}  {:>9}  {:>8}  {:>6}\n", "config", "Av.Time", "Av.GAP", "Unsol");
    for r in rows {
        s += &format!("{:<width$}  {:>9.3}  {:>8.2}  {:>6}\n", r.config, r.av_time, r.av_gap, r.unsol);
    }
    s
}

/// Reads `instance,objective` lines; `#` starts a comment.
pub fn parse_best_file(text: &str) -> Result<BTreeMap<String, Cost>, String> {
    let mut rd = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut out = BTreeMap::new();
    for rec in rd.records() {
        let rec = rec.map_err(|e| e.to_string())?;
        if rec.len() != 2 {
            return Err(format!("expected `instance,objective`, got {} fields", rec.len()));
        }
        if rec[0].eq_ignore_ascii_case("instance") {
            continue;
        }
        let v: Cost = rec[1].parse().map_err(|_| format!("bad objective `{}` for {}", &rec[1], &rec[0]))?;
        out.insert(rec[0].to_string(), v);
    }
    Ok(out)
}
