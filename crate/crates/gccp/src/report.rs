//! Solver modes, the settings that fully determine a run, and the CSV result
//! rows written by `solve` and `bench`.
//!
//! Result files start with `# gccp-results v1` and one `# key=value` line per
//! setting; the column list is [`COLUMNS`].

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use gccp_core::bnp::{self, BnpConfig, BnpError};
use gccp_core::clock::{Clock, StdClock};
use gccp_core::heuristics::{random_shrink, RsConfig};
use gccp_core::pricing::Strategy;
use gccp_core::{AttributedGraph, Cost, Partition};

pub const SCHEMA: &str = "gccp-results v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    Exact,
    Rs,
    Matheuristic,
    RsMatheuristic,
}

impl Mode {
    pub const ALL: [Mode; 4] = [Mode::Exact, Mode::Rs, Mode::Matheuristic, Mode::RsMatheuristic];

    pub fn name(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Rs => "rs",
            Mode::Matheuristic => "matheuristic",
            Mode::RsMatheuristic => "rs+matheuristic",
        }
    }

    /// Whether the pricing strategy affects the run.
    pub fn uses_pricer(self) -> bool {
        self == Mode::Exact
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Mode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown mode `{s}` (exact, rs, matheuristic, rs+matheuristic)"))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverSettings {
    pub mode: Mode,
    pub pricer: Strategy,
    pub strengthen: bool,
    pub heurvar: bool,
    /// Random Shrink starts; `None` is `10 n`.
    pub max_start: Option<usize>,
    /// `None` is `ceil(n / 3)`.
    pub max_random_move: Option<usize>,
    pub time_limit: Option<f64>,
    pub seed: u64,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            mode: Mode::Exact,
            pricer: Strategy::Combinatorial,
            strengthen: false,
            heurvar: true,
            max_start: None,
            max_random_move: None,
            time_limit: None,
            seed: 0,
        }
    }
}

impl SolverSettings {
    /// `key=value` pairs echoed into result headers.
    pub fn echo(&self) -> Vec<(&'static str, String)> {
        let opt = |v: Option<usize>| v.map_or("auto".to_string(), |v| v.to_string());
        vec![
            ("mode", self.mode.to_string()),
            ("pricer", self.pricer.to_string()),
            ("strengthen", self.strengthen.to_string()),
            ("heurvar", self.heurvar.to_string()),
            ("max_start", opt(self.max_start)),
            ("max_random_move", opt(self.max_random_move)),
            ("time_limit", self.time_limit.map_or("none".to_string(), |t| t.to_string())),
            ("seed", self.seed.to_string()),
        ]
    }

    pub fn label(&self) -> String {
        if self.mode.uses_pricer() {
            format!(
                "{}/{}{}/heurvar={}",
                self.mode,
                self.pricer,
                if self.strengthen { "+s" } else { "" },
                self.heurvar
            )
        } else {
            self.mode.to_string()
        }
    }

    fn bnp_config(&self, n: usize) -> BnpConfig {
        let mut cfg = BnpConfig::for_size(n);
        cfg.strategy = self.pricer;
        cfg.strengthen = self.strengthen;
        cfg.heuristic_pricing = self.heurvar;
        cfg.seed = self.seed;
        cfg.time_limit = self.time_limit;
        if let Some(s) = self.max_start {
            cfg.init_starts = s;
        }
        if let Some(r) = self.max_random_move {
            cfg.max_random_move = r;
        }
        if self.mode == Mode::Matheuristic {
            cfg.init_starts = 0;
        }
        cfg
    }

    fn rs_config(&self, n: usize) -> RsConfig {
        let mut cfg = RsConfig::for_size(n, self.seed);
        if let Some(s) = self.max_start {
            cfg.max_start = s;
        }
        if let Some(r) = self.max_random_move {
            cfg.max_random_move = r;
        }
        cfg.time_limit = self.time_limit;
        cfg
    }
}

/// One result row.
#[derive(Clone, Debug, PartialEq)]
pub struct RunRow {
    pub instance: String,
    pub n: usize,
    pub mode: Mode,
    pub pricer: String,
    pub strengthen: bool,
    pub heurvar: bool,
    pub seed: u64,
    pub max_start: usize,
    pub max_random_move: usize,
    pub objective: Cost,
    pub optimal: bool,
    pub timed_out: bool,
    pub lower_bound: Option<f64>,
    /// Percent, relative to the lower bound (exact mode only).
    pub gap: Option<f64>,
    pub initial_columns: usize,
    pub heuristic_columns: usize,
    pub exact_columns: usize,
    pub total_columns: usize,
    pub exact_iterations: usize,
    pub nodes: usize,
    /// Percent.
    pub root_gap: Option<f64>,
    pub best_start: Option<usize>,
    pub time: f64,
    pub exact_pricing_time: f64,
    pub pricing_time_pct: f64,
}

pub const COLUMNS: [&str; 25] = [
    "instance",
    "n",
    "mode",
    "pricer",
    "strengthen",
    "heurvar",
    "seed",
    "max_start",
    "max_random_move",
    "objective",
    "optimal",
    "timed_out",
    "lower_bound",
    "gap",
    "initial_columns",
    "heuristic_columns",
    "exact_columns",
    "total_columns",
    "exact_iterations",
    "nodes",
    "root_gap",
    "best_start",
    "time",
    "exact_pricing_time",
    "pricing_time_pct",
];

pub struct RunOutcome {
    pub row: RunRow,
    pub partition: Partition,
}

/// Runs one solve; only the solver call itself is timed.
pub fn run_solver(instance: &str, graph: &AttributedGraph, s: &SolverSettings) -> Result<RunOutcome, BnpError> {
    let n = graph.n();
    let mut row = RunRow {
        instance: instance.to_string(),
        n,
        mode: s.mode,
        pricer: if s.mode.uses_pricer() { s.pricer.to_string() } else { "-".into() },
        strengthen: s.strengthen && s.mode.uses_pricer(),
        heurvar: s.heurvar || !s.mode.uses_pricer(),
        seed: s.seed,
        max_start: 0,
        max_random_move: 0,
        objective: 0,
        optimal: false,
        timed_out: false,
        lower_bound: None,
        gap: None,
        initial_columns: 0,
        heuristic_columns: 0,
        exact_columns: 0,
        total_columns: 0,
        exact_iterations: 0,
        nodes: 0,
        root_gap: None,
        best_start: None,
        time: 0.0,
        exact_pricing_time: 0.0,
        pricing_time_pct: 0.0,
    };
    if s.mode == Mode::Rs {
        let cfg = s.rs_config(n);
        row.max_start = cfg.max_start;
        row.max_random_move = cfg.max_random_move;
        let clock = StdClock::start();
        let out = random_shrink(graph, &cfg, &clock);
        row.time = clock.now();
        row.objective = out.best.objective();
        row.timed_out = out.starts < cfg.max_start.max(1);
        row.best_start = Some(out.best_start);
        return Ok(RunOutcome {
            row,
            partition: out.best,
        });
    }
    let cfg = s.bnp_config(n);
    row.max_start = cfg.init_starts;
    row.max_random_move = cfg.max_random_move;
    let clock = StdClock::start();
    let r = if s.mode == Mode::Exact {
        bnp::solve(graph, &cfg, &clock)?
    } else {
        bnp::solve_truncated(graph, &cfg, &clock)?
    };
    row.time = clock.now();
    row.objective = r.best.objective();
    row.optimal = r.optimal;
    row.timed_out = r.timed_out;
    row.lower_bound = r.lower_bound;
    row.gap = r.gap.map(|g| 100.0 * g);
    row.initial_columns = r.initial_columns;
    row.heuristic_columns = r.heuristic_columns;
    row.exact_columns = r.exact_columns;
    row.total_columns = r.total_columns;
    row.exact_iterations = r.exact_iterations;
    row.nodes = r.nodes;
    row.root_gap = r.root_gap.map(|g| 100.0 * g);
    row.exact_pricing_time = r.exact_pricing_time;
    row.pricing_time_pct = 100.0 * r.pricing_time_fraction();
    Ok(RunOutcome {
        row,
        partition: r.best,
    })
}

fn opt_f(v: Option<f64>) -> String {
    v.map_or(String::new(), |v| v.to_string())
}

impl RunRow {
    pub fn record(&self) -> Vec<String> {
        vec![
            self.instance.clone(),
            self.n.to_string(),
            self.mode.to_string(),
            self.pricer.clone(),
            self.strengthen.to_string(),
            self.heurvar.to_string(),
            self.seed.to_string(),
            self.max_start.to_string(),
            self.max_random_move.to_string(),
            self.objective.to_string(),
            self.optimal.to_string(),
            self.timed_out.to_string(),
            opt_f(self.lower_bound),
            opt_f(self.gap),
            self.initial_columns.to_string(),
            self.heuristic_columns.to_string(),
            self.exact_columns.to_string(),
            self.total_columns.to_string(),
            self.exact_iterations.to_string(),
            self.nodes.to_string(),
            opt_f(self.root_gap),
            self.best_start.map_or(String::new(), |b| b.to_string()),
            format!("{:.6}", self.time),
            format!("{:.6}", self.exact_pricing_time),
            format!("{:.2}", self.pricing_time_pct),
        ]
    }

    /// Columns that may differ between two runs of the same settings.
    pub fn is_timing_column(name: &str) -> bool {
        matches!(name, "time" | "exact_pricing_time" | "pricing_time_pct")
    }

    fn from_record(rec: &csv::StringRecord, line: u64) -> Result<RunRow, ReportError> {
        if rec.len() != COLUMNS.len() {
            return Err(ReportError::Row {
                line,
                message: format!("expected {} fields, got {}", COLUMNS.len(), rec.len()),
            });
        }
        let get = |k: usize| &rec[k];
        fn p<T: FromStr>(v: &str, k: usize, line: u64) -> Result<T, ReportError> {
            v.parse().map_err(|_| ReportError::Row {
                line,
                message: format!("bad {} `{v}`", COLUMNS[k]),
            })
        }
        fn po<T: FromStr>(v: &str, k: usize, line: u64) -> Result<Option<T>, ReportError> {
            if v.is_empty() {
                Ok(None)
            } else {
                p(v, k, line).map(Some)
            }
        }
        Ok(RunRow {
            instance: get(0).to_string(),
            n: p(get(1), 1, line)?,
            mode: get(2).parse().map_err(|message| ReportError::Row { line, message })?,
            pricer: get(3).to_string(),
            strengthen: p(get(4), 4, line)?,
            heurvar: p(get(5), 5, line)?,
            seed: p(get(6), 6, line)?,
            max_start: p(get(7), 7, line)?,
            max_random_move: p(get(8), 8, line)?,
            objective: p(get(9), 9, line)?,
            optimal: p(get(10), 10, line)?,
            timed_out: p(get(11), 11, line)?,
            lower_bound: po(get(12), 12, line)?,
            gap: po(get(13), 13, line)?,
            initial_columns: p(get(14), 14, line)?,
            heuristic_columns: p(get(15), 15, line)?,
            exact_columns: p(get(16), 16, line)?,
            total_columns: p(get(17), 17, line)?,
            exact_iterations: p(get(18), 18, line)?,
            nodes: p(get(19), 19, line)?,
            root_gap: po(get(20), 20, line)?,
            best_start: po(get(21), 21, line)?,
            time: p(get(22), 22, line)?,
            exact_pricing_time: p(get(23), 23, line)?,
            pricing_time_pct: p(get(24), 24, line)?,
        })
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ReportError {
    #[error("missing `# {SCHEMA}` header")]
    Schema,
    #[error("line {line}: {message}")]
    Row { line: u64, message: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Writes the schema line, the echoed settings and a header row.
pub fn write_header(out: &mut dyn Write, echo: &[(&str, String)]) -> std::io::Result<()> {
    writeln!(out, "# {SCHEMA}")?;
    for (k, v) in echo {
        writeln!(out, "# {k}={v}")?;
    }
    writeln!(out, "{}", COLUMNS.join(","))
}

pub fn write_rows(out: &mut dyn Write, rows: &[RunRow]) -> Result<(), ReportError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    for r in rows {
        w.write_record(r.record())?;
    }
    w.flush()?;
    Ok(())
}

pub fn format_rows(echo: &[(&str, String)], rows: &[RunRow]) -> String {
    let mut buf = Vec::new();
    write_header(&mut buf, echo).unwrap();
    write_rows(&mut buf, rows).unwrap();
    String::from_utf8(buf).unwrap()
}

/// Parses a result file: the echoed settings and the rows.
pub fn read_rows(mut input: impl Read) -> Result<(Vec<(String, String)>, Vec<RunRow>), ReportError> {
    let mut text = String::new();
    input.read_to_string(&mut text)?;
    if text.lines().next().map(str::trim) != Some(&format!("# {SCHEMA}")) {
        return Err(ReportError::Schema);
    }
    let echo = text
        .lines()
        .skip(1)
        .map_while(|l| l.strip_prefix("# "))
        .filter_map(|l| l.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();
    let mut rd = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let header = rd.headers()?.clone();
    if header.iter().ne(COLUMNS.iter().copied()) {
        return Err(ReportError::Row {
            line: 1,
            message: "unexpected column header".into(),
        });
    }
    let mut rows = Vec::new();
    for rec in rd.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        rows.push(RunRow::from_record(&rec, line)?);
    }
    Ok((echo, rows))
}
