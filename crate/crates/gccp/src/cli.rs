//! The `gccp` command line: `generate`, `solve`, `bench` and `verify`.
//!
//! Exit codes: 0 success, 1 bad input or failed verification, 2 time limit
//! reached (results are still written).

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use gccp_core::generator::{generate, GeneratorConfig};
use gccp_core::pricing::Strategy;

use crate::bench::{self, BenchInstance};
use crate::instance::{format_instance, read_instance};
use crate::partition::{format_partition, parse_partition, verify};
use crate::report::{self, Mode, SolverSettings};

#[derive(Parser, Debug)]
#[command(name = "gccp", version, about = "Connectivity-constrained clique partitioning")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a two-group synthetic instance.
    Generate(GenerateArgs),
    /// Solve one instance and write its result row.
    Solve(SolveArgs),
    /// Run a matrix of solver settings over an instance family.
    Bench(BenchArgs),
    /// Recheck a partition file against an instance.
    Verify { instance: PathBuf, partition: PathBuf },
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 10)]
    m: usize,
    #[arg(long, default_value_t = 0.9)]
    p_c: f64,
    #[arg(long, default_value_t = 0.5)]
    p_in: f64,
    #[arg(long, default_value_t = 0.1)]
    p_out: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Instance file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_pricer(s: &str) -> Result<Strategy, String> {
    s.parse().map_err(|_| {
        let names: Vec<&str> = Strategy::ALL.iter().map(|s| s.name()).collect();
        format!("unknown pricer `{s}` ({})", names.join(", "))
    })
}

#[derive(Args, Debug)]
struct Common {
    #[arg(long)]
    strengthen: bool,
    #[arg(long)]
    max_start: Option<usize>,
    #[arg(long)]
    max_random_move: Option<usize>,
    /// Seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct SolveArgs {
    instance: PathBuf,
    #[arg(long, default_value = "exact")]
    mode: Mode,
    #[arg(long, default_value = "comb", value_parser = parse_pricer)]
    pricer: Strategy,
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    heurvar: bool,
    #[command(flatten)]
    common: Common,
    /// Result CSV; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the best partition here.
    #[arg(long)]
    partition: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Instance files; alternatively use `--generate-n`.
    instances: Vec<PathBuf>,
    #[arg(long)]
    generate_n: Option<usize>,
    #[arg(long, default_value_t = 10)]
    count: usize,
    /// First generator seed; instance k uses `generate_seed + k`.
    #[arg(long, default_value_t = 1)]
    generate_seed: u64,
    #[arg(long, default_value = "exact", value_delimiter = ',')]
    mode: Vec<Mode>,
    #[arg(long, default_value = "comb", value_delimiter = ',', value_parser = parse_pricer)]
    pricer: Vec<Strategy>,
    #[arg(long, default_value = "true", value_delimiter = ',', action = clap::ArgAction::Set)]
    heurvar: Vec<bool>,
    #[command(flatten)]
    common: Common,
    /// `instance,objective` lines with best known values.
    #[arg(long)]
    best: Option<PathBuf>,
    /// Directory for runs.csv, summary.csv and profile.csv.
    #[arg(long)]
    out: PathBuf,
}

enum Failure {
    Input(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.to_string())
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// Parses `args` (program name first) and runs the command.
pub fn run(args: &[String], stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(stdout, "{text}") } else { write!(stderr, "{text}") };
            return code;
        }
    };
    let result = match cli.command {
        Command::Generate(a) => cmd_generate(a, stdout),
        Command::Solve(a) => cmd_solve(a, stdout),
        Command::Bench(a) => cmd_bench(a, stdout),
        Command::Verify { instance, partition } => cmd_verify(&instance, &partition, stdout),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Input(msg)) => {
            let _ = writeln!(stderr, "gccp: {msg}");
            1
        }
    }
}

fn cmd_generate(a: GenerateArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let inst = generate(&GeneratorConfig {
        n: a.n,
        m: a.m,
        p_c: a.p_c,
        p_in: a.p_in,
        p_out: a.p_out,
        seed: a.seed,
    })?;
    let text = format_instance(&inst);
    match a.out {
        Some(p) => write_file(&p, &text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(0)
}

fn settings(mode: Mode, pricer: Strategy, heurvar: bool, c: &Common) -> SolverSettings {
    SolverSettings {
        mode,
        pricer,
        strengthen: c.strengthen,
        heurvar,
        max_start: c.max_start,
        max_random_move: c.max_random_move,
        time_limit: c.time_limit,
        seed: c.seed,
    }
}

fn instance_id(path: &Path) -> String {
    path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

fn cmd_solve(a: SolveArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let inst = read_instance(&a.instance)?;
    let s = settings(a.mode, a.pricer, a.heurvar, &a.common);
    let out = report::run_solver(&instance_id(&a.instance), &inst.graph, &s)?;
    let mut echo = s.echo();
    echo.push(("instance", a.instance.display().to_string()));
    let text = report::format_rows(&echo, std::slice::from_ref(&out.row));
    match &a.out {
        Some(p) => write_file(p, &text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    if let Some(p) = &a.partition {
        write_file(p, &format_partition(&out.partition))?;
    }
    Ok(if out.row.timed_out { 2 } else { 0 })
}

fn cmd_bench(a: BenchArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let mut instances = Vec::new();
    for p in &a.instances {
        instances.push(BenchInstance {
            id: instance_id(p),
            graph: read_instance(p)?.graph,
        });
    }
    if let Some(n) = a.generate_n {
        for k in 0..a.count as u64 {
            let seed = a.generate_seed + k;
            instances.push(BenchInstance {
                id: format!("gen-n{n}-s{seed}"),
                graph: generate(&GeneratorConfig::new(n, seed))?.graph,
            });
        }
    }
    if instances.is_empty() {
        return Err(Failure::Input("bench needs at least one instance".into()));
    }
    let known = match &a.best {
        Some(p) => bench::parse_best_file(&std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?)?,
        None => BTreeMap::new(),
    };
    let base = settings(Mode::Exact, Strategy::Combinatorial, true, &a.common);
    let strengthen = [a.common.strengthen];
    let configs = bench::config_matrix(&a.mode, &a.pricer, &strengthen, &a.heurvar, &base);
    let workers = bench::workers_from_env();
    let results = bench::run_bench(&instances, &configs, workers)?;

    let all_rows: Vec<_> = results.iter().flat_map(|(_, r)| r.iter().cloned()).collect();
    let best = bench::best_values(&all_rows, &known);
    let summary: Vec<_> = results.iter().map(|(s, r)| bench::summarize(s, r, &best)).collect();
    let profiles: Vec<_> = results.iter().map(|(s, r)| (s.label(), bench::profile(r))).collect();

    std::fs::create_dir_all(&a.out).map_err(|e| format!("{}: {e}", a.out.display()))?;
    let mut echo = base.echo();
    echo.retain(|(k, _)| !matches!(*k, "mode" | "pricer" | "heurvar"));
    echo.push(("configs", configs.iter().map(|c| c.label()).collect::<Vec<_>>().join(" ")));
    echo.push(("instances", instances.iter().map(|i| i.id.as_str()).collect::<Vec<_>>().join(" ")));
    write_file(&a.out.join("runs.csv"), &report::format_rows(&echo, &all_rows))?;
    let mut buf = Vec::new();
    bench::write_summary(&mut buf, &summary)?;
    write_file(&a.out.join("summary.csv"), &String::from_utf8_lossy(&buf))?;
    let mut buf = Vec::new();
    bench::write_profile(&mut buf, &profiles)?;
    write_file(&a.out.join("profile.csv"), &String::from_utf8_lossy(&buf))?;

    stdout.write_all(bench::format_table(&summary).as_bytes())?;
    Ok(0)
}

fn cmd_verify(instance: &Path, partition: &Path, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let inst = read_instance(instance)?;
    let text = std::fs::read_to_string(partition).map_err(|e| format!("{}: {e}", partition.display()))?;
    let file = parse_partition(&text).map_err(|e| format!("{}: {e}", partition.display()))?;
    let objective = verify(&inst.graph, &file)?;
    writeln!(stdout, "objective {objective}")?;
    Ok(0)
}
