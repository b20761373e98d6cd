//! Plain-text instance files.
//!
//! ```text
//! gccp-instance 1 chacha8          (optional)
//! n m seed p_c p_in p_out
//! <n feature rows, m bits each, "-" when m = 0>
//! <one edge per line: i j, 1-based>
//! <n truth labels, one per line>
//! ```

use std::fmt::Write as _;
use std::path::Path;

use gccp_core::generator::{GeneratorConfig, LabeledInstance, RNG_NAME};
use gccp_core::{AttributedGraph, GraphError};

pub const MAGIC: &str = "gccp-instance";
pub const VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum InstanceError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unsupported instance format: {0}")]
    Format(String),
    #[error("invalid graph: {0}")]
    Graph(#[from] GraphError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

fn parse_err(line: usize, message: impl Into<String>) -> InstanceError {
    InstanceError::Parse {
        line,
        message: message.into(),
    }
}

pub fn format_instance(inst: &LabeledInstance) -> String {
    let g = &inst.graph;
    let c = &inst.config;
    let mut out = String::new();
    writeln!(out, "{MAGIC} {VERSION} {RNG_NAME}").unwrap();
    writeln!(out, "{} {} {} {} {} {}", g.n(), g.m(), c.seed, c.p_c, c.p_in, c.p_out).unwrap();
    for row in g.features() {
        if row.is_empty() {
            out.push('-');
        }
        for &b in row {
            out.push(if b == 1 { '1' } else { '0' });
        }
        out.push('\n');
    }
    for &(i, j) in g.edges() {
        writeln!(out, "{} {}", i + 1, j + 1).unwrap();
    }
    for &t in &inst.truth {
        writeln!(out, "{t}").unwrap();
    }
    out
}

fn field<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T, InstanceError> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| parse_err(line, format!("bad {what} `{tok}`")))
}

pub fn parse_instance(text: &str) -> Result<LabeledInstance, InstanceError> {
    let mut lines = text.lines().enumerate().map(|(k, l)| (k + 1, l.trim())).peekable();
    let (_, first) = *lines.peek().ok_or_else(|| parse_err(1, "empty file"))?;
    let parts: Vec<&str> = first.split_whitespace().collect();
    // the version line is optional; a file may start at the size header
    if parts.first() == Some(&MAGIC) {
        lines.next();
        if parts.get(1) != Some(&VERSION.to_string().as_str()) {
            return Err(InstanceError::Format(format!(
                "version {} (this build reads {VERSION})",
                parts.get(1).unwrap_or(&"?")
            )));
        }
        if let Some(rng) = parts.get(2) {
            if *rng != RNG_NAME {
                return Err(InstanceError::Format(format!("generator `{rng}` (this build uses {RNG_NAME})")));
            }
        }
    } else if parts.first().is_some_and(|t| t.parse::<usize>().is_err()) {
        return Err(InstanceError::Format(format!("expected `{MAGIC}` or a size header, got `{first}`")));
    }

    let (hl, header) = lines.next().ok_or_else(|| parse_err(2, "missing header"))?;
    let mut tok = header.split_whitespace();
    let n: usize = field(tok.next(), hl, "n")?;
    let m: usize = field(tok.next(), hl, "m")?;
    let seed: u64 = field(tok.next(), hl, "seed")?;
    let p_c: f64 = field(tok.next(), hl, "p_c")?;
    let p_in: f64 = field(tok.next(), hl, "p_in")?;
    let p_out: f64 = field(tok.next(), hl, "p_out")?;
    if tok.next().is_some() {
        return Err(parse_err(hl, "trailing fields in header"));
    }

    let mut last = hl;
    let mut features = Vec::with_capacity(n);
    for _ in 0..n {
        let (l, row) = lines
            .next()
            .ok_or_else(|| parse_err(last + 1, "file ends inside the feature rows"))?;
        last = l;
        let bits: Vec<u8> = if m == 0 && row == "-" {
            Vec::new()
        } else {
            row.chars()
                .map(|ch| match ch {
                    '0' => Ok(0),
                    '1' => Ok(1),
                    _ => Err(parse_err(l, format!("bad feature bit `{ch}`"))),
                })
                .collect::<Result<_, _>>()?
        };
        if bits.len() != m {
            return Err(parse_err(l, format!("expected {m} feature bits, got {}", bits.len())));
        }
        features.push(bits);
    }

    let mut edges = Vec::new();
    let mut truth = Vec::with_capacity(n);
    for (l, row) in lines.by_ref() {
        last = l;
        if row.is_empty() {
            continue;
        }
        let toks: Vec<&str> = row.split_whitespace().collect();
        match toks.len() {
            2 if truth.is_empty() => {
                let i: usize = field(Some(toks[0]), l, "edge endpoint")?;
                let j: usize = field(Some(toks[1]), l, "edge endpoint")?;
                if i == 0 || j == 0 || i > n || j > n {
                    return Err(parse_err(l, format!("edge ({i}, {j}) outside 1..={n}")));
                }
                edges.push((i - 1, j - 1));
            }
            1 => {
                let t: u8 = field(Some(toks[0]), l, "truth label")?;
                if t != 1 && t != 2 {
                    return Err(parse_err(l, format!("truth label {t} is not 1 or 2")));
                }
                truth.push(t);
                if truth.len() == n {
                    break;
                }
            }
            _ => return Err(parse_err(l, format!("unexpected line `{row}`"))),
        }
    }
    if truth.len() != n {
        return Err(parse_err(last + 1, format!("expected {n} truth labels, got {}", truth.len())));
    }
    if let Some((l, row)) = lines.find(|(_, r)| !r.is_empty()) {
        return Err(parse_err(l, format!("unexpected trailing line `{row}`")));
    }

    let graph = AttributedGraph::from_features(features, &edges)?;
    Ok(LabeledInstance {
        graph,
        truth,
        config: GeneratorConfig {
            n,
            m,
            p_c,
            p_in,
            p_out,
            seed,
        },
    })
}

pub fn write_instance(inst: &LabeledInstance, path: &Path) -> Result<(), InstanceError> {
    std::fs::write(path, format_instance(inst)).map_err(|source| InstanceError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn read_instance(path: &Path) -> Result<LabeledInstance, InstanceError> {
    let text = std::fs::read_to_string(path).map_err(|source| InstanceError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_instance(&text)
}
