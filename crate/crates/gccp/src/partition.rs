//! Partition files: an objective header, then one block per line as
//! space-separated 1-based vertex ids.

use std::fmt::Write as _;

use gccp_core::{AttributedGraph, Cost, Partition, VertexSet};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionFile {
    /// Objective stated in the header, if any.
    pub objective: Option<Cost>,
    /// Blocks with 0-based members, in file order.
    pub blocks: Vec<VertexSet>,
}

pub fn format_partition(p: &Partition) -> String {
    let mut out = String::new();
    writeln!(out, "# objective {}", p.objective()).unwrap();
    for b in p.blocks() {
        let ids: Vec<String> = b.iter().map(|v| (v + 1).to_string()).collect();
        writeln!(out, "{}", ids.join(" ")).unwrap();
    }
    out
}

pub fn parse_partition(text: &str) -> Result<PartitionFile, PartitionError> {
    let mut objective = None;
    let mut blocks = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let row = raw.trim();
        if row.is_empty() {
            continue;
        }
        if let Some(rest) = row.strip_prefix('#') {
            let mut tok = rest.split_whitespace();
            if tok.next() == Some("objective") {
                let v = tok.next().ok_or(PartitionError::Parse {
                    line,
                    message: "objective value missing".into(),
                })?;
                objective = Some(v.parse().map_err(|_| PartitionError::Parse {
                    line,
                    message: format!("bad objective `{v}`"),
                })?);
            }
            continue;
        }
        let mut members = Vec::new();
        for t in row.split_whitespace() {
            let id: usize = t.parse().map_err(|_| PartitionError::Parse {
                line,
                message: format!("bad vertex id `{t}`"),
            })?;
            if id == 0 {
                return Err(PartitionError::Parse {
                    line,
                    message: "vertex ids are 1-based".into(),
                });
            }
            members.push(id - 1);
        }
        blocks.push(VertexSet::new(members));
    }
    Ok(PartitionFile { objective, blocks })
}

/// Why a partition file fails verification; vertices and blocks are
/// reported 1-based.
#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("vertex {0} is in no block")]
    MissingVertex(usize),
    #[error("vertex {0} is in more than one block")]
    DuplicateVertex(usize),
    #[error("vertex {0} does not exist")]
    UnknownVertex(usize),
    #[error("block {index} ({block}) is not connected")]
    Disconnected { index: usize, block: String },
    #[error("block {0} is empty")]
    EmptyBlock(usize),
    #[error("stated objective {stated} differs from recomputed {actual}")]
    Objective { stated: Cost, actual: Cost },
}

fn one_based(s: &VertexSet) -> String {
    let ids: Vec<String> = s.iter().map(|v| (v + 1).to_string()).collect();
    format!("{{{}}}", ids.join(" "))
}

/// Rechecks cover, connectivity and objective without trusting the file.
pub fn verify(graph: &AttributedGraph, file: &PartitionFile) -> Result<Cost, VerifyError> {
    let n = graph.n();
    let mut owner = vec![0usize; n];
    for (k, b) in file.blocks.iter().enumerate() {
        if b.is_empty() {
            return Err(VerifyError::EmptyBlock(k + 1));
        }
        for v in b.iter() {
            if v >= n {
                return Err(VerifyError::UnknownVertex(v + 1));
            }
            owner[v] += 1;
            if owner[v] > 1 {
                return Err(VerifyError::DuplicateVertex(v + 1));
            }
        }
    }
    if let Some(v) = owner.iter().position(|&c| c == 0) {
        return Err(VerifyError::MissingVertex(v + 1));
    }
    let mut total = 0;
    for (k, b) in file.blocks.iter().enumerate() {
        if !graph.is_connected_set(b) {
            return Err(VerifyError::Disconnected {
                index: k + 1,
                block: one_based(b),
            });
        }
        total += graph.cost_of(b);
    }
    if let Some(stated) = file.objective {
        if stated != total {
            return Err(VerifyError::Objective { stated, actual: total });
        }
    }
    Ok(total)
}
