//! Plain-text edge lists.
//!
//! One edge per line as two whitespace-separated node ids. Lines starting
//! with `#` or `%` are comments, except for an optional `# n=<int>` header
//! that fixes the node count.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use super::Graph;
use crate::error::{Error, Result};

fn parse_header(line: &str) -> Option<&str> {
    let body = line.trim_start_matches('#').trim();
    body.strip_prefix("n=")
        .or_else(|| body.strip_prefix("n ="))
        .map(str::trim)
}

pub fn load_edge_list<R: BufRead>(reader: R) -> Result<Graph> {
    let mut declared_n: Option<usize> = None;
    let mut max_id: Option<u64> = None;
    let mut pairs = Vec::new();

    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed.starts_with('#') || trimmed.starts_with('%') {
            if let Some(value) = parse_header(trimmed) {
                let n = value.parse::<usize>().map_err(|e| Error::Parse {
                    line: lineno,
                    msg: format!("bad node-count header {value:?}: {e}"),
                })?;
                if declared_n.is_some() {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: "duplicate n= header".into(),
                    });
                }
                if let Some(m) = max_id.filter(|&m| m >= n as u64) {
                    return Err(Error::NodeOutOfBounds {
                        line: lineno,
                        id: m,
                        n,
                    });
                }
                declared_n = Some(n);
            }
            continue;
        }

        let mut tokens = trimmed.split_whitespace();
        let (Some(a), Some(b), None) = (tokens.next(), tokens.next(), tokens.next()) else {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("expected two node ids, got {trimmed:?}"),
            });
        };
        let parse = |tok: &str| {
            tok.parse::<u64>().map_err(|e| Error::Parse {
                line: lineno,
                msg: format!("bad node id {tok:?}: {e}"),
            })
        };
        let (u, v) = (parse(a)?, parse(b)?);
        let hi = u.max(v);
        if let Some(n) = declared_n {
            if hi >= n as u64 {
                return Err(Error::NodeOutOfBounds {
                    line: lineno,
                    id: hi,
                    n,
                });
            }
        }
        if hi >= u32::MAX as u64 {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("node id {hi} exceeds 32 bits"),
            });
        }
        max_id = Some(max_id.map_or(hi, |m| m.max(hi)));
        if u != v {
            pairs.push((u as u32, v as u32));
            pairs.push((v as u32, u as u32));
        }
    }

    let n = declared_n.unwrap_or_else(|| max_id.map_or(0, |m| m as usize + 1));
    Ok(Graph::from_directed_pairs(n, pairs))
}

pub fn read_edge_list_file(path: impl AsRef<Path>) -> Result<Graph> {
    let file = File::open(path)?;
    load_edge_list(BufReader::new(file))
}

/// Writes `# n=<n>` followed by each edge once, smaller id first.
pub fn write_edge_list<W: Write>(graph: &Graph, mut out: W) -> Result<()> {
    writeln!(out, "# n={}", graph.n())?;
    for (u, v) in graph.edges() {
        writeln!(out, "{u} {v}")?;
    }
    Ok(())
}
