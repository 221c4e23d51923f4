//! Plain-text graph files.
//!
//! ```text
//! # comment
//! p fvs <n> <m>
//! e <u> <v>      one line per edge copy, 1-based ids; `e u u` is a self-loop
//! f <v>          v is undeletable
//! ```
//!
//! Ids are 1-based in files and 0-based in memory.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::multigraph::{MultiGraph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GraphFile {
    pub graph: MultiGraph,
    pub undeletable: BTreeSet<Vertex>,
}

pub fn parse(text: &str) -> Result<GraphFile, ParseError> {
    let mut header: Option<(usize, u32, usize)> = None;
    let mut graph = MultiGraph::new();
    let mut undeletable = BTreeSet::new();
    let mut edges = 0usize;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let err = |message: String| ParseError { line, message };
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        let number = |s: &str| -> Result<u64, ParseError> {
            s.parse()
                .map_err(|_| err(format!("expected a number, found {s:?}")))
        };
        match fields[0] {
            "p" => {
                if header.is_some() {
                    return Err(err("duplicate header".into()));
                }
                if fields.len() != 4 || fields[1] != "fvs" {
                    return Err(err("expected `p fvs <n> <m>`".into()));
                }
                let n = u32::try_from(number(fields[2])?)
                    .map_err(|_| err("vertex count too large".into()))?;
                let m = number(fields[3])? as usize;
                graph = MultiGraph::with_vertices(n);
                header = Some((line, n, m));
            }
            "e" | "f" => {
                let Some((_, n, _)) = header else {
                    return Err(err("missing `p fvs` header before body".into()));
                };
                let expected = if fields[0] == "e" { 3 } else { 2 };
                if fields.len() != expected {
                    return Err(err(format!("malformed `{}` line", fields[0])));
                }
                let ids = fields[1..]
                    .iter()
                    .map(|s| {
                        let id = number(s)?;
                        if id == 0 || id > n as u64 {
                            return Err(err(format!("vertex id {id} outside 1..={n}")));
                        }
                        Ok(id as Vertex - 1)
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                if fields[0] == "e" {
                    graph.add_edge(ids[0], ids[1]).unwrap();
                    edges += 1;
                } else {
                    undeletable.insert(ids[0]);
                }
            }
            other => return Err(err(format!("unknown line type {other:?}"))),
        }
    }

    let Some((line, _, m)) = header else {
        return Err(ParseError {
            line: 0,
            message: "missing `p fvs <n> <m>` header".into(),
        });
    };
    if edges != m {
        return Err(ParseError {
            line,
            message: format!("header declares {m} edges, body has {edges}"),
        });
    }
    Ok(GraphFile { graph, undeletable })
}

/// Writes the graph with its vertices renumbered `1..=n` in ascending id order.
pub fn serialize(file: &GraphFile) -> String {
    let ids: Vec<Vertex> = file.graph.vertices().collect();
    let one_based = |v: Vertex| ids.binary_search(&v).unwrap() + 1;
    let mut out = String::new();
    writeln!(out, "p fvs {} {}", ids.len(), file.graph.edge_count()).unwrap();
    for (u, v, m) in file.graph.edges() {
        for _ in 0..m {
            writeln!(out, "e {} {}", one_based(u), one_based(v)).unwrap();
        }
    }
    for &v in file.undeletable.iter().filter(|&&v| file.graph.contains(v)) {
        writeln!(out, "f {}", one_based(v)).unwrap();
    }
    out
}
