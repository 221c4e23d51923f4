//! Runs `solve_minimum` over a directory of graph files.

use std::io::{self, Write};
use std::path::Path;
use std::time::Instant;

use thiserror::Error;

use super::io::parse;
use crate::solver::{solve_minimum, SolverConfig};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("cannot read corpus directory {path}: {source}")]
    Corpus { path: String, source: io::Error },
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub instance: String,
    /// Optimum size; `None` when the instance failed or has no solution.
    pub opt: Option<usize>,
    pub nodes: u64,
    pub branch_nodes: u64,
    pub prunes: u64,
    pub time_ms: f64,
    /// `ok`, `infeasible`, or an error message for unreadable files.
    pub status: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub config: String,
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    pub fn total_branch_nodes(&self) -> u64 {
        self.rows.iter().map(|r| r.branch_nodes).sum()
    }

    /// Config echo as `#` lines, then one CSV row per instance in corpus order.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "# config: {}", self.config)?;
        let mut csv = csv::Writer::from_writer(out);
        csv.write_record([
            "instance",
            "opt",
            "nodes",
            "branch_nodes",
            "prunes",
            "time_ms",
            "status",
        ])?;
        for row in &self.rows {
            csv.write_record([
                row.instance.clone(),
                row.opt.map(|o| o.to_string()).unwrap_or_default(),
                row.nodes.to_string(),
                row.branch_nodes.to_string(),
                row.prunes.to_string(),
                format!("{:.3}", row.time_ms),
                row.status.clone(),
            ])?;
        }
        csv.flush()
    }
}

/// Solves every regular, non-hidden file of `dir` in file-name order.
/// Files that cannot be read or parsed produce an error row.
pub fn bench(dir: &Path, config: &SolverConfig) -> Result<BenchReport, BenchError> {
    let corpus_err = |source| BenchError::Corpus {
        path: dir.display().to_string(),
        source,
    };
    let mut files = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(corpus_err)? {
        let entry = entry.map_err(corpus_err)?;
        let name = entry.file_name().to_string_lossy().into_owned();
        if !name.starts_with('.') && entry.path().is_file() {
            files.push((name, entry.path()));
        }
    }
    files.sort();

    let rows = files
        .into_iter()
        .map(|(name, path)| {
            let parsed = std::fs::read_to_string(&path)
                .map_err(|e| e.to_string())
                .and_then(|text| parse(&text).map_err(|e| e.to_string()));
            let file = match parsed {
                Ok(file) => file,
                Err(message) => {
                    return BenchRow {
                        instance: name,
                        opt: None,
                        nodes: 0,
                        branch_nodes: 0,
                        prunes: 0,
                        time_ms: 0.0,
                        status: format!("error: {message}"),
                    }
                }
            };
            let start = Instant::now();
            let (solution, stats) = solve_minimum(&file.graph, &file.undeletable, config)
                .expect("parsed undeletable vertices belong to the graph");
            BenchRow {
                instance: name,
                opt: solution.as_ref().map(|s| s.len()),
                nodes: stats.nodes_expanded,
                branch_nodes: stats.branch_nodes,
                prunes: stats.prunes.total(),
                time_ms: start.elapsed().as_secs_f64() * 1e3,
                status: if solution.is_some() {
                    "ok"
                } else {
                    "infeasible"
                }
                .into(),
            }
        })
        .collect();
    Ok(BenchReport {
        config: config.describe(),
        rows,
    })
}
