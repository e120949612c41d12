use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{run_on_graph, Algorithm, ClippingMode, ExperimentSpec, GraphSource, Row};
use crate::error::{Error, Result};

/// Largest grid accepted by default.
pub const DEFAULT_CELL_CAP: usize = 256;

/// Cartesian sweep over graphs, algorithms, clipping modes, budgets and `mu*`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchSpec {
    pub graphs: Vec<String>,
    pub algorithms: Vec<Algorithm>,
    pub clippings: Vec<ClippingMode>,
    pub epsilons: Vec<f64>,
    pub mu_stars: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub cell_cap: usize,
    /// Fill the runtime column with the wall time of each cell.
    pub timing: bool,
    /// Template for every cell; grid axes override its fields.
    pub base: Option<ExperimentSpec>,
}

impl BenchSpec {
    /// Cells of the grid in output order. One-round algorithms ignore the
    /// clipping axis and appear once per remaining combination.
    pub fn cells(&self) -> Vec<ExperimentSpec> {
        let mut out = Vec::new();
        for g in &self.graphs {
            for &alg in &self.algorithms {
                let clippings: &[ClippingMode] = if alg.variant().is_some() {
                    &self.clippings
                } else {
                    &self.clippings[..self.clippings.len().min(1)]
                };
                for &clip in clippings {
                    for &eps in &self.epsilons {
                        for &mu in &self.mu_stars {
                            let mut s = self
                                .base
                                .clone()
                                .unwrap_or_else(|| ExperimentSpec::new(g.as_str(), alg));
                            s.graph = g.clone();
                            s.algorithm = alg;
                            s.clipping = clip;
                            s.epsilon = eps;
                            s.mu_star = mu;
                            s.trials = self.trials;
                            s.seed = self.seed;
                            s.timing = false;
                            out.push(s);
                        }
                    }
                }
            }
        }
        out
    }
}

/// Runs every cell and returns one summary row per cell and statistic.
pub fn run_bench(spec: &BenchSpec) -> Result<Vec<Row>> {
    for (name, len) in [
        ("graphs", spec.graphs.len()),
        ("algorithms", spec.algorithms.len()),
        ("clippings", spec.clippings.len()),
        ("epsilons", spec.epsilons.len()),
        ("mu_stars", spec.mu_stars.len()),
    ] {
        if len == 0 {
            return Err(Error::param(format!("bench axis {name} is empty")));
        }
    }
    let cells = spec.cells();
    if cells.len() > spec.cell_cap {
        return Err(Error::Guard(format!(
            "grid has {} cells, cap is {}",
            cells.len(),
            spec.cell_cap
        )));
    }
    let mut rows = Vec::new();
    let mut loaded: Option<(String, crate::graph::Graph)> = None;
    for cell in &cells {
        if loaded
            .as_ref()
            .map(|(g, _)| g != &cell.graph)
            .unwrap_or(true)
        {
            let source: GraphSource = cell.graph.parse()?;
            loaded = Some((cell.graph.clone(), source.load(spec.seed)?));
        }
        let (name, graph) = loaded.as_ref().expect("graph loaded above");
        let start = Instant::now();
        let out = run_on_graph(cell, graph, name, false)?;
        let ms = start.elapsed().as_secs_f64() * 1e3;
        for mut row in out.rows.into_iter().filter(|r| r.trial == "summary") {
            if spec.timing {
                row.runtime_ms = Some(ms);
            }
            rows.push(row);
        }
    }
    Ok(rows)
}
