//! Seeded experiment harness.
//!
//! An [`ExperimentSpec`] names a graph source, an algorithm and its budgets.
//! [`run_experiment`] executes the trials (in parallel, buffered in trial
//! order) and returns CSV rows; identical specs give identical bytes unless
//! timing is requested.

mod bench;

use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use bench::{run_bench, BenchSpec, DEFAULT_CELL_CAP};

use crate::error::{Error, Result};
use crate::graph::{
    binomial, exact_counts, generate_ba, read_edge_list_file, sample_induced, ExactCounts, Graph,
};
use crate::mech::{warner_keep_prob, Variant};
use crate::metrics::{
    analytic_costs, estimate_2stars_ldp, mean_sem, relative_error, CostAccumulator, StarConfig,
};
use crate::one_round::{
    arr_unbiased_estimate, expected_noisy_edges, rr_biased_estimate, rr_unbiased_estimate,
};
use crate::rng::trial_seed;
use crate::two_round::{run_protocol, Clipping, EstimateResult, ProtocolConfig};

/// Default cap on the expected number of noisy edges held in memory.
pub const DEFAULT_MAX_NOISY_EDGES: f64 = 2e8;

/// Where the input graph comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphSource {
    /// Edge-list file.
    File(PathBuf),
    /// Barabási–Albert graph `ba:<n>:<m>`.
    Ba { n: usize, m: usize },
    /// Induced subgraph on `n` random nodes of a file, `sample:<n>:<path>`.
    Sample { n: usize, path: PathBuf },
}

impl GraphSource {
    /// Materializes the graph; `seed` drives generation and sampling.
    pub fn load(&self, seed: u64) -> Result<Graph> {
        match self {
            GraphSource::File(p) => read_edge_list_file(p),
            GraphSource::Ba { n, m } => generate_ba(*n, *m, seed),
            GraphSource::Sample { n, path } => {
                sample_induced(&read_edge_list_file(path)?, *n, seed)
            }
        }
    }
}

impl FromStr for GraphSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let num = |x: &str, what: &str| {
            x.parse::<usize>().map_err(|_| {
                Error::param(format!("{what} in graph source {s:?} is not an integer"))
            })
        };
        if let Some(rest) = s.strip_prefix("ba:") {
            let (n, m) = rest
                .split_once(':')
                .ok_or_else(|| Error::param(format!("expected ba:<n>:<m>, got {s:?}")))?;
            return Ok(GraphSource::Ba {
                n: num(n, "n")?,
                m: num(m, "m")?,
            });
        }
        if let Some(rest) = s.strip_prefix("sample:") {
            let (n, path) = rest
                .split_once(':')
                .ok_or_else(|| Error::param(format!("expected sample:<n>:<path>, got {s:?}")))?;
            return Ok(GraphSource::Sample {
                n: num(n, "n")?,
                path: PathBuf::from(path),
            });
        }
        if s.is_empty() {
            return Err(Error::param("empty graph source"));
        }
        Ok(GraphSource::File(PathBuf::from(s)))
    }
}

impl fmt::Display for GraphSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSource::File(p) => write!(f, "{}", p.display()),
            GraphSource::Ba { n, m } => write!(f, "ba:{n}:{m}"),
            GraphSource::Sample { n, path } => write!(f, "sample:{n}:{}", path.display()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Full,
    #[serde(rename = "onens")]
    OneNs,
    #[serde(rename = "twons")]
    TwoNs,
    RrBiased,
    RrUnbiased,
    ArrUnbiased,
    Cluster,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Full => "full",
            Algorithm::OneNs => "onens",
            Algorithm::TwoNs => "twons",
            Algorithm::RrBiased => "rr-biased",
            Algorithm::RrUnbiased => "rr-unbiased",
            Algorithm::ArrUnbiased => "arr-unbiased",
            Algorithm::Cluster => "cluster",
        }
    }

    /// Two-round variant; the clustering pipeline counts triangles with OneNS.
    pub fn variant(self) -> Option<Variant> {
        match self {
            Algorithm::Full => Some(Variant::Full),
            Algorithm::OneNs | Algorithm::Cluster => Some(Variant::OneNs),
            Algorithm::TwoNs => Some(Variant::TwoNs),
            _ => None,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let all = [
            Algorithm::Full,
            Algorithm::OneNs,
            Algorithm::TwoNs,
            Algorithm::RrBiased,
            Algorithm::RrUnbiased,
            Algorithm::ArrUnbiased,
            Algorithm::Cluster,
        ];
        let lower = s.to_ascii_lowercase();
        all.into_iter()
            .find(|a| a.name() == lower)
            .ok_or_else(|| Error::param(format!("unknown algorithm {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClippingMode {
    None,
    Edge,
    Double,
}

impl ClippingMode {
    pub fn name(self) -> &'static str {
        match self {
            ClippingMode::None => "none",
            ClippingMode::Edge => "edge",
            ClippingMode::Double => "double",
        }
    }
}

impl fmt::Display for ClippingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClippingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "none" | "plain" => Ok(ClippingMode::None),
            "edge" => Ok(ClippingMode::Edge),
            "double" | "dc" => Ok(ClippingMode::Double),
            other => Err(Error::param(format!("unknown clipping mode {other:?}"))),
        }
    }
}

fn default_epsilon() -> f64 {
    1.0
}
fn default_mu_star() -> f64 {
    1e-3
}
fn default_alpha() -> f64 {
    ProtocolConfig::DEFAULT_ALPHA
}
fn default_beta() -> f64 {
    ProtocolConfig::DEFAULT_BETA
}
fn default_trials() -> usize {
    1
}
fn default_link() -> f64 {
    crate::metrics::DEFAULT_LINK_BPS
}
fn default_max_edges() -> f64 {
    DEFAULT_MAX_NOISY_EDGES
}

/// One experiment: a graph, an algorithm, budgets and a trial count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    /// Graph source string: a path, `ba:<n>:<m>` or `sample:<n>:<path>`.
    pub graph: String,
    pub algorithm: Algorithm,
    #[serde(default = "default_clipping")]
    pub clipping: ClippingMode,
    /// Total budget of the triangle estimator.
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    /// Split overrides; unset parts take the defaults for the clipping mode.
    #[serde(default)]
    pub eps0: Option<f64>,
    #[serde(default)]
    pub eps1: Option<f64>,
    #[serde(default)]
    pub eps2: Option<f64>,
    #[serde(default = "default_mu_star")]
    pub mu_star: f64,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_beta")]
    pub beta: f64,
    /// Sampling rate of the one-round ARR baseline; defaults to `mu* / p1`.
    #[serde(default)]
    pub p2: Option<f64>,
    /// Budget of the 2-star side of the clustering pipeline; defaults to `epsilon`.
    #[serde(default)]
    pub star_epsilon: Option<f64>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    /// Link rate for transfer-time figures, bits per second.
    #[serde(default = "default_link")]
    pub link_bps: f64,
    /// Cap on the expected `|E'|`.
    #[serde(default = "default_max_edges")]
    pub max_noisy_edges: f64,
    /// Fill the runtime column (makes output nondeterministic).
    #[serde(default)]
    pub timing: bool,
}

fn default_clipping() -> ClippingMode {
    ClippingMode::Double
}

impl ExperimentSpec {
    pub fn new(graph: impl Into<String>, algorithm: Algorithm) -> Self {
        ExperimentSpec {
            graph: graph.into(),
            algorithm,
            clipping: default_clipping(),
            epsilon: default_epsilon(),
            eps0: None,
            eps1: None,
            eps2: None,
            mu_star: default_mu_star(),
            alpha: default_alpha(),
            beta: default_beta(),
            p2: None,
            star_epsilon: None,
            trials: default_trials(),
            seed: 0,
            link_bps: default_link(),
            max_noisy_edges: default_max_edges(),
            timing: false,
        }
    }

    pub fn source(&self) -> Result<GraphSource> {
        self.graph.parse()
    }

    /// Resolved `(eps0, eps1, eps2)`; parts must sum to `epsilon`.
    pub fn budget_split(&self) -> Result<(f64, f64, f64)> {
        let e = self.epsilon;
        let (d0, d1, d2) = match self.clipping {
            ClippingMode::None => (0.0, e / 2.0, e / 2.0),
            _ => (e / 10.0, 9.0 * e / 20.0, 9.0 * e / 20.0),
        };
        let split = (
            self.eps0.unwrap_or(d0),
            self.eps1.unwrap_or(d1),
            self.eps2.unwrap_or(d2),
        );
        let sum = split.0 + split.1 + split.2;
        if (sum - e).abs() > 1e-9 * e.abs().max(1.0) {
            return Err(Error::param(format!(
                "budget split {:?} sums to {sum}, not epsilon = {e}",
                split
            )));
        }
        if self.clipping == ClippingMode::None && split.0 != 0.0 {
            return Err(Error::param("eps0 must be 0 without clipping"));
        }
        Ok(split)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::param("trials must be >= 1"));
        }
        if !(self.epsilon > 0.0) || !self.epsilon.is_finite() {
            return Err(Error::param(format!(
                "epsilon must be finite and > 0, got {}",
                self.epsilon
            )));
        }
        if !(self.link_bps > 0.0) {
            return Err(Error::param("link rate must be > 0"));
        }
        self.source()?;
        if self.algorithm.variant().is_some() {
            self.budget_split()?;
        }
        Ok(())
    }

    /// Protocol configuration of the two-round triangle estimator.
    pub fn protocol_config(&self, d_max: usize, seed: u64) -> Result<ProtocolConfig> {
        let variant = self.algorithm.variant().ok_or_else(|| {
            Error::param(format!("{} is not a two-round algorithm", self.algorithm))
        })?;
        let (eps0, eps1, eps2) = self.budget_split()?;
        let clipping = match self.clipping {
            ClippingMode::None => Clipping::None { d_max },
            ClippingMode::Edge => Clipping::Edge { alpha: self.alpha },
            ClippingMode::Double => Clipping::Double {
                alpha: self.alpha,
                beta: self.beta,
            },
        };
        let cfg = ProtocolConfig {
            variant,
            eps0,
            eps1,
            eps2,
            mu_star: self.mu_star,
            clipping,
            seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Sampling rate of the one-round ARR baseline.
    pub fn one_round_p2(&self) -> f64 {
        self.p2
            .unwrap_or_else(|| (self.mu_star / warner_keep_prob(self.epsilon)).min(1.0))
    }
}

/// One CSV row. Trial rows leave the summary-only columns empty; the
/// summary row has `trial = "summary"`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub dataset: String,
    pub algorithm: String,
    pub clipping: String,
    pub epsilon: f64,
    pub mu_star: f64,
    pub seed: u64,
    pub trial: String,
    pub statistic: String,
    pub estimate: f64,
    pub truth: f64,
    pub rel_err: f64,
    pub rel_err_sem: Option<f64>,
    pub rel_err_median: Option<f64>,
    pub l2: f64,
    pub dl_bits_max: Option<f64>,
    pub ul_bits_max: Option<f64>,
    pub dl_seconds: Option<f64>,
    pub runtime_ms: Option<f64>,
}

/// Everything a run produces.
#[derive(Debug, Clone)]
pub struct ExperimentOutput {
    pub rows: Vec<Row>,
    pub exact: ExactCounts,
    /// Per-trial JSON transcripts of two-round runs, if requested.
    pub transcripts: Vec<String>,
}

struct TrialOutcome {
    seed: u64,
    /// `(statistic, estimate)` pairs.
    values: Vec<(&'static str, f64)>,
    protocol: Option<EstimateResult>,
    transcript: Option<String>,
    runtime_ms: f64,
}

/// Expected `|E'|` of a two-round run.
pub fn expected_two_round_edges(g: &Graph, cfg: &ProtocolConfig) -> f64 {
    let m = g.num_edges() as f64;
    let pairs = binomial(g.n() as u64, 2) as f64;
    cfg.mu() * (m + cfg.rho() * (pairs - m))
}

fn guard_edges(expected: f64, cap: f64, detail: impl FnOnce() -> String) -> Result<()> {
    if expected > cap {
        return Err(Error::Guard(format!(
            "expected {expected:.3e} noisy edges exceeds the cap of {cap:.3e}; {}",
            detail()
        )));
    }
    Ok(())
}

/// Runs every trial of `spec` and returns trial rows plus one summary row
/// per statistic.
pub fn run_experiment(spec: &ExperimentSpec, transcripts: bool) -> Result<ExperimentOutput> {
    spec.validate()?;
    let source = spec.source()?;
    let graph = source.load(spec.seed)?;
    run_on_graph(spec, &graph, &source.to_string(), transcripts)
}

/// As [`run_experiment`] with an already loaded graph.
pub fn run_on_graph(
    spec: &ExperimentSpec,
    graph: &Graph,
    dataset: &str,
    transcripts: bool,
) -> Result<ExperimentOutput> {
    spec.validate()?;
    let exact = exact_counts(graph);
    let n = graph.n();
    let d_max = graph.max_degree();

    match spec.algorithm.variant() {
        Some(_) => {
            let cfg = spec.protocol_config(d_max, 0)?;
            guard_edges(
                expected_two_round_edges(graph, &cfg),
                spec.max_noisy_edges,
                || {
                    let a = analytic_costs(cfg.variant, n, cfg.mu_star, cfg.eps1);
                    format!(
                        "projected per-user download bound is {:.3e} bits",
                        a.dl_bound_bits
                    )
                },
            )?;
        }
        None => {
            let p2 = if spec.algorithm == Algorithm::ArrUnbiased {
                spec.one_round_p2()
            } else {
                1.0
            };
            guard_edges(
                expected_noisy_edges(graph, spec.epsilon, p2),
                spec.max_noisy_edges,
                || "one-round baselines materialize the noisy graph".into(),
            )?;
        }
    }

    let outcomes: Vec<TrialOutcome> = (0..spec.trials as u64)
        .into_par_iter()
        .map(|t| run_trial(spec, graph, d_max, trial_seed(spec.seed, t), transcripts))
        .collect::<Result<_>>()?;

    let truth_of = |stat: &str| match stat {
        "triangles" => exact.triangles as f64,
        "two_stars" => exact.two_stars as f64,
        _ => exact.clustering_coefficient.unwrap_or(0.0),
    };
    let base = |trial: String, stat: &str, seed: u64| Row {
        dataset: dataset.to_string(),
        algorithm: spec.algorithm.name().into(),
        clipping: if spec.algorithm.variant().is_some() {
            spec.clipping.name().into()
        } else {
            String::new()
        },
        epsilon: spec.epsilon,
        mu_star: spec.mu_star,
        seed,
        trial,
        statistic: stat.into(),
        estimate: 0.0,
        truth: truth_of(stat),
        rel_err: 0.0,
        rel_err_sem: None,
        rel_err_median: None,
        l2: 0.0,
        dl_bits_max: None,
        ul_bits_max: None,
        dl_seconds: None,
        runtime_ms: None,
    };

    let mut rows = Vec::new();
    let mut costs = CostAccumulator::default();
    for (t, o) in outcomes.iter().enumerate() {
        if let Some(p) = &o.protocol {
            costs.add(
                p.reports.iter().map(|r| r.dl_bits),
                p.reports.iter().map(|r| r.ul_bits),
            );
        }
        for &(stat, est) in &o.values {
            let mut row = base(t.to_string(), stat, o.seed);
            row.estimate = est;
            row.rel_err = relative_error(est, row.truth, n);
            row.l2 = (est - row.truth).powi(2);
            if stat == "triangles" {
                if let Some(p) = &o.protocol {
                    row.dl_bits_max = Some(p.dl_bits_max as f64);
                    row.ul_bits_max = Some(p.ul_bits_max as f64);
                    row.dl_seconds = Some(p.dl_bits_max as f64 / spec.link_bps);
                }
            }
            if spec.timing {
                row.runtime_ms = Some(o.runtime_ms);
            }
            rows.push(row);
        }
    }

    let stats: Vec<&'static str> = outcomes[0].values.iter().map(|&(s, _)| s).collect();
    for (k, stat) in stats.iter().enumerate() {
        let est: Vec<f64> = outcomes.iter().map(|o| o.values[k].1).collect();
        let mut row = base("summary".into(), stat, spec.seed);
        let rel: Vec<f64> = est
            .iter()
            .map(|&e| relative_error(e, row.truth, n))
            .collect();
        let (rel_mean, rel_sem) = mean_sem(&rel);
        row.estimate = est.iter().sum::<f64>() / est.len() as f64;
        row.rel_err = rel_mean;
        row.rel_err_sem = Some(rel_sem);
        row.rel_err_median = Some(median(&rel));
        row.l2 = est.iter().map(|e| (e - row.truth).powi(2)).sum::<f64>() / est.len() as f64;
        if *stat == "triangles" && costs.trials() > 0 {
            let cfg = spec.protocol_config(d_max, 0)?;
            let report = costs.report(analytic_costs(cfg.variant, n, cfg.mu_star, cfg.eps1));
            row.dl_bits_max = Some(report.measured_dl_max);
            row.ul_bits_max = Some(report.measured_ul_max);
            row.dl_seconds = Some(report.dl_seconds(spec.link_bps));
        }
        if spec.timing {
            row.runtime_ms =
                Some(outcomes.iter().map(|o| o.runtime_ms).sum::<f64>() / outcomes.len() as f64);
        }
        rows.push(row);
    }

    let transcripts = outcomes.into_iter().filter_map(|o| o.transcript).collect();
    Ok(ExperimentOutput {
        rows,
        exact,
        transcripts,
    })
}

fn run_trial(
    spec: &ExperimentSpec,
    graph: &Graph,
    d_max: usize,
    seed: u64,
    transcript: bool,
) -> Result<TrialOutcome> {
    let start = Instant::now();
    let mut protocol = None;
    let mut transcript_json = None;
    let values = match spec.algorithm {
        Algorithm::RrBiased => vec![("triangles", rr_biased_estimate(graph, spec.epsilon, seed)?)],
        Algorithm::RrUnbiased => vec![(
            "triangles",
            rr_unbiased_estimate(graph, spec.epsilon, seed)?,
        )],
        Algorithm::ArrUnbiased => {
            vec![(
                "triangles",
                arr_unbiased_estimate(graph, spec.epsilon, spec.one_round_p2(), seed)?,
            )]
        }
        alg => {
            let cfg = spec.protocol_config(d_max, seed)?;
            let result = run_protocol(graph, &cfg)?;
            if transcript {
                transcript_json = Some(result.transcript_json(&cfg)?);
            }
            let tri = result.estimate;
            let mut v = vec![("triangles", tri)];
            if alg == Algorithm::Cluster {
                let star_eps = spec.star_epsilon.unwrap_or(spec.epsilon);
                // The 2-star side runs on an independent seed.
                let stars =
                    estimate_2stars_ldp(graph, &StarConfig::split(star_eps, seed ^ 0x5354_4152))?;
                v.push(("two_stars", stars));
                v.push((
                    "clustering",
                    if stars > 0.0 {
                        3.0 * tri / stars
                    } else {
                        f64::NAN
                    },
                ));
            }
            protocol = Some(result);
            v
        }
    };
    Ok(TrialOutcome {
        seed,
        values,
        protocol,
        transcript: transcript_json,
        runtime_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

fn median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k == 0 {
        f64::NAN
    } else if k % 2 == 1 {
        v[k / 2]
    } else {
        (v[k / 2 - 1] + v[k / 2]) / 2.0
    }
}

/// Writes rows as CSV with a header line.
pub fn write_csv<W: Write>(rows: &[Row], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
