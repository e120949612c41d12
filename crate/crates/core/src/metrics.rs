//! Error metrics, communication costs and the clustering-coefficient
//! pipeline.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::mech::{edge_clip, sample_laplace, ClipParams, Variant};
use crate::rng::{user_stream, Step};
use crate::two_round::{id_bits, run_protocol, ProtocolConfig, REAL_BITS};

/// Default link rate for transfer-time figures, bits per second.
pub const DEFAULT_LINK_BPS: f64 = 20e6;

/// `|estimate - truth| / max(truth, 0.001 n)`.
pub fn relative_error(estimate: f64, truth: f64, n: usize) -> f64 {
    let eta = 0.001 * n as f64;
    (estimate - truth).abs() / truth.max(eta)
}

/// Summary of estimates of one quantity over repeated trials.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorReport {
    pub trials: usize,
    pub mean_estimate: f64,
    /// Mean squared error.
    pub l2_loss: f64,
    pub relative_error: f64,
    /// Standard error of the mean relative error.
    pub relative_error_sem: f64,
}

impl ErrorReport {
    pub fn from_estimates(estimates: &[f64], truth: f64, n: usize) -> Self {
        let trials = estimates.len();
        if trials == 0 {
            return ErrorReport {
                trials,
                mean_estimate: f64::NAN,
                l2_loss: f64::NAN,
                relative_error: f64::NAN,
                relative_error_sem: f64::NAN,
            };
        }
        let k = trials as f64;
        let rel: Vec<f64> = estimates
            .iter()
            .map(|&e| relative_error(e, truth, n))
            .collect();
        let (rel_mean, rel_sem) = mean_sem(&rel);
        ErrorReport {
            trials,
            mean_estimate: estimates.iter().sum::<f64>() / k,
            l2_loss: estimates.iter().map(|e| (e - truth).powi(2)).sum::<f64>() / k,
            relative_error: rel_mean,
            relative_error_sem: rel_sem,
        }
    }
}

/// Sample mean and standard error of the mean (0 for a single value).
pub fn mean_sem(xs: &[f64]) -> (f64, f64) {
    let k = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / k;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0);
    (mean, (var / k).sqrt())
}

/// Closed-form per-user communication bounds in bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnalyticCosts {
    /// `mu* n^2 ceil(log2 n)`.
    pub dl_bound_bits: f64,
    /// Download bound with `mu` replaced by `mu e^-eps1`.
    pub dl_sparse_bits: f64,
    /// `mu n ceil(log2 n) + 64`.
    pub ul_bound_bits: f64,
    /// Upload bound with `mu` replaced by `mu e^-eps1`.
    pub ul_sparse_bits: f64,
}

pub fn analytic_costs(variant: Variant, n: usize, mu_star: f64, eps1: f64) -> AnalyticCosts {
    let bits = id_bits(n) as f64;
    let n = n as f64;
    let rho = (-eps1).exp();
    let mu = variant.mu_from_star(mu_star);
    AnalyticCosts {
        dl_bound_bits: mu_star * n * n * bits,
        dl_sparse_bits: mu_star * rho.powi(variant.exponent()) * n * n * bits,
        ul_bound_bits: mu * n * bits + REAL_BITS as f64,
        ul_sparse_bits: mu * rho * n * bits + REAL_BITS as f64,
    }
}

/// Seconds to move `bits` over a link of `bits_per_second`.
pub fn transfer_seconds(bits: f64, bits_per_second: f64) -> f64 {
    bits / bits_per_second
}

/// Analytic bounds next to measured costs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CostReport {
    pub analytic: AnalyticCosts,
    /// Max over users of the mean per-user download across trials.
    pub measured_dl_max: f64,
    /// Max over users of the mean per-user upload across trials.
    pub measured_ul_max: f64,
}

impl CostReport {
    pub fn dl_seconds(&self, bits_per_second: f64) -> f64 {
        transfer_seconds(self.measured_dl_max, bits_per_second)
    }

    pub fn ul_seconds(&self, bits_per_second: f64) -> f64 {
        transfer_seconds(self.measured_ul_max, bits_per_second)
    }
}

/// Accumulates per-user bits over trials to form max-of-expectation costs.
#[derive(Debug, Clone, Default)]
pub struct CostAccumulator {
    dl: Vec<f64>,
    ul: Vec<f64>,
    trials: usize,
}

impl CostAccumulator {
    pub fn add(
        &mut self,
        dl_bits: impl ExactSizeIterator<Item = u64>,
        ul_bits: impl ExactSizeIterator<Item = u64>,
    ) {
        if self.dl.is_empty() {
            self.dl = vec![0.0; dl_bits.len()];
            self.ul = vec![0.0; ul_bits.len()];
        }
        for (acc, b) in self.dl.iter_mut().zip(dl_bits) {
            *acc += b as f64;
        }
        for (acc, b) in self.ul.iter_mut().zip(ul_bits) {
            *acc += b as f64;
        }
        self.trials += 1;
    }

    pub fn trials(&self) -> usize {
        self.trials
    }

    /// Per-user mean download bits.
    pub fn mean_dl(&self) -> Vec<f64> {
        self.dl
            .iter()
            .map(|b| b / self.trials.max(1) as f64)
            .collect()
    }

    /// Per-user mean upload bits.
    pub fn mean_ul(&self) -> Vec<f64> {
        self.ul
            .iter()
            .map(|b| b / self.trials.max(1) as f64)
            .collect()
    }

    pub fn report(&self, analytic: AnalyticCosts) -> CostReport {
        let max = |v: Vec<f64>| v.into_iter().fold(0.0, f64::max);
        CostReport {
            analytic,
            measured_dl_max: max(self.mean_dl()),
            measured_ul_max: max(self.mean_ul()),
        }
    }
}

/// Budget split and margin for the one-round 2-star estimator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StarConfig {
    pub eps0: f64,
    pub eps1: f64,
    pub alpha: f64,
    pub seed: u64,
}

impl StarConfig {
    /// `eps0 = eps / 10`, `eps1 = 9 eps / 10`, `alpha = 150`.
    pub fn split(epsilon: f64, seed: u64) -> Self {
        StarConfig {
            eps0: epsilon / 10.0,
            eps1: 9.0 * epsilon / 10.0,
            alpha: ProtocolConfig::DEFAULT_ALPHA,
            seed,
        }
    }
}

/// `x (x - 1) / 2` for a real `x`, floored at 0.
fn real_pairs(x: f64) -> f64 {
    (x * (x - 1.0) / 2.0).max(0.0)
}

/// One-round 2-star estimate: each user clips their full neighbor list,
/// counts the 2-stars they center and adds `Lap(C(d~, 2) / eps1)`.
pub fn estimate_2stars_ldp(graph: &Graph, cfg: &StarConfig) -> Result<f64> {
    if !(cfg.eps1 > 0.0) {
        return Err(Error::DegenerateBudget(format!(
            "2-star eps1 must be > 0, got {}",
            cfg.eps1
        )));
    }
    // beta plays no role in edge clipping.
    let clip = ClipParams::new(cfg.alpha, 0.5, cfg.eps0)?;
    let reports: Vec<f64> = (0..graph.n())
        .into_par_iter()
        .map(|i| {
            let mut rng = user_stream(cfg.seed, i, Step::Star);
            let c = edge_clip(graph.neighbors(i), &clip, &mut rng);
            let r = real_pairs(c.kept.len() as f64);
            let scale = if cfg.eps1.is_infinite() {
                0.0
            } else {
                real_pairs(c.noisy_degree) / cfg.eps1
            };
            r + sample_laplace(scale, &mut rng)
        })
        .collect();
    Ok(reports.iter().sum())
}

/// Triangle and 2-star estimates with their ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClusteringEstimate {
    pub triangles: f64,
    pub two_stars: f64,
    /// `3 triangles / two_stars`; `None` when the denominator is not positive.
    pub coefficient: Option<f64>,
}

pub fn estimate_clustering(
    graph: &Graph,
    triangle: &ProtocolConfig,
    star: &StarConfig,
) -> Result<ClusteringEstimate> {
    let triangles = run_protocol(graph, triangle)?.estimate;
    let two_stars = estimate_2stars_ldp(graph, star)?;
    let coefficient = (two_stars > 0.0).then(|| 3.0 * triangles / two_stars);
    Ok(ClusteringEstimate {
        triangles,
        two_stars,
        coefficient,
    })
}
