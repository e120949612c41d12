//! Two-round triangle counting.
//!
//! Round one: every user `i` perturbs the bits `a_{i,j}`, `j < i`, with the
//! ARR and uploads the ids of the 1s; the server assembles `E'`. Round two:
//! user `i` downloads `M_i`, counts noisy triangles `t_i` and 2-stars `s_i`
//! among their lower neighbors, and uploads `w_i = t_i - mu* rho s_i` plus
//! Laplace noise. The server rescales the sum by `1 / (mu* (1 - rho))`.
//!
//! With [`Clipping::Double`] the user first projects their neighbor list to
//! a noisy degree, then clips noisy triangles at a threshold `kappa_i`
//! derived from the excess-probability bound, and the noise scales with
//! `kappa_i` instead of the public maximum degree.

mod edges;
mod flow;
mod message;

use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use edges::NoisyEdgeSet;
pub use flow::clipped_triangle_count;
pub use message::{build_message, id_bits, Message};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::mech::{
    arr_lower_list, clipping_threshold, edge_clip, sample_laplace, ArrParams, ClipParams,
    ClippedNeighbors, Variant,
};
use crate::metrics::{analytic_costs, AnalyticCosts};
use crate::rng::{user_stream, Step};

/// Bits for one uploaded real number.
pub const REAL_BITS: u64 = 64;

/// How round two bounds the sensitivity of `w_i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum Clipping {
    /// No clipping; noise is calibrated to a public maximum degree.
    None { d_max: usize },
    /// Edge clipping only; noise is calibrated to the noisy degree.
    Edge { alpha: f64 },
    /// Edge clipping followed by noisy-triangle clipping.
    Double { alpha: f64, beta: f64 },
}

impl Clipping {
    pub fn name(&self) -> &'static str {
        match self {
            Clipping::None { .. } => "none",
            Clipping::Edge { .. } => "edge",
            Clipping::Double { .. } => "double",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProtocolConfig {
    pub variant: Variant,
    /// Budget for the noisy degree; unused without clipping.
    pub eps0: f64,
    /// Budget for the ARR in round one.
    pub eps1: f64,
    /// Budget for the Laplace noise in round two; `f64::INFINITY` disables it.
    pub eps2: f64,
    /// Target `mu*`; the per-variant `mu` is its square or cube root.
    pub mu_star: f64,
    pub clipping: Clipping,
    pub seed: u64,
}

impl ProtocolConfig {
    pub const DEFAULT_ALPHA: f64 = 150.0;
    pub const DEFAULT_BETA: f64 = 1e-6;

    /// No clipping, `eps1 = eps2 = eps / 2`.
    pub fn plain(variant: Variant, epsilon: f64, mu_star: f64, d_max: usize, seed: u64) -> Self {
        ProtocolConfig {
            variant,
            eps0: 0.0,
            eps1: epsilon / 2.0,
            eps2: epsilon / 2.0,
            mu_star,
            clipping: Clipping::None { d_max },
            seed,
        }
    }

    /// Double clipping with `eps0 = eps / 10`, `eps1 = eps2 = 9 eps / 20`,
    /// `alpha = 150` and `beta = 1e-6`.
    pub fn double_clip(variant: Variant, epsilon: f64, mu_star: f64, seed: u64) -> Self {
        ProtocolConfig {
            variant,
            eps0: epsilon / 10.0,
            eps1: 9.0 * epsilon / 20.0,
            eps2: 9.0 * epsilon / 20.0,
            mu_star,
            clipping: Clipping::Double {
                alpha: Self::DEFAULT_ALPHA,
                beta: Self::DEFAULT_BETA,
            },
            seed,
        }
    }

    /// Edge clipping only, with the same split as [`ProtocolConfig::double_clip`].
    pub fn edge_clip(variant: Variant, epsilon: f64, mu_star: f64, seed: u64) -> Self {
        ProtocolConfig {
            clipping: Clipping::Edge {
                alpha: Self::DEFAULT_ALPHA,
            },
            ..Self::double_clip(variant, epsilon, mu_star, seed)
        }
    }

    /// Total budget of the composed protocol.
    pub fn total_epsilon(&self) -> f64 {
        match self.clipping {
            Clipping::None { .. } => self.eps1 + self.eps2,
            _ => self.eps0 + self.eps1 + self.eps2,
        }
    }

    /// Per-variant `mu`.
    pub fn mu(&self) -> f64 {
        self.variant.mu_from_star(self.mu_star)
    }

    pub fn rho(&self) -> f64 {
        (-self.eps1).exp()
    }

    pub fn arr_params(&self) -> Result<ArrParams> {
        ArrParams::new(self.eps1, self.mu())
    }

    /// Clipping parameters, if the mode uses edge clipping.
    pub fn clip_params(&self) -> Result<Option<ClipParams>> {
        match self.clipping {
            Clipping::None { .. } => Ok(None),
            // beta is irrelevant to edge-only clipping; any valid value will do.
            Clipping::Edge { alpha } => ClipParams::new(alpha, 0.5, self.eps0).map(Some),
            Clipping::Double { alpha, beta } => ClipParams::new(alpha, beta, self.eps0).map(Some),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mu_star >= 0.0 && self.mu_star <= 1.0) {
            return Err(Error::param(format!(
                "mu* must lie in [0, 1], got {}",
                self.mu_star
            )));
        }
        if !(self.eps1 >= 0.0) || self.eps1.is_nan() {
            return Err(Error::param(format!(
                "eps1 must be >= 0, got {}",
                self.eps1
            )));
        }
        if !(self.eps2 > 0.0) {
            return Err(Error::param(format!("eps2 must be > 0, got {}", self.eps2)));
        }
        self.arr_params()?;
        self.clip_params()?;
        Ok(())
    }
}

/// Round one: ARR on every user's lower neighbor list, assembled into `E'`.
pub fn round1(graph: &Graph, cfg: &ProtocolConfig) -> Result<NoisyEdgeSet> {
    let params = cfg.arr_params()?;
    let reports: Vec<Vec<u32>> = (0..graph.n())
        .into_par_iter()
        .map(|i| {
            let mut rng = user_stream(cfg.seed, i, Step::Randomize);
            arr_lower_list(graph.lower_neighbors(i), i, &params, &mut rng)
        })
        .collect();
    Ok(NoisyEdgeSet::from_reports(&reports))
}

/// Output of one user's round-two computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Round2 {
    /// Noisy-triangle count, after clipping if enabled.
    pub t: f64,
    /// 2-stars among the (possibly projected) lower neighbors.
    pub s: u64,
    /// `t - mu* rho s`.
    pub w: f64,
    /// `w` plus Laplace noise.
    pub w_hat: f64,
    /// Scale of the Laplace noise.
    pub noise_scale: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub noisy_degree: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    /// Neighbors dropped by edge clipping.
    pub removed: usize,
}

fn pairs2(d: usize) -> u64 {
    let d = d as u64;
    d * d.saturating_sub(1) / 2
}

fn noise_scale(sensitivity: f64, eps2: f64) -> f64 {
    if eps2.is_infinite() {
        0.0
    } else {
        sensitivity / eps2
    }
}

/// Round two without clipping. `nbrs` are the lower neighbors of the user.
pub fn round2_user_plain<R: Rng + ?Sized>(
    nbrs: &[u32],
    msg: &Message<'_>,
    d_max: usize,
    cfg: &ProtocolConfig,
    rng: &mut R,
) -> Round2 {
    let t = msg.count_triangles(nbrs) as f64;
    let s = pairs2(nbrs.len());
    let w = t - cfg.mu_star * cfg.rho() * s as f64;
    let scale = noise_scale(d_max as f64, cfg.eps2);
    Round2 {
        t,
        s,
        w,
        w_hat: w + sample_laplace(scale, rng),
        noise_scale: scale,
        noisy_degree: None,
        kappa: None,
        removed: 0,
    }
}

/// Noise-free part of double clipping for an already projected list.
///
/// Returns `(t_i, s_i, kappa_i)` where `t_i` is the clipped noisy-triangle
/// count over `clipped.kept`.
pub fn doubleclip_statistic(
    clipped: &ClippedNeighbors,
    msg: &Message<'_>,
    variant: Variant,
    mu: f64,
    beta: f64,
) -> (f64, u64, f64) {
    let kappa = clipping_threshold(variant, mu, clipped.noisy_degree, beta);
    let mut pairs = Vec::new();
    msg.for_each_triangle(&clipped.kept, |j, k| pairs.push((j, k)));
    let t = clipped_triangle_count(&clipped.kept, &pairs, kappa);
    (t, pairs2(clipped.kept.len()), kappa)
}

/// Round two with clipping. Both the projection and the Laplace noise draw
/// from `rng`. Under [`Clipping::Edge`] only the projection is applied and
/// the noise scales with the noisy degree.
pub fn round2_user_doubleclip<R: Rng + ?Sized>(
    nbrs: &[u32],
    msg: &Message<'_>,
    cfg: &ProtocolConfig,
    rng: &mut R,
) -> Result<Round2> {
    let clipped = edge_clip(nbrs, &required_clip(cfg)?, rng);
    finish_clipped(clipped, msg, cfg, rng)
}

fn required_clip(cfg: &ProtocolConfig) -> Result<ClipParams> {
    cfg.clip_params()?
        .ok_or_else(|| Error::param("configuration has no clipping parameters"))
}

fn finish_clipped<R: Rng + ?Sized>(
    clipped: ClippedNeighbors,
    msg: &Message<'_>,
    cfg: &ProtocolConfig,
    rng: &mut R,
) -> Result<Round2> {
    let correction = cfg.mu_star * cfg.rho();
    let (t, s, kappa, sensitivity) = match cfg.clipping {
        Clipping::Double { beta, .. } => {
            let (t, s, kappa) = doubleclip_statistic(&clipped, msg, cfg.variant, cfg.mu(), beta);
            (t, s, Some(kappa), kappa)
        }
        Clipping::Edge { .. } => {
            let t = msg.count_triangles(&clipped.kept) as f64;
            (t, pairs2(clipped.kept.len()), None, clipped.noisy_degree)
        }
        Clipping::None { .. } => return Err(Error::param("clipping mode is none")),
    };
    let w = t - correction * s as f64;
    let scale = noise_scale(sensitivity, cfg.eps2);
    Ok(Round2 {
        t,
        s,
        w,
        w_hat: w + sample_laplace(scale, rng),
        noise_scale: scale,
        noisy_degree: Some(clipped.noisy_degree),
        kappa,
        removed: clipped.removed,
    })
}

/// Per-user record of one protocol run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UserReport {
    pub user: usize,
    /// `|r_i|`.
    pub reported: usize,
    /// `|M_i|`.
    pub message_len: u64,
    pub ul_bits: u64,
    pub dl_bits: u64,
    #[serde(flatten)]
    pub round2: Round2,
}

/// Aggregated outcome of one protocol run.
#[derive(Debug, Clone, Serialize)]
pub struct EstimateResult {
    pub estimate: f64,
    pub n: usize,
    /// `|E'|`.
    pub noisy_edges: usize,
    /// Largest per-user download in bits.
    pub dl_bits_max: u64,
    /// Largest per-user upload in bits.
    pub ul_bits_max: u64,
    pub analytic: AnalyticCosts,
    #[serde(skip)]
    pub elapsed_ms: f64,
    pub reports: Vec<UserReport>,
}

impl EstimateResult {
    /// JSON transcript of the run together with its configuration.
    pub fn transcript_json(&self, cfg: &ProtocolConfig) -> Result<String> {
        #[derive(Serialize)]
        struct Transcript<'a> {
            config: &'a ProtocolConfig,
            result: &'a EstimateResult,
        }
        Ok(serde_json::to_string_pretty(&Transcript {
            config: cfg,
            result: self,
        })?)
    }
}

/// Sum of the noisy statistics, rescaled to an unbiased triangle estimate.
pub fn aggregate(reports: Vec<UserReport>, cfg: &ProtocolConfig) -> Result<EstimateResult> {
    let rho = cfg.rho();
    if !(rho < 1.0) {
        return Err(Error::DegenerateBudget(format!(
            "eps1 = {} gives rho = 1",
            cfg.eps1
        )));
    }
    if !(cfg.mu_star > 0.0) {
        return Err(Error::DegenerateBudget(
            "mu* = 0 carries no information".into(),
        ));
    }
    let n = reports.len();
    // Fixed summation order keeps runs bit-reproducible across thread counts.
    let sum: f64 = reports.iter().map(|r| r.round2.w_hat).sum();
    Ok(EstimateResult {
        estimate: sum / (cfg.mu_star * (1.0 - rho)),
        n,
        noisy_edges: reports.iter().map(|r| r.reported).sum(),
        dl_bits_max: reports.iter().map(|r| r.dl_bits).max().unwrap_or(0),
        ul_bits_max: reports.iter().map(|r| r.ul_bits).max().unwrap_or(0),
        analytic: analytic_costs(cfg.variant, n, cfg.mu_star, cfg.eps1),
        elapsed_ms: 0.0,
        reports,
    })
}

/// Round two for every user, in user order.
pub fn run_round2(
    graph: &Graph,
    edges: &NoisyEdgeSet,
    cfg: &ProtocolConfig,
) -> Result<Vec<UserReport>> {
    let n = graph.n();
    if edges.n() != n {
        return Err(Error::param(format!(
            "E' has {} users, graph has {n}",
            edges.n()
        )));
    }
    let bits = id_bits(n);
    (0..n)
        .into_par_iter()
        .map(|i| {
            let nbrs = graph.lower_neighbors(i);
            let msg = build_message(cfg.variant, edges, i);
            let mut noise = user_stream(cfg.seed, i, Step::Noise);
            let round2 = match cfg.clipping {
                Clipping::None { d_max } => round2_user_plain(nbrs, &msg, d_max, cfg, &mut noise),
                _ => {
                    let mut clip_rng = user_stream(cfg.seed, i, Step::EdgeClip);
                    let clipped = edge_clip(nbrs, &required_clip(cfg)?, &mut clip_rng);
                    finish_clipped(clipped, &msg, cfg, &mut noise)?
                }
            };
            let reported = edges.lower(i).len();
            let message_len = msg.len();
            Ok(UserReport {
                user: i,
                reported,
                message_len,
                ul_bits: reported as u64 * bits + REAL_BITS,
                dl_bits: message_len * 2 * bits,
                round2,
            })
        })
        .collect()
}

/// Both rounds plus aggregation.
pub fn run_protocol(graph: &Graph, cfg: &ProtocolConfig) -> Result<EstimateResult> {
    cfg.validate()?;
    let start = Instant::now();
    let edges = round1(graph, cfg)?;
    let reports = run_round2(graph, &edges, cfg)?;
    let mut result = aggregate(reports, cfg)?;
    result.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(result)
}
