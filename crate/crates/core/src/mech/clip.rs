use rand::Rng;

use super::{sample_laplace, ClipParams};
use crate::rng::mix64;

/// Result of edge clipping (graph projection) on one neighbor list.
#[derive(Debug, Clone, PartialEq)]
pub struct ClippedNeighbors {
    /// Surviving neighbors, ascending. `kept.len() <= noisy_degree`.
    pub kept: Vec<u32>,
    /// `max(d + Lap(1/eps0) + alpha, 0)`, kept as a real.
    pub noisy_degree: f64,
    /// Number of neighbors dropped by the projection.
    pub removed: usize,
}

/// Edge clipping: computes a noisy degree and, if the true degree exceeds
/// it, drops `d - floor(noisy_degree)` neighbors chosen uniformly at random.
pub fn edge_clip<R: Rng + ?Sized>(
    neighbors: &[u32],
    params: &ClipParams,
    rng: &mut R,
) -> ClippedNeighbors {
    let noise = sample_laplace(1.0 / params.epsilon0, rng);
    let key = rng.random::<u64>();
    edge_clip_with_noise(neighbors, params.alpha, noise, key)
}

/// Deterministic core of [`edge_clip`] with the Laplace draw and the
/// projection key supplied by the caller.
pub fn edge_clip_with_noise(
    neighbors: &[u32],
    alpha: f64,
    noise: f64,
    key: u64,
) -> ClippedNeighbors {
    let d = neighbors.len();
    let noisy_degree = (d as f64 + noise + alpha).max(0.0);
    if (d as f64) <= noisy_degree {
        return ClippedNeighbors {
            kept: neighbors.to_vec(),
            noisy_degree,
            removed: 0,
        };
    }
    let keep = noisy_degree.floor() as usize;
    let kept = project_by_priority(neighbors, keep, key);
    ClippedNeighbors {
        removed: d - kept.len(),
        kept,
        noisy_degree,
    }
}

/// Keeps the `keep` neighbors with the smallest pseudo-random priority
/// `mix64(key ^ j)` and returns them ascending.
///
/// The priority of a neighbor does not depend on the rest of the list, so
/// two lists that differ in one neighbor keep the same survivors apart from
/// that neighbor and at most one displaced element.
pub fn project_by_priority(neighbors: &[u32], keep: usize, key: u64) -> Vec<u32> {
    if keep >= neighbors.len() {
        return neighbors.to_vec();
    }
    let mut ranked: Vec<(u64, u32)> = neighbors
        .iter()
        .map(|&j| (mix64(key ^ j as u64), j))
        .collect();
    if keep > 0 {
        ranked.select_nth_unstable(keep - 1);
    }
    let mut kept: Vec<u32> = ranked[..keep].iter().map(|&(_, j)| j).collect();
    kept.sort_unstable();
    kept
}
