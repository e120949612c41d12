#![allow(dead_code)]

use ldp_tri::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn erdos_renyi(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n as u32 {
        for v in u + 1..n as u32 {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

pub fn complete(n: usize) -> Graph {
    Graph::from_edges(n, (0..n as u32).flat_map(|u| (0..u).map(move |v| (u, v)))).unwrap()
}

/// Sample mean, unbiased variance and standard error of the mean.
pub fn moments(xs: &[f64]) -> (f64, f64, f64) {
    let k = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / k;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0);
    (mean, var, (var / k).sqrt())
}

/// Brute-force noisy-triangle set `{(j, k) in pairs : j, k in nbrs}`.
pub fn brute_triangle_pairs(pairs: &[(u32, u32)], nbrs: &[u32]) -> Vec<(u32, u32)> {
    pairs
        .iter()
        .copied()
        .filter(|(j, k)| nbrs.contains(j) && nbrs.contains(k))
        .collect()
}
