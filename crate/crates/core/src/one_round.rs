//! One-round baselines: every user applies randomized response to the lower
//! part of their neighbor list and the server counts triangles in the noisy
//! graph directly.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{binomial, count_kstars, count_triangles, Graph};
use crate::mech::{arr_lower_list, ArrParams};
use crate::rng::{user_stream, Step};
use crate::two_round::NoisyEdgeSet;

/// Largest `n` accepted by the cubic brute-force triple classifier.
pub const BRUTE_FORCE_MAX_N: usize = 3000;

/// Triples of nodes classified by how many of their three pairs are edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TripleCounts {
    pub m3: u64,
    pub m2: u64,
    pub m1: u64,
    pub m0: u64,
}

impl TripleCounts {
    /// Counts indexed by the number of edges: `[m0, m1, m2, m3]`.
    pub fn by_edges(&self) -> [f64; 4] {
        [
            self.m0 as f64,
            self.m1 as f64,
            self.m2 as f64,
            self.m3 as f64,
        ]
    }
}

/// Triple classification through triangle and 2-star counts.
pub fn count_noisy_triples(g: &Graph) -> TripleCounts {
    let n = g.n() as u64;
    let m3 = count_triangles(g);
    let m2 = count_kstars(g, 2) - 3 * m3;
    let m1 = g.num_edges() as u64 * n.saturating_sub(2) - 2 * m2 - 3 * m3;
    let m0 = binomial(n, 3) - m3 - m2 - m1;
    TripleCounts { m3, m2, m1, m0 }
}

/// Cubic reference classifier; refuses graphs with more than
/// [`BRUTE_FORCE_MAX_N`] nodes.
pub fn count_noisy_triples_brute_force(g: &Graph) -> Result<TripleCounts> {
    let n = g.n();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::Guard(format!(
            "brute-force triple count needs n <= {BRUTE_FORCE_MAX_N}, got {n}"
        )));
    }
    let mut m = [0u64; 4];
    for a in 0..n {
        for b in a + 1..n {
            let ab = g.has_edge(a, b) as usize;
            for c in b + 1..n {
                m[ab + g.has_edge(a, c) as usize + g.has_edge(b, c) as usize] += 1;
            }
        }
    }
    Ok(TripleCounts {
        m0: m[0],
        m1: m[1],
        m2: m[2],
        m3: m[3],
    })
}

/// `M[s][t] = Pr[noisy triple has s edges | true triple has t edges]` under
/// independent per-pair randomized response.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixingMatrix {
    pub m: [[f64; 4]; 4],
}

impl MixingMatrix {
    /// Warner RR with flip probability `q = 1 / (e^eps + 1)`.
    pub fn warner(epsilon: f64) -> Self {
        let q = 1.0 / (epsilon.exp() + 1.0);
        MixingMatrix {
            m: convolution(1.0 - q, q),
        }
    }

    /// Exact inverse; the 4x4 matrix is the symmetric cube of the per-pair
    /// 2x2 channel, so its inverse is the symmetric cube of the 2x2 inverse.
    pub fn warner_inverse(epsilon: f64) -> Result<Self> {
        let q = 1.0 / (epsilon.exp() + 1.0);
        let det = 1.0 - 2.0 * q;
        if !(det.abs() > 1e-15) {
            return Err(Error::DegenerateBudget(format!(
                "eps = {epsilon} makes the RR channel singular"
            )));
        }
        Ok(MixingMatrix {
            m: convolution((1.0 - q) / det, -q / det),
        })
    }

    pub fn apply(&self, v: [f64; 4]) -> [f64; 4] {
        let mut out = [0.0; 4];
        for (s, row) in self.m.iter().enumerate() {
            out[s] = row.iter().zip(v).map(|(a, b)| a * b).sum();
        }
        out
    }
}

/// Coefficients of `(keep x + 1 - keep)^t (flip x + 1 - flip)^(3 - t)`.
fn convolution(keep: f64, flip: f64) -> [[f64; 4]; 4] {
    let mut m = [[0.0; 4]; 4];
    for t in 0..4 {
        let mut poly = vec![1.0];
        for e in 0..3 {
            let p = if e < t { keep } else { flip };
            let mut next = vec![0.0; poly.len() + 1];
            for (s, c) in poly.iter().enumerate() {
                next[s] += c * (1.0 - p);
                next[s + 1] += c * p;
            }
            poly = next;
        }
        for (row, c) in m.iter_mut().zip(poly) {
            row[t] = c;
        }
    }
    m
}

/// Warner RR on every user's lower list, optionally followed by keeping
/// each reported 1 with probability `p2`.
fn noisy_graph(g: &Graph, epsilon: f64, p2: f64, seed: u64) -> Result<Graph> {
    let warner = ArrParams::warner(epsilon)?;
    let reports: Vec<Vec<u32>> = (0..g.n())
        .into_par_iter()
        .map(|i| {
            let mut rng = user_stream(seed, i, Step::Randomize);
            let mut r = arr_lower_list(g.lower_neighbors(i), i, &warner, &mut rng);
            if p2 < 1.0 {
                let mut sample = user_stream(seed, i, Step::Sample);
                r.retain(|_| sample.random_bool(p2));
            }
            r
        })
        .collect();
    Ok(NoisyEdgeSet::from_reports(&reports).to_graph())
}

/// Noisy-triangle count of the Warner-RR graph.
pub fn rr_biased_estimate(g: &Graph, epsilon: f64, seed: u64) -> Result<f64> {
    Ok(count_triangles(&noisy_graph(g, epsilon, 1.0, seed)?) as f64)
}

/// Unbiased estimate by inverting the triple mixing matrix.
pub fn rr_unbiased_estimate(g: &Graph, epsilon: f64, seed: u64) -> Result<f64> {
    let inv = MixingMatrix::warner_inverse(epsilon)?;
    let counts = count_noisy_triples(&noisy_graph(g, epsilon, 1.0, seed)?);
    Ok(inv.apply(counts.by_edges())[3])
}

/// Undoes the `p2` sampling on noisy triple counts, returning
/// `[m0, m1, m2, m3]` estimates of the Warner-RR triple counts.
pub fn unsample_triples(sampled: &TripleCounts, p2: f64, n: usize) -> [f64; 4] {
    let q = 1.0 - p2;
    let m3 = sampled.m3 as f64 / p2.powi(3);
    let m2 = sampled.m2 as f64 / p2.powi(2) - 3.0 * q * m3;
    let m1 = sampled.m1 as f64 / p2 - 3.0 * q * q * m3 - 2.0 * q * m2;
    let m0 = binomial(n as u64, 3) as f64 - m3 - m2 - m1;
    [m0, m1, m2, m3]
}

/// ARR (Warner RR plus sampling with `p2`) followed by the sampling
/// correction and the RR inversion. `p2 = 1` reproduces
/// [`rr_unbiased_estimate`] draw for draw.
pub fn arr_unbiased_estimate(g: &Graph, epsilon: f64, p2: f64, seed: u64) -> Result<f64> {
    if !(p2 > 0.0 && p2 <= 1.0) {
        return Err(Error::param(format!("p2 must lie in (0, 1], got {p2}")));
    }
    let inv = MixingMatrix::warner_inverse(epsilon)?;
    let sampled = count_noisy_triples(&noisy_graph(g, epsilon, p2, seed)?);
    Ok(inv.apply(unsample_triples(&sampled, p2, g.n()))[3])
}

/// Expected noisy-edge count of a one-round run, for memory guards.
pub fn expected_noisy_edges(g: &Graph, epsilon: f64, p2: f64) -> f64 {
    let q = 1.0 / (epsilon.exp() + 1.0);
    let m = g.num_edges() as f64;
    let pairs = binomial(g.n() as u64, 2) as f64;
    p2 * ((1.0 - q) * m + q * (pairs - m))
}
