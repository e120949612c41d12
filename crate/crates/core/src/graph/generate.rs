use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Graph;
use crate::error::{Error, Result};

/// Barabási–Albert preferential attachment.
///
/// Starts from a clique on the first `m` nodes; every later node attaches to
/// `m` distinct existing nodes chosen with probability proportional to
/// degree. When only `m` nodes exist the newcomer joins all of them.
pub fn generate_ba(n: usize, m: usize, seed: u64) -> Result<Graph> {
    if m == 0 || m >= n {
        return Err(Error::param(format!(
            "BA generator needs 1 <= m < n, got n = {n}, m = {m}"
        )));
    }
    if n > u32::MAX as usize {
        return Err(Error::param(format!(
            "n = {n} does not fit 32-bit node ids"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs: Vec<(u32, u32)> = Vec::with_capacity(2 * ((n - m) * m + m * m));
    // Every edge endpoint once, so a uniform pick is a degree-weighted pick.
    let mut endpoints: Vec<u32> = Vec::with_capacity(2 * ((n - m) * m + m * m));
    let mut stamp = vec![u32::MAX; n];
    let mut targets = Vec::with_capacity(m);

    for u in 0..m as u32 {
        for v in 0..u {
            pairs.push((u, v));
            pairs.push((v, u));
            endpoints.push(u);
            endpoints.push(v);
        }
    }

    for v in m..n {
        targets.clear();
        if v == m || endpoints.is_empty() {
            targets.extend(0..v as u32);
        } else {
            while targets.len() < m {
                let t = endpoints[rng.random_range(0..endpoints.len())];
                if stamp[t as usize] != v as u32 {
                    stamp[t as usize] = v as u32;
                    targets.push(t);
                }
            }
        }
        let vv = v as u32;
        for &t in &targets {
            pairs.push((vv, t));
            pairs.push((t, vv));
            endpoints.push(vv);
            endpoints.push(t);
        }
    }
    Ok(Graph::from_directed_pairs(n, pairs))
}

/// Induced subgraph on a uniformly random `n_sub`-subset of the nodes,
/// relabelled to `0..n_sub` in the original relative order.
pub fn sample_induced(graph: &Graph, n_sub: usize, seed: u64) -> Result<Graph> {
    let n = graph.n();
    if n_sub > n {
        return Err(Error::param(format!(
            "cannot sample {n_sub} nodes from a graph with {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut keep = index::sample(&mut rng, n, n_sub).into_vec();
    keep.sort_unstable();

    let mut relabel = vec![u32::MAX; n];
    for (new, &old) in keep.iter().enumerate() {
        relabel[old] = new as u32;
    }
    let lists = keep
        .iter()
        .map(|&old| {
            graph
                .neighbors(old)
                .iter()
                .filter_map(|&w| match relabel[w as usize] {
                    u32::MAX => None,
                    x => Some(x),
                })
                .collect()
        })
        .collect();
    Ok(Graph::from_sorted_lists(lists))
}
