//! Exact (non-private) subgraph counters and brute-force oracles.

use rayon::prelude::*;
use serde::Serialize;

use super::Graph;

/// `C(n, k)`, saturating at `u64::MAX`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

fn intersection_len(a: &[u32], b: &[u32]) -> u64 {
    let (mut i, mut j, mut c) = (0, 0, 0u64);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

/// Number of triangles. Each triangle `u < v < w` is found once, from edge
/// `(u, v)`, as a common neighbor above both endpoints.
pub fn count_triangles(g: &Graph) -> u64 {
    (0..g.n())
        .into_par_iter()
        .map(|u| {
            let up = g.upper_neighbors(u);
            up.iter()
                .map(|&v| intersection_len(up, g.upper_neighbors(v as usize)))
                .sum::<u64>()
        })
        .sum()
}

/// Number of k-stars, `sum_i C(d_i, k)`.
pub fn count_kstars(g: &Graph, k: u32) -> u64 {
    assert!(k >= 1, "k-stars need k >= 1");
    (0..g.n())
        .map(|i| binomial(g.degree(i) as u64, k as u64))
        .fold(0u64, u64::saturating_add)
}

/// Number of (unordered, simple) 4-cycles.
///
/// Every 4-cycle has two diagonals; a diagonal `(u, w)` with `c` common
/// neighbors closes `C(c, 2)` cycles, so summing over pairs `u < w` counts
/// each cycle twice.
pub fn count_4cycles(g: &Graph) -> u64 {
    let n = g.n();
    let twice: u64 = (0..n)
        .into_par_iter()
        .map_init(
            || (vec![0u32; n], Vec::<u32>::new()),
            |(codeg, touched), u| {
                for &v in g.neighbors(u) {
                    let nv = g.neighbors(v as usize);
                    let above = nv.partition_point(|&w| w as usize <= u);
                    for &w in &nv[above..] {
                        if codeg[w as usize] == 0 {
                            touched.push(w);
                        }
                        codeg[w as usize] += 1;
                    }
                }
                let mut acc = 0u64;
                for &w in touched.iter() {
                    acc += binomial(codeg[w as usize] as u64, 2);
                    codeg[w as usize] = 0;
                }
                touched.clear();
                acc
            },
        )
        .sum();
    twice / 2
}

/// Reference triangle count over all `C(n, 3)` triples.
pub fn brute_force_triangles(g: &Graph) -> u64 {
    let n = g.n();
    let mut c = 0;
    for a in 0..n {
        for b in a + 1..n {
            if !g.has_edge(a, b) {
                continue;
            }
            for d in b + 1..n {
                if g.has_edge(a, d) && g.has_edge(b, d) {
                    c += 1;
                }
            }
        }
    }
    c
}

/// Reference k-star count: every center with every k-subset of the other
/// nodes, checked edge by edge. Exponential in `n`; tests only.
pub fn brute_force_kstars(g: &Graph, k: u32) -> u64 {
    let n = g.n();
    let mut c = 0;
    for center in 0..n {
        let others: Vec<usize> = (0..n).filter(|&x| x != center).collect();
        let m = others.len();
        for mask in 0u64..(1u64 << m) {
            if mask.count_ones() != k {
                continue;
            }
            if (0..m)
                .filter(|b| mask >> b & 1 == 1)
                .all(|b| g.has_edge(center, others[b]))
            {
                c += 1;
            }
        }
    }
    c
}

/// Reference 4-cycle count over all 4-subsets and their three cyclic orders.
pub fn brute_force_4cycles(g: &Graph) -> u64 {
    let n = g.n();
    let e = |x, y| g.has_edge(x, y);
    let cyc = |a, b, c, d| e(a, b) && e(b, c) && e(c, d) && e(d, a);
    let mut count = 0;
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    count +=
                        cyc(a, b, c, d) as u64 + cyc(a, b, d, c) as u64 + cyc(a, c, b, d) as u64;
                }
            }
        }
    }
    count
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct DegreeStats {
    pub max: usize,
    pub mean: f64,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ExactCounts {
    pub n: usize,
    pub edges: usize,
    pub triangles: u64,
    pub two_stars: u64,
    pub three_stars: u64,
    pub four_cycles: u64,
    /// `3 * triangles / two_stars`; `None` when there are no 2-stars.
    pub clustering_coefficient: Option<f64>,
    pub degree: DegreeStats,
}

pub fn exact_counts(g: &Graph) -> ExactCounts {
    let triangles = count_triangles(g);
    let two_stars = count_kstars(g, 2);
    let n = g.n();
    ExactCounts {
        n,
        edges: g.num_edges(),
        triangles,
        two_stars,
        three_stars: count_kstars(g, 3),
        four_cycles: count_4cycles(g),
        clustering_coefficient: (two_stars > 0).then(|| 3.0 * triangles as f64 / two_stars as f64),
        degree: DegreeStats {
            max: g.max_degree(),
            mean: if n == 0 {
                0.0
            } else {
                2.0 * g.num_edges() as f64 / n as f64
            },
        },
    }
}
