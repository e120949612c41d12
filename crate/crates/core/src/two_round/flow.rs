//! Noisy-triangle clipping with bounded sensitivity.
//!
//! Let `H` be the graph on a user's (clipped) neighbors whose edges are the
//! noisy triangles `(j, k)` seen through the message. The clipped count is
//! the fractional b-matching value
//!
//! ```text
//! max sum_e y_e   s.t.  0 <= y_e <= 1,  sum_{e ∋ v} y_e <= kappa  for every v
//! ```
//!
//! It equals `|E(H)|` whenever every vertex of `H` lies on at most `kappa`
//! noisy triangles, never decreases when a neighbor is added, and grows by
//! at most `kappa` per added neighbor. The LP is solved as half the maximum
//! flow through the bipartite double cover of `H`.

use std::collections::VecDeque;

const EPS: f64 = 1e-12;

/// Clipped noisy-triangle count for triangle edges `pairs` over the vertex
/// set `nodes` (ascending, containing every endpoint).
pub fn clipped_triangle_count(nodes: &[u32], pairs: &[(u32, u32)], kappa: f64) -> f64 {
    if pairs.is_empty() || kappa <= 0.0 {
        return 0.0;
    }
    let local = |v: u32| {
        nodes
            .binary_search(&v)
            .expect("triangle endpoint outside node set")
    };
    let mut degree = vec![0u32; nodes.len()];
    let edges: Vec<(usize, usize)> = pairs
        .iter()
        .map(|&(a, b)| {
            let (u, v) = (local(a), local(b));
            degree[u] += 1;
            degree[v] += 1;
            (u, v)
        })
        .collect();
    if degree.iter().all(|&d| f64::from(d) <= kappa) {
        return edges.len() as f64;
    }
    let m = nodes.len();
    let (source, sink) = (2 * m, 2 * m + 1);
    let mut net = FlowNetwork::new(2 * m + 2);
    for (v, &d) in degree.iter().enumerate() {
        if d > 0 {
            net.add_edge(source, v, kappa);
            net.add_edge(m + v, sink, kappa);
        }
    }
    for &(u, v) in &edges {
        net.add_edge(u, m + v, 1.0);
        net.add_edge(v, m + u, 1.0);
    }
    let value = net.max_flow(source, sink) / 2.0;
    value.min(edges.len() as f64)
}

/// Dinic's algorithm on real capacities.
struct FlowNetwork {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<f64>,
}

impl FlowNetwork {
    fn new(nodes: usize) -> Self {
        FlowNetwork {
            adj: vec![Vec::new(); nodes],
            to: Vec::new(),
            cap: Vec::new(),
        }
    }

    /// Arc `2e` is forward, `2e + 1` its residual twin.
    fn add_edge(&mut self, u: usize, v: usize, c: f64) {
        self.adj[u].push(self.to.len());
        self.to.push(v);
        self.cap.push(c);
        self.adj[v].push(self.to.len());
        self.to.push(u);
        self.cap.push(0.0);
    }

    fn max_flow(&mut self, s: usize, t: usize) -> f64 {
        let n = self.adj.len();
        let mut total = 0.0;
        let mut level = vec![usize::MAX; n];
        let mut next = vec![0usize; n];
        loop {
            level.fill(usize::MAX);
            level[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &a in &self.adj[u] {
                    let v = self.to[a];
                    if self.cap[a] > EPS && level[v] == usize::MAX {
                        level[v] = level[u] + 1;
                        queue.push_back(v);
                    }
                }
            }
            if level[t] == usize::MAX {
                return total;
            }
            next.fill(0);
            loop {
                let pushed = self.augment(s, t, f64::INFINITY, &level, &mut next);
                if pushed <= EPS {
                    break;
                }
                total += pushed;
            }
        }
    }

    fn augment(
        &mut self,
        u: usize,
        t: usize,
        limit: f64,
        level: &[usize],
        next: &mut [usize],
    ) -> f64 {
        if u == t {
            return limit;
        }
        while next[u] < self.adj[u].len() {
            let a = self.adj[u][next[u]];
            let v = self.to[a];
            if self.cap[a] > EPS && level[v] == level[u] + 1 {
                let pushed = self.augment(v, t, limit.min(self.cap[a]), level, next);
                if pushed > EPS {
                    self.cap[a] -= pushed;
                    self.cap[a ^ 1] += pushed;
                    return pushed;
                }
            }
            next[u] += 1;
        }
        0.0
    }
}
