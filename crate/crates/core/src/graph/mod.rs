//! Undirected simple graphs stored as sorted adjacency (CSR) arrays.
//!
//! Node ids are dense and 0-based. The "lower" neighbors of node `i` are the
//! neighbors with a smaller id; they form row `i` of the lower-triangular
//! part of the adjacency matrix, which is the only part a user reports on.

mod count;
mod generate;
mod io;

pub use count::{
    binomial, brute_force_4cycles, brute_force_kstars, brute_force_triangles, count_4cycles,
    count_kstars, count_triangles, exact_counts, DegreeStats, ExactCounts,
};
pub use generate::{generate_ba, sample_induced};
pub use io::{load_edge_list, read_edge_list_file, write_edge_list};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    adj: Vec<u32>,
}

impl Graph {
    /// Graph with `n` nodes and no edges.
    pub fn empty(n: usize) -> Self {
        Graph {
            offsets: vec![0; n + 1],
            adj: Vec::new(),
        }
    }

    /// Builds a graph from an arbitrary edge list. Edges are symmetrized,
    /// duplicates are merged and self-loops dropped.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, u32)>,
    {
        if n > u32::MAX as usize {
            return Err(Error::param(format!(
                "n = {n} does not fit 32-bit node ids"
            )));
        }
        let mut pairs = Vec::new();
        for (u, v) in edges {
            if u as usize >= n || v as usize >= n {
                return Err(Error::param(format!(
                    "edge ({u}, {v}) out of bounds for n = {n}"
                )));
            }
            if u != v {
                pairs.push((u, v));
                pairs.push((v, u));
            }
        }
        Ok(Self::from_directed_pairs(n, pairs))
    }

    /// Both orientations of every edge must already be present.
    pub(crate) fn from_directed_pairs(n: usize, mut pairs: Vec<(u32, u32)>) -> Self {
        pairs.sort_unstable();
        pairs.dedup();
        let mut offsets = vec![0usize; n + 1];
        for &(u, _) in &pairs {
            offsets[u as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let adj = pairs.into_iter().map(|(_, v)| v).collect();
        Graph { offsets, adj }
    }

    /// Builds a graph from per-node neighbor lists that are already sorted,
    /// deduplicated and symmetric.
    pub(crate) fn from_sorted_lists(lists: Vec<Vec<u32>>) -> Self {
        let mut offsets = Vec::with_capacity(lists.len() + 1);
        offsets.push(0);
        let total = lists.iter().map(Vec::len).sum();
        let mut adj = Vec::with_capacity(total);
        for list in lists {
            adj.extend_from_slice(&list);
            offsets.push(adj.len());
        }
        Graph { offsets, adj }
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn num_edges(&self) -> usize {
        self.adj.len() / 2
    }

    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.adj[self.offsets[i]..self.offsets[i + 1]]
    }

    /// Neighbors of `i` with a smaller id.
    pub fn lower_neighbors(&self, i: usize) -> &[u32] {
        let nb = self.neighbors(i);
        &nb[..nb.partition_point(|&j| (j as usize) < i)]
    }

    /// Neighbors of `i` with a larger id.
    pub fn upper_neighbors(&self, i: usize) -> &[u32] {
        let nb = self.neighbors(i);
        &nb[nb.partition_point(|&j| (j as usize) <= i)..]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n()).map(|i| self.degree(i)).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&(v as u32)).is_ok()
    }

    /// Each undirected edge once as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.n()).flat_map(move |u| self.upper_neighbors(u).iter().map(move |&v| (u as u32, v)))
    }

    /// Checks symmetry, sortedness, bounds and the absence of self-loops.
    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        for i in 0..n {
            let nb = self.neighbors(i);
            for w in nb.windows(2) {
                if w[0] >= w[1] {
                    return Err(Error::param(format!(
                        "adjacency of {i} is not strictly sorted"
                    )));
                }
            }
            for &j in nb {
                let j = j as usize;
                if j >= n {
                    return Err(Error::param(format!("neighbor {j} of {i} out of bounds")));
                }
                if j == i {
                    return Err(Error::param(format!("self-loop at {i}")));
                }
                if !self.has_edge(j, i) {
                    return Err(Error::param(format!("edge ({i}, {j}) is not symmetric")));
                }
            }
        }
        Ok(())
    }
}
