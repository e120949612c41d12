use std::cell::RefCell;

use super::edges::{intersect, intersect_each, NoisyEdgeSet};
use crate::mech::Variant;

/// The round-two message `M_i`: a set of noisy edges `(j, k)`, `j < k < i`.
///
/// `Derived` answers queries straight from `E'` without materializing the
/// pair list. `Explicit` holds an arbitrary ascending pair list and exists
/// for fixtures and exhaustive tests.
#[derive(Debug, Clone)]
pub enum Message<'a> {
    Derived {
        variant: Variant,
        edges: &'a NoisyEdgeSet,
        user: usize,
    },
    Explicit(Vec<(u32, u32)>),
}

/// `M_i` for `variant`, backed by `E'`.
pub fn build_message(variant: Variant, edges: &NoisyEdgeSet, user: usize) -> Message<'_> {
    assert!(user < edges.n(), "user {user} out of range");
    Message::Derived {
        variant,
        edges,
        user,
    }
}

/// Bits used to encode one node id among `n`: `ceil(log2 n)`.
pub fn id_bits(n: usize) -> u64 {
    if n <= 1 {
        0
    } else {
        u64::from(usize::BITS - (n - 1).leading_zeros())
    }
}

thread_local! {
    static MARKS: RefCell<Vec<u64>> = const { RefCell::new(Vec::new()) };
}

/// `Σ_{k∈R_i} |R_k ∩ R_i|` via a reusable bitset over `R_i`; merge-based
/// intersection is branch-heavy at these list lengths.
fn two_ns_len(edges: &NoisyEdgeSet, r_i: &[u32]) -> u64 {
    let Some(&top) = r_i.last() else { return 0 };
    MARKS.with_borrow_mut(|marks| {
        let words = top as usize / 64 + 1;
        if marks.len() < words {
            marks.resize(words, 0);
        }
        for &k in r_i {
            marks[k as usize / 64] |= 1 << (k % 64);
        }
        let mut total = 0u64;
        for &k in r_i {
            for &j in edges.lower(k as usize) {
                total += marks[j as usize / 64] >> (j % 64) & 1;
            }
        }
        // Invariant: the bitset is all-zero between calls.
        for &k in r_i {
            marks[k as usize / 64] = 0;
        }
        total
    })
}

impl Message<'_> {
    /// Explicit message from arbitrary pairs; orientation is normalized and
    /// self-pairs dropped.
    pub fn explicit(pairs: impl IntoIterator<Item = (u32, u32)>) -> Message<'static> {
        let mut v: Vec<(u32, u32)> = pairs
            .into_iter()
            .filter(|(a, b)| a != b)
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        v.sort_unstable_by_key(|&(j, k)| (k, j));
        v.dedup();
        Message::Explicit(v)
    }

    /// `|M_i|`.
    pub fn len(&self) -> u64 {
        match self {
            Message::Explicit(v) => v.len() as u64,
            Message::Derived {
                variant,
                edges,
                user,
            } => {
                let r_i = edges.lower(*user);
                match variant {
                    Variant::Full => edges.count_below(*user) as u64,
                    Variant::OneNs => r_i
                        .iter()
                        .map(|&k| edges.lower(k as usize).len() as u64)
                        .sum(),
                    Variant::TwoNs => two_ns_len(edges, r_i),
                }
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Download size: two node ids per pair.
    pub fn bits(&self, n: usize) -> u64 {
        self.len() * 2 * id_bits(n)
    }

    /// Materialized pairs, ordered by `k` then `j`.
    pub fn pairs(&self) -> Vec<(u32, u32)> {
        match self {
            Message::Explicit(v) => v.clone(),
            Message::Derived {
                variant,
                edges,
                user,
            } => {
                let mut out = Vec::new();
                let r_i = edges.lower(*user);
                match variant {
                    Variant::Full => {
                        for k in 0..*user {
                            out.extend(edges.lower(k).iter().map(|&j| (j, k as u32)));
                        }
                    }
                    Variant::OneNs => {
                        for &k in r_i {
                            out.extend(edges.lower(k as usize).iter().map(|&j| (j, k)));
                        }
                    }
                    Variant::TwoNs => {
                        for &k in r_i {
                            intersect_each(edges.lower(k as usize), r_i, |j| out.push((j, k)));
                        }
                    }
                }
                out
            }
        }
    }

    /// Calls `f(j, k)` for every `(j, k)` in `M_i` with both endpoints in
    /// `nbrs` (ascending, all `< i`): the noisy triangles `(v_i, v_j, v_k)`.
    pub fn for_each_triangle(&self, nbrs: &[u32], mut f: impl FnMut(u32, u32)) {
        match self {
            Message::Explicit(v) => {
                for &(j, k) in v {
                    if nbrs.binary_search(&j).is_ok() && nbrs.binary_search(&k).is_ok() {
                        f(j, k);
                    }
                }
            }
            Message::Derived {
                variant,
                edges,
                user,
            } => {
                let r_i = edges.lower(*user);
                match variant {
                    Variant::Full => {
                        for &k in nbrs {
                            intersect_each(edges.lower(k as usize), nbrs, |j| f(j, k));
                        }
                    }
                    Variant::OneNs => {
                        for k in intersect(nbrs, r_i) {
                            intersect_each(edges.lower(k as usize), nbrs, |j| f(j, k));
                        }
                    }
                    Variant::TwoNs => {
                        let both = intersect(nbrs, r_i);
                        for &k in &both {
                            intersect_each(edges.lower(k as usize), &both, |j| f(j, k));
                        }
                    }
                }
            }
        }
    }

    /// Number of noisy triangles `t_i` seen through `nbrs`.
    pub fn count_triangles(&self, nbrs: &[u32]) -> u64 {
        let mut t = 0;
        self.for_each_triangle(nbrs, |_, _| t += 1);
        t
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn id_bits_is_ceil_log2() {
        assert_eq!(id_bits(1), 0);
        assert_eq!(id_bits(2), 1);
        assert_eq!(id_bits(1024), 10);
        assert_eq!(id_bits(1025), 11);
        assert_eq!(id_bits(896_308), 20);
    }

    #[test]
    fn small_users() {
        let e = NoisyEdgeSet::from_pairs(4, [(0, 1), (1, 2), (0, 3)]);
        assert!(build_message(Variant::Full, &e, 0).is_empty());
        assert!(build_message(Variant::Full, &e, 1).is_empty());
        assert_eq!(build_message(Variant::Full, &e, 2).pairs(), vec![(0, 1)]);
        // User 3 has noisy neighbor 0 only; OneNS needs k in R_3, k > j.
        assert!(build_message(Variant::OneNs, &e, 3).is_empty());
        assert!(build_message(Variant::TwoNs, &e, 3).is_empty());
        assert_eq!(build_message(Variant::Full, &e, 3).len(), 2);
    }

    #[test]
    fn explicit_normalizes() {
        let m = Message::explicit([(3, 1), (1, 3), (2, 0), (4, 4)]);
        assert_eq!(m.pairs(), vec![(0, 2), (1, 3)]);
        assert_eq!(m.count_triangles(&[0, 1, 3]), 1);
    }
}
