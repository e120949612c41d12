/// Server-side set `E'` of noisy edges reported in round one.
///
/// Row `k` of the lower index is the report `r_k` itself: the ids `j < k`
/// whose ARR output bit was 1. The upper index stores the transpose.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoisyEdgeSet {
    lower_offsets: Vec<usize>,
    lower: Vec<u32>,
    upper_offsets: Vec<usize>,
    upper: Vec<u32>,
}

impl NoisyEdgeSet {
    /// Assembles `E'` from one ascending report per user. `reports[k]` may
    /// only contain ids `< k`.
    pub fn from_reports(reports: &[Vec<u32>]) -> Self {
        let n = reports.len();
        let mut lower_offsets = Vec::with_capacity(n + 1);
        lower_offsets.push(0);
        let total = reports.iter().map(Vec::len).sum();
        let mut lower = Vec::with_capacity(total);
        let mut upper_offsets = vec![0usize; n + 1];
        for (k, r) in reports.iter().enumerate() {
            debug_assert!(r.windows(2).all(|w| w[0] < w[1]));
            debug_assert!(r.iter().all(|&j| (j as usize) < k));
            lower.extend_from_slice(r);
            lower_offsets.push(lower.len());
            for &j in r {
                upper_offsets[j as usize + 1] += 1;
            }
        }
        for j in 0..n {
            upper_offsets[j + 1] += upper_offsets[j];
        }
        let mut cursor = upper_offsets.clone();
        let mut upper = vec![0u32; total];
        // Rows are visited in increasing k, so every upper row ends up sorted.
        for (k, r) in reports.iter().enumerate() {
            for &j in r {
                upper[cursor[j as usize]] = k as u32;
                cursor[j as usize] += 1;
            }
        }
        NoisyEdgeSet {
            lower_offsets,
            lower,
            upper_offsets,
            upper,
        }
    }

    /// Builds `E'` from explicit pairs in either orientation.
    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let mut reports = vec![Vec::new(); n];
        for (a, b) in pairs {
            let (j, k) = if a < b { (a, b) } else { (b, a) };
            assert!((k as usize) < n, "pair ({a}, {b}) out of range for n = {n}");
            if j != k {
                reports[k as usize].push(j);
            }
        }
        for r in &mut reports {
            r.sort_unstable();
            r.dedup();
        }
        Self::from_reports(&reports)
    }

    pub fn n(&self) -> usize {
        self.lower_offsets.len() - 1
    }

    /// `|E'|`.
    pub fn len(&self) -> usize {
        self.lower.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.is_empty()
    }

    /// `R_k = {j < k : (j, k) in E'}`, ascending.
    pub fn lower(&self, k: usize) -> &[u32] {
        &self.lower[self.lower_offsets[k]..self.lower_offsets[k + 1]]
    }

    /// `{k > j : (j, k) in E'}`, ascending.
    pub fn upper(&self, j: usize) -> &[u32] {
        &self.upper[self.upper_offsets[j]..self.upper_offsets[j + 1]]
    }

    /// Number of noisy edges whose larger endpoint is below `i`.
    pub fn count_below(&self, i: usize) -> usize {
        self.lower_offsets[i]
    }

    /// Membership of the unordered pair `{a, b}`.
    pub fn contains(&self, a: usize, b: usize) -> bool {
        if a == b || a.max(b) >= self.n() {
            return false;
        }
        let (j, k) = if a < b { (a, b) } else { (b, a) };
        let (row, target) = if self.lower(k).len() <= self.upper(j).len() {
            (self.lower(k), j)
        } else {
            (self.upper(j), k)
        };
        row.binary_search(&(target as u32)).is_ok()
    }

    /// All pairs `(j, k)` with `j < k`, ordered by `k` then `j`.
    pub fn pairs(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.n()).flat_map(move |k| self.lower(k).iter().map(move |&j| (j, k as u32)))
    }

    /// The noisy graph `G'` as an undirected [`crate::Graph`].
    pub fn to_graph(&self) -> crate::Graph {
        let lists = (0..self.n())
            .map(|v| {
                let mut l = Vec::with_capacity(self.lower(v).len() + self.upper(v).len());
                l.extend_from_slice(self.lower(v));
                l.extend_from_slice(self.upper(v));
                l
            })
            .collect();
        crate::Graph::from_sorted_lists(lists)
    }
}

/// Calls `f` on every element of `a ∩ b` in ascending order.
pub(crate) fn intersect_each(a: &[u32], b: &[u32], mut f: impl FnMut(u32)) {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if small.is_empty() {
        return;
    }
    if small.len() * 16 < large.len() {
        let mut rest = large;
        for &x in small {
            let pos = rest.partition_point(|&y| y < x);
            rest = &rest[pos..];
            match rest.first() {
                Some(&y) if y == x => f(x),
                None => return,
                _ => {}
            }
        }
        return;
    }
    let (mut p, mut q) = (0, 0);
    while p < small.len() && q < large.len() {
        match small[p].cmp(&large[q]) {
            std::cmp::Ordering::Less => p += 1,
            std::cmp::Ordering::Greater => q += 1,
            std::cmp::Ordering::Equal => {
                f(small[p]);
                p += 1;
                q += 1;
            }
        }
    }
}

pub(crate) fn intersect(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::new();
    intersect_each(a, b, |x| out.push(x));
    out
}
