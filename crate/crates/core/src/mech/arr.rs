use rand::Rng;

use super::ArrParams;

/// One ARR draw for a single adjacency bit.
pub fn arr_bit<R: Rng + ?Sized>(bit: bool, params: &ArrParams, rng: &mut R) -> bool {
    let p = params.one_prob(bit);
    p > 0.0 && rng.random_bool(p.min(1.0))
}

/// Applies the ARR to bits `a_{i,0} .. a_{i,i-1}` and returns the ids whose
/// output bit is 1, ascending.
///
/// `lower_neighbors` must be sorted and contain only ids `< i`. Runs of
/// zero bits are skipped geometrically, so the cost is proportional to the
/// number of true neighbors plus the number of emitted ids, not to `i`.
pub fn arr_lower_list<R: Rng + ?Sized>(
    lower_neighbors: &[u32],
    i: usize,
    params: &ArrParams,
    rng: &mut R,
) -> Vec<u32> {
    let keep_one = params.one_prob(true);
    let keep_zero = params.one_prob(false);
    let mut out = Vec::new();
    let mut start = 0usize;
    for &j in lower_neighbors {
        let j = j as usize;
        debug_assert!(
            j < i && j >= start,
            "lower neighbors must be sorted and below i"
        );
        sample_zero_run(start, j, keep_zero, rng, &mut out);
        if keep_one > 0.0 && rng.random_bool(keep_one.min(1.0)) {
            out.push(j as u32);
        }
        start = j + 1;
    }
    sample_zero_run(start, i, keep_zero, rng, &mut out);
    out
}

/// Bernoulli(p) on every position in `lo..hi`, emitting the successes.
fn sample_zero_run<R: Rng + ?Sized>(lo: usize, hi: usize, p: f64, rng: &mut R, out: &mut Vec<u32>) {
    if lo >= hi || p <= 0.0 {
        return;
    }
    if p >= 1.0 {
        out.extend(lo as u32..hi as u32);
        return;
    }
    let log_q = (-p).ln_1p();
    let mut pos = lo;
    loop {
        // Failures before the next success: floor(ln U / ln(1 - p)), U in (0, 1].
        let u = 1.0 - rng.random::<f64>();
        let skip = (u.ln() / log_q).floor();
        if skip >= (hi - pos) as f64 {
            return;
        }
        pos += skip as usize;
        out.push(pos as u32);
        pos += 1;
        if pos >= hi {
            return;
        }
    }
}
