use crate::error::{Error, Result};

use super::Variant;

/// `D(p || q)` between Bernoulli distributions, natural log, `0 log 0 = 0`.
pub fn kl_bernoulli(p: f64, q: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param(format!("KL: p must lie in [0, 1], got {p}")));
    }
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::param(format!("KL: q must lie in (0, 1), got {q}")));
    }
    let a = if p > 0.0 { p * (p / q).ln() } else { 0.0 };
    let b = if p < 1.0 {
        (1.0 - p) * ((q - p) / (1.0 - q)).ln_1p()
    } else {
        0.0
    };
    Ok((a + b).max(0.0))
}

/// Upper bound on `Pr(t_{i,j} > kappa)` for a noisy degree `d_tilde`.
///
/// Requires `kappa >= mu* d_tilde`. Any `kappa >= d_tilde` yields 0 since
/// `t_{i,j} <= floor(d_tilde)` after edge clipping.
pub fn excess_prob_bound(variant: Variant, kappa: f64, d_tilde: f64, mu: f64) -> Result<f64> {
    if !(d_tilde > 0.0) || !d_tilde.is_finite() {
        return Err(Error::param(format!(
            "noisy degree must be positive, got {d_tilde}"
        )));
    }
    if !(mu > 0.0 && mu < 1.0) {
        return Err(Error::param(format!("mu must lie in (0, 1), got {mu}")));
    }
    let mu_star = variant.mu_star(mu);
    if !(kappa >= mu_star * d_tilde * (1.0 - 1e-12)) {
        return Err(Error::param(format!(
            "kappa = {kappa} is below mu* d_tilde = {}",
            mu_star * d_tilde
        )));
    }
    if kappa >= d_tilde {
        return Ok(0.0);
    }
    let bound = match variant {
        Variant::Full => (-d_tilde * kl_bernoulli(kappa / d_tilde, mu)?).exp(),
        Variant::OneNs => (-d_tilde * kl_bernoulli(kappa / d_tilde, mu * mu)?).exp(),
        Variant::TwoNs => {
            let k = kappa.max(mu * mu * d_tilde);
            mu * (-d_tilde * kl_bernoulli(k / d_tilde, mu * mu)?).exp()
        }
    };
    Ok(bound.clamp(0.0, 1.0))
}

/// Smallest `kappa = lambda mu* d_tilde` (integer `lambda >= 1`) whose excess
/// bound is at most `beta`, capped at `d_tilde`.
pub fn clipping_threshold(variant: Variant, mu: f64, d_tilde: f64, beta: f64) -> f64 {
    let mu_star = variant.mu_star(mu);
    if !(d_tilde > 0.0) || !(mu_star > 0.0) {
        return 0.0;
    }
    if mu >= 1.0 {
        return d_tilde;
    }
    let step = mu_star * d_tilde;
    let ok = |lambda: u64| {
        let kappa = lambda as f64 * step;
        kappa >= d_tilde || excess_prob_bound(variant, kappa, d_tilde, mu).is_ok_and(|b| b <= beta)
    };
    // ok(hi) holds because hi * step >= d_tilde; the predicate is monotone.
    let mut hi = (1.0 / mu_star).ceil().max(1.0) as u64;
    let mut lo = 1u64;
    if ok(lo) {
        return step.min(d_tilde);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (hi as f64 * step).min(d_tilde)
}
