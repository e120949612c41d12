//! Local randomizers and clipping primitives.

mod arr;
mod bounds;
mod clip;
mod laplace;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use arr::{arr_bit, arr_lower_list};
pub use bounds::{clipping_threshold, excess_prob_bound, kl_bernoulli};
pub use clip::{edge_clip, edge_clip_with_noise, project_by_priority, ClippedNeighbors};
pub use laplace::{laplace, sample_laplace};

use crate::error::{Error, Result};

/// `e^eps / (e^eps + 1)`, the probability that Warner's RR keeps a bit.
pub fn warner_keep_prob(epsilon: f64) -> f64 {
    1.0 / (1.0 + (-epsilon).exp())
}

/// Parameters of the asymmetric randomized response.
///
/// Outputs 1 with probability `mu` on input 1 and `mu * rho` on input 0,
/// where `rho = e^-epsilon`. Equivalent to Warner's RR (keep probability
/// `p1`) followed by independent sampling with probability `mu / p1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ArrParams {
    epsilon: f64,
    mu: f64,
    rho: f64,
}

impl ArrParams {
    pub fn new(epsilon: f64, mu: f64) -> Result<Self> {
        if !(epsilon >= 0.0) {
            return Err(Error::param(format!(
                "ARR epsilon must be >= 0, got {epsilon}"
            )));
        }
        let p1 = warner_keep_prob(epsilon);
        // Roots of mu* are computed in floating point; allow rounding slack.
        if !(0.0..=p1 * (1.0 + 1e-12)).contains(&mu) {
            return Err(Error::param(format!(
                "ARR mu must lie in [0, {p1}] for epsilon = {epsilon}, got {mu}"
            )));
        }
        Ok(ArrParams {
            epsilon,
            mu: mu.min(p1),
            rho: (-epsilon).exp(),
        })
    }

    /// Warner's randomized response as the special case `mu = p1`.
    pub fn warner(epsilon: f64) -> Result<Self> {
        Self::new(epsilon, warner_keep_prob(epsilon))
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    /// Warner keep probability `p1`.
    pub fn p1(&self) -> f64 {
        warner_keep_prob(self.epsilon)
    }

    /// Sampling probability `p2 = mu / p1`.
    pub fn p2(&self) -> f64 {
        self.mu / self.p1()
    }

    /// Pr[output 1 | input bit].
    pub fn one_prob(&self, bit: bool) -> f64 {
        if bit {
            self.mu
        } else {
            self.mu * self.rho
        }
    }
}

/// Which noisy edges the server ships to user `i` in round two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// All noisy edges between users with smaller ids.
    Full,
    /// Noisy edges `(j, k)` such that `(k, i)` is also a noisy edge.
    #[serde(rename = "onens")]
    OneNs,
    /// Noisy edges `(j, k)` such that `(j, i)` and `(k, i)` are noisy edges.
    #[serde(rename = "twons")]
    TwoNs,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Full, Variant::OneNs, Variant::TwoNs];

    /// Number of noisy edges a counted noisy triangle must contain.
    pub fn exponent(self) -> i32 {
        match self {
            Variant::Full => 1,
            Variant::OneNs => 2,
            Variant::TwoNs => 3,
        }
    }

    /// `mu*`: `mu`, `mu^2` or `mu^3`.
    pub fn mu_star(self, mu: f64) -> f64 {
        mu.powi(self.exponent())
    }

    /// Inverse of [`Variant::mu_star`].
    pub fn mu_from_star(self, mu_star: f64) -> f64 {
        match self {
            Variant::Full => mu_star,
            Variant::OneNs => mu_star.sqrt(),
            Variant::TwoNs => mu_star.cbrt(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::Full => "full",
            Variant::OneNs => "onens",
            Variant::TwoNs => "twons",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "full" | "f" => Ok(Variant::Full),
            "onens" | "one-ns" | "o" => Ok(Variant::OneNs),
            "twons" | "two-ns" | "t" => Ok(Variant::TwoNs),
            other => Err(Error::param(format!("unknown variant {other:?}"))),
        }
    }
}

/// Double-clipping parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClipParams {
    /// Margin added to the noisy degree so that projection rarely fires.
    pub alpha: f64,
    /// Target cap on the triangle excess probability.
    pub beta: f64,
    /// Budget spent on the noisy degree.
    pub epsilon0: f64,
}

impl ClipParams {
    pub fn new(alpha: f64, beta: f64, epsilon0: f64) -> Result<Self> {
        let p = ClipParams {
            alpha,
            beta,
            epsilon0,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(Error::param(format!(
                "alpha must be finite and >= 0, got {}",
                self.alpha
            )));
        }
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return Err(Error::param(format!(
                "beta must lie in (0, 1), got {}",
                self.beta
            )));
        }
        if !(self.epsilon0 > 0.0) {
            return Err(Error::param(format!(
                "epsilon0 must be > 0, got {}",
                self.epsilon0
            )));
        }
        Ok(())
    }
}
