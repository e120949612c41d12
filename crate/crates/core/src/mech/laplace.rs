use rand::Rng;

use crate::error::{Error, Result};

/// Draws from `Lap(scale)`. A zero scale returns exactly 0 without touching
/// the generator.
pub fn laplace<R: Rng + ?Sized>(scale: f64, rng: &mut R) -> Result<f64> {
    if !(scale >= 0.0) || !scale.is_finite() {
        return Err(Error::param(format!(
            "Laplace scale must be finite and >= 0, got {scale}"
        )));
    }
    Ok(sample_laplace(scale, rng))
}

/// Unchecked variant of [`laplace`] for validated hot paths.
pub fn sample_laplace<R: Rng + ?Sized>(scale: f64, rng: &mut R) -> f64 {
    if scale == 0.0 {
        return 0.0;
    }
    // Exp(1) with a random sign; 1 - U lies in (0, 1].
    let e = -(1.0 - rng.random::<f64>()).ln();
    if rng.random::<bool>() {
        scale * e
    } else {
        -scale * e
    }
}
