use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Zeroth-order Boys function F₀(x) = ∫₀¹ exp(−x t²) dt.
pub fn boys_f0(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::BoysDomain(x));
    }
    Ok(boys_f0_unchecked(x))
}

#[inline]
pub(crate) fn boys_f0_unchecked(x: f64) -> f64 {
    if x < 1e-6 {
        // Taylor series; the closed form loses digits near zero.
        1.0 - x / 3.0 + x * x / 10.0 - x * x * x / 42.0
    } else {
        let s = x.sqrt();
        0.5 * (PI / x).sqrt() * libm::erf(s)
    }
}
