//! Exponentially scaled upper incomplete gamma function of order 1/2.

use super::faddeeva::erfcx;
use crate::types::{ComplexValue, CoreError, CoreResult};
use std::f64::consts::PI;

/// Computes `e^w Gamma(1/2, w)` for complex `w`, using the principal branch
/// of `sqrt(w)` (branch cut along the negative real axis, `Re sqrt >= 0`).
///
/// The evaluation rests on the exact identity
/// `Gamma(1/2, w) = sqrt(pi) erfc(sqrt(w))`, so
/// `e^w Gamma(1/2, w) = sqrt(pi) erfcx(sqrt(w))`.
///
/// Because the principal square root lands in the closed right half-plane,
/// the `erfcx` call never takes the reflection path and the scaled form
/// stays bounded for every finite `w`: the result decays like `w^{-1/2}`
/// as `|w| -> infinity` and tends to `sqrt(pi)` as `w -> 0`.
///
/// # Errors
///
/// [`CoreError::Domain`] when either component of `w` is NaN or infinite.
pub fn scaled_upper_gamma_half(w: ComplexValue) -> CoreResult<ComplexValue> {
    if !(w.re.is_finite() && w.im.is_finite()) {
        return Err(CoreError::Domain {
            op: "scaled_upper_gamma_half",
            detail: format!("argument must be finite, got {w}"),
        });
    }
    let root = w.sqrt(); // principal branch: Re >= 0
    Ok(erfcx(root) * PI.sqrt())
}
