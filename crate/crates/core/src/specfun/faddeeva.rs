//! Faddeeva function `w(z)` and the scaled complementary error function
//! `erfcx(z)` for complex arguments.
//!
//! `w(z) = e^{-z^2} erfc(-i z)` and `erfcx(z) = e^{z^2} erfc(z) = w(i z)`.
//!
//! Engine layout:
//!
//! * moderate arguments (`|z| < 7`, upper half-plane): Weideman's rational
//!   approximation with `N = 128` terms.  Its coefficients are the Fourier
//!   coefficients of a sampled, tangent-mapped Gaussian; they are computed
//!   once at first use by a direct discrete Fourier sum and cached.  With
//!   `N = 128` the approximation is accurate to full double precision over
//!   this disc.
//! * large arguments (`|z| >= 7`, upper half-plane): the Laplace continued
//!   fraction for `w`, evaluated by backward recurrence with a depth chosen
//!   from `|z|`.
//! * lower half-plane: the reflection `w(z) = 2 e^{-z^2} - w(-z)`.  The
//!   exponential can overflow for extreme arguments; callers that can reach
//!   that regime must check finiteness of the result (public operations in
//!   this crate never feed such arguments).
//!
//! The split radius 7 keeps both methods comfortably inside their accurate
//! regions; agreement on the overlap ring is property-tested.

use crate::types::ComplexValue;
use std::f64::consts::{FRAC_2_SQRT_PI, PI};
use std::sync::OnceLock;

/// Number of terms in the Weideman rational approximation.
const WEIDEMAN_N: usize = 128;

/// Crossover radius between the rational approximation and the continued
/// fraction.
const CF_RADIUS: f64 = 7.0;

/// 1/sqrt(pi).
const FRAC_1_SQRT_PI: f64 = FRAC_2_SQRT_PI / 2.0;

/// Weideman coefficients `a_1..a_N`, lazily computed and cached.
///
/// With `M = 2N`, `L = sqrt(N / sqrt(2))` and the even sample set
/// `F(theta_k) = e^{-t_k^2} (L^2 + t_k^2)`, `t_k = L tan(theta_k / 2)`,
/// `theta_k = k pi / M`, the coefficients are the cosine-series sums
///
/// `a_n = (1 / (2 M)) [ F(0) + 2 sum_{k=1}^{M-1} F(theta_k) cos(n theta_k) ]`.
///
/// (The `theta = pi` sample vanishes because the Gaussian kills the
/// polynomial growth as `t -> infinity`.)
fn weideman_coefficients() -> &'static [f64; WEIDEMAN_N] {
    static COEFFS: OnceLock<[f64; WEIDEMAN_N]> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let m = 2 * WEIDEMAN_N;
        let l = (WEIDEMAN_N as f64 / std::f64::consts::SQRT_2).sqrt();
        let mut samples = [0.0f64; 2 * WEIDEMAN_N];
        samples[0] = l * l; // theta = 0 => t = 0 => e^0 (L^2 + 0)
        for (k, slot) in samples.iter_mut().enumerate().skip(1) {
            let theta = k as f64 * PI / m as f64;
            let t = l * (theta / 2.0).tan();
            *slot = (-t * t).exp() * (l * l + t * t);
        }
        let mut coeffs = [0.0f64; WEIDEMAN_N];
        for (n_idx, c) in coeffs.iter_mut().enumerate() {
            let n = (n_idx + 1) as f64;
            let mut acc = samples[0];
            for (k, f) in samples.iter().enumerate().skip(1) {
                acc += 2.0 * f * (n * k as f64 * PI / m as f64).cos();
            }
            *c = acc / (2.0 * m as f64);
        }
        coeffs
    })
}

/// Rational-approximation branch, valid for `Im z >= 0`, `|z|` moderate.
fn w_weideman(z: ComplexValue) -> ComplexValue {
    let coeffs = weideman_coefficients();
    let l = (WEIDEMAN_N as f64 / std::f64::consts::SQRT_2).sqrt();
    // Map variables: d = L - i z, Z = (L + i z) / (L - i z).
    let iz = ComplexValue::new(-z.im, z.re);
    let d = ComplexValue::new(l, 0.0) - iz;
    let big_z = (ComplexValue::new(l, 0.0) + iz) / d;
    // p(Z) = sum_{n=1}^{N} a_n Z^{n-1}, evaluated by Horner from the top.
    let mut p = ComplexValue::new(0.0, 0.0);
    for &a in coeffs.iter().rev() {
        p = p * big_z + a;
    }
    (p * 2.0 / d + FRAC_1_SQRT_PI) / d
}

/// Continued-fraction branch, valid for `Im z >= 0`, `|z|` large.
///
/// `w(z) = (i/sqrt(pi)) / (z - (1/2)/(z - 1/(z - (3/2)/(z - ...))))`
/// with partial numerators `k/2`, evaluated backward from a depth that
/// shrinks as `|z|` grows.
fn w_continued_fraction(z: ComplexValue) -> ComplexValue {
    let r = z.norm();
    let depth: u32 = if r >= 1.0e4 {
        4
    } else if r >= 100.0 {
        8
    } else if r >= 25.0 {
        14
    } else if r >= 12.0 {
        20
    } else {
        30
    };
    let mut tail = ComplexValue::new(0.0, 0.0);
    for k in (1..=depth).rev() {
        tail = ComplexValue::new(k as f64 / 2.0, 0.0) / (z - tail);
    }
    ComplexValue::new(0.0, FRAC_1_SQRT_PI) / (z - tail)
}

/// Faddeeva function for `Im z >= 0`.
fn w_upper(z: ComplexValue) -> ComplexValue {
    debug_assert!(z.im >= 0.0);
    if z.norm_sqr() >= CF_RADIUS * CF_RADIUS {
        w_continued_fraction(z)
    } else {
        w_weideman(z)
    }
}

/// Faddeeva function `w(z) = e^{-z^2} erfc(-iz)` for any complex `z`.
///
/// Lower half-plane arguments go through the reflection
/// `w(z) = 2 e^{-z^2} - w(-z)`; for `Im z < 0` with `Im(z)^2 - Re(z)^2`
/// large the reflection term overflows `f64` and the result is infinite —
/// callers own that check (see module docs).
pub fn faddeeva_w(z: ComplexValue) -> ComplexValue {
    if z.im >= 0.0 {
        w_upper(z)
    } else {
        let refl = (-z * z).exp() * 2.0;
        refl - w_upper(-z)
    }
}

/// Scaled complementary error function `erfcx(z) = e^{z^2} erfc(z) = w(iz)`.
///
/// For `Re z >= 0` this needs no reflection (the rotated argument lands in
/// the closed upper half-plane); for `Re z < 0` it inherits the reflection
/// and its overflow caveat from [`faddeeva_w`].
pub fn erfcx(z: ComplexValue) -> ComplexValue {
    faddeeva_w(ComplexValue::new(-z.im, z.re))
}
