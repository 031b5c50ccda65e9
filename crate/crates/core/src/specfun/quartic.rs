//! Roots of monic quartic polynomials with complex coefficients.
//!
//! Primary method: Durand–Kerner simultaneous iteration from a
//! deterministic starting circle, followed by a few Newton polishing steps.
//! If the iteration stalls or leaves residuals above tolerance, a closed
//! form (Ferrari's resolvent-cubic factorisation) recomputes the roots and
//! the same polish runs again.  Either way the returned roots satisfy an
//! explicit residual bound or an error is raised.

use crate::types::{ComplexValue, CoreError, CoreResult};

/// How the roots were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuarticMethod {
    /// Durand–Kerner iteration converged (with iteration count).
    DurandKerner { iterations: u32 },
    /// Closed-form fallback was used after the iteration failed to meet
    /// the residual bound.
    ClosedFormFallback,
}

/// Roots of a monic quartic, sorted by principal argument in `(-pi, pi]`
/// (ties broken by modulus), plus solve diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct QuarticRoots {
    /// The four roots.
    pub roots: [ComplexValue; 4],
    /// True when some pair of roots lies within `1e-6 * max |root|` of each
    /// other; residue-based post-processing is unreliable in that case.
    pub near_multiple: bool,
    /// Which engine produced the accepted roots.
    pub method: QuarticMethod,
}

/// Maximum Durand–Kerner sweeps before falling back.
const MAX_DK_ITERATIONS: u32 = 120;

/// Evaluates the monic quartic `z^4 + c[0] z^3 + c[1] z^2 + c[2] z + c[3]`.
fn eval(c: &[ComplexValue; 4], z: ComplexValue) -> ComplexValue {
    (((z + c[0]) * z + c[1]) * z + c[2]) * z + c[3]
}

/// Evaluates the derivative `4 z^3 + 3 c[0] z^2 + 2 c[1] z + c[2]`.
fn eval_derivative(c: &[ComplexValue; 4], z: ComplexValue) -> ComplexValue {
    ((z * 4.0 + c[0] * 3.0) * z + c[1] * 2.0) * z + c[2]
}

/// Magnitude scale of the coefficient set, used for residual tolerances.
fn coefficient_scale(c: &[ComplexValue; 4]) -> f64 {
    c.iter().fold(1.0f64, |m, ck| m.max(ck.norm()))
}

/// A few Newton steps per root; cheap and contraction-safe near a simple
/// root, harmless elsewhere (steps are clamped).
fn polish(c: &[ComplexValue; 4], roots: &mut [ComplexValue; 4]) {
    for z in roots.iter_mut() {
        for _ in 0..4 {
            let dp = eval_derivative(c, *z);
            if dp.norm() == 0.0 {
                break;
            }
            let step = eval(c, *z) / dp;
            // A Newton step larger than the root scale signals a bad
            // neighbourhood (nearly multiple root); do not make it worse.
            if step.norm() > 0.5 * (1.0 + z.norm()) {
                break;
            }
            *z -= step;
        }
    }
}

/// Worst residual over the candidate roots.
fn max_residual(c: &[ComplexValue; 4], roots: &[ComplexValue; 4]) -> f64 {
    roots.iter().map(|&z| eval(c, z).norm()).fold(0.0, f64::max)
}

/// Durand–Kerner sweeps from a deterministic circle.  Returns the iteration
/// count on convergence.
fn durand_kerner(c: &[ComplexValue; 4], roots: &mut [ComplexValue; 4]) -> Option<u32> {
    let radius = coefficient_scale(c);
    // Fixed angular offset keeps the start set away from both the real and
    // imaginary axes, where root symmetries could stall the iteration.
    for (k, z) in roots.iter_mut().enumerate() {
        let angle = 0.7 + std::f64::consts::FRAC_PI_2 * k as f64;
        *z = ComplexValue::from_polar(radius, angle);
    }
    for iteration in 1..=MAX_DK_ITERATIONS {
        let mut max_step = 0.0f64;
        for i in 0..4 {
            let zi = roots[i];
            let mut denom = ComplexValue::new(1.0, 0.0);
            for (j, &zj) in roots.iter().enumerate() {
                if j != i {
                    denom *= zi - zj;
                }
            }
            if denom.norm() == 0.0 {
                // Collided iterates: nudge and continue.
                roots[i] += ComplexValue::new(1e-8 * (1.0 + radius), 1e-8);
                max_step = f64::INFINITY;
                continue;
            }
            let step = eval(c, zi) / denom;
            roots[i] = zi - step;
            max_step = max_step.max(step.norm() / (1.0 + roots[i].norm()));
        }
        if max_step <= 1e-14 {
            return Some(iteration);
        }
    }
    None
}

/// Principal complex square root of `z` (wrapper for symmetry with cbrt).
fn sqrt_c(z: ComplexValue) -> ComplexValue {
    z.sqrt()
}

/// Principal complex cube root.
fn cbrt_c(z: ComplexValue) -> ComplexValue {
    if z.norm() == 0.0 {
        ComplexValue::new(0.0, 0.0)
    } else {
        ComplexValue::from_polar(z.norm().cbrt(), z.arg() / 3.0)
    }
}

/// Solves the quadratic `y^2 + b y + c = 0` with the cancellation-safe
/// Viete pairing.
fn quadratic_roots(b: ComplexValue, c: ComplexValue) -> (ComplexValue, ComplexValue) {
    let disc = sqrt_c(b * b - c * 4.0);
    // Choose the sign that avoids subtracting nearly equal quantities.
    let q = if (b.re * disc.re + b.im * disc.im) >= 0.0 {
        -(b + disc) / 2.0
    } else {
        -(b - disc) / 2.0
    };
    if q.norm() == 0.0 {
        (ComplexValue::new(0.0, 0.0), ComplexValue::new(0.0, 0.0))
    } else {
        (q, c / q)
    }
}

/// One root of the monic cubic `m^3 + a m^2 + b m + c = 0` (Cardano,
/// deterministic branch choices); returns the root of largest modulus for
/// best conditioning in the quartic factorisation.
fn cubic_root_largest(a: ComplexValue, b: ComplexValue, c: ComplexValue) -> ComplexValue {
    let shift = a / 3.0;
    let p = b - a * a / 3.0;
    let q = a * a * a * (2.0 / 27.0) - a * b / 3.0 + c;
    let disc = sqrt_c(q * q / 4.0 + p * p * p / 27.0);
    // Pick the better-conditioned sign for the cube-root argument.
    let cand1 = -q / 2.0 + disc;
    let cand2 = -q / 2.0 - disc;
    let big = if cand1.norm() >= cand2.norm() { cand1 } else { cand2 };
    let u = cbrt_c(big);
    let omega = ComplexValue::new(-0.5, 0.75f64.sqrt());
    let mut best = ComplexValue::new(0.0, 0.0);
    let mut best_norm = -1.0;
    for rot in [
        ComplexValue::new(1.0, 0.0),
        omega,
        omega * omega,
    ] {
        let uu = u * rot;
        let x = if uu.norm() == 0.0 { uu } else { uu - p / (uu * 3.0) };
        let m = x - shift;
        if m.norm() > best_norm {
            best_norm = m.norm();
            best = m;
        }
    }
    best
}

/// Ferrari's closed-form factorisation of the monic quartic.
fn ferrari(c: &[ComplexValue; 4]) -> [ComplexValue; 4] {
    let shift = c[0] / 4.0;
    // Depressed form y^4 + p y^2 + q y + r with z = y - c3/4.
    let c3 = c[0];
    let c2 = c[1];
    let c1 = c[2];
    let c0 = c[3];
    let p = c2 - c3 * c3 * (3.0 / 8.0);
    let q = c1 - c3 * c2 / 2.0 + c3 * c3 * c3 / 8.0;
    let r = c0 - c3 * c1 / 4.0 + c3 * c3 * c2 / 16.0 - c3 * c3 * c3 * c3 * (3.0 / 256.0);
    let scale = coefficient_scale(c);
    let ys: [ComplexValue; 4];
    if q.norm() <= 1e-14 * scale.powi(3).max(1e-300) {
        // Biquadratic: y^2 solves a quadratic directly.
        let (s1, s2) = quadratic_roots(p, r);
        let y1 = sqrt_c(s1);
        let y2 = sqrt_c(s2);
        ys = [y1, -y1, y2, -y2];
    } else {
        // Resolvent cubic m^3 + p m^2 + (p^2/4 - r) m - q^2/8 = 0; any root
        // with 2m != 0 factorises the quartic, the largest is best
        // conditioned.
        let m = cubic_root_largest(p, p * p / 4.0 - r, -q * q / 8.0);
        let s = sqrt_c(m * 2.0);
        let half_q_over_s = q / (s * 2.0);
        let (a1, a2) = quadratic_roots(-s, p / 2.0 + m + half_q_over_s);
        let (b1, b2) = quadratic_roots(s, p / 2.0 + m - half_q_over_s);
        ys = [a1, a2, b1, b2];
    }
    let mut roots = [ComplexValue::new(0.0, 0.0); 4];
    for (slot, y) in roots.iter_mut().zip(ys) {
        *slot = y - shift;
    }
    roots
}

/// Sort key: principal argument in `(-pi, pi]` ascending, then modulus.
fn sort_roots(roots: &mut [ComplexValue; 4]) {
    roots.sort_by(|a, b| {
        a.arg()
            .partial_cmp(&b.arg())
            .unwrap()
            .then(a.norm().partial_cmp(&b.norm()).unwrap())
    });
}

/// Finds all four roots of `z^4 + coeffs[0] z^3 + coeffs[1] z^2 +
/// coeffs[2] z + coeffs[3]` (monic, coefficients listed from the cubic
/// term down to the constant).
///
/// Roots are sorted by principal argument in `(-pi, pi]`, ties broken by
/// modulus.  Every returned root satisfies
/// `|Q(root)| <= 1e-10 * max(1, max_k |coeffs[k]|)`.
///
/// # Errors
///
/// * [`CoreError::Domain`] for non-finite coefficients.
/// * [`CoreError::NonConvergence`] when even the closed-form fallback plus
///   polishing cannot meet the residual bound (pathologically scaled
///   inputs).
pub fn quartic_roots(coeffs: &[ComplexValue; 4]) -> CoreResult<QuarticRoots> {
    for ck in coeffs {
        if !(ck.re.is_finite() && ck.im.is_finite()) {
            return Err(CoreError::Domain {
                op: "quartic_roots",
                detail: format!("coefficients must be finite, got {ck}"),
            });
        }
    }
    let scale = coefficient_scale(coeffs);
    let residual_bound = 1e-10 * scale;

    let mut roots = [ComplexValue::new(0.0, 0.0); 4];
    let dk_iterations = durand_kerner(coeffs, &mut roots);
    if dk_iterations.is_some() {
        polish(coeffs, &mut roots);
    }
    let mut method = match dk_iterations {
        Some(iterations) if max_residual(coeffs, &roots) <= residual_bound => {
            QuarticMethod::DurandKerner { iterations }
        }
        _ => {
            roots = ferrari(coeffs);
            polish(coeffs, &mut roots);
            QuarticMethod::ClosedFormFallback
        }
    };
    // If the iterative route converged but the fallback was taken, re-check.
    if max_residual(coeffs, &roots) > residual_bound {
        // One more polish round sometimes recovers marginal cases.
        polish(coeffs, &mut roots);
        if max_residual(coeffs, &roots) > residual_bound {
            return Err(CoreError::NonConvergence {
                op: "quartic_roots",
                iterations: MAX_DK_ITERATIONS,
            });
        }
        method = QuarticMethod::ClosedFormFallback;
    }

    sort_roots(&mut roots);
    let max_modulus = roots.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut min_gap = f64::INFINITY;
    for i in 0..4 {
        for j in (i + 1)..4 {
            min_gap = min_gap.min((roots[i] - roots[j]).norm());
        }
    }
    let near_multiple = min_gap < 1e-6 * max_modulus.max(1e-300);
    if near_multiple {
        log::warn!(
            "quartic_roots: nearly multiple roots (gap {:.3e} vs scale {:.3e}); \
             downstream residue computations may lose accuracy",
            min_gap,
            max_modulus
        );
    }
    Ok(QuarticRoots {
        roots,
        near_multiple,
        method,
    })
}
