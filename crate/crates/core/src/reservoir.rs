//! Reservoir models and their frequency/time-domain characteristics.
//!
//! Two structured environments are described:
//!
//! * [`SpecialReservoir`] — a band-edge reservoir whose spectral density
//!   rises like a square root from a threshold frequency `omega0` and falls
//!   off with a Lorentzian-like envelope:
//!   `J(omega) = 2 A sqrt(omega - omega0) / (a^2 + (omega - omega0)^2)`
//!   for `omega >= omega0`, zero below.  `A` sets the coupling strength
//!   (`coupling`), `a` the envelope width (`width`).
//! * [`LorentzianReservoir`] — the damped Jaynes–Cummings environment with
//!   a Lorentzian line of width `lambda` and coupling rate `gamma` centred
//!   on the qubit frequency.
//!
//! The band-edge model's dynamics are driven by the *shifted profile*
//! `Lambda(x) = J(omega0 + x)`: its Fourier transform is the memory kernel
//! `f(tau)` ([`correlation_function`]) and its Stieltjes transform gives
//! the Laplace-domain propagator `G~(u) = 1 / (u - i S(Lambda)(-i u))`
//! ([`laplace_propagator`]), for which [`laplace_propagator_closed_form`]
//! provides the independent closed-form route used to cross-validate.

use crate::specfun::{adaptive_complex_interval, oscillatory_halfline_quad};
use crate::types::{ComplexValue, CoreError, CoreResult, QuadratureResult};
use std::f64::consts::PI;
use std::fmt;

/// Band-edge reservoir parameters; all three are strictly positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecialReservoir {
    coupling: f64,
    width: f64,
    omega0: f64,
}

/// Damped Jaynes–Cummings (Lorentzian) reservoir parameters; all three are
/// strictly positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzianReservoir {
    gamma: f64,
    lambda: f64,
    omega0: f64,
}

/// Coupling regime of a [`LorentzianReservoir`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CouplingRegime {
    /// `lambda > 2 gamma`: monotone-envelope decay.
    Weak,
    /// `lambda < 2 gamma`: underdamped oscillation with exact zeros.
    Strong,
    /// `|lambda - 2 gamma| <= 1e-12 lambda`: critically damped limit.
    Boundary,
}

impl CouplingRegime {
    /// Lower-case regime name, stable across display and error reporting.
    pub fn label(&self) -> &'static str {
        match self {
            CouplingRegime::Weak => "weak",
            CouplingRegime::Strong => "strong",
            CouplingRegime::Boundary => "boundary",
        }
    }
}

impl fmt::Display for CouplingRegime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

fn require_positive(field: &'static str, value: f64) -> CoreResult<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(CoreError::InvalidParameter {
            field,
            detail: format!("must be finite and > 0, got {value}"),
        })
    }
}

impl SpecialReservoir {
    /// Validates and builds a band-edge reservoir.
    ///
    /// # Errors
    ///
    /// [`CoreError::InvalidParameter`] unless `coupling`, `width`, and
    /// `omega0` are all finite and strictly positive.
    pub fn new(coupling: f64, width: f64, omega0: f64) -> CoreResult<Self> {
        Ok(Self {
            coupling: require_positive("coupling", coupling)?,
            width: require_positive("width", width)?,
            omega0: require_positive("omega0", omega0)?,
        })
    }

    /// Coupling strength `A` (units of frequency^{5/2}).
    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    /// Envelope width `a`.
    pub fn width(&self) -> f64 {
        self.width
    }

    /// Band-edge frequency (also the qubit transition frequency).
    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    /// Spectral density `J(omega)`; identically zero at and below the band
    /// edge, defined for all real frequencies.
    pub fn spectral_density(&self, omega: f64) -> f64 {
        let x = omega - self.omega0;
        if x <= 0.0 {
            0.0
        } else {
            2.0 * self.coupling * x.sqrt() / (self.width * self.width + x * x)
        }
    }

    /// Location and height of the spectral-density maximum:
    /// `omega_peak = omega0 + a / sqrt(3)` and
    /// `J(omega_peak) = 3^{3/4} A / (2 a^{3/2})`.
    pub fn spectral_peak(&self) -> (f64, f64) {
        let offset = self.width / 3.0f64.sqrt();
        let height = 3.0f64.powf(0.75) * self.coupling / (2.0 * self.width.powf(1.5));
        (self.omega0 + offset, height)
    }

    /// Shifted profile `Lambda(x) = J(omega0 + x)` as a checked handle.
    ///
    /// # Errors
    ///
    /// Propagates the construction-time summability check of
    /// [`ShiftedProfile::new`] (never fails for valid parameters).
    pub fn shifted_profile(&self) -> CoreResult<ShiftedProfile> {
        let coupling = self.coupling;
        let width = self.width;
        ShiftedProfile::new(Box::new(move |x: f64| {
            if x <= 0.0 {
                0.0
            } else {
                2.0 * coupling * x.sqrt() / (width * width + x * x)
            }
        }))
    }
}

impl LorentzianReservoir {
    /// Validates and builds a Lorentzian reservoir.
    ///
    /// # Errors
    ///
    /// [`CoreError::InvalidParameter`] unless `gamma`, `lambda`, and
    /// `omega0` are all finite and strictly positive.
    pub fn new(gamma: f64, lambda: f64, omega0: f64) -> CoreResult<Self> {
        Ok(Self {
            gamma: require_positive("gamma", gamma)?,
            lambda: require_positive("lambda", lambda)?,
            omega0: require_positive("omega0", omega0)?,
        })
    }

    /// Coupling rate `gamma`.
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Spectral line width `lambda`.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Qubit transition frequency (line centre).
    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    /// Classifies the coupling regime.  The boundary case is recognised
    /// within a relative window `|lambda - 2 gamma| <= 1e-12 lambda`, so
    /// tiny parameter noise cannot flip a critically damped model into an
    /// oscillating one.
    pub fn regime(&self) -> CouplingRegime {
        let diff = self.lambda - 2.0 * self.gamma;
        if diff.abs() <= 1e-12 * self.lambda {
            CouplingRegime::Boundary
        } else if diff > 0.0 {
            CouplingRegime::Weak
        } else {
            CouplingRegime::Strong
        }
    }
}

/// A positive half-line profile handle whose integrability was verified
/// numerically at construction.
pub struct ShiftedProfile {
    profile: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    total_weight: f64,
}

impl fmt::Debug for ShiftedProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ShiftedProfile")
            .field("total_weight", &self.total_weight)
            .finish()
    }
}

impl ShiftedProfile {
    /// Wraps a profile after checking that `integral_0^infinity profile`
    /// exists, to a relative accuracy of `1e-8`.
    ///
    /// # Errors
    ///
    /// * [`CoreError::Divergence`] when the integral does not converge.
    /// * [`CoreError::NonFinite`] when the profile returns NaN/infinity.
    pub fn new(profile: Box<dyn Fn(f64) -> f64 + Send + Sync>) -> CoreResult<Self> {
        // Coarse pass fixes the magnitude, fine pass pins the relative
        // tolerance of the stored weight.
        let coarse = oscillatory_halfline_quad(profile.as_ref(), 0.0, 1e-4)?;
        let scale = coarse.value.norm().max(1.0);
        let fine = oscillatory_halfline_quad(profile.as_ref(), 0.0, 1e-8 * scale)?;
        Ok(Self {
            profile,
            total_weight: fine.value.re,
        })
    }

    /// Evaluates the profile at `x`.
    pub fn evaluate(&self, x: f64) -> f64 {
        (self.profile)(x)
    }

    /// The verified total integral of the profile over the half-line.
    pub fn total_weight(&self) -> f64 {
        self.total_weight
    }
}

/// Reservoir correlation function (memory kernel)
/// `f(tau) = integral_0^infinity Lambda(x) e^{-i x tau} dx` for the
/// band-edge reservoir, by adaptive oscillatory quadrature with absolute
/// tolerance `tol`.
///
/// The full [`QuadratureResult`] is returned so callers can propagate the
/// accuracy flag; the kernel value is its `value` field.
///
/// # Errors
///
/// Propagates [`oscillatory_halfline_quad`] failures (invalid tolerance,
/// non-finite profile output, divergence).
pub fn correlation_function(
    reservoir: &SpecialReservoir,
    tau: f64,
    tol: f64,
) -> CoreResult<QuadratureResult> {
    let coupling = reservoir.coupling;
    let width = reservoir.width;
    let profile = move |x: f64| {
        if x <= 0.0 {
            0.0
        } else {
            2.0 * coupling * x.sqrt() / (width * width + x * x)
        }
    };
    oscillatory_halfline_quad(&profile, tau, tol)
}

/// Correlation function of the Lorentzian reservoir:
/// `f_L(tau) = (gamma lambda / 2) e^{-lambda |tau|}` (exact, real).
pub fn lorentzian_correlation(reservoir: &LorentzianReservoir, tau: f64) -> f64 {
    0.5 * reservoir.gamma * reservoir.lambda * (-reservoir.lambda * tau.abs()).exp()
}

/// Per-call panel budget for each sub-integral of the Stieltjes route.
const STIELTJES_MAX_PANELS: usize = 2048;

/// Laplace-domain propagator by the Stieltjes route:
/// `G~(u) = [ u - i S(Lambda)(-i u) ]^{-1}` with
/// `S(Lambda)(v) = integral_0^infinity Lambda(x) / (x + v) dx`, evaluated
/// by direct numerical quadrature of `Lambda(x) / (x - i u)`.
///
/// Defined on the open right half-plane.  When `Im u < 0`, the integrand
/// has a sharp peak near `x = -Im u` as `Re u` shrinks; a window around
/// the peak is handled by subtracting the profile value at the peak and
/// adding back the exact logarithmic integral of the subtracted part, so
/// accuracy is uniform down to very small `Re u`.
///
/// The returned [`QuadratureResult`] carries `G~(u)` in `value` plus the
/// accumulated quadrature error estimate (propagated through the final
/// reciprocal) and accuracy flag.
///
/// # Errors
///
/// * [`CoreError::Domain`] when `u` is non-finite or `Re u <= 0`.
/// * [`CoreError::PoleProximity`] when `u - i S` is numerically zero.
/// * Quadrature failures propagate.
pub fn laplace_propagator(
    profile: &ShiftedProfile,
    u: ComplexValue,
    tol: f64,
) -> CoreResult<QuadratureResult> {
    if !(u.re.is_finite() && u.im.is_finite()) {
        return Err(CoreError::Domain {
            op: "laplace_propagator",
            detail: format!("u must be finite, got {u}"),
        });
    }
    if u.re <= 0.0 {
        return Err(CoreError::Domain {
            op: "laplace_propagator",
            detail: format!("defined for Re(u) > 0 only, got Re(u) = {}", u.re),
        });
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(CoreError::Domain {
            op: "laplace_propagator",
            detail: format!("tolerance must be positive and finite, got {tol}"),
        });
    }

    let alpha = u.re;
    let peak = -u.im; // integrand denominator x - i u peaks at x = -Im u
    let window = if peak > 0.0 {
        let half = (4.0 * alpha).max(0.05 * (1.0 + peak)).min(peak);
        Some(((peak - half).max(0.0), peak + half))
    } else {
        None
    };
    let cut = 16.0 * (1.0 + peak.max(0.0) + u.norm());
    let kernel = |x: f64| {
        ComplexValue::new(profile.evaluate(x), 0.0) / (ComplexValue::new(x, 0.0) - u * ComplexValue::i())
    };

    let share = tol / 5.0;
    let mut total = ComplexValue::new(0.0, 0.0);
    let mut err = 0.0f64;
    let mut evaluations = 0usize;
    let mut converged = true;
    let mut accumulate = |r: QuadratureResult| {
        total += r.value;
        err += r.abs_error_estimate;
        evaluations += r.evaluations;
        converged &= r.converged;
    };

    // Head: substitute x = v^2 so sqrt-type behaviour at the origin is
    // regular; covers [0, head_end].
    let first_break = window.map_or(cut, |(lo, _)| lo.min(cut));
    let head_end = first_break.min(1.0);
    if head_end > 0.0 {
        let head =
            |v: f64| kernel(v * v) * ComplexValue::new(2.0 * v, 0.0);
        accumulate(adaptive_complex_interval(
            &head,
            0.0,
            head_end.sqrt(),
            share,
            STIELTJES_MAX_PANELS,
        )?);
    }

    // Plain segments between the head, the subtraction window, and the cut.
    let mut plain_segments: Vec<(f64, f64)> = Vec::new();
    match window {
        Some((w_lo, w_hi)) => {
            if w_lo > head_end {
                plain_segments.push((head_end, w_lo));
            }
            if w_hi < cut {
                plain_segments.push((w_hi, cut));
            }
        }
        None => {
            if cut > head_end {
                plain_segments.push((head_end, cut));
            }
        }
    }
    for (lo, hi) in plain_segments {
        accumulate(adaptive_complex_interval(
            &kernel,
            lo,
            hi,
            share,
            STIELTJES_MAX_PANELS,
        )?);
    }

    // Subtraction window around the near-pole point.
    if let Some((w_lo, w_hi)) = window {
        let p_peak = profile.evaluate(peak);
        let smooth = |x: f64| {
            ComplexValue::new(profile.evaluate(x) - p_peak, 0.0)
                / (ComplexValue::new(x, 0.0) - u * ComplexValue::i())
        };
        accumulate(adaptive_complex_interval(
            &smooth,
            w_lo,
            w_hi,
            share,
            STIELTJES_MAX_PANELS,
        )?);
        // integral of 1/(x - i u) over the window, exactly:
        // ln(w_hi - i u) - ln(w_lo - i u); the path stays on one side of
        // the pole, so principal logs are continuous here.
        let iu = u * ComplexValue::i();
        let log_term = ((ComplexValue::new(w_hi, 0.0) - iu)
            / (ComplexValue::new(w_lo, 0.0) - iu))
            .ln();
        accumulate(QuadratureResult {
            value: log_term * p_peak,
            abs_error_estimate: 0.0,
            evaluations: 1,
            converged: true,
        });
    }

    // Tail beyond the cut via the exact map x = cut / s^2, s in (0, 1].
    let tail = |s: f64| {
        let x = cut / (s * s);
        kernel(x) * ComplexValue::new(2.0 * cut / (s * s * s), 0.0)
    };
    accumulate(adaptive_complex_interval(
        &tail,
        0.0,
        1.0,
        share,
        STIELTJES_MAX_PANELS,
    )?);

    // G~ = 1 / (u - i S); error in S maps to |G~|^2-amplified error in G~.
    let denom = u - ComplexValue::i() * total;
    let scale = u.norm().max(total.norm());
    if denom.norm() <= 1e-14 * scale {
        return Err(CoreError::PoleProximity {
            denominator: denom.norm(),
            scale,
        });
    }
    let value = 1.0 / denom;
    let amplified = err * value.norm_sqr();
    crate::types::ensure_finite("laplace_propagator", value)?;
    Ok(QuadratureResult {
        value,
        abs_error_estimate: amplified,
        evaluations,
        converged,
    })
}

/// Closed-form Laplace-domain propagator of the band-edge reservoir:
///
/// `G~(u) = sqrt(a) (i sqrt(a) + sqrt(u)) (sqrt(a) + sqrt(u)) /
///          ( pi sqrt(2) A + i a^{3/2} u + (1+i) a u^{3/2} + sqrt(a) u^2 )`
///
/// with principal square roots, valid off the negative real axis
/// (`|arg u| < pi`).  This is the analytic continuation of
/// [`laplace_propagator`] from the right half-plane.
///
/// # Errors
///
/// * [`CoreError::Domain`] for non-finite `u`, `u = 0`, or `u` on the
///   negative real axis (the branch cut).
/// * [`CoreError::PoleProximity`] when the denominator modulus falls below
///   `1e-14` of its term scale (evaluation on top of a propagator pole).
pub fn laplace_propagator_closed_form(
    reservoir: &SpecialReservoir,
    u: ComplexValue,
) -> CoreResult<ComplexValue> {
    if !(u.re.is_finite() && u.im.is_finite()) {
        return Err(CoreError::Domain {
            op: "laplace_propagator_closed_form",
            detail: format!("u must be finite, got {u}"),
        });
    }
    if u.norm() == 0.0 || (u.im == 0.0 && u.re < 0.0) {
        return Err(CoreError::Domain {
            op: "laplace_propagator_closed_form",
            detail: format!("requires |arg u| < pi and u != 0, got {u}"),
        });
    }
    let a = reservoir.width;
    let coupling = reservoir.coupling;
    let sqrt_a = a.sqrt();
    let root_u = u.sqrt(); // principal branch
    let ia = ComplexValue::new(0.0, sqrt_a);
    let numerator = (root_u + ia) * (root_u + sqrt_a) * sqrt_a;
    let t_const = ComplexValue::new(PI * 2.0f64.sqrt() * coupling, 0.0);
    let t_linear = ComplexValue::new(0.0, a * sqrt_a) * u;
    let t_three_half = ComplexValue::new(a, a) * (u * root_u);
    let t_square = u * u * sqrt_a;
    let denominator = t_const + t_linear + t_three_half + t_square;
    let scale = t_const
        .norm()
        .max(t_linear.norm())
        .max(t_three_half.norm())
        .max(t_square.norm());
    if denominator.norm() < 1e-14 * scale {
        return Err(CoreError::PoleProximity {
            denominator: denominator.norm(),
            scale,
        });
    }
    crate::types::ensure_finite("laplace_propagator_closed_form", numerator / denominator)
}
