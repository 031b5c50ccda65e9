//! Shared scalar types, results, and the crate-wide error enum.

use num_complex::Complex64;
use thiserror::Error;

/// Complex scalar used throughout the crate. `re`/`im` are plain `f64`;
/// every public operation guarantees that no NaN or infinity escapes in
/// either component (violations surface as [`CoreError`] values instead).
pub type ComplexValue = Complex64;

/// Crate-wide result alias.
pub type CoreResult<T> = Result<T, CoreError>;

/// Outcome of a numerical quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    /// Estimated value of the integral.
    pub value: ComplexValue,
    /// Absolute error estimate (always >= 0).
    pub abs_error_estimate: f64,
    /// Number of integrand evaluations performed (always > 0).
    pub evaluations: usize,
    /// True when the requested tolerance was reached; false flags an
    /// accuracy-not-reached outcome whose `abs_error_estimate` is still an
    /// honest bound of what was achieved.
    pub converged: bool,
}

/// Unified error type for every fallible operation in the crate.
#[derive(Debug, Error)]
pub enum CoreError {
    /// An argument lies outside the operation's domain.
    #[error("domain error in {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    /// A computation produced a NaN or infinity that would otherwise escape.
    #[error("non-finite value produced by {op}")]
    NonFinite { op: &'static str },

    /// An iterative method exhausted its iteration budget.
    #[error("{op} failed to converge within {iterations} iterations")]
    NonConvergence { op: &'static str, iterations: u32 },

    /// Panel or block estimates of an improper integral fail to decrease.
    #[error("integral appears divergent: {detail}")]
    Divergence { detail: String },

    /// A time-marching scheme left its stability envelope.
    #[error("numerical instability in {op}: {detail}")]
    Instability { op: &'static str, detail: String },

    /// A structural identity among residues failed beyond tolerance.
    #[error("residue identity `{identity}` violated: residual {residual:.3e} exceeds {allowed:.3e}")]
    ResidueIdentity {
        identity: &'static str,
        residual: f64,
        allowed: f64,
    },

    /// Polynomial roots that must be distinct are too close.
    #[error("roots not distinct: minimum pairwise distance {distance:.3e} below {allowed:.3e}")]
    Distinctness { distance: f64, allowed: f64 },

    /// Evaluation point is numerically on top of a pole.
    #[error("evaluation too close to a pole (denominator {denominator:.3e} vs scale {scale:.3e})")]
    PoleProximity { denominator: f64, scale: f64 },

    /// A constructor rejected a parameter value.
    #[error("invalid parameter `{field}`: {detail}")]
    InvalidParameter { field: &'static str, detail: String },

    /// A density matrix failed its positivity constraints.
    #[error("density-matrix positivity violated: {detail}")]
    PositivityViolation { detail: String },

    /// An operation was invoked in the wrong coupling regime.
    #[error("operation requires the {required} coupling regime (got {actual})")]
    RegimeMismatch {
        required: &'static str,
        actual: &'static str,
    },

    /// An output path or stream failed.
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
}

/// Returns `Ok(z)` when both components are finite, otherwise a
/// [`CoreError::NonFinite`] tagged with the operation name.
pub fn ensure_finite(op: &'static str, z: ComplexValue) -> CoreResult<ComplexValue> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(CoreError::NonFinite { op })
    }
}

/// Returns `Ok(x)` when finite, otherwise [`CoreError::NonFinite`].
pub fn ensure_finite_real(op: &'static str, x: f64) -> CoreResult<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(CoreError::NonFinite { op })
    }
}
