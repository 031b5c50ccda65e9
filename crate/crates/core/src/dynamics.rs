//! Reduced density matrix of the qubit, driven by propagator values.
//!
//! The excited-state population and the coherence evolve as
//! `rho11(t) = rho11(0) |G(t)|^2` and
//! `rho10(t) = rho10(0) e^(-i omega0 t) G(t)`, so a single complex
//! propagator value fixes the whole 2x2 state. The diagonal complement
//! `rho00 = 1 - rho11` and the mirror coherence `rho01 = conj(rho10)` are
//! derived on access, never stored, which makes trace preservation
//! structural.
//!
//! States live in the Schroedinger picture (the `e^(-i omega0 t)` phase is
//! applied); [`interaction_picture_coherence`] removes that free rotation
//! for plots of `|rho10|`, where the phase is irrelevant.

use rayon::prelude::*;

use crate::exact::AsymptoticSummary;
use crate::types::{ComplexValue, CoreError, CoreResult};

/// Absolute slack allowed in the positivity inequality
/// `|rho10|^2 <= rho11 (1 - rho11)`, absorbing float dust so that pure
/// states survive round-trips through evolution.
pub const POSITIVITY_SLACK: f64 = 1e-12;

/// Propagator-modulus excess above 1 that triggers a warning in
/// [`evolve`]. The value is never clamped; a genuinely contractive
/// propagator stays below this slack by construction.
pub const PROPAGATOR_MODULUS_SLACK: f64 = 1e-9;

/// Two-level reduced density matrix in its minimal parametrization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitState {
    rho11: f64,
    rho10: ComplexValue,
}

impl QubitState {
    /// Validates the density-matrix constraints: `rho11` in `[0, 1]` and
    /// `|rho10|^2 <= rho11 (1 - rho11)` (up to [`POSITIVITY_SLACK`]).
    pub fn new(rho11: f64, rho10: ComplexValue) -> CoreResult<Self> {
        if !rho11.is_finite() || !(0.0..=1.0).contains(&rho11) {
            return Err(CoreError::PositivityViolation {
                detail: format!("excited-state population {rho11} outside [0, 1]"),
            });
        }
        if !rho10.re.is_finite() || !rho10.im.is_finite() {
            return Err(CoreError::PositivityViolation {
                detail: "coherence is not finite".to_string(),
            });
        }
        let limit = rho11 * (1.0 - rho11);
        if rho10.norm_sqr() > limit + POSITIVITY_SLACK {
            return Err(CoreError::PositivityViolation {
                detail: format!(
                    "|coherence|^2 = {:.6e} exceeds rho11 (1 - rho11) = {:.6e}",
                    rho10.norm_sqr(),
                    limit
                ),
            });
        }
        Ok(QubitState { rho11, rho10 })
    }

    /// Excited-state population.
    pub fn rho11(&self) -> f64 {
        self.rho11
    }

    /// Coherence (upper off-diagonal entry).
    pub fn rho10(&self) -> ComplexValue {
        self.rho10
    }

    /// Ground-state population, derived as `1 - rho11`.
    pub fn rho00(&self) -> f64 {
        1.0 - self.rho11
    }

    /// Lower off-diagonal entry, derived as `conj(rho10)`.
    pub fn rho01(&self) -> ComplexValue {
        self.rho10.conj()
    }
}

/// Applies one propagator value to an initial state at time `t`:
/// `rho11 = rho11(0) |G|^2`, `rho10 = rho10(0) e^(-i omega0 t) G`.
///
/// A propagator modulus beyond `1 +` [`PROPAGATOR_MODULUS_SLACK`] is
/// reported with a warning and used as-is (never clamped); if the
/// resulting matrix breaks positivity the error signals the oversized
/// modulus upstream.
pub fn evolve(
    initial: &QubitState,
    g: ComplexValue,
    omega0: f64,
    t: f64,
) -> CoreResult<QubitState> {
    if !(g.re.is_finite() && g.im.is_finite() && omega0.is_finite() && t.is_finite()) {
        return Err(CoreError::Domain {
            op: "evolve",
            detail: format!("inputs must be finite, got G = {g}, omega0 = {omega0}, t = {t}"),
        });
    }
    let modulus = g.norm();
    if modulus > 1.0 + PROPAGATOR_MODULUS_SLACK {
        log::warn!("propagator modulus {modulus:.9} exceeds 1; evolving without clamping");
    }
    let rho11 = initial.rho11 * g.norm_sqr();
    let phase = ComplexValue::new(0.0, -omega0 * t).exp();
    let rho10 = initial.rho10 * phase * g;
    QubitState::new(rho11, rho10)
}

/// Coherence with the free rotation `e^(-i omega0 t)` removed — the
/// interaction-picture value `rho10(0) G(t)` for a state produced by
/// [`evolve`]. Its modulus equals the Schroedinger-picture one.
pub fn interaction_picture_coherence(state: &QubitState, omega0: f64, t: f64) -> ComplexValue {
    state.rho10 * ComplexValue::new(0.0, omega0 * t).exp()
}

/// Long-time power-law state: `rho11(t) = rho11(0) |D|^2 t^(-3)` and
/// `rho10(t) = -rho10(0) e^(-i omega0 t) D t^(-3/2)` with `D` the tail
/// coefficient of `summary`, applied verbatim.
///
/// The formulas describe the branch-cut component of the evolution alone;
/// extrapolated to small `t` they exceed the density-matrix bounds, so the
/// result is assembled directly rather than through the validating
/// constructor.
pub fn asymptotic_state(
    initial: &QubitState,
    summary: &AsymptoticSummary,
    omega0: f64,
    t: f64,
) -> CoreResult<QubitState> {
    if !(t.is_finite() && t > 0.0) {
        return Err(CoreError::Domain {
            op: "asymptotic_state",
            detail: format!("time must be finite and positive, got {t}"),
        });
    }
    if !omega0.is_finite() {
        return Err(CoreError::Domain {
            op: "asymptotic_state",
            detail: format!("frequency must be finite, got {omega0}"),
        });
    }
    let d = summary.tail_coefficient();
    let rho11 = initial.rho11 * d.norm_sqr() * t.powi(-3);
    let phase = ComplexValue::new(0.0, -omega0 * t).exp();
    let rho10 = -initial.rho10 * phase * d * t.powf(-1.5);
    Ok(QubitState { rho11, rho10 })
}

/// Sampled evolution: a strictly increasing time grid, the propagator
/// value at each node, and the state derived from each value and the
/// initial state.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    times: Vec<f64>,
    g_values: Vec<ComplexValue>,
    states: Vec<QubitState>,
    initial: QubitState,
    omega0: f64,
}

impl Trajectory {
    /// Builds a trajectory from precomputed propagator samples.
    ///
    /// `times` must be non-empty, finite, non-negative, and strictly
    /// increasing; `g_values` must match it in length. Each state is
    /// derived through [`evolve`], whose errors propagate.
    pub fn from_samples(
        initial: &QubitState,
        omega0: f64,
        times: Vec<f64>,
        g_values: Vec<ComplexValue>,
    ) -> CoreResult<Self> {
        validate_time_grid(&times)?;
        if g_values.len() != times.len() {
            return Err(CoreError::InvalidParameter {
                field: "g_values",
                detail: format!(
                    "length {} does not match the {} time nodes",
                    g_values.len(),
                    times.len()
                ),
            });
        }
        if !omega0.is_finite() {
            return Err(CoreError::InvalidParameter {
                field: "omega0",
                detail: format!("must be finite, got {omega0}"),
            });
        }
        let states = times
            .iter()
            .zip(&g_values)
            .map(|(&t, &g)| evolve(initial, g, omega0, t))
            .collect::<CoreResult<Vec<_>>>()?;
        Ok(Trajectory {
            times,
            g_values,
            states,
            initial: *initial,
            omega0,
        })
    }

    /// Evaluates `propagator` on the grid (in parallel — each time point
    /// is independent) and assembles the trajectory from the samples.
    pub fn from_propagator<F>(
        initial: &QubitState,
        omega0: f64,
        times: Vec<f64>,
        propagator: F,
    ) -> CoreResult<Self>
    where
        F: Fn(f64) -> CoreResult<ComplexValue> + Sync,
    {
        validate_time_grid(&times)?;
        let g_values = times
            .par_iter()
            .map(|&t| propagator(t))
            .collect::<CoreResult<Vec<_>>>()?;
        Trajectory::from_samples(initial, omega0, times, g_values)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn g_values(&self) -> &[ComplexValue] {
        &self.g_values
    }

    pub fn states(&self) -> &[QubitState] {
        &self.states
    }

    pub fn initial(&self) -> &QubitState {
        &self.initial
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

fn validate_time_grid(times: &[f64]) -> CoreResult<()> {
    if times.is_empty() {
        return Err(CoreError::InvalidParameter {
            field: "times",
            detail: "must not be empty".to_string(),
        });
    }
    for (k, &t) in times.iter().enumerate() {
        if !t.is_finite() || t < 0.0 {
            return Err(CoreError::InvalidParameter {
                field: "times",
                detail: format!("node {k} must be finite and non-negative, got {t}"),
            });
        }
        if k > 0 && t <= times[k - 1] {
            return Err(CoreError::InvalidParameter {
                field: "times",
                detail: format!(
                    "nodes must be strictly increasing, got {} then {t} at index {k}",
                    times[k - 1]
                ),
            });
        }
    }
    Ok(())
}
