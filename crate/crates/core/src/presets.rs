//! Bundled comparison scenarios: one band-edge reservoir against two
//! Lorentzian reservoirs (one per coupling regime) from a shared initial
//! state, over a time window expressed in units of the crossover time.
//!
//! Two windows are provided: a short one covering the initial decay,
//! where the special-reservoir coherence is compared against the damped
//! oscillations of the strongly coupled Lorentzian model, and a long one
//! covering the late-time behavior, plotted on a logarithmic scale where
//! exponential decay separates visibly from slower laws.

use crate::dynamics::QubitState;
use crate::reservoir::{LorentzianReservoir, SpecialReservoir};
use crate::types::ComplexValue;

/// One comparison scenario: three reservoirs, an initial state, and a
/// dimensionless time window.
#[derive(Debug, Clone)]
pub struct ComparisonPreset {
    /// Band-edge reservoir (coupling `0.8`, width `1`, frequency `1/2`).
    pub special: SpecialReservoir,
    /// Lorentzian reservoir in the oscillatory (strong-coupling) regime.
    pub lorentzian_strong: LorentzianReservoir,
    /// Lorentzian reservoir in the hyperbolic (weak-coupling) regime.
    pub lorentzian_weak: LorentzianReservoir,
    /// Shared initial state: population `1/2`, coherence `1/5`.
    pub initial: QubitState,
    /// Time window `(start, end)` in units of the crossover time.
    pub window_in_crossover: (f64, f64),
    /// Number of grid nodes across the window.
    pub n_points: usize,
    /// Whether plots of this window should use a logarithmic ordinate.
    pub log_scale: bool,
}

impl ComparisonPreset {
    /// Evenly spaced absolute times across the window, given the
    /// crossover time that sets the unit.
    pub fn absolute_times(&self, crossover: f64) -> Vec<f64> {
        let (start, end) = self.window_in_crossover;
        let n = self.n_points;
        (0..n)
            .map(|k| crossover * (start + (end - start) * k as f64 / (n - 1) as f64))
            .collect()
    }
}

/// Shared physical parameters of both windows.
fn base(window_in_crossover: (f64, f64), log_scale: bool) -> ComparisonPreset {
    // All rates in units of the band-edge width; the band-edge reservoir
    // couples with strength 0.8 at transition frequency 1/2. The strong
    // Lorentzian has memory time 1 and relaxation time 1/10; the weak one
    // has memory time 1/20 and relaxation time 10/13.
    ComparisonPreset {
        special: SpecialReservoir::new(0.8, 1.0, 0.5).expect("fixed parameters are valid"),
        lorentzian_strong: LorentzianReservoir::new(10.0, 1.0, 0.5)
            .expect("fixed parameters are valid"),
        lorentzian_weak: LorentzianReservoir::new(1.3, 20.0, 0.5)
            .expect("fixed parameters are valid"),
        initial: QubitState::new(0.5, ComplexValue::new(0.2, 0.0))
            .expect("fixed initial state is valid"),
        window_in_crossover,
        n_points: 600,
        log_scale,
    }
}

/// Short-window comparison: `0 <= t/tau <= 5.9`, linear scale.
pub fn short_window() -> ComparisonPreset {
    base((0.0, 5.9), false)
}

/// Long-window comparison: `3.2 <= t/tau <= 30`, logarithmic scale.
pub fn long_window() -> ComparisonPreset {
    base((3.2, 30.0), true)
}
