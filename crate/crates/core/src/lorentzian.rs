//! Damped Jaynes–Cummings comparison propagator.
//!
//! For a Lorentzian reservoir the memory kernel is a decaying exponential
//! `(gamma lambda / 2) e^(-lambda |tau|)` and the survival amplitude has
//! elementary closed forms: hyperbolic relaxation when `lambda > 2 gamma`
//! (weak coupling), damped oscillation with discrete zeros when
//! `lambda < 2 gamma` (strong coupling), and the confluent limit
//! `e^(-lambda t / 2)(1 + lambda t / 2)` exactly on the boundary.
//!
//! The coupling regime is always derived from the reservoir through the one
//! shared classifier ([`LorentzianReservoir::regime`]); the parameter record
//! here cannot be constructed with an inconsistent regime tag.

use crate::reservoir::{CouplingRegime, LorentzianReservoir};
use crate::types::{CoreError, CoreResult};

/// Closed-form propagator parameters: the reservoir, its derived coupling
/// regime, and the associated real rate
/// `d = sqrt(lambda^2 - 2 gamma lambda)` (weak),
/// `d_hat = sqrt(2 gamma lambda - lambda^2)` (strong), or `0` (boundary).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzianPropagatorParams {
    reservoir: LorentzianReservoir,
    regime: CouplingRegime,
    rate: f64,
}

impl LorentzianPropagatorParams {
    /// Derives the regime and rate from the reservoir. This is the only
    /// constructor, so the regime tag always matches the classifier.
    pub fn new(reservoir: &LorentzianReservoir) -> Self {
        let lambda = reservoir.lambda();
        let gamma = reservoir.gamma();
        let regime = reservoir.regime();
        let rate = match regime {
            CouplingRegime::Weak => (lambda * lambda - 2.0 * gamma * lambda).sqrt(),
            CouplingRegime::Strong => (2.0 * gamma * lambda - lambda * lambda).sqrt(),
            CouplingRegime::Boundary => 0.0,
        };
        LorentzianPropagatorParams {
            reservoir: *reservoir,
            regime,
            rate,
        }
    }

    pub fn reservoir(&self) -> &LorentzianReservoir {
        &self.reservoir
    }

    pub fn regime(&self) -> CouplingRegime {
        self.regime
    }

    /// The real oscillation / relaxation rate (`d`, `d_hat`, or zero).
    pub fn rate(&self) -> f64 {
        self.rate
    }
}

/// Evaluates the real survival amplitude `G_L(t)` for `t >= 0`.
///
/// Weak coupling uses the partial-fraction form
/// `(1 + lambda/d)/2 e^(-(lambda-d)t/2) + (1 - lambda/d)/2 e^(-(lambda+d)t/2)`
/// (equal to the `cosh`/`sinh` expression but free of overflow, since both
/// exponents are negative); strong coupling uses
/// `e^(-lambda t/2) [cos(d_hat t/2) + (lambda/d_hat) sin(d_hat t/2)]`;
/// the boundary regime uses the analytic confluent limit
/// `e^(-lambda t/2)(1 + lambda t/2)`.
pub fn propagator_l(params: &LorentzianPropagatorParams, t: f64) -> CoreResult<f64> {
    if !t.is_finite() || t < 0.0 {
        return Err(CoreError::Domain {
            op: "propagator_l",
            detail: format!("time must be finite and non-negative, got {t}"),
        });
    }
    let lambda = params.reservoir.lambda();
    let d = params.rate;
    let value = match params.regime {
        CouplingRegime::Weak => {
            let plus = 0.5 * (1.0 + lambda / d) * (-0.5 * (lambda - d) * t).exp();
            let minus = 0.5 * (1.0 - lambda / d) * (-0.5 * (lambda + d) * t).exp();
            plus + minus
        }
        CouplingRegime::Strong => {
            let half = 0.5 * d * t;
            (-0.5 * lambda * t).exp() * (half.cos() + (lambda / d) * half.sin())
        }
        CouplingRegime::Boundary => (-0.5 * lambda * t).exp() * (1.0 + 0.5 * lambda * t),
    };
    Ok(value)
}

/// Times of the first `n_max` zeros of the strong-coupling propagator,
/// `t_n = (2 / d_hat)(n pi - arctan(d_hat / lambda))`, strictly increasing
/// with constant spacing `2 pi / d_hat`.
///
/// Only the strong regime has zeros; other regimes produce a regime error
/// (the weak-coupling amplitude stays strictly positive).
pub fn zero_times(params: &LorentzianPropagatorParams, n_max: usize) -> CoreResult<Vec<f64>> {
    if params.regime != CouplingRegime::Strong {
        return Err(CoreError::RegimeMismatch {
            required: "strong",
            actual: params.regime.label(),
        });
    }
    if n_max < 1 {
        return Err(CoreError::InvalidParameter {
            field: "n_max",
            detail: "at least one zero must be requested".to_string(),
        });
    }
    let lambda = params.reservoir.lambda();
    let d = params.rate;
    let offset = (d / lambda).atan();
    Ok((1..=n_max)
        .map(|n| (2.0 / d) * (n as f64 * std::f64::consts::PI - offset))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reservoir::LorentzianReservoir;

    /// Strong-coupling reference set: `lambda = a`, `gamma = 10 a` at `a = 1`.
    fn strong_params() -> LorentzianPropagatorParams {
        LorentzianPropagatorParams::new(&LorentzianReservoir::new(10.0, 1.0, 0.5).unwrap())
    }

    /// Weak-coupling reference set: `lambda = 20 a`, `gamma = 1.3 a`.
    fn weak_params() -> LorentzianPropagatorParams {
        LorentzianPropagatorParams::new(&LorentzianReservoir::new(1.3, 20.0, 0.5).unwrap())
    }

    fn boundary_params() -> LorentzianPropagatorParams {
        LorentzianPropagatorParams::new(&LorentzianReservoir::new(2.0, 4.0, 0.5).unwrap())
    }

    #[test]
    fn construction_derives_consistent_regime_and_rate() {
        let strong = strong_params();
        assert_eq!(strong.regime(), CouplingRegime::Strong);
        assert!((strong.rate() - 19.0f64.sqrt()).abs() < 1e-15);

        let weak = weak_params();
        assert_eq!(weak.regime(), CouplingRegime::Weak);
        assert!((weak.rate() - (400.0f64 - 52.0).sqrt()).abs() < 1e-13);

        let boundary = boundary_params();
        assert_eq!(boundary.regime(), CouplingRegime::Boundary);
        assert_eq!(boundary.rate(), 0.0);
    }

    #[test]
    fn propagator_is_one_at_time_zero_in_every_regime() {
        for params in [strong_params(), weak_params(), boundary_params()] {
            assert_eq!(propagator_l(&params, 0.0).unwrap(), 1.0);
        }
    }

    #[test]
    fn propagator_rejects_negative_time() {
        assert!(matches!(
            propagator_l(&strong_params(), -1.0),
            Err(CoreError::Domain { .. })
        ));
    }

    #[test]
    fn strong_coupling_matches_frozen_values() {
        let params = strong_params();
        for (t, want) in [
            (0.3, 0.8032951312403553104222),
            (0.8241, 0.000153174119061800277552),
            (2.0, -0.2065294233304034910776),
            (5.0, -0.02679879637790824619498),
        ] {
            let got = propagator_l(&params, t).unwrap();
            assert!(
                (got - want).abs() < 1e-13,
                "G_L({t}) = {got}, want {want}"
            );
        }
    }

    #[test]
    fn weak_coupling_matches_frozen_values() {
        let params = weak_params();
        for (t, want) in [
            (0.05, 0.9880739710083647875414),
            (0.2, 0.9048941762876818632233),
            (1.0, 0.5287711800225163634559),
        ] {
            let got = propagator_l(&params, t).unwrap();
            assert!(
                (got - want).abs() < 1e-13,
                "G_L({t}) = {got}, want {want}"
            );
        }
    }

    #[test]
    fn boundary_confluent_limit_matches_frozen_value() {
        let got = propagator_l(&boundary_params(), 0.7).unwrap();
        assert!((got - 0.5918327134598555446557).abs() < 1e-14);
    }

    #[test]
    fn boundary_is_the_limit_of_both_neighboring_regimes() {
        // lambda fixed at 4, gamma slightly off 2: both one-sided forms
        // must approach the confluent expression.
        let exact = propagator_l(&boundary_params(), 0.9).unwrap();
        for gamma in [2.0 - 1e-7, 2.0 + 1e-7] {
            let params =
                LorentzianPropagatorParams::new(&LorentzianReservoir::new(gamma, 4.0, 0.5).unwrap());
            assert_ne!(params.regime(), CouplingRegime::Boundary);
            let near = propagator_l(&params, 0.9).unwrap();
            assert!(
                (near - exact).abs() < 1e-6,
                "gamma={gamma}: {near} vs {exact}"
            );
        }
    }

    #[test]
    fn zero_times_match_frozen_values_and_formula_structure() {
        let params = strong_params();
        let zeros = zero_times(&params, 5).unwrap();
        let frozen = [
            0.824203431169207235762,
            2.265664999460543126543,
            3.707126567751879017324,
            5.148588136043214908106,
        ];
        for (got, want) in zeros.iter().zip(frozen.iter()) {
            assert!((got - want).abs() < 1e-13, "zero {got} vs {want}");
        }
        // Constant spacing 2 pi / d_hat.
        let spacing = 2.0 * std::f64::consts::PI / params.rate();
        for pair in zeros.windows(2) {
            assert!((pair[1] - pair[0] - spacing).abs() < 1e-12);
        }
    }

    #[test]
    fn propagator_vanishes_at_the_computed_zeros() {
        let params = strong_params();
        for t in zero_times(&params, 5).unwrap() {
            let g = propagator_l(&params, t).unwrap();
            assert!(g.abs() <= 1e-10, "G_L({t}) = {g}");
        }
    }

    #[test]
    fn zero_times_require_the_strong_regime() {
        assert!(matches!(
            zero_times(&weak_params(), 3),
            Err(CoreError::RegimeMismatch { .. })
        ));
        assert!(matches!(
            zero_times(&boundary_params(), 3),
            Err(CoreError::RegimeMismatch { .. })
        ));
        assert!(matches!(
            zero_times(&strong_params(), 0),
            Err(CoreError::InvalidParameter { .. })
        ));
    }

    #[test]
    fn weak_coupling_amplitude_stays_positive() {
        let params = weak_params();
        for k in 0..=2000 {
            let t = k as f64 * 0.005;
            assert!(propagator_l(&params, t).unwrap() > 0.0, "t = {t}");
        }
    }

    #[test]
    fn amplitude_modulus_is_bounded_by_one_in_every_regime() {
        for params in [strong_params(), weak_params(), boundary_params()] {
            for k in 0..=2000 {
                let t = k as f64 * 0.01;
                let g = propagator_l(&params, t).unwrap();
                assert!(g.abs() <= 1.0 + 1e-12, "regime {:?}, t = {t}: {g}", params.regime());
            }
        }
    }

    #[test]
    fn weak_form_is_overflow_safe_at_huge_times() {
        // The cosh form would overflow near t ~ 1400/lambda; the
        // partial-fraction form must underflow gracefully to 0 instead.
        let params = weak_params();
        let g = propagator_l(&params, 1.0e6).unwrap();
        assert!(g >= 0.0 && g < 1e-300);
    }
}
