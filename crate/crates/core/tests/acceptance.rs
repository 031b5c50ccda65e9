//! Acceptance gate: nine numbered criteria covering roots, derived
//! constants, structural identities, three-way oracle agreement, the
//! long-time law, the Lorentzian comparison model, figure-level curve
//! properties, physicality, and numerics quality.
//!
//! Each criterion prints exactly one `[criterion N] PASS/FAIL: ...` line
//! (visible with `--nocapture`, and in the failure report otherwise) and
//! then asserts. Two criteria fail by design against this model — the
//! long-time power law (5) and one figure clause (7) — because the exact
//! evolution keeps a non-decaying spectral component; see the README's
//! "Known failing assertions" section.

use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use decoherence_core::checks::{verify_lorentzian, verify_special, VerificationOptions};
use decoherence_core::dynamics::{evolve, QubitState};
use decoherence_core::exact::{asymptotics, propagator, solve_quartic};
use decoherence_core::lorentzian::{propagator_l, zero_times, LorentzianPropagatorParams};
use decoherence_core::oracle::{volterra_solve, KernelValue, VolterraConfig};
use decoherence_core::presets;
use decoherence_core::reservoir::{LorentzianReservoir, SpecialReservoir};
use decoherence_core::specfun::scaled_upper_gamma_half;
use decoherence_core::ComplexValue;

// ---- Centralized tolerances -------------------------------------------------

/// The reference root estimates carry three decimals, so half a unit in
/// the last place is 5e-4; 2e-3 adds safety for their own rounding.
const ROOT_TABLE_TOL: f64 = 2e-3;
/// Same three-decimal provenance for the crossover time and the tail
/// coefficient magnitude.
const DERIVED_CONSTANT_TOL: f64 = 2e-3;
/// Residue identities are exact algebra; 1e-10 allows double-precision
/// accumulation across the full parameter box.
const IDENTITY_TOL: f64 = 1e-10;
/// Time-march agreement over ten crossover times; the march is the least
/// accurate route (order 1.5 on this kernel at step 5e-4).
const MARCH_AGREEMENT_TOL: f64 = 1e-4;
/// Contour-inversion agreement at the sampled times; the inversion is
/// spectrally accurate there.
const INVERSION_AGREEMENT_TOL: f64 = 1e-6;
/// Closed-form Lorentzian amplitude vs the march with the exponential
/// kernel, both regimes.
const LORENTZIAN_AGREEMENT_TOL: f64 = 1e-6;
/// Amplitude modulus at the first five closed-form zero times.
const ZERO_TOL: f64 = 1e-10;
/// Relative deviation of `t^(3/2) G + D` from zero allowed at fifty and
/// one hundred crossovers.
const TAIL_TOL_50: f64 = 0.05;
const TAIL_TOL_100: f64 = 0.02;
/// Relative deviation of the population ratio from the power-law value
/// 1/8 at one hundred crossovers.
const POPULATION_RATIO_TOL: f64 = 0.03;
/// Float headroom above the exact modulus bound 1.
const MODULUS_SLACK: f64 = 1e-9;
/// Scaled incomplete gamma vs brute-force quadrature (relative).
const GAMMA_BRUTE_TOL: f64 = 1e-10;
/// Error-ratio window certifying order-2 convergence under step halving.
const ORDER2_WINDOW: (f64, f64) = (3.5, 4.5);

// ---- Helpers ----------------------------------------------------------------

fn report(criterion: usize, passed: bool, detail: &str) {
    let verdict = if passed { "PASS" } else { "FAIL" };
    println!("[criterion {criterion}] {verdict}: {detail}");
}

fn reference_reservoir() -> SpecialReservoir {
    SpecialReservoir::new(0.8, 1.0, 0.5).unwrap()
}

fn reference_initial() -> QubitState {
    QubitState::new(0.5, ComplexValue::new(0.2, 0.0)).unwrap()
}

// ---- Criteria ---------------------------------------------------------------

#[test]
fn criterion_1_quartic_roots() {
    // Three-decimal reference estimates for the four roots at coupling
    // 0.8, width 1.
    let reference = [
        (-1.282, 0.716),
        (-1.150, -1.150),
        (0.716, -1.282),
        (0.717, 0.717),
    ];
    let reservoir = reference_reservoir();
    let _warm = solve_quartic(&reservoir).unwrap();
    let start = Instant::now();
    let solution = solve_quartic(&reservoir).unwrap();
    let elapsed = start.elapsed();

    let mut used = [false; 4];
    let mut worst = 0.0f64;
    let mut matched = 0usize;
    for &(re, im) in &reference {
        let mut best: Option<(usize, f64)> = None;
        for (k, z) in solution.roots().iter().enumerate() {
            if used[k] {
                continue;
            }
            let dev = (z.re - re).abs().max((z.im - im).abs());
            if best.map_or(true, |(_, d)| dev < d) {
                best = Some((k, dev));
            }
        }
        let (k, dev) = best.unwrap();
        if dev <= ROOT_TABLE_TOL {
            used[k] = true;
            matched += 1;
            worst = worst.max(dev);
        }
    }
    let micros = elapsed.as_secs_f64() * 1e6;
    let passed = matched == 4 && micros < 1000.0;
    report(
        1,
        passed,
        &format!(
            "{matched}/4 roots within {ROOT_TABLE_TOL:.0e} of the reference table \
             (worst component deviation {worst:.2e}), solve took {micros:.0} us"
        ),
    );
    assert!(passed, "matched {matched}/4, worst {worst:.2e}, {micros:.0} us");
}

#[test]
fn criterion_2_derived_constants() {
    let reservoir = reference_reservoir();
    let _warm = asymptotics(&solve_quartic(&reservoir).unwrap());
    let start = Instant::now();
    let summary = asymptotics(&solve_quartic(&reservoir).unwrap());
    let elapsed = start.elapsed();

    let tau_dev = (summary.tau() - 0.974).abs();
    let d_dev = (summary.tail_coefficient().norm() - 0.112).abs();
    let micros = elapsed.as_secs_f64() * 1e6;
    let passed = tau_dev <= DERIVED_CONSTANT_TOL && d_dev <= DERIVED_CONSTANT_TOL && micros < 1000.0;
    report(
        2,
        passed,
        &format!(
            "tau = {:.6} (ref 0.974 +- {DERIVED_CONSTANT_TOL}), |D| = {:.6} \
             (ref 0.112 +- {DERIVED_CONSTANT_TOL}), derivation took {micros:.0} us",
            summary.tau(),
            summary.tail_coefficient().norm()
        ),
    );
    assert!(passed, "tau dev {tau_dev:.2e}, |D| dev {d_dev:.2e}, {micros:.0} us");
}

#[test]
fn criterion_3_residue_identities() {
    let mut rng = StdRng::seed_from_u64(0x0eed_5eed_0000_0003);
    let mut worst_sum = 0.0f64;
    let mut worst_weighted = 0.0f64;
    for _ in 0..50 {
        let coupling = rng.gen_range(0.01..100.0);
        let width = rng.gen_range(0.01..100.0);
        let reservoir = SpecialReservoir::new(coupling, width, 0.5 * width).unwrap();
        let solution = solve_quartic(&reservoir).unwrap();
        let sum: ComplexValue = solution.residues().iter().sum();
        let weighted: ComplexValue = solution
            .residues()
            .iter()
            .zip(solution.roots())
            .map(|(r, z)| r * z)
            .sum();
        worst_sum = worst_sum.max(sum.norm());
        worst_weighted = worst_weighted.max((weighted - 1.0).norm());
    }
    let passed = worst_sum <= IDENTITY_TOL && worst_weighted <= IDENTITY_TOL;
    report(
        3,
        passed,
        &format!(
            "50 random parameter pairs in (0.01, 100)^2: max |sum R| = {worst_sum:.2e}, \
             max |sum R z - 1| = {worst_weighted:.2e} (allowed {IDENTITY_TOL:.0e})"
        ),
    );
    assert!(passed, "|sum R| {worst_sum:.2e}, |sum R z - 1| {worst_weighted:.2e}");
}

#[test]
fn criterion_4_three_way_oracle_agreement() {
    let start = Instant::now();
    let report_rows = verify_special(
        &reference_reservoir(),
        &reference_initial(),
        &VerificationOptions::default(),
    )
    .unwrap();
    let elapsed = start.elapsed().as_secs_f64();

    let row = |name: &str| {
        report_rows
            .checks
            .iter()
            .find(|c| c.name.starts_with(name))
            .unwrap_or_else(|| panic!("missing row {name}"))
    };
    let march = row("closed form vs time march");
    let inversion = row("closed form vs contour inversion");
    let cross = row("time march vs contour inversion");
    let passed = march.measured <= MARCH_AGREEMENT_TOL
        && inversion.measured <= INVERSION_AGREEMENT_TOL
        && cross.measured <= MARCH_AGREEMENT_TOL
        && elapsed < 60.0;
    report(
        4,
        passed,
        &format!(
            "pairwise over [0, 10 tau]: closed-vs-march {:.2e} (allowed {MARCH_AGREEMENT_TOL:.0e}), \
             closed-vs-inversion {:.2e} (allowed {INVERSION_AGREEMENT_TOL:.0e}), \
             march-vs-inversion {:.2e} (allowed {MARCH_AGREEMENT_TOL:.0e}), {elapsed:.1} s",
            march.measured, inversion.measured, cross.measured
        ),
    );
    assert!(
        passed,
        "march {:.2e}, inversion {:.2e}, cross {:.2e}, {elapsed:.1} s",
        march.measured, inversion.measured, cross.measured
    );
}

#[test]
fn criterion_5_asymptotic_law() {
    // The exact amplitude keeps a non-decaying component of weight ~0.665
    // (see the README's "Known failing assertions"), so the measured
    // deviations grow with t instead of vanishing; the assertions below
    // state the advertised complete-decay law verbatim and fail.
    let solution = solve_quartic(&reference_reservoir()).unwrap();
    let summary = asymptotics(&solution);
    let tau = summary.tau();
    let d = summary.tail_coefficient();
    let tail_deviation = |t: f64| {
        let g = propagator(&solution, t).unwrap();
        (t.powf(1.5) * g + d).norm() / d.norm()
    };
    let dev50 = tail_deviation(50.0 * tau);
    let dev100 = tail_deviation(100.0 * tau);
    let g100 = propagator(&solution, 100.0 * tau).unwrap();
    let g200 = propagator(&solution, 200.0 * tau).unwrap();
    let ratio = g200.norm_sqr() / g100.norm_sqr();
    let ratio_deviation = (ratio - 0.125).abs() / 0.125;

    let passed = dev50 <= TAIL_TOL_50 && dev100 <= TAIL_TOL_100
        && ratio_deviation <= POPULATION_RATIO_TOL;
    report(
        5,
        passed,
        &format!(
            "|t^1.5 G + D|/|D| = {dev50:.2e} at 50 tau (allowed {TAIL_TOL_50}), \
             {dev100:.2e} at 100 tau (allowed {TAIL_TOL_100}); population ratio \
             {ratio:.4} vs 1/8 (allowed {POPULATION_RATIO_TOL} relative)"
        ),
    );
    assert!(
        passed,
        "tail deviations {dev50:.2e} / {dev100:.2e}, population ratio {ratio:.4}"
    );
}

#[test]
fn criterion_6_lorentzian_model() {
    let initial = reference_initial();
    let options = VerificationOptions::default();
    let strong_reservoir = LorentzianReservoir::new(10.0, 1.0, 0.5).unwrap();
    let strong = verify_lorentzian(&strong_reservoir, &initial, &options).unwrap();
    let weak_reservoir = LorentzianReservoir::new(1.3, 20.0, 0.5).unwrap();
    let weak = verify_lorentzian(&weak_reservoir, &initial, &options).unwrap();

    let strong_march = strong
        .checks
        .iter()
        .find(|c| c.name.contains("closed form vs time march"))
        .unwrap()
        .measured;
    let weak_march = weak
        .checks
        .iter()
        .find(|c| c.name.contains("closed form vs time march"))
        .unwrap()
        .measured;
    let params = LorentzianPropagatorParams::new(&strong_reservoir);
    let worst_zero = zero_times(&params, 5)
        .unwrap()
        .into_iter()
        .map(|t| propagator_l(&params, t).unwrap().abs())
        .fold(0.0f64, f64::max);

    let passed = strong_march <= LORENTZIAN_AGREEMENT_TOL
        && weak_march <= LORENTZIAN_AGREEMENT_TOL
        && worst_zero <= ZERO_TOL;
    report(
        6,
        passed,
        &format!(
            "march agreement {strong_march:.2e} (strong) / {weak_march:.2e} (weak, \
             allowed {LORENTZIAN_AGREEMENT_TOL:.0e}); max |G_L| at the first five zeros \
             {worst_zero:.2e} (allowed {ZERO_TOL:.0e})"
        ),
    );
    assert!(
        passed,
        "strong {strong_march:.2e}, weak {weak_march:.2e}, zeros {worst_zero:.2e}"
    );
}

#[test]
fn criterion_7_figure_reproduction() {
    // Clause (b) fails by design: the exact special-reservoir coherence
    // stays above the strong-coupling Lorentzian one on the whole short
    // window (both start at 0.2 and the Lorentzian decays faster from the
    // first instant), so no crossing exists; see the README's "Known
    // failing assertions".
    let short = presets::short_window();
    let solution = solve_quartic(&short.special).unwrap();
    let tau = asymptotics(&solution).tau();
    let strong = LorentzianPropagatorParams::new(&short.lorentzian_strong);
    let weak = LorentzianPropagatorParams::new(&short.lorentzian_weak);
    let coherence = 0.2f64;

    let times = short.absolute_times(tau);
    let special: Vec<f64> = times
        .iter()
        .map(|&t| coherence * propagator(&solution, t).unwrap().norm())
        .collect();
    let strong_curve: Vec<f64> = times
        .iter()
        .map(|&t| coherence * propagator_l(&strong, t).unwrap().abs())
        .collect();
    let weak_curve: Vec<f64> = times
        .iter()
        .map(|&t| coherence * propagator_l(&weak, t).unwrap().abs())
        .collect();

    let initial_dev = (special[0] - 0.2)
        .abs()
        .max((strong_curve[0] - 0.2).abs())
        .max((weak_curve[0] - 0.2).abs());
    let initial_ok = initial_dev < 1e-12;

    // Crossings strictly inside (0, 5.9 tau]: sign changes of the curve
    // difference between consecutive interior nodes.
    let crossings = (1..times.len() - 1)
        .filter(|&k| {
            let here = special[k] - strong_curve[k];
            let next = special[k + 1] - strong_curve[k + 1];
            here == 0.0 || (here > 0.0) != (next > 0.0)
        })
        .count();

    let long = presets::long_window();
    let late_times = long.absolute_times(tau);
    let t_end = *late_times.last().unwrap();
    let special_end = coherence * propagator(&solution, t_end).unwrap().norm();
    let strong_end = coherence * propagator_l(&strong, t_end).unwrap().abs();
    let weak_end = coherence * propagator_l(&weak, t_end).unwrap().abs();
    let ordering_ok = special_end > strong_end && special_end > weak_end;

    let passed = initial_ok && crossings >= 1 && ordering_ok;
    report(
        7,
        passed,
        &format!(
            "initial |rho10| deviation {initial_dev:.1e}; {crossings} crossing(s) of the \
             strong-coupling curve in (0, 5.9 tau] (need >= 1); at 30 tau the special curve \
             ({special_end:.3e}) vs strong ({strong_end:.3e}) and weak ({weak_end:.3e})"
        ),
    );
    assert!(
        passed,
        "initial dev {initial_dev:.1e}, crossings {crossings}, late ordering {ordering_ok}"
    );
}

#[test]
fn criterion_8_physicality_suite() {
    let solution = solve_quartic(&reference_reservoir()).unwrap();
    let tau = asymptotics(&solution).tau();
    let mut rng = StdRng::seed_from_u64(0x0eed_5eed_0000_0008);

    // 100 random valid initial states evolved along the exact trajectory:
    // every state must re-validate and keep an exactly unit trace.
    let grid: Vec<f64> = (0..=200).map(|k| 10.0 * tau * k as f64 / 200.0).collect();
    let samples: Vec<ComplexValue> = grid
        .iter()
        .map(|&t| propagator(&solution, t).unwrap())
        .collect();
    let mut positivity_failures = 0usize;
    let mut trace_failures = 0usize;
    for _ in 0..100 {
        let rho11: f64 = rng.gen_range(0.0..1.0);
        let fill: f64 = rng.gen_range(0.0..1.0);
        let phase: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let rho10 = ComplexValue::from_polar(fill * (rho11 * (1.0 - rho11)).sqrt(), phase);
        let state = QubitState::new(rho11, rho10).unwrap();
        for (&t, &g) in grid.iter().zip(&samples) {
            match evolve(&state, g, 0.5, t) {
                Ok(evolved) => {
                    if evolved.rho11() + evolved.rho00() != 1.0 {
                        trace_failures += 1;
                    }
                }
                Err(_) => positivity_failures += 1,
            }
        }
    }

    // Modulus bound on dense grids for 10 random parameter sets.
    let mut worst_modulus = 0.0f64;
    for _ in 0..10 {
        let coupling = rng.gen_range(0.01..100.0);
        let width = rng.gen_range(0.01..100.0);
        let reservoir = SpecialReservoir::new(coupling, width, 0.5 * width).unwrap();
        let solution = solve_quartic(&reservoir).unwrap();
        let tau = asymptotics(&solution).tau();
        for k in 0..=400 {
            let t = 10.0 * tau * k as f64 / 400.0;
            worst_modulus = worst_modulus.max(propagator(&solution, t).unwrap().norm());
        }
    }

    let passed =
        positivity_failures == 0 && trace_failures == 0 && worst_modulus <= 1.0 + MODULUS_SLACK;
    report(
        8,
        passed,
        &format!(
            "100 random states x 201 times: {positivity_failures} positivity failures, \
             {trace_failures} trace failures; max |G| over 10 random parameter sets = \
             {worst_modulus:.12} (allowed 1 + {MODULUS_SLACK:.0e})"
        ),
    );
    assert!(
        passed,
        "positivity {positivity_failures}, trace {trace_failures}, modulus {worst_modulus:.12}"
    );
}

#[test]
fn criterion_9_numerics_quality() {
    // Brute-force reference for the scaled upper incomplete gamma of
    // order 1/2: composite Simpson on the substituted half-line integral
    // integral_0^inf (w + x)^(-1/2) e^(-x) dx with 45k nodes — far more
    // than needed, so its own error sits near 1e-13.
    let brute_force = |w: ComplexValue| {
        let upper = 45.0;
        let n = 45_000usize;
        let h = upper / n as f64;
        let f = |x: f64| ((w + x).sqrt()).inv() * (-x).exp();
        let mut acc = f(0.0) + f(upper);
        for k in 1..n {
            let coefficient = if k % 2 == 1 { 4.0 } else { 2.0 };
            acc += f(k as f64 * h) * coefficient;
        }
        acc * (h / 3.0)
    };
    let mut worst_gamma = 0.0f64;
    for &modulus in &[0.3, 1.0, 3.0, 10.0, 30.0] {
        for &argument in &[-2.4, -1.2, -0.2, 0.2, 1.2, 2.4] {
            let w = ComplexValue::from_polar(modulus, argument);
            let got = scaled_upper_gamma_half(w).unwrap();
            let want = brute_force(w);
            worst_gamma = worst_gamma.max((got - want).norm() / want.norm());
        }
    }

    // Order-2 convergence of the time march on the analytic cosine case
    // (constant kernel 1 gives G = cos t exactly).
    let march_error = |step: f64| {
        let cfg = VolterraConfig::new(step, 5.0, 1e-12).unwrap();
        let samples = volterra_solve(
            |_| Ok(KernelValue::exact(ComplexValue::new(1.0, 0.0))),
            &cfg,
        )
        .unwrap();
        samples
            .times()
            .iter()
            .zip(samples.values())
            .map(|(t, g)| (g - ComplexValue::new(t.cos(), 0.0)).norm())
            .fold(0.0f64, f64::max)
    };
    let ratio = march_error(0.01) / march_error(0.005);

    let passed = worst_gamma <= GAMMA_BRUTE_TOL
        && ratio >= ORDER2_WINDOW.0
        && ratio <= ORDER2_WINDOW.1;
    report(
        9,
        passed,
        &format!(
            "scaled gamma vs 45k-node brute force at 30 points: worst relative deviation \
             {worst_gamma:.2e} (allowed {GAMMA_BRUTE_TOL:.0e}); march error ratio under step \
             halving {ratio:.2} (window [{}, {}])",
            ORDER2_WINDOW.0, ORDER2_WINDOW.1
        ),
    );
    assert!(passed, "gamma {worst_gamma:.2e}, order ratio {ratio:.2}");
}
