//! Run configuration: defaults, named presets, flat `key = value` config
//! files, and flag overrides, merged in that order (defaults, then
//! preset, then file, then individual flags) and validated into a
//! ready-to-run [`Job`].

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::Serialize;

use decoherence_core::dynamics::QubitState;
use decoherence_core::exact::{asymptotics, solve_quartic};
use decoherence_core::presets;
use decoherence_core::reservoir::{LorentzianReservoir, SpecialReservoir};
use decoherence_core::ComplexValue;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReservoirChoice {
    /// Band-edge reservoir only.
    Special,
    /// Lorentzian reservoir only.
    Lorentzian,
    /// Both models side by side.
    Both,
}

impl ReservoirChoice {
    fn key(self) -> &'static str {
        match self {
            ReservoirChoice::Special => "special",
            ReservoirChoice::Lorentzian => "lorentzian",
            ReservoirChoice::Both => "both",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeUnit {
    /// Times are multiples of the crossover time of the configured
    /// band-edge reservoir.
    Tau,
    /// Times are multiples of the inverse width parameter.
    InverseWidth,
}

impl TimeUnit {
    fn key(self) -> &'static str {
        match self {
            TimeUnit::Tau => "tau",
            TimeUnit::InverseWidth => "inverse_width",
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PresetName {
    /// Short-window three-curve comparison, linear scale.
    PaperFig1,
    /// Long-window three-curve comparison, logarithmic scale.
    PaperFig2,
}

/// The complete flat configuration. Config files use exactly these field
/// names as keys; every field also exists as a CLI flag (kebab-cased).
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub reservoir: ReservoirChoice,
    /// Band-edge coupling amplitude, in units of width^(5/2).
    pub coupling: f64,
    /// Band-edge width parameter; the base frequency unit.
    pub width: f64,
    /// Qubit transition frequency, in units of width.
    pub omega0: f64,
    /// Lorentzian coupling rate, in units of width.
    pub gamma: f64,
    /// Lorentzian spectral half-width, in units of width.
    pub lambda: f64,
    /// When true, trajectories and verification use the two canonical
    /// comparison regimes (strong and weak) instead of the single
    /// (gamma, lambda) pair above.
    pub figure_comparison: bool,
    pub rho11_0: f64,
    pub rho10_re: f64,
    pub rho10_im: f64,
    /// Grid start, in `time_unit` units.
    pub t_min: f64,
    /// Grid end, in `time_unit` units; must exceed `t_min`.
    pub t_max: f64,
    pub time_unit: TimeUnit,
    pub n_points: usize,
    /// Logarithmic magnitude axis in the SVG overlay.
    pub log_scale: bool,
    /// Compare emitted amplitudes against the integro-differential time
    /// march and record the deviation in output headers.
    pub march_check: bool,
    /// Compare emitted amplitudes against contour inversion of the
    /// frequency-domain propagator at sample times.
    pub inversion_check: bool,
    pub out_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            reservoir: ReservoirChoice::Special,
            coupling: 0.8,
            width: 1.0,
            omega0: 0.5,
            gamma: 10.0,
            lambda: 1.0,
            figure_comparison: false,
            rho11_0: 0.5,
            rho10_re: 0.2,
            rho10_im: 0.0,
            t_min: 0.0,
            t_max: 5.9,
            time_unit: TimeUnit::Tau,
            n_points: 600,
            log_scale: false,
            march_check: true,
            inversion_check: true,
            out_dir: None,
        }
    }
}

impl RunConfig {
    /// The config echoed as `key = value` lines, one per field, in the
    /// file format accepted by `--config`.
    pub fn echo_lines(&self) -> Vec<String> {
        let out_dir = self
            .out_dir
            .as_ref()
            .map_or_else(|| "(unset)".to_string(), |p| p.display().to_string());
        vec![
            format!("reservoir = {}", self.reservoir.key()),
            format!("coupling = {}", self.coupling),
            format!("width = {}", self.width),
            format!("omega0 = {}", self.omega0),
            format!("gamma = {}", self.gamma),
            format!("lambda = {}", self.lambda),
            format!("figure_comparison = {}", self.figure_comparison),
            format!("rho11_0 = {}", self.rho11_0),
            format!("rho10_re = {}", self.rho10_re),
            format!("rho10_im = {}", self.rho10_im),
            format!("t_min = {}", self.t_min),
            format!("t_max = {}", self.t_max),
            format!("time_unit = {}", self.time_unit.key()),
            format!("n_points = {}", self.n_points),
            format!("log_scale = {}", self.log_scale),
            format!("march_check = {}", self.march_check),
            format!("inversion_check = {}", self.inversion_check),
            format!("out_dir = {out_dir}"),
        ]
    }
}

/// Flags shared by every subcommand. Each `Option` is an explicit
/// override applied on top of preset and config-file values.
#[derive(Args, Debug)]
pub struct SharedArgs {
    /// Named parameter bundle for the figure-style comparisons.
    #[arg(long, value_enum)]
    pub preset: Option<PresetName>,

    /// Flat `key = value` config file; later flags override its values.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Directory for emitted files.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,

    /// Which reservoir model(s) contribute output curves.
    #[arg(long, value_enum)]
    pub reservoir: Option<ReservoirChoice>,
    /// Band-edge coupling amplitude (> 0).
    #[arg(long, allow_negative_numbers = true)]
    pub coupling: Option<f64>,
    /// Band-edge resonance width (> 0).
    #[arg(long, allow_negative_numbers = true)]
    pub width: Option<f64>,
    /// Qubit transition frequency, placed at the band edge.
    #[arg(long, allow_negative_numbers = true)]
    pub omega0: Option<f64>,
    /// Lorentzian coupling strength (> 0).
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
    /// Lorentzian spectral width (> 0).
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    /// Evolve the band-edge model against the two canonical Lorentzian
    /// regimes (overrides --reservoir, --gamma, --lambda).
    #[arg(long)]
    pub figure_comparison: Option<bool>,
    /// Initial excited-state population (in [0, 1]).
    #[arg(long, allow_negative_numbers = true)]
    pub rho11_0: Option<f64>,
    /// Real part of the initial coherence.
    #[arg(long, allow_negative_numbers = true)]
    pub rho10_re: Option<f64>,
    /// Imaginary part of the initial coherence.
    #[arg(long, allow_negative_numbers = true)]
    pub rho10_im: Option<f64>,
    /// Start of the time window, in the configured unit.
    #[arg(long, allow_negative_numbers = true)]
    pub t_min: Option<f64>,
    /// End of the time window, in the configured unit.
    #[arg(long, allow_negative_numbers = true)]
    pub t_max: Option<f64>,
    /// Unit for --t-min/--t-max: the band-edge crossover time or the
    /// inverse Lorentzian width.
    #[arg(long, value_enum)]
    pub time_unit: Option<TimeUnit>,
    /// Number of output grid points (at least 2).
    #[arg(long)]
    pub n_points: Option<usize>,
    /// Use a logarithmic amplitude axis in the SVG overlay.
    #[arg(long)]
    pub log_scale: Option<bool>,
    /// Compare emitted amplitudes against the integro-differential
    /// time march.
    #[arg(long)]
    pub march_check: Option<bool>,
    /// Compare emitted amplitudes against numerical contour inversion.
    #[arg(long)]
    pub inversion_check: Option<bool>,
}

/// A validated, ready-to-run unit of work shared by all subcommands.
#[derive(Debug)]
pub struct Job {
    pub config: RunConfig,
    /// Band-edge reservoir built from `coupling`/`width`/`omega0`;
    /// always constructed (the roots command and the tau time unit need
    /// it regardless of the reservoir selection).
    pub special: SpecialReservoir,
    /// Whether the band-edge model contributes output curves.
    pub include_special: bool,
    /// Labeled Lorentzian models contributing output curves.
    pub lorentzians: Vec<(String, LorentzianReservoir)>,
    pub initial: QubitState,
    /// Absolute times of the output grid.
    pub times: Vec<f64>,
    /// Absolute time per configured unit.
    pub time_scale: f64,
    /// Crossover time of `special`.
    pub tau: f64,
    pub out_dir: Option<PathBuf>,
}

impl Job {
    pub fn x_axis_label(&self) -> &'static str {
        match self.config.time_unit {
            TimeUnit::Tau => "t / tau",
            TimeUnit::InverseWidth => "t x width",
        }
    }
}

pub fn build(shared: &SharedArgs) -> Result<Job, CliError> {
    let mut cfg = RunConfig::default();
    if let Some(preset) = shared.preset {
        apply_preset(&mut cfg, preset);
    }
    if let Some(path) = &shared.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read config file {}: {e}", path.display())))?;
        apply_file(&mut cfg, &text)?;
    }
    apply_flags(&mut cfg, shared);
    finish(cfg)
}

fn apply_preset(cfg: &mut RunConfig, preset: PresetName) {
    let bundle = match preset {
        PresetName::PaperFig1 => presets::short_window(),
        PresetName::PaperFig2 => presets::long_window(),
    };
    cfg.reservoir = ReservoirChoice::Both;
    cfg.figure_comparison = true;
    cfg.coupling = bundle.special.coupling();
    cfg.width = bundle.special.width();
    cfg.omega0 = bundle.special.omega0();
    cfg.gamma = bundle.lorentzian_strong.gamma();
    cfg.lambda = bundle.lorentzian_strong.lambda();
    cfg.rho11_0 = bundle.initial.rho11();
    cfg.rho10_re = bundle.initial.rho10().re;
    cfg.rho10_im = bundle.initial.rho10().im;
    cfg.t_min = bundle.window_in_crossover.0;
    cfg.t_max = bundle.window_in_crossover.1;
    cfg.time_unit = TimeUnit::Tau;
    cfg.n_points = bundle.n_points;
    cfg.log_scale = bundle.log_scale;
}

fn apply_file(cfg: &mut RunConfig, text: &str) -> Result<(), CliError> {
    for (index, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Invalid(format!(
                "config line {}: expected `key = value`, got {raw:?}",
                index + 1
            ))
        })?;
        apply_key(cfg, key.trim(), value.trim())
            .map_err(|msg| CliError::Invalid(format!("config line {}: {msg}", index + 1)))?;
    }
    Ok(())
}

fn apply_key(cfg: &mut RunConfig, key: &str, value: &str) -> Result<(), String> {
    match key {
        "reservoir" => {
            cfg.reservoir = match value {
                "special" => ReservoirChoice::Special,
                "lorentzian" => ReservoirChoice::Lorentzian,
                "both" => ReservoirChoice::Both,
                other => {
                    return Err(format!(
                        "reservoir must be special, lorentzian, or both; got {other:?}"
                    ))
                }
            }
        }
        "coupling" => cfg.coupling = parse_number(key, value)?,
        "width" => cfg.width = parse_number(key, value)?,
        "omega0" => cfg.omega0 = parse_number(key, value)?,
        "gamma" => cfg.gamma = parse_number(key, value)?,
        "lambda" => cfg.lambda = parse_number(key, value)?,
        "figure_comparison" => cfg.figure_comparison = parse_flag(key, value)?,
        "rho11_0" => cfg.rho11_0 = parse_number(key, value)?,
        "rho10_re" => cfg.rho10_re = parse_number(key, value)?,
        "rho10_im" => cfg.rho10_im = parse_number(key, value)?,
        "t_min" => cfg.t_min = parse_number(key, value)?,
        "t_max" => cfg.t_max = parse_number(key, value)?,
        "time_unit" => {
            cfg.time_unit = match value {
                "tau" => TimeUnit::Tau,
                "inverse_width" => TimeUnit::InverseWidth,
                other => {
                    return Err(format!(
                        "time_unit must be tau or inverse_width; got {other:?}"
                    ))
                }
            }
        }
        "n_points" => {
            cfg.n_points = value
                .parse()
                .map_err(|_| format!("n_points must be a whole number; got {value:?}"))?
        }
        "log_scale" => cfg.log_scale = parse_flag(key, value)?,
        "march_check" => cfg.march_check = parse_flag(key, value)?,
        "inversion_check" => cfg.inversion_check = parse_flag(key, value)?,
        "out_dir" => cfg.out_dir = Some(PathBuf::from(value)),
        other => return Err(format!("unknown key {other:?}")),
    }
    Ok(())
}

fn parse_number(key: &str, value: &str) -> Result<f64, String> {
    value
        .parse()
        .map_err(|_| format!("{key} must be a number; got {value:?}"))
}

fn parse_flag(key: &str, value: &str) -> Result<bool, String> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(format!("{key} must be true or false; got {other:?}")),
    }
}

fn apply_flags(cfg: &mut RunConfig, shared: &SharedArgs) {
    if let Some(v) = shared.reservoir {
        cfg.reservoir = v;
    }
    if let Some(v) = shared.coupling {
        cfg.coupling = v;
    }
    if let Some(v) = shared.width {
        cfg.width = v;
    }
    if let Some(v) = shared.omega0 {
        cfg.omega0 = v;
    }
    if let Some(v) = shared.gamma {
        cfg.gamma = v;
    }
    if let Some(v) = shared.lambda {
        cfg.lambda = v;
    }
    if let Some(v) = shared.figure_comparison {
        cfg.figure_comparison = v;
    }
    if let Some(v) = shared.rho11_0 {
        cfg.rho11_0 = v;
    }
    if let Some(v) = shared.rho10_re {
        cfg.rho10_re = v;
    }
    if let Some(v) = shared.rho10_im {
        cfg.rho10_im = v;
    }
    if let Some(v) = shared.t_min {
        cfg.t_min = v;
    }
    if let Some(v) = shared.t_max {
        cfg.t_max = v;
    }
    if let Some(v) = shared.time_unit {
        cfg.time_unit = v;
    }
    if let Some(v) = shared.n_points {
        cfg.n_points = v;
    }
    if let Some(v) = shared.log_scale {
        cfg.log_scale = v;
    }
    if let Some(v) = shared.march_check {
        cfg.march_check = v;
    }
    if let Some(v) = shared.inversion_check {
        cfg.inversion_check = v;
    }
    if let Some(v) = &shared.out {
        cfg.out_dir = Some(v.clone());
    }
}

fn finish(cfg: RunConfig) -> Result<Job, CliError> {
    let special = SpecialReservoir::new(cfg.coupling, cfg.width, cfg.omega0)?;
    let initial = QubitState::new(cfg.rho11_0, ComplexValue::new(cfg.rho10_re, cfg.rho10_im))?;

    let mut lorentzians = Vec::new();
    if cfg.figure_comparison {
        let canonical = presets::short_window();
        lorentzians.push((
            "lorentzian_strong".to_string(),
            LorentzianReservoir::new(
                canonical.lorentzian_strong.gamma(),
                canonical.lorentzian_strong.lambda(),
                cfg.omega0,
            )?,
        ));
        lorentzians.push((
            "lorentzian_weak".to_string(),
            LorentzianReservoir::new(
                canonical.lorentzian_weak.gamma(),
                canonical.lorentzian_weak.lambda(),
                cfg.omega0,
            )?,
        ));
    } else if matches!(
        cfg.reservoir,
        ReservoirChoice::Lorentzian | ReservoirChoice::Both
    ) {
        lorentzians.push((
            "lorentzian".to_string(),
            LorentzianReservoir::new(cfg.gamma, cfg.lambda, cfg.omega0)?,
        ));
    }
    let include_special = cfg.reservoir != ReservoirChoice::Lorentzian;

    if cfg.n_points < 2 {
        return Err(CliError::Invalid(format!(
            "n_points must be at least 2; got {}",
            cfg.n_points
        )));
    }
    for (name, value) in [("t_min", cfg.t_min), ("t_max", cfg.t_max)] {
        if !value.is_finite() {
            return Err(CliError::Invalid(format!(
                "{name} must be finite; got {value}"
            )));
        }
    }
    if cfg.t_min < 0.0 {
        return Err(CliError::Invalid(format!(
            "t_min must be nonnegative; got {}",
            cfg.t_min
        )));
    }
    if cfg.t_max <= cfg.t_min {
        return Err(CliError::Invalid(format!(
            "t_max must exceed t_min; got t_max = {}, t_min = {}",
            cfg.t_max, cfg.t_min
        )));
    }

    let tau = asymptotics(&solve_quartic(&special)?).tau();
    let time_scale = match cfg.time_unit {
        TimeUnit::Tau => tau,
        TimeUnit::InverseWidth => 1.0 / cfg.width,
    };
    let n = cfg.n_points;
    let times: Vec<f64> = (0..n)
        .map(|k| time_scale * (cfg.t_min + (cfg.t_max - cfg.t_min) * k as f64 / (n - 1) as f64))
        .collect();

    let out_dir = cfg.out_dir.clone();
    Ok(Job {
        config: cfg,
        special,
        include_special,
        lorentzians,
        initial,
        times,
        time_scale,
        tau,
        out_dir,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn no_flags() -> SharedArgs {
        SharedArgs {
            preset: None,
            config: None,
            out: None,
            reservoir: None,
            coupling: None,
            width: None,
            omega0: None,
            gamma: None,
            lambda: None,
            figure_comparison: None,
            rho11_0: None,
            rho10_re: None,
            rho10_im: None,
            t_min: None,
            t_max: None,
            time_unit: None,
            n_points: None,
            log_scale: None,
            march_check: None,
            inversion_check: None,
        }
    }

    #[test]
    fn defaults_build_a_special_only_job() {
        let job = build(&no_flags()).unwrap();
        assert!(job.include_special);
        assert!(job.lorentzians.is_empty());
        assert_eq!(job.times.len(), 600);
        assert_eq!(job.times[0], 0.0);
        assert!((job.tau - 0.9736).abs() < 1e-3);
    }

    #[test]
    fn preset_selects_the_three_curve_comparison() {
        let mut args = no_flags();
        args.preset = Some(PresetName::PaperFig2);
        let job = build(&args).unwrap();
        assert!(job.include_special);
        assert_eq!(job.lorentzians.len(), 2);
        assert_eq!(job.lorentzians[0].0, "lorentzian_strong");
        assert!(job.config.log_scale);
        assert!((job.times[0] / job.tau - 3.2).abs() < 1e-12);
        assert!((job.times.last().unwrap() / job.tau - 30.0).abs() < 1e-12);
    }

    #[test]
    fn file_values_are_overridden_by_flags() {
        let mut cfg = RunConfig::default();
        apply_file(&mut cfg, "n_points = 4\n# comment\n\nt_max = 2.5\n").unwrap();
        assert_eq!(cfg.n_points, 4);
        assert_eq!(cfg.t_max, 2.5);
        let mut args = no_flags();
        args.n_points = Some(7);
        apply_flags(&mut cfg, &args);
        assert_eq!(cfg.n_points, 7);
    }

    #[test]
    fn unknown_key_and_malformed_line_are_rejected() {
        let mut cfg = RunConfig::default();
        let err = apply_file(&mut cfg, "frobnicate = 1\n").unwrap_err();
        assert!(err.to_string().contains("frobnicate"), "{err}");
        let err = apply_file(&mut cfg, "just words\n").unwrap_err();
        assert!(err.to_string().contains("key = value"), "{err}");
    }

    #[test]
    fn degenerate_grids_are_rejected_with_field_names() {
        let mut args = no_flags();
        args.n_points = Some(2);
        args.t_max = Some(0.0);
        let err = build(&args).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("t_max"), "{err}");

        let mut args = no_flags();
        args.n_points = Some(1);
        let err = build(&args).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("n_points"), "{err}");
    }

    #[test]
    fn unphysical_parameters_exit_as_invalid_input() {
        let mut args = no_flags();
        args.width = Some(-1.0);
        let err = build(&args).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("width"), "{err}");
    }

    #[test]
    fn echo_lines_round_trip_through_the_file_parser() {
        let mut reference = RunConfig::default();
        reference.reservoir = ReservoirChoice::Both;
        reference.coupling = 2.5;
        reference.log_scale = true;
        reference.n_points = 17;
        let text: String = reference
            .echo_lines()
            .into_iter()
            .filter(|line| !line.starts_with("out_dir"))
            .map(|line| line + "\n")
            .collect();
        let mut parsed = RunConfig::default();
        apply_file(&mut parsed, &text).unwrap();
        assert_eq!(parsed.reservoir, reference.reservoir);
        assert_eq!(parsed.coupling, reference.coupling);
        assert_eq!(parsed.log_scale, reference.log_scale);
        assert_eq!(parsed.n_points, reference.n_points);
    }
}
