//! File emission: CSV with a comment header, and a self-contained SVG
//! polyline overlay. All numbers are written with enough digits to
//! reparse to the identical bit pattern, the decimal separator is always
//! `.`, fields are joined with `,`, and lines end with `\n`, so output
//! is locale-independent and bit-stable for a fixed configuration.

use std::path::Path;

use crate::config::Job;
use crate::error::CliError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Full-precision decimal form of an `f64`; 17 significant digits after
/// the point guarantee an exact round-trip through parsing.
pub fn full(value: f64) -> String {
    format!("{value:.17e}")
}

/// The comment header shared by every emitted file: tool version, the
/// subcommand, the complete configuration, and the absolute time scale.
pub fn header_lines(job: &Job, command: &str) -> Vec<String> {
    let mut lines = vec![
        format!("decoherence toolkit {VERSION} - command: {command}"),
        "config:".to_string(),
    ];
    lines.extend(job.config.echo_lines().into_iter().map(|l| format!("  {l}")));
    lines.push(format!(
        "time scale: one grid unit = {} absolute; crossover time tau = {}",
        full(job.time_scale),
        full(job.tau)
    ));
    lines
}

/// Writes a CSV file: `# `-prefixed header lines, one column-name line,
/// then the pre-formatted rows.
pub fn write_csv(
    path: &Path,
    header: &[String],
    columns: &[&str],
    rows: &[Vec<String>],
) -> Result<(), CliError> {
    let mut buf = String::new();
    for line in header {
        buf.push_str("# ");
        buf.push_str(line);
        buf.push('\n');
    }
    buf.push_str(&columns.join(","));
    buf.push('\n');
    for row in rows {
        buf.push_str(&row.join(","));
        buf.push('\n');
    }
    std::fs::write(path, buf)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

/// One plotted curve.
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub stroke_width: f64,
}

const PALETTE: [&str; 3] = ["#1f77b4", "#d62728", "#2ca02c"];
/// Positive floor replacing nonpositive magnitudes on the log axis.
const LOG_FLOOR: f64 = 1e-12;

struct Axis {
    min: f64,
    max: f64,
}

impl Axis {
    fn span(&self) -> f64 {
        self.max - self.min
    }
}

/// Renders an overlay plot of the given series as a standalone SVG
/// document. `log_y` switches the vertical axis to decades of the
/// magnitude, clamping nonpositive values to a small positive floor.
pub fn svg_plot(
    title: &str,
    x_label: &str,
    y_label: &str,
    log_y: bool,
    series: &[Series],
) -> String {
    let (width, height) = (880.0, 540.0);
    let (ml, mr, mt, mb) = (78.0, 24.0, 46.0, 58.0);
    let (pw, ph) = (width - ml - mr, height - mt - mb);

    let y_of = |v: f64| if log_y { v.max(LOG_FLOOR).log10() } else { v };
    let mut xs = Axis {
        min: f64::INFINITY,
        max: f64::NEG_INFINITY,
    };
    let mut ys = Axis {
        min: f64::INFINITY,
        max: f64::NEG_INFINITY,
    };
    for s in series {
        for &(x, y) in &s.points {
            xs.min = xs.min.min(x);
            xs.max = xs.max.max(x);
            let y = y_of(y);
            ys.min = ys.min.min(y);
            ys.max = ys.max.max(y);
        }
    }
    if !xs.min.is_finite() || xs.span() == 0.0 {
        xs = Axis { min: 0.0, max: 1.0 };
    }
    if !ys.min.is_finite() || ys.span() == 0.0 {
        ys = Axis {
            min: ys.min.is_finite().then_some(ys.min - 0.5).unwrap_or(0.0),
            max: ys.max.is_finite().then_some(ys.max + 0.5).unwrap_or(1.0),
        };
    }
    let pad = 0.04 * ys.span();
    ys.min -= pad;
    ys.max += pad;

    let px = |x: f64| ml + (x - xs.min) / xs.span() * pw;
    let py = |y: f64| mt + ph - (y - ys.min) / ys.span() * ph;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\" font-family=\"sans-serif\">\n"
    ));
    svg.push_str(&format!(
        "  <rect width=\"{width}\" height=\"{height}\" fill=\"white\"/>\n"
    ));
    svg.push_str(&format!(
        "  <text x=\"{:.1}\" y=\"26\" text-anchor=\"middle\" font-size=\"17\">{}</text>\n",
        ml + pw / 2.0,
        escape(title)
    ));

    // Gridlines and tick labels.
    for (value, label) in y_ticks(&ys, log_y) {
        let y = py(value);
        svg.push_str(&format!(
            "  <line x1=\"{ml}\" y1=\"{y:.1}\" x2=\"{:.1}\" y2=\"{y:.1}\" stroke=\"#dddddd\"/>\n",
            ml + pw
        ));
        svg.push_str(&format!(
            "  <text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\" font-size=\"12\">{label}</text>\n",
            ml - 7.0,
            y + 4.0
        ));
    }
    for (value, label) in linear_ticks(&xs) {
        let x = px(value);
        svg.push_str(&format!(
            "  <line x1=\"{x:.1}\" y1=\"{mt}\" x2=\"{x:.1}\" y2=\"{:.1}\" stroke=\"#dddddd\"/>\n",
            mt + ph
        ));
        svg.push_str(&format!(
            "  <text x=\"{x:.1}\" y=\"{:.1}\" text-anchor=\"middle\" font-size=\"12\">{label}</text>\n",
            mt + ph + 18.0
        ));
    }

    // Axes frame and labels.
    svg.push_str(&format!(
        "  <rect x=\"{ml}\" y=\"{mt}\" width=\"{pw}\" height=\"{ph}\" fill=\"none\" stroke=\"#333333\"/>\n"
    ));
    svg.push_str(&format!(
        "  <text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
        ml + pw / 2.0,
        height - 14.0,
        escape(x_label)
    ));
    svg.push_str(&format!(
        "  <text x=\"20\" y=\"{:.1}\" text-anchor=\"middle\" font-size=\"14\" \
         transform=\"rotate(-90 20 {:.1})\">{}</text>\n",
        mt + ph / 2.0,
        mt + ph / 2.0,
        escape(y_label)
    ));

    // Curves.
    for (index, s) in series.iter().enumerate() {
        let color = PALETTE[index % PALETTE.len()];
        let mut points = String::new();
        for &(x, y) in &s.points {
            points.push_str(&format!("{:.2},{:.2} ", px(x), py(y_of(y))));
        }
        svg.push_str(&format!(
            "  <polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"{:.1}\" points=\"{}\"/>\n",
            s.stroke_width,
            points.trim_end()
        ));
    }

    // Legend, top right inside the frame.
    for (index, s) in series.iter().enumerate() {
        let color = PALETTE[index % PALETTE.len()];
        let y = mt + 18.0 + 20.0 * index as f64;
        let x = ml + pw - 190.0;
        svg.push_str(&format!(
            "  <line x1=\"{x:.1}\" y1=\"{y:.1}\" x2=\"{:.1}\" y2=\"{y:.1}\" stroke=\"{color}\" \
             stroke-width=\"{:.1}\"/>\n",
            x + 28.0,
            s.stroke_width
        ));
        svg.push_str(&format!(
            "  <text x=\"{:.1}\" y=\"{:.1}\" font-size=\"13\">{}</text>\n",
            x + 36.0,
            y + 4.0,
            escape(&s.label)
        ));
    }

    svg.push_str("</svg>\n");
    svg
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Linear tick positions at a 1/2/5-rounded step giving 4 to 9 ticks.
fn linear_ticks(axis: &Axis) -> Vec<(f64, String)> {
    let raw = axis.span() / 5.0;
    let magnitude = 10f64.powf(raw.log10().floor());
    let normalized = raw / magnitude;
    let step = if normalized < 1.5 {
        1.0
    } else if normalized < 3.5 {
        2.0
    } else if normalized < 7.5 {
        5.0
    } else {
        10.0
    } * magnitude;
    let mut ticks = Vec::new();
    let mut value = (axis.min / step).ceil() * step;
    while value <= axis.max + 1e-9 * step {
        let rounded = if value.abs() < 1e-12 * step { 0.0 } else { value };
        ticks.push((rounded, format_tick(rounded)));
        value += step;
    }
    ticks
}

/// Whole-decade ticks for a log axis, thinned to at most ten.
fn y_ticks(axis: &Axis, log_y: bool) -> Vec<(f64, String)> {
    if !log_y {
        return linear_ticks(axis);
    }
    let lo = axis.min.ceil() as i64;
    let hi = axis.max.floor() as i64;
    let count = (hi - lo + 1).max(1);
    let stride = ((count + 9) / 10).max(1);
    (lo..=hi)
        .filter(|d| (d - lo) % stride == 0)
        .map(|d| (d as f64, format!("1e{d}")))
        .collect()
}

fn format_tick(value: f64) -> String {
    if value == 0.0 {
        return "0".to_string();
    }
    let magnitude = value.abs();
    if !(1e-3..1e4).contains(&magnitude) {
        return format!("{value:.1e}");
    }
    let text = format!("{value:.3}");
    let trimmed = text.trim_end_matches('0').trim_end_matches('.');
    trimmed.to_string()
}
