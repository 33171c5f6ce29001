//! Experimental datasets and model-versus-measurement comparison.
//!
//! Embeds the two built-in wave-speed tables (dominoes stacked vertical and
//! horizontal), loads user-supplied datasets from CSV, computes residual
//! reports against a model curve, checks the expected normalized-speed range,
//! and exports CSV/SVG/JSON artifacts.
//!
//! Reliability flags on the built-in tables mark the extreme-spacing entry at
//! each end of each table; those points came from irregular recordings and
//! are excluded from residual statistics.

use serde::Serialize;
use thiserror::Error;

use crate::geometry::practical_spacing_limit;
use crate::wave_model::{CurvePoint, WaveModelError};

/// Default lower bound of the expected normalized-speed range.
pub const DEFAULT_RANGE_LO: f64 = 1.0;
/// Default upper bound of the expected normalized-speed range.
pub const DEFAULT_RANGE_HI: f64 = 1.6;

/// Tolerance for matching a curve abscissa to a measured `d/H`.
const SPACING_MATCH_TOL: f64 = 1e-9;

/// Errors from dataset handling and comparison.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ValidationError {
    /// Not one of the built-in dataset names.
    #[error("unknown dataset {0:?} (known: larham_vertical, larham_horizontal)")]
    UnknownDataset(String),
    /// CSV syntax or value error, with the 1-based row number.
    #[error("CSV parse error at row {row}: {message}")]
    ParseError { row: usize, message: String },
    /// Two points share a `d/H` value.
    #[error("duplicate spacing d/H = {0}")]
    DuplicateSpacing(f64),
    /// A point violates `d/H > 0` or `v_norm > 0`.
    #[error("invalid measurement point: {0}")]
    InvalidPoint(String),
    /// Datasets must contain at least one point.
    #[error("empty dataset")]
    EmptyDataset,
    /// No reliable point falls inside the model's domain.
    #[error("no overlap between the model curve and the dataset's reliable points")]
    EmptyOverlap,
}

/// How the dominoes were stacked when the point was measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Orientation {
    Vertical,
    Horizontal,
    /// Point supplied from outside the built-in tables.
    External,
}

impl Orientation {
    pub fn label(&self) -> &'static str {
        match self {
            Orientation::Vertical => "vertical",
            Orientation::Horizontal => "horizontal",
            Orientation::External => "external",
        }
    }
}

/// One measured `(d/H, v/√(gH))` point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasurementPoint {
    pub d_over_h: f64,
    pub v_norm: f64,
    pub orientation: Orientation,
    pub reliable: bool,
    pub source: String,
}

/// A named collection of measurement points with unique spacings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Dataset {
    name: String,
    points: Vec<MeasurementPoint>,
}

impl Dataset {
    /// Validates non-emptiness, point invariants and spacing uniqueness.
    pub fn new(
        name: impl Into<String>,
        points: Vec<MeasurementPoint>,
    ) -> Result<Self, ValidationError> {
        if points.is_empty() {
            return Err(ValidationError::EmptyDataset);
        }
        for point in &points {
            if !point.d_over_h.is_finite() || point.d_over_h <= 0.0 {
                return Err(ValidationError::InvalidPoint(format!(
                    "d/H = {} must be positive",
                    point.d_over_h
                )));
            }
            if !point.v_norm.is_finite() || point.v_norm <= 0.0 {
                return Err(ValidationError::InvalidPoint(format!(
                    "v_norm = {} must be positive",
                    point.v_norm
                )));
            }
        }
        for (i, a) in points.iter().enumerate() {
            for b in &points[i + 1..] {
                if a.d_over_h == b.d_over_h {
                    return Err(ValidationError::DuplicateSpacing(a.d_over_h));
                }
            }
        }
        Ok(Self {
            name: name.into(),
            points,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn points(&self) -> &[MeasurementPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Points sorted by `d/H`, the canonical order used in reports.
    fn sorted_points(&self) -> Vec<&MeasurementPoint> {
        let mut points: Vec<&MeasurementPoint> = self.points.iter().collect();
        points.sort_by(|a, b| a.d_over_h.total_cmp(&b.d_over_h));
        points
    }
}

/// The built-in measurement tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinDataset {
    /// Nine points measured with the dominoes stacked vertical.
    LarhamVertical,
    /// Four points measured with the dominoes stacked horizontal.
    LarhamHorizontal,
}

impl BuiltinDataset {
    pub fn from_name(name: &str) -> Result<Self, ValidationError> {
        match name {
            "larham_vertical" => Ok(BuiltinDataset::LarhamVertical),
            "larham_horizontal" => Ok(BuiltinDataset::LarhamHorizontal),
            other => Err(ValidationError::UnknownDataset(other.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            BuiltinDataset::LarhamVertical => "larham_vertical",
            BuiltinDataset::LarhamHorizontal => "larham_horizontal",
        }
    }
}

const LARHAM_VERTICAL: [(f64, f64, bool); 9] = [
    (0.04, 1.07, false),
    (0.14, 1.33, true),
    (0.23, 1.53, true),
    (0.33, 1.51, true),
    (0.43, 1.47, true),
    (0.53, 1.50, true),
    (0.62, 1.40, true),
    (0.72, 1.33, true),
    (0.82, 1.23, false),
];

const LARHAM_HORIZONTAL: [(f64, f64, bool); 4] = [
    (0.28, 1.15, false),
    (0.47, 1.19, true),
    (0.67, 1.15, true),
    (0.87, 0.68, false),
];

/// Returns one of the embedded measurement tables.
pub fn builtin_dataset(which: BuiltinDataset) -> Dataset {
    let (table, orientation): (&[(f64, f64, bool)], Orientation) = match which {
        BuiltinDataset::LarhamVertical => (&LARHAM_VERTICAL, Orientation::Vertical),
        BuiltinDataset::LarhamHorizontal => (&LARHAM_HORIZONTAL, Orientation::Horizontal),
    };
    let points = table
        .iter()
        .map(|&(d_over_h, v_norm, reliable)| MeasurementPoint {
            d_over_h,
            v_norm,
            orientation,
            reliable,
            source: which.name().to_string(),
        })
        .collect();
    Dataset::new(which.name(), points).expect("embedded tables satisfy the invariants")
}

/// Looks a built-in dataset up by name.
pub fn builtin_dataset_by_name(name: &str) -> Result<Dataset, ValidationError> {
    Ok(builtin_dataset(BuiltinDataset::from_name(name)?))
}

/// Parses a dataset from CSV text with the required header
/// `d_over_H,v_norm,reliable,source` (reliable is 0 or 1). Loaded points get
/// the `External` orientation.
pub fn load_dataset_csv(name: &str, content: &str) -> Result<Dataset, ValidationError> {
    let mut lines = content.lines().enumerate();
    let header = loop {
        match lines.next() {
            Some((row, line)) if line.trim().is_empty() => {
                let _ = row;
                continue;
            }
            Some((row, line)) => break (row, line),
            None => {
                return Err(ValidationError::ParseError {
                    row: 1,
                    message: "missing header row".to_string(),
                })
            }
        }
    };
    let expected = ["d_over_H", "v_norm", "reliable", "source"];
    let fields: Vec<&str> = header.1.split(',').map(str::trim).collect();
    if fields != expected {
        return Err(ValidationError::ParseError {
            row: header.0 + 1,
            message: format!("header must be {:?}, got {:?}", expected.join(","), header.1),
        });
    }

    let mut points = Vec::new();
    for (index, line) in lines {
        let row = index + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 4 {
            return Err(ValidationError::ParseError {
                row,
                message: format!("expected 4 columns, got {}", fields.len()),
            });
        }
        let d_over_h: f64 = fields[0].parse().map_err(|_| ValidationError::ParseError {
            row,
            message: format!("d_over_H {:?} is not a number", fields[0]),
        })?;
        let v_norm: f64 = fields[1].parse().map_err(|_| ValidationError::ParseError {
            row,
            message: format!("v_norm {:?} is not a number", fields[1]),
        })?;
        let reliable = match fields[2] {
            "0" => false,
            "1" => true,
            other => {
                return Err(ValidationError::ParseError {
                    row,
                    message: format!("reliable {other:?} must be 0 or 1"),
                })
            }
        };
        if points
            .iter()
            .any(|p: &MeasurementPoint| p.d_over_h == d_over_h)
        {
            return Err(ValidationError::DuplicateSpacing(d_over_h));
        }
        points.push(MeasurementPoint {
            d_over_h,
            v_norm,
            orientation: Orientation::External,
            reliable,
            source: fields[3].to_string(),
        });
    }
    Dataset::new(name, points)
}

/// True iff every reliable point's normalized speed lies in `[lo, hi]`.
pub fn range_check(dataset: &Dataset, lo: f64, hi: f64) -> bool {
    dataset
        .points()
        .iter()
        .filter(|p| p.reliable)
        .all(|p| (lo..=hi).contains(&p.v_norm))
}

/// Why a point was left out of the residual statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ExclusionReason {
    /// Flagged unreliable in its dataset.
    Unreliable,
    /// `d/H` beyond the practical propagation limit.
    OutsideModelDomain,
    /// The supplied curve has no entry at this `d/H`.
    NotCovered,
}

impl ExclusionReason {
    pub fn label(&self) -> &'static str {
        match self {
            ExclusionReason::Unreliable => "unreliable",
            ExclusionReason::OutsideModelDomain => "outside_model_domain",
            ExclusionReason::NotCovered => "not_covered",
        }
    }
}

/// One compared point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualEntry {
    pub d_over_h: f64,
    pub measured: f64,
    pub model: f64,
    /// `model − measured`.
    pub residual: f64,
}

/// One excluded point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExcludedPoint {
    pub d_over_h: f64,
    pub v_norm: f64,
    pub reason: ExclusionReason,
}

/// Quantified agreement between a model curve and a dataset.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub model_label: String,
    pub dataset_name: String,
    /// Per-point residuals over reliable in-domain points, ascending in `d/H`.
    pub residuals: Vec<ResidualEntry>,
    /// RMS of the residuals.
    pub rms: f64,
    /// Range check with the default `[1.0, 1.6]` bounds.
    pub range_check_pass: bool,
    pub excluded_points: Vec<ExcludedPoint>,
}

/// Compares a model curve (evaluated at the measured `d/H` values) against a
/// dataset. Unreliable and out-of-domain points are excluded and listed;
/// points are processed in ascending `d/H` so the report does not depend on
/// dataset ordering.
pub fn residuals(
    curve: &[(f64, f64)],
    dataset: &Dataset,
    model_label: &str,
) -> Result<ValidationReport, ValidationError> {
    let limit = practical_spacing_limit();
    let mut entries = Vec::new();
    let mut excluded = Vec::new();
    for point in dataset.sorted_points() {
        if !point.reliable {
            excluded.push(ExcludedPoint {
                d_over_h: point.d_over_h,
                v_norm: point.v_norm,
                reason: ExclusionReason::Unreliable,
            });
            continue;
        }
        if point.d_over_h > limit {
            excluded.push(ExcludedPoint {
                d_over_h: point.d_over_h,
                v_norm: point.v_norm,
                reason: ExclusionReason::OutsideModelDomain,
            });
            continue;
        }
        match curve
            .iter()
            .find(|(d, _)| (d - point.d_over_h).abs() <= SPACING_MATCH_TOL)
        {
            Some(&(_, model)) => entries.push(ResidualEntry {
                d_over_h: point.d_over_h,
                measured: point.v_norm,
                model,
                residual: model - point.v_norm,
            }),
            None => excluded.push(ExcludedPoint {
                d_over_h: point.d_over_h,
                v_norm: point.v_norm,
                reason: ExclusionReason::NotCovered,
            }),
        }
    }
    if entries.is_empty() {
        return Err(ValidationError::EmptyOverlap);
    }
    let rms = (entries.iter().map(|e| e.residual * e.residual).sum::<f64>()
        / entries.len() as f64)
        .sqrt();
    Ok(ValidationReport {
        model_label: model_label.to_string(),
        dataset_name: dataset.name().to_string(),
        residuals: entries,
        rms,
        range_check_pass: range_check(dataset, DEFAULT_RANGE_LO, DEFAULT_RANGE_HI),
        excluded_points: excluded,
    })
}

// ---------------------------------------------------------------------------
// Export
// ---------------------------------------------------------------------------

/// Formats with 6 significant digits, `%g`-style: plain decimal for exponents
/// in [-4, 5], scientific otherwise, trailing zeros trimmed.
pub fn format_sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let formatted = format!("{:.5e}", x); // "d.dddddez"
    let (mantissa, exponent) = formatted
        .split_once('e')
        .expect("exponential format always contains 'e'");
    let exponent: i32 = exponent.parse().expect("exponent is an integer");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    debug_assert_eq!(digits.len(), 6);

    let body = if (-4..6).contains(&exponent) {
        let point = exponent + 1; // digits before the decimal point
        let mut s = String::new();
        if point <= 0 {
            s.push_str("0.");
            for _ in 0..-point {
                s.push('0');
            }
            s.push_str(&digits);
        } else if (point as usize) >= digits.len() {
            s.push_str(&digits);
            for _ in 0..(point as usize - digits.len()) {
                s.push('0');
            }
        } else {
            s.push_str(&digits[..point as usize]);
            s.push('.');
            s.push_str(&digits[point as usize..]);
        }
        trim_fraction(s)
    } else {
        let head = &digits[..1];
        let tail = trim_fraction(format!("0.{}", &digits[1..]));
        let tail = tail.strip_prefix("0.").unwrap_or("");
        if tail.is_empty() {
            format!("{head}e{exponent}")
        } else {
            format!("{head}.{tail}e{exponent}")
        }
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

fn trim_fraction(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let trimmed = s.trim_end_matches('0').trim_end_matches('.');
    trimmed.to_string()
}

/// Dataset as CSV in the loader's schema.
pub fn dataset_to_csv(dataset: &Dataset) -> String {
    let mut out = String::from("d_over_H,v_norm,reliable,source\n");
    for point in dataset.sorted_points() {
        out.push_str(&format!(
            "{},{},{},{}\n",
            format_sig6(point.d_over_h),
            format_sig6(point.v_norm),
            if point.reliable { 1 } else { 0 },
            point.source
        ));
    }
    out
}

/// Model curve as CSV; failed rows carry an error code instead of a value.
pub fn curve_to_csv(curve: &[CurvePoint]) -> String {
    let mut out = String::from("d_over_H,normalized_speed,status\n");
    for point in curve {
        match &point.normalized_speed {
            Ok(v) => out.push_str(&format!(
                "{},{},ok\n",
                format_sig6(point.d_over_h),
                format_sig6(*v)
            )),
            Err(e) => out.push_str(&format!(
                "{},,{}\n",
                format_sig6(point.d_over_h),
                wave_model_error_code(e)
            )),
        }
    }
    out
}

/// Validation report as CSV: one row per dataset point.
pub fn report_to_csv(report: &ValidationReport) -> String {
    let mut rows: Vec<(f64, String)> = Vec::new();
    for entry in &report.residuals {
        rows.push((
            entry.d_over_h,
            format!(
                "{},{},{},{},1,\n",
                format_sig6(entry.d_over_h),
                format_sig6(entry.measured),
                format_sig6(entry.model),
                format_sig6(entry.residual)
            ),
        ));
    }
    for excluded in &report.excluded_points {
        rows.push((
            excluded.d_over_h,
            format!(
                "{},{},,,0,{}\n",
                format_sig6(excluded.d_over_h),
                format_sig6(excluded.v_norm),
                excluded.reason.label()
            ),
        ));
    }
    rows.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out = String::from("d_over_H,measured,model,residual,included,note\n");
    for (_, row) in rows {
        out.push_str(&row);
    }
    out
}

/// Validation report as JSON, mirroring the report fields.
pub fn report_to_json(report: &ValidationReport) -> String {
    serde_json::to_string_pretty(report).expect("report serialization cannot fail")
}

fn wave_model_error_code(e: &WaveModelError) -> &'static str {
    match e {
        WaveModelError::NonFalling(_) => "non_falling",
        WaveModelError::NonPropagating(_) => "non_propagating",
        WaveModelError::Divergent => "divergent",
        WaveModelError::InvalidRestitution(_) => "invalid_restitution",
        WaveModelError::EmptyGrid => "empty_grid",
        WaveModelError::InsufficientData(_) => "insufficient_data",
        WaveModelError::Geometry(_) => "invalid_geometry",
    }
}

// ---------------------------------------------------------------------------
// SVG plot
// ---------------------------------------------------------------------------

const SVG_WIDTH: f64 = 640.0;
const SVG_HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 62.0;
const MARGIN_RIGHT: f64 = 18.0;
const MARGIN_TOP: f64 = 18.0;
const MARGIN_BOTTOM: f64 = 48.0;

/// Renders a scatter/line plot: the model curve as a line, the dataset's
/// measurements as markers (shape by orientation, hollow when unreliable).
pub fn render_svg(curve: &[(f64, f64)], dataset: Option<&Dataset>) -> String {
    let mut max_x: f64 = 1.0;
    let mut max_y: f64 = 2.0;
    for &(x, y) in curve {
        max_x = max_x.max(x * 1.05);
        max_y = max_y.max(y * 1.1);
    }
    if let Some(dataset) = dataset {
        for p in dataset.points() {
            max_x = max_x.max(p.d_over_h * 1.05);
            max_y = max_y.max(p.v_norm * 1.1);
        }
    }
    let plot_w = SVG_WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = SVG_HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let sx = |x: f64| MARGIN_LEFT + x / max_x * plot_w;
    let sy = |y: f64| MARGIN_TOP + (1.0 - y / max_y) * plot_h;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SVG_WIDTH}\" height=\"{SVG_HEIGHT}\" viewBox=\"0 0 {SVG_WIDTH} {SVG_HEIGHT}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    // Axes.
    svg.push_str(&format!(
        "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"black\"/>\n",
        MARGIN_LEFT,
        sy(0.0),
        SVG_WIDTH - MARGIN_RIGHT,
        sy(0.0)
    ));
    svg.push_str(&format!(
        "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"black\"/>\n",
        MARGIN_LEFT,
        MARGIN_TOP,
        MARGIN_LEFT,
        sy(0.0)
    ));
    // Ticks every 0.2 in x and 0.5 in y.
    let mut x = 0.0;
    while x <= max_x + 1e-9 {
        svg.push_str(&format!(
            "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"black\"/>\n",
            sx(x),
            sy(0.0),
            sx(x),
            sy(0.0) + 5.0
        ));
        svg.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n",
            sx(x),
            sy(0.0) + 19.0,
            format_sig6(x)
        ));
        x += 0.2;
    }
    let mut y = 0.0;
    while y <= max_y + 1e-9 {
        svg.push_str(&format!(
            "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" stroke=\"black\"/>\n",
            MARGIN_LEFT - 5.0,
            sy(y),
            MARGIN_LEFT,
            sy(y)
        ));
        svg.push_str(&format!(
            "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"12\" text-anchor=\"end\">{}</text>\n",
            MARGIN_LEFT - 8.0,
            sy(y) + 4.0,
            format_sig6(y)
        ));
        y += 0.5;
    }
    svg.push_str(&format!(
        "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"13\" text-anchor=\"middle\">d/H</text>\n",
        MARGIN_LEFT + plot_w / 2.0,
        SVG_HEIGHT - 8.0
    ));
    svg.push_str(&format!(
        "<text x=\"14\" y=\"{:.1}\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 14 {:.1})\">v / sqrt(gH)</text>\n",
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0
    ));

    // Model curve.
    if !curve.is_empty() {
        let points: Vec<String> = curve
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        svg.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"1.5\"/>\n",
            points.join(" ")
        ));
    }

    // Measurements.
    if let Some(dataset) = dataset {
        for p in dataset.points() {
            let (cx, cy) = (sx(p.d_over_h), sy(p.v_norm));
            let color = if p.reliable { "black" } else { "#999999" };
            match p.orientation {
                Orientation::Vertical => {
                    svg.push_str(&format!(
                        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"{}\" stroke-width=\"1.5\"/>\n",
                        cx - 5.0, cy, cx + 5.0, cy, color
                    ));
                    svg.push_str(&format!(
                        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"{}\" stroke-width=\"1.5\"/>\n",
                        cx, cy - 5.0, cx, cy + 5.0, color
                    ));
                }
                Orientation::Horizontal => {
                    svg.push_str(&format!(
                        "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"4.5\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"/>\n",
                        cx, cy, color
                    ));
                }
                Orientation::External => {
                    svg.push_str(&format!(
                        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"{}\" stroke-width=\"1.5\"/>\n",
                        cx - 4.0, cy - 4.0, cx + 4.0, cy + 4.0, color
                    ));
                    svg.push_str(&format!(
                        "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"{}\" stroke-width=\"1.5\"/>\n",
                        cx - 4.0, cy + 4.0, cx + 4.0, cy - 4.0, color
                    ));
                }
            }
        }
    }
    svg.push_str("</svg>\n");
    svg
}
