//! Rendering: observed-vs-expected scatter plots with kappa isolines and
//! marginal box panels, and tabular summaries in text, CSV and JSON form.
//!
//! # Pixel mapping
//!
//! The scatter lives in a fixed 600x600 viewport with 60-unit margins, placed
//! at the bottom-left of a 720x720 document; the extra 120-unit gutter on the
//! top and right holds the marginal box panels. The unit square maps affinely
//! onto the 480x480 plot rectangle:
//!
//! ```text
//! x_px = 60 + 480 * p_expected
//! y_px = 720 - 60 - 480 * p_observed
//! ```
//!
//! so every rendered coordinate is checkable by hand. Output is plain SVG
//! with no scripts, styles or external assets, and rendering is a pure
//! function of its input: identical inputs give byte-identical documents.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::agreement::{AgreementSummary, Kappa};
use crate::display;
use crate::inference::{box_stats, interpret_kappa, kappa_isoline, BoxStats};

/// Document edge length in px.
const DOC: f64 = 720.0;
/// Scatter viewport edge length in px.
const VIEW: f64 = 600.0;
/// Margin inside the scatter viewport.
const MARGIN: f64 = 60.0;
/// Plot rectangle edge length.
const SPAN: f64 = VIEW - 2.0 * MARGIN;
/// Gutter above/right of the scatter viewport holding the box panels.
const PANEL: f64 = DOC - VIEW;

fn x_px(p_expected: f64) -> f64 {
    MARGIN + SPAN * p_expected
}

fn y_px(p_observed: f64) -> f64 {
    DOC - MARGIN - SPAN * p_observed
}

#[derive(Debug, Error, PartialEq)]
pub enum ReportError {
    #[error("point {index} ({x}, {y}) lies outside the unit square")]
    PointOutOfRange { index: usize, x: f64, y: f64 },
    #[error("isoline kappa {0} lies outside [0, 1]")]
    IsolineOutOfRange(f64),
    #[error("nothing to summarize")]
    EmptySummary,
}

/// One examiner (or examiner pair) as a point in the (expected, observed)
/// plane.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatterPoint {
    pub p_expected: f64,
    pub p_observed: f64,
    pub label: String,
}

/// Everything needed to draw one diagnostic scatter.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatterSpec {
    pub title: String,
    pub points: Vec<ScatterPoint>,
    /// Kappa values whose constant-kappa lines to draw.
    pub isolines: Vec<f64>,
}

impl ScatterSpec {
    /// The default reference lines: chance agreement and the 0.8 adequacy
    /// threshold.
    pub fn default_isolines() -> Vec<f64> {
        vec![0.0, 0.8]
    }

    pub fn validate(&self) -> Result<(), ReportError> {
        for (index, p) in self.points.iter().enumerate() {
            let inside = |v: f64| (0.0..=1.0).contains(&v) && v.is_finite();
            if !inside(p.p_expected) || !inside(p.p_observed) {
                return Err(ReportError::PointOutOfRange {
                    index,
                    x: p.p_expected,
                    y: p.p_observed,
                });
            }
        }
        for &k in &self.isolines {
            if !k.is_finite() || !(0.0..=1.0).contains(&k) {
                return Err(ReportError::IsolineOutOfRange(k));
            }
        }
        Ok(())
    }
}

fn fmt_px(v: f64) -> String {
    format!("{v:.2}")
}

fn escape_xml(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

/// Renders the scatter as a standalone SVG document.
///
/// Each point becomes one `circle.point` (with its label as a tooltip), each
/// isoline one `line.isoline` between its endpoints at `p_expected` 0 and 1,
/// and the marginal distributions of both coordinates become box-and-whisker
/// panels (expected on top, observed on the right).
pub fn scatter_plot(spec: &ScatterSpec) -> Result<String, ReportError> {
    spec.validate()?;

    let mut svg = String::new();
    svg.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{DOC}\" height=\"{DOC}\" viewBox=\"0 0 {DOC} {DOC}\">"
    );
    let _ = writeln!(svg, "<title>{}</title>", escape_xml(&spec.title));
    let _ = writeln!(
        svg,
        "<text x=\"{}\" y=\"24\" font-size=\"16\" text-anchor=\"middle\" font-family=\"sans-serif\">{}</text>",
        fmt_px(VIEW / 2.0),
        escape_xml(&spec.title)
    );

    // Plot frame and axes.
    let _ = writeln!(
        svg,
        "<rect x=\"{}\" y=\"{}\" width=\"{SPAN}\" height=\"{SPAN}\" fill=\"white\" stroke=\"black\" stroke-width=\"1\"/>",
        fmt_px(x_px(0.0)),
        fmt_px(y_px(1.0)),
    );
    for i in 0..=4 {
        let v = i as f64 / 4.0;
        let tick = format!("{v:.2}");
        // X axis tick and label.
        let _ = writeln!(
            svg,
            "<line x1=\"{x}\" y1=\"{y0}\" x2=\"{x}\" y2=\"{y1}\" stroke=\"black\" stroke-width=\"1\"/>",
            x = fmt_px(x_px(v)),
            y0 = fmt_px(y_px(0.0)),
            y1 = fmt_px(y_px(0.0) + 6.0),
        );
        let _ = writeln!(
            svg,
            "<text x=\"{x}\" y=\"{y}\" font-size=\"11\" text-anchor=\"middle\" font-family=\"sans-serif\">{tick}</text>",
            x = fmt_px(x_px(v)),
            y = fmt_px(y_px(0.0) + 20.0),
        );
        // Y axis tick and label.
        let _ = writeln!(
            svg,
            "<line x1=\"{x0}\" y1=\"{y}\" x2=\"{x1}\" y2=\"{y}\" stroke=\"black\" stroke-width=\"1\"/>",
            x0 = fmt_px(x_px(0.0) - 6.0),
            x1 = fmt_px(x_px(0.0)),
            y = fmt_px(y_px(v)),
        );
        let _ = writeln!(
            svg,
            "<text x=\"{x}\" y=\"{y}\" font-size=\"11\" text-anchor=\"end\" font-family=\"sans-serif\">{tick}</text>",
            x = fmt_px(x_px(0.0) - 10.0),
            y = fmt_px(y_px(v) + 4.0),
        );
    }
    let _ = writeln!(
        svg,
        "<text x=\"{x}\" y=\"{y}\" font-size=\"13\" text-anchor=\"middle\" font-family=\"sans-serif\">expected agreement</text>",
        x = fmt_px(x_px(0.5)),
        y = fmt_px(y_px(0.0) + 42.0),
    );
    let _ = writeln!(
        svg,
        "<text x=\"{x}\" y=\"{y}\" font-size=\"13\" text-anchor=\"middle\" font-family=\"sans-serif\" transform=\"rotate(-90 {x} {y})\">observed agreement</text>",
        x = fmt_px(x_px(0.0) - 40.0),
        y = fmt_px(y_px(0.5)),
    );

    // Constant-kappa reference lines, endpoints at p_expected 0 and 1.
    for &kappa in &spec.isolines {
        let (y0, y1) = (kappa_isoline(kappa, 0.0), kappa_isoline(kappa, 1.0));
        let _ = writeln!(
            svg,
            "<line class=\"isoline\" x1=\"{x0}\" y1=\"{ya}\" x2=\"{x1}\" y2=\"{yb}\" stroke=\"#777777\" stroke-width=\"1\" stroke-dasharray=\"6,3\"/>",
            x0 = fmt_px(x_px(0.0)),
            ya = fmt_px(y_px(y0)),
            x1 = fmt_px(x_px(1.0)),
            yb = fmt_px(y_px(y1)),
        );
        let _ = writeln!(
            svg,
            "<text x=\"{x}\" y=\"{y}\" font-size=\"11\" font-family=\"sans-serif\" fill=\"#777777\">κ={label}</text>",
            x = fmt_px(x_px(0.0) + 4.0),
            y = fmt_px(y_px(y0) - 4.0),
            label = display::fixed(kappa, 2),
        );
    }

    // The points themselves.
    for point in &spec.points {
        let _ = writeln!(
            svg,
            "<circle class=\"point\" cx=\"{cx}\" cy=\"{cy}\" r=\"3\" fill=\"#1f77b4\" fill-opacity=\"0.75\"><title>{label}</title></circle>",
            cx = fmt_px(x_px(point.p_expected)),
            cy = fmt_px(y_px(point.p_observed)),
            label = escape_xml(&point.label),
        );
    }

    // Marginal box panels.
    if !spec.points.is_empty() {
        let expected: Vec<f64> = spec.points.iter().map(|p| p.p_expected).collect();
        let observed: Vec<f64> = spec.points.iter().map(|p| p.p_observed).collect();
        let expected_stats = box_stats(&expected).expect("validated nonempty points");
        let observed_stats = box_stats(&observed).expect("validated nonempty points");
        horizontal_box_panel(&mut svg, &expected_stats);
        vertical_box_panel(&mut svg, &observed_stats);
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Box panel for the expected-agreement marginal, drawn in the top gutter on
/// the x scale.
fn horizontal_box_panel(svg: &mut String, stats: &BoxStats) {
    let center = PANEL / 2.0 + 10.0;
    let half = 15.0;
    let g = |v: f64| fmt_px(x_px(v));
    let _ = writeln!(svg, "<g class=\"box-expected\">");
    let _ = writeln!(
        svg,
        "<line x1=\"{}\" y1=\"{c}\" x2=\"{}\" y2=\"{c}\" stroke=\"black\" stroke-width=\"1\"/>",
        g(stats.lower_whisker),
        g(stats.q1),
        c = fmt_px(center),
    );
    let _ = writeln!(
        svg,
        "<line x1=\"{}\" y1=\"{c}\" x2=\"{}\" y2=\"{c}\" stroke=\"black\" stroke-width=\"1\"/>",
        g(stats.q3),
        g(stats.upper_whisker),
        c = fmt_px(center),
    );
    for cap in [stats.lower_whisker, stats.upper_whisker] {
        let _ = writeln!(
            svg,
            "<line x1=\"{x}\" y1=\"{}\" x2=\"{x}\" y2=\"{}\" stroke=\"black\" stroke-width=\"1\"/>",
            fmt_px(center - half / 2.0),
            fmt_px(center + half / 2.0),
            x = g(cap),
        );
    }
    let _ = writeln!(
        svg,
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"white\" stroke=\"black\" stroke-width=\"1\"/>",
        g(stats.q1),
        fmt_px(center - half),
        fmt_px((stats.q3 - stats.q1) * SPAN),
        fmt_px(2.0 * half),
    );
    let _ = writeln!(
        svg,
        "<line x1=\"{x}\" y1=\"{}\" x2=\"{x}\" y2=\"{}\" stroke=\"black\" stroke-width=\"2\"/>",
        fmt_px(center - half),
        fmt_px(center + half),
        x = g(stats.median),
    );
    for outlier in &stats.outliers {
        let _ = writeln!(
            svg,
            "<circle class=\"outlier\" cx=\"{}\" cy=\"{}\" r=\"2.5\" fill=\"none\" stroke=\"black\"/>",
            g(*outlier),
            fmt_px(center),
        );
    }
    let _ = writeln!(svg, "</g>");
}

/// Box panel for the observed-agreement marginal, drawn in the right gutter
/// on the y scale.
fn vertical_box_panel(svg: &mut String, stats: &BoxStats) {
    let center = VIEW + PANEL / 2.0 - 10.0;
    let half = 15.0;
    let g = |v: f64| fmt_px(y_px(v));
    let _ = writeln!(svg, "<g class=\"box-observed\">");
    let _ = writeln!(
        svg,
        "<line x1=\"{c}\" y1=\"{}\" x2=\"{c}\" y2=\"{}\" stroke=\"black\" stroke-width=\"1\"/>",
        g(stats.lower_whisker),
        g(stats.q1),
        c = fmt_px(center),
    );
    let _ = writeln!(
        svg,
        "<line x1=\"{c}\" y1=\"{}\" x2=\"{c}\" y2=\"{}\" stroke=\"black\" stroke-width=\"1\"/>",
        g(stats.q3),
        g(stats.upper_whisker),
        c = fmt_px(center),
    );
    for cap in [stats.lower_whisker, stats.upper_whisker] {
        let _ = writeln!(
            svg,
            "<line x1=\"{}\" y1=\"{y}\" x2=\"{}\" y2=\"{y}\" stroke=\"black\" stroke-width=\"1\"/>",
            fmt_px(center - half / 2.0),
            fmt_px(center + half / 2.0),
            y = g(cap),
        );
    }
    let _ = writeln!(
        svg,
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"white\" stroke=\"black\" stroke-width=\"1\"/>",
        fmt_px(center - half),
        g(stats.q3),
        fmt_px(2.0 * half),
        fmt_px((stats.q3 - stats.q1) * SPAN),
    );
    let _ = writeln!(
        svg,
        "<line x1=\"{}\" y1=\"{y}\" x2=\"{}\" y2=\"{y}\" stroke=\"black\" stroke-width=\"2\"/>",
        fmt_px(center - half),
        fmt_px(center + half),
        y = g(stats.median),
    );
    for outlier in &stats.outliers {
        let _ = writeln!(
            svg,
            "<circle class=\"outlier\" cx=\"{}\" cy=\"{}\" r=\"2.5\" fill=\"none\" stroke=\"black\"/>",
            fmt_px(center),
            g(*outlier),
        );
    }
    let _ = writeln!(svg, "</g>");
}

/// Output shape for [`render_summary`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SummaryFormat {
    Text,
    Csv,
    Json,
}

/// One analyzed table: who, under which stratification, scored what.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    /// Examiner id, `a|b` pair, or `ALL` for a pooled table.
    pub subject: String,
    pub stratum: String,
    pub material: String,
    pub scheme: String,
    pub summary: AgreementSummary,
}

/// Fixed column order of the CSV summary format.
pub const SUMMARY_CSV_HEADER: &str =
    "subject,stratum,material,scheme,n,p_observed,p_expected,kappa,band";

fn band_label(kappa: &Kappa) -> String {
    match interpret_kappa(kappa) {
        Ok(band) => band.label().to_string(),
        Err(_) => "n/a (degenerate)".to_string(),
    }
}

/// Renders summaries grouped by (material, stratum, scheme), each group
/// followed by an unweighted `AVERAGE` row over its subjects.
///
/// Pooled `ALL` rows are listed but never averaged in. Percentages in the
/// text format are shown at `decimals` places; CSV and JSON carry raw
/// full-precision proportions for machine use.
pub fn render_summary(
    rows: &[SummaryRow],
    format: SummaryFormat,
    decimals: u32,
) -> Result<String, ReportError> {
    if rows.is_empty() {
        return Err(ReportError::EmptySummary);
    }

    // Group deterministically; ALL sorts ahead of subjects within a group.
    let mut groups: BTreeMap<(String, String, String), Vec<&SummaryRow>> = BTreeMap::new();
    for row in rows {
        groups
            .entry((row.material.clone(), row.stratum.clone(), row.scheme.clone()))
            .or_default()
            .push(row);
    }
    for group in groups.values_mut() {
        group.sort_by_key(|r| (r.subject != "ALL", r.subject.clone()));
    }

    struct OutRow {
        subject: String,
        stratum: String,
        material: String,
        scheme: String,
        n: u64,
        p_observed: f64,
        p_expected: f64,
        kappa: Kappa,
    }

    let mut out_rows: Vec<OutRow> = Vec::new();
    for ((material, stratum, scheme), group) in &groups {
        for row in group {
            out_rows.push(OutRow {
                subject: row.subject.clone(),
                stratum: stratum.clone(),
                material: material.clone(),
                scheme: scheme.clone(),
                n: row.summary.n,
                p_observed: row.summary.p_observed,
                p_expected: row.summary.p_expected,
                kappa: row.summary.kappa,
            });
        }
        let subjects: Vec<&&SummaryRow> =
            group.iter().filter(|r| r.subject != "ALL").collect();
        if !subjects.is_empty() {
            let m = subjects.len() as f64;
            let p_observed = subjects.iter().map(|r| r.summary.p_observed).sum::<f64>() / m;
            let p_expected = subjects.iter().map(|r| r.summary.p_expected).sum::<f64>() / m;
            let kappas: Vec<f64> = subjects
                .iter()
                .filter_map(|r| r.summary.kappa.value())
                .collect();
            let kappa = if kappas.is_empty() {
                Kappa::Degenerate
            } else {
                Kappa::Value(kappas.iter().sum::<f64>() / kappas.len() as f64)
            };
            out_rows.push(OutRow {
                subject: "AVERAGE".to_string(),
                stratum: stratum.clone(),
                material: material.clone(),
                scheme: scheme.clone(),
                n: subjects.iter().map(|r| r.summary.n).sum(),
                p_observed,
                p_expected,
                kappa,
            });
        }
    }

    let mut out = String::new();
    match format {
        SummaryFormat::Csv => {
            out.push_str(SUMMARY_CSV_HEADER);
            out.push('\n');
            for r in &out_rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{}",
                    r.subject,
                    r.stratum,
                    r.material,
                    r.scheme,
                    r.n,
                    r.p_observed,
                    r.p_expected,
                    r.kappa,
                    band_label(&r.kappa),
                );
            }
        }
        SummaryFormat::Text => {
            let mut last_group = None;
            for r in &out_rows {
                let group = (r.material.clone(), r.stratum.clone(), r.scheme.clone());
                if last_group.as_ref() != Some(&group) {
                    if last_group.is_some() {
                        out.push('\n');
                    }
                    let _ = writeln!(
                        out,
                        "material={} stratum={} scheme={}",
                        r.material, r.stratum, r.scheme
                    );
                    last_group = Some(group);
                }
                let kappa = match &r.kappa {
                    Kappa::Value(v) => display::fixed(*v, 4),
                    Kappa::Degenerate => "n/a".to_string(),
                };
                let _ = writeln!(
                    out,
                    "  {:<12} n={:<6} observed={:<8} expected={:<8} kappa={:<7} band={}",
                    r.subject,
                    r.n,
                    display::percent(r.p_observed, decimals),
                    display::percent(r.p_expected, decimals),
                    kappa,
                    band_label(&r.kappa),
                );
            }
        }
        SummaryFormat::Json => {
            out.push_str("[\n");
            for (i, r) in out_rows.iter().enumerate() {
                let kappa = match &r.kappa {
                    Kappa::Value(v) => format!("{v}"),
                    Kappa::Degenerate => "null".to_string(),
                };
                let _ = write!(
                    out,
                    "  {{\"subject\": \"{}\", \"stratum\": \"{}\", \"material\": \"{}\", \"scheme\": \"{}\", \"n\": {}, \"p_observed\": {}, \"p_expected\": {}, \"kappa\": {}, \"band\": \"{}\"}}",
                    escape_json(&r.subject),
                    escape_json(&r.stratum),
                    escape_json(&r.material),
                    escape_json(&r.scheme),
                    r.n,
                    r.p_observed,
                    r.p_expected,
                    kappa,
                    escape_json(&band_label(&r.kappa)),
                );
                out.push_str(if i + 1 < out_rows.len() { ",\n" } else { "\n" });
            }
            out.push_str("]\n");
        }
    }
    Ok(out)
}

fn escape_json(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            _ => out.push(c),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agreement::AgreementTable;
    use crate::categories::CategoryScheme;

    fn spec_with(points: Vec<ScatterPoint>, isolines: Vec<f64>) -> ScatterSpec {
        ScatterSpec {
            title: "scatter".to_string(),
            points,
            isolines,
        }
    }

    fn point(p_expected: f64, p_observed: f64) -> ScatterPoint {
        ScatterPoint {
            p_expected,
            p_observed,
            label: format!("({p_expected}, {p_observed})"),
        }
    }

    #[test]
    fn validation_rejects_out_of_range_input() {
        let bad = spec_with(vec![point(1.2, 0.5)], vec![]);
        assert!(matches!(
            bad.validate(),
            Err(ReportError::PointOutOfRange { index: 0, .. })
        ));
        let bad = spec_with(vec![], vec![-0.1]);
        assert_eq!(bad.validate(), Err(ReportError::IsolineOutOfRange(-0.1)));
    }

    #[test]
    fn rendering_is_deterministic() {
        let spec = spec_with(vec![point(0.3, 0.7), point(0.5, 0.5)], vec![0.0, 0.8]);
        assert_eq!(scatter_plot(&spec).unwrap(), scatter_plot(&spec).unwrap());
    }

    #[test]
    fn every_point_and_isoline_is_rendered_once() {
        let spec = spec_with(
            vec![point(0.1, 0.2), point(0.3, 0.4), point(0.5, 0.6)],
            vec![0.0, 0.5, 0.8],
        );
        let svg = scatter_plot(&spec).unwrap();
        assert_eq!(svg.matches("class=\"point\"").count(), 3);
        assert_eq!(svg.matches("class=\"isoline\"").count(), 3);
    }

    #[test]
    fn chance_line_passes_through_a_chance_point() {
        // A point with equal observed and expected agreement sits exactly on
        // the kappa = 0 line.
        let spec = spec_with(vec![point(0.5, 0.5)], vec![0.0]);
        let svg = scatter_plot(&spec).unwrap();
        let cx = fmt_px(x_px(0.5));
        let cy = fmt_px(y_px(0.5));
        assert!(svg.contains(&format!("cx=\"{cx}\" cy=\"{cy}\"")));
        // The kappa = 0 line runs corner to corner; its midpoint is the point.
        let y0 = fmt_px(y_px(0.0));
        let y1 = fmt_px(y_px(1.0));
        let x0 = fmt_px(x_px(0.0));
        let x1 = fmt_px(x_px(1.0));
        assert!(svg.contains(&format!(
            "x1=\"{x0}\" y1=\"{y0}\" x2=\"{x1}\" y2=\"{y1}\""
        )));
    }

    #[test]
    fn isoline_endpoints_follow_the_line_equation() {
        let spec = spec_with(vec![], vec![0.8]);
        let svg = scatter_plot(&spec).unwrap();
        // Endpoints (0, 0.8) and (1, 1).
        assert!(svg.contains(&format!(
            "x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"",
            fmt_px(x_px(0.0)),
            fmt_px(y_px(0.8)),
            fmt_px(x_px(1.0)),
            fmt_px(y_px(1.0)),
        )));
    }

    #[test]
    fn svg_references_no_external_resources() {
        let spec = spec_with(vec![point(0.2, 0.9)], vec![0.0, 0.8]);
        let svg = scatter_plot(&spec).unwrap();
        assert!(!svg.contains("href"));
        assert!(!svg.contains("<image"));
        assert!(!svg.contains("url("));
        assert!(!svg.contains("<script"));
    }

    #[test]
    fn svg_is_well_formed() {
        let spec = spec_with(
            vec![point(0.1, 0.9), point(0.4, 0.4), point(0.9, 0.95)],
            vec![0.0, 0.8],
        );
        let svg = scatter_plot(&spec).unwrap();
        assert_well_formed_xml(&svg);
    }

    #[test]
    fn labels_are_escaped() {
        let spec = spec_with(
            vec![ScatterPoint {
                p_expected: 0.5,
                p_observed: 0.5,
                label: "a<b&c>\"d\"".to_string(),
            }],
            vec![],
        );
        let svg = scatter_plot(&spec).unwrap();
        assert!(svg.contains("a&lt;b&amp;c&gt;&quot;d&quot;"));
        assert_well_formed_xml(&svg);
    }

    /// Minimal well-formedness check: declaration, balanced tags, quoted
    /// attributes. Enough for the restricted element set emitted here.
    fn assert_well_formed_xml(doc: &str) {
        let doc = doc
            .strip_prefix("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n")
            .expect("xml declaration");
        let mut stack: Vec<String> = Vec::new();
        let mut rest = doc;
        while let Some(start) = rest.find('<') {
            let text = &rest[..start];
            assert!(!text.contains('<') && !text.contains('>'), "stray bracket");
            let end = rest[start..].find('>').expect("unclosed tag") + start;
            let tag = &rest[start + 1..end];
            if let Some(name) = tag.strip_prefix('/') {
                assert_eq!(stack.pop().as_deref(), Some(name), "mismatched close");
            } else if !tag.ends_with('/') {
                let name: String = tag
                    .chars()
                    .take_while(|c| !c.is_whitespace())
                    .collect();
                // Attribute values must be quoted: even number of quotes.
                assert_eq!(tag.matches('"').count() % 2, 0, "unbalanced quotes");
                stack.push(name);
            }
            rest = &rest[end + 1..];
        }
        assert!(stack.is_empty(), "unclosed elements: {stack:?}");
    }

    fn summary_row(subject: &str, counts: &[Vec<i64>]) -> SummaryRow {
        let scheme = CategoryScheme::new(["x", "y"]).unwrap();
        let table = AgreementTable::from_counts(counts, scheme).unwrap();
        SummaryRow {
            subject: subject.to_string(),
            stratum: "matching".to_string(),
            material: "bullet".to_string(),
            scheme: "full".to_string(),
            summary: table.summarize(),
        }
    }

    #[test]
    fn summary_averages_subjects_only() {
        let rows = vec![
            summary_row("ALL", &[vec![7, 3], vec![3, 7]]),
            summary_row("E1", &[vec![3, 2], vec![0, 5]]),  // P_o = 0.8
            summary_row("E2", &[vec![3, 2], vec![2, 3]]),  // P_o = 0.6
        ];
        let csv = render_summary(&rows, SummaryFormat::Csv, 1).unwrap();
        let average = csv
            .lines()
            .find(|l| l.starts_with("AVERAGE"))
            .expect("averages row");
        let fields: Vec<&str> = average.split(',').collect();
        assert!((fields[5].parse::<f64>().unwrap() - 0.7).abs() < 1e-12);
        // ALL is shown first but not averaged in.
        assert!(csv.lines().nth(1).unwrap().starts_with("ALL"));
    }

    #[test]
    fn text_summary_shows_percentages_at_requested_decimals() {
        let rows = vec![summary_row("ALL", &[vec![758, 101], vec![101, 0]])];
        let text = render_summary(&rows, SummaryFormat::Text, 1).unwrap();
        // 758 of 960 on the diagonal reads 79.0% at one decimal.
        assert!(text.contains("79.0%"), "{text}");
        assert!(text.contains("material=bullet stratum=matching scheme=full"));
    }

    #[test]
    fn degenerate_kappa_is_marked() {
        let rows = vec![summary_row("E9", &[vec![5, 0], vec![0, 0]])];
        let csv = render_summary(&rows, SummaryFormat::Csv, 1).unwrap();
        assert!(csv.contains("degenerate,n/a (degenerate)"));
        let json = render_summary(&rows, SummaryFormat::Json, 1).unwrap();
        assert!(json.contains("\"kappa\": null"));
    }

    #[test]
    fn empty_summary_is_an_error() {
        assert_eq!(
            render_summary(&[], SummaryFormat::Text, 1),
            Err(ReportError::EmptySummary)
        );
    }
}
