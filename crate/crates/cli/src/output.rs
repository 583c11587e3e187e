//! CSV, JSON and SVG renderings of a sweep.

use std::fmt::Write as _;

use serde_json::json;
use sha2::{Digest, Sha256};

use sensor_relocation::experiments::{
    reference_curve, ExperimentSpec, FigureId, GroupRow, SweepSeries,
};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 30.0;
const MARGIN_TOP: f64 = 50.0;
const MARGIN_BOTTOM: f64 = 60.0;

fn spec_json(spec: &ExperimentSpec) -> String {
    serde_json::to_string(spec).expect("spec serializes")
}

/// Hex SHA-256 of the expanded spec.
pub fn config_hash(spec: &ExperimentSpec) -> String {
    Sha256::digest(spec_json(spec).as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

pub fn csv(series: &SweepSeries, figure: Option<FigureId>) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "# figure: {}",
        figure.map(|f| f.name()).unwrap_or("custom")
    )
    .unwrap();
    writeln!(out, "# spec: {}", spec_json(&series.spec)).unwrap();
    writeln!(out, "# config-hash: {}", config_hash(&series.spec)).unwrap();
    writeln!(out, "{}", GroupRow::CSV_HEADER).unwrap();
    for row in &series.groups {
        writeln!(out, "{}", row.to_csv()).unwrap();
    }
    out
}

pub fn json(series: &SweepSeries, figure: Option<FigureId>) -> String {
    let doc = json!({
        "figure": figure.map(|f| f.name()),
        "config_hash": config_hash(&series.spec),
        "spec": series.spec,
        "groups": series.groups,
        "fit": series.fit,
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("sweep serializes");
    text.push('\n');
    text
}

struct LogAxis {
    lo: f64,
    hi: f64,
    from: f64,
    to: f64,
}

impl LogAxis {
    fn new(values: impl Iterator<Item = f64>, from: f64, to: f64) -> Self {
        let (mut lo, mut hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        });
        if !lo.is_finite() {
            (lo, hi) = (1.0, 10.0);
        }
        if hi / lo < 1.5 {
            lo /= 1.5;
            hi *= 1.5;
        }
        Self {
            lo: lo.ln(),
            hi: hi.ln(),
            from,
            to,
        }
    }

    fn map(&self, v: f64) -> f64 {
        self.from + (v.ln() - self.lo) / (self.hi - self.lo) * (self.to - self.from)
    }

    /// Powers of ten inside the range, or the endpoints if there are none.
    fn ticks(&self) -> Vec<f64> {
        let first = (self.lo / 10f64.ln()).ceil() as i32;
        let last = (self.hi / 10f64.ln()).floor() as i32;
        let decades: Vec<f64> = (first..=last).map(|e| 10f64.powi(e)).collect();
        if decades.len() >= 2 {
            decades
        } else {
            vec![self.lo.exp(), self.hi.exp()]
        }
    }
}

fn tick_label(v: f64) -> String {
    if (1e-2..1e5).contains(&v) {
        let s = format!("{v:.2}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{v:.1e}")
    }
}

/// Overlay `(label, exponent, constant)`: the closed form when the figure
/// has one, the figure's growth class through the data otherwise, and the
/// fitted power law for custom runs.
fn overlay(
    series: &SweepSeries,
    figure: Option<FigureId>,
    points: &[(f64, f64)],
) -> Option<(String, f64, f64)> {
    match figure.map(reference_curve) {
        Some(curve) => match curve.constant {
            Some(c) => Some((curve.label.to_string(), curve.exponent, c)),
            None if !points.is_empty() => {
                let log_c = points
                    .iter()
                    .map(|(n, y)| y.ln() - curve.exponent * n.ln())
                    .sum::<f64>()
                    / points.len() as f64;
                Some((
                    format!("{} (slope {})", curve.label, curve.exponent),
                    curve.exponent,
                    log_c.exp(),
                ))
            }
            None => None,
        },
        None => series.fit.map(|f| {
            (
                format!("fit: {:.3} n^{:.3}", f.constant, f.exponent),
                f.exponent,
                f.constant,
            )
        }),
    }
}

pub fn svg(series: &SweepSeries, figure: Option<FigureId>) -> String {
    let points: Vec<(f64, f64)> = series
        .groups
        .iter()
        .map(|g| (g.n as f64, g.mean_robot_cost))
        .filter(|&(n, y)| n > 0.0 && y > 0.0)
        .collect();
    let line = overlay(series, figure, &points);
    let x_axis = LogAxis::new(
        points.iter().map(|p| p.0),
        MARGIN_LEFT,
        WIDTH - MARGIN_RIGHT,
    );
    let curve: Vec<(f64, f64)> = match &line {
        Some((_, p, c)) => (0..=60)
            .map(|i| {
                let n = (x_axis.lo + (x_axis.hi - x_axis.lo) * i as f64 / 60.0).exp();
                (n, c * n.powf(*p))
            })
            .collect(),
        None => Vec::new(),
    };
    let y_axis = LogAxis::new(
        points
            .iter()
            .chain(&curve)
            .map(|p| p.1)
            .filter(|y| *y > 0.0),
        HEIGHT - MARGIN_BOTTOM,
        MARGIN_TOP,
    );

    let title = match figure {
        Some(f) => format!("{}: {}", f.name(), reference_curve(f).label),
        None => "sensor relocation sweep".to_string(),
    };
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="800" height="600" viewBox="0 0 800 600">"#
    )
    .unwrap();
    writeln!(s, "<!-- config-hash: {} -->", config_hash(&series.spec)).unwrap();
    writeln!(
        s,
        "<!-- spec: {} -->",
        spec_json(&series.spec).replace("--", "- -")
    )
    .unwrap();
    writeln!(s, r#"<rect width="800" height="600" fill="white"/>"#).unwrap();
    writeln!(
        s,
        r#"<text x="400" y="28" text-anchor="middle" font-family="sans-serif" font-size="16">{}</text>"#,
        escape(&title)
    )
    .unwrap();

    let (x0, x1) = (MARGIN_LEFT, WIDTH - MARGIN_RIGHT);
    let (y0, y1) = (HEIGHT - MARGIN_BOTTOM, MARGIN_TOP);
    writeln!(
        s,
        r#"<path d="M{x0} {y1} L{x0} {y0} L{x1} {y0}" fill="none" stroke="black"/>"#
    )
    .unwrap();
    for t in x_axis.ticks() {
        let x = x_axis.map(t);
        writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{y0}" x2="{x:.2}" y2="{}" stroke="black"/><text x="{x:.2}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="12">{}</text>"#,
            y0 + 5.0,
            y0 + 20.0,
            tick_label(t)
        )
        .unwrap();
    }
    for t in y_axis.ticks() {
        let y = y_axis.map(t);
        writeln!(
            s,
            r#"<line x1="{}" y1="{y:.2}" x2="{x0}" y2="{y:.2}" stroke="black"/><text x="{}" y="{:.2}" text-anchor="end" font-family="sans-serif" font-size="12">{}</text>"#,
            x0 - 5.0,
            x0 - 8.0,
            y + 4.0,
            tick_label(t)
        )
        .unwrap();
    }
    writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="13">n (log scale)</text>"#,
        (x0 + x1) / 2.0,
        HEIGHT - 15.0
    )
    .unwrap();
    writeln!(
        s,
        r#"<text x="20" y="{}" text-anchor="middle" font-family="sans-serif" font-size="13" transform="rotate(-90 20 {})">mean robot cost (log scale)</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0
    )
    .unwrap();

    for (n, y) in &points {
        writeln!(
            s,
            r##"<circle cx="{:.2}" cy="{:.2}" r="3" fill="#1f77b4" fill-opacity="0.7"/>"##,
            x_axis.map(*n),
            y_axis.map(*y)
        )
        .unwrap();
    }
    if let Some((label, _, _)) = &line {
        let path: Vec<String> = curve
            .iter()
            .map(|(n, y)| format!("{:.2},{:.2}", x_axis.map(*n), y_axis.map(*y)))
            .collect();
        writeln!(
            s,
            r##"<polyline points="{}" fill="none" stroke="#d62728" stroke-width="2"/>"##,
            path.join(" ")
        )
        .unwrap();
        writeln!(
            s,
            r##"<text x="{}" y="{}" font-family="sans-serif" font-size="12" fill="#d62728">{}</text>"##,
            x0 + 15.0,
            y1 + 15.0,
            escape(label)
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use sensor_relocation::experiments::{sweep, FigureId};

    fn tiny(figure: FigureId) -> SweepSeries {
        let mut spec = figure.preset();
        spec.n_values = vec![16, 64, 144];
        spec.trials = 10;
        spec.group_size = 5;
        sweep(&spec).unwrap()
    }

    #[test]
    fn csv_has_spec_header_and_one_row_per_group() {
        let series = tiny(FigureId::Fig3);
        let text = csv(&series, Some(FigureId::Fig3));
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[1].starts_with("# spec: {"));
        assert_eq!(lines[3], GroupRow::CSV_HEADER);
        assert_eq!(lines.len(), 4 + 6);
        assert_eq!(text, csv(&tiny(FigureId::Fig3), Some(FigureId::Fig3)));
    }

    #[test]
    fn svg_is_fixed_size_and_tagged() {
        let series = tiny(FigureId::Fig9);
        let text = svg(&series, Some(FigureId::Fig9));
        assert!(text.contains(r#"width="800" height="600""#));
        assert!(text.contains(&format!(
            "<!-- config-hash: {} -->",
            config_hash(&series.spec)
        )));
        assert_eq!(text.matches("<circle").count(), 6);
        assert!(text.contains("<polyline"));
    }

    #[test]
    fn hash_tracks_the_spec() {
        let a = FigureId::Fig3.preset();
        let mut b = a.clone();
        b.master_seed += 1;
        assert_eq!(config_hash(&a).len(), 64);
        assert_ne!(config_hash(&a), config_hash(&b));
    }
}
