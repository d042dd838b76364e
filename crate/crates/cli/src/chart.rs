//! Minimal self-contained SVG line charts for table columns.
//!
//! One polyline per series, optional log-scale x axis, axis labels taken
//! from column names. Missing values break the line; isolated points are
//! drawn as markers. Output is deterministic.

use std::fmt::Write as _;
use std::path::Path;

use crate::table::{fmt_f64, Cell, Table};

const WIDTH: f64 = 880.0;
const HEIGHT: f64 = 560.0;
const MARGIN_LEFT: f64 = 78.0;
const MARGIN_RIGHT: f64 = 190.0;
const MARGIN_TOP: f64 = 32.0;
const MARGIN_BOTTOM: f64 = 64.0;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

/// A named series; `None` y-values mark gaps.
#[derive(Debug, Clone)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, Option<f64>)>,
}

#[derive(Debug, Clone)]
pub struct Chart {
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub series: Vec<Series>,
}

/// Builds a chart from table columns and writes it as SVG.
///
/// `x_column` supplies the abscissa; every entry of `y_columns` becomes one
/// series. I/O and missing-column errors carry the output path for context.
pub fn emit_chart(
    table: &Table,
    x_column: &str,
    y_columns: &[&str],
    log_x: bool,
    path: &Path,
) -> Result<(), String> {
    let chart = chart_from_table(table, x_column, y_columns, log_x)?;
    let svg = render_svg(&chart);
    std::fs::write(path, svg).map_err(|e| format!("writing chart {}: {e}", path.display()))
}

pub fn chart_from_table(
    table: &Table,
    x_column: &str,
    y_columns: &[&str],
    log_x: bool,
) -> Result<Chart, String> {
    let x_ix = table
        .column_index(x_column)
        .ok_or_else(|| format!("chart x column '{x_column}' not in table"))?;
    let mut series = Vec::new();
    for &name in y_columns {
        let y_ix = table
            .column_index(name)
            .ok_or_else(|| format!("chart y column '{name}' not in table"))?;
        let points = table
            .rows
            .iter()
            .filter_map(|row| numeric(&row[x_ix]).map(|x| (x, numeric(&row[y_ix]))))
            .collect();
        series.push(Series {
            name: name.to_string(),
            points,
        });
    }
    Ok(Chart {
        x_label: x_column.to_string(),
        y_label: y_columns.join(", "),
        log_x,
        series,
    })
}

fn numeric(cell: &Cell) -> Option<f64> {
    match cell {
        Cell::Float(v) if v.is_finite() => Some(*v),
        Cell::Int(v) => Some(*v as f64),
        _ => None,
    }
}

pub fn render_svg(chart: &Chart) -> String {
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;

    // Visible points, with log-x filtering of nonpositive abscissas.
    let xs: Vec<f64> = chart
        .series
        .iter()
        .flat_map(|s| s.points.iter())
        .filter(|(x, _)| !chart.log_x || *x > 0.0)
        .map(|(x, _)| if chart.log_x { x.log10() } else { *x })
        .collect();
    let ys: Vec<f64> = chart
        .series
        .iter()
        .flat_map(|s| s.points.iter())
        .filter(|(x, _)| !chart.log_x || *x > 0.0)
        .filter_map(|(_, y)| *y)
        .collect();

    let (x_min, x_max) = padded_range(&xs, 0.0);
    let (y_min, y_max) = padded_range(&ys, 0.05);
    let sx = move |x: f64| MARGIN_LEFT + (x - x_min) / (x_max - x_min) * plot_w;
    let sy = move |y: f64| MARGIN_TOP + plot_h - (y - y_min) / (y_max - y_min) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    let _ = writeln!(
        svg,
        "  <rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n  \
         <rect x=\"{MARGIN_LEFT}\" y=\"{MARGIN_TOP}\" width=\"{plot_w}\" height=\"{plot_h}\" \
         fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>"
    );

    // Axis ticks and grid.
    let x_ticks = if chart.log_x {
        decade_ticks(x_min, x_max)
    } else {
        nice_ticks(x_min, x_max)
    };
    for t in &x_ticks {
        let px = sx(*t);
        let label = if chart.log_x {
            fmt_f64(10f64.powf(*t))
        } else {
            fmt_f64(sig_round(*t))
        };
        let _ = writeln!(
            svg,
            "  <line x1=\"{px:.2}\" y1=\"{MARGIN_TOP}\" x2=\"{px:.2}\" y2=\"{:.2}\" \
             stroke=\"#dddddd\" stroke-width=\"1\"/>\n  \
             <line x1=\"{px:.2}\" y1=\"{:.2}\" x2=\"{px:.2}\" y2=\"{:.2}\" stroke=\"black\"/>\n  \
             <text x=\"{px:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-family=\"sans-serif\" \
             font-size=\"12\">{label}</text>",
            MARGIN_TOP + plot_h,
            MARGIN_TOP + plot_h,
            MARGIN_TOP + plot_h + 6.0,
            MARGIN_TOP + plot_h + 22.0,
        );
    }
    for t in &nice_ticks(y_min, y_max) {
        let py = sy(*t);
        let _ = writeln!(
            svg,
            "  <line x1=\"{MARGIN_LEFT}\" y1=\"{py:.2}\" x2=\"{:.2}\" y2=\"{py:.2}\" \
             stroke=\"#dddddd\" stroke-width=\"1\"/>\n  \
             <line x1=\"{:.2}\" y1=\"{py:.2}\" x2=\"{MARGIN_LEFT}\" y2=\"{py:.2}\" stroke=\"black\"/>\n  \
             <text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"end\" font-family=\"sans-serif\" \
             font-size=\"12\">{}</text>",
            MARGIN_LEFT + plot_w,
            MARGIN_LEFT - 6.0,
            MARGIN_LEFT - 10.0,
            py + 4.0,
            fmt_f64(sig_round(*t)),
        );
    }

    // Axis labels.
    let _ = writeln!(
        svg,
        "  <text x=\"{:.2}\" y=\"{:.2}\" text-anchor=\"middle\" font-family=\"sans-serif\" \
         font-size=\"14\">{}</text>",
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 16.0,
        xml_escape(&chart.x_label),
    );
    let _ = writeln!(
        svg,
        "  <text x=\"20\" y=\"{:.2}\" text-anchor=\"middle\" font-family=\"sans-serif\" \
         font-size=\"14\" transform=\"rotate(-90 20 {:.2})\">{}</text>",
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0,
        xml_escape(&chart.y_label),
    );

    // Series: polylines split at gaps; lone points become markers.
    for (s_ix, series) in chart.series.iter().enumerate() {
        let color = PALETTE[s_ix % PALETTE.len()];
        let mut segment: Vec<(f64, f64)> = Vec::new();
        let mut segments: Vec<Vec<(f64, f64)>> = Vec::new();
        for &(x, y) in &series.points {
            let visible = (!chart.log_x || x > 0.0) && y.is_some();
            if visible {
                let px = sx(if chart.log_x { x.log10() } else { x });
                let py = sy(y.expect("visible point has a value"));
                segment.push((px, py));
            } else if !segment.is_empty() {
                segments.push(std::mem::take(&mut segment));
            }
        }
        if !segment.is_empty() {
            segments.push(segment);
        }
        for seg in &segments {
            if seg.len() == 1 {
                let (px, py) = seg[0];
                let _ = writeln!(
                    svg,
                    "  <circle cx=\"{px:.2}\" cy=\"{py:.2}\" r=\"3.5\" fill=\"{color}\"/>"
                );
            } else {
                let pts: Vec<String> = seg
                    .iter()
                    .map(|(px, py)| format!("{px:.2},{py:.2}"))
                    .collect();
                let _ = writeln!(
                    svg,
                    "  <polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" \
                     stroke-width=\"1.6\"/>",
                    pts.join(" ")
                );
            }
        }

        // Legend entry.
        let ly = MARGIN_TOP + 14.0 + 20.0 * s_ix as f64;
        let lx = MARGIN_LEFT + plot_w + 14.0;
        let _ = writeln!(
            svg,
            "  <line x1=\"{lx:.2}\" y1=\"{ly:.2}\" x2=\"{:.2}\" y2=\"{ly:.2}\" \
             stroke=\"{color}\" stroke-width=\"2\"/>\n  \
             <text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>",
            lx + 26.0,
            lx + 32.0,
            ly + 4.0,
            xml_escape(&series.name),
        );
    }

    svg.push_str("</svg>\n");
    svg
}

/// Data range with relative padding; degenerate ranges are widened so the
/// scale transform stays finite.
fn padded_range(values: &[f64], pad: f64) -> (f64, f64) {
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for &v in values {
        min = min.min(v);
        max = max.max(v);
    }
    if !min.is_finite() || !max.is_finite() {
        return (0.0, 1.0);
    }
    if min == max {
        let w = min.abs().max(1.0) * 0.5;
        return (min - w, max + w);
    }
    let w = (max - min) * pad;
    (min - w, max + w)
}

/// Tick positions at 1/2/5 x 10^k spacing, five-ish per axis.
fn nice_ticks(min: f64, max: f64) -> Vec<f64> {
    let span = max - min;
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| span / s <= 6.0)
        .unwrap_or(10.0 * mag);
    let mut ticks = Vec::new();
    let mut t = (min / step).ceil() * step;
    while t <= max + 1e-9 * step {
        ticks.push(t);
        t += step;
    }
    ticks
}

/// Decade ticks for a log10-transformed axis, thinned when the span is wide.
fn decade_ticks(min: f64, max: f64) -> Vec<f64> {
    let lo = min.ceil() as i64;
    let hi = max.floor() as i64;
    let span = (hi - lo).max(0) as usize + 1;
    let stride = span.div_ceil(8).max(1) as i64;
    (lo..=hi)
        .step_by(stride as usize)
        .map(|d| d as f64)
        .collect()
}

/// Rounds tick labels so floating noise does not leak into them.
fn sig_round(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    format!("{x:.6e}").parse().expect("formatted float parses")
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
