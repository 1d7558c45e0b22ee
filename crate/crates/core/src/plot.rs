//! SVG scatter of monogamy records against the saturation line.
//!
//! Output is plain text with fixed-precision coordinates, so identical
//! inputs give byte-identical files.

use std::fmt::Write;

use crate::monogamy::MonogamyRecord;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 520.0;
const LEFT: f64 = 90.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 70.0;
const TICKS: usize = 5;

const POINT_COLOR: &str = "#2ca02c";
const LINE_COLOR: &str = "#1f77b4";

/// `(x, y) = (N²(A|BC), N²(A|B) + N²(A|C))`.
pub fn monogamy_points(records: &[MonogamyRecord]) -> Vec<(f64, f64)> {
    records
        .iter()
        .map(|r| (r.n_abc_sq, r.n_ab_sq + r.n_ac_sq))
        .collect()
}

/// Smallest of `{1, 2, 2.5, 5} · 10^k` that is ≥ `v`.
fn nice_ceil(v: f64) -> f64 {
    if !(v > 0.0) {
        return 1.0;
    }
    let e = 10f64.powf(v.log10().floor());
    [1.0, 2.0, 2.5, 5.0, 10.0]
        .iter()
        .map(|f| f * e)
        .find(|&x| x >= v * (1.0 - 1e-12))
        .unwrap_or(10.0 * e)
}

fn tick_label(x: f64) -> String {
    let s = format!("{x:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s.is_empty() || s == "-0" {
        "0".into()
    } else {
        s.to_string()
    }
}

pub fn monogamy_svg(records: &[MonogamyRecord]) -> String {
    scatter_svg(&monogamy_points(records), "N²(A|BC)", "N²(A|B) + N²(A|C)")
}

/// Scatter on a square data range `[0, R]²` with the diagonal `y = x`.
/// `R` defaults to 0.25 for an empty input.
pub fn scatter_svg(points: &[(f64, f64)], x_label: &str, y_label: &str) -> String {
    let max = points
        .iter()
        .flat_map(|&(x, y)| [x, y])
        .filter(|v| v.is_finite())
        .fold(0.0f64, f64::max);
    let range = nice_ceil(if points.is_empty() || max == 0.0 {
        0.25
    } else {
        max
    });
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + x / range * plot_w;
    let sy = |y: f64| TOP + plot_h - y / range * plot_h;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<g id="axes" stroke="black" stroke-width="1"><line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/><line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/></g>"#,
        sx(0.0),
        sy(0.0),
        sx(range),
        sy(0.0),
        sx(0.0),
        sy(0.0),
        sx(0.0),
        sy(range)
    );
    let _ = writeln!(
        s,
        r#"<g id="ticks" font-family="sans-serif" font-size="12" fill="black">"#
    );
    for k in 0..=TICKS {
        let v = range * k as f64 / TICKS as f64;
        let label = tick_label(v);
        let _ = writeln!(
            s,
            r#"<line x1="{x:.2}" y1="{y0:.2}" x2="{x:.2}" y2="{y1:.2}" stroke="black"/><text x="{x:.2}" y="{ty:.2}" text-anchor="middle">{label}</text>"#,
            x = sx(v),
            y0 = sy(0.0),
            y1 = sy(0.0) + 5.0,
            ty = sy(0.0) + 20.0,
        );
        let _ = writeln!(
            s,
            r#"<line x1="{x0:.2}" y1="{y:.2}" x2="{x1:.2}" y2="{y:.2}" stroke="black"/><text x="{tx:.2}" y="{ty:.2}" text-anchor="end">{label}</text>"#,
            x0 = sx(0.0) - 5.0,
            x1 = sx(0.0),
            y = sy(v),
            tx = sx(0.0) - 8.0,
            ty = sy(v) + 4.0,
        );
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(
        s,
        r#"<text id="x-label" x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#,
        LEFT + plot_w / 2.0,
        HEIGHT - 20.0,
        escape(x_label)
    );
    let _ = writeln!(
        s,
        r#"<text id="y-label" x="{x:.2}" y="{y:.2}" font-family="sans-serif" font-size="14" text-anchor="middle" transform="rotate(-90 {x:.2} {y:.2})">{label}</text>"#,
        x = 25.0,
        y = TOP + plot_h / 2.0,
        label = escape(y_label)
    );
    let _ = writeln!(
        s,
        r#"<line id="saturation" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{LINE_COLOR}" stroke-width="1.5"/>"#,
        sx(0.0),
        sy(0.0),
        sx(range),
        sy(range)
    );
    let _ = writeln!(
        s,
        r#"<g id="points" fill="{POINT_COLOR}" fill-opacity="0.7">"#
    );
    for &(x, y) in points
        .iter()
        .filter(|(x, y)| x.is_finite() && y.is_finite())
    {
        let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="2"/>"#, sx(x), sy(y));
    }
    let _ = writeln!(s, "</g>");
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
