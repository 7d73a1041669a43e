//! Minimal self-contained SVG output: line charts for trajectories and
//! categorical heatmaps for regime sweeps.

use std::fmt::Write as _;

const W: f64 = 640.0;
const H: f64 = 420.0;
const LEFT: f64 = 60.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;
const MAX_POINTS: usize = 2000;

pub struct Series<'a> {
    pub label: &'a str,
    pub color: &'a str,
    pub dashed: bool,
    pub points: Vec<(f64, f64)>,
}

fn header(out: &mut String, title: &str) {
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#).unwrap();
    writeln!(out, r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#, W / 2.0, escape(title)).unwrap();
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn thin(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    if points.len() <= MAX_POINTS {
        return points.to_vec();
    }
    let step = points.len().div_ceil(MAX_POINTS);
    let mut v: Vec<_> = points.iter().step_by(step).copied().collect();
    if v.last() != points.last() {
        v.push(*points.last().unwrap());
    }
    v
}

fn axes(out: &mut String, x: (f64, f64), y: (f64, f64), x_label: &str, y_label: &str) {
    let (pw, ph) = (W - LEFT - RIGHT, H - TOP - BOTTOM);
    writeln!(out, r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#).unwrap();
    for k in 0..=4 {
        let f = k as f64 / 4.0;
        let px = LEFT + f * pw;
        let py = TOP + ph - f * ph;
        writeln!(
            out,
            r#"<text x="{px:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            TOP + ph + 16.0,
            tick(x.0 + f * (x.1 - x.0))
        )
        .unwrap();
        writeln!(out, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#, LEFT - 6.0, py + 4.0, tick(y.0 + f * (y.1 - y.0))).unwrap();
    }
    writeln!(out, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#, LEFT + pw / 2.0, H - 12.0, escape(x_label)).unwrap();
    writeln!(
        out,
        r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">{}</text>"#,
        TOP + ph / 2.0,
        TOP + ph / 2.0,
        escape(y_label)
    )
    .unwrap();
}

fn tick(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s.is_empty() || s == "-" {
        "0".into()
    } else {
        s.to_string()
    }
}

/// Line chart with the y axis fixed to `[0, 1]`.
pub fn line_chart(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let mut out = String::new();
    header(&mut out, title);
    let x_max = series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.0))
        .fold(0.0f64, f64::max)
        .max(1e-12);
    let x_min = series
        .iter()
        .flat_map(|s| s.points.iter().map(|p| p.0))
        .fold(f64::INFINITY, f64::min)
        .min(x_max);
    let x_min = if x_min.is_finite() { x_min } else { 0.0 };
    axes(&mut out, (x_min, x_max), (0.0, 1.0), x_label, y_label);
    let (pw, ph) = (W - LEFT - RIGHT, H - TOP - BOTTOM);
    let span = (x_max - x_min).max(1e-12);
    for (i, s) in series.iter().enumerate() {
        let mut d = String::new();
        for (k, (x, y)) in thin(&s.points).into_iter().enumerate() {
            let px = LEFT + (x - x_min) / span * pw;
            let py = TOP + ph - y.clamp(0.0, 1.0) * ph;
            write!(d, "{}{px:.2},{py:.2} ", if k == 0 { "M" } else { "L" }).unwrap();
        }
        let dash = if s.dashed { r#" stroke-dasharray="6 4""# } else { "" };
        writeln!(out, r#"<path d="{}" fill="none" stroke="{}" stroke-width="1.5"{dash}/>"#, d.trim_end(), s.color).unwrap();
        let ly = TOP + 14.0 + 18.0 * i as f64;
        let lx = W - RIGHT + 12.0;
        writeln!(out, r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{}" stroke-width="2"{dash}/>"#, lx + 20.0, s.color).unwrap();
        writeln!(out, r#"<text x="{}" y="{}">{}</text>"#, lx + 26.0, ly + 4.0, escape(s.label)).unwrap();
    }
    out.push_str("</svg>\n");
    out
}

/// Categorical heatmap. `cells[i][j]` is the category index (or `None`) of
/// the cell at x index `i` and y index `j`.
pub fn category_heatmap(
    title: &str,
    x: (&str, f64, f64),
    y: (&str, f64, f64),
    cells: &[Vec<Option<usize>>],
    legend: &[(&str, &str)],
) -> String {
    let mut out = String::new();
    header(&mut out, title);
    let nx = cells.len().max(1);
    let ny = cells.first().map_or(1, Vec::len).max(1);
    let (pw, ph) = (W - LEFT - RIGHT, H - TOP - BOTTOM);
    let (cw, ch) = (pw / nx as f64, ph / ny as f64);
    for (i, col) in cells.iter().enumerate() {
        for (j, c) in col.iter().enumerate() {
            let fill = c.and_then(|k| legend.get(k)).map_or("#dddddd", |l| l.1);
            writeln!(
                out,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{fill}"/>"#,
                LEFT + i as f64 * cw,
                TOP + ph - (j + 1) as f64 * ch,
                cw + 0.05,
                ch + 0.05
            )
            .unwrap();
        }
    }
    axes(&mut out, (x.1, x.2), (y.1, y.2), x.0, y.0);
    for (k, (label, color)) in legend.iter().enumerate() {
        let ly = TOP + 14.0 + 18.0 * k as f64;
        let lx = W - RIGHT + 12.0;
        writeln!(out, r#"<rect x="{lx}" y="{}" width="12" height="12" fill="{color}"/>"#, ly - 9.0).unwrap();
        writeln!(out, r#"<text x="{}" y="{}">{}</text>"#, lx + 18.0, ly + 2.0, escape(label)).unwrap();
    }
    out.push_str("</svg>\n");
    out
}
