//! Hand-written SVG line plots of `ψ(n)`.

use std::fmt::Write;

use crate::render::fmt_f64;

const W: f64 = 800.0;
const H: f64 = 480.0;
const LEFT: f64 = 90.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const MAX_POINTS: usize = 4000;

#[derive(Clone, Debug)]
pub struct Marker {
    pub n: f64,
    pub value: f64,
    pub label: String,
    pub color: &'static str,
}

fn nice_ticks(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let span = (hi - lo).max(f64::MIN_POSITIVE);
    let raw = span / count as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|s| span / s <= count as f64).unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() * step;
    (0..)
        .map(|i| first + i as f64 * step)
        .take_while(|t| *t <= hi + 1e-9 * step)
        .collect()
}

fn tick_label(t: f64) -> String {
    let s = format!("{t:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

/// Render `(n, ψ(n))` as a polyline with markers. Long series are thinned to
/// at most a few thousand vertices; markers are always drawn exactly.
pub fn line_plot(title: &str, ns: &[f64], values: &[f64], markers: &[Marker]) -> String {
    let (x0, x1) = (ns.first().copied().unwrap_or(0.0), ns.last().copied().unwrap_or(1.0).max(ns.first().copied().unwrap_or(0.0) + 1.0));
    let finite = values.iter().copied().filter(|v| v.is_finite());
    let (mut y0, mut y1) = finite.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !y0.is_finite() {
        (y0, y1) = (0.0, 1.0);
    }
    if y1 - y0 <= 1e-12 * y1.abs().max(1e-300) {
        let pad = if y1 == 0.0 { 1.0 } else { 0.05 * y1.abs() };
        y0 -= pad;
        y1 += pad;
    } else {
        let pad = 0.05 * (y1 - y0);
        y0 -= pad;
        y1 += pad;
    }
    let px = |x: f64| LEFT + (x - x0) / (x1 - x0) * (W - LEFT - RIGHT);
    let py = |y: f64| H - BOTTOM - (y - y0) / (y1 - y0) * (H - TOP - BOTTOM);

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#);
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="22" text-anchor="middle" font-size="15">{}</text>"#, W / 2.0, escape(title));
    // axes
    let _ = writeln!(
        s,
        r#"<path d="M{l} {t} L{l} {b} L{r} {b}" stroke="black" fill="none"/>"#,
        l = LEFT,
        t = TOP,
        b = H - BOTTOM,
        r = W - RIGHT
    );
    for t in nice_ticks(x0, x1, 8) {
        let x = px(t);
        let _ = writeln!(s, r#"<line x1="{x:.2}" y1="{b}" x2="{x:.2}" y2="{}" stroke="black"/>"#, H - BOTTOM + 5.0, b = H - BOTTOM);
        let _ = writeln!(s, r#"<text x="{x:.2}" y="{}" text-anchor="middle">{}</text>"#, H - BOTTOM + 20.0, tick_label(t));
    }
    for t in nice_ticks(y0, y1, 6) {
        let y = py(t);
        let _ = writeln!(s, r#"<line x1="{}" y1="{y:.2}" x2="{LEFT}" y2="{y:.2}" stroke="black"/>"#, LEFT - 5.0);
        let _ = writeln!(s, r#"<text x="{}" y="{:.2}" text-anchor="end">{}</text>"#, LEFT - 8.0, y + 4.0, tick_label(t));
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle" font-size="14">n</text>"#, (LEFT + W - RIGHT) / 2.0, H - 15.0);
    let _ = writeln!(
        s,
        r#"<text x="20" y="{y}" text-anchor="middle" font-size="14" transform="rotate(-90 20 {y})">ψ(n)</text>"#,
        y = (TOP + H - BOTTOM) / 2.0
    );

    let stride = ns.len().div_ceil(MAX_POINTS).max(1);
    let mut pts = String::new();
    for (i, (&n, &v)) in ns.iter().zip(values).enumerate() {
        if (i % stride == 0 || i + 1 == ns.len()) && v.is_finite() {
            let _ = write!(pts, "{:.2},{:.2} ", px(n), py(v));
        }
    }
    let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="steelblue" stroke-width="1.5"/>"#, pts.trim_end());
    for m in markers {
        let (x, y) = (px(m.n), py(m.value));
        let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="4" fill="{}"><title>{}</title></circle>"#, m.color, escape(&format!("{} at n = {}: {}", m.label, tick_label(m.n), fmt_f64(m.value))));
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" fill="{}">{}</text>"#, x + 6.0, y - 6.0, m.color, escape(&m.label));
    }
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
