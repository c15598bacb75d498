//! Minimal SVG line chart for sweep curves.

use std::fmt::Write as _;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const LEFT: f64 = 60.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn tick_label(x: f64) -> String {
    if x.fract() == 0.0 {
        format!("{x:.0}")
    } else {
        format!("{x:.2}")
    }
}

/// F-score curve over `points` (x ascending, y in [0, 1]) with `best`
/// marked. The curve is one `<path>` with a segment between consecutive
/// points; a lone point is drawn as a single zero-length segment.
pub fn line_chart(title: &str, x_label: &str, points: &[(f64, f64)], best: (f64, f64)) -> String {
    let (mut x0, mut x1) = points
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(x, _)| (lo.min(x), hi.max(x)));
    if !x0.is_finite() {
        (x0, x1) = (0.0, 1.0);
    }
    if x1 <= x0 {
        let pad = if x0 == 0.0 { 1.0 } else { x0.abs() * 0.1 };
        (x0, x1) = (x0 - pad, x1 + pad);
    }
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let sx = |x: f64| LEFT + (x - x0) / (x1 - x0) * plot_w;
    let sy = |y: f64| TOP + (1.0 - y.clamp(0.0, 1.0)) * plot_h;

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#).unwrap();
    writeln!(out, r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#, WIDTH / 2.0, escape(title)).unwrap();

    // axes and grid
    let (bx, by) = (LEFT, TOP + plot_h);
    writeln!(out, r##"<g stroke="#333"><line x1="{bx}" y1="{by}" x2="{}" y2="{by}"/><line x1="{bx}" y1="{TOP}" x2="{bx}" y2="{by}"/></g>"##, LEFT + plot_w).unwrap();
    for i in 0..=4 {
        let y = f64::from(i) / 4.0;
        let py = sy(y);
        writeln!(
            out,
            r##"<line x1="{LEFT}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}" stroke="#ddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">{y:.2}</text>"##,
            LEFT + plot_w,
            LEFT - 6.0,
            py + 4.0
        )
        .unwrap();
    }
    for i in 0..=4 {
        let x = x0 + (x1 - x0) * f64::from(i) / 4.0;
        writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            sx(x),
            by + 18.0,
            tick_label(x)
        )
        .unwrap();
    }
    writeln!(out, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, LEFT + plot_w / 2.0, HEIGHT - 10.0, escape(x_label)).unwrap();
    writeln!(out, r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">F-score</text>"#, TOP + plot_h / 2.0, TOP + plot_h / 2.0).unwrap();

    if let Some(&(fx, fy)) = points.first() {
        let mut d = format!("M {:.2} {:.2}", sx(fx), sy(fy));
        if points.len() == 1 {
            write!(d, " L {:.2} {:.2}", sx(fx), sy(fy)).unwrap();
        }
        for &(x, y) in &points[1..] {
            write!(d, " L {:.2} {:.2}", sx(x), sy(y)).unwrap();
        }
        writeln!(out, r##"<path class="curve" d="{d}" fill="none" stroke="#1f77b4" stroke-width="2" stroke-linecap="round"/>"##).unwrap();
    }
    let (bxp, byp) = (sx(best.0), sy(best.1));
    writeln!(
        out,
        r##"<circle class="best" cx="{bxp:.2}" cy="{byp:.2}" r="5" fill="#d62728"/><text x="{:.2}" y="{:.2}" fill="#d62728">best {}: {}, F = {:.4}</text>"##,
        bxp + 8.0,
        byp - 8.0,
        escape(x_label),
        tick_label(best.0),
        best.1
    )
    .unwrap();
    out.push_str("</svg>\n");
    out
}
