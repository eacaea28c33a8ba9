//! CSV and static SVG output for decay curves.

use std::fmt::Write as _;

use super::DecayCurve;

pub const CSV_HEADER: &str = "label,g,value";

pub fn curves_csv(curves: &[&DecayCurve]) -> String {
    let mut s = format!("{CSV_HEADER}\n");
    for c in curves {
        for &(g, v) in &c.samples {
            let _ = writeln!(s, "\"{}\",{g:e},{v:.12e}", c.label.replace('"', "'"));
        }
    }
    s
}

const W: f64 = 640.0;
const H: f64 = 420.0;
const PAD: f64 = 60.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// Log-log plot of the curves on shared axes.
pub fn curves_svg(title: &str, curves: &[&DecayCurve]) -> String {
    let pts: Vec<(f64, f64)> =
        curves.iter().flat_map(|c| c.samples.iter().map(|&(g, v)| (g.log10(), v.log10()))).collect();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in &pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if pts.is_empty() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 - x0 < 1e-9 {
        x1 = x0 + 1.0;
    }
    if y1 - y0 < 1e-9 {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| PAD + (x - x0) / (x1 - x0) * (W - 2.0 * PAD);
    let sy = |y: f64| H - PAD - (y - y0) / (y1 - y0) * (H - 2.0 * PAD);
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="12">"#);
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="20" text-anchor="middle">{}</text>"#, W / 2.0, escape(title));
    let _ = writeln!(
        s,
        r#"<path d="M{PAD},{PAD} V{} H{}" fill="none" stroke="black"/>"#,
        H - PAD,
        W - PAD
    );
    for k in x0.ceil() as i64..=x1.floor() as i64 {
        let x = sx(k as f64);
        let _ = writeln!(s, r#"<text x="{x}" y="{}" text-anchor="middle">1e{k}</text>"#, H - PAD + 18.0);
    }
    for k in y0.ceil() as i64..=y1.floor() as i64 {
        let y = sy(k as f64);
        let _ = writeln!(s, r#"<text x="{}" y="{y}" text-anchor="end">1e{k}</text>"#, PAD - 6.0);
    }
    for (i, c) in curves.iter().enumerate() {
        let color = COLORS[i % COLORS.len()];
        let d: Vec<String> = c
            .samples
            .iter()
            .enumerate()
            .map(|(j, &(g, v))| format!("{}{:.2},{:.2}", if j == 0 { 'M' } else { 'L' }, sx(g.log10()), sy(v.log10())))
            .collect();
        let _ = writeln!(s, r#"<path d="{}" fill="none" stroke="{color}" stroke-width="2"/>"#, d.join(" "));
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" fill="{color}">{}</text>"#,
            PAD + 10.0,
            PAD + 16.0 * (i as f64 + 1.0),
            escape(&c.label)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
