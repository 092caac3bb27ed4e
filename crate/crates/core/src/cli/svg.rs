//! Bare-bones line plots of a [`Table`].

use std::fmt::Write as _;

use super::figures::Table;

const W: f64 = 640.0;
const H: f64 = 420.0;
const PAD: f64 = 50.0;
const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

/// Plots every column named in `series` against column `x`. Each series is
/// scaled to its own range so curves of different magnitude share the panel.
pub fn render(table: &Table, x: &str, series: &[&str]) -> Option<String> {
    let xs = table.column(x)?;
    let (x0, x1) = range(&xs);
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}">"#);
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<rect x="{PAD}" y="{PAD}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        W - 2.0 * PAD,
        H - 2.0 * PAD
    );
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{x} [{x0:.3}, {x1:.3}]</text>"#, W / 2.0, H - 15.0);
    for (k, name) in series.iter().enumerate() {
        let ys = table.column(name)?;
        let (y0, y1) = range(&ys);
        let color = COLORS[k % COLORS.len()];
        let pts: Vec<String> = xs
            .iter()
            .zip(&ys)
            .map(|(a, b)| {
                let px = PAD + (a - x0) / (x1 - x0) * (W - 2.0 * PAD);
                let py = H - PAD - (b - y0) / (y1 - y0) * (H - 2.0 * PAD);
                format!("{px:.2},{py:.2}")
            })
            .collect();
        let _ = writeln!(s, r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#, pts.join(" "));
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" fill="{color}">{name} [{y0:.4}, {y1:.4}]</text>"#,
            PAD + 10.0,
            PAD + 20.0 * (k as f64 + 1.0)
        );
    }
    s.push_str("</svg>\n");
    Some(s)
}

fn range(v: &[f64]) -> (f64, f64) {
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, lo + 0.5)
    }
}
