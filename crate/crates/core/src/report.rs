//! Degree scans over decreasing error targets and their SVG rendering.

use std::fmt::Write;

use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lp::{approx_degree, ApproxDegree, LpOptions, Sided};
use crate::rational::Rational;
use crate::zoo::PromiseFunction;

/// `approx_degree` at each target; targets must be strictly decreasing.
pub fn scan(
    f: &PromiseFunction,
    eps_list: &[Rational],
    sided: Sided,
    opts: &LpOptions,
) -> Result<Vec<(Rational, ApproxDegree)>> {
    if eps_list.is_empty() {
        return Err(Error::InvalidParameter("empty eps list".into()));
    }
    if eps_list.windows(2).any(|w| w[0] <= w[1]) {
        return Err(Error::InvalidParameter("eps list must be strictly decreasing".into()));
    }
    eps_list
        .iter()
        .map(|e| Ok((e.clone(), approx_degree(f, e, sided, opts)?)))
        .collect()
}

const WIDTH: f64 = 480.0;
const HEIGHT: f64 = 320.0;
const MARGIN: f64 = 48.0;

/// A single-polyline chart of degree against `ln(1/eps)`; `eps = 0` has no
/// finite abscissa and is left out.
pub fn scan_svg(title: &str, rows: &[(Rational, usize)]) -> String {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|(e, _)| !e.is_zero())
        .map(|(e, d)| (-e.to_f64().unwrap_or(f64::NAN).ln(), *d as f64))
        .collect();
    let (x_lo, x_hi) = bounds(pts.iter().map(|p| p.0), 0.0);
    let (_, y_hi) = bounds(pts.iter().map(|p| p.1), 1.0);
    let y_lo = 0.0;
    let sx = |x: f64| MARGIN + (x - x_lo) / (x_hi - x_lo) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y_lo) / (y_hi - y_lo) * (HEIGHT - 2.0 * MARGIN);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="20" text-anchor="middle" font-family="sans-serif" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    let (x0, y0, x1, y1) = (MARGIN, HEIGHT - MARGIN, WIDTH - MARGIN, MARGIN);
    let _ = writeln!(
        out,
        r#"<path d="M{x0:.1},{y1:.1} L{x0:.1},{y0:.1} L{x1:.1},{y0:.1}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-family="sans-serif" font-size="12">ln(1/eps)</text>"#,
        WIDTH / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        out,
        r#"<text x="14" y="{:.1}" text-anchor="middle" font-family="sans-serif" font-size="12" transform="rotate(-90 14 {:.1})">degree</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );
    for v in [x_lo, x_hi] {
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-family="sans-serif" font-size="10">{v:.2}</text>"#,
            sx(v),
            y0 + 14.0
        );
    }
    for v in [y_lo, y_hi] {
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end" font-family="sans-serif" font-size="10">{v:.0}</text>"#,
            x0 - 6.0,
            sy(v) + 4.0
        );
    }
    let coords: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.1},{:.1}", sx(x), sy(y))).collect();
    let _ = writeln!(
        out,
        r#"<polyline points="{}" fill="none" stroke="steelblue" stroke-width="2"/>"#,
        coords.join(" ")
    );
    out.push_str("</svg>\n");
    out
}

fn bounds(values: impl Iterator<Item = f64>, fallback_span: f64) -> (f64, f64) {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-9 {
        hi = lo + fallback_span.max(1.0);
    }
    (lo, hi)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
