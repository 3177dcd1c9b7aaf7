//! Minimal SVG 1.1 line plots: one polyline, two axis lines, range labels.

use std::fmt::Write;

/// Plot canvas before the margin is added.
const WIDTH: f64 = 1000.0;
const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 0.05;
const FONT: f64 = 18.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Aspect {
    /// Same scale on both axes (the curve itself).
    Equal,
    /// Each axis stretched to fill the canvas.
    Fill,
}

fn span(lo: f64, hi: f64) -> (f64, f64) {
    if hi > lo {
        (lo, hi)
    } else {
        let pad = lo.abs().max(1.0) * 0.5;
        (lo - pad, hi + pad)
    }
}

/// Renders the finite points of `points` as a polyline. Returns `None` when
/// no point is finite.
pub fn polyline(points: &[(f64, f64)], aspect: Aspect) -> Option<String> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .copied()
        .filter(|(x, y)| x.is_finite() && y.is_finite())
        .collect();
    if pts.is_empty() {
        return None;
    }
    let fold = |f: fn(f64, f64) -> f64, init: f64, sel: fn(&(f64, f64)) -> f64| {
        pts.iter().map(sel).fold(init, f)
    };
    let (x0, x1) = span(
        fold(f64::min, f64::INFINITY, |p| p.0),
        fold(f64::max, f64::NEG_INFINITY, |p| p.0),
    );
    let (y0, y1) = span(
        fold(f64::min, f64::INFINITY, |p| p.1),
        fold(f64::max, f64::NEG_INFINITY, |p| p.1),
    );
    let (sx, sy) = match aspect {
        Aspect::Fill => (WIDTH / (x1 - x0), HEIGHT / (y1 - y0)),
        Aspect::Equal => {
            let s = (WIDTH / (x1 - x0)).min(WIDTH / (y1 - y0));
            (s, s)
        }
    };
    let w = (x1 - x0) * sx;
    let h = (y1 - y0) * sy;
    let mx = MARGIN * w;
    let my = MARGIN * h;

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"{:.6} {:.6} {:.6} {:.6}\">",
        -mx,
        -my,
        w + 2.0 * mx,
        h + 2.0 * my
    );
    let _ = writeln!(
        out,
        "<line x1=\"0.000000\" y1=\"{h:.6}\" x2=\"{w:.6}\" y2=\"{h:.6}\" stroke=\"#888888\" stroke-width=\"1\" vector-effect=\"non-scaling-stroke\"/>"
    );
    let _ = writeln!(
        out,
        "<line x1=\"0.000000\" y1=\"0.000000\" x2=\"0.000000\" y2=\"{h:.6}\" stroke=\"#888888\" stroke-width=\"1\" vector-effect=\"non-scaling-stroke\"/>"
    );
    out.push_str("<polyline fill=\"none\" stroke=\"#1f4e9a\" stroke-width=\"2\" vector-effect=\"non-scaling-stroke\" points=\"");
    for (i, (x, y)) in pts.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{:.6},{:.6}", (x - x0) * sx, (y1 - y) * sy);
    }
    out.push_str("\"/>\n");
    let font = FONT * (w.max(h) / WIDTH);
    let label = |out: &mut String, x: f64, y: f64, anchor: &str, v: f64| {
        let _ = writeln!(
            out,
            "<text x=\"{x:.6}\" y=\"{y:.6}\" font-size=\"{font:.6}\" text-anchor=\"{anchor}\">{v:.6}</text>"
        );
    };
    label(&mut out, 0.0, h + font, "start", x0);
    label(&mut out, w, h + font, "end", x1);
    label(&mut out, 0.0, h - 0.25 * font, "start", y0);
    label(&mut out, 0.0, font, "start", y1);
    out.push_str("</svg>\n");
    Some(out)
}
