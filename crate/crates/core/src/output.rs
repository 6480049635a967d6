//! CSV rows and minimal SVG line charts.
//!
//! Every CSV file starts with a `#`-prefixed block echoing the full run
//! configuration, followed by a header row. Floats use Rust's shortest
//! round-trip formatting, so identical runs give byte-identical files.

use std::fmt::Write as _;

use crate::mc::Estimate;

pub const MC_HEADER: &str = "tag,d,lattice,p,radius,samples,seed,successes,mean,ci_half_width";
pub const DUST_HEADER: &str = "lambda,t,radius,samples,seed,successes,mean,ci_half_width";

/// `# key=value` lines.
pub fn config_block(entries: &[(&str, String)]) -> String {
    let mut out = String::new();
    for (k, v) in entries {
        writeln!(out, "# {k}={v}").unwrap();
    }
    out
}

#[derive(Debug, Clone, Copy)]
pub struct McRow<'a> {
    pub tag: &'a str,
    pub d: usize,
    pub lattice: &'a str,
    pub p: f64,
    pub radius: usize,
    pub seed: u64,
    pub estimate: Estimate,
}

impl McRow<'_> {
    pub fn to_csv(&self) -> String {
        let e = &self.estimate;
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.tag,
            self.d,
            self.lattice,
            self.p,
            self.radius,
            e.samples,
            self.seed,
            e.successes,
            e.mean,
            e.ci_half_width
        )
    }
}

pub fn dust_row(lambda: f64, t: f64, radius: usize, seed: u64, e: &Estimate) -> String {
    format!(
        "{lambda},{t},{radius},{},{seed},{},{},{}",
        e.samples, e.successes, e.mean, e.ci_half_width
    )
}

const W: f64 = 640.0;
const H: f64 = 400.0;
const MARGIN: f64 = 56.0;

/// Line chart of `mean` against `x` with a shaded confidence band.
pub fn svg_curve(title: &str, x_label: &str, y_label: &str, points: &[(f64, Estimate)]) -> String {
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    )
    .unwrap();
    writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#).unwrap();
    writeln!(
        out,
        r#"<text x="{}" y="24" text-anchor="middle" font-family="sans-serif" font-size="15">{}</text>"#,
        W / 2.0,
        escape(title)
    )
    .unwrap();

    if points.is_empty() {
        out.push_str("</svg>\n");
        return out;
    }

    let (x_min, x_max) = span(points.iter().map(|(x, _)| *x));
    let (y_min, y_max) = span(points.iter().flat_map(|(_, e)| {
        let (lo, hi) = e.interval();
        [lo, hi, e.mean]
    }));
    let sx = |x: f64| MARGIN + (x - x_min) / (x_max - x_min) * (W - 2.0 * MARGIN);
    let sy = |y: f64| H - MARGIN - (y - y_min) / (y_max - y_min) * (H - 2.0 * MARGIN);

    // Axes and ticks.
    writeln!(
        out,
        r#"<path d="M{l} {t} L{l} {b} L{r} {b}" stroke="black" fill="none"/>"#,
        l = MARGIN,
        t = MARGIN,
        b = H - MARGIN,
        r = W - MARGIN
    )
    .unwrap();
    for i in 0..=4 {
        let f = i as f64 / 4.0;
        let xv = x_min + f * (x_max - x_min);
        let yv = y_min + f * (y_max - y_min);
        writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-family="sans-serif" font-size="11">{}</text>"#,
            sx(xv),
            H - MARGIN + 16.0,
            tick(xv)
        )
        .unwrap();
        writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end" font-family="sans-serif" font-size="11">{}</text>"#,
            MARGIN - 6.0,
            sy(yv) + 4.0,
            tick(yv)
        )
        .unwrap();
    }
    writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="12">{}</text>"#,
        W / 2.0,
        H - 14.0,
        escape(x_label)
    )
    .unwrap();
    writeln!(
        out,
        r#"<text x="16" y="{y}" text-anchor="middle" font-family="sans-serif" font-size="12" transform="rotate(-90 16 {y})">{}</text>"#,
        escape(y_label),
        y = H / 2.0
    )
    .unwrap();

    // Confidence band: upper edge left to right, lower edge right to left.
    let mut band = Vec::with_capacity(points.len() * 2);
    for (x, e) in points {
        band.push(format!("{:.2},{:.2}", sx(*x), sy(e.interval().1)));
    }
    for (x, e) in points.iter().rev() {
        band.push(format!("{:.2},{:.2}", sx(*x), sy(e.interval().0)));
    }
    writeln!(
        out,
        r##"<polygon points="{}" fill="#9ecae1" fill-opacity="0.5" stroke="none"/>"##,
        band.join(" ")
    )
    .unwrap();

    let line: Vec<String> = points
        .iter()
        .map(|(x, e)| format!("{:.2},{:.2}", sx(*x), sy(e.mean)))
        .collect();
    writeln!(
        out,
        r##"<polyline points="{}" fill="none" stroke="#08519c" stroke-width="2"/>"##,
        line.join(" ")
    )
    .unwrap();
    for (x, e) in points {
        writeln!(
            out,
            r##"<circle cx="{:.2}" cy="{:.2}" r="3" fill="#08519c"/>"##,
            sx(*x),
            sy(e.mean)
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}

fn span(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    if hi - lo > 0.0 {
        let pad = (hi - lo) * 0.05;
        (lo - pad, hi + pad)
    } else {
        (lo - 0.5, hi + 0.5)
    }
}

fn tick(v: f64) -> String {
    let s = format!("{v:.4}");
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
