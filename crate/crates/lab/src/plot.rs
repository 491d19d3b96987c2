//! Deterministic hand-written SVG plots.

use std::fmt::Write as _;
use std::path::Path;

use blowup_core::simulator::{fit_loglog, LogLogFit};

use crate::LabError;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 64.0;
const COLOURS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotStyle {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_log: bool,
    /// Draw lines through the points instead of markers.
    pub lines: bool,
    /// Fit and draw a least-squares line through the first series
    /// (log-log plots only).
    pub fit_line: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Plot {
    pub svg: String,
    /// Points removed for being non-finite, or nonpositive on a log axis.
    pub dropped: usize,
    pub fit: Option<LogLogFit>,
}

fn usable(p: &(f64, f64), log_log: bool) -> bool {
    p.0.is_finite() && p.1.is_finite() && (!log_log || (p.0 > 0.0 && p.1 > 0.0))
}

struct Axis {
    lo: f64,
    hi: f64,
    pixel_lo: f64,
    pixel_hi: f64,
}

impl Axis {
    fn new(values: impl Iterator<Item = f64>, pixel_lo: f64, pixel_hi: f64) -> Self {
        let (mut lo, mut hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
        if hi - lo < 1e-12 * (1.0 + lo.abs()) {
            lo -= 0.5;
            hi += 0.5;
        }
        Self { lo, hi, pixel_lo, pixel_hi }
    }

    fn map(&self, v: f64) -> f64 {
        self.pixel_lo + (v - self.lo) / (self.hi - self.lo) * (self.pixel_hi - self.pixel_lo)
    }
}

/// Renders `series` to SVG text. An empty input (no usable point) is an error.
pub fn emit_plot(series: &[Series], style: &PlotStyle) -> Result<Plot, LabError> {
    let tf = |v: f64| if style.log_log { v.log10() } else { v };
    let mut dropped = 0;
    let clean: Vec<Vec<(f64, f64)>> = series
        .iter()
        .map(|s| {
            let kept: Vec<(f64, f64)> = s.points.iter().filter(|p| usable(p, style.log_log)).copied().collect();
            dropped += s.points.len() - kept.len();
            kept
        })
        .collect();
    if clean.iter().all(Vec::is_empty) {
        return Err(LabError::Plot("no finite points to plot".into()));
    }
    let fit = if style.fit_line && style.log_log { Some(fit_loglog(&clean[0])?) } else { None };

    let all = || clean.iter().flatten();
    let x = Axis::new(all().map(|p| tf(p.0)), MARGIN, WIDTH - MARGIN);
    let y = Axis::new(all().map(|p| tf(p.1)), HEIGHT - MARGIN, MARGIN);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{:.1}" y="24" text-anchor="middle" font-size="14">{}</text>"#, WIDTH / 2.0, escape(&style.title));
    let _ = writeln!(
        s,
        r#"<path d="M{m:.1} {t:.1} V{b:.1} H{r:.1}" fill="none" stroke="black"/>"#,
        m = MARGIN,
        t = MARGIN,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN
    );
    for i in 0..=4 {
        let f = i as f64 / 4.0;
        let (xv, yv) = (x.lo + f * (x.hi - x.lo), y.lo + f * (y.hi - y.lo));
        let tick = |v: f64| if style.log_log { format!("1e{v:.2}") } else { format!("{v:.3}") };
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            x.map(xv),
            HEIGHT - MARGIN + 18.0,
            tick(xv)
        );
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#, MARGIN - 6.0, y.map(yv) + 4.0, tick(yv));
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        HEIGHT - 16.0,
        escape(&style.x_label)
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">{}</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
        escape(&style.y_label)
    );

    for (k, (pts, meta)) in clean.iter().zip(series).enumerate() {
        let colour = COLOURS[k % COLOURS.len()];
        if style.lines && pts.len() > 1 {
            let mut d = String::new();
            for (i, p) in pts.iter().enumerate() {
                let _ = write!(d, "{}{:.2} {:.2}", if i == 0 { "M" } else { " L" }, x.map(tf(p.0)), y.map(tf(p.1)));
            }
            let _ = writeln!(s, r#"<path d="{d}" fill="none" stroke="{colour}" stroke-width="1.5"/>"#);
        } else {
            for p in pts {
                let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{colour}"/>"#, x.map(tf(p.0)), y.map(tf(p.1)));
            }
        }
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" fill="{colour}">{}</text>"#,
            WIDTH - MARGIN - 150.0,
            MARGIN + 16.0 * (k as f64 + 1.0),
            escape(&meta.label)
        );
    }
    if let Some(f) = &fit {
        let at = |lx: f64| f.intercept / std::f64::consts::LN_10 + f.slope * lx;
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black" stroke-dasharray="6 4"/>"#,
            x.map(x.lo),
            y.map(at(x.lo)),
            x.map(x.hi),
            y.map(at(x.hi))
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}">fitted slope = {:.6}</text>"#,
            MARGIN + 10.0,
            HEIGHT - MARGIN - 10.0,
            f.slope
        );
    }
    s.push_str("</svg>\n");
    if dropped > 0 {
        log::warn!("dropped {dropped} non-finite or nonpositive points from {:?}", style.title);
    }
    Ok(Plot { svg: s, dropped, fit })
}

/// Renders and writes; nothing is written when rendering fails.
pub fn write_plot(path: &Path, series: &[Series], style: &PlotStyle) -> Result<Plot, LabError> {
    let plot = emit_plot(series, style)?;
    std::fs::write(path, &plot.svg)?;
    Ok(plot)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
