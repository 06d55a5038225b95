//! Bare-bones SVG 1.1 charts written as text.

use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 56.0;
const PALETTE: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Style {
    Line,
    Markers,
}

#[derive(Clone, Debug)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
    pub style: Style,
}

impl Series {
    pub fn new(name: &str, points: Vec<(f64, f64)>, style: Style) -> Self {
        Self {
            name: name.to_string(),
            points,
            style,
        }
    }
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        });
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn header(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">
<rect width="100%" height="100%" fill="white"/>
<text x="{:.1}" y="24" font-family="sans-serif" font-size="15" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
}

fn axes(out: &mut String, xlabel: &str, ylabel: &str, (x0, x1): (f64, f64), (y0, y1): (f64, f64)) {
    let (left, right, top, bottom) = (MARGIN, WIDTH - MARGIN / 2.0, MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(
        out,
        r#"<path d="M{left} {top} L{left} {bottom} L{right} {bottom}" stroke="black" fill="none"/>"#
    );
    let ticks = [
        (x0, left, bottom + 16.0, "middle"),
        (x1, right, bottom + 16.0, "end"),
    ];
    for (value, x, y, anchor) in ticks {
        let _ = writeln!(
            out,
            r#"<text x="{x:.1}" y="{y:.1}" font-family="sans-serif" font-size="11" text-anchor="{anchor}">{value:.3}</text>"#
        );
    }
    for (value, y) in [(y0, bottom), (y1, top + 4.0)] {
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{y:.1}" font-family="sans-serif" font-size="11" text-anchor="end">{value:.3}</text>"#,
            left - 4.0
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="13" text-anchor="middle">{}</text>"#,
        (left + right) / 2.0,
        HEIGHT - 12.0,
        escape(xlabel)
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{:.1}" font-family="sans-serif" font-size="13" text-anchor="middle" transform="rotate(-90 16 {:.1})">{}</text>"#,
        (top + bottom) / 2.0,
        (top + bottom) / 2.0,
        escape(ylabel)
    );
}

/// Line and scatter series sharing one pair of axes.
pub fn line_chart(title: &str, xlabel: &str, ylabel: &str, series: &[Series]) -> String {
    let xr = range(series.iter().flat_map(|s| s.points.iter().map(|p| p.0)));
    let yr = range(series.iter().flat_map(|s| s.points.iter().map(|p| p.1)));
    let sx = |x: f64| MARGIN + (x - xr.0) / (xr.1 - xr.0) * (WIDTH - 1.5 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - yr.0) / (yr.1 - yr.0) * (HEIGHT - 2.0 * MARGIN);

    let mut out = String::new();
    header(&mut out, title);
    axes(&mut out, xlabel, ylabel, xr, yr);
    for (i, s) in series.iter().enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        match s.style {
            Style::Line => {
                let path: Vec<String> = s
                    .points
                    .iter()
                    .enumerate()
                    .map(|(k, &(x, y))| {
                        format!(
                            "{}{:.2} {:.2}",
                            if k == 0 { "M" } else { "L" },
                            sx(x),
                            sy(y)
                        )
                    })
                    .collect();
                let _ = writeln!(
                    out,
                    r#"<path d="{}" stroke="{colour}" stroke-width="1.5" fill="none"/>"#,
                    path.join(" ")
                );
            }
            Style::Markers => {
                for &(x, y) in &s.points {
                    let _ = writeln!(
                        out,
                        r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{colour}"/>"#,
                        sx(x),
                        sy(y)
                    );
                }
            }
        }
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="12" fill="{colour}">{}</text>"#,
            WIDTH - 1.5 * MARGIN - 60.0,
            MARGIN + 16.0 * i as f64,
            escape(&s.name)
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Square heatmap of `values[k * n + l]` over `xs x xs`, blue (low) to red (high).
pub fn heatmap(title: &str, xlabel: &str, ylabel: &str, xs: &[f64], values: &[f64]) -> String {
    let n = xs.len();
    let (lo, hi) = range(values.iter().copied());
    let xr = range(xs.iter().copied());
    let plot = HEIGHT - 2.0 * MARGIN;
    let cell = plot / n.max(1) as f64;

    let mut out = String::new();
    header(&mut out, title);
    for k in 0..n {
        for l in 0..n {
            let t = (values[k * n + l] - lo) / (hi - lo);
            let r = (255.0 * t).round() as u8;
            let b = (255.0 * (1.0 - t)).round() as u8;
            // x~ runs up the vertical axis.
            let _ = writeln!(
                out,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="rgb({r},0,{b})"/>"#,
                MARGIN + k as f64 * cell,
                HEIGHT - MARGIN - (l + 1) as f64 * cell,
                cell + 0.05,
                cell + 0.05
            );
        }
    }
    axes(&mut out, xlabel, ylabel, xr, xr);
    out.push_str("</svg>\n");
    out
}
