//! Writers for sweep results.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{HarnessError, Result};
use crate::sweep::SweepResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
    SvgHeatmap,
    SvgLines,
}

/// Header `axis1,axis2,value`; numbers carry 17 significant digits.
pub fn write_csv<W: Write>(result: &SweepResult, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["axis1", "axis2", "value"])?;
    for p in &result.grid {
        w.write_record([full(p.axis1), full(p.axis2), full(p.value)])?;
    }
    w.flush()?;
    Ok(())
}

fn full(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn to_json(result: &SweepResult) -> String {
    serde_json::to_string_pretty(result).expect("sweep result serializes to JSON")
}

pub fn from_json(text: &str) -> Result<SweepResult> {
    serde_json::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))
}

pub fn render(result: &SweepResult, format: Format) -> Vec<u8> {
    match format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_csv(result, &mut buf).expect("writing CSV to memory cannot fail");
            buf
        }
        Format::Json => to_json(result).into_bytes(),
        Format::SvgHeatmap => svg_heatmap(result).into_bytes(),
        Format::SvgLines => svg_lines(result).into_bytes(),
    }
}

pub fn emit(result: &SweepResult, format: Format, path: &Path) -> Result<()> {
    fs::write(path, render(result, format)).map_err(|e| HarnessError::io(path, e))
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const PLOT_W: f64 = WIDTH - LEFT - RIGHT;
const PLOT_H: f64 = HEIGHT - TOP - BOTTOM;

const VIRIDIS: [(f64, f64, f64); 5] = [
    (68.0, 1.0, 84.0),
    (59.0, 82.0, 139.0),
    (33.0, 145.0, 140.0),
    (94.0, 201.0, 98.0),
    (253.0, 231.0, 37.0),
];

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

fn colormap(u: f64) -> String {
    let u = u.clamp(0.0, 1.0) * (VIRIDIS.len() - 1) as f64;
    let i = (u.floor() as usize).min(VIRIDIS.len() - 2);
    let f = u - i as f64;
    let (a, b) = (VIRIDIS[i], VIRIDIS[i + 1]);
    let mix = |x: f64, y: f64| (x + (y - x) * f).round() as u8;
    format!(
        "#{:02x}{:02x}{:02x}",
        mix(a.0, b.0),
        mix(a.1, b.1),
        mix(a.2, b.2)
    )
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn tick(x: f64) -> String {
    let s = format!("{x:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    if hi > lo {
        (lo, hi)
    } else {
        (lo - 0.5, lo + 0.5)
    }
}

fn header(result: &SweepResult, svg: &mut String) {
    let _ = writeln!(
        svg,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">
<rect width="100%" height="100%" fill="white"/>
<text x="{:.1}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
        LEFT + PLOT_W / 2.0,
        escape(result.spec.quantity.name())
    );
}

fn axes(result: &SweepResult, svg: &mut String, x: (f64, f64), y: (f64, f64), y_label: &str) {
    let (x0, y0) = (LEFT, TOP + PLOT_H);
    let _ = writeln!(
        svg,
        r#"<rect x="{LEFT}" y="{TOP}" width="{PLOT_W}" height="{PLOT_H}" fill="none" stroke="black"/>"#
    );
    for k in 0..=4 {
        let f = k as f64 / 4.0;
        let px = x0 + f * PLOT_W;
        let py = y0 - f * PLOT_H;
        let _ = writeln!(
            svg,
            r#"<line x1="{px:.2}" y1="{y0}" x2="{px:.2}" y2="{:.2}" stroke="black"/><text x="{px:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            y0 + 5.0,
            y0 + 18.0,
            tick(x.0 + f * (x.1 - x.0))
        );
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{py:.2}" x2="{x0}" y2="{py:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            x0 - 5.0,
            x0 - 8.0,
            py + 4.0,
            tick(y.0 + f * (y.1 - y.0))
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
        LEFT + PLOT_W / 2.0,
        HEIGHT - 15.0,
        escape(&result.spec.axis1.name)
    );
    let _ = writeln!(
        svg,
        r#"<text x="20" y="{:.1}" text-anchor="middle" transform="rotate(-90 20 {:.1})">{}</text>"#,
        TOP + PLOT_H / 2.0,
        TOP + PLOT_H / 2.0,
        escape(y_label)
    );
}

/// Axis1 horizontal, axis2 vertical, value as colour.
pub fn svg_heatmap(result: &SweepResult) -> String {
    let [n1, n2] = result.metadata.shape;
    let xs = result.axis1_values();
    let ys = result.axis2_values();
    let (vmin, vmax) = range(result.grid.iter().map(|p| p.value));
    let x = (xs[0], xs[n1 - 1]);
    let y = (ys[0], ys[n2 - 1]);

    let mut svg = String::new();
    header(result, &mut svg);
    let (cw, ch) = (PLOT_W / n1 as f64, PLOT_H / n2 as f64);
    svg.push_str("<g shape-rendering=\"crispEdges\">\n");
    for i in 0..n1 {
        for j in 0..n2 {
            let v = result.value(i, j);
            let _ = writeln!(
                svg,
                r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="{}"/>"#,
                LEFT + i as f64 * cw,
                TOP + PLOT_H - (j + 1) as f64 * ch,
                cw + 0.05,
                ch + 0.05,
                colormap((v - vmin) / (vmax - vmin))
            );
        }
    }
    svg.push_str("</g>\n");
    axes(result, &mut svg, x, y, &result.spec.axis2.name);

    let bar_x = LEFT + PLOT_W + 30.0;
    let steps = 64;
    for k in 0..steps {
        let f = k as f64 / steps as f64;
        let _ = writeln!(
            svg,
            r#"<rect x="{bar_x}" y="{:.3}" width="18" height="{:.3}" fill="{}"/>"#,
            TOP + PLOT_H * (1.0 - f) - PLOT_H / steps as f64,
            PLOT_H / steps as f64 + 0.05,
            colormap(f + 0.5 / steps as f64)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}">{}</text>
<text x="{:.1}" y="{:.1}">{}</text>
<text x="{:.1}" y="{:.1}">{}</text>
</svg>"#,
        bar_x + 24.0,
        TOP + 10.0,
        tick(vmax),
        bar_x + 24.0,
        TOP + PLOT_H,
        tick(vmin),
        bar_x,
        TOP - 8.0,
        escape(result.spec.quantity.name())
    );
    svg
}

/// Value against axis1, one line per axis2 value.
pub fn svg_lines(result: &SweepResult) -> String {
    let n1 = result.metadata.shape[0];
    let xs = result.axis1_values();
    let ys = result.axis2_values();
    let x = (xs[0], xs[n1 - 1]);
    let y = range(result.grid.iter().map(|p| p.value));

    let mut svg = String::new();
    header(result, &mut svg);
    axes(result, &mut svg, x, y, result.spec.quantity.name());
    for (j, &label) in ys.iter().enumerate() {
        let colour = PALETTE[j % PALETTE.len()];
        let points: Vec<String> = result
            .column(j)
            .iter()
            .zip(&xs)
            .map(|(&v, &xv)| {
                let px = LEFT + (xv - x.0) / (x.1 - x.0) * PLOT_W;
                let py = TOP + PLOT_H - (v - y.0) / (y.1 - y.0) * PLOT_H;
                format!("{px:.3},{py:.3}")
            })
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{colour}" stroke-width="1.5" points="{}"/>"#,
            points.join(" ")
        );
        if j < 20 {
            let ly = TOP + 10.0 + 16.0 * j as f64;
            let lx = LEFT + PLOT_W + 15.0;
            let _ = writeln!(
                svg,
                r#"<line x1="{lx}" y1="{ly}" x2="{:.1}" y2="{ly}" stroke="{colour}" stroke-width="2"/><text x="{:.1}" y="{:.1}">{} = {}</text>"#,
                lx + 20.0,
                lx + 25.0,
                ly + 4.0,
                escape(&result.spec.axis2.name),
                tick(label)
            );
        }
    }
    svg.push_str("</svg>\n");
    svg
}
