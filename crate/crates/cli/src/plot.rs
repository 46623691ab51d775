//! Self-contained SVG heatmaps and quiver plots over the unit disc.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{Context, Result};
use curvepipe::{DiscPoly, DiscVector};

use crate::export::DiscGrid;

const SIZE: f64 = 440.0;
const CENTRE: f64 = 220.0;
const SCALE: f64 = 180.0;

fn px(z2: f64, z3: f64) -> (f64, f64) {
    (CENTRE + SCALE * z2, CENTRE - SCALE * z3)
}

/// Blue-white-red for `t` in `[-1, 1]`.
fn colour(t: f64) -> String {
    let t = t.clamp(-1.0, 1.0);
    let (r, g, b) = if t >= 0.0 {
        (1.0, 1.0 - t, 1.0 - t)
    } else {
        (1.0 + t, 1.0 + t, 1.0)
    };
    let c = |v: f64| (255.0 * v).round() as u8;
    format!("#{:02x}{:02x}{:02x}", c(r), c(g), c(b))
}

fn header(title: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{CENTRE}" y="24" text-anchor="middle" font-family="sans-serif" font-size="16">{title}</text>"#
    );
    s
}

fn footer(s: &mut String, range: f64) {
    let (x, y) = px(1.0, 0.0);
    let _ = writeln!(
        s,
        r#"<circle cx="{CENTRE}" cy="{CENTRE}" r="{SCALE}" fill="none" stroke="black" stroke-width="1.5"/>"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12">N</text>"#,
        x + 6.0,
        y + 4.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{CENTRE}" y="{:.2}" text-anchor="middle" font-family="sans-serif" font-size="12">max |value| = {range:.4e}</text>"#,
        SIZE - 10.0
    );
    s.push_str("</svg>\n");
}

fn cells(s: &mut String, grid: DiscGrid, value: impl Fn(f64, f64) -> f64) -> f64 {
    let n = grid.n as f64;
    let angles = grid.angles();
    let half = std::f64::consts::PI / angles.len() as f64;
    let samples: Vec<(f64, f64, f64)> = grid
        .points()
        .into_iter()
        .map(|(s3, s2, z2, z3)| (s3, s2, value(z2, z3)))
        .collect();
    let range = samples.iter().fold(0.0f64, |m, v| m.max(v.2.abs()));
    for (s3, s2, v) in &samples {
        let (r0, r1) = (s3 - 0.5 / n, s3 + 0.5 / n);
        let corners = [
            (r0, s2 - half),
            (r1, s2 - half),
            (r1, s2 + half),
            (r0, s2 + half),
        ];
        let pts: Vec<String> = corners
            .iter()
            .map(|(r, a)| {
                let (x, y) = px(r * a.cos(), r * a.sin());
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let t = if range > 0.0 { v / range } else { 0.0 };
        let c = colour(t);
        let _ = writeln!(
            s,
            r#"<polygon points="{}" fill="{c}" stroke="{c}"/>"#,
            pts.join(" ")
        );
    }
    range
}

pub fn heatmap(title: &str, grid: DiscGrid, field: &DiscPoly<f64>) -> String {
    let mut s = header(title);
    let range = cells(&mut s, grid, |z2, z3| field.eval_f64(z2, z3));
    footer(&mut s, range);
    s
}

/// Magnitude underneath, arrows on every other radius.
pub fn quiver(title: &str, grid: DiscGrid, field: &DiscVector<f64>) -> String {
    let mut s = header(title);
    let range = cells(&mut s, grid, |z2, z3| {
        let (a, b) = field.eval_f64(z2, z3);
        a.hypot(b)
    });
    if range > 0.0 {
        let len = 0.8 / grid.n as f64 / range;
        for (i, (_, _, z2, z3)) in grid.points().into_iter().enumerate() {
            if (i / (2 * grid.n)) % 2 == 1 || i % 2 == 1 {
                continue;
            }
            let (a, b) = field.eval_f64(z2, z3);
            let (x0, y0) = px(z2, z3);
            let (x1, y1) = px(z2 + len * a, z3 + len * b);
            let _ = writeln!(
                s,
                r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x1:.2}" y2="{y1:.2}" stroke="black" stroke-width="1"/>"#
            );
            let _ = writeln!(
                s,
                r#"<circle cx="{x1:.2}" cy="{y1:.2}" r="1.5" fill="black"/>"#
            );
        }
    }
    footer(&mut s, range);
    s
}

pub fn write(path: &Path, svg: &str) -> Result<()> {
    std::fs::write(path, svg).with_context(|| format!("writing {}", path.display()))
}
