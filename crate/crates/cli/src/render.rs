//! SVG scatter plots of roots over a Green's-function heat layer.

use std::fmt::Write;

use equidist_core::{Complex64, GreenEvaluator};
use rayon::prelude::*;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bounds {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
}

impl Bounds {
    pub fn from_array([x_min, x_max, y_min, y_max]: [f64; 4]) -> Self {
        Self { x_min, x_max, y_min, y_max }
    }

    fn check(&self) -> Result<(), CliError> {
        let finite = [self.x_min, self.x_max, self.y_min, self.y_max].iter().all(|v| v.is_finite());
        if !finite || self.x_max <= self.x_min || self.y_max <= self.y_min {
            return Err(CliError::Config(format!("degenerate bounds {self:?}")));
        }
        Ok(())
    }

    fn width(&self) -> f64 {
        self.x_max - self.x_min
    }

    fn height(&self) -> f64 {
        self.y_max - self.y_min
    }
}

/// Row-major samples, first row at the top (`y_max`).
#[derive(Clone, Debug, PartialEq)]
pub struct GreenGrid {
    pub cols: usize,
    pub rows: usize,
    pub values: Vec<f64>,
}

impl GreenGrid {
    /// Samples `ge` at cell centers; rows follow the aspect ratio of `bounds`.
    pub fn sample(ge: &GreenEvaluator, bounds: Bounds, cols: usize) -> Result<Self, CliError> {
        bounds.check()?;
        let rows = ((cols as f64 * bounds.height() / bounds.width()).round() as usize).max(1);
        let dx = bounds.width() / cols as f64;
        let dy = bounds.height() / rows as f64;
        let values = (0..rows * cols)
            .into_par_iter()
            .map(|idx| {
                let (r, c) = (idx / cols, idx % cols);
                let z = Complex64::new(bounds.x_min + (c as f64 + 0.5) * dx, bounds.y_max - (r as f64 + 0.5) * dy);
                ge.eval(z)
            })
            .collect();
        Ok(Self { cols, rows, values })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RenderStyle {
    pub width_px: f64,
    pub clamp: f64,
    pub dot_radius: f64,
}

impl Default for RenderStyle {
    fn default() -> Self {
        Self {
            width_px: 512.0,
            clamp: 0.5,
            dot_radius: 1.5,
        }
    }
}

/// Dark red on the compact set, fading to white at `g >= clamp`.
fn shade(g: f64, clamp: f64) -> (u8, u8, u8) {
    let t = (g / clamp).clamp(0.0, 1.0);
    let level = (255.0 * t).round() as u8;
    (128 + (127.0 * t).round() as u8, level, level)
}

pub fn render_svg(points: &[Complex64], grid: &GreenGrid, bounds: Bounds, style: &RenderStyle) -> Result<String, CliError> {
    bounds.check()?;
    if grid.cols == 0 || grid.rows == 0 || grid.values.len() != grid.cols * grid.rows {
        return Err(CliError::Config("empty or inconsistent green grid".into()));
    }
    let width = style.width_px;
    let height = width * bounds.height() / bounds.width();
    let cell_w = width / grid.cols as f64;
    let cell_h = height / grid.rows as f64;

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.3}" height="{height:.3}" viewBox="0 0 {width:.3} {height:.3}">"#
    );
    let _ = writeln!(svg, r#"<g shape-rendering="crispEdges">"#);
    for r in 0..grid.rows {
        let row = &grid.values[r * grid.cols..(r + 1) * grid.cols];
        let mut start = 0;
        // merge horizontal runs of equal color
        while start < grid.cols {
            let color = shade(row[start], style.clamp);
            let mut end = start + 1;
            while end < grid.cols && shade(row[end], style.clamp) == color {
                end += 1;
            }
            let _ = writeln!(
                svg,
                r##"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="#{:02x}{:02x}{:02x}"/>"##,
                start as f64 * cell_w,
                r as f64 * cell_h,
                (end - start) as f64 * cell_w,
                cell_h,
                color.0,
                color.1,
                color.2
            );
            start = end;
        }
    }
    let _ = writeln!(svg, "</g>");
    let _ = writeln!(svg, r##"<g fill="#000000">"##);
    for z in points {
        let cx = (z.re - bounds.x_min) / bounds.width() * width;
        let cy = (bounds.y_max - z.im) / bounds.height() * height;
        let _ = writeln!(svg, r#"<circle cx="{cx:.3}" cy="{cy:.3}" r="{:.3}"/>"#, style.dot_radius);
    }
    let _ = writeln!(svg, "</g>");
    let _ = writeln!(svg, "</svg>");
    Ok(svg)
}
