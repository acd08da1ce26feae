//! SVG and ASCII renderers for conformations: beads as circles on the drawn
//! triangular lattice, the backbone as a polyline, bonds as dashed segments.
//! Output bytes are deterministic for a fixed input and style.

use crate::model::{AttractionRule, Conformation};
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderStyle {
    Svg,
    Ascii,
}

const SCALE: f64 = 24.0;
const MARGIN: f64 = 30.0;
const BEAD_RADIUS: f64 = 8.0;

/// Render a conformation with its bonds under `rule`.
pub fn render_conformation(c: &Conformation, rule: &AttractionRule, style: RenderStyle) -> String {
    match style {
        RenderStyle::Svg => render_svg(c, rule),
        RenderStyle::Ascii => render_ascii(c),
    }
}

fn screen(c: &Conformation) -> Vec<(f64, f64)> {
    // flip y so the lattice's upward direction points up on the page
    c.points()
        .iter()
        .map(|p| {
            let (x, y) = p.to_cartesian();
            (x * SCALE, -y * SCALE)
        })
        .collect()
}

fn render_svg(c: &Conformation, rule: &AttractionRule) -> String {
    let pts = screen(c);
    let (mut min_x, mut min_y, mut max_x, mut max_y) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for &(x, y) in &pts {
        min_x = min_x.min(x);
        min_y = min_y.min(y);
        max_x = max_x.max(x);
        max_y = max_y.max(y);
    }
    let ox = MARGIN - min_x;
    let oy = MARGIN - min_y;
    let width = max_x - min_x + 2.0 * MARGIN;
    let height = max_y - min_y + 2.0 * MARGIN;
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.1}" height="{height:.1}" viewBox="0 0 {width:.1} {height:.1}">"#
    )
    .unwrap();
    // backbone
    if pts.len() > 1 {
        let path: Vec<String> = pts
            .iter()
            .map(|&(x, y)| format!("{:.1},{:.1}", x + ox, y + oy))
            .collect();
        writeln!(
            out,
            r##"  <polyline points="{}" fill="none" stroke="#333333" stroke-width="2.0"/>"##,
            path.join(" ")
        )
        .unwrap();
    }
    // bonds
    for (i, j) in c.bonds(rule) {
        let (x1, y1) = pts[i];
        let (x2, y2) = pts[j];
        writeln!(
            out,
            r##"  <line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="#cc3333" stroke-width="1.5" stroke-dasharray="4 3"/>"##,
            x1 + ox,
            y1 + oy,
            x2 + ox,
            y2 + oy
        )
        .unwrap();
    }
    // beads
    for (k, &(x, y)) in pts.iter().enumerate() {
        writeln!(
            out,
            r##"  <circle cx="{:.1}" cy="{:.1}" r="{BEAD_RADIUS:.1}" fill="#e8e8ff" stroke="#333377" stroke-width="1.2"/>"##,
            x + ox,
            y + oy
        )
        .unwrap();
        writeln!(
            out,
            r##"  <text x="{:.1}" y="{:.1}" font-size="7" text-anchor="middle" fill="#222222">{}</text>"##,
            x + ox,
            y + oy + 2.5,
            c.labels()[k].0
        )
        .unwrap();
    }
    writeln!(out, "</svg>").unwrap();
    out
}

/// Plain-text rendering: bead ids on a sheared character grid, two columns
/// per lattice step so diagonals stay readable.
fn render_ascii(c: &Conformation) -> String {
    if c.is_empty() {
        return String::new();
    }
    let cells: Vec<(i64, i64)> = c
        .points()
        .iter()
        .map(|p| ((2 * p.x - p.y) as i64, -p.y as i64))
        .collect();
    let min_col = cells.iter().map(|&(x, _)| x).min().unwrap();
    let min_row = cells.iter().map(|&(_, y)| y).min().unwrap();
    let max_col = cells.iter().map(|&(x, _)| x).max().unwrap();
    let max_row = cells.iter().map(|&(_, y)| y).max().unwrap();
    let width = (max_col - min_col + 1) as usize * 2;
    let height = (max_row - min_row + 1) as usize;
    let mut grid = vec![vec![' '; width]; height];
    for (k, &(col, row)) in cells.iter().enumerate() {
        let r = (row - min_row) as usize;
        let col0 = (col - min_col) as usize * 2;
        let label = format!("{}", c.labels()[k].0 % 100);
        for (i, ch) in label.chars().take(2).enumerate() {
            grid[r][col0 + i] = ch;
        }
    }
    let mut out = String::new();
    for row in grid {
        let line: String = row.into_iter().collect();
        writeln!(out, "{}", line.trim_end()).unwrap();
    }
    out
}
