//! Deterministic ASCII and SVG drawings of arc diagrams.
//!
//! Upper arcs are drawn above the vertex line and lower arcs below it.
//! Loops are marked next to the line. When a diagram uses more than one
//! colour every arc and loop carries its colour number.

use std::fmt::Write as _;

use crate::diagram::{Arc, ArcDiagram, Colour, DEFAULT_COLOUR};

const COLUMN: usize = 4;

/// Assigns each arc a height: one more than anything it encloses, then
/// raised until its horizontal run clashes with no arc already placed.
fn levels(arcs: &[Arc]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..arcs.len()).collect();
    order.sort_by_key(|&i| (arcs[i].span(), arcs[i].open));
    let mut level = vec![0; arcs.len()];
    for (pos, &i) in order.iter().enumerate() {
        let a = arcs[i];
        let placed = &order[..pos];
        let mut h = placed
            .iter()
            .filter(|&&j| a.open <= arcs[j].open && arcs[j].close <= a.close)
            .map(|&j| level[j])
            .max()
            .unwrap_or(0)
            + 1;
        while placed
            .iter()
            .any(|&j| level[j] == h && arcs[j].open <= a.close && a.open <= arcs[j].close)
        {
            h += 1;
        }
        level[i] = h;
    }
    level
}

fn colour_tag(c: Colour, multi: bool) -> Option<String> {
    multi.then(|| c.to_string())
}

/// Rows of one layer, nearest the vertex line first.
fn layer_rows(arcs: &[Arc], width: usize, multi: bool) -> Vec<Vec<char>> {
    let lv = levels(arcs);
    let height = lv.iter().copied().max().unwrap_or(0);
    let mut rows = vec![vec![' '; width]; height];
    let x = |v: usize| (v - 1) * COLUMN;
    // Highest arcs first so that lower ones draw over their horizontals.
    let mut order: Vec<usize> = (0..arcs.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(lv[i]));
    for i in order {
        let a = arcs[i];
        let top = lv[i] - 1;
        let (x0, x1) = (x(a.open), x(a.close));
        for cell in &mut rows[top][x0 + 1..x1] {
            if *cell == ' ' {
                *cell = '-';
            }
        }
        rows[top][x0] = '+';
        rows[top][x1] = '+';
        for row in rows.iter_mut().take(top) {
            row[x0] = '|';
            row[x1] = '|';
        }
        if let Some(tag) = colour_tag(a.colour, multi) {
            let mid = (x0 + x1) / 2;
            for (k, ch) in tag.chars().enumerate() {
                if mid + k < x1 {
                    rows[top][mid + k] = ch;
                }
            }
        }
    }
    rows
}

fn trim(row: &[char]) -> String {
    row.iter().collect::<String>().trim_end().to_string()
}

/// Multi-line ASCII drawing ending with a newline.
pub fn render_ascii(d: &ArcDiagram) -> String {
    let n = d.n();
    if n == 0 {
        return "(empty)\n".to_string();
    }
    let multi = d.colours().len() > 1;
    let width = (n - 1) * COLUMN + 3;
    let mut out = String::new();

    let upper = layer_rows(d.upper(), width, multi);
    for row in upper.iter().rev() {
        out.push_str(&trim(row));
        out.push('\n');
    }
    if !d.loops().is_empty() {
        let mut row = vec![' '; width];
        for (&v, &c) in d.loops() {
            let x = (v - 1) * COLUMN;
            row[x] = 'o';
            if let Some(tag) = colour_tag(c, multi) {
                for (k, ch) in tag.chars().enumerate() {
                    row[x + 1 + k] = ch;
                }
            }
        }
        out.push_str(&trim(&row));
        out.push('\n');
    }
    let mut labels = String::new();
    for v in 1..=n {
        let _ = write!(labels, "{:<width$}", v, width = COLUMN);
    }
    out.push_str(labels.trim_end());
    out.push('\n');
    for row in layer_rows(d.lower(), width, multi) {
        out.push_str(&trim(&row));
        out.push('\n');
    }
    out
}

const SPACING: f64 = 40.0;
const RISE: f64 = 12.0;
const MARGIN: f64 = 20.0;
const PALETTE: [&str; 6] = [
    "#000000", "#c0392b", "#2471a3", "#1e8449", "#b9770e", "#7d3c98",
];

fn stroke(c: Colour) -> &'static str {
    PALETTE[(c.saturating_sub(DEFAULT_COLOUR) as usize) % PALETTE.len()]
}

/// Standalone SVG document. Vertices sit on a horizontal line at fixed
/// spacing and each arc rises in proportion to its span.
pub fn render_svg(d: &ArcDiagram) -> String {
    let n = d.n();
    let multi = d.colours().len() > 1;
    let tallest = |arcs: &[Arc]| arcs.iter().map(|a| a.span()).max().unwrap_or(0) as f64 * RISE;
    let up = tallest(d.upper())
        + if d.loops().is_empty() {
            0.0
        } else {
            2.0 * RISE
        };
    let down = tallest(d.lower());
    let width = (n.max(1) - 1) as f64 * SPACING + 2.0 * MARGIN;
    let base = MARGIN + up + 10.0;
    let height = base + down + MARGIN + 20.0;
    let x = |v: usize| MARGIN + (v - 1) as f64 * SPACING;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    if n > 0 {
        let _ = writeln!(
            s,
            r#"  <line x1="{:.1}" y1="{base:.1}" x2="{:.1}" y2="{base:.1}" stroke="silver"/>"#,
            x(1),
            x(n)
        );
    }
    for (arcs, sweep, sign) in [(d.upper(), 1, -1.0), (d.lower(), 0, 1.0)] {
        for a in arcs {
            let (x0, x1) = (x(a.open), x(a.close));
            let ry = a.span() as f64 * RISE;
            let _ = writeln!(
                s,
                r#"  <path d="M {x0:.1} {base:.1} A {:.1} {ry:.1} 0 0 {sweep} {x1:.1} {base:.1}" fill="none" stroke="{}"/>"#,
                (x1 - x0) / 2.0,
                stroke(a.colour)
            );
            if let Some(tag) = colour_tag(a.colour, multi) {
                let ty = base + sign * (ry + 4.0);
                let _ = writeln!(
                    s,
                    r#"  <text x="{:.1}" y="{ty:.1}" font-size="10" text-anchor="middle">{tag}</text>"#,
                    (x0 + x1) / 2.0
                );
            }
        }
    }
    for (&v, &c) in d.loops() {
        let _ = writeln!(
            s,
            r#"  <circle cx="{:.1}" cy="{:.1}" r="{:.1}" fill="none" stroke="{}"/>"#,
            x(v),
            base - RISE / 2.0,
            RISE / 2.0,
            stroke(c)
        );
        if let Some(tag) = colour_tag(c, multi) {
            let _ = writeln!(
                s,
                r#"  <text x="{:.1}" y="{:.1}" font-size="10" text-anchor="middle">{tag}</text>"#,
                x(v),
                base - RISE - 4.0
            );
        }
    }
    for v in 1..=n {
        let _ = writeln!(
            s,
            r#"  <circle cx="{:.1}" cy="{base:.1}" r="3" fill="black"/>"#,
            x(v)
        );
        let _ = writeln!(
            s,
            r#"  <text x="{:.1}" y="{:.1}" font-size="11" text-anchor="middle">{v}</text>"#,
            x(v),
            base + down + 16.0
        );
    }
    s.push_str("</svg>\n");
    s
}
