//! Arc diagrams as SVG: vertices on a line, each arc a half-circle above
//! it. Several partitions stack vertically in one document.

use std::fmt::Write;

use nckp_core::Partition;

const STEP: f64 = 28.0;
const MARGIN: f64 = 20.0;
const LABEL: f64 = 16.0;
const GAP: f64 = 12.0;

fn diagram_height(p: &Partition) -> f64 {
    let widest = p.arcs().iter().map(|&(i, j)| j - i).max().unwrap_or(0);
    widest as f64 * STEP / 2.0 + LABEL + GAP
}

pub fn render(parts: &[Partition]) -> String {
    let max_n = parts.iter().map(Partition::n).max().unwrap_or(0);
    let width = 2.0 * MARGIN + STEP * max_n.saturating_sub(1) as f64;
    let height = 2.0 * MARGIN + parts.iter().map(diagram_height).sum::<f64>();
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let mut top = MARGIN;
    for p in parts {
        let h = diagram_height(p);
        let base = top + h - LABEL - GAP / 2.0;
        let _ = writeln!(s, r#"<g data-partition="{p}">"#);
        for (i, j) in p.arcs() {
            let x1 = MARGIN + STEP * (i - 1) as f64;
            let x2 = MARGIN + STEP * (j - 1) as f64;
            let r = (x2 - x1) / 2.0;
            let _ = writeln!(
                s,
                r#"<path d="M {x1} {base} A {r} {r} 0 0 1 {x2} {base}" fill="none" stroke="black" stroke-width="1.5"/>"#
            );
        }
        for v in 1..=p.n() {
            let x = MARGIN + STEP * (v - 1) as f64;
            let _ = writeln!(s, r#"<circle cx="{x}" cy="{base}" r="3" fill="black"/>"#);
            let _ = writeln!(
                s,
                r#"<text x="{x}" y="{}" font-family="sans-serif" font-size="11" text-anchor="middle">{v}</text>"#,
                base + LABEL
            );
        }
        let _ = writeln!(s, "</g>");
        top += h;
    }
    s.push_str("</svg>\n");
    s
}
