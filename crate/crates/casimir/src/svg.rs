//! SVG heatmap of a phase diagram with the `F = 0` contour drawn on top.

use std::fmt::Write;

use casimir_core::analysis::PhaseDiagramGrid;

const CELL: f64 = 12.0;
const MARGIN: f64 = 60.0;

/// Blue (attraction) through white to red (repulsion), `t ∈ [−1, 1]`.
fn diverging(t: f64) -> String {
    let t = t.clamp(-1.0, 1.0);
    let (r, g, b) = if t < 0.0 {
        let s = -t;
        (1.0 - 0.8 * s, 1.0 - 0.6 * s, 1.0)
    } else {
        (1.0, 1.0 - 0.8 * t, 1.0 - 0.8 * t)
    };
    let c = |v: f64| (255.0 * v).round() as u8;
    format!("#{:02x}{:02x}{:02x}", c(r), c(g), c(b))
}

/// Segments of the zero level set, by marching squares over cell centres.
/// Squares touching an excluded cell are skipped.
pub fn zero_contour(values: &[Option<f64>], n: usize) -> Vec<((f64, f64), (f64, f64))> {
    let mut segments = Vec::new();
    let at = |i: usize, j: usize| values[i * n + j];
    for i in 0..n.saturating_sub(1) {
        for j in 0..n.saturating_sub(1) {
            // corners in order: (i,j) (i+1,j) (i+1,j+1) (i,j+1)
            let corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
            let Some(v) = corners.iter().map(|&(a, b)| at(a, b)).collect::<Option<Vec<f64>>>() else {
                continue;
            };
            let mut crossings = Vec::new();
            for k in 0..4 {
                let (a, b) = (v[k], v[(k + 1) % 4]);
                if (a > 0.0) != (b > 0.0) {
                    let t = a / (a - b);
                    let (p, q) = (corners[k], corners[(k + 1) % 4]);
                    crossings
                        .push((p.0 as f64 + t * (q.0 as f64 - p.0 as f64), p.1 as f64 + t * (q.1 as f64 - p.1 as f64)));
                }
            }
            if crossings.len() == 2 {
                segments.push((crossings[0], crossings[1]));
            } else if crossings.len() == 4 {
                segments.push((crossings[0], crossings[1]));
                segments.push((crossings[2], crossings[3]));
            }
        }
    }
    segments
}

pub fn heatmap(grid: &PhaseDiagramGrid, title: &str) -> String {
    let n = grid.spec.grid_n;
    let values: Vec<Option<f64>> = grid.cells.iter().map(|c| c.force.map(|f| f.ratio)).collect();
    let scale = values.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    let side = CELL * n as f64;
    let width = side + 2.0 * MARGIN;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{w}" viewBox="0 0 {w} {w}" font-family="sans-serif" font-size="11">"#,
        w = width
    );
    let _ = writeln!(s, r#"<text x="{}" y="20" text-anchor="middle" font-size="13">{}</text>"#, width / 2.0, title);
    // axis1 runs left to right, axis2 bottom to top
    let x = |i: f64| MARGIN + CELL * i;
    let y = |j: f64| MARGIN + side - CELL * j;
    for (k, v) in values.iter().enumerate() {
        let (i, j) = ((k / n) as f64, (k % n) as f64);
        let fill = match v {
            Some(r) => diverging(r / scale),
            None => "#bdbdbd".to_string(),
        };
        let _ = writeln!(
            s,
            r#"<rect x="{:.2}" y="{:.2}" width="{CELL}" height="{CELL}" fill="{fill}"/>"#,
            x(i),
            y(j + 1.0)
        );
    }
    for ((a0, b0), (a1, b1)) in zero_contour(&values, n) {
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black" stroke-width="1.5"/>"#,
            x(a0 + 0.5),
            y(b0 + 0.5),
            x(a1 + 0.5),
            y(b1 + 0.5)
        );
    }
    let _ =
        writeln!(s, r#"<rect x="{MARGIN}" y="{MARGIN}" width="{side}" height="{side}" fill="none" stroke="black"/>"#);
    let (a1, a2) = (grid.spec.axis1, grid.spec.axis2);
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, width / 2.0, width - 15.0, a1.name);
    let _ = writeln!(s, r#"<text x="{MARGIN}" y="{}" text-anchor="middle">{}</text>"#, MARGIN + side + 15.0, a1.min);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        MARGIN + side,
        MARGIN + side + 15.0,
        a1.max
    );
    let _ = writeln!(
        s,
        r#"<text x="15" y="{}" text-anchor="middle" transform="rotate(-90 15 {})">{}</text>"#,
        width / 2.0,
        width / 2.0,
        a2.name
    );
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#, MARGIN - 5.0, MARGIN + side, a2.min);
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#, MARGIN - 5.0, MARGIN + 4.0, a2.max);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="end">|F/F0| max {:.3e}; red repulsive, blue attractive, grey excluded</text>"#,
        width - 5.0,
        MARGIN - 8.0,
        scale
    );
    s.push_str("</svg>\n");
    s
}
