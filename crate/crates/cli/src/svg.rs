//! Minimal deterministic SVG writer. Exact points become floats only here.

use std::fmt::Write;

use decagon::Point;

pub const RED: &str = "#c0392b";
pub const GREEN: &str = "#27ae60";
pub const TABLE: &str = "#7f8c8d";
pub const OUTLINE: &str = "#2c3e50";

#[derive(Debug, Clone)]
pub struct Shape {
    pub points: Vec<(f64, f64)>,
    pub fill: String,
    pub class: String,
}

impl Shape {
    pub fn new(vertices: &[Point], fill: &str, class: &str) -> Self {
        let points = vertices
            .iter()
            .map(|v| {
                let iv = v.approx(64);
                (iv.re.mid(), iv.im.mid())
            })
            .collect();
        Shape {
            points,
            fill: fill.to_string(),
            class: class.to_string(),
        }
    }
}

fn bounds(shapes: &[Shape]) -> (f64, f64, f64, f64) {
    let mut it = shapes.iter().flat_map(|s| s.points.iter());
    let Some(&(x0, y0)) = it.next() else {
        return (0.0, 0.0, 1.0, 1.0);
    };
    let (mut lo_x, mut lo_y, mut hi_x, mut hi_y) = (x0, y0, x0, y0);
    for &(x, y) in it {
        lo_x = lo_x.min(x);
        lo_y = lo_y.min(y);
        hi_x = hi_x.max(x);
        hi_y = hi_y.max(y);
    }
    let pad = 0.02 * (hi_x - lo_x).max(hi_y - lo_y).max(1e-9);
    (lo_x - pad, lo_y - pad, hi_x + pad, hi_y + pad)
}

/// y is flipped so that the picture has the usual orientation.
pub fn document(shapes: &[Shape]) -> String {
    let (x0, y0, x1, y1) = bounds(shapes);
    let (w, h) = (x1 - x0, y1 - y0);
    let stroke = w.max(h) / 1000.0;
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{:.6} {:.6} {:.6} {:.6}" width="800" height="{:.0}">"#,
        x0,
        -y1,
        w,
        h,
        800.0 * h / w
    )
    .unwrap();
    for s in shapes {
        let pts: Vec<String> = s
            .points
            .iter()
            .map(|(x, y)| format!("{:.6},{:.6}", x, -y))
            .collect();
        writeln!(
            out,
            r#"<polygon class="{}" points="{}" fill="{}" stroke="{}" stroke-width="{:.6}"/>"#,
            s.class,
            pts.join(" "),
            s.fill,
            OUTLINE,
            stroke
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}
