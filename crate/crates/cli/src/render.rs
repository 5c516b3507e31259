//! CSV and SVG output. SVG keeps the section's y-down convention, so the
//! waterline is at the top of the picture.

use std::fmt::Write;

use hullmap::Point;

pub fn contour_csv(thetas: &[f64], points: &[Point]) -> String {
    let mut out = String::from("theta,x,y\n");
    for (t, p) in thetas.iter().zip(points) {
        let _ = writeln!(out, "{t},{},{}", p.x, p.y);
    }
    out
}

pub struct Curve {
    label: &'static str,
    colour: &'static str,
    dashed: bool,
    points: Vec<Point>,
}

impl Curve {
    pub fn mapped(points: Vec<Point>) -> Self {
        Self {
            label: "mapped",
            colour: "#c0392b",
            dashed: false,
            points,
        }
    }

    pub fn lewis(points: Vec<Point>) -> Self {
        Self {
            label: "Lewis",
            colour: "#2471a3",
            dashed: true,
            points,
        }
    }
}

const SIZE: f64 = 560.0;
const MARGIN: f64 = 40.0;

pub fn section_svg(real: &[Point], curves: &[Curve]) -> String {
    let all = real.iter().chain(curves.iter().flat_map(|c| c.points.iter()));
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for p in all {
        x0 = x0.min(p.x);
        x1 = x1.max(p.x);
        y0 = y0.min(p.y);
        y1 = y1.max(p.y);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    let span = (x1 - x0).max(y1 - y0).max(f64::MIN_POSITIVE);
    let s = SIZE / span;
    let width = (x1 - x0) * s + 2.0 * MARGIN;
    let height = (y1 - y0) * s + 2.0 * MARGIN + 20.0;
    let px = |p: &Point| (MARGIN + (p.x - x0) * s, MARGIN + (p.y - y0) * s);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.1}" height="{height:.1}" viewBox="0 0 {width:.1} {height:.1}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    if y0 <= 0.0 && y1 >= 0.0 {
        let (_, wy) = px(&Point::new(x0, 0.0));
        let _ = writeln!(
            svg,
            "<line x1=\"{:.2}\" y1=\"{wy:.2}\" x2=\"{:.2}\" y2=\"{wy:.2}\" stroke=\"#999\" stroke-dasharray=\"2 4\"/>",
            MARGIN / 2.0,
            width - MARGIN / 2.0
        );
    }
    for c in curves {
        let pts: Vec<String> = c
            .points
            .iter()
            .map(|p| {
                let (x, y) = px(p);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let dash = if c.dashed { r#" stroke-dasharray="6 3""# } else { "" };
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{}" stroke-width="1.5"{dash} points="{}"/>"#,
            c.colour,
            pts.join(" ")
        );
    }
    for p in real {
        let (x, y) = px(p);
        let _ = writeln!(svg, r#"<circle cx="{x:.2}" cy="{y:.2}" r="2.5" fill="black"/>"#);
    }

    let mut lx = MARGIN;
    let ly = height - 12.0;
    let mut legend = Vec::new();
    if !real.is_empty() {
        legend.push(("offsets", "black"));
    }
    legend.extend(curves.iter().map(|c| (c.label, c.colour)));
    for (label, colour) in legend {
        let _ = writeln!(
            svg,
            r#"<text x="{lx:.1}" y="{ly:.1}" font-family="sans-serif" font-size="12" fill="{colour}">{label}</text>"#
        );
        lx += 90.0;
    }
    svg.push_str("</svg>\n");
    svg
}
