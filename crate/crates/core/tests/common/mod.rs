//! Test geometries shared by the integration suites.
#![allow(dead_code)]

use std::f64::consts::FRAC_PI_2;

use hullmap::{Point, SectionOffsets};

/// Points along a polyline with every vertex kept and each edge split
/// into pieces no longer than `spacing`.
pub fn sample_edges(vertices: &[Point], spacing: f64) -> Vec<Point> {
    let mut out = vec![vertices[0]];
    for w in vertices.windows(2) {
        let (a, b) = (w[0], w[1]);
        let len = a.distance_squared(&b).sqrt();
        let pieces = (len / spacing - 1e-9).ceil().max(1.0) as usize;
        for k in 1..=pieces {
            let t = k as f64 / pieces as f64;
            out.push(Point::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)));
        }
    }
    out
}

/// `count` points equally spaced in arc length along a dense polyline.
pub fn resample(dense: &[Point], count: usize) -> Vec<Point> {
    let mut cumulative = vec![0.0];
    for w in dense.windows(2) {
        let last = *cumulative.last().unwrap();
        cumulative.push(last + w[0].distance_squared(&w[1]).sqrt());
    }
    let total = *cumulative.last().unwrap();
    let mut out = Vec::with_capacity(count);
    let mut seg = 0;
    for k in 0..count {
        let s = total * k as f64 / (count - 1) as f64;
        while seg + 2 < cumulative.len() && cumulative[seg + 1] < s {
            seg += 1;
        }
        let (a, b) = (dense[seg], dense[seg + 1]);
        let span = cumulative[seg + 1] - cumulative[seg];
        let t = if span > 0.0 { ((s - cumulative[seg]) / span).clamp(0.0, 1.0) } else { 0.0 };
        out.push(Point::new(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)));
    }
    *out.last_mut().unwrap() = *dense.last().unwrap();
    out[0] = dense[0];
    out
}

fn symmetric(points: Vec<Point>) -> SectionOffsets {
    SectionOffsets::new(points, true).expect("valid symmetric section")
}

/// Quarter of the unit circle, keel to waterline.
pub fn circle(count: usize) -> SectionOffsets {
    half_ellipse(1.0, 1.0, count)
}

/// Quarter ellipse with waterline half-breadth `half_breadth` and draft
/// `draft`, points equally spaced in the polar angle.
pub fn half_ellipse(half_breadth: f64, draft: f64, count: usize) -> SectionOffsets {
    let pts = (0..count)
        .map(|k| {
            if k == 0 {
                return Point::new(0.0, draft);
            }
            if k == count - 1 {
                return Point::new(half_breadth, 0.0);
            }
            let t = FRAC_PI_2 * k as f64 / (count - 1) as f64;
            Point::new(half_breadth * t.sin(), draft * t.cos())
        })
        .collect();
    symmetric(pts)
}

/// Half of a `breadth` x `draft` box, 41 points for the 2 x 1 box with
/// the bilge corner at index 20.
pub fn rectangle(breadth: f64, draft: f64, spacing: f64) -> SectionOffsets {
    let half = breadth / 2.0;
    symmetric(sample_edges(
        &[Point::new(0.0, draft), Point::new(half, draft), Point::new(half, 0.0)],
        spacing,
    ))
}

/// Deep section with a round bulb below a narrow neck.
pub fn bulb() -> SectionOffsets {
    let (centre, radius) = (0.75, 0.25);
    let mut dense: Vec<Point> = (0..=140)
        .map(|deg| {
            let a = (deg as f64).to_radians();
            Point::new(radius * a.sin(), centre + radius * a.cos())
        })
        .collect();
    let neck = *dense.last().unwrap();
    let (ctrl, top) = (Point::new(0.10, 0.30), Point::new(0.45, 0.0));
    for k in 1..=200 {
        let t = k as f64 / 200.0;
        let u = 1.0 - t;
        dense.push(Point::new(
            u * u * neck.x + 2.0 * u * t * ctrl.x + t * t * top.x,
            u * u * neck.y + 2.0 * u * t * ctrl.y + t * t * top.y,
        ));
    }
    symmetric(resample(&dense, 41))
}

/// Narrow, deep V-shaped section.
pub fn fine() -> SectionOffsets {
    let mut dense: Vec<Point> = (0..400)
        .map(|k| {
            let t = FRAC_PI_2 * k as f64 / 400.0;
            Point::new(0.4 * t.sin() * (0.35 + 0.65 * t.sin()), 1.2 * t.cos())
        })
        .collect();
    dense.push(Point::new(0.4, 0.0));
    symmetric(resample(&dense, 41))
}

/// Planing-hull section: straight deadrise to a hard chine, then a
/// near-vertical side.
pub fn chine() -> SectionOffsets {
    symmetric(sample_edges(
        &[Point::new(0.0, 0.7), Point::new(0.9, 0.45), Point::new(1.0, 0.0)],
        0.05,
    ))
}

/// The 2 x 1 box (freeboard 1) heeled by `degrees` about the waterline
/// centre and cut at the waterline, port side first.
pub fn heeled_rectangle(degrees: f64, spacing: f64) -> SectionOffsets {
    let (s, c) = degrees.to_radians().sin_cos();
    let rotate = |x: f64, y: f64| Point::new(c * x - s * y, s * x + c * y);
    // upright corners, y down, freeboard above y = 0
    let box_corners = [
        rotate(-1.0, -1.0),
        rotate(-1.0, 1.0),
        rotate(1.0, 1.0),
        rotate(1.0, -1.0),
    ];
    let crossing = |a: Point, b: Point| {
        let t = a.y / (a.y - b.y);
        Point::new(a.x + t * (b.x - a.x), 0.0)
    };
    let port = crossing(box_corners[0], box_corners[1]);
    let starboard = crossing(box_corners[2], box_corners[3]);
    let pts = sample_edges(&[port, box_corners[1], box_corners[2], starboard], spacing);
    SectionOffsets::new(pts, false).expect("valid heeled section")
}

/// Every symmetric shape used for the property checks.
pub fn symmetric_shapes() -> Vec<(&'static str, SectionOffsets)> {
    vec![
        ("circle", circle(41)),
        ("ellipse", half_ellipse(2.0, 1.0, 41)),
        ("rectangle", rectangle(2.0, 1.0, 0.05)),
        ("bulb", bulb()),
        ("fine", fine()),
        ("chine", chine()),
    ]
}

/// Mirrors a half-section, extends both sides vertically by `freeboard`,
/// heels the result by `degrees` about the waterline centre and keeps the
/// part below the waterline.
pub fn heeled(half: &SectionOffsets, degrees: f64, freeboard: f64) -> SectionOffsets {
    let full = half.mirror_to_full().unwrap();
    let pts = full.points();
    let (first, last) = (pts[0], pts[pts.len() - 1]);
    let mut outline = vec![Point::new(first.x, -freeboard)];
    outline.extend_from_slice(pts);
    outline.push(Point::new(last.x, -freeboard));

    let (s, c) = degrees.to_radians().sin_cos();
    let rotated: Vec<Point> = outline
        .iter()
        .map(|p| Point::new(c * p.x - s * p.y, s * p.x + c * p.y))
        .collect();
    let mut clipped = Vec::new();
    for w in rotated.windows(2) {
        let (a, b) = (w[0], w[1]);
        if a.y >= 0.0 && clipped.last() != Some(&a) {
            clipped.push(a);
        }
        if (a.y < 0.0) != (b.y < 0.0) {
            let t = a.y / (a.y - b.y);
            clipped.push(Point::new(a.x + t * (b.x - a.x), 0.0));
        }
    }
    SectionOffsets::new(clipped, false).expect("valid heeled section")
}
