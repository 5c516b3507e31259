//! Section offsets: ingestion, validation and principal dimensions.
//!
//! Coordinates are `x` to starboard and `y` as depth below the waterline
//! (positive downward). A symmetric section lists the starboard half from the
//! keel `(0, D_s)` up to the waterline `(B_s/2, 0)`. A non-symmetric section
//! runs from the port waterline through the keel to the starboard waterline.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance_squared(&self, other: &Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Self { x, y }
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

/// Principal dimensions of a section.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extents {
    pub breadth: f64,
    pub draft: f64,
    pub half_breadth_left: f64,
    pub half_breadth_right: f64,
}

/// A validated, ordered set of section boundary points.
#[derive(Debug, Clone, PartialEq)]
pub struct SectionOffsets {
    points: Vec<Point>,
    symmetric: bool,
    extents: Extents,
}

impl SectionOffsets {
    /// Validates `points` against the traversal and endpoint conventions for
    /// the declared symmetry.
    pub fn new(points: Vec<Point>, symmetric: bool) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::Validation(format!(
                "at least 3 points required, found {}",
                points.len()
            )));
        }
        if let Some(i) = points.iter().position(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(Error::Validation(format!("non-finite coordinate at point {i}")));
        }
        if let Some(i) = points.iter().position(|p| p.y < 0.0) {
            return Err(Error::Validation(format!(
                "point {i} lies above the waterline (y < 0)"
            )));
        }
        if let Some(i) = points.windows(2).position(|w| w[0] == w[1]) {
            return Err(Error::Validation(format!(
                "coincident consecutive points at {} and {}",
                i,
                i + 1
            )));
        }

        let extents = section_extents(&points, symmetric)?;
        let first = points[0];
        let last = points[points.len() - 1];
        if symmetric {
            if first.x != 0.0 || first.y != extents.draft {
                return Err(Error::Validation(
                    "symmetric section must start at the keel point (0, D_s)".into(),
                ));
            }
            if last.y != 0.0 {
                return Err(Error::Validation(
                    "symmetric section must end on the waterline (y = 0)".into(),
                ));
            }
        } else {
            if first.y != 0.0 || last.y != 0.0 {
                return Err(Error::Validation(
                    "non-symmetric section must start and end on the waterline (y = 0)".into(),
                ));
            }
            if extents.half_breadth_left <= 0.0 || extents.half_breadth_right <= 0.0 {
                return Err(Error::Validation(
                    "waterline endpoints must lie on opposite sides of the centreline".into(),
                ));
            }
        }

        Ok(Self {
            points,
            symmetric,
            extents,
        })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn extents(&self) -> Extents {
        self.extents
    }

    pub fn breadth(&self) -> f64 {
        self.extents.breadth
    }

    pub fn draft(&self) -> f64 {
        self.extents.draft
    }

    /// Characteristic length used to scale default tolerances.
    pub fn scale(&self) -> f64 {
        self.extents.breadth.max(self.extents.draft)
    }

    /// Full submerged area. For a symmetric section this is twice the area
    /// between the half-contour and the centreline.
    pub fn area(&self) -> f64 {
        if self.symmetric {
            let mut poly = self.points.clone();
            poly.push(Point::new(0.0, 0.0));
            2.0 * shoelace(&poly).abs()
        } else {
            shoelace(&self.points).abs()
        }
    }

    /// Areas to port (`x <= 0`) and starboard (`x >= 0`) of the centreline.
    pub fn half_areas(&self) -> (f64, f64) {
        if self.symmetric {
            let half = 0.5 * self.area();
            return (half, half);
        }
        let left = shoelace(&clip_half_plane(&self.points, -1.0)).abs();
        let right = shoelace(&clip_half_plane(&self.points, 1.0)).abs();
        (left, right)
    }

    /// Mirrors a half-section about the centreline into a full non-symmetric
    /// section. Non-symmetric sections are returned unchanged.
    pub fn mirror_to_full(&self) -> Result<SectionOffsets> {
        if !self.symmetric {
            return Ok(self.clone());
        }
        let mut full: Vec<Point> = self
            .points
            .iter()
            .rev()
            .map(|p| Point::new(-p.x, p.y))
            .collect();
        full.extend(self.points.iter().skip(1).copied());
        SectionOffsets::new(full, false)
    }

    /// Multiplies every coordinate by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<SectionOffsets> {
        let points = self
            .points
            .iter()
            .map(|p| Point::new(p.x * factor, p.y * factor))
            .collect();
        SectionOffsets::new(points, self.symmetric)
    }

    /// Serializes to the offsets text format read by [`parse_offsets`].
    pub fn to_offsets_text(&self) -> String {
        let mut out = String::from(if self.symmetric {
            "symmetric\n"
        } else {
            "asymmetric\n"
        });
        for p in &self.points {
            let _ = writeln!(out, "{},{}", p.x, p.y);
        }
        out
    }
}

/// Parses offsets text: a `symmetric`/`asymmetric` header followed by one
/// `x,y` pair per line. Blank lines and `#` comments are skipped.
pub fn parse_offsets(text: &str) -> Result<SectionOffsets> {
    let mut symmetric = None;
    let mut points = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if symmetric.is_none() {
            symmetric = Some(match line.to_ascii_lowercase().as_str() {
                "symmetric" => true,
                "asymmetric" => false,
                other => {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!(
                            "expected header `symmetric` or `asymmetric`, found `{other}`"
                        ),
                    })
                }
            });
            continue;
        }

        let mut fields = line.split(',');
        let (Some(xs), Some(ys), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected `x,y`, found `{line}`"),
            });
        };
        let parse = |s: &str, name: &str| {
            s.trim().parse::<f64>().map_err(|e| Error::Parse {
                line: line_no,
                message: format!("bad {name} value `{}`: {e}", s.trim()),
            })
        };
        points.push(Point::new(parse(xs, "x")?, parse(ys, "y")?));
    }

    let symmetric = symmetric.ok_or(Error::Parse {
        line: text.lines().count().max(1),
        message: "missing `symmetric`/`asymmetric` header".into(),
    })?;
    SectionOffsets::new(points, symmetric)
}

/// Breadth, draft and the two waterline half-breadths of an ordered point
/// list.
pub fn section_extents(points: &[Point], symmetric: bool) -> Result<Extents> {
    let (Some(first), Some(last)) = (points.first(), points.last()) else {
        return Err(Error::DegenerateSection("no points".into()));
    };
    let draft = points.iter().map(|p| p.y).fold(f64::NEG_INFINITY, f64::max);
    let (breadth, left, right) = if symmetric {
        let half = last.x;
        (2.0 * half, half, half)
    } else {
        (last.x - first.x, -first.x, last.x)
    };
    if !(draft > 0.0) {
        return Err(Error::DegenerateSection(format!(
            "draft must be positive, found {draft}"
        )));
    }
    if !(breadth > 0.0) {
        return Err(Error::DegenerateSection(format!(
            "breadth must be positive, found {breadth}"
        )));
    }
    Ok(Extents {
        breadth,
        draft,
        half_breadth_left: left,
        half_breadth_right: right,
    })
}

fn shoelace(poly: &[Point]) -> f64 {
    let n = poly.len();
    0.5 * (0..n)
        .map(|k| {
            let p = poly[k];
            let q = poly[(k + 1) % n];
            p.x * q.y - q.x * p.y
        })
        .sum::<f64>()
}

/// Sutherland-Hodgman against `side * x >= 0` for a closed polygon.
fn clip_half_plane(poly: &[Point], side: f64) -> Vec<Point> {
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 2);
    for k in 0..n {
        let p = poly[k];
        let q = poly[(k + 1) % n];
        let p_in = side * p.x >= 0.0;
        let q_in = side * q.x >= 0.0;
        if p_in {
            out.push(p);
        }
        if p_in != q_in {
            let t = p.x / (p.x - q.x);
            out.push(Point::new(0.0, p.y + t * (q.y - p.y)));
        }
    }
    out
}
