//! Angles on the unit circle for each section point.
//!
//! Each point `(x_i, y_i)` gets a fixed normal direction from its neighbours.
//! Its angle `θ_i` is where the current mapped boundary crosses that normal
//! line, i.e. a root of
//!
//! ```text
//! r(θ) = (x_i - x_0(θ)) cos φ_i - (y_i - y_0(θ)) sin φ_i
//! ```
//!
//! Roots are bracketed by a uniform scan and refined by bisection.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::mapping::{alt, ScaledCoefficients};
use crate::section::{Point, SectionOffsets};

/// Samples in the bracket scan.
pub const SCAN_SAMPLES: usize = 64;
/// Bracket widening beyond the neighbours' previous angles, radians.
pub const BRACKET_MARGIN: f64 = 0.1;
/// Allowance past ±π/2 for the waterline angles of non-symmetric sections.
pub const ASYMMETRIC_SLACK: f64 = 0.35;
pub const BISECTION_TOL: f64 = 1e-12;
pub const MAX_BISECTION_STEPS: usize = 200;

/// Unit normal `h = sin φ î + cos φ ĵ` stored as `(cos φ, sin φ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalDirection {
    pub cos_phi: f64,
    pub sin_phi: f64,
}

impl NormalDirection {
    /// Normal to the chord running from `from` to `to`.
    fn of_chord(from: Point, to: Point, index: usize) -> Result<Self> {
        let dx = to.x - from.x;
        let dy = to.y - from.y;
        let len = dx.hypot(dy);
        if !(len > 0.0) {
            return Err(Error::DegenerateNormal { index });
        }
        Ok(Self {
            cos_phi: dx / len,
            sin_phi: -dy / len,
        })
    }
}

/// Normal at interior point `i` from the secant through `i-1` and `i+1`.
pub fn interior_normal(points: &[Point], i: usize) -> Result<NormalDirection> {
    if i == 0 || i + 1 >= points.len() {
        return Err(Error::Config(format!(
            "point {i} is not interior to a list of {}",
            points.len()
        )));
    }
    NormalDirection::of_chord(points[i - 1], points[i + 1], i)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    First,
    Last,
}

/// One-sided normal at a waterline endpoint. Both ends use the chord in
/// the direction of increasing index.
pub fn endpoint_normal(points: &[Point], end: Endpoint) -> Result<NormalDirection> {
    let n = points.len();
    if n < 2 {
        return Err(Error::Dimension {
            expected: 2,
            found: n,
        });
    }
    match end {
        Endpoint::First => NormalDirection::of_chord(points[0], points[1], 0),
        Endpoint::Last => NormalDirection::of_chord(points[n - 2], points[n - 1], n - 1),
    }
}

/// Normal directions for every point of a section. Endpoints of a
/// symmetric section have fixed angles and get the one-sided normal only
/// for completeness.
pub fn section_normals(section: &SectionOffsets) -> Result<Vec<NormalDirection>> {
    let pts = section.points();
    let last = pts.len() - 1;
    let mut out = Vec::with_capacity(pts.len());
    out.push(endpoint_normal(pts, Endpoint::First)?);
    for i in 1..last {
        out.push(interior_normal(pts, i)?);
    }
    out.push(endpoint_normal(pts, Endpoint::Last)?);
    Ok(out)
}

/// Normal-projection residual in its expanded trigonometric form:
///
/// `x_i cos φ + cos φ Σ(-1)^n Fa sin((2n-1)θ) - y_i sin φ + sin φ Σ(-1)^n Fa cos((2n-1)θ)`
pub fn theta_residual(
    scaled: &ScaledCoefficients,
    point: Point,
    normal: NormalDirection,
    theta: f64,
) -> f64 {
    let mut sum_sin = 0.0;
    let mut sum_cos = 0.0;
    for (n, &fa) in scaled.fa.iter().enumerate() {
        let k = 2.0 * n as f64 - 1.0;
        let (s, c) = (k * theta).sin_cos();
        sum_sin += alt(n) * fa * s;
        sum_cos += alt(n) * fa * c;
    }
    point.x * normal.cos_phi + normal.cos_phi * sum_sin - point.y * normal.sin_phi
        + normal.sin_phi * sum_cos
}

/// The same residual as the cross product of the normal with the offset
/// between the point and the mapped boundary point.
#[inline]
pub fn projection_residual(
    scaled: &ScaledCoefficients,
    point: Point,
    normal: NormalDirection,
    theta: f64,
) -> f64 {
    let b = scaled.boundary(theta);
    (point.x - b.x) * normal.cos_phi - (point.y - b.y) * normal.sin_phi
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RootOutcome {
    Root { theta: f64, iterations: usize },
    NoRoot,
}

impl RootOutcome {
    pub fn theta(self) -> Option<f64> {
        match self {
            RootOutcome::Root { theta, .. } => Some(theta),
            RootOutcome::NoRoot => None,
        }
    }
}

/// Finds a root of the residual in `[lo, hi]`.
///
/// The bracket is scanned at [`SCAN_SAMPLES`] uniform intervals; among the
/// intervals with a sign change, the one whose midpoint is nearest
/// `preferred` (default: the bracket midpoint) is bisected to `tol`.
pub fn solve_theta(
    scaled: &ScaledCoefficients,
    point: Point,
    normal: NormalDirection,
    (lo, hi): (f64, f64),
    preferred: Option<f64>,
    tol: f64,
) -> RootOutcome {
    if !(hi > lo) {
        return RootOutcome::NoRoot;
    }
    let target = preferred.unwrap_or(0.5 * (lo + hi));
    let f = |t: f64| projection_residual(scaled, point, normal, t);
    let step = (hi - lo) / SCAN_SAMPLES as f64;
    let at = |k: usize| if k == SCAN_SAMPLES { hi } else { lo + step * k as f64 };

    let mut best: Option<(f64, f64, f64, f64)> = None;
    let mut best_dist = f64::INFINITY;
    let mut t_prev = lo;
    let mut r_prev = f(lo);
    for k in 1..=SCAN_SAMPLES {
        let t = at(k);
        let r = f(t);
        let candidate = if r_prev == 0.0 {
            Some((t_prev, t_prev, 0.0, 0.0))
        } else if r == 0.0 {
            Some((t, t, 0.0, 0.0))
        } else if (r_prev < 0.0) != (r < 0.0) {
            Some((t_prev, t, r_prev, r))
        } else {
            None
        };
        if let Some(c) = candidate {
            let dist = (0.5 * (c.0 + c.1) - target).abs();
            if dist < best_dist {
                best_dist = dist;
                best = Some(c);
            }
        }
        t_prev = t;
        r_prev = r;
    }

    let Some((mut a, mut b, mut ra, _)) = best else {
        return RootOutcome::NoRoot;
    };
    let mut iterations = 0;
    while b - a > tol && iterations < MAX_BISECTION_STEPS {
        let m = 0.5 * (a + b);
        let rm = f(m);
        iterations += 1;
        if rm == 0.0 {
            a = m;
            b = m;
            break;
        }
        if (ra < 0.0) == (rm < 0.0) {
            a = m;
            ra = rm;
        } else {
            b = m;
        }
    }
    RootOutcome::Root {
        theta: 0.5 * (a + b),
        iterations,
    }
}

/// Angles for every section point.
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaAssignment {
    pub theta: Vec<f64>,
    /// Points with no root, whose angle was extrapolated from the two
    /// preceding points.
    pub unresolved: Vec<usize>,
}

impl ThetaAssignment {
    /// Starting angles spread uniformly by index over the angle domain.
    pub fn uniform(len: usize, symmetric: bool) -> Self {
        let last = (len.max(2) - 1) as f64;
        let theta = (0..len)
            .map(|i| {
                let u = i as f64 / last;
                if symmetric {
                    u * FRAC_PI_2
                } else {
                    -FRAC_PI_2 + u * std::f64::consts::PI
                }
            })
            .collect();
        Self {
            theta,
            unresolved: Vec::new(),
        }
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.theta.windows(2).all(|w| w[1] >= w[0])
    }
}

/// Admissible angle range for a section.
pub fn theta_domain(symmetric: bool) -> (f64, f64) {
    if symmetric {
        (0.0, FRAC_PI_2)
    } else {
        (-FRAC_PI_2 - ASYMMETRIC_SLACK, FRAC_PI_2 + ASYMMETRIC_SLACK)
    }
}

/// Solves point angles for a fixed section. Normals are computed once and
/// reused across iterations.
#[derive(Debug, Clone)]
pub struct ThetaSolver {
    points: Vec<Point>,
    normals: Vec<NormalDirection>,
    symmetric: bool,
    pub tol: f64,
}

impl ThetaSolver {
    pub fn new(section: &SectionOffsets) -> Result<Self> {
        Ok(Self {
            points: section.points().to_vec(),
            normals: section_normals(section)?,
            symmetric: section.is_symmetric(),
            tol: BISECTION_TOL,
        })
    }

    pub fn normals(&self) -> &[NormalDirection] {
        &self.normals
    }

    /// One pass of angle assignment against the current boundary.
    ///
    /// Point `i` is searched in `[θ_{i-1} - δ, θ_{i+1} + δ]` using the
    /// previous assignment, preferring the root nearest its previous angle.
    /// Symmetric sections pin `θ_0 = 0` and `θ_I = π/2`.
    pub fn assign(
        &self,
        scaled: &ScaledCoefficients,
        previous: Option<&ThetaAssignment>,
    ) -> Result<ThetaAssignment> {
        let len = self.points.len();
        let last = len - 1;
        let seed;
        let prev = match previous {
            Some(p) if p.theta.len() == len => &p.theta,
            Some(p) => {
                return Err(Error::Dimension {
                    expected: len,
                    found: p.theta.len(),
                })
            }
            None => {
                seed = ThetaAssignment::uniform(len, self.symmetric);
                &seed.theta
            }
        };
        let (t_min, t_max) = theta_domain(self.symmetric);

        let mut theta = vec![0.0; len];
        let mut unresolved = Vec::new();
        let range = if self.symmetric {
            theta[0] = 0.0;
            theta[last] = FRAC_PI_2;
            1..last
        } else {
            0..len
        };

        for i in range {
            let lo = if i == 0 { t_min } else { (prev[i - 1] - BRACKET_MARGIN).max(t_min) };
            let hi = if i == last { t_max } else { (prev[i + 1] + BRACKET_MARGIN).min(t_max) };
            let outcome = solve_theta(
                scaled,
                self.points[i],
                self.normals[i],
                (lo, hi),
                Some(prev[i]),
                self.tol,
            );
            theta[i] = match outcome.theta() {
                Some(t) => t,
                None => {
                    unresolved.push(i);
                    let fallback = if i >= 2 {
                        theta[i - 1] + (theta[i - 1] - theta[i - 2])
                    } else if !self.symmetric && i == 1 && unresolved.first() == Some(&0) {
                        return Err(Error::ThetaAbort);
                    } else {
                        prev[i]
                    };
                    fallback.clamp(t_min, t_max)
                }
            };
        }
        Ok(ThetaAssignment { theta, unresolved })
    }
}

/// Convenience wrapper building a [`ThetaSolver`] for a single pass.
pub fn assign_thetas(
    scaled: &ScaledCoefficients,
    section: &SectionOffsets,
    previous: Option<&ThetaAssignment>,
) -> Result<ThetaAssignment> {
    ThetaSolver::new(section)?.assign(scaled, previous)
}
