//! The multi-parameter map from the unit circle to a section contour.
//!
//! With `ξ = i e^β e^{-iθ}` the map is `z = F Σ a_{2n-1} ξ^{-(2n-1)}` for
//! `n = 0..=N` and `a_{-1} = 1`. Taking real and imaginary parts:
//!
//! ```text
//! x = -F Σ (-1)^n a_{2n-1} e^{-(2n-1)β} sin((2n-1)θ)
//! y =  F Σ (-1)^n a_{2n-1} e^{-(2n-1)β} cos((2n-1)θ)
//! ```
//!
//! `β = 0` traces the section boundary, `θ = 0` the keel and `θ = π/2` the
//! starboard waterline.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::section::Point;

/// Scale factor `F` and coefficients `a_{2n-1}`, with `a[0] = a_{-1} = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct MappingCoefficients {
    f: f64,
    a: Vec<f64>,
}

impl MappingCoefficients {
    /// `a` must start with the fixed leading coefficient `1.0`.
    pub fn new(f: f64, a: Vec<f64>) -> Result<Self> {
        if a.first() != Some(&1.0) {
            return Err(Error::Config("leading coefficient a_{-1} must be exactly 1".into()));
        }
        if !(f > 0.0) || !f.is_finite() {
            return Err(Error::Config(format!("scale factor must be positive, got {f}")));
        }
        if a.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config("non-finite mapping coefficient".into()));
        }
        let c = Self { f, a };
        if !(c.sigma_a() > 0.0) || !(c.sigma_b() > 0.0) {
            return Err(Error::Config(format!(
                "coefficients give nonpositive breadth or draft (sigma_a = {}, sigma_b = {})",
                c.sigma_a(),
                c.sigma_b()
            )));
        }
        Ok(c)
    }

    /// The unit-circle map scaled by `f`, padded with `n` zero coefficients.
    pub fn circle(f: f64, n: usize) -> Result<Self> {
        let mut a = vec![0.0; n + 1];
        a[0] = 1.0;
        Self::new(f, a)
    }

    /// Number of free coefficients `N`.
    pub fn n(&self) -> usize {
        self.a.len() - 1
    }

    pub fn scale_factor(&self) -> f64 {
        self.f
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.a
    }

    pub fn sigma_a(&self) -> f64 {
        self.a.iter().sum()
    }

    pub fn sigma_b(&self) -> f64 {
        self.a.iter().enumerate().map(|(n, a)| alt(n) * a).sum()
    }

    pub fn to_scaled(&self) -> ScaledCoefficients {
        ScaledCoefficients {
            fa: self.a.iter().map(|a| self.f * a).collect(),
        }
    }
}

/// The products `F·a_{2n-1}`, which are the unknowns of the linear update.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaledCoefficients {
    pub fa: Vec<f64>,
}

impl ScaledCoefficients {
    pub fn new(fa: Vec<f64>) -> Self {
        Self { fa }
    }

    pub fn n(&self) -> usize {
        self.fa.len().saturating_sub(1)
    }

    /// Pads with zeros or truncates to `n + 1` entries.
    pub fn resized(&self, n: usize) -> Self {
        let mut fa = self.fa.clone();
        fa.resize(n + 1, 0.0);
        Self { fa }
    }

    /// Recovers `F = Fa_{-1}` and `a_{2n-1} = Fa_{2n-1} / F`.
    pub fn to_coefficients(&self) -> Result<MappingCoefficients> {
        let f = *self.fa.first().ok_or(Error::Dimension {
            expected: 1,
            found: 0,
        })?;
        if !(f > 0.0) {
            return Err(Error::Config(format!("scale factor must be positive, got {f}")));
        }
        let mut a: Vec<f64> = self.fa.iter().map(|v| v / f).collect();
        a[0] = 1.0;
        MappingCoefficients::new(f, a)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            fa: self.fa.iter().map(|v| v * s).collect(),
        }
    }

    /// Boundary point at angle `theta`.
    #[inline]
    pub fn boundary(&self, theta: f64) -> Point {
        series(&self.fa, theta, 0.0)
    }

    /// Point on the contour at distance parameter `beta` outside the boundary.
    pub fn contour(&self, theta: f64, beta: f64) -> Point {
        series(&self.fa, theta, beta)
    }
}

#[inline]
pub(crate) fn alt(n: usize) -> f64 {
    if n % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Sums the series with the harmonics `(2n-1)θ` generated by repeated
/// rotation through `2θ`.
#[inline]
fn series(fa: &[f64], theta: f64, beta: f64) -> Point {
    let (s1, c1) = theta.sin_cos();
    let (s2, c2) = (2.0 * theta).sin_cos();
    // harmonic -1
    let (mut s, mut c) = (-s1, c1);
    let mut decay = beta.exp();
    let step = (-2.0 * beta).exp();
    let (mut x, mut y) = (0.0, 0.0);
    for (n, &v) in fa.iter().enumerate() {
        let w = alt(n) * v * decay;
        x -= w * s;
        y += w * c;
        let s_next = s * c2 + c * s2;
        c = c * c2 - s * s2;
        s = s_next;
        decay *= step;
    }
    Point::new(x, y)
}

/// Boundary point `(x_0, y_0)` at angle `theta`.
pub fn evaluate_boundary(coeffs: &MappingCoefficients, theta: f64) -> Point {
    let p = series(&coeffs.a, theta, 0.0);
    Point::new(coeffs.f * p.x, coeffs.f * p.y)
}

/// Contour point at `(theta, beta)`; `beta = 0` is the boundary.
pub fn evaluate_offset_contour(coeffs: &MappingCoefficients, theta: f64, beta: f64) -> Point {
    let p = series(&coeffs.a, theta, beta);
    Point::new(coeffs.f * p.x, coeffs.f * p.y)
}

/// `(B_s, D_s) = (2Fσ_a, Fσ_b)`.
pub fn breadth_and_draft(coeffs: &MappingCoefficients) -> (f64, f64) {
    (2.0 * coeffs.f * coeffs.sigma_a(), coeffs.f * coeffs.sigma_b())
}

/// Breadth and draft implied by scaled coefficients.
pub fn scaled_breadth_and_draft(scaled: &ScaledCoefficients) -> (f64, f64) {
    let sum: f64 = scaled.fa.iter().sum();
    let alt_sum: f64 = scaled.fa.iter().enumerate().map(|(n, v)| alt(n) * v).sum();
    (2.0 * sum, alt_sum)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LewisGuess {
    pub coefficients: MappingCoefficients,
    /// Set when breadth, draft and area fall outside the Lewis family and
    /// the area was ignored.
    pub fallback: bool,
}

/// Two-parameter Lewis form matching breadth, draft and area.
///
/// Returns `[1, a_1, a_3]`. When no Lewis form reproduces the area, falls
/// back to `a_1 = (H-1)/(H+1)`, `a_3 = 0`, which still matches breadth and
/// draft.
pub fn lewis_initial_guess(breadth: f64, draft: f64, area: f64) -> Result<LewisGuess> {
    if !(breadth > 0.0 && draft > 0.0) || !breadth.is_finite() || !draft.is_finite() {
        return Err(Error::DegenerateSection(format!(
            "Lewis form needs positive breadth and draft, got {breadth} x {draft}"
        )));
    }
    let h = breadth / (2.0 * draft);
    let sigma = area / (breadth * draft);
    let r = (h - 1.0) / (h + 1.0);
    let k = 4.0 * sigma / std::f64::consts::PI;
    let c1 = 3.0 + k + (1.0 - k) * r * r;
    let disc = 9.0 - 2.0 * c1;

    let build = |a1: f64, a3: f64| {
        let f = breadth / (2.0 * (1.0 + a1 + a3));
        MappingCoefficients::new(f, vec![1.0, a1, a3])
    };

    if area > 0.0 && area.is_finite() && disc >= 0.0 && c1 != 0.0 {
        let a3 = (-c1 + 3.0 + disc.sqrt()) / c1;
        let a1 = (a3 + 1.0) * r;
        if 1.0 + a1 + a3 > 0.0 && 1.0 - a1 + a3 > 0.0 {
            if let Ok(coefficients) = build(a1, a3) {
                return Ok(LewisGuess {
                    coefficients,
                    fallback: false,
                });
            }
        }
    }
    Ok(LewisGuess {
        coefficients: build(r, 0.0)?,
        fallback: true,
    })
}

/// Element-wise mean of two scaled coefficient sets.
pub fn average_coefficients(
    left: &ScaledCoefficients,
    right: &ScaledCoefficients,
) -> Result<ScaledCoefficients> {
    if left.fa.len() != right.fa.len() {
        return Err(Error::Dimension {
            expected: left.fa.len(),
            found: right.fa.len(),
        });
    }
    Ok(ScaledCoefficients {
        fa: left
            .fa
            .iter()
            .zip(&right.fa)
            .map(|(l, r)| 0.5 * (l + r))
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, LN_2, PI};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    /// Direct trigonometric evaluation, independent of the rotation recurrence.
    fn direct(c: &MappingCoefficients, theta: f64, beta: f64) -> Point {
        let mut x = 0.0;
        let mut y = 0.0;
        for (n, a) in c.coefficients().iter().enumerate() {
            let k = 2.0 * n as f64 - 1.0;
            let w = (-1f64).powi(n as i32) * a * (-k * beta).exp();
            x -= w * (k * theta).sin();
            y += w * (k * theta).cos();
        }
        Point::new(c.scale_factor() * x, c.scale_factor() * y)
    }

    #[test]
    fn unit_circle_keel_and_waterline() {
        let c = MappingCoefficients::circle(1.0, 0).unwrap();
        let p = evaluate_boundary(&c, 0.0);
        assert!(close(p.x, 0.0, 1e-15) && close(p.y, 1.0, 1e-15));
        let p = evaluate_boundary(&c, FRAC_PI_2);
        assert!(close(p.x, 1.0, 1e-15) && close(p.y, 0.0, 1e-15));
    }

    #[test]
    fn two_to_one_ellipse() {
        let c = MappingCoefficients::new(1.5, vec![1.0, 1.0 / 3.0]).unwrap();
        let p = evaluate_boundary(&c, FRAC_PI_2);
        assert!(close(p.x, 2.0, 1e-14) && close(p.y, 0.0, 1e-14));
        let p = evaluate_boundary(&c, 0.0);
        assert!(close(p.x, 0.0, 1e-15) && close(p.y, 1.0, 1e-14));
        for t in [0.1, 0.5, 1.0, 1.4] {
            let p = evaluate_boundary(&c, t);
            assert!(close(p.x, 2.0 * t.sin(), 1e-14));
            assert!(close(p.y, t.cos(), 1e-14));
        }
    }

    #[test]
    fn offset_contour_reduces_to_boundary_bitwise() {
        let c = MappingCoefficients::new(0.8, vec![1.0, 0.2, -0.05, 0.01]).unwrap();
        for k in 0..50 {
            let t = -2.0 + 0.09 * k as f64;
            assert_eq!(evaluate_offset_contour(&c, t, 0.0), evaluate_boundary(&c, t));
        }
    }

    #[test]
    fn offset_contour_circle_examples() {
        let c = MappingCoefficients::circle(1.0, 0).unwrap();
        let p = evaluate_offset_contour(&c, 0.0, LN_2);
        assert!(close(p.x, 0.0, 1e-15) && close(p.y, 2.0, 1e-14));
        let p = evaluate_offset_contour(&c, FRAC_PI_2, LN_2);
        assert!(close(p.x, 2.0, 1e-14) && close(p.y, 0.0, 1e-14));
        for k in 0..20 {
            let t = 0.3 * k as f64;
            let p = evaluate_offset_contour(&c, t, 0.7);
            assert!(close(p.x.hypot(p.y), 0.7f64.exp(), 1e-13));
        }
    }

    #[test]
    fn recurrence_matches_direct_trig() {
        let a: Vec<f64> = (0..40).map(|n| if n == 0 { 1.0 } else { 0.3 / (n * n) as f64 }).collect();
        let c = MappingCoefficients::new(1.3, a).unwrap();
        for k in 0..100 {
            let t = -PI + 0.0628 * k as f64;
            for beta in [0.0, 0.2] {
                let p = evaluate_offset_contour(&c, t, beta);
                let q = direct(&c, t, beta);
                assert!(close(p.x, q.x, 1e-12) && close(p.y, q.y, 1e-12), "{t} {beta}");
            }
        }
    }

    #[test]
    fn breadth_draft_examples() {
        let c = MappingCoefficients::circle(1.0, 0).unwrap();
        assert_eq!(breadth_and_draft(&c), (2.0, 1.0));
        let c = MappingCoefficients::new(1.5, vec![1.0, 1.0 / 3.0]).unwrap();
        let (b, d) = breadth_and_draft(&c);
        assert!(close(b, 4.0, 1e-14) && close(d, 1.0, 1e-14));
        let c = MappingCoefficients::new(1.0, vec![1.0, 0.0]).unwrap();
        assert_eq!(breadth_and_draft(&c), (2.0, 1.0));
    }

    #[test]
    fn boundary_closure_and_parity() {
        let c = MappingCoefficients::new(0.9, vec![1.0, 0.15, -0.04, 0.02, 0.005]).unwrap();
        let (b, d) = breadth_and_draft(&c);
        let keel = evaluate_boundary(&c, 0.0);
        let wl = evaluate_boundary(&c, FRAC_PI_2);
        assert!(close(keel.x, 0.0, 1e-15) && close(keel.y, d, 1e-14));
        assert!(close(wl.x, b / 2.0, 1e-14) && close(wl.y, 0.0, 1e-14));
        for t in [0.2, 0.9, 1.3, 2.5] {
            let p = evaluate_boundary(&c, t);
            let q = evaluate_boundary(&c, -t);
            assert!(close(p.x, -q.x, 1e-14) && close(p.y, q.y, 1e-14));
            let r = evaluate_boundary(&c, t + 2.0 * PI);
            assert!(close(p.x, r.x, 1e-12) && close(p.y, r.y, 1e-12));
        }
    }

    #[test]
    fn invalid_coefficients_rejected() {
        assert!(MappingCoefficients::new(1.0, vec![0.5, 0.1]).is_err());
        assert!(MappingCoefficients::new(-1.0, vec![1.0]).is_err());
        assert!(MappingCoefficients::new(1.0, vec![1.0, -1.5]).is_err());
        assert!(MappingCoefficients::new(1.0, vec![1.0, 1.5]).is_err());
    }

    #[test]
    fn lewis_circle() {
        let g = lewis_initial_guess(2.0, 1.0, FRAC_PI_2).unwrap();
        assert!(!g.fallback);
        let a = g.coefficients.coefficients();
        assert!(close(a[1], 0.0, 1e-15) && close(a[2], 0.0, 1e-15));
        assert!(close(g.coefficients.scale_factor(), 1.0, 1e-15));
    }

    #[test]
    fn lewis_ellipse() {
        let g = lewis_initial_guess(4.0, 1.0, PI).unwrap();
        assert!(!g.fallback);
        let a = g.coefficients.coefficients();
        assert!(close(a[1], 1.0 / 3.0, 1e-14));
        assert!(close(a[2], 0.0, 1e-14));
        assert!(close(g.coefficients.scale_factor(), 1.5, 1e-14));
    }

    /// Half-section area enclosed by the boundary and the axes.
    fn enclosed_half_area(c: &MappingCoefficients, samples: usize) -> f64 {
        let mut pts: Vec<Point> = (0..=samples)
            .map(|k| evaluate_boundary(c, FRAC_PI_2 * k as f64 / samples as f64))
            .collect();
        pts.push(Point::new(0.0, 0.0));
        let n = pts.len();
        let twice: f64 = (0..n)
            .map(|i| {
                let (p, q) = (pts[i], pts[(i + 1) % n]);
                p.x * q.y - q.x * p.y
            })
            .sum();
        0.5 * twice.abs()
    }

    #[test]
    fn lewis_rectangle_reproduces_breadth_draft_area() {
        let g = lewis_initial_guess(2.0, 1.0, 2.0 * 0.9).unwrap();
        assert!(!g.fallback);
        let (b, d) = breadth_and_draft(&g.coefficients);
        assert!(close(b, 2.0, 1e-13) && close(d, 1.0, 1e-13));
        let full = 2.0 * enclosed_half_area(&g.coefficients, 20_000);
        assert!(close(full, 1.8, 1e-6), "area {full}");
    }

    #[test]
    fn lewis_outside_region_falls_back() {
        // area coefficient far above what any Lewis form can reach
        let g = lewis_initial_guess(2.0, 1.0, 2.0 * 0.999).unwrap();
        let (b, d) = breadth_and_draft(&g.coefficients);
        assert!(close(b, 2.0, 1e-12) && close(d, 1.0, 1e-12));
        let g = lewis_initial_guess(2.0, 1.0, 0.0).unwrap();
        assert!(g.fallback);
        assert!(lewis_initial_guess(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn lewis_sigma_quarter_pi_is_always_an_ellipse() {
        for h in [0.3, 0.8, 1.7, 3.0] {
            let g = lewis_initial_guess(2.0 * h, 1.0, FRAC_PI_4 * 2.0 * h).unwrap();
            assert!(close(g.coefficients.coefficients()[2], 0.0, 1e-14));
        }
    }

    #[test]
    fn average_examples() {
        let l = ScaledCoefficients::new(vec![1.0, 0.0]);
        let r = ScaledCoefficients::new(vec![3.0, 0.2]);
        let m = average_coefficients(&l, &r).unwrap();
        assert!(close(m.fa[0], 2.0, 1e-15) && close(m.fa[1], 0.1, 1e-15));
        assert_eq!(average_coefficients(&l, &l).unwrap(), l);
        let bad = ScaledCoefficients::new(vec![1.0]);
        assert!(matches!(
            average_coefficients(&l, &bad),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn scaled_round_trip() {
        let c = MappingCoefficients::new(2.5, vec![1.0, 0.1, -0.02]).unwrap();
        let back = c.to_scaled().to_coefficients().unwrap();
        assert!(close(back.scale_factor(), 2.5, 1e-15));
        for (x, y) in back.coefficients().iter().zip(c.coefficients()) {
            assert!(close(*x, *y, 1e-15));
        }
        assert!(ScaledCoefficients::new(vec![-1.0, 0.0]).to_coefficients().is_err());
    }
}
