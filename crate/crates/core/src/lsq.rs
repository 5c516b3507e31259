//! Linear least-squares update of the scaled coefficients at fixed angles.
//!
//! Setting `∂E/∂(Fa_{2j-1}) = 0` gives, for each row `j`,
//!
//! ```text
//! Σ_n (-1)^n Fa_{2n-1} Σ_i cos((2j-2n)θ_i) = Σ_i (-x_i sin((2j-1)θ_i) + y_i cos((2j-1)θ_i))
//! ```
//!
//! Symmetric sections replace the last two rows by the draft and half-breadth
//! conditions `Σ(-1)^n Fa = D_s` and `Σ Fa = B_s/2`.

use crate::error::{Error, Result};
use crate::mapping::{alt, ScaledCoefficients};
use crate::section::SectionOffsets;
use crate::theta::ThetaAssignment;

/// Relative pivot threshold below which a system is treated as singular.
pub const PIVOT_THRESHOLD: f64 = 1e-14;

/// Dense square system `A x = b`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem {
    pub size: usize,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    /// Whether the last two rows are the draft and breadth conditions.
    pub constrained: bool,
}

impl LinearSystem {
    pub fn new(rows: Vec<Vec<f64>>, b: Vec<f64>) -> Result<Self> {
        let size = rows.len();
        if b.len() != size {
            return Err(Error::Dimension {
                expected: size,
                found: b.len(),
            });
        }
        let mut a = Vec::with_capacity(size * size);
        for row in rows {
            if row.len() != size {
                return Err(Error::Dimension {
                    expected: size,
                    found: row.len(),
                });
            }
            a.extend(row);
        }
        Ok(Self {
            size,
            a,
            b,
            constrained: false,
        })
    }

    #[inline]
    pub fn at(&self, row: usize, col: usize) -> f64 {
        self.a[row * self.size + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.a[row * self.size..(row + 1) * self.size]
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.size)
            .map(|r| self.row(r).iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// `A x - b`.
    pub fn residual(&self, x: &[f64]) -> Vec<f64> {
        (0..self.size)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(x)
                    .map(|(a, x)| a * x)
                    .sum::<f64>()
                    - self.b[r]
            })
            .collect()
    }
}

fn check_lengths(thetas: &ThetaAssignment, section: &SectionOffsets) -> Result<()> {
    if thetas.theta.len() != section.len() {
        return Err(Error::Dimension {
            expected: section.len(),
            found: thetas.theta.len(),
        });
    }
    Ok(())
}

/// All `N + 1` normal-equation rows.
fn normal_rows(thetas: &ThetaAssignment, section: &SectionOffsets, n: usize) -> LinearSystem {
    let size = n + 1;
    // A[j][n] depends on |j - n| only: C_k = Σ_i cos(2kθ_i).
    let mut cos_sums = vec![0.0; size];
    let mut b = vec![0.0; size];
    for (p, &t) in section.points().iter().zip(&thetas.theta) {
        let (s2, c2) = (2.0 * t).sin_cos();
        let (s1, c1) = t.sin_cos();
        // harmonic 2k, k = 0..=n
        let (mut sk, mut ck) = (0.0, 1.0);
        // harmonic 2j - 1, starting at -1
        let (mut sj, mut cj) = (-s1, c1);
        for k in 0..size {
            cos_sums[k] += ck;
            b[k] += -p.x * sj + p.y * cj;
            let s_next = sk * c2 + ck * s2;
            ck = ck * c2 - sk * s2;
            sk = s_next;
            let sj_next = sj * c2 + cj * s2;
            cj = cj * c2 - sj * s2;
            sj = sj_next;
        }
    }
    let mut a = vec![0.0; size * size];
    for j in 0..size {
        for col in 0..size {
            a[j * size + col] = alt(col) * cos_sums[j.abs_diff(col)];
        }
    }
    LinearSystem {
        size,
        a,
        b,
        constrained: false,
    }
}

/// Normal equations for rows `0..=N-2` plus the draft and breadth rows.
pub fn assemble_symmetric(
    thetas: &ThetaAssignment,
    section: &SectionOffsets,
    n: usize,
) -> Result<LinearSystem> {
    if n < 2 {
        return Err(Error::Config(format!(
            "symmetric fit needs N >= 2 (two rows carry breadth and draft), got {n}"
        )));
    }
    check_lengths(thetas, section)?;
    let mut sys = normal_rows(thetas, section, n);
    let size = sys.size;
    for col in 0..size {
        sys.a[(n - 1) * size + col] = alt(col);
        sys.a[n * size + col] = 1.0;
    }
    sys.b[n - 1] = section.draft();
    sys.b[n] = 0.5 * section.breadth();
    sys.constrained = true;
    Ok(sys)
}

/// Full unconstrained normal equations.
pub fn assemble_general(
    thetas: &ThetaAssignment,
    section: &SectionOffsets,
    n: usize,
) -> Result<LinearSystem> {
    if n < 1 {
        return Err(Error::Config(format!("general fit needs N >= 1, got {n}")));
    }
    check_lengths(thetas, section)?;
    Ok(normal_rows(thetas, section, n))
}

/// Gaussian elimination with partial pivoting.
pub fn lu_solve(system: &LinearSystem) -> Result<ScaledCoefficients> {
    let n = system.size;
    if system.a.len() != n * n || system.b.len() != n {
        return Err(Error::Dimension {
            expected: n * n,
            found: system.a.len(),
        });
    }
    if system.a.iter().chain(&system.b).any(|v| !v.is_finite()) {
        return Err(Error::Config("non-finite entry in linear system".into()));
    }
    let threshold = PIVOT_THRESHOLD * system.norm_inf();
    let mut lu = system.a.clone();
    let mut perm: Vec<usize> = (0..n).collect();

    for k in 0..n {
        let (pivot_row, pivot) = (k..n)
            .map(|r| (r, lu[r * n + k].abs()))
            .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if !(pivot > threshold) {
            return Err(Error::SingularSystem { column: k, pivot });
        }
        if pivot_row != k {
            for c in 0..n {
                lu.swap(k * n + c, pivot_row * n + c);
            }
            perm.swap(k, pivot_row);
        }
        let diag = lu[k * n + k];
        for r in k + 1..n {
            let factor = lu[r * n + k] / diag;
            lu[r * n + k] = factor;
            if factor != 0.0 {
                for c in k + 1..n {
                    lu[r * n + c] -= factor * lu[k * n + c];
                }
            }
        }
    }

    // forward substitution with unit-lower L
    let mut x: Vec<f64> = perm.iter().map(|&p| system.b[p]).collect();
    for r in 1..n {
        let s: f64 = (0..r).map(|c| lu[r * n + c] * x[c]).sum();
        x[r] -= s;
    }
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| lu[r * n + c] * x[c]).sum();
        x[r] = (x[r] - s) / lu[r * n + r];
    }
    Ok(ScaledCoefficients::new(x))
}
