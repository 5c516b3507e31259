//! Nash-Sutcliffe accuracy scores and the JSON report documents.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::FitResult;
use crate::mapping::MappingCoefficients;
use crate::optimizer::SearchReport;
use crate::section::Point;

/// `1 - Σ(real - mapped)² / Σ(real - mean(real))²` for one coordinate.
pub fn nash_sutcliffe_axis(real: &[f64], mapped: &[f64], axis: char) -> Result<f64> {
    if real.len() != mapped.len() {
        return Err(Error::Dimension {
            expected: real.len(),
            found: mapped.len(),
        });
    }
    if real.is_empty() {
        return Err(Error::Dimension {
            expected: 1,
            found: 0,
        });
    }
    let mean = real.iter().sum::<f64>() / real.len() as f64;
    let spread: f64 = real.iter().map(|r| (r - mean).powi(2)).sum();
    if spread == 0.0 {
        return Err(Error::UndefinedCoefficient { axis });
    }
    let misfit: f64 = real.iter().zip(mapped).map(|(r, m)| (r - m).powi(2)).sum();
    Ok(1.0 - misfit / spread)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NashSutcliffe {
    /// `None` when the reference x-coordinates have zero variance.
    pub ex: Option<f64>,
    pub ey: Option<f64>,
}

/// Scores both coordinates. An axis with zero reference variance is
/// reported as `None`; the other axis is still computed.
pub fn nash_sutcliffe(real: &[Point], mapped: &[Point]) -> Result<NashSutcliffe> {
    if real.len() != mapped.len() || real.is_empty() {
        return Err(Error::Dimension {
            expected: real.len().max(1),
            found: mapped.len(),
        });
    }
    let axis = |f: fn(&Point) -> f64, name| {
        let r: Vec<f64> = real.iter().map(f).collect();
        let m: Vec<f64> = mapped.iter().map(f).collect();
        match nash_sutcliffe_axis(&r, &m, name) {
            Ok(v) => Ok(Some(v)),
            Err(Error::UndefinedCoefficient { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    };
    Ok(NashSutcliffe {
        ex: axis(|p| p.x, 'x')?,
        ey: axis(|p| p.y, 'y')?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccuracyReport {
    pub nash_sutcliffe: NashSutcliffe,
    pub wall_time_seconds: f64,
}

impl AccuracyReport {
    pub fn new(real: &[Point], mapped: &[Point], wall_time_seconds: f64) -> Result<Self> {
        Ok(Self {
            nash_sutcliffe: nash_sutcliffe(real, mapped)?,
            wall_time_seconds,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientsBlock {
    #[serde(rename = "F")]
    pub f: f64,
    pub a: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerNEntry {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "E_min")]
    pub e_min: Option<f64>,
    pub iterations: usize,
    pub seconds: f64,
    pub sigma_e: f64,
    pub accepted: bool,
}

/// Machine-readable result of a fit or search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub section_id: String,
    pub symmetric: bool,
    #[serde(rename = "N_best")]
    pub n_best: usize,
    #[serde(rename = "E_best")]
    pub e_best: f64,
    /// `None` when the best E is exactly zero.
    #[serde(rename = "log10_E_min")]
    pub log10_e_min: Option<f64>,
    pub wall_time_seconds: f64,
    pub nash_sutcliffe: NashSutcliffe,
    pub coefficients: CoefficientsBlock,
    pub mapped_contour: Vec<[f64; 2]>,
    #[serde(rename = "per_N", default, skip_serializing_if = "Option::is_none")]
    pub per_n: Option<Vec<PerNEntry>>,
    pub unresolved_theta_indices: Vec<usize>,
    /// Angles of the mapped contour points.
    pub theta: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
}

/// Assembles the report for `fit`, which for a search is its best fit.
pub fn build_report(
    section_id: &str,
    symmetric: bool,
    fit: &FitResult,
    search: Option<&SearchReport>,
    accuracy: &AccuracyReport,
) -> Report {
    let (n_best, e_best) = match search {
        Some(s) => (s.best_n, s.best_e),
        None => (fit.coefficients.n(), fit.error_e),
    };
    Report {
        section_id: section_id.to_string(),
        symmetric,
        n_best,
        e_best,
        log10_e_min: (e_best > 0.0).then(|| e_best.log10()),
        wall_time_seconds: accuracy.wall_time_seconds,
        nash_sutcliffe: accuracy.nash_sutcliffe,
        coefficients: CoefficientsBlock {
            f: fit.coefficients.scale_factor(),
            a: fit.coefficients.coefficients().to_vec(),
        },
        mapped_contour: fit.mapped_points.iter().map(|&p| p.into()).collect(),
        per_n: search.map(|s| {
            s.per_n
                .iter()
                .map(|r| PerNEntry {
                    n: r.n,
                    e_min: r.e_min,
                    iterations: r.iterations,
                    seconds: r.seconds,
                    sigma_e: r.sigma_e,
                    accepted: r.accepted,
                })
                .collect()
        }),
        unresolved_theta_indices: fit.thetas.unresolved.clone(),
        theta: fit.thetas.theta.clone(),
        converged: fit.converged(),
        iterations: fit.iterations,
    }
}

/// Stand-alone coefficient file: `N`, `F`, `a[0..=N]` and the two sums.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientReport {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "F")]
    pub f: f64,
    pub a: Vec<f64>,
    pub sigma_a: f64,
    pub sigma_b: f64,
    /// Picks the angle range when the map is sampled: `[0, π/2]` for a
    /// half-section, `[-π/2, π/2]` otherwise.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symmetric: Option<bool>,
}

impl From<&MappingCoefficients> for CoefficientReport {
    fn from(c: &MappingCoefficients) -> Self {
        Self {
            n: c.n(),
            f: c.scale_factor(),
            a: c.coefficients().to_vec(),
            sigma_a: c.sigma_a(),
            sigma_b: c.sigma_b(),
            symmetric: None,
        }
    }
}

impl CoefficientReport {
    pub fn to_coefficients(&self) -> Result<MappingCoefficients> {
        if self.a.len() != self.n + 1 {
            return Err(Error::Dimension {
                expected: self.n + 1,
                found: self.a.len(),
            });
        }
        MappingCoefficients::new(self.f, self.a.clone())
    }
}
