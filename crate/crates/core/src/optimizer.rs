//! Search for the parameter count and error tolerance giving the best fit.
//!
//! Starting at `N = 5` with tolerance `σ_E = 10`, each `N` is fitted once at
//! the current tolerance. A failure moves on to `N + 1` with the tolerance
//! unchanged. A success triggers a minimum-error search for that `N`, and
//! the next tolerance is derived from the minimum found: `E_min - 0.1` when
//! `E_min > 0.1`, otherwise `E_min / 10`. The last accepted `(N, E_min)` is
//! the optimum.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::fit::{fit_section, FitConfig, FitResult};
use crate::section::SectionOffsets;

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub n_min: usize,
    pub n_max: usize,
    pub initial_sigma_e: f64,
    /// Stop once an accepted `E_min` is at or below this. `None` uses
    /// `1e-12 · scale²` of the section.
    pub e_floor: Option<f64>,
    /// Factor applied to the last achieved E in the minimum-error search.
    pub tighten: f64,
    pub max_rounds: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            n_min: 5,
            n_max: 100,
            initial_sigma_e: 10.0,
            e_floor: None,
            tighten: 0.5,
            max_rounds: 30,
        }
    }
}

impl SearchConfig {
    pub fn floor_for(&self, section: &SectionOffsets) -> f64 {
        self.e_floor.unwrap_or(1e-12 * section.scale() * section.scale())
    }
}

/// Tolerance for the next parameter count after accepting `e_min`.
pub fn next_tolerance(e_min: f64) -> f64 {
    const THRESHOLD: f64 = 0.1;
    if e_min > THRESHOLD && e_min - THRESHOLD > 0.0 {
        e_min - THRESHOLD
    } else {
        e_min / 10.0
    }
}

/// Rebuilds the tolerance used at each record from the accept/`E_min`
/// history alone.
pub fn replay_tolerances(initial_sigma_e: f64, records: &[NRecord]) -> Vec<f64> {
    let mut sigma = initial_sigma_e;
    records
        .iter()
        .map(|r| {
            let used = sigma;
            if r.accepted {
                if let Some(e) = r.e_min {
                    sigma = next_tolerance(e);
                }
            }
            used
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct NRecord {
    pub n: usize,
    pub sigma_e: f64,
    /// Whether the fit met `sigma_e`, which triggers the minimum-error search.
    pub accepted: bool,
    /// Smallest E reached at this `N`. For rejected `N` this is the best E
    /// of the failed fit, or `None` if it produced no iterate.
    pub e_min: Option<f64>,
    /// Iterations summed over every fit run at this `N`.
    pub iterations: usize,
    pub fits: usize,
    pub seconds: f64,
}

#[derive(Debug, Clone)]
pub struct MinError {
    pub e_min: f64,
    pub fit: FitResult,
    pub fits: usize,
    pub iterations: usize,
}

/// Tightens the tolerance to `tighten · E` and refits until a fit misses
/// it, starting from a fit that already converged.
pub fn refine_min_error(
    section: &SectionOffsets,
    converged: FitResult,
    config: &SearchConfig,
) -> MinError {
    let n = converged.coefficients.n();
    let floor = config.floor_for(section);
    let mut out = MinError {
        e_min: converged.error_e,
        iterations: converged.iterations,
        fit: converged,
        fits: 1,
    };
    for _ in 0..config.max_rounds {
        if out.e_min <= floor {
            break;
        }
        let sigma = config.tighten * out.e_min;
        if !(sigma > 0.0) {
            break;
        }
        let Ok(fit) = fit_section(section, &FitConfig::for_section(section, n, sigma)) else {
            break;
        };
        out.fits += 1;
        out.iterations += fit.iterations;
        if !fit.converged() {
            break;
        }
        out.e_min = fit.error_e;
        out.fit = fit;
    }
    out
}

/// Fits at `(n, sigma_e)` and, if that converges, searches for the
/// smallest achievable E. Returns `None` when the first fit fails.
pub fn min_error_for_n(
    section: &SectionOffsets,
    n: usize,
    sigma_e: f64,
    config: &SearchConfig,
) -> Result<Option<MinError>> {
    let fit = fit_section(section, &FitConfig::for_section(section, n, sigma_e))?;
    if !fit.converged() {
        return Ok(None);
    }
    Ok(Some(refine_min_error(section, fit, config)))
}

#[derive(Debug, Clone)]
pub struct SearchReport {
    pub per_n: Vec<NRecord>,
    pub best_n: usize,
    pub best_e: f64,
    /// Tolerance used at each `N`, parallel to `per_n`.
    pub tolerance_trace: Vec<f64>,
    pub best_fit: FitResult,
    pub e_floor: f64,
}

impl SearchReport {
    pub fn record(&self, n: usize) -> Option<&NRecord> {
        self.per_n.iter().find(|r| r.n == n)
    }

    pub fn accepted(&self) -> impl Iterator<Item = &NRecord> {
        self.per_n.iter().filter(|r| r.accepted)
    }
}

pub fn search_optimum(section: &SectionOffsets, config: &SearchConfig) -> Result<SearchReport> {
    let n_min = if section.is_symmetric() { config.n_min.max(2) } else { config.n_min.max(1) };
    let floor = config.floor_for(section);
    let mut sigma = config.initial_sigma_e;
    let mut per_n = Vec::new();
    let mut tolerance_trace = Vec::new();
    let mut best: Option<(usize, f64, FitResult)> = None;

    for n in n_min..=config.n_max {
        let start = Instant::now();
        tolerance_trace.push(sigma);
        let fit = fit_section(section, &FitConfig::for_section(section, n, sigma));
        let mut record = NRecord {
            n,
            sigma_e: sigma,
            accepted: false,
            e_min: None,
            iterations: 0,
            fits: 1,
            seconds: 0.0,
        };
        let mut stop = false;
        match fit {
            Ok(fit) if fit.converged() => {
                let min = refine_min_error(section, fit, config);
                record.accepted = true;
                record.e_min = Some(min.e_min);
                record.iterations = min.iterations;
                record.fits = min.fits;
                sigma = next_tolerance(min.e_min);
                stop = min.e_min <= floor;
                best = Some((n, min.e_min, min.fit));
            }
            Ok(fit) => {
                record.e_min = Some(fit.error_e);
                record.iterations = fit.iterations;
            }
            Err(Error::Config(msg)) => return Err(Error::Config(msg)),
            Err(_) => {}
        }
        record.seconds = start.elapsed().as_secs_f64();
        per_n.push(record);
        if stop {
            break;
        }
    }

    let Some((best_n, best_e, best_fit)) = best else {
        return Err(Error::SearchFailed {
            n_min,
            n_max: config.n_max,
            sigma_e: config.initial_sigma_e,
        });
    };
    Ok(SearchReport {
        per_n,
        best_n,
        best_e,
        tolerance_trace,
        best_fit,
        e_floor: floor,
    })
}
