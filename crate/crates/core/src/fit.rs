//! Alternating fixed-point fit: solve point angles at fixed coefficients,
//! then coefficients at fixed angles, until the summed squared distance
//! between section points and mapped points drops below the tolerance.

use crate::error::{Error, Result};
use crate::lsq::{assemble_general, assemble_symmetric, lu_solve};
use crate::mapping::{average_coefficients, lewis_initial_guess, MappingCoefficients, ScaledCoefficients};
use crate::section::{Point, SectionOffsets};
use crate::theta::{ThetaAssignment, ThetaSolver};

pub const SYMMETRIC_MAX_ITERATIONS: usize = 200;
pub const NONSYMMETRIC_MAX_ITERATIONS: usize = 300;
/// Consecutive increases of E that end a fit early.
pub const DIVERGENCE_WINDOW: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct FitConfig {
    /// Number of free coefficients `N`.
    pub n: usize,
    /// Error tolerance: the fit converges once `E < sigma_e`.
    pub sigma_e: f64,
    pub max_iterations: usize,
    pub divergence_window: usize,
}

impl FitConfig {
    pub fn symmetric(n: usize, sigma_e: f64) -> Self {
        Self {
            n,
            sigma_e,
            max_iterations: SYMMETRIC_MAX_ITERATIONS,
            divergence_window: DIVERGENCE_WINDOW,
        }
    }

    pub fn nonsymmetric(n: usize, sigma_e: f64) -> Self {
        Self {
            max_iterations: NONSYMMETRIC_MAX_ITERATIONS,
            ..Self::symmetric(n, sigma_e)
        }
    }

    /// Defaults matching the section's symmetry.
    pub fn for_section(section: &SectionOffsets, n: usize, sigma_e: f64) -> Self {
        if section.is_symmetric() {
            Self::symmetric(n, sigma_e)
        } else {
            Self::nonsymmetric(n, sigma_e)
        }
    }

    pub fn validate(&self, symmetric: bool) -> Result<()> {
        if !(self.sigma_e > 0.0) {
            return Err(Error::Config(format!("sigma_E must be positive, got {}", self.sigma_e)));
        }
        if self.max_iterations == 0 {
            return Err(Error::Config("max_iterations must be at least 1".into()));
        }
        let min_n = if symmetric { 2 } else { 1 };
        if self.n < min_n {
            return Err(Error::Config(format!(
                "{} fit needs N >= {min_n}, got {}",
                if symmetric { "symmetric" } else { "non-symmetric" },
                self.n
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FitStatus {
    Converged,
    /// Iteration cap reached without meeting the tolerance.
    IterationLimit,
    /// Stopped early. `cause` is `None` when E kept increasing, otherwise
    /// the error that interrupted the iteration (singular system, angle
    /// abort, invalid coefficients).
    Diverged { cause: Option<Error> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub coefficients: MappingCoefficients,
    pub scaled: ScaledCoefficients,
    pub thetas: ThetaAssignment,
    pub error_e: f64,
    pub error_history: Vec<f64>,
    pub iterations: usize,
    pub status: FitStatus,
    pub mapped_points: Vec<Point>,
    /// Starting coefficients, padded to `N + 1`.
    pub initial_guess: ScaledCoefficients,
    /// Whether any Lewis guess had to ignore the section area.
    pub lewis_fallback: bool,
}

impl FitResult {
    pub fn converged(&self) -> bool {
        self.status == FitStatus::Converged
    }

    pub fn diverged(&self) -> bool {
        matches!(self.status, FitStatus::Diverged { .. })
    }
}

/// State after one coefficient solve, passed to fit observers.
#[derive(Debug)]
pub struct Iterate<'a> {
    pub iteration: usize,
    pub scaled: &'a ScaledCoefficients,
    pub thetas: &'a ThetaAssignment,
    pub error_e: f64,
}

/// `E = Σ (x_i - x_0i)² + (y_i - y_0i)²`.
pub fn compute_error(section: &SectionOffsets, mapped: &[Point]) -> Result<f64> {
    if mapped.len() != section.len() {
        return Err(Error::Dimension {
            expected: section.len(),
            found: mapped.len(),
        });
    }
    Ok(section
        .points()
        .iter()
        .zip(mapped)
        .map(|(p, q)| p.distance_squared(q))
        .sum())
}

/// Mapped boundary points at the given angles.
pub fn mapped_points(scaled: &ScaledCoefficients, thetas: &ThetaAssignment) -> Vec<Point> {
    thetas.theta.iter().map(|&t| scaled.boundary(t)).collect()
}

/// Starting coefficients: the Lewis form for symmetric sections, the mean
/// of the port and starboard half-section Lewis forms otherwise.
pub fn initial_guess(section: &SectionOffsets, n: usize) -> Result<(ScaledCoefficients, bool)> {
    let draft = section.draft();
    if section.is_symmetric() {
        let g = lewis_initial_guess(section.breadth(), draft, section.area())?;
        return Ok((g.coefficients.to_scaled().resized(n), g.fallback));
    }
    let e = section.extents();
    let (area_left, area_right) = section.half_areas();
    let left = lewis_initial_guess(2.0 * e.half_breadth_left, draft, 2.0 * area_left)?;
    let right = lewis_initial_guess(2.0 * e.half_breadth_right, draft, 2.0 * area_right)?;
    let avg = average_coefficients(&left.coefficients.to_scaled(), &right.coefficients.to_scaled())?;
    Ok((avg.resized(n), left.fallback || right.fallback))
}

pub fn fit_symmetric(section: &SectionOffsets, config: &FitConfig) -> Result<FitResult> {
    if !section.is_symmetric() {
        return Err(Error::Config("fit_symmetric called on a non-symmetric section".into()));
    }
    fit_section_observed(section, config, |_| {})
}

pub fn fit_nonsymmetric(section: &SectionOffsets, config: &FitConfig) -> Result<FitResult> {
    if section.is_symmetric() {
        return Err(Error::Config("fit_nonsymmetric called on a symmetric section".into()));
    }
    fit_section_observed(section, config, |_| {})
}

/// Fits with the variant matching the section's symmetry.
pub fn fit_section(section: &SectionOffsets, config: &FitConfig) -> Result<FitResult> {
    fit_section_observed(section, config, |_| {})
}

struct State {
    scaled: ScaledCoefficients,
    thetas: ThetaAssignment,
    error_e: f64,
}

/// As [`fit_section`], calling `observe` after every coefficient solve.
pub fn fit_section_observed<F>(
    section: &SectionOffsets,
    config: &FitConfig,
    mut observe: F,
) -> Result<FitResult>
where
    F: FnMut(&Iterate<'_>),
{
    let symmetric = section.is_symmetric();
    config.validate(symmetric)?;
    let solver = ThetaSolver::new(section)?;
    let (initial, lewis_fallback) = initial_guess(section, config.n)?;

    let mut scaled = initial.clone();
    let mut previous: Option<ThetaAssignment> = None;
    let mut history = Vec::new();
    let mut best: Option<State> = None;
    let mut increases = 0;
    let mut status = FitStatus::IterationLimit;

    for iteration in 1..=config.max_iterations {
        let thetas = match solver.assign(&scaled, previous.as_ref()) {
            Ok(t) => t,
            Err(e) => {
                status = FitStatus::Diverged { cause: Some(e) };
                break;
            }
        };
        if best.is_none() {
            // seed state so a failure on the first solve still reports something
            let e = compute_error(section, &mapped_points(&scaled, &thetas))?;
            best = Some(State {
                scaled: scaled.clone(),
                thetas: thetas.clone(),
                error_e: e,
            });
        }

        let system = if symmetric {
            assemble_symmetric(&thetas, section, config.n)?
        } else {
            assemble_general(&thetas, section, config.n)?
        };
        let next = match lu_solve(&system).and_then(|x| x.to_coefficients().map(|_| x)) {
            Ok(x) => x,
            Err(e) => {
                status = FitStatus::Diverged { cause: Some(e) };
                break;
            }
        };

        let error_e = compute_error(section, &mapped_points(&next, &thetas))?;
        observe(&Iterate {
            iteration,
            scaled: &next,
            thetas: &thetas,
            error_e,
        });
        if let Some(&last) = history.last() {
            increases = if error_e > last { increases + 1 } else { 0 };
        }
        history.push(error_e);

        let improved = best.as_ref().is_none_or(|b| error_e < b.error_e);
        let state = State {
            scaled: next.clone(),
            thetas: thetas.clone(),
            error_e,
        };
        if error_e < config.sigma_e {
            return finish(section, state, history, FitStatus::Converged, initial, lewis_fallback);
        }
        if improved {
            best = Some(state);
        }
        if increases >= config.divergence_window {
            status = FitStatus::Diverged { cause: None };
            break;
        }
        scaled = next;
        previous = Some(thetas);
    }

    match best {
        Some(state) => finish(section, state, history, status, initial, lewis_fallback),
        None => match status {
            FitStatus::Diverged { cause: Some(e) } => Err(e),
            _ => Err(Error::Config("fit produced no iterate".into())),
        },
    }
}

fn finish(
    section: &SectionOffsets,
    state: State,
    error_history: Vec<f64>,
    status: FitStatus,
    initial_guess: ScaledCoefficients,
    lewis_fallback: bool,
) -> Result<FitResult> {
    let mapped = mapped_points(&state.scaled, &state.thetas);
    debug_assert_eq!(compute_error(section, &mapped).ok(), Some(state.error_e));
    Ok(FitResult {
        coefficients: state.scaled.to_coefficients()?,
        scaled: state.scaled,
        thetas: state.thetas,
        error_e: state.error_e,
        iterations: error_history.len(),
        error_history,
        status,
        mapped_points: mapped,
        initial_guess,
        lewis_fallback,
    })
}
