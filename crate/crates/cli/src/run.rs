use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, Context};
use serde::Serialize;

use hullmap::fit::initial_guess;
use hullmap::metrics::build_report;
use hullmap::{
    fit_section, lewis_initial_guess, parse_offsets, search_optimum, AccuracyReport,
    CoefficientReport, Error, FitConfig, FitResult, MappingCoefficients, Point, Report,
    SearchConfig, SearchReport, SectionOffsets,
};

use crate::render::{contour_csv, section_svg, Curve};
use crate::{Emit, Mode};

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_PARSE: u8 = 3;
pub const EXIT_DIVERGED: u8 = 4;
pub const EXIT_SEARCH: u8 = 5;
const EXIT_EMIT: u8 = 1;

#[derive(Debug, Clone)]
pub struct RunSpec {
    pub mode: Mode,
    pub n: Option<usize>,
    pub sigma_e: Option<f64>,
    pub output_dir: PathBuf,
    pub emit: Vec<Emit>,
    pub samples: usize,
    pub timing: bool,
    pub thetas_from: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy)]
pub enum Stage {
    Parse,
    Fit,
    Search,
    Emit,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Parse => "parse",
            Stage::Fit => "fit",
            Stage::Search => "search",
            Stage::Emit => "emit",
        })
    }
}

#[derive(Debug)]
pub struct Failure {
    pub stage: Stage,
    pub code: u8,
    pub error: anyhow::Error,
}

impl Failure {
    fn new(stage: Stage, code: u8, error: impl Into<anyhow::Error>) -> Self {
        Self {
            stage,
            code,
            error: error.into(),
        }
    }

    fn parse(error: impl Into<anyhow::Error>) -> Self {
        Self::new(Stage::Parse, EXIT_PARSE, error)
    }

    fn emit(error: impl Into<anyhow::Error>) -> Self {
        Self::new(Stage::Emit, EXIT_EMIT, error)
    }
}

pub struct Outcome {
    pub summary: String,
}

type RunResult = Result<Outcome, Failure>;

/// A single file, or every regular file of a directory in name order.
pub fn collect_inputs(path: &Path) -> anyhow::Result<Vec<PathBuf>> {
    if !path.is_dir() {
        return Ok(vec![path.to_path_buf()]);
    }
    let mut files = Vec::new();
    for entry in fs::read_dir(path).with_context(|| format!("reading {}", path.display()))? {
        let p = entry?.path();
        if p.is_file() {
            files.push(p);
        }
    }
    files.sort();
    if files.is_empty() {
        return Err(anyhow!("no input files in {}", path.display()));
    }
    Ok(files)
}

/// Runs every input, concurrently when there is more than one.
pub fn run_all(spec: &RunSpec, inputs: &[PathBuf]) -> Vec<RunResult> {
    if inputs.len() == 1 {
        return vec![run_one(spec, &inputs[0])];
    }
    std::thread::scope(|scope| {
        let handles: Vec<_> = inputs
            .iter()
            .map(|path| scope.spawn(move || run_one(spec, path)))
            .collect();
        handles
            .into_iter()
            .map(|h| {
                h.join()
                    .unwrap_or_else(|_| Err(Failure::new(Stage::Fit, 101, anyhow!("worker panicked"))))
            })
            .collect()
    })
}

fn section_id(path: &Path) -> String {
    let name = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    // drop a trailing `.report`/`.coefficients` too, so evaluate output
    // lands next to the fit output it came from
    let stem = name.split('.').next().unwrap_or_default();
    if stem.is_empty() {
        "section".into()
    } else {
        stem.to_string()
    }
}

fn run_one(spec: &RunSpec, path: &Path) -> RunResult {
    let id = section_id(path);
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(Failure::parse)?;
    match spec.mode {
        Mode::Evaluate => evaluate(spec, &id, &text),
        mode => {
            let section = parse_offsets(&text).map_err(Failure::parse)?;
            match mode {
                Mode::Fit => fit(spec, &id, &section),
                Mode::Search => search(spec, &id, &section),
                _ => lewis(spec, &id, &section),
            }
        }
    }
}

fn library_failure(stage: Stage, code: u8, e: Error) -> Failure {
    match e {
        Error::Config(_) => Failure::new(stage, EXIT_USAGE, e),
        _ => Failure::new(stage, code, e),
    }
}

fn fit(spec: &RunSpec, id: &str, section: &SectionOffsets) -> RunResult {
    let n = spec
        .n
        .ok_or_else(|| Failure::new(Stage::Fit, EXIT_USAGE, anyhow!("`fit` requires --n")))?;
    let sigma = spec
        .sigma_e
        .unwrap_or(1e-6 * section.scale() * section.scale());
    let start = Instant::now();
    let result = fit_section(section, &FitConfig::for_section(section, n, sigma))
        .map_err(|e| library_failure(Stage::Fit, EXIT_DIVERGED, e))?;
    let seconds = elapsed(spec, start);

    write_fit_outputs(spec, id, section, &result, None, seconds)?;
    let summary = format!(
        "{id}: N={n} E={:.6e} iterations={} status={:?}",
        result.error_e, result.iterations, result.status
    );
    if !result.converged() {
        return Err(Failure::new(
            Stage::Fit,
            EXIT_DIVERGED,
            anyhow!(
                "no convergence to sigma_E={sigma:e} ({:?}); best E={:e} after {} iterations, outputs written",
                result.status,
                result.error_e,
                result.iterations
            ),
        ));
    }
    Ok(Outcome { summary })
}

fn search(spec: &RunSpec, id: &str, section: &SectionOffsets) -> RunResult {
    let start = Instant::now();
    let mut report = search_optimum(section, &SearchConfig::default())
        .map_err(|e| library_failure(Stage::Search, EXIT_SEARCH, e))?;
    let seconds = elapsed(spec, start);
    if !spec.timing {
        report.per_n.iter_mut().for_each(|r| r.seconds = 0.0);
    }
    write_fit_outputs(spec, id, section, &report.best_fit, Some(&report), seconds)?;
    Ok(Outcome {
        summary: format!("{id}: best N={} E={:.6e} ({} N tried)", report.best_n, report.best_e, report.per_n.len()),
    })
}

fn evaluate(spec: &RunSpec, id: &str, text: &str) -> RunResult {
    let (coefficients, symmetric) = read_coefficients(text).map_err(Failure::parse)?;
    let thetas = match &spec.thetas_from {
        Some(path) => {
            let report: Report = fs::read_to_string(path)
                .map_err(anyhow::Error::from)
                .and_then(|t| serde_json::from_str(&t).map_err(Into::into))
                .with_context(|| format!("reading angles from {}", path.display()))
                .map_err(Failure::parse)?;
            report.theta
        }
        None => uniform(nominal_domain(symmetric), spec.samples),
    };
    let contour: Vec<Point> = thetas.iter().map(|&t| coefficients.boundary(t)).collect();

    for emit in &spec.emit {
        match emit {
            Emit::Json => write_json(
                spec,
                &format!("{id}.contour.json"),
                &ContourFile {
                    theta: &thetas,
                    contour: contour.iter().map(|&p| p.into()).collect(),
                },
            )?,
            Emit::Csv => write(spec, &format!("{id}.contour.csv"), &contour_csv(&thetas, &contour))?,
            Emit::Svg => {
                let curves = [Curve::mapped(contour.clone())];
                write(spec, &format!("{id}.svg"), &section_svg(&[], &curves))?
            }
        }
    }
    Ok(Outcome {
        summary: format!("{id}: {} points evaluated", contour.len()),
    })
}

fn lewis(spec: &RunSpec, id: &str, section: &SectionOffsets) -> RunResult {
    let (coefficients, fallback) = if section.is_symmetric() {
        let g = lewis_initial_guess(section.breadth(), section.draft(), section.area())
            .map_err(|e| library_failure(Stage::Fit, EXIT_DIVERGED, e))?;
        (g.coefficients, g.fallback)
    } else {
        let (scaled, fallback) =
            initial_guess(section, 2).map_err(|e| library_failure(Stage::Fit, EXIT_DIVERGED, e))?;
        let c = scaled
            .to_coefficients()
            .map_err(|e| library_failure(Stage::Fit, EXIT_DIVERGED, e))?;
        (c, fallback)
    };
    let thetas = uniform(nominal_domain(Some(section.is_symmetric())), spec.samples);
    let curve = sample(&coefficients, &thetas);
    for emit in &spec.emit {
        match emit {
            Emit::Json => write_json(spec, &format!("{id}.lewis.json"), &coefficient_file(&coefficients, section))?,
            Emit::Csv => write(spec, &format!("{id}.lewis.csv"), &contour_csv(&thetas, &curve))?,
            Emit::Svg => write(
                spec,
                &format!("{id}.lewis.svg"),
                &section_svg(section.points(), &[Curve::lewis(curve.clone())]),
            )?,
        }
    }
    let note = if fallback { " (area ignored)" } else { "" };
    let a = coefficients.coefficients();
    Ok(Outcome {
        summary: format!(
            "{id}: Lewis F={:.6} a1={:.6} a3={:.6}{note}",
            coefficients.scale_factor(),
            a[1],
            a[2]
        ),
    })
}

#[derive(Serialize)]
struct ContourFile<'a> {
    theta: &'a [f64],
    contour: Vec<[f64; 2]>,
}

fn write_fit_outputs(
    spec: &RunSpec,
    id: &str,
    section: &SectionOffsets,
    fit: &FitResult,
    search: Option<&SearchReport>,
    seconds: f64,
) -> Result<(), Failure> {
    for emit in &spec.emit {
        match emit {
            Emit::Json => {
                let accuracy = AccuracyReport::new(section.points(), &fit.mapped_points, seconds)
                    .map_err(Failure::emit)?;
                let report = build_report(id, section.is_symmetric(), fit, search, &accuracy);
                write_json(spec, &format!("{id}.report.json"), &report)?;
                write_json(spec, &format!("{id}.coefficients.json"), &coefficient_file(&fit.coefficients, section))?;
            }
            Emit::Csv => {
                let thetas = fitted_grid(fit, spec.samples);
                let contour = sample(&fit.coefficients, &thetas);
                write(spec, &format!("{id}.contour.csv"), &contour_csv(&thetas, &contour))?;
            }
            Emit::Svg => {
                let thetas = fitted_grid(fit, spec.samples);
                let mut curves = vec![Curve::mapped(sample(&fit.coefficients, &thetas))];
                if section.is_symmetric() {
                    if let Ok(g) = lewis_initial_guess(section.breadth(), section.draft(), section.area()) {
                        curves.push(Curve::lewis(sample(&g.coefficients, &thetas)));
                    }
                }
                write(spec, &format!("{id}.svg"), &section_svg(section.points(), &curves))?;
            }
        }
    }
    Ok(())
}

fn coefficient_file(c: &MappingCoefficients, section: &SectionOffsets) -> CoefficientReport {
    CoefficientReport {
        symmetric: Some(section.is_symmetric()),
        ..CoefficientReport::from(c)
    }
}

/// Accepts a coefficients file or a full report.
fn read_coefficients(text: &str) -> anyhow::Result<(hullmap::ScaledCoefficients, Option<bool>)> {
    if let Ok(c) = serde_json::from_str::<CoefficientReport>(text) {
        return Ok((c.to_coefficients()?.to_scaled(), c.symmetric));
    }
    let report: Report = serde_json::from_str(text)
        .context("expected a coefficients file ({N, F, a, ...}) or a report")?;
    let c = MappingCoefficients::new(report.coefficients.f, report.coefficients.a)?;
    Ok((c.to_scaled(), Some(report.symmetric)))
}

fn nominal_domain(symmetric: Option<bool>) -> (f64, f64) {
    match symmetric {
        Some(true) => (0.0, FRAC_PI_2),
        _ => (-FRAC_PI_2, FRAC_PI_2),
    }
}

/// Uniform grid over the angles the fit actually used.
fn fitted_grid(fit: &FitResult, samples: usize) -> Vec<f64> {
    let t = &fit.thetas.theta;
    let lo = t.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = t.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    uniform((lo, hi), samples)
}

fn uniform((lo, hi): (f64, f64), samples: usize) -> Vec<f64> {
    let last = (samples - 1).max(1) as f64;
    (0..samples).map(|k| lo + (hi - lo) * k as f64 / last).collect()
}

fn sample(c: &MappingCoefficients, thetas: &[f64]) -> Vec<Point> {
    let scaled = c.to_scaled();
    thetas.iter().map(|&t| scaled.boundary(t)).collect()
}

fn elapsed(spec: &RunSpec, start: Instant) -> f64 {
    if spec.timing {
        start.elapsed().as_secs_f64()
    } else {
        0.0
    }
}

fn write_json<T: Serialize>(spec: &RunSpec, name: &str, value: &T) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).map_err(Failure::emit)?;
    text.push('\n');
    write(spec, name, &text)
}

fn write(spec: &RunSpec, name: &str, contents: &str) -> Result<(), Failure> {
    let path = spec.output_dir.join(name);
    fs::write(&path, contents)
        .with_context(|| format!("writing {}", path.display()))
        .map_err(Failure::emit)
}
