//! The experiment runner: solve, measure, write CSV/SVG/JSON artifacts.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use equidist_core::diagnostics::{
    centering_report, kregularity_gap, leading_coeff_gap, moment_gap, CenteringReport, DiscrepancyReport,
    MomentGapReport,
};
use equidist_core::potential::DEFAULT_ROBIN_RADII;
use equidist_core::{
    brolin_sample, robin_constant, root_distribution, solve_shifted, Complex64, EmpiricalMeasure, ExtComplex,
    FamilySpec, GreenEvaluator, RobinEstimate, SolverConfig,
};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{poly_from, ExperimentConfig, FamilyConfig};
use crate::error::CliError;
use crate::render::{render_svg, Bounds, GreenGrid, RenderStyle};

const ROBIN_SAMPLES: usize = 64;

#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    pub allow_large: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReferenceInfo {
    pub description: String,
    /// True when the reference is a root cloud of the family itself rather
    /// than an independent sample of the equilibrium measure.
    pub proxy: bool,
    pub size: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveSummary {
    pub mode: &'static str,
    pub iterations: usize,
    pub converged_count: usize,
    pub roots_found: usize,
    pub max_residual_ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct KReport {
    pub k: usize,
    pub degree: u64,
    pub shift: [f64; 2],
    pub partial: bool,
    pub solver: SolveSummary,
    pub discrepancy: DiscrepancyReport,
    pub centering: Vec<CenteringReport>,
    pub moments: MomentGapReport,
    pub leading_coeff_gap: f64,
    pub csv_path: String,
    pub svg_path: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExperimentReport {
    pub family: String,
    pub m: usize,
    pub reference: ReferenceInfo,
    pub robin: RobinEstimate,
    pub runs: Vec<KReport>,
}

impl ExperimentReport {
    pub fn partial(&self) -> bool {
        self.runs.iter().any(|r| r.partial)
    }
}

struct Solved {
    roots: Vec<Complex64>,
    summary: SolveSummary,
    partial: bool,
}

fn family_label(family: &FamilyConfig) -> String {
    match family {
        FamilyConfig::CriticalOrbit => "critical_orbit".into(),
        FamilyConfig::IterateFixed { coeffs } => format!("iterate_fixed {:?}", poly_from(coeffs)),
        FamilyConfig::OrthogonalSampled { coeffs, .. } => format!("orthogonal_sampled {:?}", poly_from(coeffs)),
    }
}

fn reference_measure(cfg: &ExperimentConfig, solver: &SolverConfig) -> Result<(EmpiricalMeasure, ReferenceInfo), CliError> {
    let r = &cfg.diagnostics.reference;
    match &cfg.family {
        FamilyConfig::CriticalOrbit => {
            let report = solve_shifted(&FamilySpec::CriticalOrbit, r.critical_orbit_k, 0, Complex64::new(0.0, 0.0), solver)?;
            let n = report.roots.len();
            let info = ReferenceInfo {
                description: format!("roots of q_{} (stand-in for the Mandelbrot equilibrium measure)", r.critical_orbit_k),
                proxy: true,
                size: n,
            };
            Ok((root_distribution(report.roots, n)?, info))
        }
        FamilyConfig::IterateFixed { coeffs } | FamilyConfig::OrthogonalSampled { coeffs, .. } => {
            let mu = brolin_sample(&poly_from(coeffs), r.n_samples, r.depth, r.seed)?;
            let info = ReferenceInfo {
                description: format!("balanced-measure sample, depth {}, seed {}", r.depth, r.seed),
                proxy: false,
                size: mu.len(),
            };
            Ok((mu, info))
        }
    }
}

/// Newton from a grid of seeds; returns the distinct converged points.
fn newton_subsample(
    spec: &FamilySpec,
    k: usize,
    m: usize,
    a: Complex64,
    solver: &SolverConfig,
    bounds: Bounds,
    per_axis: usize,
) -> Solved {
    let shift = ExtComplex::new(a);
    let seeds: Vec<Complex64> = (0..per_axis * per_axis)
        .map(|idx| {
            let (r, c) = (idx / per_axis, idx % per_axis);
            Complex64::new(
                bounds.x_min + (c as f64 + 0.5) / per_axis as f64 * (bounds.x_max - bounds.x_min),
                bounds.y_max - (r as f64 + 0.5) / per_axis as f64 * (bounds.y_max - bounds.y_min),
            )
        })
        .collect();
    let escape = 10.0 * bounds.x_max.abs().max(bounds.x_min.abs()).max(bounds.y_max.abs()).max(bounds.y_min.abs());
    let outcomes: Vec<Option<(Complex64, usize, f64)>> = seeds
        .par_iter()
        .map(|&seed| {
            let mut z = seed;
            for it in 1..=solver.max_iter {
                let jet = spec.jet(z, k, m + 1);
                let (p, dp) = (jet.get(m) - shift, jet.get(m + 1));
                if p.is_zero() {
                    return Some((z, it, 0.0));
                }
                let step = (p / dp).to_complex();
                if !(step.re.is_finite() && step.im.is_finite()) {
                    return None;
                }
                z -= step;
                if z.norm() > escape {
                    return None;
                }
                if step.norm() <= solver.tol * (1.0 + z.norm()) {
                    return Some((z, it, step.norm()));
                }
            }
            None
        })
        .collect();

    let mut found: Vec<Complex64> = Vec::new();
    let mut iterations = 0;
    let mut worst: f64 = 0.0;
    for (z, it, ratio) in outcomes.into_iter().flatten() {
        if found.iter().any(|w| (w - z).norm() <= 1e-7 * (1.0 + z.norm())) {
            continue;
        }
        found.push(z);
        iterations = iterations.max(it);
        worst = worst.max(ratio);
    }
    found.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let count = found.len();
    Solved {
        roots: found,
        summary: SolveSummary {
            mode: "subsampled",
            iterations,
            converged_count: count,
            roots_found: count,
            max_residual_ratio: worst,
        },
        partial: true,
    }
}

pub fn write_roots_csv(path: &Path, roots: &[Complex64], green: &[f64]) -> Result<(), CliError> {
    let mut out = String::from("re,im,green_value\n");
    for (z, g) in roots.iter().zip(green) {
        let _ = writeln!(out, "{:.16e},{:.16e},{:.16e}", z.re, z.im, g);
    }
    write_file(path, out.as_bytes())
}

pub fn read_roots_csv(path: &Path) -> Result<Vec<Complex64>, CliError> {
    let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
    let malformed = |line: usize, message: &str| CliError::Input {
        path: path.to_path_buf(),
        message: format!("line {line}: {message}"),
    };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == "re,im,green_value" || header.trim() == "re,im" => {}
        _ => return Err(malformed(1, "expected header re,im,green_value")),
    }
    let mut roots = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        let mut next = || -> Result<f64, CliError> {
            fields
                .next()
                .and_then(|f| f.trim().parse().ok())
                .ok_or_else(|| malformed(i + 1, "expected numeric re,im"))
        };
        roots.push(Complex64::new(next()?, next()?));
    }
    Ok(roots)
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(CliError::io(dir))?;
    }
    std::fs::write(path, bytes).map_err(CliError::io(path))
}

fn style(cfg: &ExperimentConfig) -> RenderStyle {
    RenderStyle {
        width_px: cfg.render.width_px,
        clamp: cfg.render.clamp,
        dot_radius: cfg.render.dot_radius,
    }
}

pub fn run(cfg: &ExperimentConfig, options: RunOptions) -> Result<ExperimentReport, CliError> {
    let spec = cfg.family_spec()?;
    let large = cfg.validate(&spec, options.allow_large)?;
    let ge = cfg.green_evaluator()?;
    let solver = cfg.solver_config()?;
    let bounds = Bounds::from_array(cfg.bounds()?);

    let (reference, reference_info) = reference_measure(cfg, &solver)?;
    let robin = robin_constant(&ge, &DEFAULT_ROBIN_RADII, ROBIN_SAMPLES)?;
    let grid = match cfg.output.svg_path {
        Some(_) => Some(GreenGrid::sample(&ge, bounds, cfg.render.grid)?),
        None => None,
    };

    let runs = cfg
        .k_list
        .par_iter()
        .zip(large.par_iter())
        .map(|(&k, &large)| {
            run_one(cfg, &spec, &ge, &solver, bounds, &reference, &robin, grid.as_ref(), k, large)
        })
        .collect::<Result<Vec<_>, _>>()?;

    let report = ExperimentReport {
        family: family_label(&cfg.family),
        m: cfg.m,
        reference: reference_info,
        robin,
        runs,
    };
    let mut json = serde_json::to_string_pretty(&report).map_err(|e| CliError::Config(e.to_string()))?;
    json.push('\n');
    write_file(&cfg.output.report_path, json.as_bytes())?;
    Ok(report)
}

#[allow(clippy::too_many_arguments)]
fn run_one(
    cfg: &ExperimentConfig,
    spec: &FamilySpec,
    ge: &GreenEvaluator,
    solver: &SolverConfig,
    bounds: Bounds,
    reference: &EmpiricalMeasure,
    robin: &RobinEstimate,
    grid: Option<&GreenGrid>,
    k: usize,
    large: bool,
) -> Result<KReport, CliError> {
    let m = cfg.m;
    let a = cfg.shift.at(k);
    let degree = spec.degree(k)?;

    let solved = if large {
        newton_subsample(spec, k, m, a, solver, bounds, cfg.render.newton_grid)
    } else {
        let report = solve_shifted(spec, k, m, a, solver)?;
        Solved {
            partial: !report.all_converged(),
            summary: SolveSummary {
                mode: "full",
                iterations: report.iterations,
                converged_count: report.converged_count,
                roots_found: report.roots.len(),
                max_residual_ratio: report.max_residual_ratio,
            },
            roots: report.roots,
        }
    };

    let green: Vec<f64> = solved.roots.par_iter().map(|z| ge.eval(*z)).collect();
    let csv_path = cfg.csv_path(k);
    write_roots_csv(&csv_path, &solved.roots, &green)?;

    let svg_path = match (cfg.svg_path(k), grid) {
        (Some(path), Some(grid)) => {
            let svg = render_svg(&solved.roots, grid, bounds, &style(cfg))?;
            write_file(&path, svg.as_bytes())?;
            Some(path)
        }
        _ => None,
    };

    let discrepancy = kregularity_gap(spec, k, m, ge, cfg.diagnostics.radius, cfg.diagnostics.n_probes)?;
    let (centering, moments) = if solved.roots.is_empty() {
        (Vec::new(), moment_gap(reference, reference, cfg.diagnostics.max_p)?)
    } else {
        let n = solved.roots.len();
        let mu = root_distribution(solved.roots, n)?;
        let centering = cfg
            .diagnostics
            .tau_list
            .iter()
            .map(|tau| centering_report(&mu, ge, *tau))
            .collect::<Result<Vec<_>, _>>()?;
        (centering, moment_gap(&mu, reference, cfg.diagnostics.max_p)?)
    };

    Ok(KReport {
        k,
        degree,
        shift: [a.re, a.im],
        partial: solved.partial,
        solver: solved.summary,
        discrepancy,
        centering,
        moments,
        leading_coeff_gap: leading_coeff_gap(spec, k, robin)?,
        csv_path: display(&csv_path),
        svg_path: svg_path.as_deref().map(display),
    })
}

fn display(path: &Path) -> String {
    path.to_string_lossy().into_owned()
}

/// Renders a roots CSV against the family's Green's function.
pub fn render_csv(csv: &Path, cfg: &ExperimentConfig, out: &Path) -> Result<PathBuf, CliError> {
    let roots = read_roots_csv(csv)?;
    let bounds = Bounds::from_array(cfg.bounds()?);
    let grid = GreenGrid::sample(&cfg.green_evaluator()?, bounds, cfg.render.grid)?;
    let svg = render_svg(&roots, &grid, bounds, &style(cfg))?;
    write_file(out, svg.as_bytes())?;
    Ok(out.to_path_buf())
}
