//! Experiment configuration (JSON).

use std::path::{Path, PathBuf};

use equidist_core::{brolin_sample, Complex64, DensePoly, FamilySpec, GreenEvaluator, SolverConfig};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Desk-scale degree cap; larger degrees need `--allow-large`.
pub const DESK_DEGREE_LIMIT: u64 = 4096;
/// Subsampling mode keeps `ln |q_k|` within the extended exponent range.
pub const LARGE_DEGREE_LIMIT: u64 = 1 << 60;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coefficient {
    Real(f64),
    Complex([f64; 2]),
}

impl Coefficient {
    pub fn value(&self) -> Complex64 {
        match self {
            Self::Real(x) => Complex64::new(*x, 0.0),
            Self::Complex([re, im]) => Complex64::new(*re, *im),
        }
    }
}

pub fn poly_from(coeffs: &[Coefficient]) -> DensePoly {
    DensePoly::new(coeffs.iter().map(Coefficient::value).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilyConfig {
    CriticalOrbit,
    IterateFixed {
        /// Lowest degree first.
        coeffs: Vec<Coefficient>,
    },
    /// Orthogonal polynomials of a balanced-measure sample of `coeffs`.
    OrthogonalSampled {
        coeffs: Vec<Coefficient>,
        #[serde(default = "default_samples")]
        n_samples: usize,
        #[serde(default = "default_depth")]
        depth: usize,
        #[serde(default)]
        seed: u64,
    },
}

fn default_samples() -> usize {
    10_000
}

fn default_depth() -> usize {
    40
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ShiftConfig {
    Real(f64),
    Complex([f64; 2]),
    /// Only `"a_k = k"` is recognized.
    Rule(String),
}

impl Default for ShiftConfig {
    fn default() -> Self {
        Self::Real(0.0)
    }
}

impl ShiftConfig {
    pub fn at(&self, k: usize) -> Complex64 {
        match self {
            Self::Real(x) => Complex64::new(*x, 0.0),
            Self::Complex([re, im]) => Complex64::new(*re, *im),
            Self::Rule(_) => Complex64::new(k as f64, 0.0),
        }
    }

    fn validate(&self) -> Result<(), String> {
        match self {
            Self::Rule(rule) if rule.split_whitespace().collect::<String>() != "a_k=k" => {
                Err(format!("shift: unknown rule {rule:?}, expected \"a_k = k\""))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    pub init_radius: Option<f64>,
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ReferenceConfig {
    /// Index of the critical-orbit member whose roots stand in for the
    /// equilibrium measure of the Mandelbrot set.
    pub critical_orbit_k: usize,
    /// Balanced-measure sample size for filled Julia sets.
    pub n_samples: usize,
    pub depth: usize,
    pub seed: u64,
}

impl Default for ReferenceConfig {
    fn default() -> Self {
        Self {
            critical_orbit_k: 10,
            n_samples: 10_000,
            depth: 40,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DiagnosticsConfig {
    pub radius: f64,
    pub n_probes: usize,
    pub tau_list: Vec<f64>,
    pub max_p: usize,
    pub max_depth: usize,
    pub reference: ReferenceConfig,
}

impl Default for DiagnosticsConfig {
    fn default() -> Self {
        Self {
            radius: 4.0,
            n_probes: 64,
            tau_list: vec![0.05, 0.1, 0.2],
            max_p: 8,
            max_depth: equidist_core::potential::DEFAULT_MAX_DEPTH,
            reference: ReferenceConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RenderConfig {
    /// Grid columns; rows follow the aspect ratio of `bounds`.
    pub grid: usize,
    /// `[x_min, x_max, y_min, y_max]`; defaults depend on the family.
    pub bounds: Option<[f64; 4]>,
    pub width_px: f64,
    /// Green's values at or above this level are drawn white.
    pub clamp: f64,
    pub dot_radius: f64,
    /// Seeds per axis for subsampled Newton solves.
    pub newton_grid: usize,
}

impl Default for RenderConfig {
    fn default() -> Self {
        Self {
            grid: 512,
            bounds: None,
            width_px: 512.0,
            clamp: 0.5,
            dot_radius: 1.5,
            newton_grid: 64,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// `{k}` is replaced by the family index; otherwise `_k<k>` is inserted
    /// before the extension when several k are run.
    pub csv_path: PathBuf,
    pub svg_path: Option<PathBuf>,
    pub report_path: PathBuf,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub family: FamilyConfig,
    pub k_list: Vec<usize>,
    #[serde(default)]
    pub m: usize,
    #[serde(default)]
    pub shift: ShiftConfig,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub diagnostics: DiagnosticsConfig,
    #[serde(default)]
    pub render: RenderConfig,
    pub output: OutputConfig,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| {
            CliError::Config(format!("line {}, column {}: {e}", e.line(), e.column()))
        })?;
        Ok(cfg)
    }

    /// Reads a config and resolves relative output paths against its directory.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut cfg = Self::from_json(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        cfg.output.csv_path = base.join(&cfg.output.csv_path);
        cfg.output.report_path = base.join(&cfg.output.report_path);
        cfg.output.svg_path = cfg.output.svg_path.map(|p| base.join(p));
        Ok(cfg)
    }

    pub fn family_spec(&self) -> Result<FamilySpec, CliError> {
        let invalid = |e: equidist_core::Error| CliError::Config(format!("family: {e}"));
        match &self.family {
            FamilyConfig::CriticalOrbit => Ok(FamilySpec::CriticalOrbit),
            FamilyConfig::IterateFixed { coeffs } => FamilySpec::iterate(poly_from(coeffs)).map_err(invalid),
            FamilyConfig::OrthogonalSampled {
                coeffs,
                n_samples,
                depth,
                seed,
            } => {
                let max_deg = self.k_list.iter().copied().max().unwrap_or(0);
                let measure = brolin_sample(&poly_from(coeffs), *n_samples, *depth, *seed).map_err(invalid)?;
                FamilySpec::orthogonal(&measure, max_deg).map_err(invalid)
            }
        }
    }

    /// Green's function of the compact set the family equidistributes on.
    pub fn green_evaluator(&self) -> Result<GreenEvaluator, CliError> {
        let ge = match &self.family {
            FamilyConfig::CriticalOrbit => GreenEvaluator::mandelbrot(),
            FamilyConfig::IterateFixed { coeffs } | FamilyConfig::OrthogonalSampled { coeffs, .. } => {
                GreenEvaluator::filled_julia(poly_from(coeffs)).map_err(|e| CliError::Config(format!("family: {e}")))?
            }
        };
        Ok(ge.with_max_depth(self.diagnostics.max_depth))
    }

    pub fn solver_config(&self) -> Result<SolverConfig, CliError> {
        let defaults = SolverConfig::default();
        let init_radius = match self.solver.init_radius {
            Some(r) => r,
            None => defaults.init_radius.max(self.green_evaluator()?.escape_radius),
        };
        Ok(SolverConfig {
            init_radius,
            tol: self.solver.tol.unwrap_or(defaults.tol),
            max_iter: self.solver.max_iter.unwrap_or(defaults.max_iter),
            seed: self.solver.seed.unwrap_or(defaults.seed),
        })
    }

    pub fn bounds(&self) -> Result<[f64; 4], CliError> {
        if let Some(b) = self.render.bounds {
            return Ok(b);
        }
        Ok(match self.family {
            FamilyConfig::CriticalOrbit => [-2.25, 0.75, -1.5, 1.5],
            _ => {
                let r = self.green_evaluator()?.escape_radius;
                [-r, r, -r, r]
            }
        })
    }

    pub fn csv_path(&self, k: usize) -> PathBuf {
        self.per_k_path(&self.output.csv_path, k)
    }

    pub fn svg_path(&self, k: usize) -> Option<PathBuf> {
        self.output.svg_path.as_ref().map(|p| self.per_k_path(p, k))
    }

    fn per_k_path(&self, template: &Path, k: usize) -> PathBuf {
        let text = template.to_string_lossy();
        if text.contains("{k}") {
            return PathBuf::from(text.replace("{k}", &k.to_string()));
        }
        if self.k_list.len() <= 1 {
            return template.to_path_buf();
        }
        let stem = template.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let name = match template.extension() {
            Some(ext) => format!("{stem}_k{k}.{}", ext.to_string_lossy()),
            None => format!("{stem}_k{k}"),
        };
        template.with_file_name(name)
    }

    /// Shape checks that serde cannot express. Returns, per k, whether the
    /// degree needs the subsampling mode.
    pub fn validate(&self, spec: &FamilySpec, allow_large: bool) -> Result<Vec<bool>, CliError> {
        let fail = |msg: String| Err(CliError::Config(msg));
        if self.k_list.is_empty() {
            return fail("k_list: must not be empty".into());
        }
        self.shift.validate().map_err(CliError::Config)?;
        if let Some(tol) = self.solver.tol {
            if tol.is_nan() || tol <= 0.0 {
                return fail(format!("solver.tol: must be positive, got {tol}"));
            }
        }
        if self.solver.max_iter == Some(0) {
            return fail("solver.max_iter: must be positive".into());
        }
        if self.diagnostics.max_p > equidist_core::diagnostics::MAX_MOMENT_ORDER {
            return fail(format!("diagnostics.max_p: at most 8, got {}", self.diagnostics.max_p));
        }
        if self.diagnostics.tau_list.iter().any(|t| t.is_nan() || *t <= 0.0) {
            return fail("diagnostics.tau_list: thresholds must be positive".into());
        }
        if self.diagnostics.n_probes == 0 {
            return fail("diagnostics.n_probes: must be positive".into());
        }
        if self.render.grid == 0 || self.render.newton_grid == 0 {
            return fail("render.grid: must be positive".into());
        }
        let [x0, x1, y0, y1] = self.bounds()?;
        if !(x1 > x0 && y1 > y0) || [x0, x1, y0, y1].iter().any(|v| !v.is_finite()) {
            return fail(format!("render.bounds: degenerate rectangle {:?}", [x0, x1, y0, y1]));
        }

        let mut large = Vec::with_capacity(self.k_list.len());
        for &k in &self.k_list {
            let n_k = spec.degree(k).map_err(|e| CliError::Config(format!("k_list: k = {k}: {e}")))?;
            if n_k <= self.m as u64 {
                return fail(format!("k_list: k = {k} has degree {n_k}, nothing left after {} derivatives", self.m));
            }
            if n_k > DESK_DEGREE_LIMIT {
                if !allow_large {
                    return fail(format!(
                        "k_list: k = {k} has degree {n_k} > {DESK_DEGREE_LIMIT}; pass --allow-large for subsampled output"
                    ));
                }
                if n_k > LARGE_DEGREE_LIMIT {
                    return fail(format!("k_list: k = {k} has degree {n_k}, beyond the extended exponent range"));
                }
                large.push(true);
            } else {
                large.push(false);
            }
        }
        Ok(large)
    }
}
