//! Simultaneous root finding by Ehrlich-Aberth iteration.
//!
//! The solver only needs `p(z)` and `p'(z)` at the current iterates, so family
//! members are never expanded: their jets are evaluated through the defining
//! recurrences in extended-exponent arithmetic.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::FamilySpec;
use crate::polycore::{DensePoly, ExtComplex};

/// Degree guard for the dense companion-matrix oracle.
pub const COMPANION_DEGREE_LIMIT: usize = 512;

const GOLDEN_FRACTION: f64 = 0.618_033_988_749_894_9;

/// Value and first derivative of a target polynomial.
pub trait NewtonEval: Sync {
    fn eval(&self, z: Complex64) -> (ExtComplex, ExtComplex);
}

impl<F> NewtonEval for F
where
    F: Fn(Complex64) -> (ExtComplex, ExtComplex) + Sync,
{
    fn eval(&self, z: Complex64) -> (ExtComplex, ExtComplex) {
        self(z)
    }
}

/// Solver settings. Starting from a circle outside the roots, the first phase
/// of the iteration contracts the circle by roughly `2/n` per sweep, so
/// degrees in the hundreds need several hundred sweeps.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub init_radius: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            init_radius: 2.5,
            tol: 1e-10,
            max_iter: 1000,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootSolveReport {
    pub roots: Vec<Complex64>,
    pub iterations: usize,
    /// Largest `|p/p'|` over the returned roots.
    pub max_residual_ratio: f64,
    pub converged_count: usize,
}

impl RootSolveReport {
    pub fn all_converged(&self) -> bool {
        self.converged_count == self.roots.len()
    }
}

/// Starting points on a circle, with a seed-dependent phase and a small
/// golden-ratio radial jitter that breaks conjugate symmetry.
pub fn initial_guesses(degree: usize, radius: f64, seed: u64) -> Vec<Complex64> {
    let n = degree as f64;
    let phase = ((seed as f64 + 1.0) * GOLDEN_FRACTION).fract() * std::f64::consts::TAU / n;
    (0..degree)
        .map(|j| {
            let jitter = ((seed + j as u64) as f64 * GOLDEN_FRACTION).fract() - 0.5;
            let r = radius * (1.0 + 0.01 * jitter);
            Complex64::from_polar(r, std::f64::consts::TAU * j as f64 / n + phase)
        })
        .collect()
}

/// `p'/p` as a hardware complex; infinite at a root.
fn log_derivative(eval: &impl NewtonEval, z: Complex64) -> Option<Complex64> {
    let (p, dp) = eval.eval(z);
    if p.is_zero() {
        return None;
    }
    Some((dp / p).to_complex())
}

fn newton_ratio(eval: &impl NewtonEval, z: Complex64) -> f64 {
    let (p, dp) = eval.eval(z);
    if p.is_zero() {
        0.0
    } else if dp.is_zero() {
        f64::INFINITY
    } else {
        (p / dp).to_complex().norm()
    }
}

/// Ehrlich-Aberth iteration from circle starting points.
///
/// Each sweep computes every correction from a snapshot of the previous
/// iterates and then applies them all, so the result is independent of the
/// thread schedule. A root is frozen once its correction falls below
/// `tol * (1 + |z|)`.
pub fn aberth_solve(eval: &impl NewtonEval, degree: usize, cfg: &SolverConfig) -> Result<RootSolveReport> {
    if degree == 0 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    let mut roots = initial_guesses(degree, cfg.init_radius, cfg.seed);
    let mut converged = vec![false; degree];
    let mut iterations = 0;

    while iterations < cfg.max_iter && converged.iter().any(|c| !c) {
        iterations += 1;
        let snapshot = &roots;
        let steps: Vec<Option<Complex64>> = (0..degree)
            .into_par_iter()
            .map(|i| {
                if converged[i] {
                    return None;
                }
                let z = snapshot[i];
                let Some(ratio) = log_derivative(eval, z) else {
                    return Some(Complex64::new(0.0, 0.0));
                };
                let repulsion: Complex64 = snapshot
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, w)| (z - w).inv())
                    .sum();
                let denom = ratio - repulsion;
                if !(denom.re.is_finite() && denom.im.is_finite()) {
                    // p vanished to within the extended range
                    return Some(Complex64::new(0.0, 0.0));
                }
                if denom == Complex64::new(0.0, 0.0) {
                    return Some(Complex64::new(cfg.tol, cfg.tol));
                }
                Some(denom.inv())
            })
            .collect();

        for (i, step) in steps.into_iter().enumerate() {
            if let Some(step) = step {
                roots[i] -= step;
                if step.norm() <= cfg.tol * (1.0 + roots[i].norm()) {
                    converged[i] = true;
                }
            }
        }
    }

    let max_residual_ratio = roots
        .par_iter()
        .map(|z| newton_ratio(eval, *z))
        .reduce(|| 0.0, f64::max);
    Ok(RootSolveReport {
        roots,
        iterations,
        max_residual_ratio,
        converged_count: converged.iter().filter(|c| **c).count(),
    })
}

/// Evaluator for an explicit polynomial.
pub fn poly_evaluator(p: &DensePoly) -> impl NewtonEval + '_ {
    move |z: Complex64| {
        let jet = p.jet(z, 1);
        (jet.get(0), jet.get(1))
    }
}

/// Cauchy bound `1 + max |a_i / a_n|` on the roots of `p`.
pub fn cauchy_radius(p: &DensePoly) -> Result<f64> {
    let lead = p.leading().ok_or(Error::ZeroPolynomial)?;
    let n = p.coeffs().len() - 1;
    Ok(1.0 + p.coeffs()[..n].iter().map(|c| (c / lead).norm()).fold(0.0, f64::max))
}

/// All roots of an explicit polynomial, starting on its Cauchy circle.
pub fn solve_poly(p: &DensePoly, cfg: &SolverConfig) -> Result<RootSolveReport> {
    let degree = p.degree().ok_or(Error::ZeroPolynomial)?;
    let cfg = SolverConfig {
        init_radius: cauchy_radius(p)?,
        ..*cfg
    };
    aberth_solve(&poly_evaluator(p), degree, &cfg)
}

/// Roots of `q_k^(m) - a`, the preimages of `a` under the `m`-th derivative.
pub fn solve_shifted(
    spec: &FamilySpec,
    k: usize,
    m: usize,
    a: Complex64,
    cfg: &SolverConfig,
) -> Result<RootSolveReport> {
    let n_k = spec.degree(k)?;
    let degree = n_k.checked_sub(m as u64).filter(|d| *d >= 1).ok_or_else(|| {
        Error::InvalidArgument(format!("derivative order {m} leaves no roots for degree {n_k}"))
    })?;
    let shift = ExtComplex::new(a);
    let eval = |z: Complex64| {
        let jet = spec.jet(z, k, m + 1);
        (jet.get(m) - shift, jet.get(m + 1))
    };
    aberth_solve(&eval, degree as usize, cfg)
}

/// Eigenvalues of the companion matrix, via a dense complex Schur
/// decomposition. Independent of the Aberth path; meant for tests and oracles.
pub fn companion_oracle(p: &DensePoly) -> Result<Vec<Complex64>> {
    let n = p.degree().ok_or(Error::ZeroPolynomial)?;
    if n > COMPANION_DEGREE_LIMIT {
        return Err(Error::DegreeGuard {
            degree: n as u64,
            limit: COMPANION_DEGREE_LIMIT as u64,
        });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let lead = p.leading().ok_or(Error::ZeroPolynomial)?;
    let mut companion = DMatrix::<Complex64>::zeros(n, n);
    for i in 1..n {
        companion[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..n {
        companion[(i, n - 1)] = -p.coeffs()[i] / lead;
    }
    let schur = companion
        .try_schur(f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Unsupported("companion Schur iteration did not converge".into()))?;
    let (_, t) = schur.unpack();
    Ok((0..n).map(|i| t[(i, i)]).collect())
}

/// Largest distance under the best one-to-one matching of two equal-size
/// point sets (greedy over sorted candidate pairs, exact for well-separated sets).
pub fn matched_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len(), "multisets differ in size");
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(a.len() * b.len());
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            pairs.push(((x - y).norm(), i, j));
        }
    }
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut used_a = vec![false; a.len()];
    let mut used_b = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    let mut matched = 0;
    for (d, i, j) in pairs {
        if used_a[i] || used_b[j] {
            continue;
        }
        used_a[i] = true;
        used_b[j] = true;
        worst = worst.max(d);
        matched += 1;
        if matched == a.len() {
            break;
        }
    }
    worst
}
