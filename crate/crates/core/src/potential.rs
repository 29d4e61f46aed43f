//! Green's functions with pole at infinity, logarithmic potentials, Robin
//! constants, and inverse-iteration sampling of equilibrium measures.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polycore::ext::ldexp;
use crate::polycore::{pairwise_sum, DensePoly, EmpiricalMeasure, ExtComplex};
use crate::roots::{solve_poly, SolverConfig};

pub const DEFAULT_MAX_DEPTH: usize = 1000;
pub const DEFAULT_ROBIN_RADII: [f64; 3] = [1e3, 1e4, 1e5];
pub const BROLIN_MIN_DEPTH: usize = 20;

/// Once an orbit has escaped it is iterated further until `ln|z|` reaches
/// this level, which makes the truncation error negligible in f64.
const REFINE_LOG: f64 = 1024.0;
const MAX_REFINE_STEPS: usize = 256;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum GreenTarget {
    /// `g_M(c) = lim 2^-(k-1) ln |P_c^k(0)|`.
    MandelbrotParameter,
    /// `g_K(z) = lim n^-k ln |P^k(z)|` for the filled Julia set of `P`.
    FilledJulia(DensePoly),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GreenEvaluator {
    pub target: GreenTarget,
    pub max_depth: usize,
    pub escape_radius: f64,
}

impl GreenEvaluator {
    pub fn mandelbrot() -> Self {
        Self {
            target: GreenTarget::MandelbrotParameter,
            max_depth: DEFAULT_MAX_DEPTH,
            escape_radius: 2.0,
        }
    }

    /// Escape radius `max(2, 1 + max |coeff|)`.
    pub fn filled_julia(p: DensePoly) -> Result<Self> {
        if p.degree().is_none_or(|n| n < 2) {
            return Err(Error::InvalidArgument("filled Julia set needs degree >= 2".into()));
        }
        let biggest = p.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
        Ok(Self {
            target: GreenTarget::FilledJulia(p),
            max_depth: DEFAULT_MAX_DEPTH,
            escape_radius: f64::max(2.0, 1.0 + biggest),
        })
    }

    pub fn with_max_depth(mut self, max_depth: usize) -> Self {
        self.max_depth = max_depth;
        self
    }

    /// Green's function value; `0` when the orbit stays bounded for
    /// `max_depth` steps.
    pub fn eval(&self, z: Complex64) -> f64 {
        let r2 = self.escape_radius * self.escape_radius;
        match &self.target {
            GreenTarget::MandelbrotParameter => {
                let c = z;
                let mut w = c;
                for level in 1..=self.max_depth {
                    if w.norm_sqr() > r2 {
                        let step = |x: ExtComplex| x.square() + c;
                        let (log, level) = refine(w, level, step);
                        return ldexp(log, -(level as i64 - 1));
                    }
                    w = w * w + c;
                }
                0.0
            }
            GreenTarget::FilledJulia(p) => {
                let degree = p.degree().unwrap_or(0) as f64;
                let mut w = z;
                for level in 0..=self.max_depth {
                    if w.norm_sqr() > r2 {
                        let step = |x: ExtComplex| {
                            p.coeffs().iter().rev().fold(ExtComplex::ZERO, |acc, &a| acc * x + a)
                        };
                        let (log, level) = refine(w, level, step);
                        return (log.ln() - level as f64 * degree.ln()).exp();
                    }
                    w = p.coeffs().iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * w + a);
                }
                0.0
            }
        }
    }
}

/// Iterates an escaped orbit until `ln|w| >= REFINE_LOG`; returns `ln|w|`
/// and the final level.
fn refine(w: Complex64, level: usize, step: impl Fn(ExtComplex) -> ExtComplex) -> (f64, usize) {
    let mut w = ExtComplex::new(w);
    let mut level = level;
    for _ in 0..MAX_REFINE_STEPS {
        if w.log_abs() >= REFINE_LOG {
            break;
        }
        w = step(w);
        level += 1;
    }
    (w.log_abs(), level)
}

pub fn green_eval(ge: &GreenEvaluator, z: Complex64) -> f64 {
    ge.eval(z)
}

/// `p_mu(z) = int ln|z - w| dmu(w)`.
pub fn potential_of_measure(mu: &EmpiricalMeasure, z: Complex64) -> Result<f64> {
    let mut terms = Vec::with_capacity(mu.len());
    for (index, (x, w)) in mu.points().iter().zip(mu.weights()).enumerate() {
        let d = (z - x).norm();
        if d == 0.0 {
            if *w > 0.0 {
                return Err(Error::LogPole { index });
            }
            continue;
        }
        terms.push(w * d.ln());
    }
    Ok(pairwise_sum(&terms))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RobinEstimate {
    pub value: f64,
    pub radii: Vec<f64>,
    /// Max minus min of the per-radius means.
    pub spread: f64,
}

/// `I = mean(ln|z| - g(z))` over probe circles far from the compact set.
pub fn robin_constant(ge: &GreenEvaluator, radii: &[f64], samples_per_circle: usize) -> Result<RobinEstimate> {
    if radii.is_empty() || samples_per_circle == 0 {
        return Err(Error::InvalidArgument("need at least one probe radius and sample".into()));
    }
    let mut means = Vec::with_capacity(radii.len());
    for &radius in radii {
        let gaps: Vec<f64> = (0..samples_per_circle)
            .into_par_iter()
            .map(|j| {
                let theta = std::f64::consts::TAU * (j as f64 + 0.5) / samples_per_circle as f64;
                let z = Complex64::from_polar(radius, theta);
                let g = ge.eval(z);
                if g == 0.0 {
                    Err(Error::ProbeInsideCompact { radius })
                } else {
                    Ok(radius.ln() - g)
                }
            })
            .collect::<Result<_>>()?;
        means.push(pairwise_sum(&gaps) / samples_per_circle as f64);
    }
    let lo = means.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = means.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(RobinEstimate {
        value: pairwise_sum(&means) / means.len() as f64,
        radii: radii.to_vec(),
        spread: hi - lo,
    })
}

/// Solutions `w` of `P(w) = z`.
fn preimages(p: &DensePoly, z: Complex64) -> Option<Vec<Complex64>> {
    let coeffs = p.coeffs();
    if coeffs.len() == 3 {
        let (a, b, c) = (coeffs[2], coeffs[1], coeffs[0] - z);
        let disc = (b * b - a * c * 4.0).sqrt();
        return Some(vec![(-b + disc) / (a * 2.0), (-b - disc) / (a * 2.0)]);
    }
    let shifted = p.sub(&DensePoly::constant(z));
    let cfg = SolverConfig {
        tol: 1e-13,
        max_iter: 500,
        ..SolverConfig::default()
    };
    let report = solve_poly(&shifted, &cfg).ok()?;
    report.all_converged().then_some(report.roots)
}

/// Samples of the balanced measure of `P` by random backward orbits.
///
/// Each sample starts at a point of the basin of infinity and applies `depth`
/// inverse branches chosen uniformly at random. Sample `i` draws from its own
/// ChaCha stream `(seed, i)`, so the result does not depend on scheduling.
pub fn brolin_sample(p: &DensePoly, n_samples: usize, depth: usize, seed: u64) -> Result<EmpiricalMeasure> {
    let degree = p
        .degree()
        .filter(|n| *n >= 2)
        .ok_or_else(|| Error::InvalidArgument("balanced measure needs degree >= 2".into()))?;
    if !p.is_monic() {
        return Err(Error::InvalidArgument("balanced-measure sampler expects a monic polynomial".into()));
    }
    if depth < BROLIN_MIN_DEPTH {
        return Err(Error::InvalidArgument(format!("depth must be at least {BROLIN_MIN_DEPTH}")));
    }
    let escape = GreenEvaluator::filled_julia(p.clone())?.escape_radius;
    let start = Complex64::new(f64::max(3.0, escape), 0.0);

    let points = (0..n_samples)
        .into_par_iter()
        .map(|sample| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(sample as u64);
            let mut z = start;
            for step in 0..depth {
                let branches = preimages(p, z).ok_or(Error::InverseBranch { sample, step })?;
                z = branches[rng.random_range(0..degree)];
            }
            Ok(z)
        })
        .collect::<Result<Vec<_>>>()?;
    EmpiricalMeasure::uniform(points)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn square() -> DensePoly {
        DensePoly::from_real(&[0.0, 0.0, 1.0])
    }

    fn chebyshev_map() -> DensePoly {
        DensePoly::from_real(&[-2.0, 0.0, 1.0])
    }

    fn unity_roots(n: usize) -> EmpiricalMeasure {
        EmpiricalMeasure::uniform(
            (0..n)
                .map(|j| Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / n as f64))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn bounded_orbits_have_zero_green() {
        let ge = GreenEvaluator::mandelbrot();
        assert_eq!(ge.eval(c(0.0, 0.0)), 0.0);
        assert_eq!(ge.eval(c(-2.0, 0.0)), 0.0);
        assert_eq!(ge.eval(c(-0.1, 0.1)), 0.0);
        assert!(ge.eval(c(-0.75, 0.1)) > 0.0);
        assert!(ge.eval(c(0.3, 0.0)) > 0.0);
    }

    #[test]
    fn square_map_green_is_log_modulus() {
        let ge = GreenEvaluator::filled_julia(square()).unwrap();
        assert!((ge.eval(c(3.0, 0.0)) - 3f64.ln()).abs() < 1e-12);
        assert!((ge.eval(c(0.0, 1.5)) - 1.5f64.ln()).abs() < 1e-12);
        assert_eq!(ge.eval(c(0.5, 0.5)), 0.0);
    }

    #[test]
    fn chebyshev_green_closed_form() {
        // g(z) = ln |z/2 + sqrt(z^2/4 - 1)| for [-2, 2]
        let ge = GreenEvaluator::filled_julia(chebyshev_map()).unwrap();
        for z in [c(4.0, 0.0), c(0.0, 1.0), c(2.5, -3.0), c(-1.0, 0.01)] {
            let w = z / 2.0;
            let mut root = (w * w - 1.0).sqrt();
            if (w + root).norm() < 1.0 {
                root = -root;
            }
            let want = (w + root).norm().ln();
            assert!((ge.eval(z) - want).abs() < 1e-9, "{z}: {} vs {want}", ge.eval(z));
        }
    }

    #[test]
    fn green_stable_under_deeper_search() {
        let shallow = GreenEvaluator::mandelbrot().with_max_depth(200);
        let deep = GreenEvaluator::mandelbrot().with_max_depth(400);
        for z in [c(0.26, 0.0), c(-0.75, 0.05), c(0.3, 0.5), c(-1.8, 0.01), c(1.0, 1.0)] {
            let (a, b) = (shallow.eval(z), deep.eval(z));
            if a > 0.0 {
                assert!((a - b).abs() <= 1e-9, "{z}");
            }
        }
    }

    #[test]
    fn potential_examples() {
        let delta = EmpiricalMeasure::uniform(vec![c(0.0, 0.0)]).unwrap();
        assert!((potential_of_measure(&delta, c(3.0, 4.0)).unwrap() - 5f64.ln()).abs() < 1e-15);

        let n = 32;
        let mu = unity_roots(n);
        let want = (2f64.powi(n as i32) - 1.0).ln() / n as f64;
        assert!((potential_of_measure(&mu, c(2.0, 0.0)).unwrap() - want).abs() < 1e-13);
        assert!(potential_of_measure(&mu, c(0.0, 0.0)).unwrap().abs() < 1e-14);

        assert_eq!(potential_of_measure(&delta, c(0.0, 0.0)), Err(Error::LogPole { index: 0 }));
    }

    #[test]
    fn potential_is_harmonic_off_support() {
        let mu = unity_roots(24);
        for center in [c(2.0, 0.5), c(0.1, 0.2), c(-1.3, -1.1)] {
            let r = 0.05;
            let mean: f64 = (0..8)
                .map(|j| potential_of_measure(&mu, center + Complex64::from_polar(r, std::f64::consts::TAU * j as f64 / 8.0)).unwrap())
                .sum::<f64>()
                / 8.0;
            assert!((mean - potential_of_measure(&mu, center).unwrap()).abs() < 1e-6);
        }
    }

    #[test]
    fn robin_constants_of_capacity_one_sets() {
        let radii = DEFAULT_ROBIN_RADII;
        let sq = robin_constant(&GreenEvaluator::filled_julia(square()).unwrap(), &radii, 64).unwrap();
        assert!(sq.value.abs() <= 1e-10);
        let cheb = robin_constant(&GreenEvaluator::filled_julia(chebyshev_map()).unwrap(), &radii, 64).unwrap();
        assert!(cheb.value.abs() <= 1e-3);
        let mandel = robin_constant(&GreenEvaluator::mandelbrot(), &radii, 64).unwrap();
        assert!(mandel.value.abs() <= 1e-3);
        assert!(mandel.spread >= 0.0);
    }

    #[test]
    fn robin_rejects_probes_inside() {
        let ge = GreenEvaluator::filled_julia(square()).unwrap();
        assert_eq!(
            robin_constant(&ge, &[0.5], 8),
            Err(Error::ProbeInsideCompact { radius: 0.5 })
        );
    }

    #[test]
    fn brolin_square_lands_on_circle() {
        let mu = brolin_sample(&square(), 2000, 40, 1).unwrap();
        for z in mu.points() {
            assert!((z.norm() - 1.0).abs() <= 1e-6);
        }
    }

    #[test]
    fn brolin_chebyshev_lands_on_segment() {
        let mu = brolin_sample(&chebyshev_map(), 2000, 40, 2).unwrap();
        for z in mu.points() {
            assert!(z.im.abs() <= 1e-6 && z.re.abs() <= 2.0 + 1e-6, "{z}");
        }
    }

    #[test]
    fn brolin_cubic_uses_general_inverse_branches() {
        // z^3 has the unit circle as Julia set
        let mu = brolin_sample(&DensePoly::from_real(&[0.0, 0.0, 0.0, 1.0]), 200, 25, 5).unwrap();
        for z in mu.points() {
            assert!((z.norm() - 1.0).abs() <= 1e-6);
        }
    }

    #[test]
    fn brolin_is_deterministic_and_validates() {
        let a = brolin_sample(&chebyshev_map(), 100, 20, 9).unwrap();
        let b = brolin_sample(&chebyshev_map(), 100, 20, 9).unwrap();
        assert_eq!(a, b);
        assert!(brolin_sample(&chebyshev_map(), 100, 5, 9).is_err());
        assert!(brolin_sample(&DensePoly::from_real(&[0.0, 0.0, 2.0]), 100, 20, 9).is_err());
    }
}
