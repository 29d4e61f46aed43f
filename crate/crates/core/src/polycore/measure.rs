use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Weighted point cloud of total mass one.
///
/// `scale_count` is the `n` of a root distribution `(1/n) sum delta_{z_j}`, so
/// `scale_count * mu(U)` counts roots in `U` with multiplicity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalMeasure {
    points: Vec<Complex64>,
    weights: Vec<f64>,
    scale_count: usize,
}

impl EmpiricalMeasure {
    /// Uniform measure on `points`.
    pub fn uniform(points: Vec<Complex64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyRoots);
        }
        let n = points.len();
        Ok(Self {
            weights: vec![1.0 / n as f64; n],
            points,
            scale_count: n,
        })
    }

    /// Arbitrary nonnegative weights, renormalized to mass one.
    pub fn weighted(points: Vec<Complex64>, weights: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyRoots);
        }
        if points.len() != weights.len() {
            return Err(Error::InvalidArgument(format!(
                "{} points but {} weights",
                points.len(),
                weights.len()
            )));
        }
        if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::InvalidArgument("weights must be finite and nonnegative".into()));
        }
        let total = pairwise_sum(&weights);
        if total <= 0.0 {
            return Err(Error::InvalidArgument("weights sum to zero".into()));
        }
        let n = points.len();
        Ok(Self {
            points,
            weights: weights.iter().map(|w| w / total).collect(),
            scale_count: n,
        })
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn scale_count(&self) -> usize {
        self.scale_count
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `mu(U)` for a predicate describing `U`.
    pub fn mass_where(&self, mut inside: impl FnMut(Complex64) -> bool) -> f64 {
        let selected: Vec<f64> = self
            .points
            .iter()
            .zip(&self.weights)
            .map(|(z, w)| if inside(*z) { *w } else { 0.0 })
            .collect();
        pairwise_sum(&selected)
    }

    /// `n * mu(U)` rounded to the nearest integer.
    pub fn count_where(&self, inside: impl FnMut(Complex64) -> bool) -> usize {
        (self.mass_where(inside) * self.scale_count as f64).round() as usize
    }

    /// `int f dmu` with a fixed summation tree.
    pub fn integrate(&self, f: impl Fn(Complex64) -> Complex64) -> Complex64 {
        let terms: Vec<Complex64> = self.points.iter().zip(&self.weights).map(|(z, w)| f(*z) * *w).collect();
        pairwise_sum_complex(&terms)
    }
}

/// `mu_q = (1/n) sum delta_{z_j}` for the `n` roots of a degree-`n` polynomial.
pub fn root_distribution(roots: Vec<Complex64>, n: usize) -> Result<EmpiricalMeasure> {
    if roots.is_empty() || n == 0 {
        return Err(Error::EmptyRoots);
    }
    if roots.len() != n {
        return Err(Error::RootCountMismatch {
            expected: n,
            found: roots.len(),
        });
    }
    EmpiricalMeasure::uniform(roots)
}

const PAIRWISE_LEAF: usize = 32;

/// Sum with a fixed binary split, so results do not depend on thread count.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= PAIRWISE_LEAF {
        return xs.iter().sum();
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

pub fn pairwise_sum_complex(xs: &[Complex64]) -> Complex64 {
    if xs.len() <= PAIRWISE_LEAF {
        return xs.iter().sum();
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    pairwise_sum_complex(a) + pairwise_sum_complex(b)
}
