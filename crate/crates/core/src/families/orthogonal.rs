//! Monic orthogonal polynomials of a sampled measure.
//!
//! The basis is built by Arnoldi iteration on the sample vectors: the shift
//! `z * p_j` is orthogonalized against all previous `p_i` directly on the
//! support, never through a moment (Hankel/Vandermonde) matrix. The resulting
//! Hessenberg coefficients give the recurrence
//!
//! ```text
//! p_{j+1}(z) = z p_j(z) - sum_{i <= j} h[j][i] p_i(z)
//! ```
//!
//! which is also used for pointwise jet evaluation.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::polycore::{pairwise_sum, pairwise_sum_complex, DensePoly, EmpiricalMeasure, ExtComplex, Jet};

/// Relative norm below which a new basis vector is treated as lost rank.
const RANK_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct OrthogonalBasis {
    recurrence: Vec<Vec<Complex64>>,
    polys: Vec<DensePoly>,
}

fn inner(measure: &EmpiricalMeasure, f: &[Complex64], g: &[Complex64]) -> Complex64 {
    let terms: Vec<Complex64> = measure
        .weights()
        .iter()
        .zip(f.iter().zip(g))
        .map(|(w, (a, b))| a * b.conj() * *w)
        .collect();
    pairwise_sum_complex(&terms)
}

fn norm_sqr(measure: &EmpiricalMeasure, f: &[Complex64]) -> f64 {
    let terms: Vec<f64> = measure.weights().iter().zip(f).map(|(w, a)| a.norm_sqr() * w).collect();
    pairwise_sum(&terms)
}

impl OrthogonalBasis {
    pub fn build(measure: &EmpiricalMeasure, max_deg: usize) -> Result<Self> {
        let points = measure.points();
        let mut vectors: Vec<Vec<Complex64>> = vec![vec![Complex64::new(1.0, 0.0); points.len()]];
        let mut norms = vec![norm_sqr(measure, &vectors[0])];
        let mut recurrence = Vec::with_capacity(max_deg);

        for j in 0..max_deg {
            let mut u: Vec<Complex64> = vectors[j].iter().zip(points).map(|(v, x)| v * x).collect();
            let shifted_norm = norm_sqr(measure, &u).sqrt();
            let mut h = vec![Complex64::new(0.0, 0.0); j + 1];
            // two Gram-Schmidt passes keep orthogonality at machine precision
            for _ in 0..2 {
                for i in 0..=j {
                    let coef = inner(measure, &u, &vectors[i]) / norms[i];
                    h[i] += coef;
                    for (ui, vi) in u.iter_mut().zip(&vectors[i]) {
                        *ui -= coef * vi;
                    }
                }
            }
            let n = norm_sqr(measure, &u);
            if n.is_nan() || n.sqrt() <= RANK_TOL * shifted_norm {
                return Err(Error::RankDeficient { degree: j + 1 });
            }
            norms.push(n);
            vectors.push(u);
            recurrence.push(h);
        }

        let mut polys = vec![DensePoly::constant(Complex64::new(1.0, 0.0))];
        for h in &recurrence {
            let j = polys.len() - 1;
            let mut next = polys[j].mul(&DensePoly::identity());
            for (i, hi) in h.iter().enumerate() {
                next = next.sub(&polys[i].scale(*hi));
            }
            polys.push(next);
        }
        Ok(Self { recurrence, polys })
    }

    pub fn max_degree(&self) -> usize {
        self.recurrence.len()
    }

    pub fn polys(&self) -> &[DensePoly] {
        &self.polys
    }

    pub fn recurrence(&self) -> &[Vec<Complex64>] {
        &self.recurrence
    }

    /// Jet of `p_k` at `z`, evaluated through the recurrence.
    pub fn jet(&self, k: usize, z: Complex64, order: usize) -> Jet {
        let mut jets = vec![Jet::constant(ExtComplex::ONE, order)];
        for h in &self.recurrence[..k] {
            let j = jets.len() - 1;
            let mut next = jets[j].mul_by_variable(z);
            for (i, hi) in h.iter().enumerate() {
                let term = jets[i].scale(ExtComplex::new(-*hi));
                next = next.try_add(&term).expect("equal orders");
            }
            jets.push(next);
        }
        jets.swap_remove(k)
    }
}

/// Monic orthogonal polynomials `p_0, ..., p_max_deg` for
/// `<f, g> = sum w_i f(x_i) conj(g(x_i))`.
pub fn orthogonal_family(measure: &EmpiricalMeasure, max_deg: usize) -> Result<Vec<DensePoly>> {
    Ok(OrthogonalBasis::build(measure, max_deg)?.polys)
}
