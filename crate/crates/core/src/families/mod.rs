//! Polynomial families with pointwise jet evaluation.
//!
//! Three families are built in: the critical orbit `q_k(c) = P_c^k(0)` of
//! `P_c(z) = z^2 + c`, iterates `P^k` of a fixed polynomial, and monic
//! orthogonal polynomials of a sampled measure. Jets are evaluated through the
//! defining recurrences; coefficients are only expanded for small degrees.

mod orthogonal;

use std::sync::Arc;

use num_complex::Complex64;

pub use orthogonal::{orthogonal_family, OrthogonalBasis};

use crate::error::{Error, Result};
use crate::polycore::{DensePoly, EmpiricalMeasure, ExtComplex, Jet};

/// Largest degree `expand_family` will produce.
pub const EXPAND_DEGREE_LIMIT: u64 = 4096;

#[derive(Clone, Debug)]
pub enum FamilySpec {
    /// `q_k(c) = P_c^k(0)`, degree `2^(k-1)` in `c`.
    CriticalOrbit,
    /// `P^k`, degree `n^k` for `deg P = n >= 2`.
    IterateFixed(DensePoly),
    /// Monic orthogonal polynomials, degree `k`.
    OrthogonalSampled(Arc<OrthogonalBasis>),
}

impl FamilySpec {
    pub fn iterate(p: DensePoly) -> Result<Self> {
        match p.degree() {
            Some(n) if n >= 2 => Ok(Self::IterateFixed(p)),
            _ => Err(Error::InvalidArgument(format!("iterated polynomial must have degree >= 2, got {p:?}"))),
        }
    }

    pub fn orthogonal(measure: &EmpiricalMeasure, max_deg: usize) -> Result<Self> {
        Ok(Self::OrthogonalSampled(Arc::new(OrthogonalBasis::build(measure, max_deg)?)))
    }

    /// `n_k`.
    pub fn degree(&self, k: usize) -> Result<u64> {
        match self {
            Self::CriticalOrbit => {
                if k == 0 {
                    return Err(Error::InvalidArgument("critical-orbit index starts at k = 1".into()));
                }
                1u64.checked_shl((k - 1) as u32)
                    .filter(|_| k <= 64)
                    .ok_or_else(|| Error::InvalidArgument(format!("degree 2^{} overflows", k - 1)))
            }
            Self::IterateFixed(p) => {
                let n = p.degree().filter(|n| *n >= 2).ok_or_else(|| {
                    Error::InvalidArgument("iterated polynomial must have degree >= 2".into())
                })?;
                (n as u64)
                    .checked_pow(k as u32)
                    .ok_or_else(|| Error::InvalidArgument(format!("degree {n}^{k} overflows")))
            }
            Self::OrthogonalSampled(basis) => {
                if k > basis.max_degree() {
                    return Err(Error::InvalidArgument(format!(
                        "orthogonal basis only built up to degree {}",
                        basis.max_degree()
                    )));
                }
                Ok(k as u64)
            }
        }
    }

    /// `ln |gamma_k|` of the leading coefficient.
    pub fn leading_log_abs(&self, k: usize) -> Result<f64> {
        let n_k = self.degree(k)?;
        match self {
            Self::CriticalOrbit | Self::OrthogonalSampled(_) => Ok(0.0),
            Self::IterateFixed(p) => {
                // gamma_k = gamma^(1 + n + ... + n^(k-1))
                let n = p.degree().unwrap_or(0) as f64;
                let gamma = p.leading().ok_or(Error::ZeroPolynomial)?;
                Ok(gamma.norm().ln() * (n_k as f64 - 1.0) / (n - 1.0))
            }
        }
    }

    /// `(q_k(z), q_k'(z), ..., q_k^(order)(z))`.
    pub fn jet(&self, z: Complex64, k: usize, order: usize) -> Jet {
        match self {
            Self::CriticalOrbit => critical_orbit_jet(z, k, order),
            Self::IterateFixed(p) => iterate_jet(p, z, k, order),
            Self::OrthogonalSampled(basis) => basis.jet(k, z, order),
        }
    }
}

/// Jet in `c` of `q_k(c) = P_c^k(0)`, by differentiating `q_{k+1} = q_k^2 + c`.
pub fn critical_orbit_jet(c: Complex64, k: usize, m: usize) -> Jet {
    assert!(k >= 1, "critical-orbit index starts at k = 1");
    let shift = Jet::variable(c, m);
    let mut q = shift.clone();
    for _ in 1..k {
        q = q.square().try_add(&shift).expect("equal orders");
    }
    q
}

/// Jet of `P(J)` where `J` is a jet of the inner function.
fn compose_onto(p: &DensePoly, inner: &Jet) -> Jet {
    let mut acc = Jet::constant(ExtComplex::ZERO, inner.order());
    for &c in p.coeffs().iter().rev() {
        acc = acc.try_mul(inner).expect("equal orders").add_scalar(ExtComplex::new(c));
    }
    acc
}

/// Jet in `z` of the `k`-th iterate `P^k(z)`; `k = 0` is the identity.
pub fn iterate_jet(p: &DensePoly, z: Complex64, k: usize, m: usize) -> Jet {
    let mut acc = Jet::variable(z, m);
    for _ in 0..k {
        acc = compose_onto(p, &acc);
    }
    acc
}

/// Explicit coefficients of the `k`-th family member, for small degrees.
pub fn expand_family(spec: &FamilySpec, k: usize) -> Result<DensePoly> {
    let degree = spec.degree(k)?;
    if degree > EXPAND_DEGREE_LIMIT {
        return Err(Error::DegreeGuard {
            degree,
            limit: EXPAND_DEGREE_LIMIT,
        });
    }
    let poly = match spec {
        FamilySpec::CriticalOrbit => {
            let c = DensePoly::identity();
            let mut q = c.clone();
            for _ in 1..k {
                q = q.mul(&q).add(&c);
            }
            q
        }
        FamilySpec::IterateFixed(p) => {
            let mut q = DensePoly::identity();
            for _ in 0..k {
                q = p.compose(&q);
            }
            q
        }
        FamilySpec::OrthogonalSampled(basis) => basis.polys()[k].clone(),
    };
    if !poly.is_finite() {
        return Err(Error::CoefficientOverflow { degree });
    }
    Ok(poly)
}
