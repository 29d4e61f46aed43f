use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ext::ExtComplex;
use super::jet::Jet;

/// Dense polynomial with complex coefficients, lowest degree first.
///
/// The coefficient vector is always trimmed so the last entry is nonzero; the
/// zero polynomial has no coefficients and no degree.
#[derive(Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "Vec<Complex64>", into = "Vec<Complex64>")]
pub struct DensePoly {
    coeffs: Vec<Complex64>,
}

impl DensePoly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// The identity polynomial `z`.
    pub fn identity() -> Self {
        Self::from_real(&[0.0, 1.0])
    }

    /// `z^n`.
    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
        coeffs[n] = Complex64::new(1.0, 0.0);
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Leading coefficient, `None` for the zero polynomial.
    pub fn leading(&self) -> Option<Complex64> {
        self.coeffs.last().copied()
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Some(Complex64::new(1.0, 0.0))
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Complex64::new(0.0, 0.0);
        let coeffs = (0..n)
            .map(|i| {
                self.coeffs.get(i).copied().unwrap_or(zero) + other.coeffs.get(i).copied().unwrap_or(zero)
            })
            .collect();
        Self::new(coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * factor).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// `self(inner(z))` by Horner's scheme over polynomials.
    pub fn compose(&self, inner: &Self) -> Self {
        let mut acc = Self::zero();
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add(&Self::constant(c));
        }
        acc
    }

    /// Value and derivatives up to `order` at `z`.
    pub fn jet(&self, z: Complex64, order: usize) -> Jet {
        if self.fits_hardware_range(z, order) {
            return self.jet_hardware(z, order);
        }
        let mut acc = Jet::constant(ExtComplex::ZERO, order);
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul_by_variable(z).add_scalar(ExtComplex::new(c));
        }
        acc
    }

    /// True when every Horner intermediate of the order-`order` jet stays
    /// well inside the normal `f64` range, so plain arithmetic is exact enough.
    fn fits_hardware_range(&self, z: Complex64, order: usize) -> bool {
        let n = self.coeffs.len() as f64;
        let log_z = z.norm().log2().abs();
        if !log_z.is_finite() {
            return false;
        }
        let log_c = self
            .coeffs
            .iter()
            .filter(|c| **c != Complex64::new(0.0, 0.0))
            .map(|c| c.norm().log2().abs())
            .fold(0.0, f64::max);
        n * log_z + log_c + order as f64 * n.log2() + n.log2() < 900.0
    }

    fn jet_hardware(&self, z: Complex64, order: usize) -> Jet {
        let zero = Complex64::new(0.0, 0.0);
        let mut acc = vec![zero; order + 1];
        for &c in self.coeffs.iter().rev() {
            // (z * f)^(i) = z f^(i) + i f^(i-1)
            for i in (1..=order).rev() {
                acc[i] = z * acc[i] + acc[i - 1] * i as f64;
            }
            acc[0] = z * acc[0] + c;
        }
        Jet::from_values(acc.into_iter().map(ExtComplex::new).collect())
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

impl From<Vec<Complex64>> for DensePoly {
    fn from(coeffs: Vec<Complex64>) -> Self {
        Self::new(coeffs)
    }
}

impl From<DensePoly> for Vec<Complex64> {
    fn from(p: DensePoly) -> Self {
        p.coeffs
    }
}

impl fmt::Debug for DensePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != Complex64::new(0.0, 0.0))
            .map(|(i, c)| match i {
                0 => format!("({c})"),
                1 => format!("({c})z"),
                _ => format!("({c})z^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// `p(z)` by Horner's scheme in extended-exponent arithmetic.
pub fn horner_eval(p: &DensePoly, z: Complex64) -> ExtComplex {
    let z = ExtComplex::new(z);
    p.coeffs
        .iter()
        .rev()
        .fold(ExtComplex::ZERO, |acc, &c| acc * z + c)
}

/// The `m`-th formal derivative. Returns the zero polynomial when `m` exceeds
/// the degree; callers that build root distributions must check `is_zero`.
pub fn derivative(p: &DensePoly, m: usize) -> DensePoly {
    if m == 0 {
        return p.clone();
    }
    if p.coeffs.len() <= m {
        return DensePoly::zero();
    }
    let coeffs = p.coeffs[m..]
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            // falling factorial (i+m)!/i!
            let factor: f64 = ((i + 1)..=(i + m)).map(|v| v as f64).product();
            c * factor
        })
        .collect();
    DensePoly::new(coeffs)
}
