//! Truncated derivative jets: `[f(z), f'(z), ..., f^(m)(z)]`.
//!
//! Products follow the Leibniz rule, so squaring a jet and adding a constant
//! differentiates a recurrence like `q_{k+1} = q_k^2 + c` one step at a time.

use num_complex::Complex64;

use super::ext::ExtComplex;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    values: Vec<ExtComplex>,
}

/// Row `j` of Pascal's triangle.
fn binomial_row(j: usize) -> Vec<f64> {
    let mut row = vec![1.0; j + 1];
    for i in 1..j {
        row[i] = row[i - 1] * (j + 1 - i) as f64 / i as f64;
    }
    row
}

impl Jet {
    pub fn from_values(values: Vec<ExtComplex>) -> Self {
        assert!(!values.is_empty(), "a jet holds at least the value");
        Self { values }
    }

    pub fn constant(c: ExtComplex, order: usize) -> Self {
        let mut values = vec![ExtComplex::ZERO; order + 1];
        values[0] = c;
        Self { values }
    }

    /// Jet of the independent variable at `z`: `(z, 1, 0, ...)`.
    pub fn variable(z: Complex64, order: usize) -> Self {
        let mut values = vec![ExtComplex::ZERO; order + 1];
        values[0] = ExtComplex::new(z);
        if order >= 1 {
            values[1] = ExtComplex::ONE;
        }
        Self { values }
    }

    pub fn order(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[ExtComplex] {
        &self.values
    }

    /// The `j`-th derivative.
    pub fn get(&self, j: usize) -> ExtComplex {
        self.values[j]
    }

    pub fn value(&self) -> ExtComplex {
        self.values[0]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(ExtComplex::is_zero)
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(self.leibniz(other))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(Self {
            values: self.values.iter().zip(&other.values).map(|(a, b)| *a + *b).collect(),
        })
    }

    pub fn scale(&self, factor: ExtComplex) -> Self {
        Self {
            values: self.values.iter().map(|v| *v * factor).collect(),
        }
    }

    /// Adds a constant to the value component only.
    pub fn add_scalar(mut self, c: ExtComplex) -> Self {
        self.values[0] = self.values[0] + c;
        self
    }

    pub fn square(&self) -> Self {
        self.leibniz(self)
    }

    /// Product with the variable jet `(z, 1, 0, ...)`:
    /// `(f * id)^(j) = z f^(j) + j f^(j-1)`.
    pub fn mul_by_variable(&self, z: Complex64) -> Self {
        let z = ExtComplex::new(z);
        let values = (0..self.values.len())
            .map(|j| {
                let head = self.values[j] * z;
                if j == 0 {
                    head
                } else {
                    head + self.values[j - 1].scale(j as f64)
                }
            })
            .collect();
        Self { values }
    }

    fn leibniz(&self, other: &Self) -> Self {
        let values = (0..self.values.len())
            .map(|j| {
                binomial_row(j)
                    .into_iter()
                    .enumerate()
                    .fold(ExtComplex::ZERO, |acc, (i, b)| {
                        acc + (self.values[i] * other.values[j - i]).scale(b)
                    })
            })
            .collect();
        Self { values }
    }
}

pub fn jet_mul(a: &Jet, b: &Jet) -> Result<Jet> {
    a.try_mul(b)
}

pub fn jet_add(a: &Jet, b: &Jet) -> Result<Jet> {
    a.try_add(b)
}

pub fn jet_scale(a: &Jet, factor: ExtComplex) -> Jet {
    a.scale(factor)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(re: f64) -> ExtComplex {
        ExtComplex::from_real(re)
    }

    fn values(j: &Jet) -> Vec<Complex64> {
        j.values().iter().map(ExtComplex::to_complex).collect()
    }

    #[test]
    fn square_of_identity() {
        let x = Jet::variable(Complex64::new(3.0, 0.0), 1);
        let sq = jet_mul(&x, &x).unwrap();
        assert_eq!(values(&sq), vec![Complex64::new(9.0, 0.0), Complex64::new(6.0, 0.0)]);
    }

    #[test]
    fn zero_jet_annihilates() {
        let x = Jet::from_values(vec![e(1.5), e(-2.0), e(0.25)]);
        let zero = Jet::constant(ExtComplex::ZERO, 2);
        assert!(jet_mul(&x, &zero).unwrap().is_zero());
    }

    #[test]
    fn order_two_square_matches_symbolic_expansion() {
        // (a, b, c)^2 = (a^2, 2ab, 2ac + 2b^2)
        let (a, b, c) = (1.25, -0.5, 3.0);
        let sq = Jet::from_values(vec![e(a), e(b), e(c)]).square();
        let expect = [a * a, 2.0 * a * b, 2.0 * a * c + 2.0 * b * b];
        for (got, want) in values(&sq).iter().zip(expect) {
            assert!((got.re - want).abs() < 1e-14 && got.im == 0.0);
        }
    }

    #[test]
    fn order_mismatch_is_reported() {
        let a = Jet::constant(ExtComplex::ONE, 1);
        let b = Jet::constant(ExtComplex::ONE, 2);
        assert_eq!(jet_mul(&a, &b), Err(Error::OrderMismatch { left: 1, right: 2 }));
        assert!(jet_add(&a, &b).is_err());
    }

    #[test]
    fn leibniz_against_polynomial_product() {
        // f = z^3 - 2z, g = z^2 + 1 at z = 0.7; (fg) = z^5 - z^3 - 2z
        let z = 0.7;
        let f = Jet::from_values(vec![e(z * z * z - 2.0 * z), e(3.0 * z * z - 2.0), e(6.0 * z), e(6.0), e(0.0), e(0.0)]);
        let g = Jet::from_values(vec![e(z * z + 1.0), e(2.0 * z), e(2.0), e(0.0), e(0.0), e(0.0)]);
        let fg = jet_mul(&f, &g).unwrap();
        let expect = [
            z.powi(5) - z.powi(3) - 2.0 * z,
            5.0 * z.powi(4) - 3.0 * z * z - 2.0,
            20.0 * z.powi(3) - 6.0 * z,
            60.0 * z * z - 6.0,
            120.0 * z,
            120.0,
        ];
        for (got, want) in values(&fg).iter().zip(expect) {
            assert!((got.re - want).abs() < 1e-12 * want.abs().max(1.0), "{got} vs {want}");
        }
    }

    #[test]
    fn scale_and_add() {
        let a = Jet::from_values(vec![e(1.0), e(2.0)]);
        let b = jet_scale(&a, e(-2.0));
        let s = jet_add(&a, &b).unwrap();
        assert_eq!(values(&s), vec![Complex64::new(-1.0, 0.0), Complex64::new(-2.0, 0.0)]);
    }
}
