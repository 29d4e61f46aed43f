//! Complex scalars with a detached power-of-two exponent.
//!
//! Values are stored as `mantissa * 2^exponent`, where the larger of the two
//! mantissa components has magnitude in `[1, 2)`. The exponent is an `i64`, so
//! magnitudes such as `|q_k(c)|` for parameters well outside the Mandelbrot set
//! stay representable long after `f64` overflows.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

/// Mantissa alignments beyond this many binary digits cannot change the sum.
const ALIGN_LIMIT: i64 = 60;

#[derive(Clone, Copy, PartialEq)]
pub struct ExtComplex {
    mantissa: Complex64,
    exponent: i64,
}

/// `2^n` for `n` in the normal exponent range.
fn pow2(n: i64) -> f64 {
    debug_assert!((-1022..=1023).contains(&n));
    f64::from_bits(((n + 1023) as u64) << 52)
}

/// `x * 2^n` for any `n`, saturating to zero or infinity.
pub(crate) fn ldexp(mut x: f64, mut n: i64) -> f64 {
    while n > 1000 {
        x *= pow2(1000);
        n -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while n < -1000 {
        x *= pow2(-1000);
        n += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * pow2(n)
}

/// Binary exponent `e` with `2^e <= s < 2^(e+1)` for finite positive `s`.
fn binary_exponent(s: f64) -> i64 {
    let raw = ((s.to_bits() >> 52) & 0x7ff) as i64;
    if raw == 0 {
        binary_exponent(s * pow2(64)) - 64
    } else {
        raw - 1023
    }
}

impl ExtComplex {
    pub const ZERO: Self = Self {
        mantissa: Complex64::new(0.0, 0.0),
        exponent: 0,
    };

    pub const ONE: Self = Self {
        mantissa: Complex64::new(1.0, 0.0),
        exponent: 0,
    };

    pub fn new(z: Complex64) -> Self {
        Self::from_parts(z, 0)
    }

    pub fn from_real(x: f64) -> Self {
        Self::new(Complex64::new(x, 0.0))
    }

    /// Builds `mantissa * 2^exponent` and renormalizes.
    pub fn from_parts(mantissa: Complex64, exponent: i64) -> Self {
        let s = mantissa.re.abs().max(mantissa.im.abs());
        if s == 0.0 {
            return Self::ZERO;
        }
        debug_assert!(s.is_finite(), "non-finite mantissa {mantissa}");
        if !s.is_finite() {
            return Self { mantissa, exponent };
        }
        let shift = binary_exponent(s);
        let mantissa = Complex64::new(ldexp(mantissa.re, -shift), ldexp(mantissa.im, -shift));
        Self {
            mantissa,
            exponent: exponent + shift,
        }
    }

    pub fn mantissa(&self) -> Complex64 {
        self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.re == 0.0 && self.mantissa.im == 0.0
    }

    /// Hardware value; overflows to infinity and underflows to zero.
    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            ldexp(self.mantissa.re, self.exponent),
            ldexp(self.mantissa.im, self.exponent),
        )
    }

    /// `ln |z|`, `-inf` for zero.
    pub fn log_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        self.mantissa.norm().ln() + self.exponent as f64 * std::f64::consts::LN_2
    }

    pub fn conj(&self) -> Self {
        Self {
            mantissa: self.mantissa.conj(),
            exponent: self.exponent,
        }
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::from_parts(self.mantissa * factor, self.exponent)
    }

    pub fn square(&self) -> Self {
        *self * *self
    }
}

impl Default for ExtComplex {
    fn default() -> Self {
        Self::ZERO
    }
}

impl From<Complex64> for ExtComplex {
    fn from(z: Complex64) -> Self {
        Self::new(z)
    }
}

impl From<f64> for ExtComplex {
    fn from(x: f64) -> Self {
        Self::from_real(x)
    }
}

impl fmt::Debug for ExtComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} * 2^{})", self.mantissa, self.exponent)
    }
}

impl Add for ExtComplex {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let (big, small) = if self.exponent >= rhs.exponent {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let gap = big.exponent - small.exponent;
        if gap > ALIGN_LIMIT {
            return big;
        }
        let aligned = Complex64::new(
            ldexp(small.mantissa.re, -gap),
            ldexp(small.mantissa.im, -gap),
        );
        Self::from_parts(big.mantissa + aligned, big.exponent)
    }
}

impl Neg for ExtComplex {
    type Output = Self;

    fn neg(self) -> Self {
        Self {
            mantissa: -self.mantissa,
            exponent: self.exponent,
        }
    }
}

impl Sub for ExtComplex {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for ExtComplex {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::ZERO;
        }
        Self::from_parts(self.mantissa * rhs.mantissa, self.exponent + rhs.exponent)
    }
}

impl Div for ExtComplex {
    type Output = Self;

    /// Division by zero yields a non-finite mantissa, like hardware floats.
    fn div(self, rhs: Self) -> Self {
        if self.is_zero() {
            return Self::ZERO;
        }
        if rhs.is_zero() {
            return Self {
                mantissa: self.mantissa / rhs.mantissa,
                exponent: 0,
            };
        }
        Self::from_parts(self.mantissa / rhs.mantissa, self.exponent - rhs.exponent)
    }
}

impl Add<Complex64> for ExtComplex {
    type Output = Self;

    fn add(self, rhs: Complex64) -> Self {
        self + Self::new(rhs)
    }
}

impl Sub<Complex64> for ExtComplex {
    type Output = Self;

    fn sub(self, rhs: Complex64) -> Self {
        self - Self::new(rhs)
    }
}

impl Mul<Complex64> for ExtComplex {
    type Output = Self;

    fn mul(self, rhs: Complex64) -> Self {
        self * Self::new(rhs)
    }
}
