//! Independent oracles exposed on the command line.

use std::fmt::Write as _;

use equidist_core::diagnostics::chebyshev_oracle_roots;
use equidist_core::{brolin_sample, companion_oracle, Complex64, DensePoly};

use crate::error::CliError;

/// Parses `re` or `re:im` tokens into coefficients, lowest degree first.
pub fn parse_coeffs(tokens: &[String]) -> Result<DensePoly, CliError> {
    let parse = |t: &str| -> Result<f64, CliError> {
        t.trim()
            .parse()
            .map_err(|_| CliError::Config(format!("coefficient {t:?} is not a number")))
    };
    let coeffs = tokens
        .iter()
        .flat_map(|t| t.split(','))
        .filter(|t| !t.trim().is_empty())
        .map(|t| match t.split_once(':') {
            Some((re, im)) => Ok(Complex64::new(parse(re)?, parse(im)?)),
            None => Ok(Complex64::new(parse(t)?, 0.0)),
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let p = DensePoly::new(coeffs);
    if p.is_zero() {
        return Err(CliError::Config("coefficients describe the zero polynomial".into()));
    }
    Ok(p)
}

pub fn points_csv(points: &[Complex64]) -> String {
    let mut out = String::from("re,im\n");
    for z in points {
        let _ = writeln!(out, "{:.16e},{:.16e}", z.re, z.im);
    }
    out
}

pub fn chebyshev(k: usize, m: usize, a: f64) -> Result<Vec<Complex64>, CliError> {
    Ok(chebyshev_oracle_roots(k, m, Complex64::new(a, 0.0))?)
}

pub fn companion(p: &DensePoly) -> Result<Vec<Complex64>, CliError> {
    Ok(companion_oracle(p)?)
}

pub fn brolin(p: &DensePoly, n: usize, depth: usize, seed: u64) -> Result<Vec<Complex64>, CliError> {
    Ok(brolin_sample(p, n, depth, seed)?.points().to_vec())
}
