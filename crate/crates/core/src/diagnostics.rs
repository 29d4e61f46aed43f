//! Numerical witnesses for equidistribution: K-regularity discrepancy,
//! centering counts, moment comparison against a reference measure, and
//! closed-form oracles for the Chebyshev map `z^2 - 2`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::FamilySpec;
use crate::polycore::{DensePoly, EmpiricalMeasure};
use crate::potential::{GreenEvaluator, RobinEstimate};

pub const MAX_MOMENT_ORDER: usize = 8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyReport {
    pub sup_gap: f64,
    pub probe_circle_radius: f64,
    pub n_probes: usize,
    /// Degree `n_k - m` used to normalize `ln |q_k^(m)|`.
    pub normalization: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CenteringReport {
    pub threshold_tau: f64,
    pub count_above: usize,
    pub fraction_above: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentGap {
    pub p: usize,
    pub q: usize,
    pub gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentGapReport {
    pub gaps: Vec<MomentGap>,
    pub max_gap: f64,
}

impl MomentGapReport {
    pub fn gap(&self, p: usize, q: usize) -> Option<f64> {
        self.gaps.iter().find(|g| g.p == p && g.q == q).map(|g| g.gap)
    }
}

/// `sup_j | ln|q_k^(m)(z_j)| / (n_k - m) - g(z_j) |` over equispaced probes
/// `z_j` on the circle of the given radius.
pub fn kregularity_gap(
    spec: &FamilySpec,
    k: usize,
    m: usize,
    ge: &GreenEvaluator,
    radius: f64,
    n_probes: usize,
) -> Result<DiscrepancyReport> {
    if n_probes == 0 {
        return Err(Error::InvalidArgument("need at least one probe".into()));
    }
    let n_k = spec.degree(k)?;
    let normalization = n_k
        .checked_sub(m as u64)
        .filter(|d| *d >= 1)
        .ok_or_else(|| Error::InvalidArgument(format!("derivative order {m} exceeds degree {n_k}")))?;
    let gaps: Vec<f64> = (0..n_probes)
        .into_par_iter()
        .map(|j| {
            let z = Complex64::from_polar(radius, std::f64::consts::TAU * j as f64 / n_probes as f64);
            let value = spec.jet(z, k, m).get(m);
            let g = ge.eval(z);
            if value.is_zero() || g == 0.0 {
                return Err(Error::RadiusTooSmall { radius, probe: j });
            }
            Ok((value.log_abs() / normalization as f64 - g).abs())
        })
        .collect::<Result<_>>()?;
    Ok(DiscrepancyReport {
        sup_gap: gaps.into_iter().fold(0.0, f64::max),
        probe_circle_radius: radius,
        n_probes,
        normalization,
    })
}

/// Mass of the support where the Green's function exceeds `tau`; the level
/// set `{g > tau}` stands in for the complement of a neighborhood of `K`.
pub fn centering_report(roots: &EmpiricalMeasure, ge: &GreenEvaluator, tau: f64) -> Result<CenteringReport> {
    if tau.is_nan() || tau <= 0.0 {
        return Err(Error::InvalidArgument(format!("tau must be positive, got {tau}")));
    }
    let above: Vec<bool> = roots.points().par_iter().map(|z| ge.eval(*z) > tau).collect();
    let mut flags = above.into_iter();
    let fraction_above = roots.mass_where(|_| flags.next().unwrap_or(false));
    Ok(CenteringReport {
        threshold_tau: tau,
        count_above: (fraction_above * roots.scale_count() as f64).round() as usize,
        fraction_above,
    })
}

/// `|int z^p conj(z)^q dmu - int z^p conj(z)^q domega|` for `p + q <= max_p`.
pub fn moment_gap(mu: &EmpiricalMeasure, omega_ref: &EmpiricalMeasure, max_p: usize) -> Result<MomentGapReport> {
    if max_p > MAX_MOMENT_ORDER {
        return Err(Error::InvalidArgument(format!("moment order {max_p} exceeds {MAX_MOMENT_ORDER}")));
    }
    let moment = |m: &EmpiricalMeasure, p: usize, q: usize| {
        m.integrate(|z| z.powu(p as u32) * z.conj().powu(q as u32))
    };
    let mut gaps = Vec::new();
    for total in 0..=max_p {
        for p in 0..=total {
            let q = total - p;
            let gap = if total == 0 {
                0.0
            } else {
                (moment(mu, p, q) - moment(omega_ref, p, q)).norm()
            };
            gaps.push(MomentGap { p, q, gap });
        }
    }
    let max_gap = gaps.iter().map(|g| g.gap).fold(0.0, f64::max);
    Ok(MomentGapReport { gaps, max_gap })
}

/// Closed-form preimages for iterates of `z^2 - 2`, via `P^k(2 cos w) = 2 cos(2^k w)`.
///
/// `m = 0`: roots of `P^k - a` for real `a`. `m = 1`, `a = 0`: critical points
/// of `P^k`, `2 cos(pi j / 2^k)` for `j = 1 .. 2^k - 1`.
pub fn chebyshev_oracle_roots(k: usize, m: usize, a: Complex64) -> Result<Vec<Complex64>> {
    if a.im != 0.0 {
        return Err(Error::Unsupported(format!("closed form needs a real shift, got {a}")));
    }
    if k >= 32 {
        return Err(Error::InvalidArgument(format!("k = {k} is too large for an explicit root list")));
    }
    let n = 1usize << k;
    match m {
        0 => {
            let theta = (a / 2.0).acos();
            Ok((0..n)
                .map(|j| (theta + std::f64::consts::TAU * j as f64) / n as f64)
                .map(|w| w.cos() * 2.0)
                .map(|z| if a.re.abs() <= 2.0 { Complex64::new(z.re, 0.0) } else { z })
                .collect())
        }
        1 if a == Complex64::new(0.0, 0.0) => Ok((1..n)
            .map(|j| Complex64::new(2.0 * (std::f64::consts::PI * j as f64 / n as f64).cos(), 0.0))
            .collect()),
        _ => Err(Error::Unsupported(format!("no closed form for m = {m}, a = {a}"))),
    }
}

/// Arcsine law on `[-2, 2]`, the equilibrium measure of the segment.
pub fn arcsine_cdf(x: f64) -> f64 {
    (0.5 + (x / 2.0).clamp(-1.0, 1.0).asin() / std::f64::consts::PI).clamp(0.0, 1.0)
}

/// Imaginary parts allowed in `arcsine_ks_distance`.
pub const REAL_TOL: f64 = 1e-6;

/// Kolmogorov distance between the empirical CDF of real roots and the
/// arcsine law on `[-2, 2]`.
pub fn arcsine_ks_distance(roots: &[Complex64]) -> Result<f64> {
    if roots.is_empty() {
        return Err(Error::EmptyRoots);
    }
    if let Some(z) = roots.iter().find(|z| z.im.abs() > REAL_TOL) {
        return Err(Error::InvalidArgument(format!("root {z} is not real")));
    }
    let mut xs: Vec<f64> = roots.iter().map(|z| z.re).collect();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    Ok(xs
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let f = arcsine_cdf(*x);
            f64::max(f - i as f64 / n, (i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max))
}

/// `| ln|gamma| / n + I |` for an explicit polynomial.
pub fn leading_coeff_gap_of(p: &DensePoly, robin: &RobinEstimate) -> Result<f64> {
    let gamma = p.leading().ok_or(Error::ZeroPolynomial)?;
    let n = p.degree().unwrap_or(0).max(1) as f64;
    Ok((gamma.norm().ln() / n + robin.value).abs())
}

/// `| ln|gamma_k| / n_k + I |`; should tend to zero along a regular family.
pub fn leading_coeff_gap(spec: &FamilySpec, k: usize, robin: &RobinEstimate) -> Result<f64> {
    let n_k = spec.degree(k)? as f64;
    Ok((spec.leading_log_abs(k)? / n_k + robin.value).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::root_distribution;
    use crate::potential::robin_constant;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn circle_measure(n: usize) -> EmpiricalMeasure {
        EmpiricalMeasure::uniform(
            (0..n)
                .map(|j| Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / n as f64))
                .collect(),
        )
        .unwrap()
    }

    fn square_family() -> FamilySpec {
        FamilySpec::iterate(DensePoly::from_real(&[0.0, 0.0, 1.0])).unwrap()
    }

    #[test]
    fn square_family_is_exactly_regular() {
        let ge = GreenEvaluator::filled_julia(DensePoly::from_real(&[0.0, 0.0, 1.0])).unwrap();
        for k in 1..=12 {
            let report = kregularity_gap(&square_family(), k, 0, &ge, 2.0, 32).unwrap();
            assert!(report.sup_gap <= 1e-10, "k={k}: {}", report.sup_gap);
            assert_eq!(report.normalization, 1 << k);
        }
    }

    #[test]
    fn probes_inside_the_set_are_rejected() {
        let ge = GreenEvaluator::filled_julia(DensePoly::from_real(&[0.0, 0.0, 1.0])).unwrap();
        assert!(matches!(
            kregularity_gap(&square_family(), 3, 0, &ge, 0.5, 8),
            Err(Error::RadiusTooSmall { .. })
        ));
    }

    #[test]
    fn centering_on_the_circle() {
        let ge = GreenEvaluator::filled_julia(DensePoly::from_real(&[0.0, 0.0, 1.0])).unwrap();
        let report = centering_report(&circle_measure(64), &ge, 0.1).unwrap();
        assert_eq!(report.count_above, 0);
        assert_eq!(report.fraction_above, 0.0);
        assert!(centering_report(&circle_measure(4), &ge, 0.0).is_err());
    }

    #[test]
    fn centering_counts_multiplicity() {
        let ge = GreenEvaluator::filled_julia(DensePoly::from_real(&[0.0, 0.0, 1.0])).unwrap();
        let mu = root_distribution(vec![c(3.0, 0.0), c(3.0, 0.0), c(0.0, 0.0), c(0.5, 0.0)], 4).unwrap();
        let report = centering_report(&mu, &ge, 0.2).unwrap();
        assert_eq!(report.count_above, 2);
        assert_eq!(report.fraction_above, 0.5);
        assert_eq!(report.count_above, (report.fraction_above * 4.0).round() as usize);
    }

    #[test]
    fn moment_gap_examples() {
        let circle = circle_measure(4096);
        let same = moment_gap(&circle, &circle, 8).unwrap();
        assert!(same.gaps.iter().all(|g| g.gap == 0.0));
        assert_eq!(same.gaps.len(), 45);

        let roots = circle_measure(256);
        assert!(moment_gap(&roots, &circle, 8).unwrap().max_gap <= 1e-12);

        let point = root_distribution(vec![c(0.0, 0.0); 16], 16).unwrap();
        let report = moment_gap(&point, &circle, 8).unwrap();
        assert!((report.gap(1, 1).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(report.gap(0, 0), Some(0.0));
        assert!(moment_gap(&point, &circle, 9).is_err());
    }

    #[test]
    fn chebyshev_oracle_examples() {
        let s = 2f64.sqrt();
        let roots = chebyshev_oracle_roots(1, 0, c(0.0, 0.0)).unwrap();
        assert_eq!(roots.len(), 2);
        assert!((roots[0].re - s).abs() < 1e-15 && (roots[1].re + s).abs() < 1e-15);

        let crit = chebyshev_oracle_roots(2, 1, c(0.0, 0.0)).unwrap();
        let want = [s, 0.0, -s];
        for (z, w) in crit.iter().zip(want) {
            assert!((z.re - w).abs() < 1e-15 && z.im == 0.0);
        }

        let eight = chebyshev_oracle_roots(3, 0, c(1.0, 0.0)).unwrap();
        assert_eq!(eight.len(), 8);
        for (j, z) in eight.iter().enumerate() {
            let want = 2.0 * ((std::f64::consts::FRAC_PI_3 + std::f64::consts::TAU * j as f64) / 8.0).cos();
            assert!((z.re - want).abs() < 1e-15);
        }

        assert!(chebyshev_oracle_roots(3, 2, c(0.0, 0.0)).is_err());
        assert!(chebyshev_oracle_roots(3, 0, c(0.0, 1.0)).is_err());
        assert!(chebyshev_oracle_roots(3, 1, c(0.5, 0.0)).is_err());
    }

    #[test]
    fn chebyshev_oracle_outside_segment_still_solves() {
        // a = 3 > 2: preimages leave the real line but satisfy P^k(z) = a
        let p = DensePoly::from_real(&[-2.0, 0.0, 1.0]);
        for z in chebyshev_oracle_roots(3, 0, c(3.0, 0.0)).unwrap() {
            let value = crate::families::iterate_jet(&p, z, 3, 0).value().to_complex();
            assert!((value - c(3.0, 0.0)).norm() < 1e-9, "{z}");
        }
    }

    #[test]
    fn arcsine_ks_examples() {
        let k = 8;
        let n = 1usize << k;
        let nodes: Vec<_> = (0..n)
            .map(|j| c(2.0 * ((2 * j + 1) as f64 * std::f64::consts::PI / (2 * n) as f64).cos(), 0.0))
            .collect();
        assert!(arcsine_ks_distance(&nodes).unwrap() <= 2f64.powi(-8));
        assert!((arcsine_ks_distance(&[c(0.0, 0.0)]).unwrap() - 0.5).abs() < 1e-15);
        let exact = chebyshev_oracle_roots(8, 0, c(0.5, 0.0)).unwrap();
        assert!(arcsine_ks_distance(&exact).unwrap() <= 0.01);
        assert!(arcsine_ks_distance(&[c(0.0, 1e-3)]).is_err());
    }

    #[test]
    fn leading_coefficient_gaps() {
        let zero_robin = RobinEstimate { value: 0.0, radii: vec![], spread: 0.0 };
        assert_eq!(leading_coeff_gap(&FamilySpec::CriticalOrbit, 7, &zero_robin).unwrap(), 0.0);
        let scaled = DensePoly::new({
            let mut v = vec![c(0.0, 0.0); 6];
            v[5] = c(3.0, 0.0);
            v
        });
        let gap = leading_coeff_gap_of(&scaled, &zero_robin).unwrap();
        assert!((gap - 3f64.ln() / 5.0).abs() < 1e-15);
        assert_eq!(leading_coeff_gap_of(&DensePoly::zero(), &zero_robin), Err(Error::ZeroPolynomial));

        let robin = robin_constant(&GreenEvaluator::mandelbrot(), &crate::potential::DEFAULT_ROBIN_RADII, 64).unwrap();
        assert!(leading_coeff_gap(&FamilySpec::CriticalOrbit, 10, &robin).unwrap() <= 1e-3);
    }
}
