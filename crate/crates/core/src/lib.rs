//! Root and value distributions of derivatives of polynomial families.
//!
//! The crate computes the zeros of `q_k^(m) - a` for three families (the
//! critical orbit `q_k(c) = P_c^k(0)`, iterates of a fixed polynomial, and
//! orthogonal polynomials of a sampled measure), together with the reference
//! objects needed to judge where those zeros accumulate: Green's functions,
//! logarithmic potentials, Robin constants and balanced-measure samples.

pub mod diagnostics;
mod error;
pub mod families;
pub mod polycore;
pub mod potential;
pub mod roots;

pub use error::{Error, Result};
pub use families::{critical_orbit_jet, expand_family, iterate_jet, orthogonal_family, FamilySpec, OrthogonalBasis};
pub use polycore::{derivative, horner_eval, root_distribution, DensePoly, EmpiricalMeasure, ExtComplex, Jet};
pub use potential::{brolin_sample, green_eval, potential_of_measure, robin_constant, GreenEvaluator, GreenTarget, RobinEstimate};
pub use roots::{aberth_solve, companion_oracle, solve_shifted, NewtonEval, RootSolveReport, SolverConfig};

pub use num_complex::Complex64;
