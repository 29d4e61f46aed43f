//! Arithmetic substrate: extended-exponent scalars, dense polynomials,
//! derivative jets and empirical measures.

pub mod ext;
pub mod jet;
pub mod measure;
pub mod poly;

pub use ext::ExtComplex;
pub use jet::{jet_add, jet_mul, jet_scale, Jet};
pub use measure::{pairwise_sum, pairwise_sum_complex, root_distribution, EmpiricalMeasure};
pub use poly::{derivative, horner_eval, DensePoly};
