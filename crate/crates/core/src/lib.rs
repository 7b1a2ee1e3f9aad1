pub mod gk;
pub mod scalar;
pub mod oscillator;
pub mod interpolation;
pub mod cohomology;
pub mod cusp;
pub mod heisenberg;
pub mod suite;

pub use scalar::Scalar;

/// Exact rational representation, the default for cohomology.
pub type ExactRep = cohomology::GroupRep<num_rational::BigRational>;
pub type FloatRep = cohomology::GroupRep<f64>;
pub type ComplexRep = cohomology::GroupRep<num_complex::Complex64>;
/// Grid samples are complex throughout the analytic modules.
pub type Sample = num_complex::Complex64;
