//! Numerical Weil representation on even and odd functions sampled on a
//! symmetric grid.
//!
//! Conventions: X = −iπx², Y = (−i/4π)d²/dx², H = x d/dx + ½, and
//! φ̂(ξ) = ∫φ(x)e^{−2πixξ}dx. Derivatives are spectral on the periodic grid.

mod fourier;
mod grid;
mod hermite;
pub mod io;
mod ops;
mod sampling;
pub mod testfns;

use thiserror::Error;

pub use fourier::{fourier, inverse_fourier};
pub use grid::{Grid, GridFunction, Parity, DEFAULT_TAIL_TOL};
pub use hermite::{
    hermite_analysis, hermite_basis_function, hermite_function, hermite_synthesis, hermite_values,
    HermiteCoefficients,
};
pub use ops::{act_lie, act_lie_word, act_unipotent, act_unipotent_pow, casimir_apply, casimir_apply_form, commutator, CasimirForm, LieOp, Unipotent};
pub use sampling::{
    eval_q, poisson_residual, q_invariance_report, sample_map, theta_coefficients, theta_power_coefficients,
    PoissonReport, QInvariance, SampleVector,
};

#[derive(Debug, Error, PartialEq)]
pub enum OscError {
    #[error("expected {expected} samples, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("grid needs an even positive point count and positive half-width (got N={points}, L={half_width})")]
    BadGrid { points: usize, half_width: f64 },
    #[error("values break {parity:?} parity: mirrored deviation {deviation:.3e}")]
    Parity { parity: Parity, deviation: f64 },
    #[error("tail magnitude {tail:.3e} beyond |x| > L-1 exceeds threshold {threshold:.3e} (relative)")]
    TailDecay { tail: f64, threshold: f64 },
    #[error("spectral content {content:.3e} near Nyquist exceeds aliasing budget {budget:.3e}")]
    Aliasing { content: f64, budget: f64 },
    #[error("sqrt(n_max) = {root:.3} does not fit inside the grid half-width {half_width}")]
    NmaxTooLarge { root: f64, half_width: f64 },
    #[error("Hermite function of degree {degree} is not resolved on the grid (tail {tail:.3e})")]
    Resolution { degree: usize, tail: f64 },
    #[error("grids or parities differ")]
    Mismatch,
}
