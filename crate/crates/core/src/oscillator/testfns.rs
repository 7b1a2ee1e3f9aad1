//! Seeded random test functions shared by the suites.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use super::grid::{Grid, GridFunction, Parity};
use super::hermite::HermiteCoefficients;
use super::OscError;

/// Σ c_i (e^{−πa_i(x−μ_i)²} ± e^{−πa_i(x+μ_i)²}) with a_i ∈ [0.5, 1.5],
/// |μ_i| ≤ 1.5 and complex c_i. The ranges keep f̃φ decaying inside L = 8.
pub fn gaussian_mixture<R: Rng>(rng: &mut R, grid: Grid, parity: Parity, terms: usize) -> Result<GridFunction, OscError> {
    let comps: Vec<(f64, f64, Complex64)> = (0..terms)
        .map(|_| {
            let a = rng.gen_range(0.5..1.5);
            let mu = rng.gen_range(-1.5..1.5);
            let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            (a, mu, c)
        })
        .collect();
    let s = parity.sign();
    GridFunction::from_fn(grid, parity, |x| {
        comps
            .iter()
            .map(|&(a, mu, c)| c * ((-PI * a * (x - mu).powi(2)).exp() + s * (-PI * a * (x + mu).powi(2)).exp()))
            .sum()
    })
}

/// A combination of `terms` distinct basis functions among the first `count`,
/// with complex coefficients of modulus in [0.5, 1.5].
pub fn random_hermite_combination<R: Rng>(rng: &mut R, parity: Parity, count: usize, terms: usize) -> HermiteCoefficients {
    let mut coeffs = vec![Complex64::new(0.0, 0.0); count];
    let mut chosen = 0;
    while chosen < terms.min(count) {
        let k = rng.gen_range(0..count);
        if coeffs[k].norm() == 0.0 {
            let r = rng.gen_range(0.5..1.5);
            let t = rng.gen_range(0.0..2.0 * PI);
            coeffs[k] = Complex64::from_polar(r, t);
            chosen += 1;
        }
    }
    HermiteCoefficients { parity, coeffs }
}
