use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::fourier::fourier;
use super::grid::GridFunction;
use super::ops::{act_unipotent, Unipotent};
use super::OscError;

/// (φ(√n), φ̂(√n)) for 0 ≤ n ≤ n_max.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "super::io::SampleVectorFile", into = "super::io::SampleVectorFile")]
pub struct SampleVector {
    pub n_max: usize,
    pub a: Vec<Complex64>,
    pub b: Vec<Complex64>,
}

impl SampleVector {
    pub fn zeros(n_max: usize) -> Self {
        let z = vec![Complex64::new(0.0, 0.0); n_max + 1];
        Self { n_max, a: z.clone(), b: z }
    }

    pub fn is_consistent(&self) -> bool {
        self.a.len() == self.n_max + 1 && self.b.len() == self.n_max + 1
    }

    /// Σ_{n∈ℤ} a_{n²} − Σ_{n∈ℤ} b_{n²} over the squares ≤ n_max.
    pub fn poisson_residual(&self) -> Complex64 {
        let mut acc = self.a[0] - self.b[0];
        let mut m = 1;
        while m * m <= self.n_max {
            acc += (self.a[m * m] - self.b[m * m]) * 2.0;
            m += 1;
        }
        acc
    }
}

pub fn sample_map(phi: &GridFunction, n_max: usize) -> Result<SampleVector, OscError> {
    let grid = phi.grid();
    let root = (n_max as f64).sqrt();
    if root >= grid.half_width {
        return Err(OscError::NmaxTooLarge { root, half_width: grid.half_width });
    }
    let hat = fourier(phi)?;
    let nodes: Vec<f64> = (0..=n_max).map(|n| (n as f64).sqrt()).collect();
    Ok(SampleVector {
        n_max,
        a: nodes.iter().map(|&x| phi.eval(x)).collect(),
        b: nodes.iter().map(|&x| hat.eval(x)).collect(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PoissonReport {
    /// Σ φ(n) − Σ φ̂(n) over |n| ≤ L−1.
    pub residual: Complex64,
    /// Bound on the omitted terms: max |φ| + |φ̂| beyond L−1 times the omitted count.
    pub truncation_error: f64,
}

fn integer_sum(phi: &GridFunction, reach: i64) -> Complex64 {
    (-reach..=reach).map(|n| phi.eval(n as f64)).sum()
}

pub fn poisson_residual(phi: &GridFunction) -> Result<PoissonReport, OscError> {
    let hat = fourier(phi)?;
    let reach = (phi.grid().half_width - 1.0).floor() as i64;
    let residual = integer_sum(phi, reach) - integer_sum(&hat, reach);
    let cut = reach as f64;
    let grid = phi.grid();
    let tail = |f: &GridFunction| {
        grid.xs().zip(f.values()).filter(|(x, _)| x.abs() > cut).map(|(_, v)| v.norm()).fold(0.0, f64::max)
    };
    let omitted = 2.0 * (grid.half_width - cut).ceil();
    Ok(PoissonReport { residual, truncation_error: (tail(phi) + tail(&hat)) * omitted })
}

/// Q(φ) = Σ_{n∈ℤ} φ(|n|), truncated at |n| ≤ L−1.
pub fn eval_q(phi: &GridFunction) -> Complex64 {
    let reach = (phi.grid().half_width - 1.0).floor() as i64;
    (-reach..=reach).map(|n| phi.eval(n.unsigned_abs() as f64)).sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QInvariance {
    pub residual_e: f64,
    pub residual_f: f64,
}

pub fn q_invariance_report(phi: &GridFunction) -> Result<QInvariance, OscError> {
    let q = eval_q(phi);
    let e = act_unipotent(Unipotent::ETilde, phi)?;
    let f = act_unipotent(Unipotent::FTilde, phi)?;
    Ok(QInvariance { residual_e: (eval_q(&e) - q).norm(), residual_f: (eval_q(&f) - q).norm() })
}

/// Coefficients of q⁰ … q^{prec−1} in Σ_{n∈ℤ} q^{n²}.
pub fn theta_coefficients(prec: usize) -> Vec<u64> {
    let mut c = vec![0u64; prec];
    if prec == 0 {
        return c;
    }
    c[0] = 1;
    let mut n = 1;
    while n * n < prec {
        c[n * n] += 2;
        n += 1;
    }
    c
}

/// Coefficients of θ^d, i.e. r_d(k) = #{v ∈ ℤ^d : |v|² = k}.
pub fn theta_power_coefficients(d: usize, prec: usize) -> Vec<u64> {
    let theta = theta_coefficients(prec);
    let mut acc = vec![0u64; prec];
    if prec > 0 {
        acc[0] = 1;
    }
    for _ in 0..d {
        let mut next = vec![0u64; prec];
        for (i, &a) in acc.iter().enumerate().filter(|(_, a)| **a != 0) {
            for (j, &t) in theta.iter().enumerate().take(prec - i) {
                next[i + j] += a * t;
            }
        }
        acc = next;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oscillator::{Grid, Parity};
    use std::f64::consts::PI;

    #[test]
    fn theta_examples() {
        assert_eq!(theta_coefficients(5), vec![1, 2, 0, 0, 2]);
        assert_eq!(theta_coefficients(10)[9], 2);
        assert_eq!(theta_coefficients(1), vec![1]);
        assert_eq!(theta_power_coefficients(3, 7), vec![1, 6, 12, 8, 6, 24, 24]);
        assert_eq!(theta_power_coefficients(1, 30), theta_coefficients(30));
    }

    #[test]
    fn gaussian_samples() {
        let s = sample_map(&GridFunction::gaussian(Grid::default()), 3).unwrap();
        for n in 0..=3 {
            let want = (-PI * n as f64).exp();
            assert!((s.a[n].re - want).abs() < 1e-12 && (s.b[n].re - want).abs() < 1e-12);
        }
        let z = sample_map(&GridFunction::zero(Grid::default(), Parity::Even), 5).unwrap();
        assert_eq!(z, SampleVector::zeros(5));
        assert!(matches!(sample_map(&GridFunction::gaussian(Grid::default()), 64), Err(OscError::NmaxTooLarge { .. })));
    }

    #[test]
    fn poisson_on_shifted_pair() {
        let grid = Grid::default();
        let c = 0.37;
        let f = GridFunction::from_fn(grid, Parity::Even, |x| {
            Complex64::new((-PI * (x - c).powi(2)).exp() + (-PI * (x + c).powi(2)).exp(), 0.0)
        })
        .unwrap();
        let r = poisson_residual(&f).unwrap();
        assert!(r.residual.norm() < 1e-12);
        assert!(r.truncation_error < 1e-14);
        assert_eq!(eval_q(&GridFunction::zero(grid, Parity::Even)), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn q_fixed_by_unipotents_on_gaussian() {
        let r = q_invariance_report(&GridFunction::gaussian(Grid::default())).unwrap();
        assert!(r.residual_e < 1e-12 && r.residual_f < 1e-12, "{r:?}");
    }
}
