use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::{Grid, GridFunction, Parity, DEFAULT_TAIL_TOL};
use super::OscError;

/// ψ_0 … ψ_{n_max} at x, where ψ_n(x) = (2π)^{1/4} h_n(√(2π) x) and h_n are
/// the orthonormal Hermite functions. Each ψ_n has unit L² norm and κ-weight n+½.
pub fn hermite_values(n_max: usize, x: f64) -> Vec<f64> {
    let t = (2.0 * PI).sqrt() * x;
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(2f64.powf(0.25) * (-PI * x * x).exp());
    if n_max >= 1 {
        out.push(2f64.sqrt() * t * out[0]);
    }
    for n in 1..n_max {
        let nf = n as f64;
        let next = (2.0 / (nf + 1.0)).sqrt() * t * out[n] - (nf / (nf + 1.0)).sqrt() * out[n - 1];
        out.push(next);
    }
    out
}

pub fn hermite_function(n: usize, x: f64) -> f64 {
    hermite_values(n, x)[n]
}

/// ψ_n sampled on the grid, after a resolution check.
pub fn hermite_basis_function(grid: Grid, n: usize) -> Result<GridFunction, OscError> {
    let f = GridFunction::raw(
        grid,
        if n % 2 == 0 { Parity::Even } else { Parity::Odd },
        grid.xs().map(|x| Complex64::new(hermite_function(n, x), 0.0)).collect(),
    );
    let tail = f.tail_ratio();
    if tail > DEFAULT_TAIL_TOL {
        return Err(OscError::Resolution { degree: n, tail });
    }
    Ok(f)
}

/// Coefficients on the Hermite functions of one parity: rank k stands for
/// ψ_{2k} (even) or ψ_{2k+1} (odd).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "super::io::HermiteFile", into = "super::io::HermiteFile")]
pub struct HermiteCoefficients {
    pub parity: Parity,
    pub coeffs: Vec<Complex64>,
}

impl HermiteCoefficients {
    pub fn degree(parity: Parity, k: usize) -> usize {
        match parity {
            Parity::Even => 2 * k,
            Parity::Odd => 2 * k + 1,
        }
    }

    pub fn unit(parity: Parity, k: usize, len: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); len];
        coeffs[k] = Complex64::new(1.0, 0.0);
        Self { parity, coeffs }
    }
}

pub fn hermite_synthesis(c: &HermiteCoefficients, grid: Grid) -> Result<GridFunction, OscError> {
    if let Some(k) = c.coeffs.len().checked_sub(1) {
        hermite_basis_function(grid, HermiteCoefficients::degree(c.parity, k))?;
    }
    let top = c.coeffs.len().checked_sub(1).map_or(0, |k| HermiteCoefficients::degree(c.parity, k));
    let values = grid
        .xs()
        .map(|x| {
            let psi = hermite_values(top, x);
            c.coeffs.iter().enumerate().map(|(k, a)| a * psi[HermiteCoefficients::degree(c.parity, k)]).sum()
        })
        .collect();
    Ok(GridFunction::raw(grid, c.parity, values))
}

/// Projection onto the first `count` basis functions of φ's parity.
pub fn hermite_analysis(phi: &GridFunction, count: usize) -> Result<HermiteCoefficients, OscError> {
    let grid = phi.grid();
    let parity = phi.parity();
    if count > 0 {
        hermite_basis_function(grid, HermiteCoefficients::degree(parity, count - 1))?;
    }
    let top = count.checked_sub(1).map_or(0, |k| HermiteCoefficients::degree(parity, k));
    let mut coeffs = vec![Complex64::new(0.0, 0.0); count];
    for (x, v) in grid.xs().zip(phi.values()) {
        let psi = hermite_values(top, x);
        for (k, c) in coeffs.iter_mut().enumerate() {
            *c += v * psi[HermiteCoefficients::degree(parity, k)];
        }
    }
    for c in &mut coeffs {
        *c *= grid.step();
    }
    Ok(HermiteCoefficients { parity, coeffs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oscillator::fourier;

    #[test]
    fn orthonormal_on_grid() {
        let grid = Grid::default();
        let fs: Vec<_> = (0..12).map(|n| hermite_basis_function(grid, n).unwrap()).collect();
        for (i, a) in fs.iter().enumerate() {
            for (j, b) in fs.iter().enumerate() {
                let ip = a.inner(b);
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((ip.re - want).abs() < 1e-12 && ip.im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn fourier_eigenvalues() {
        // quadrature oracle for (−i)^n
        let grid = Grid::default();
        for n in 0..16 {
            let psi = hermite_basis_function(grid, n).unwrap();
            let lam = psi.inner(&fourier(&psi).unwrap());
            let want = Complex64::new(0.0, -1.0).powu(n as u32);
            assert!((lam - want).norm() < 1e-12, "{n}: {lam}");
        }
    }

    #[test]
    fn synthesis_of_unit_vector_is_gaussian() {
        let grid = Grid::default();
        let f = hermite_synthesis(&HermiteCoefficients::unit(Parity::Even, 0, 3), grid).unwrap();
        let g = GridFunction::gaussian(grid).scale(Complex64::new(2f64.powf(0.25), 0.0));
        assert!(f.sub(&g).unwrap().sup_norm() < 1e-14);
        let a = hermite_analysis(&GridFunction::gaussian(grid), 4).unwrap();
        assert!((a.coeffs[0].re - 2f64.powf(-0.25)).abs() < 1e-13);
        assert!(a.coeffs[1..].iter().all(|c| c.norm() < 1e-13));
    }

    #[test]
    fn unresolvable_degree_rejected() {
        let grid = Grid::new(3.0, 256).unwrap();
        assert!(matches!(hermite_basis_function(grid, 60), Err(OscError::Resolution { .. })));
    }
}
