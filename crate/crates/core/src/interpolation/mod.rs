//! Finite sections of the sampling map φ ↦ (φ(√n), φ̂(√n)) on the Hermite basis.

mod mv;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::oscillator::{
    fourier, hermite_basis_function, sample_map, theta_power_coefficients, Grid, HermiteCoefficients, OscError, Parity,
    SampleVector,
};

pub use mv::{mv_dimension_report, radial_design, MvReport, Sector};

#[derive(Debug, Error, PartialEq)]
pub enum InterpError {
    #[error(transparent)]
    Osc(#[from] OscError),
    #[error("sample vector has inconsistent lengths")]
    BadSamples,
    #[error("sample vector has n_max {got}, design expects {expected}")]
    SampleSize { expected: usize, got: usize },
    #[error("least-squares system is ill-conditioned: sigma_min/sigma_max = {ratio:.3e} below cutoff {cutoff:.3e}")]
    IllConditioned { ratio: f64, cutoff: f64 },
    #[error("k_max must be at least 1")]
    EmptyBasis,
    #[error("matrix has no more rows than columns")]
    NotTall,
}

/// Rows: block A (a_n = φ(√n), n ≤ n_max, then φ′(0) when `derivatives`),
/// followed by block B with the same layout for φ̂. Columns: basis ranks.
#[derive(Clone, Debug, PartialEq)]
pub struct DesignMatrix {
    pub parity: Parity,
    pub n_max: usize,
    pub k_max: usize,
    pub derivatives: bool,
    pub matrix: DMatrix<Complex64>,
}

impl DesignMatrix {
    pub fn block_rows(&self) -> usize {
        self.n_max + 1 + usize::from(self.derivatives)
    }

    /// Row index of a_n (block 0) or b_n (block 1).
    pub fn row(&self, block: usize, n: usize) -> usize {
        block * self.block_rows() + n
    }

    pub fn block(&self, block: usize) -> DMatrix<Complex64> {
        self.matrix.rows(block * self.block_rows(), self.block_rows()).into_owned()
    }

    /// max |B − λ_k A| where λ_k = (−i)^degree: Hermite functions are
    /// Fourier eigenvectors so the blocks differ by a column scaling.
    pub fn eigen_consistency(&self) -> f64 {
        let a = self.block(0);
        let b = self.block(1);
        let mut worst: f64 = 0.0;
        for k in 0..self.k_max {
            let lam = Complex64::new(0.0, -1.0).powu(HermiteCoefficients::degree(self.parity, k) as u32);
            for r in 0..a.nrows() {
                worst = worst.max((b[(r, k)] - lam * a[(r, k)]).norm());
            }
        }
        worst
    }
}

pub fn build_design(n_max: usize, k_max: usize, grid: Grid, parity: Parity) -> Result<DesignMatrix, InterpError> {
    assemble(n_max, k_max, grid, parity, false)
}

/// Design matrix with the derivative functionals φ′(0), φ̂′(0) appended
/// (meaningful for the odd sector).
pub fn build_design_with_derivatives(n_max: usize, k_max: usize, grid: Grid, parity: Parity) -> Result<DesignMatrix, InterpError> {
    assemble(n_max, k_max, grid, parity, true)
}

fn assemble(n_max: usize, k_max: usize, grid: Grid, parity: Parity, derivatives: bool) -> Result<DesignMatrix, InterpError> {
    if k_max == 0 {
        return Err(InterpError::EmptyBasis);
    }
    let block = n_max + 1 + usize::from(derivatives);
    let mut matrix = DMatrix::zeros(2 * block, k_max);
    let origin = grid.points / 2;
    for k in 0..k_max {
        let psi = hermite_basis_function(grid, HermiteCoefficients::degree(parity, k))?;
        let s = sample_map(&psi, n_max)?;
        for n in 0..=n_max {
            matrix[(n, k)] = s.a[n];
            matrix[(block + n, k)] = s.b[n];
        }
        if derivatives {
            matrix[(n_max + 1, k)] = psi.derivative(1).values()[origin];
            matrix[(block + n_max + 1, k)] = fourier(&psi)?.derivative(1).values()[origin];
        }
    }
    Ok(DesignMatrix { parity, n_max, k_max, derivatives, matrix })
}

/// Σ_{n∈ℤ} x_{n²} − Σ_{n∈ℤ} y_{n²} as a vector ℓ with ℓᵀD = 0.
#[derive(Clone, Debug, PartialEq)]
pub struct PoissonFunctional {
    pub n_max: usize,
    pub x_weights: Vec<f64>,
    pub y_weights: Vec<f64>,
}

impl PoissonFunctional {
    pub fn new(n_max: usize) -> Self {
        let theta = theta_power_coefficients(1, n_max + 1);
        let x_weights: Vec<f64> = theta.iter().map(|&c| c as f64).collect();
        let y_weights = x_weights.iter().map(|w| -w).collect();
        Self { n_max, x_weights, y_weights }
    }

    pub fn vector(&self, design: &DesignMatrix) -> DVector<Complex64> {
        let mut v = DVector::zeros(design.matrix.nrows());
        for n in 0..=self.n_max.min(design.n_max) {
            v[design.row(0, n)] = Complex64::new(self.x_weights[n], 0.0);
            v[design.row(1, n)] = Complex64::new(self.y_weights[n], 0.0);
        }
        v
    }

    pub fn apply(&self, s: &SampleVector) -> Complex64 {
        (0..=self.n_max.min(s.n_max)).map(|n| s.a[n] * self.x_weights[n] + s.b[n] * self.y_weights[n]).sum()
    }
}

/// The odd-sector relation obtained from Poisson summation on ℤ³ applied to
/// φ(|v|)/|v|:  φ′(0) + Σ r₃(n)φ(√n)/√n = i(φ̂′(0) + Σ r₃(n)φ̂(√n)/√n).
pub fn odd_theta_relation(design: &DesignMatrix) -> DVector<Complex64> {
    let r3 = theta_power_coefficients(3, design.n_max + 1);
    let mut v = DVector::zeros(design.matrix.nrows());
    let mi = Complex64::new(0.0, -1.0);
    for n in 1..=design.n_max {
        let w = Complex64::new(r3[n] as f64 / (n as f64).sqrt(), 0.0);
        v[design.row(0, n)] = w;
        v[design.row(1, n)] = mi * w;
    }
    if design.derivatives {
        v[design.row(0, design.n_max + 1)] = Complex64::new(1.0, 0.0);
        v[design.row(1, design.n_max + 1)] = mi;
    }
    v
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KernelReport {
    pub kernel_dim: usize,
    /// Ascending, at most five.
    pub smallest_singular_values: Vec<f64>,
    /// Descending.
    pub singular_values: Vec<f64>,
}

pub fn singular_values(m: &DMatrix<Complex64>) -> Vec<f64> {
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Count singular values below `threshold × σ_max`, plus any columns in
/// excess of the rows.
pub fn numerical_kernel(d: &DesignMatrix, threshold: f64) -> KernelReport {
    let sv = singular_values(&d.matrix);
    let smax = sv.first().copied().unwrap_or(0.0);
    let deficit = d.matrix.ncols().saturating_sub(d.matrix.nrows());
    let kernel_dim = deficit + sv.iter().filter(|&&s| s <= threshold * smax).count();
    let mut smallest: Vec<f64> = sv.iter().rev().take(5).copied().collect();
    smallest.sort_by(|a, b| a.total_cmp(b));
    KernelReport { kernel_dim, smallest_singular_values: smallest, singular_values: sv }
}

/// Which rows a left-kernel computation may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowSupport {
    All,
    /// Rows n = m² in both blocks whose largest entry is at least 1e−6 of the
    /// matrix maximum: a row that is numerically zero only contributes a
    /// spurious relation.
    ResolvedSquares,
}

/// Relative size below which a row counts as numerically zero.
pub const ROW_RESOLUTION: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct LeftKernel {
    /// Orthonormal vectors u (full row coordinates) with uᵀD ≈ 0.
    pub basis: Vec<DVector<Complex64>>,
    pub rows_used: Vec<usize>,
    pub singular_values: Vec<f64>,
}

impl LeftKernel {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Norm of the projection of v/‖v‖ onto the span; |cos| in dimension one.
    pub fn alignment(&self, v: &DVector<Complex64>) -> f64 {
        alignment(&self.basis, v)
    }
}

pub fn alignment(basis: &[DVector<Complex64>], v: &DVector<Complex64>) -> f64 {
    let n = v.norm();
    if n == 0.0 {
        return 0.0;
    }
    basis.iter().map(|b| b.dotc(v).norm_sqr()).sum::<f64>().sqrt() / n
}

pub fn left_kernel(d: &DesignMatrix, threshold: f64, support: RowSupport) -> Result<LeftKernel, InterpError> {
    let rows: Vec<usize> = match support {
        RowSupport::All => (0..d.matrix.nrows()).collect(),
        RowSupport::ResolvedSquares => {
            let max = d.matrix.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let mut rows = Vec::new();
            for block in 0..2 {
                let mut m = 0;
                while m * m <= d.n_max {
                    let r = d.row(block, m * m);
                    let rmax = d.matrix.row(r).iter().map(|z| z.norm()).fold(0.0, f64::max);
                    if rmax >= ROW_RESOLUTION * max {
                        rows.push(r);
                    }
                    m += 1;
                }
            }
            rows
        }
    };
    let sub = DMatrix::from_fn(rows.len(), d.matrix.ncols(), |i, j| d.matrix[(rows[i], j)]);
    let local = transpose_kernel(&sub, threshold);
    let basis = local
        .vectors
        .into_iter()
        .map(|u| {
            let mut full = DVector::zeros(d.matrix.nrows());
            for (i, &r) in rows.iter().enumerate() {
                full[r] = u[i];
            }
            full
        })
        .collect();
    Ok(LeftKernel { basis, rows_used: rows, singular_values: local.singular_values })
}

struct TransposeKernel {
    vectors: Vec<DVector<Complex64>>,
    singular_values: Vec<f64>,
}

/// Orthonormal basis of {u : uᵀM = 0}, i.e. the right kernel of Mᵀ.
fn transpose_kernel(m: &DMatrix<Complex64>, threshold: f64) -> TransposeKernel {
    let mt = m.transpose();
    let (r, c) = mt.shape();
    let mut sq = DMatrix::zeros(r.max(c), c);
    sq.view_mut((0, 0), (r, c)).copy_from(&mt);
    let svd = sq.svd(false, true);
    let v_h = svd.v_t.expect("requested V^H");
    let sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let vectors = (0..c)
        .filter(|&i| sv[i] <= threshold * smax)
        .map(|i| v_h.row(i).transpose().map(|z| z.conj()))
        .collect();
    let mut sorted: Vec<f64> = sv.iter().take(r.min(c)).copied().collect();
    sorted.sort_by(|a, b| b.total_cmp(a));
    TransposeKernel { vectors, singular_values: sorted }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolveOptions {
    /// Singular values below cutoff × σ_max are an error unless ridge > 0.
    pub cutoff: f64,
    pub ridge: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { cutoff: 1e-12, ridge: 0.0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Reconstruction {
    pub coeffs: HermiteCoefficients,
    /// ‖Dc − s‖₂ / ‖s‖₂ (zero for s = 0).
    pub relative_residual: f64,
    /// Poisson residual of the input samples.
    pub poisson_residual: Complex64,
    pub condition: f64,
}

pub fn reconstruct(
    s: &SampleVector,
    k_max: usize,
    grid: Grid,
    parity: Parity,
    opts: SolveOptions,
) -> Result<Reconstruction, InterpError> {
    if !s.is_consistent() {
        return Err(InterpError::BadSamples);
    }
    let d = build_design(s.n_max, k_max, grid, parity)?;
    reconstruct_with(&d, s, opts)
}

pub fn reconstruct_with(d: &DesignMatrix, s: &SampleVector, opts: SolveOptions) -> Result<Reconstruction, InterpError> {
    if !s.is_consistent() {
        return Err(InterpError::BadSamples);
    }
    if s.n_max != d.n_max || d.derivatives {
        return Err(InterpError::SampleSize { expected: d.n_max, got: s.n_max });
    }
    let rhs = DVector::from_iterator(2 * (s.n_max + 1), s.a.iter().chain(&s.b).copied());
    let svd = d.matrix.clone().svd(true, true);
    let u = svd.u.as_ref().expect("requested U");
    let v_h = svd.v_t.as_ref().expect("requested V^H");
    let sv = &svd.singular_values;
    let smax = sv.max();
    let smin = sv.min();
    let ratio = if smax > 0.0 { smin / smax } else { 0.0 };
    if ratio < opts.cutoff && opts.ridge == 0.0 {
        return Err(InterpError::IllConditioned { ratio, cutoff: opts.cutoff });
    }
    let uh_s = u.adjoint() * &rhs;
    let scaled = DVector::from_fn(sv.len(), |i, _| {
        let s = sv[i];
        let f = if opts.ridge > 0.0 { s / (s * s + opts.ridge * opts.ridge) } else { 1.0 / s };
        uh_s[i] * f
    });
    let c = v_h.adjoint() * scaled;
    let rnorm = rhs.norm();
    let relative_residual = if rnorm > 0.0 { (&d.matrix * &c - &rhs).norm() / rnorm } else { 0.0 };
    Ok(Reconstruction {
        coeffs: HermiteCoefficients { parity: d.parity, coeffs: c.iter().copied().collect() },
        relative_residual,
        poisson_residual: s.poisson_residual(),
        condition: if smin > 0.0 { smax / smin } else { f64::INFINITY },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn gaussian_column_and_rank_one() {
        let d = build_design(10, 1, Grid::default(), Parity::Even).unwrap();
        let c0 = 2f64.powf(0.25);
        for n in 0..=10 {
            let want = c0 * (-PI * n as f64).exp();
            assert!((d.matrix[(n, 0)].re - want).abs() < 1e-12);
            assert!((d.matrix[(11 + n, 0)].re - want).abs() < 1e-12);
        }
        assert_eq!(numerical_kernel(&d, 1e-10).kernel_dim, 0);
    }

    #[test]
    fn odd_rows_at_zero_vanish() {
        let d = build_design(9, 5, Grid::default(), Parity::Odd).unwrap();
        assert!(d.matrix.row(0).iter().all(|z| z.norm() < 1e-14));
        assert!(d.eigen_consistency() < 1e-12);
    }

    #[test]
    fn duplicated_column_gives_kernel() {
        let mut d = build_design(20, 4, Grid::default(), Parity::Even).unwrap();
        let col = d.matrix.column(1).into_owned();
        d.matrix = d.matrix.clone().insert_column(4, Complex64::new(0.0, 0.0));
        d.matrix.set_column(4, &col);
        d.k_max = 5;
        assert_eq!(numerical_kernel(&d, 1e-10).kernel_dim, 1);
    }

    #[test]
    fn poisson_annihilates_columns() {
        let d = build_design(30, 12, Grid::default(), Parity::Even).unwrap();
        let l = PoissonFunctional::new(30).vector(&d);
        let r = l.transpose() * &d.matrix;
        assert!(r.iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn odd_relation_needs_derivative_rows() {
        let grid = Grid::default();
        let d = build_design_with_derivatives(40, 12, grid, Parity::Odd).unwrap();
        let l = odd_theta_relation(&d);
        let r = (l.transpose() * &d.matrix).norm();
        assert!(r < 1e-8, "{r}");
        let plain = build_design(40, 12, grid, Parity::Odd).unwrap();
        let l = odd_theta_relation(&plain);
        assert!((l.transpose() * &plain.matrix).norm() > 1e-2);
    }

    #[test]
    fn zero_samples_give_zero_coefficients() {
        let r = reconstruct(&SampleVector::zeros(20), 8, Grid::default(), Parity::Even, SolveOptions::default()).unwrap();
        assert!(r.coeffs.coeffs.iter().all(|c| c.norm() == 0.0));
    }
}
