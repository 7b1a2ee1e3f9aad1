//! Scalar fields used by the generic linear algebra.
//!
//! Exact types (`Rational64`, `BigRational`) decide rank by exact elimination;
//! `f64` and `Complex64` decide it by a relative singular-value cutoff.

use std::ops::{Add, Div, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Relative singular-value threshold used for floating-point rank decisions.
pub const FLOAT_RANK_TOL: f64 = 1e-10;

pub trait Scalar:
    nalgebra::Scalar
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + nalgebra::ClosedAddAssign
    + nalgebra::ClosedSubAssign
    + nalgebra::ClosedMulAssign
    + Send
    + Sync
{
    /// True when rank decisions are exact.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;

    /// Absolute value as a float, used for pivoting and reporting.
    fn magnitude(&self) -> f64;

    fn to_c64(&self) -> Complex64;

    fn rank(m: &DMatrix<Self>) -> usize {
        rref(m).pivots.len()
    }

    /// Basis of the right kernel `{v : m v = 0}`.
    fn nullspace(m: &DMatrix<Self>) -> Vec<DVector<Self>> {
        rref_nullspace(m)
    }
}

impl Scalar for Rational64 {
    const EXACT: bool = true;
    fn from_i64(v: i64) -> Self {
        Rational64::from_integer(v)
    }
    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(*self, 0.0)
    }
    fn rank(m: &DMatrix<Self>) -> usize {
        float_rank(&m.map(|x| Complex64::new(x, 0.0)))
    }
    fn nullspace(m: &DMatrix<Self>) -> Vec<DVector<Self>> {
        let (r, c) = m.shape();
        if c == 0 {
            return Vec::new();
        }
        let mut sq = DMatrix::<f64>::zeros(r.max(c), c);
        sq.view_mut((0, 0), (r, c)).copy_from(m);
        let svd = sq.svd(false, true);
        let v_t = svd.v_t.expect("requested V^T");
        let smax = svd.singular_values.max();
        (0..c)
            .filter(|&i| svd.singular_values[i] <= FLOAT_RANK_TOL * smax || smax == 0.0)
            .map(|i| v_t.row(i).transpose())
            .collect()
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;
    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
    fn rank(m: &DMatrix<Self>) -> usize {
        float_rank(m)
    }
    fn nullspace(m: &DMatrix<Self>) -> Vec<DVector<Self>> {
        let (r, c) = m.shape();
        if c == 0 {
            return Vec::new();
        }
        let mut sq = DMatrix::<Complex64>::zeros(r.max(c), c);
        sq.view_mut((0, 0), (r, c)).copy_from(m);
        let svd = sq.svd(false, true);
        let v_t = svd.v_t.expect("requested V^H");
        let smax = svd.singular_values.max();
        (0..c)
            .filter(|&i| svd.singular_values[i] <= FLOAT_RANK_TOL * smax || smax == 0.0)
            .map(|i| v_t.row(i).transpose().map(|z| z.conj()))
            .collect()
    }
}

fn float_rank(m: &DMatrix<Complex64>) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.singular_values();
    let smax = sv.max();
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > FLOAT_RANK_TOL * smax).count()
}

pub(crate) struct Rref<T> {
    pub matrix: DMatrix<T>,
    pub pivots: Vec<usize>,
}

/// Reduced row echelon form. Pivots are chosen by largest magnitude, which is
/// harmless for exact types and keeps the float fallback sane.
pub(crate) fn rref<T: Scalar>(m: &DMatrix<T>) -> Rref<T> {
    let mut a = m.clone();
    let (rows, cols) = a.shape();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let best = (r..rows)
            .filter(|&i| !a[(i, c)].is_zero())
            .max_by(|&i, &j| a[(i, c)].magnitude().total_cmp(&a[(j, c)].magnitude()));
        let Some(p) = best else { continue };
        a.swap_rows(r, p);
        let inv = T::one() / a[(r, c)].clone();
        for j in c..cols {
            a[(r, j)] = a[(r, j)].clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && !a[(i, c)].is_zero() {
                let f = a[(i, c)].clone();
                for j in c..cols {
                    let v = a[(r, j)].clone() * f.clone();
                    a[(i, j)] = a[(i, j)].clone() - v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    Rref { matrix: a, pivots }
}

fn rref_nullspace<T: Scalar>(m: &DMatrix<T>) -> Vec<DVector<T>> {
    let cols = m.ncols();
    let Rref { matrix, pivots } = rref(m);
    let free = (0..cols).filter(|c| !pivots.contains(c));
    free.map(|f| {
        let mut v = DVector::from_element(cols, T::zero());
        v[f] = T::one();
        for (row, &p) in pivots.iter().enumerate() {
            v[p] = -matrix[(row, f)].clone();
        }
        v
    })
    .collect()
}

/// Gauss-Jordan inverse; `None` when singular (exactly, or relative to the
/// largest entry for floats).
pub fn inverse<T: Scalar>(m: &DMatrix<T>) -> Option<DMatrix<T>> {
    let n = m.nrows();
    if n != m.ncols() {
        return None;
    }
    if T::rank(m) < n {
        return None;
    }
    let mut aug = DMatrix::from_element(n, 2 * n, T::zero());
    aug.view_mut((0, 0), (n, n)).copy_from(m);
    for i in 0..n {
        aug[(i, n + i)] = T::one();
    }
    let Rref { matrix, pivots } = rref(&aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return None;
    }
    Some(matrix.view((0, n), (n, n)).into_owned())
}

pub fn identity<T: Scalar>(n: usize) -> DMatrix<T> {
    DMatrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
}

/// Dimension of the intersection of the column spans of `u` and `w`.
pub fn intersection_dim<T: Scalar>(u: &DMatrix<T>, w: &DMatrix<T>) -> usize {
    let ru = T::rank(u);
    let rw = T::rank(w);
    let mut joined = DMatrix::from_element(u.nrows(), u.ncols() + w.ncols(), T::zero());
    joined.view_mut((0, 0), u.shape()).copy_from(u);
    joined.view_mut((0, u.ncols()), w.shape()).copy_from(w);
    ru + rw - T::rank(&joined)
}

/// Stack basis vectors as columns of a `dim × basis.len()` matrix.
pub fn columns<T: Scalar>(dim: usize, basis: &[DVector<T>]) -> DMatrix<T> {
    DMatrix::from_fn(dim, basis.len(), |i, j| basis[j][i].clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn exact_rank_and_nullspace() {
        let m = DMatrix::from_row_slice(2, 3, &[q(1, 1), q(2, 1), q(3, 1), q(2, 1), q(4, 1), q(6, 1)]);
        assert_eq!(BigRational::rank(&m), 1);
        let ns = BigRational::nullspace(&m);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!((&m * v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn float_nullspace_wide_matrix() {
        let m = DMatrix::from_row_slice(1, 3, &[1.0, 1.0, 0.0]);
        assert_eq!(f64::rank(&m), 1);
        let ns = f64::nullspace(&m);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!((&m * v).norm() < 1e-12);
        }
    }

    #[test]
    fn complex_nullspace_is_right_kernel() {
        let i = Complex64::i();
        let one = Complex64::new(1.0, 0.0);
        let m = DMatrix::from_row_slice(1, 2, &[one, i]);
        let ns = Complex64::nullspace(&m);
        assert_eq!(ns.len(), 1);
        assert!((&m * &ns[0]).norm() < 1e-12);
    }

    #[test]
    fn inverse_roundtrip_exact() {
        let m = DMatrix::from_row_slice(2, 2, &[q(2, 1), q(1, 1), q(1, 1), q(1, 1)]);
        let inv = inverse(&m).unwrap();
        assert_eq!(&m * &inv, identity::<BigRational>(2));
        let sing = DMatrix::from_row_slice(2, 2, &[q(1, 1), q(2, 1), q(2, 1), q(4, 1)]);
        assert!(inverse(&sing).is_none());
    }

    #[test]
    fn intersection_of_planes() {
        let u = DMatrix::from_row_slice(3, 2, &[1.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
        let w = DMatrix::from_row_slice(3, 2, &[0.0, 0.0, 1.0, 0.0, 0.0, 1.0]);
        assert_eq!(intersection_dim(&u, &w), 1);
    }
}
