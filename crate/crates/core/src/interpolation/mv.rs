//! Numerical H⁰/H¹ of the sampling dual on a balanced finite section.
//!
//! With R sample rows per block and K = 2R − h₀ basis columns, h1 is the
//! kernel dimension of the stacked matrix and h0 is the dimension of the
//! intersection of the row spaces of the two blocks (principal angles).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use super::{build_design, build_design_with_derivatives, odd_theta_relation, singular_values, InterpError, PoissonFunctional};
use crate::oscillator::{theta_power_coefficients, Grid, Parity};

/// Relative singular value below which a direction counts as kernel.
pub const MV_KERNEL_TOL: f64 = 1e-8;
/// Principal cosines above 1 − this count toward the intersection.
pub const MV_COS_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sector {
    Even,
    /// Odd functions with φ′(0), φ̂′(0) appended.
    Odd,
    /// Radial functions on ℝ^d, d odd.
    Radial(u32),
}

impl Sector {
    /// Expected h0: the number of independent θ-type relations. Equal to the
    /// dimension of weight d/2 modular forms for the theta group, used here as
    /// a known constant: 1 + ⌊(d−1)/4⌋ for odd d.
    pub fn expected_h0(self) -> usize {
        match self {
            Sector::Even | Sector::Odd => 1,
            Sector::Radial(d) => 1 + ((d as usize).saturating_sub(1) / 2) / 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MvReport {
    pub sector: Sector,
    pub h0: usize,
    pub h1: usize,
    pub rows_per_block: usize,
    pub cols: usize,
    /// σ_min/σ_max of the stacked matrix.
    pub sigma_ratio: f64,
    /// Largest principal cosines between the two row spaces, descending.
    pub principal_cosines: Vec<f64>,
    /// Projection of the known θ relation onto the numerical intersection.
    pub alignment: f64,
}

/// `k_max` is the column count; pass 2R − h₀ for a balanced section.
pub fn mv_dimension_report(grid: Grid, n_max: usize, k_max: usize, sector: Sector) -> Result<MvReport, InterpError> {
    let (a, b, relation) = match sector {
        Sector::Even => {
            let d = build_design(n_max, k_max, grid, Parity::Even)?;
            let w = PoissonFunctional::new(n_max).vector(&d);
            let rows = d.block_rows();
            (d.block(0), d.block(1), w.rows(0, rows).into_owned())
        }
        Sector::Odd => {
            let d = build_design_with_derivatives(n_max, k_max, grid, Parity::Odd)?;
            let w = odd_theta_relation(&d);
            let rows = d.block_rows();
            // a_0 = b_0 = 0 identically for odd functions
            (d.block(0).remove_row(0), d.block(1).remove_row(0), w.rows(1, rows - 1).into_owned())
        }
        Sector::Radial(dim) => {
            let m = radial_design(n_max, k_max, dim);
            let r = theta_power_coefficients(dim as usize, n_max + 1);
            let w = DVector::from_iterator(n_max + 1, r.iter().map(|&c| Complex64::new(c as f64, 0.0)));
            (m.rows(0, n_max + 1).into_owned(), m.rows(n_max + 1, n_max + 1).into_owned(), w)
        }
    };
    let rows_per_block = a.nrows();
    let mut stacked = DMatrix::zeros(2 * rows_per_block, k_max);
    stacked.view_mut((0, 0), a.shape()).copy_from(&a);
    stacked.view_mut((rows_per_block, 0), b.shape()).copy_from(&b);
    let sv = singular_values(&stacked);
    let smax = sv[0];
    let deficit = k_max.saturating_sub(stacked.nrows());
    let h1 = deficit + sv.iter().filter(|&&s| s <= MV_KERNEL_TOL * smax).count();
    let sigma_ratio = sv.last().copied().unwrap_or(0.0) / smax;

    let qa = row_space(&a);
    let qb = row_space(&b);
    let cross = qa.adjoint() * &qb;
    let svd = cross.svd(true, false);
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let cosines: Vec<f64> = order.iter().map(|&i| svd.singular_values[i].min(1.0)).collect();
    let h0 = cosines.iter().filter(|&&c| c > 1.0 - MV_COS_TOL).count();
    let u = svd.u.expect("requested U");
    let inter: Vec<DVector<Complex64>> = order.iter().take(h0).map(|&i| &qa * u.column(i)).collect();
    // The relation as a functional on coefficients: w_A = Aᵀℓ_A.
    let w_a = a.transpose() * relation;
    let alignment = super::alignment(&inter, &w_a);
    Ok(MvReport {
        sector,
        h0,
        h1,
        rows_per_block,
        cols: k_max,
        sigma_ratio,
        principal_cosines: cosines.into_iter().take(4).collect(),
        alignment,
    })
}

/// Orthonormal basis (columns) of the span of the rows of `m`, as vectors in
/// coefficient space (transpose, no conjugation).
fn row_space(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let mt = m.transpose();
    let svd = mt.svd(true, false);
    let u = svd.u.expect("requested U");
    let smax = svd.singular_values.max();
    let keep: Vec<usize> = (0..svd.singular_values.len()).filter(|&i| svd.singular_values[i] > MV_KERNEL_TOL * smax).collect();
    DMatrix::from_fn(u.nrows(), keep.len(), |i, j| u[(i, keep[j])])
}

/// Radial design on ℝ^d: columns are the normalized Laguerre functions
/// F_j(r) = c_j L_j^{(α)}(2πr²) e^{−πr²}, α = d/2 − 1, with Fourier
/// eigenvalue (−1)^j, sampled at r = √n.
pub fn radial_design(n_max: usize, k_max: usize, d: u32) -> DMatrix<Complex64> {
    let alpha = d as f64 / 2.0 - 1.0;
    let mut m = DMatrix::zeros(2 * (n_max + 1), k_max);
    for n in 0..=n_max {
        let vals = laguerre_functions(k_max, alpha, n as f64);
        for (j, v) in vals.into_iter().enumerate() {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            m[(n, j)] = Complex64::new(v, 0.0);
            m[(n_max + 1 + n, j)] = Complex64::new(sign * v, 0.0);
        }
    }
    m
}

/// sqrt(j!/Γ(j+α+1)) L_j^{(α)}(2πr²) e^{−πr²} for j < count, at r² = r2.
fn laguerre_functions(count: usize, alpha: f64, r2: f64) -> Vec<f64> {
    let u = 2.0 * std::f64::consts::PI * r2;
    let w = (-u / 2.0).exp();
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return out;
    }
    // N_0 = L_0 / sqrt(Γ(α+1))
    let g = gamma(alpha + 1.0);
    out.push(w / g.sqrt());
    if count == 1 {
        return out;
    }
    // N_1 = (1 + α − u) sqrt(1/Γ(α+2))
    out.push(w * (1.0 + alpha - u) / gamma(alpha + 2.0).sqrt());
    for j in 1..count - 1 {
        let jf = j as f64;
        let r1 = ((jf + 1.0) / (jf + alpha + 1.0)).sqrt();
        let r2 = ((jf + 1.0) * jf / ((jf + alpha + 1.0) * (jf + alpha))).sqrt();
        let next = r1 / (jf + 1.0) * (2.0 * jf + 1.0 + alpha - u) * out[j] - r2 * (jf + alpha) / (jf + 1.0) * out[j - 1];
        out.push(next);
    }
    out
}

/// Γ for the half-integer and integer arguments used above.
fn gamma(x: f64) -> f64 {
    if (x - x.round()).abs() < 1e-12 {
        (1..x.round() as i64).map(|k| k as f64).product()
    } else {
        // x = k + 1/2
        let mut g = std::f64::consts::PI.sqrt();
        let mut t = 0.5;
        while t < x - 0.25 {
            g *= t;
            t += 1.0;
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oscillator::hermite_function;

    #[test]
    fn gamma_values() {
        assert!((gamma(0.5) - std::f64::consts::PI.sqrt()).abs() < 1e-15);
        assert!((gamma(2.5) - 1.329_340_388_179_137).abs() < 1e-14);
        assert_eq!(gamma(4.0), 6.0);
    }

    #[test]
    fn radial_one_dimension_matches_even_hermite() {
        // d = 1: F_j ∝ ψ_{2j} up to sign and the normalization of the measure
        let m = radial_design(6, 4, 1);
        for j in 0..4 {
            let ratio = m[(1, j)].re / hermite_function(2 * j, 1.0);
            for n in 0..=6 {
                let want = hermite_function(2 * j, (n as f64).sqrt()) * ratio;
                assert!((m[(n, j)].re - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn expected_h0_table() {
        assert_eq!(Sector::Radial(1).expected_h0(), 1);
        assert_eq!(Sector::Radial(3).expected_h0(), 1);
        assert_eq!(Sector::Radial(5).expected_h0(), 2);
    }
}
