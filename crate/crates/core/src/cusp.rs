//! The equation (2y² d²/dy² − λ) g = f near a cusp, for f vanishing on
//! y ≤ Y₀, solved by variation of parameters.
//!
//! Profiles live on a geometric grid y_j = Y₀ e^{j·du}. In u = log y the
//! operator becomes 2(D² − D) − λ with D = d/du, and the variation integrals
//! b_i(y) = ∫ f t^{−p_i−1} dt become ∫ f e^{−p_i u} du.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CuspError {
    #[error("grid needs 0 < Y0 < Ymax and at least {min} points")]
    BadGrid { min: usize },
    #[error("profile has {got} values, grid has {want}")]
    Length { got: usize, want: usize },
    #[error("input does not vanish at Y0 (|f(Y0)| = {0:e})")]
    Support(f64),
    #[error("quadrature produced a non-finite value at y = {0}")]
    Quadrature(f64),
    #[error("output exceeds the variation-of-parameters bound (exponent {0})")]
    Growth(f64),
}

/// Stencil width for integration and differentiation.
const STENCIL: usize = 8;
const MIN_POINTS: usize = 2 * STENCIL + 1;
/// Relative size of |f(Y0)| still treated as zero.
const SUPPORT_TOL: f64 = 1e-12;
/// Log-log slope of the weighted derivative sup over the last quarter of the
/// grid above which growth is reported as unbounded.
pub const GROWTH_SLOPE_LIMIT: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IndicialRoots {
    pub p1: Complex64,
    pub p2: Complex64,
    pub double: bool,
}

/// Roots of 2p(1−p) + λ = 0, i.e. p = (1 ± √(1+2λ))/2, with p1 taking the
/// principal square root.
pub fn indicial_roots(lambda: Complex64) -> IndicialRoots {
    let disc = Complex64::new(1.0, 0.0) + lambda * 2.0;
    let r = disc.sqrt();
    let double = disc.norm() < 1e-12;
    let p1 = (Complex64::new(1.0, 0.0) + r) * 0.5;
    let p2 = if double { p1 } else { (Complex64::new(1.0, 0.0) - r) * 0.5 };
    IndicialRoots { p1, p2, double }
}

impl IndicialRoots {
    /// |2p(1−p) + λ| for both roots.
    pub fn defect(&self, lambda: Complex64) -> f64 {
        let q = |p: Complex64| (p * (Complex64::new(1.0, 0.0) - p) * 2.0 + lambda).norm();
        q(self.p1).max(q(self.p2))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CuspProfile {
    #[serde(rename = "Y0")]
    pub y0: f64,
    #[serde(rename = "Ymax")]
    pub ymax: f64,
    #[serde(rename = "N")]
    pub n: usize,
    re: Vec<f64>,
    im: Vec<f64>,
    #[serde(rename = "R")]
    pub growth_exponent: f64,
}

impl CuspProfile {
    pub fn new(y0: f64, ymax: f64, values: Vec<Complex64>, growth_exponent: f64) -> Result<Self, CuspError> {
        let n = values.len();
        if !(y0 > 0.0 && ymax > y0 && n >= MIN_POINTS) {
            return Err(CuspError::BadGrid { min: MIN_POINTS });
        }
        Ok(Self {
            y0,
            ymax,
            n,
            re: values.iter().map(|v| v.re).collect(),
            im: values.iter().map(|v| v.im).collect(),
            growth_exponent,
        })
    }

    pub fn from_fn(y0: f64, ymax: f64, n: usize, growth_exponent: f64, f: impl Fn(f64) -> Complex64) -> Result<Self, CuspError> {
        if n < MIN_POINTS {
            return Err(CuspError::BadGrid { min: MIN_POINTS });
        }
        let du = (ymax / y0).ln() / (n - 1) as f64;
        Self::new(y0, ymax, (0..n).map(|j| f(y0 * (j as f64 * du).exp())).collect(), growth_exponent)
    }

    pub fn zero(y0: f64, ymax: f64, n: usize) -> Result<Self, CuspError> {
        Self::new(y0, ymax, vec![Complex64::new(0.0, 0.0); n], 0.0)
    }

    /// Checks lengths after deserialization.
    pub fn validate(&self) -> Result<(), CuspError> {
        if self.re.len() != self.n || self.im.len() != self.n {
            return Err(CuspError::Length { got: self.re.len().min(self.im.len()), want: self.n });
        }
        if !(self.y0 > 0.0 && self.ymax > self.y0 && self.n >= MIN_POINTS) {
            return Err(CuspError::BadGrid { min: MIN_POINTS });
        }
        Ok(())
    }

    pub fn du(&self) -> f64 {
        (self.ymax / self.y0).ln() / (self.n - 1) as f64
    }

    pub fn y(&self, j: usize) -> f64 {
        self.y0 * (j as f64 * self.du()).exp()
    }

    pub fn ys(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.y(j)).collect()
    }

    pub fn value(&self, j: usize) -> Complex64 {
        Complex64::new(self.re[j], self.im[j])
    }

    pub fn values(&self) -> Vec<Complex64> {
        (0..self.n).map(|j| self.value(j)).collect()
    }

    pub fn sup_norm(&self) -> f64 {
        (0..self.n).map(|j| self.value(j).norm()).fold(0.0, f64::max)
    }

    pub fn same_grid(&self, other: &CuspProfile) -> bool {
        self.y0 == other.y0 && self.ymax == other.ymax && self.n == other.n
    }

    pub fn linear_combination(&self, a: Complex64, other: &CuspProfile, b: Complex64) -> CuspProfile {
        assert!(self.same_grid(other), "profiles on different grids");
        let v = (0..self.n).map(|j| a * self.value(j) + b * other.value(j)).collect();
        CuspProfile::new(self.y0, self.ymax, v, self.growth_exponent.max(other.growth_exponent)).expect("same grid")
    }
}

/// Finite-difference weights for derivatives 0..=order at `x0` from `nodes`
/// (Fornberg's recursion). Returns `w[k][i]` for derivative k at node i.
pub(crate) fn fd_weights(nodes: &[f64], x0: f64, order: usize) -> Vec<Vec<f64>> {
    let n = nodes.len();
    let mut c = vec![vec![0.0; n]; order + 1];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - x0;
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] *= c4 / c3;
        }
        c1 = c2;
    }
    c
}

/// ∫_a^b of each Lagrange basis polynomial on `nodes`.
fn lagrange_integrals(nodes: &[f64], a: f64, b: f64) -> Vec<f64> {
    let n = nodes.len();
    (0..n)
        .map(|i| {
            // coefficients of ∏_{k≠i} (x − x_k)/(x_i − x_k), lowest degree first
            let mut poly = vec![1.0];
            for &xk in nodes.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, x)| x) {
                let d = nodes[i] - xk;
                let mut next = vec![0.0; poly.len() + 1];
                for (p, &c) in poly.iter().enumerate() {
                    next[p + 1] += c / d;
                    next[p] -= c * xk / d;
                }
                poly = next;
            }
            poly.iter().enumerate().map(|(p, &c)| c * (b.powi(p as i32 + 1) - a.powi(p as i32 + 1)) / (p as f64 + 1.0)).sum()
        })
        .collect()
}

fn stencil_start(j: usize, n: usize, width: usize) -> usize {
    j.saturating_sub(width / 2 - 1).min(n - width)
}

/// Running integral ∫_{u_0}^{u_j} of uniformly sampled values with step du.
fn cumulative_integral(v: &[Complex64], du: f64) -> Vec<Complex64> {
    cumulative_with(v, du, |wk, vk| vk * wk)
}

/// Same stencils with |weights| and |values|: dominates |cumulative_integral|
/// node by node, which the a priori bound in `solve_cusp` relies on.
fn cumulative_abs_bound(v: &[Complex64], du: f64) -> Vec<f64> {
    cumulative_with(v, du, |wk, vk| Complex64::new(wk.abs() * vk.norm(), 0.0)).into_iter().map(|z| z.re).collect()
}

fn cumulative_with(v: &[Complex64], du: f64, term: impl Fn(f64, Complex64) -> Complex64) -> Vec<Complex64> {
    let n = v.len();
    let mut cache: Vec<Option<Vec<f64>>> = vec![None; STENCIL];
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n - 1 {
        let s = stencil_start(j, n, STENCIL);
        let off = j - s;
        let w = cache[off].get_or_insert_with(|| {
            let nodes: Vec<f64> = (0..STENCIL).map(|k| k as f64).collect();
            lagrange_integrals(&nodes, off as f64, off as f64 + 1.0)
        });
        let step: Complex64 = w.iter().enumerate().map(|(k, &wk)| term(wk, v[s + k])).sum();
        out[j + 1] = out[j] + step * du;
    }
    out
}

/// Derivative of the given order in u at every node, 9-point stencils
/// (shifted near the ends).
fn derivative_u(v: &[Complex64], du: f64, order: usize) -> Vec<Complex64> {
    let width = STENCIL + 1;
    let n = v.len();
    let mut cache: Vec<Option<Vec<f64>>> = vec![None; width];
    (0..n)
        .map(|j| {
            let s = j.saturating_sub(width / 2).min(n - width);
            let off = j - s;
            let w = cache[off].get_or_insert_with(|| {
                let nodes: Vec<f64> = (0..width).map(|k| k as f64).collect();
                fd_weights(&nodes, off as f64, order).swap_remove(order)
            });
            w.iter().enumerate().map(|(k, &wk)| v[s + k] * wk).sum::<Complex64>() / du.powi(order as i32)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CuspSolution {
    pub g: CuspProfile,
    pub roots: IndicialRoots,
    /// ‖(2y²g″ − λg) − f‖_∞ / ‖f‖_∞ over the residual window.
    pub residual: f64,
}

/// Residual of (2y²d²/dy² − λ)g = f, relative to ‖f‖_∞, skipping the stencil
/// half-width at the start and the last 5% of the grid.
pub fn cusp_residual(g: &CuspProfile, f: &CuspProfile, lambda: Complex64) -> f64 {
    let du = g.du();
    let v = g.values();
    let d1 = derivative_u(&v, du, 1);
    let d2 = derivative_u(&v, du, 2);
    let stop = g.n - (g.n / 20).max(STENCIL / 2 + 1);
    let mut worst: f64 = 0.0;
    for j in STENCIL / 2..stop {
        let lhs = (d2[j] - d1[j]) * 2.0 - lambda * v[j];
        worst = worst.max((lhs - f.value(j)).norm());
    }
    let scale = f.sup_norm();
    if scale == 0.0 {
        worst
    } else {
        worst / scale
    }
}

pub fn solve_cusp(f: &CuspProfile, lambda: Complex64) -> Result<CuspSolution, CuspError> {
    f.validate()?;
    let scale = f.sup_norm();
    if f.value(0).norm() > SUPPORT_TOL * scale.max(f64::MIN_POSITIVE) {
        return Err(CuspError::Support(f.value(0).norm()));
    }
    let roots = indicial_roots(lambda);
    let du = f.du();
    let us: Vec<f64> = (0..f.n).map(|j| f.y0.ln() + j as f64 * du).collect();
    let fv = f.values();
    let cumulative_abs = |v: &[Complex64]| cumulative_abs_bound(v, du);
    // g = y1·b1 + y2·b2 and the a priori bound Σ|y_i|·∫|b_i′|
    let (values, bound): (Vec<Complex64>, Vec<f64>) = if roots.double {
        // y1 = √y, y2 = √y log y, Wronskian 1
        let i1: Vec<Complex64> = us.iter().zip(&fv).map(|(&u, &fj)| -fj * u * (-u / 2.0).exp() * 0.5).collect();
        let i2: Vec<Complex64> = us.iter().zip(&fv).map(|(&u, &fj)| fj * (-u / 2.0).exp() * 0.5).collect();
        let (b1, b2) = (cumulative_integral(&i1, du), cumulative_integral(&i2, du));
        let (m1, m2) = (cumulative_abs(&i1), cumulative_abs(&i2));
        us.iter()
            .enumerate()
            .map(|(j, &u)| {
                let e = (u / 2.0).exp();
                (e * (b1[j] + b2[j] * u), e * (m1[j] + m2[j] * u.abs()))
            })
            .unzip()
    } else {
        let c = Complex64::new(0.5, 0.0) / (roots.p1 - roots.p2);
        let weight = |p: Complex64| -> Vec<Complex64> { us.iter().zip(&fv).map(|(&u, &fj)| fj * (-p * u).exp()).collect() };
        let (w1, w2) = (weight(roots.p1), weight(roots.p2));
        let (b1, b2) = (cumulative_integral(&w1, du), cumulative_integral(&w2, du));
        let (m1, m2) = (cumulative_abs(&w1), cumulative_abs(&w2));
        us.iter()
            .enumerate()
            .map(|(j, &u)| {
                let (y1, y2) = ((roots.p1 * u).exp(), (roots.p2 * u).exp());
                (c * (b1[j] * y1 - b2[j] * y2), c.norm() * (m1[j] * y1.norm() + m2[j] * y2.norm()))
            })
            .unzip()
    };
    if let Some(j) = values.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(CuspError::Quadrature(f.y(j)));
    }
    let r_out = f.growth_exponent.max(roots.p1.re).max(roots.p2.re) + 0.5;
    let slack = 1e-9 * bound.iter().copied().fold(0.0, f64::max);
    if values.iter().zip(&bound).any(|(v, &m)| v.norm() > m * (1.0 + 1e-9) + slack) {
        return Err(CuspError::Growth(r_out));
    }
    let g = CuspProfile::new(f.y0, f.ymax, values, r_out)?;
    let residual = cusp_residual(&g, f, lambda);
    Ok(CuspSolution { g, roots, residual })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GrowthEntry {
    pub j: usize,
    /// sup over the grid of |d^j g/dy^j|·(2+y)^{j−R}.
    pub seminorm: f64,
    /// Log-log growth rate of the running sup of the weighted quantity over
    /// the last quarter of the grid.
    pub tail_slope: f64,
    pub unbounded: bool,
}

pub fn growth_report(g: &CuspProfile, j_max: usize) -> Vec<GrowthEntry> {
    growth_report_from(g, j_max, g.n * 3 / 4)
}

fn growth_report_from(g: &CuspProfile, j_max: usize, start: usize) -> Vec<GrowthEntry> {
    let du = g.du();
    let ys = g.ys();
    let mut deriv = g.values();
    let mut out = Vec::with_capacity(j_max + 1);
    for j in 0..=j_max {
        if j > 0 {
            // d/dy = y⁻¹ d/du
            deriv = derivative_u(&deriv, du, 1).into_iter().zip(&ys).map(|(d, &y)| d / y).collect();
        }
        let weighted: Vec<f64> =
            deriv.iter().zip(&ys).map(|(d, &y)| d.norm() * (2.0 + y).powf(j as f64 - g.growth_exponent)).collect();
        let seminorm = weighted.iter().copied().fold(0.0, f64::max);
        let head = weighted[..=start].iter().copied().fold(0.0, f64::max);
        let tail_slope = if head > 0.0 && seminorm > head {
            (seminorm / head).ln() / (ys[g.n - 1] / ys[start]).ln()
        } else {
            0.0
        };
        let unbounded = !seminorm.is_finite() || tail_slope > GROWTH_SLOPE_LIMIT;
        out.push(GrowthEntry { j, seminorm, tail_slope, unbounded });
    }
    out
}

/// A C^∞ bump exp(1 − 1/(1 − s²)) on [center − width, center + width].
pub fn bump(y: f64, center: f64, width: f64) -> f64 {
    let s = (y - center) / width;
    if s.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - s * s)).exp()
    }
}

/// Smooth step from 0 at y ≤ a to 1 at y ≥ b.
pub fn smooth_step(y: f64, a: f64, b: f64) -> f64 {
    let t = (y - a) / (b - a);
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        let e = |s: f64| if s <= 0.0 { 0.0 } else { (-1.0 / s).exp() };
        e(t) / (e(t) + e(1.0 - t))
    }
}

/// A random profile on [Y0, 10·Y0]: a sum of one to three bumps inside
/// [1.2·Y0, 9·Y0] with complex amplitudes.
pub fn random_bump_profile<R: Rng>(rng: &mut R, y0: f64, n: usize) -> CuspProfile {
    let terms = rng.gen_range(1..=3);
    let bumps: Vec<(f64, f64, Complex64)> = (0..terms)
        .map(|_| {
            let width = rng.gen_range(0.3..1.5) * y0;
            let center = rng.gen_range(1.2 * y0 + width..9.0 * y0 - width);
            (center, width, Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        })
        .collect();
    CuspProfile::from_fn(y0, 10.0 * y0, n, 0.0, |y| bumps.iter().map(|&(c, w, a)| a * bump(y, c, w)).sum())
        .expect("valid grid")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn roots_examples() {
        let r = indicial_roots(c(0.0));
        assert!((r.p1 - c(1.0)).norm() < 1e-15 && r.p2.norm() < 1e-15 && !r.double);
        let r = indicial_roots(c(-0.375));
        assert!((r.p1 - c(0.75)).norm() < 1e-15 && (r.p2 - c(0.25)).norm() < 1e-15);
        let r = indicial_roots(c(-0.5));
        assert!(r.double && (r.p1 - c(0.5)).norm() < 1e-15);
        // λ = 1/2 is not a double root: (1 ± √2)/2
        let r = indicial_roots(c(0.5));
        assert!(!r.double && (r.p1 - c((1.0 + 2f64.sqrt()) / 2.0)).norm() < 1e-15);
        for l in [c(0.0), c(-0.375), c(0.5), Complex64::new(1.0, 1.0)] {
            let r = indicial_roots(l);
            assert!(r.defect(l) < 1e-14);
            assert!((r.p1 + r.p2 - c(1.0)).norm() < 1e-14);
            assert!((r.p1 * r.p2 + l / 2.0).norm() < 1e-14);
        }
    }

    #[test]
    fn fornberg_central_weights() {
        let nodes = [-1.0, 0.0, 1.0];
        let w = fd_weights(&nodes, 0.0, 2);
        assert_eq!(w[1], vec![-0.5, 0.0, 0.5]);
        assert_eq!(w[2], vec![1.0, -2.0, 1.0]);
    }

    #[test]
    fn cumulative_integral_of_exponential() {
        let n = 201;
        let du = 0.01;
        let v: Vec<Complex64> = (0..n).map(|j| c((j as f64 * du).exp())).collect();
        let got = cumulative_integral(&v, du);
        for j in [1, 50, 200] {
            let want = (j as f64 * du).exp() - 1.0;
            assert!((got[j].re - want).abs() < 1e-12 * want);
        }
    }

    #[test]
    fn zero_input() {
        let f = CuspProfile::zero(1.0, 10.0, 400).unwrap();
        let s = solve_cusp(&f, c(-0.375)).unwrap();
        assert_eq!(s.g.sup_norm(), 0.0);
        assert!(growth_report(&s.g, 3).iter().all(|e| e.seminorm == 0.0 && !e.unbounded));
    }

    #[test]
    fn bump_at_lambda_zero() {
        let f = CuspProfile::from_fn(1.0, 10.0, 4001, 0.0, |y| c(bump(y, 2.5, 0.5))).unwrap();
        let s = solve_cusp(&f, c(0.0)).unwrap();
        assert!(s.residual < 1e-8, "{}", s.residual);
        let ys = s.g.ys();
        assert_eq!(s.g.value(0).norm(), 0.0);
        assert!(ys.iter().zip(s.g.values()).filter(|(y, _)| **y <= 2.0).all(|(_, v)| v.norm() < 1e-12));
        // λ = 0: 2y²g″ = f, so beyond the bump g is linear in y
        let lin = |y: f64| s.g.value(ys.iter().position(|&t| t >= y).unwrap());
        let (a, b, m) = (lin(5.0), lin(9.0), lin(7.0));
        assert!(((a + b) / 2.0 - m).norm() < 1e-3 * m.norm().max(1e-12));
    }

    #[test]
    fn power_tail_matches_particular_solution() {
        // f = y²χ, λ = −3/8: c(2s(s−1) − λ) = 1 gives c = 8/35, and the
        // remainder is a combination of y^{3/4}, y^{1/4}
        let lambda = c(-0.375);
        let f = CuspProfile::from_fn(1.0, 100.0, 6001, 2.0, |y| c(y * y * smooth_step(y, 2.0, 4.0))).unwrap();
        let s = solve_cusp(&f, lambda).unwrap();
        assert!(s.residual < 1e-8, "{}", s.residual);
        let ys = s.g.ys();
        let tail: Vec<usize> = (0..ys.len()).filter(|&j| ys[j] > 5.0 && j % 40 == 0).collect();
        let a = nalgebra::DMatrix::from_fn(tail.len(), 2, |r, k| ys[tail[r]].powf(if k == 0 { 0.75 } else { 0.25 }));
        let rhs = nalgebra::DVector::from_fn(tail.len(), |r, _| s.g.value(tail[r]).re - 8.0 / 35.0 * ys[tail[r]].powi(2));
        let coef = a.clone().svd(true, true).solve(&rhs, 1e-14).unwrap();
        let fit = (&a * coef - rhs).amax();
        assert!(fit < 1e-8 * 100.0f64.powi(2), "{fit}");
    }

    #[test]
    fn double_root_and_complex_lambda() {
        for lambda in [c(-0.5), Complex64::new(1.0, 1.0)] {
            let f = CuspProfile::from_fn(1.0, 10.0, 4001, 0.0, |y| Complex64::new(bump(y, 4.0, 1.5), bump(y, 6.0, 1.0))).unwrap();
            let s = solve_cusp(&f, lambda).unwrap();
            assert!(s.residual < 1e-8, "{lambda}: {}", s.residual);
        }
    }

    #[test]
    fn rejects_support_violation() {
        let f = CuspProfile::from_fn(1.0, 10.0, 400, 0.0, |_| c(1.0)).unwrap();
        assert!(matches!(solve_cusp(&f, c(0.0)), Err(CuspError::Support(_))));
    }

    #[test]
    fn exponential_growth_flagged() {
        let g = CuspProfile::from_fn(1.0, 10.0, 400, 1.0, |y| c(y.exp())).unwrap();
        assert!(growth_report(&g, 2).iter().all(|e| e.unbounded));
        let f = CuspProfile::from_fn(1.0, 10.0, 2001, 0.0, |y| c(bump(y, 2.5, 0.5))).unwrap();
        let s = solve_cusp(&f, c(-0.375)).unwrap();
        assert!(growth_report(&s.g, 3).iter().all(|e| e.seminorm.is_finite() && !e.unbounded));
    }

    #[test]
    fn json_round_trip() {
        let f = CuspProfile::from_fn(1.0, 10.0, 40, 0.0, |y| Complex64::new(bump(y, 3.0, 1.0), 0.5 * bump(y, 4.0, 1.0))).unwrap();
        let text = serde_json::to_string(&f).unwrap();
        assert!(text.contains("\"Y0\"") && text.contains("\"Ymax\"") && text.contains("\"R\""));
        let back: CuspProfile = serde_json::from_str(&text).unwrap();
        back.validate().unwrap();
        assert_eq!(back, f);
    }
}
