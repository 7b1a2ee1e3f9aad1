//! Degree −2 homogeneous functions on ℝ²∖{0}, their Fourier data
//! a_n = ∫Φ(x,1)e^{πinx}dx, b_n = ∫Φ(1,y)e^{πiny}dy, the lattice sums
//!
//!   I(Φ) = Σ_{(m,n)≠0} Φ(m,n) − 2Σ_{2|n} Φ(m,n),   J(Φ) = I(Φ(y,x)),
//!
//! and the linear relations between them.
//!
//! Poisson summation over n for each fixed m gives the column value
//! I = π²/6·Φ(0,1) − Σ_{m≠0,t} |m|⁻¹ b_{m(2t+1)}; summing over m first gives
//! the row value I = −π²/3·Φ(1,0) + 2ln2·a₀ + Σ_{n≠0,t} |n|⁻¹ a_{n(4t+2)}.
//! Equating the two is the I relation; the J relation is its mirror image.

use std::f64::consts::{LN_2, PI};
use std::sync::Arc;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cusp::fd_weights;

#[derive(Debug, Error, PartialEq)]
pub enum HeisError {
    #[error("chart half-width {0} must be at least 1")]
    ChartTooSmall(f64),
    #[error("sampled chart needs at least 3 values, h and g of equal length")]
    BadSamples,
    #[error("Φ is undefined at the origin")]
    Origin,
    #[error("coefficients have not decayed by |n| = {0}")]
    NoDecay(usize),
    #[error("tail series at X = {x} did not converge (last term {term:e})")]
    TailSeries { x: f64, term: f64 },
    #[error("coefficient index {need} outside the computed range {have}")]
    Range { need: i64, have: usize },
    #[error("lattice radius {0} below the minimum of 10")]
    Radius(usize),
}

type Real = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// One affine chart of ℙ¹: t ↦ Φ(t,1) or t ↦ Φ(1,t) on [−w, w].
#[derive(Clone)]
enum Chart {
    Closure(Real),
    /// Values at the Chebyshev–Lobatto nodes w·cos(kπ/M), k = 0..=M.
    Samples { half_width: f64, values: Vec<f64> },
}

impl Chart {
    fn eval(&self, t: f64) -> f64 {
        match self {
            Chart::Closure(f) => f(t),
            Chart::Samples { half_width, values } => barycentric(values, t / half_width),
        }
    }
}

/// Barycentric interpolation on Chebyshev–Lobatto nodes cos(kπ/M), s ∈ [−1,1].
fn barycentric(values: &[f64], s: f64) -> f64 {
    let m = values.len() - 1;
    let (mut num, mut den) = (0.0, 0.0);
    for (k, &v) in values.iter().enumerate() {
        let node = (k as f64 * PI / m as f64).cos();
        let d = s - node;
        if d == 0.0 {
            return v;
        }
        let mut w = if k % 2 == 0 { 1.0 } else { -1.0 };
        if k == 0 || k == m {
            w *= 0.5;
        }
        num += w * v / d;
        den += w / d;
    }
    num / den
}

/// A degree −2 homogeneous Φ, stored through h(x) = Φ(x,1) and g(y) = Φ(1,y)
/// on [−w, w] with w ≥ 1. Φ(x,y) is read from h when |x| ≤ |y| and from g
/// otherwise, so every point of ℝ²∖{0} is covered without extrapolation.
#[derive(Clone)]
pub struct HomogeneousForm {
    h: Chart,
    g: Chart,
    half_width: f64,
}

impl std::fmt::Debug for HomogeneousForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HomogeneousForm").field("phi_10", &self.phi_10()).field("phi_01", &self.phi_01()).finish()
    }
}

/// Chebyshev–Lobatto samples of both charts, as read from and written to JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileFile {
    pub half_width: f64,
    pub h: Vec<f64>,
    pub g: Vec<f64>,
}

/// Chart half-width used by the closure constructors.
pub const DEFAULT_HALF_WIDTH: f64 = 2.0;

impl HomogeneousForm {
    pub fn from_charts(
        h: impl Fn(f64) -> f64 + Send + Sync + 'static,
        g: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self { h: Chart::Closure(Arc::new(h)), g: Chart::Closure(Arc::new(g)), half_width: DEFAULT_HALF_WIDTH }
    }

    /// From a function of (x, y); it is only ever called with max(|x|,|y|) = 1.
    pub fn from_phi(phi: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        let phi = Arc::new(phi);
        let p2 = phi.clone();
        Self::from_charts(move |x| phi(x, 1.0), move |y| p2(1.0, y))
    }

    pub fn from_samples(file: &ProfileFile) -> Result<Self, HeisError> {
        if file.half_width < 1.0 || !file.half_width.is_finite() {
            return Err(HeisError::ChartTooSmall(file.half_width));
        }
        if file.h.len() < 3 || file.h.len() != file.g.len() {
            return Err(HeisError::BadSamples);
        }
        let chart = |v: &Vec<f64>| Chart::Samples { half_width: file.half_width, values: v.clone() };
        Ok(Self { h: chart(&file.h), g: chart(&file.g), half_width: file.half_width })
    }

    /// Samples at M + 1 Chebyshev–Lobatto nodes on [−half_width, half_width].
    pub fn to_samples(&self, m: usize) -> ProfileFile {
        let w = self.half_width;
        let nodes: Vec<f64> = (0..=m).map(|k| w * (k as f64 * PI / m as f64).cos()).collect();
        ProfileFile {
            half_width: w,
            h: nodes.iter().map(|&t| self.h.eval(t)).collect(),
            g: nodes.iter().map(|&t| self.g.eval(t)).collect(),
        }
    }

    /// Φ = y²/(x²+y²)², i.e. h(x) = 1/(1+x²)².
    pub fn reference() -> Self {
        Self::from_charts(|x| (1.0 + x * x).powi(-2), |y| y * y * (1.0 + y * y).powi(-2))
    }

    /// Φ = y⁴/(x²+y²)³, i.e. h(x) = 1/(1+x²)³.
    pub fn cubic_reference() -> Self {
        Self::from_charts(|x| (1.0 + x * x).powi(-3), |y| y.powi(4) * (1.0 + y * y).powi(-3))
    }

    /// Φ = (αx² + βxy + γy²)/(x²+y²)², with Φ(1,0) = α.
    pub fn rational(alpha: f64, beta: f64, gamma: f64) -> Self {
        Self::from_phi(move |x, y| (alpha * x * x + beta * x * y + gamma * y * y) / (x * x + y * y).powi(2))
    }

    /// Φ = r⁻² exp(c·cos2θ + s·sin2θ) · (1 + w·sin²2θ), a Gaussian-type
    /// window in the angle.
    pub fn angular(c: f64, s: f64, w: f64) -> Self {
        Self::from_phi(move |x, y| {
            let r2 = x * x + y * y;
            let (c2, s2) = ((x * x - y * y) / r2, 2.0 * x * y / r2);
            (c * c2 + s * s2).exp() * (1.0 + w * s2 * s2) / r2
        })
    }

    /// Φ̃(x,y) = Φ(y,x).
    pub fn swapped(&self) -> Self {
        Self { h: self.g.clone(), g: self.h.clone(), half_width: self.half_width }
    }

    pub fn scaled(&self, c: f64) -> Self {
        let this = self.clone();
        let other = self.clone();
        Self::from_charts(move |x| c * this.h.eval(x), move |y| c * other.g.eval(y))
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn eval(&self, x: f64, y: f64) -> Result<f64, HeisError> {
        if x == 0.0 && y == 0.0 {
            return Err(HeisError::Origin);
        }
        Ok(if x.abs() <= y.abs() { self.h.eval(x / y) / (y * y) } else { self.g.eval(y / x) / (x * x) })
    }

    /// Φ(x, 1) for any real x.
    pub fn h(&self, x: f64) -> f64 {
        if x.abs() <= 1.0 {
            self.h.eval(x)
        } else {
            self.g.eval(1.0 / x) / (x * x)
        }
    }

    /// Φ(1, y) for any real y.
    pub fn g(&self, y: f64) -> f64 {
        if y.abs() <= 1.0 {
            self.g.eval(y)
        } else {
            self.h.eval(1.0 / y) / (y * y)
        }
    }

    /// Φ(1, 0).
    pub fn phi_10(&self) -> f64 {
        self.g.eval(0.0)
    }

    /// Φ(0, 1).
    pub fn phi_01(&self) -> f64 {
        self.h.eval(0.0)
    }

    /// max |g(y) − y⁻²h(1/y)| over the overlap 1/w ≤ |y| ≤ w of the charts,
    /// relative to the largest chart value there.
    pub fn chart_mismatch(&self) -> f64 {
        let w = self.half_width;
        let mut worst: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for k in 0..=400 {
            let t = 1.0 / w + (w - 1.0 / w) * k as f64 / 400.0;
            for y in [t, -t] {
                let direct = self.g.eval(y);
                let via_h = self.h.eval(1.0 / y) / (y * y);
                worst = worst.max((direct - via_h).abs());
                scale = scale.max(direct.abs());
            }
        }
        if scale == 0.0 {
            worst
        } else {
            worst / scale
        }
    }

    /// How far g(0) is from the value interpolated from g(±δ), g(±2δ),
    /// g(±3δ), relative to max|g| on [−1,1]. Small for a smooth extension
    /// through y = 0.
    pub fn smoothness_defect(&self, delta: f64) -> f64 {
        let nodes = [-3.0, -2.0, -1.0, 1.0, 2.0, 3.0].map(|k| k * delta);
        let w = fd_weights(&nodes, 0.0, 0);
        let interp: f64 = nodes.iter().zip(&w[0]).map(|(&y, &c)| c * self.g.eval(y)).sum();
        let scale = (0..=200).map(|k| self.g.eval(-1.0 + k as f64 / 100.0).abs()).fold(0.0, f64::max);
        (interp - self.g.eval(0.0)).abs() / scale.max(f64::MIN_POSITIVE)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureConfig {
    /// Direct quadrature covers [−X, X]; beyond that an asymptotic series.
    pub cutoff: f64,
    /// Gauss–Legendre points per panel.
    pub order: usize,
    /// Largest panel width; shrunk so each panel spans at most `max_phase` radians.
    pub max_panel: f64,
    pub max_phase: f64,
    /// Terms in the tail series.
    pub tail_terms: usize,
    /// |a_n| below this times max|a| counts as decayed.
    pub decay_tol: f64,
    /// Largest |n| tried before giving up on decay.
    pub max_index: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { cutoff: 64.0, order: 24, max_panel: 0.25, max_phase: 12.0, tail_terms: 5, decay_tol: 1e-14, max_index: 512 }
    }
}

/// a_n and b_n for |n| ≤ n_max; beyond n_max both are below the decay
/// tolerance and are read as 0.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Coefficients {
    pub n_max: usize,
    a: Vec<Complex64>,
    b: Vec<Complex64>,
}

impl Coefficients {
    pub fn a(&self, n: i64) -> Complex64 {
        Self::read(&self.a, self.n_max, n)
    }

    pub fn b(&self, n: i64) -> Complex64 {
        Self::read(&self.b, self.n_max, n)
    }

    fn read(v: &[Complex64], n_max: usize, n: i64) -> Complex64 {
        if n.unsigned_abs() as usize > n_max {
            Complex64::new(0.0, 0.0)
        } else {
            v[(n + n_max as i64) as usize]
        }
    }

    /// Coefficients of Φ(y,x).
    pub fn swapped(&self) -> Self {
        Self { n_max: self.n_max, a: self.b.clone(), b: self.a.clone() }
    }

    /// max |a_{−n} − conj(a_n)| and the same for b.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.n_max as i64;
        (0..=n).map(|k| (self.a(-k) - self.a(k).conj()).norm().max((self.b(-k) - self.b(k).conj()).norm())).fold(0.0, f64::max)
    }
}

/// ∫_ℝ u(x) e^{iπnx} dx for |n| ≤ n_max, where `small` evaluates the other
/// chart so that ∫_{|x|>X} u = ∫_{|y|<1/X} small(y) dy for n = 0.
fn line_transform(u: &dyn Fn(f64) -> f64, small: &dyn Fn(f64) -> f64, n_max: usize, cfg: &QuadratureConfig) -> Result<Vec<Complex64>, HeisError> {
    let rule = GaussLegendre::new(cfg.order).expect("order ≥ 2");
    let pairs = rule.as_node_weight_pairs();
    let x_cut = cfg.cutoff;
    let width = cfg.max_panel.min(cfg.max_phase / (PI * n_max.max(1) as f64));
    let panels = (2.0 * x_cut / width).ceil() as usize;
    let step = 2.0 * x_cut / panels as f64;
    let len = 2 * n_max + 1;
    let mut acc = vec![Complex64::new(0.0, 0.0); len];
    for p in 0..panels {
        let (lo, hi) = (-x_cut + p as f64 * step, -x_cut + (p + 1) as f64 * step);
        let (mid, half) = ((lo + hi) / 2.0, (hi - lo) / 2.0);
        for &(t, w) in pairs {
            let x = mid + half * t;
            let v = u(x) * w * half;
            let z = Complex64::from_polar(1.0, PI * x);
            let mut zn = Complex64::new(v, 0.0);
            acc[n_max] += zn;
            for n in 1..=n_max {
                zn *= z;
                acc[n_max + n] += zn;
                acc[n_max - n] += zn.conj();
            }
        }
    }
    // n = 0 tail through the other chart
    let inv = 1.0 / x_cut;
    acc[n_max] += pairs.iter().map(|&(t, w)| small(inv * t) * w * inv).sum::<f64>();
    // n ≠ 0 tails: −e^{iωX} Σ (−1)^k u^{(k)}(X)/(iω)^{k+1} on the right, mirrored on the left
    let h = 0.5;
    let nodes: Vec<f64> = (-4..=4).map(|k| k as f64 * h).collect();
    let fd = fd_weights(&nodes, 0.0, cfg.tail_terms - 1);
    let deriv = |centre: f64| -> Vec<f64> { fd.iter().map(|row| row.iter().zip(&nodes).map(|(&c, &s)| c * u(centre + s)).sum()).collect() };
    let right = deriv(x_cut);
    let left = deriv(-x_cut);
    let scale = acc.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    for n in 1..=n_max as i64 {
        for sgn in [1i64, -1] {
            let omega = PI * (sgn * n) as f64;
            let iw = Complex64::new(0.0, omega);
            let mut series = Complex64::new(0.0, 0.0);
            let mut last = 0.0;
            for k in 0..cfg.tail_terms {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                // right end: u^{(k)}(X); left end: ∫_{−∞}^{−X} u e^{iωx} = e^{−iωX} Σ (−1)^k u^{(k)}(−X)/(iω)^{k+1}
                let r = -Complex64::from_polar(1.0, omega * x_cut) * sign * right[k] / iw.powu(k as u32 + 1);
                let l = Complex64::from_polar(1.0, -omega * x_cut) * sign * left[k] / iw.powu(k as u32 + 1);
                series += r + l;
                last = (r + l).norm();
            }
            if last > 1e-12 * scale {
                return Err(HeisError::TailSeries { x: x_cut, term: last });
            }
            acc[(n_max as i64 + sgn * n) as usize] += series;
        }
    }
    Ok(acc)
}

/// a_n, b_n for |n| ≤ n_max.
pub fn coefficients(phi: &HomogeneousForm, n_max: usize, cfg: &QuadratureConfig) -> Result<Coefficients, HeisError> {
    let a = line_transform(&|x| phi.h(x), &|y| phi.g(y), n_max, cfg)?;
    let b = line_transform(&|y| phi.g(y), &|x| phi.h(x), n_max, cfg)?;
    Ok(Coefficients { n_max, a, b })
}

/// Coefficients up to the first n_max (from 32, doubling) where the last
/// eight of both sequences are below the decay tolerance.
pub fn coefficients_until_decayed(phi: &HomogeneousForm, cfg: &QuadratureConfig) -> Result<Coefficients, HeisError> {
    let mut n_max = 32;
    loop {
        let c = coefficients(phi, n_max, cfg)?;
        let scale = (0..=n_max as i64).map(|k| c.a(k).norm().max(c.b(k).norm())).fold(0.0, f64::max);
        let tail = (n_max as i64 - 7..=n_max as i64).map(|k| c.a(k).norm().max(c.b(k).norm())).fold(0.0, f64::max);
        if tail <= cfg.decay_tol * scale.max(f64::MIN_POSITIVE) || scale == 0.0 {
            return Ok(c);
        }
        if n_max * 2 > cfg.max_index {
            return Err(HeisError::NoDecay(n_max));
        }
        n_max *= 2;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Which {
    A,
    I,
    J,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LatticeSum {
    pub radius: usize,
    /// Partial sum over 0 < m² + n² ≤ R².
    pub raw: f64,
    /// Mean of the partial sums over radii in [R/2, R].
    pub cesaro: f64,
    /// S∞ from a least-squares fit S(r) = S∞ + c/r at r = R/2, 3R/4, R of
    /// the radius-averaged partial sums.
    pub extrapolated: f64,
}

/// Points of the periodic trapezoid rule for A.
const ARC_POINTS: usize = 4096;
/// Fixed number of work chunks, so the reduction order does not depend on the
/// machine.
const CHUNKS: usize = 8;

/// A(Φ) = ∫_{ℙ¹} Φ·(x dy − y dx) = ∫_0^π Φ(cos θ, sin θ) dθ, which in the
/// chart y = 1 is ∫h(x)dx.
pub fn arc_integral(phi: &HomogeneousForm) -> f64 {
    let d = PI / ARC_POINTS as f64;
    (0..ARC_POINTS).map(|k| phi.eval((k as f64 * d).cos(), (k as f64 * d).sin()).expect("unit circle")).sum::<f64>() * d
}

/// Shell contributions s[k] = Σ_{m²+n²=k} ε·Φ(m,n) for k ≤ R².
fn shells(phi: &HomogeneousForm, which: Which, radius: usize) -> Vec<f64> {
    let r = radius as i64;
    let r2 = r * r;
    let rows: Vec<i64> = (-r..=r).collect();
    let chunk = rows.len().div_ceil(CHUNKS);
    let parts: Vec<Vec<f64>> = std::thread::scope(|scope| {
        let handles: Vec<_> = rows
            .chunks(chunk)
            .map(|ms| {
                scope.spawn(move || {
                    let mut s = vec![0.0; r2 as usize + 1];
                    for &m in ms {
                        let reach = ((r2 - m * m) as f64).sqrt().floor() as i64;
                        for n in -reach..=reach {
                            if m == 0 && n == 0 {
                                continue;
                            }
                            let even = match which {
                                Which::I => n % 2 == 0,
                                _ => m % 2 == 0,
                            };
                            let v = phi.eval(m as f64, n as f64).expect("nonzero point");
                            s[(m * m + n * n) as usize] += if even { -v } else { v };
                        }
                    }
                    s
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("lattice worker")).collect()
    });
    let mut total = vec![0.0; r2 as usize + 1];
    for p in parts {
        for (t, v) in total.iter_mut().zip(p) {
            *t += v;
        }
    }
    total
}

/// Mean over r ∈ [lo, hi] of the partial sum S(r) = prefix[⌊r²⌋].
fn radius_average(prefix: &[f64], lo: f64, hi: f64) -> f64 {
    let mut acc = 0.0;
    let first = (lo * lo).floor() as usize;
    let last = ((hi * hi).floor() as usize).min(prefix.len() - 1);
    for k in first..=last {
        let a = (k as f64).sqrt().max(lo);
        let b = ((k + 1) as f64).sqrt().min(hi);
        if b > a {
            acc += prefix[k] * (b - a);
        }
    }
    acc / (hi - lo)
}

pub fn lattice_sum(phi: &HomogeneousForm, which: Which, radius: usize) -> Result<LatticeSum, HeisError> {
    if radius < 10 {
        return Err(HeisError::Radius(radius));
    }
    if which == Which::A {
        let v = arc_integral(phi);
        return Ok(LatticeSum { radius, raw: v, cesaro: v, extrapolated: v });
    }
    let s = shells(phi, which, radius);
    let mut prefix = s;
    for k in 1..prefix.len() {
        prefix[k] += prefix[k - 1];
    }
    let r = radius as f64;
    let raw = *prefix.last().expect("nonempty");
    let cesaro = radius_average(&prefix, r / 2.0, r);
    // averaged S over a window of width r/4 ending at each fit radius
    let pts: Vec<(f64, f64)> = [0.5, 0.75, 1.0].iter().map(|&f| (f * r, radius_average(&prefix, 0.75 * f * r, f * r))).collect();
    let extrapolated = fit_inverse_radius(&pts);
    Ok(LatticeSum { radius, raw, cesaro, extrapolated })
}

/// Least-squares S∞ in S(r) = S∞ + c/r.
fn fit_inverse_radius(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), &(r, s)| (a + 1.0 / r, b + s));
    let (sxx, sxy) = pts.iter().fold((0.0, 0.0), |(a, b), &(r, s)| (a + 1.0 / (r * r), b + s / r));
    let c = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    (sy - c * sx) / n
}

/// Σ_{0<|m|≤R} |m|⁻¹ Σ_{t=−T}^{T−1} c_{m(q t + q/2)}, for q = 2 (odd
/// multiples) or q = 4 (multiples ≡ 2 mod 4).
fn harmonic_sum(c: &dyn Fn(i64) -> Complex64, radius: usize, tdepth: usize, q: i64) -> Complex64 {
    let mut total = Complex64::new(0.0, 0.0);
    for m in 1..=radius as i64 {
        let mut inner = Complex64::new(0.0, 0.0);
        for t in -(tdepth as i64)..tdepth as i64 {
            let k = m * (q * t + q / 2);
            inner += c(k) + c(-k);
        }
        total += inner / m as f64;
    }
    total
}

/// Both Poisson evaluations of I.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PoissonValues {
    pub column: f64,
    pub row: f64,
}

/// Column and row values of I from the coefficients, using every stored
/// coefficient; J is `poisson_values(&phi.swapped(), &c.swapped())`.
pub fn poisson_values(phi: &HomogeneousForm, c: &Coefficients) -> PoissonValues {
    let depth = c.n_max + 1;
    let sb = harmonic_sum(&|k| c.b(k), c.n_max, depth, 2);
    let sa = harmonic_sum(&|k| c.a(k), c.n_max, depth, 4);
    PoissonValues {
        column: PI * PI / 6.0 * phi.phi_01() - sb.re,
        row: -PI * PI / 3.0 * phi.phi_10() + 2.0 * LN_2 * c.a(0).re + sa.re,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RelationResiduals {
    #[serde(rename = "R")]
    pub radius: usize,
    #[serde(rename = "T")]
    pub tdepth: usize,
    /// |a₀ − b₀|
    pub r_a: f64,
    /// π²/3·Φ(1,0) + π²/6·Φ(0,1) = Σ|m|⁻¹b_{m(2t+1)} + Σ|n|⁻¹a_{n(4t+2)} + 2ln2·a₀
    pub r_i: f64,
    /// π²/6·Φ(1,0) + π²/3·Φ(0,1) = Σ|m|⁻¹a_{m(2t+1)} + Σ|n|⁻¹b_{n(4t+2)} + 2ln2·b₀
    pub r_j: f64,
    /// The same two relations without the 2ln2 terms.
    pub r_i_literal: f64,
    pub r_j_literal: f64,
}

pub fn relation_residuals(phi: &HomogeneousForm, c: &Coefficients, radius: usize, tdepth: usize) -> RelationResiduals {
    let (p10, p01) = (phi.phi_10(), phi.phi_01());
    let sb_odd = harmonic_sum(&|k| c.b(k), radius, tdepth, 2);
    let sa_two = harmonic_sum(&|k| c.a(k), radius, tdepth, 4);
    let sa_odd = harmonic_sum(&|k| c.a(k), radius, tdepth, 2);
    let sb_two = harmonic_sum(&|k| c.b(k), radius, tdepth, 4);
    let lhs_i = Complex64::new(PI * PI / 3.0 * p10 + PI * PI / 6.0 * p01, 0.0);
    let lhs_j = Complex64::new(PI * PI / 6.0 * p10 + PI * PI / 3.0 * p01, 0.0);
    let lit_i = lhs_i - sb_odd - sa_two;
    let lit_j = lhs_j - sa_odd - sb_two;
    RelationResiduals {
        radius,
        tdepth,
        r_a: (c.a(0) - c.b(0)).norm(),
        r_i: (lit_i - c.a(0) * 2.0 * LN_2).norm(),
        r_j: (lit_j - c.b(0) * 2.0 * LN_2).norm(),
        r_i_literal: lit_i.norm(),
        r_j_literal: lit_j.norm(),
    }
}

/// Residuals along (R, T), (R/2, T/2), … down to a side of 1, smallest first.
pub fn relation_table(phi: &HomogeneousForm, c: &Coefficients, radius: usize, tdepth: usize) -> Vec<RelationResiduals> {
    let mut sizes = vec![(radius, tdepth)];
    while let Some(&(r, t)) = sizes.last() {
        if r < 2 || t < 2 {
            break;
        }
        sizes.push((r / 2, t / 2));
    }
    sizes.iter().rev().map(|&(r, t)| relation_residuals(phi, c, r, t)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_a(n: i64) -> f64 {
        let k = PI * n.unsigned_abs() as f64;
        PI / 2.0 * (1.0 + k) * (-k).exp()
    }

    fn reference_b(n: i64) -> f64 {
        let k = PI * n.unsigned_abs() as f64;
        PI / 2.0 * (1.0 - k) * (-k).exp()
    }

    #[test]
    fn charts_agree_and_extend_smoothly() {
        for phi in [HomogeneousForm::reference(), HomogeneousForm::rational(0.7, -0.2, 1.3), HomogeneousForm::angular(1.0, 0.3, 0.5)] {
            assert!(phi.chart_mismatch() < 1e-14);
            assert!(phi.smoothness_defect(1e-2) < 1e-8);
            assert!((phi.eval(3.0, -2.0).unwrap() - phi.eval(-1.5, 1.0).unwrap() / 4.0).abs() < 1e-15);
        }
        let phi = HomogeneousForm::reference();
        assert_eq!((phi.phi_10(), phi.phi_01()), (0.0, 1.0));
        assert_eq!(phi.eval(0.0, 0.0), Err(HeisError::Origin));
    }

    #[test]
    fn reference_coefficients_closed_form() {
        let phi = HomogeneousForm::reference();
        let c = coefficients(&phi, 24, &QuadratureConfig::default()).unwrap();
        for n in -24..=24 {
            assert!((c.a(n) - reference_a(n)).norm() < 1e-12, "a_{n}");
            assert!((c.b(n) - reference_b(n)).norm() < 1e-12, "b_{n}");
        }
        assert!(c.hermitian_defect() < 1e-15);
        assert!((c.a(0).re - PI / 2.0).abs() < 1e-12);
        assert!((arc_integral(&phi) - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn rational_boundary_term() {
        // h = (αx² + βx + γ)/(1+x²)²: a₀ = b₀ = (α+γ)π/2
        let phi = HomogeneousForm::rational(0.8, 0.3, 1.1);
        let c = coefficients_until_decayed(&phi, &QuadratureConfig::default()).unwrap();
        assert!((c.a(0).re - 1.9 * PI / 2.0).abs() < 1e-10);
        assert!((c.b(0).re - 1.9 * PI / 2.0).abs() < 1e-10);
        let r = relation_residuals(&phi, &c, 64, 64);
        assert!(r.r_i < 1e-9 && r.r_j < 1e-9, "{r:?}");
    }

    #[test]
    fn zero_form() {
        let phi = HomogeneousForm::from_charts(|_| 0.0, |_| 0.0);
        let c = coefficients_until_decayed(&phi, &QuadratureConfig::default()).unwrap();
        let r = relation_residuals(&phi, &c, 8, 8);
        assert_eq!((r.r_a, r.r_i, r.r_j), (0.0, 0.0, 0.0));
        for w in [Which::A, Which::I, Which::J] {
            let s = lattice_sum(&phi, w, 16).unwrap();
            assert_eq!((s.raw, s.cesaro, s.extrapolated), (0.0, 0.0, 0.0));
        }
    }

    #[test]
    fn literal_relation_misses_by_log_term() {
        let phi = HomogeneousForm::reference();
        let c = coefficients_until_decayed(&phi, &QuadratureConfig::default()).unwrap();
        let r = relation_residuals(&phi, &c, 64, 64);
        assert!((r.r_i_literal - 2.0 * LN_2 * PI / 2.0).abs() < 1e-9);
        assert!(r.r_i < 1e-10);
    }

    #[test]
    fn swap_symmetry_of_lattice_sums() {
        let phi = HomogeneousForm::angular(0.4, -0.2, 0.3);
        let j = lattice_sum(&phi, Which::J, 24).unwrap();
        let i_swapped = lattice_sum(&phi.swapped(), Which::I, 24).unwrap();
        assert!((j.raw - i_swapped.raw).abs() < 1e-12);
    }

    #[test]
    fn samples_round_trip() {
        let phi = HomogeneousForm::rational(0.5, 0.2, 1.0);
        let file = phi.to_samples(96);
        let s = HomogeneousForm::from_samples(&file).unwrap();
        for x in [-0.9, -0.3, 0.0, 0.41, 1.0] {
            assert!((s.h(x) - phi.h(x)).abs() < 1e-12);
            assert!((s.g(x) - phi.g(x)).abs() < 1e-12);
        }
        assert!(s.chart_mismatch() < 1e-12);
        assert!(matches!(HomogeneousForm::from_samples(&ProfileFile { half_width: 0.5, h: vec![1.0; 5], g: vec![1.0; 5] }), Err(HeisError::ChartTooSmall(_))));
    }

    #[test]
    fn radius_minimum() {
        assert_eq!(lattice_sum(&HomogeneousForm::reference(), Which::I, 5).unwrap_err(), HeisError::Radius(5));
    }
}
