use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::OscError;

/// Relative tail threshold for the Schwartz surrogate check.
pub const DEFAULT_TAIL_TOL: f64 = 1e-7;

/// Half-width of the sinc window used for off-grid evaluation.
const SINC_NEIGHBOURS: i64 = 24;

thread_local! {
    pub(crate) static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

pub(crate) fn fft_in_place(buf: &mut [Complex64], inverse: bool) {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        let plan = if inverse { p.plan_fft_inverse(buf.len()) } else { p.plan_fft_forward(buf.len()) };
        plan.process(buf);
    });
}

/// Uniform grid x_j = −L + j·2L/N, j = 0..N.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub half_width: f64,
    pub points: usize,
}

impl Default for Grid {
    fn default() -> Self {
        Self { half_width: 8.0, points: 2048 }
    }
}

impl Grid {
    pub fn new(half_width: f64, points: usize) -> Result<Self, OscError> {
        if points == 0 || points % 2 != 0 || !(half_width > 0.0) || !half_width.is_finite() {
            return Err(OscError::BadGrid { points, half_width });
        }
        Ok(Self { half_width, points })
    }

    pub fn step(&self) -> f64 {
        2.0 * self.half_width / self.points as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        -self.half_width + j as f64 * self.step()
    }

    pub fn xs(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.points).map(|j| self.x(j))
    }

    /// Index of −x_j.
    pub fn mirror(&self, j: usize) -> usize {
        (self.points - j) % self.points
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }
}

impl std::str::FromStr for Parity {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "even" => Ok(Parity::Even),
            "odd" => Ok(Parity::Odd),
            _ => Err(format!("parity must be \"even\" or \"odd\", got {s:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "super::io::GridFunctionFile", into = "super::io::GridFunctionFile")]
pub struct GridFunction {
    grid: Grid,
    parity: Parity,
    values: Vec<Complex64>,
}

impl GridFunction {
    /// Validating constructor: checks length, parity and tail decay.
    pub fn new(grid: Grid, parity: Parity, values: Vec<Complex64>) -> Result<Self, OscError> {
        if values.len() != grid.points {
            return Err(OscError::LengthMismatch { expected: grid.points, got: values.len() });
        }
        let f = Self { grid, parity, values };
        let dev = f.parity_deviation();
        if dev > 1e-8 {
            return Err(OscError::Parity { parity, deviation: dev });
        }
        f.check_tail(DEFAULT_TAIL_TOL)?;
        Ok(f)
    }

    pub(crate) fn raw(grid: Grid, parity: Parity, values: Vec<Complex64>) -> Self {
        Self { grid, parity, values }
    }

    /// Sample `f` on the grid. Parity is taken on trust but tails are checked.
    pub fn from_fn(grid: Grid, parity: Parity, f: impl Fn(f64) -> Complex64) -> Result<Self, OscError> {
        let values = grid.xs().map(f).collect();
        let g = Self { grid, parity, values };
        g.check_tail(DEFAULT_TAIL_TOL)?;
        Ok(g)
    }

    pub fn zero(grid: Grid, parity: Parity) -> Self {
        Self { grid, parity, values: vec![Complex64::new(0.0, 0.0); grid.points] }
    }

    /// The Gaussian e^{−πx²}.
    pub fn gaussian(grid: Grid) -> Self {
        Self::raw(grid, Parity::Even, grid.xs().map(|x| Complex64::new((-PI * x * x).exp(), 0.0)).collect())
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// Largest relative violation of φ(−x) = ±φ(x).
    pub fn parity_deviation(&self) -> f64 {
        let s = self.parity.sign();
        let max = self.sup_norm().max(f64::MIN_POSITIVE);
        (0..self.grid.points)
            .map(|j| (self.values[j] - self.values[self.grid.mirror(j)] * s).norm())
            .fold(0.0, f64::max)
            / max
    }

    /// max |φ| on |x| > L−1 relative to max |φ|.
    pub fn tail_ratio(&self) -> f64 {
        let max = self.sup_norm();
        if max == 0.0 {
            return 0.0;
        }
        let cut = self.grid.half_width - 1.0;
        self.grid
            .xs()
            .zip(&self.values)
            .filter(|(x, _)| x.abs() > cut)
            .map(|(_, v)| v.norm())
            .fold(0.0, f64::max)
            / max
    }

    pub fn check_tail(&self, threshold: f64) -> Result<(), OscError> {
        self.check_tail_scaled(threshold, self.sup_norm())
    }

    /// Tail check relative to an outside scale, for outputs that may
    /// legitimately vanish (e.g. m applied to a lowest vector).
    pub fn check_tail_scaled(&self, threshold: f64, scale: f64) -> Result<(), OscError> {
        let scale = scale.max(self.sup_norm());
        if scale == 0.0 {
            return Ok(());
        }
        let tail = self.tail_ratio() * self.sup_norm() / scale;
        if tail > threshold {
            return Err(OscError::TailDecay { tail, threshold });
        }
        Ok(())
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Discrete L² norm (trapezoid on the periodic grid).
    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.step()).sqrt()
    }

    /// ∫ conj(self)·other.
    pub fn inner(&self, other: &GridFunction) -> Complex64 {
        self.values.iter().zip(&other.values).map(|(a, b)| a.conj() * b).sum::<Complex64>() * self.grid.step()
    }

    pub fn map_with_x(&self, f: impl Fn(f64, Complex64) -> Complex64) -> GridFunction {
        let values = self.grid.xs().zip(&self.values).map(|(x, &v)| f(x, v)).collect();
        Self::raw(self.grid, self.parity, values)
    }

    pub fn scale(&self, c: Complex64) -> GridFunction {
        Self::raw(self.grid, self.parity, self.values.iter().map(|v| v * c).collect())
    }

    pub fn add(&self, other: &GridFunction) -> Result<GridFunction, OscError> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &GridFunction) -> Result<GridFunction, OscError> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &GridFunction, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<GridFunction, OscError> {
        if self.grid != other.grid || self.parity != other.parity {
            return Err(OscError::Mismatch);
        }
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect();
        Ok(Self::raw(self.grid, self.parity, values))
    }

    /// Spectral derivative of the given order on the periodic grid. The
    /// Nyquist mode is dropped for odd orders so real functions stay real.
    pub fn derivative(&self, order: u32) -> GridFunction {
        let n = self.grid.points;
        let mut buf = self.values.clone();
        fft_in_place(&mut buf, false);
        let base = PI / self.grid.half_width; // 2π / period
        for (k, c) in buf.iter_mut().enumerate() {
            let freq = if k <= n / 2 { k as f64 } else { k as f64 - n as f64 };
            if order % 2 == 1 && k == n / 2 {
                *c = Complex64::new(0.0, 0.0);
                continue;
            }
            *c *= (Complex64::i() * base * freq).powu(order);
        }
        fft_in_place(&mut buf, true);
        let norm = 1.0 / n as f64;
        let parity = if order % 2 == 1 { flip(self.parity) } else { self.parity };
        Self::raw(self.grid, parity, buf.into_iter().map(|v| v * norm).collect())
    }

    /// Band-limited evaluation at an arbitrary point: sinc interpolation with a
    /// Gaussian taper over ±24 neighbours (periodic index wrap).
    pub fn eval(&self, x: f64) -> Complex64 {
        let h = self.grid.step();
        let n = self.grid.points as i64;
        let s = (x + self.grid.half_width) / h;
        let j0 = s.round() as i64;
        if (s - j0 as f64).abs() < 1e-12 {
            return self.values[j0.rem_euclid(n) as usize];
        }
        // Taper width from balancing the truncation and taper errors for
        // functions with bandwidth well below Nyquist.
        let m = SINC_NEIGHBOURS as f64;
        let r2 = m / (PI - 0.6);
        let mut acc = Complex64::new(0.0, 0.0);
        for j in (j0 - SINC_NEIGHBOURS)..=(j0 + SINC_NEIGHBOURS) {
            let t = s - j as f64;
            let w = (PI * t).sin() / (PI * t) * (-t * t / (2.0 * r2)).exp();
            acc += self.values[j.rem_euclid(n) as usize] * w;
        }
        acc
    }

    /// Largest DFT coefficient in the top eighth of the band, relative.
    pub fn nyquist_content(&self) -> f64 {
        let n = self.grid.points;
        let mut buf = self.values.clone();
        fft_in_place(&mut buf, false);
        let max = buf.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if max == 0.0 {
            return 0.0;
        }
        let lo = n / 2 - n / 8;
        buf.iter()
            .enumerate()
            .filter(|(k, _)| {
                let f = if *k <= n / 2 { *k } else { n - *k };
                f >= lo
            })
            .map(|(_, c)| c.norm())
            .fold(0.0, f64::max)
            / max
    }
}

fn flip(p: Parity) -> Parity {
    match p {
        Parity::Even => Parity::Odd,
        Parity::Odd => Parity::Even,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_geometry() {
        let g = Grid::default();
        assert_eq!(g.step(), 1.0 / 128.0);
        assert_eq!(g.x(1024), 0.0);
        assert_eq!(g.mirror(1024), 1024);
        assert_eq!(g.x(g.mirror(1000)), -g.x(1000));
        assert!(Grid::new(8.0, 2047).is_err());
    }

    #[test]
    fn gaussian_derivative_matches_closed_form() {
        let g = GridFunction::gaussian(Grid::default());
        let d2 = g.derivative(2);
        let err = g
            .grid()
            .xs()
            .zip(d2.values())
            .map(|(x, v)| (v.re - (4.0 * PI * PI * x * x - 2.0 * PI) * (-PI * x * x).exp()).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-9, "{err}");
        assert_eq!(g.derivative(1).parity(), Parity::Odd);
    }

    #[test]
    fn sinc_eval_off_grid() {
        let g = GridFunction::gaussian(Grid::default());
        for n in 0..40 {
            let x = (n as f64).sqrt();
            assert!((g.eval(x).re - (-PI * n as f64).exp()).abs() < 1e-12);
        }
    }

    #[test]
    fn tail_and_parity_checks() {
        let grid = Grid::default();
        let bad = grid.xs().map(|x| Complex64::new((-0.01 * x * x).exp(), 0.0)).collect();
        assert!(matches!(GridFunction::new(grid, Parity::Even, bad), Err(OscError::TailDecay { .. })));
        let odd_claim = GridFunction::gaussian(grid).into_values();
        assert!(matches!(GridFunction::new(grid, Parity::Odd, odd_claim), Err(OscError::Parity { .. })));
    }
}
