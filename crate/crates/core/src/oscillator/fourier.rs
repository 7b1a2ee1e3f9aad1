//! Fourier transform from the grid to itself.
//!
//! F_k = h Σ_j f_j exp(∓2πi x_j ξ_k) with x_j ξ_k = L² − Lh(j+k) + h²jk and
//! jk = (j² + k² − (k−j)²)/2, which turns the sum into a chirp convolution.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::grid::{fft_in_place, GridFunction};
use super::OscError;

/// Relative budget for spectral content near the grid Nyquist frequency.
pub const ALIAS_BUDGET: f64 = 1e-9;

pub fn fourier(phi: &GridFunction) -> Result<GridFunction, OscError> {
    transform(phi, -1.0)
}

pub fn inverse_fourier(phi: &GridFunction) -> Result<GridFunction, OscError> {
    transform(phi, 1.0)
}

fn transform(phi: &GridFunction, sign: f64) -> Result<GridFunction, OscError> {
    let content = phi.nyquist_content();
    if content > ALIAS_BUDGET {
        return Err(OscError::Aliasing { content, budget: ALIAS_BUDGET });
    }
    let out = chirp_transform(phi, sign);
    out.check_tail(super::DEFAULT_TAIL_TOL)?;
    Ok(out)
}

pub(crate) fn chirp_transform(phi: &GridFunction, sign: f64) -> GridFunction {
    let grid = phi.grid();
    let n = grid.points;
    let l = grid.half_width;
    let h = grid.step();
    let m = (2 * n - 1).next_power_of_two();
    let phase = |t: f64| Complex64::from_polar(1.0, PI * sign * t);

    let mut u = vec![Complex64::new(0.0, 0.0); m];
    for (j, (slot, v)) in u.iter_mut().zip(phi.values()).enumerate() {
        let jf = j as f64;
        *slot = v * phase(-2.0 * l * h * jf + h * h * jf * jf);
    }
    let mut kern = vec![Complex64::new(0.0, 0.0); m];
    for d in 0..n {
        let w = phase(-h * h * (d * d) as f64);
        kern[d] = w;
        if d > 0 {
            kern[m - d] = w;
        }
    }
    fft_in_place(&mut u, false);
    fft_in_place(&mut kern, false);
    for (a, b) in u.iter_mut().zip(&kern) {
        *a *= b;
    }
    fft_in_place(&mut u, true);
    let pre = phase(2.0 * l * l) * (h / m as f64);
    let values = (0..n)
        .map(|k| {
            let kf = k as f64;
            u[k] * pre * phase(-2.0 * l * h * kf + h * h * kf * kf)
        })
        .collect();
    GridFunction::raw(grid, phi.parity(), values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oscillator::{Grid, Parity};

    #[test]
    fn gaussian_is_self_dual() {
        let g = GridFunction::gaussian(Grid::default());
        let gh = fourier(&g).unwrap();
        let err = g.values().iter().zip(gh.values()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-12, "{err}");
    }

    #[test]
    fn shifted_gaussian_matches_direct_sum() {
        // Direct O(N²) quadrature oracle at a few output points.
        let grid = Grid::default();
        let f = GridFunction::from_fn(grid, Parity::Even, |x| {
            Complex64::new((-PI * (x - 1.3).powi(2)).exp() + (-PI * (x + 1.3).powi(2)).exp(), 0.0)
        })
        .unwrap();
        let fh = fourier(&f).unwrap();
        for k in [0usize, 700, 1024, 1300, 1900] {
            let xi = grid.x(k);
            let direct: Complex64 = grid
                .xs()
                .zip(f.values())
                .map(|(x, v)| v * Complex64::from_polar(1.0, -2.0 * PI * x * xi))
                .sum::<Complex64>()
                * grid.step();
            assert!((direct - fh.values()[k]).norm() < 1e-12);
        }
    }

    #[test]
    fn inverse_undoes_forward() {
        let grid = Grid::default();
        let f = GridFunction::from_fn(grid, Parity::Odd, |x| Complex64::new(x * (-PI * x * x).exp(), 0.3 * x.powi(3) * (-2.0 * x * x).exp())).unwrap();
        let back = inverse_fourier(&fourier(&f).unwrap()).unwrap();
        let err = f.sub(&back).unwrap().sup_norm();
        assert!(err < 1e-12);
    }

    #[test]
    fn under_resolved_input_is_rejected() {
        let grid = Grid::new(8.0, 256).unwrap();
        let f = GridFunction::from_fn(grid, Parity::Even, |x| Complex64::new((-PI * x * x).exp() * (40.0 * x).cos(), 0.0)).unwrap();
        assert!(matches!(fourier(&f), Err(OscError::Aliasing { .. })));
    }
}
