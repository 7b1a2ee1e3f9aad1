use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::fourier::{fourier, inverse_fourier};
use super::grid::{GridFunction, DEFAULT_TAIL_TOL};
use super::OscError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LieOp {
    X,
    Y,
    H,
    Kappa,
    P,
    M,
}

impl LieOp {
    pub const ALL: [LieOp; 6] = [LieOp::X, LieOp::Y, LieOp::H, LieOp::Kappa, LieOp::P, LieOp::M];
}

const I: Complex64 = Complex64::new(0.0, 1.0);

fn x_op(phi: &GridFunction) -> GridFunction {
    phi.map_with_x(|x, v| v * Complex64::new(0.0, -PI * x * x))
}

fn y_op(phi: &GridFunction) -> GridFunction {
    phi.derivative(2).scale(Complex64::new(0.0, -1.0 / (4.0 * PI)))
}

fn h_op(phi: &GridFunction) -> GridFunction {
    let d = phi.derivative(1);
    let xd = d.map_with_x(|x, v| v * x);
    GridFunction::raw(phi.grid(), phi.parity(), xd.values().iter().zip(phi.values()).map(|(a, b)| a + b * 0.5).collect())
}

fn combine(parts: &[(Complex64, &GridFunction)]) -> GridFunction {
    let first = parts[0].1;
    let mut values = vec![Complex64::new(0.0, 0.0); first.values().len()];
    for (c, f) in parts {
        for (acc, v) in values.iter_mut().zip(f.values()) {
            *acc += c * v;
        }
    }
    GridFunction::raw(first.grid(), first.parity(), values)
}

fn apply_unchecked(op: LieOp, phi: &GridFunction) -> GridFunction {
    let half = Complex64::new(0.5, 0.0);
    let one = Complex64::new(1.0, 0.0);
    match op {
        LieOp::X => x_op(phi),
        LieOp::Y => y_op(phi),
        LieOp::H => h_op(phi),
        // κ = i(X − Y)
        LieOp::Kappa => combine(&[(I, &x_op(phi)), (-I, &y_op(phi))]),
        // 2p = H − i(X+Y), 2m = H + i(X+Y)
        LieOp::P => combine(&[(half, &h_op(phi)), (-I * half, &x_op(phi)), (-I * half, &y_op(phi))]),
        LieOp::M => combine(&[(half * one, &h_op(phi)), (I * half, &x_op(phi)), (I * half, &y_op(phi))]),
    }
}

/// Apply a Lie algebra element; the output must still decay on the grid.
pub fn act_lie(op: LieOp, phi: &GridFunction) -> Result<GridFunction, OscError> {
    let out = apply_unchecked(op, phi);
    out.check_tail_scaled(DEFAULT_TAIL_TOL, phi.sup_norm())?;
    Ok(out)
}

/// Apply a word, rightmost letter first. The tail is checked once, against
/// the input's scale, so intermediates that vanish (mψ₀) are fine.
pub fn act_lie_word(word: &[LieOp], phi: &GridFunction) -> Result<GridFunction, OscError> {
    let mut out = phi.clone();
    for &op in word.iter().rev() {
        out = apply_unchecked(op, &out);
    }
    out.check_tail_scaled(DEFAULT_TAIL_TOL, phi.sup_norm())?;
    Ok(out)
}

/// [a, b]φ = a(bφ) − b(aφ).
pub fn commutator(a: LieOp, b: LieOp, phi: &GridFunction) -> Result<GridFunction, OscError> {
    act_lie_word(&[a, b], phi)?.sub(&act_lie_word(&[b, a], phi)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Unipotent {
    /// ẽφ(x) = e^{−2πix²}φ(x)
    ETilde,
    /// f̃ = σẽσ⁻¹
    FTilde,
}

pub fn act_unipotent(which: Unipotent, phi: &GridFunction) -> Result<GridFunction, OscError> {
    act_unipotent_pow(which, 1, phi)
}

/// ẽ^k or f̃^k for any integer k.
pub fn act_unipotent_pow(which: Unipotent, k: i32, phi: &GridFunction) -> Result<GridFunction, OscError> {
    let chirp = |f: &GridFunction| f.map_with_x(|x, v| v * Complex64::from_polar(1.0, -2.0 * PI * k as f64 * x * x));
    match which {
        Unipotent::ETilde => {
            let out = chirp(phi);
            out.check_tail(DEFAULT_TAIL_TOL)?;
            Ok(out)
        }
        Unipotent::FTilde => fourier(&chirp(&inverse_fourier(phi)?)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CasimirForm {
    /// H²/2 + XY + YX
    Hxy,
    /// κ²/2 + pm + mp
    KappaSym,
    /// κ²/2 + κ + 2mp
    KappaMp,
    /// κ²/2 − κ + 2pm
    KappaPm,
}

impl CasimirForm {
    pub const ALL: [CasimirForm; 4] = [CasimirForm::Hxy, CasimirForm::KappaSym, CasimirForm::KappaMp, CasimirForm::KappaPm];
}

pub fn casimir_apply(phi: &GridFunction) -> Result<GridFunction, OscError> {
    casimir_apply_form(CasimirForm::Hxy, phi)
}

pub fn casimir_apply_form(form: CasimirForm, phi: &GridFunction) -> Result<GridFunction, OscError> {
    let a = |op, f: &GridFunction| act_lie(op, f);
    let half = Complex64::new(0.5, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let two = Complex64::new(2.0, 0.0);
    let out = match form {
        CasimirForm::Hxy => {
            let hh = a(LieOp::H, &a(LieOp::H, phi)?)?;
            let xy = a(LieOp::X, &a(LieOp::Y, phi)?)?;
            let yx = a(LieOp::Y, &a(LieOp::X, phi)?)?;
            combine(&[(half, &hh), (one, &xy), (one, &yx)])
        }
        CasimirForm::KappaSym => {
            let k = a(LieOp::Kappa, phi)?;
            let kk = a(LieOp::Kappa, &k)?;
            let pm = a(LieOp::P, &a(LieOp::M, phi)?)?;
            let mp = a(LieOp::M, &a(LieOp::P, phi)?)?;
            combine(&[(half, &kk), (one, &pm), (one, &mp)])
        }
        CasimirForm::KappaMp => {
            let k = a(LieOp::Kappa, phi)?;
            let kk = a(LieOp::Kappa, &k)?;
            let mp = a(LieOp::M, &a(LieOp::P, phi)?)?;
            combine(&[(half, &kk), (one, &k), (two, &mp)])
        }
        CasimirForm::KappaPm => {
            let k = a(LieOp::Kappa, phi)?;
            let kk = a(LieOp::Kappa, &k)?;
            let pm = a(LieOp::P, &a(LieOp::M, phi)?)?;
            combine(&[(half, &kk), (-one, &k), (two, &pm)])
        }
    };
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oscillator::{hermite_basis_function, Grid, Parity};

    fn rel(a: &GridFunction, b: &GridFunction) -> f64 {
        a.sub(b).unwrap().l2_norm() / b.l2_norm().max(1e-300)
    }

    #[test]
    fn kappa_on_gaussian() {
        let g = GridFunction::gaussian(Grid::default());
        let k = act_lie(LieOp::Kappa, &g).unwrap();
        assert!(rel(&k, &g.scale(Complex64::new(0.5, 0.0))) < 1e-10);
    }

    #[test]
    fn x_vanishes_at_origin() {
        let g = GridFunction::gaussian(Grid::default());
        let x = act_lie(LieOp::X, &g).unwrap();
        assert_eq!(x.values()[1024], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn h_on_gaussian_closed_form() {
        let grid = Grid::default();
        let g = GridFunction::gaussian(grid);
        let h = act_lie(LieOp::H, &g).unwrap();
        let oracle = GridFunction::from_fn(grid, Parity::Even, |x| Complex64::new((0.5 - 2.0 * PI * x * x) * (-PI * x * x).exp(), 0.0)).unwrap();
        assert!(rel(&h, &oracle) < 1e-10);
    }

    #[test]
    fn raising_and_lowering_move_kappa_weight() {
        let grid = Grid::default();
        let psi2 = hermite_basis_function(grid, 2).unwrap();
        let up = act_lie(LieOp::P, &psi2).unwrap();
        let psi4 = hermite_basis_function(grid, 4).unwrap();
        // p ψ_n is a multiple of ψ_{n+2}
        let c = psi4.inner(&up);
        assert!(rel(&up, &psi4.scale(c)) < 1e-9);
        let down = act_lie(LieOp::M, &GridFunction::gaussian(grid)).unwrap();
        assert!(down.l2_norm() < 1e-9);
    }

    #[test]
    fn fourier_conjugates_x_to_minus_y() {
        let grid = Grid::default();
        let phi = hermite_basis_function(grid, 6).unwrap();
        let lhs = fourier(&act_lie(LieOp::X, &phi).unwrap()).unwrap();
        let rhs = act_lie(LieOp::Y, &fourier(&phi).unwrap()).unwrap();
        let sum = lhs.add(&rhs).unwrap().l2_norm() / phi.l2_norm();
        assert!(sum < 1e-9);
        // the "+Y" reading misses by exactly twice ‖σXφ‖
        let diff = lhs.sub(&rhs).unwrap().l2_norm();
        assert!((diff - 2.0 * lhs.l2_norm()).abs() < 1e-8 * lhs.l2_norm());
    }

    #[test]
    fn unipotent_identities() {
        let grid = Grid::default();
        let g = GridFunction::gaussian(grid);
        assert_eq!(act_unipotent_pow(Unipotent::ETilde, 0, &g).unwrap(), g);
        let f = act_unipotent(Unipotent::FTilde, &g).unwrap();
        let c = Complex64::new(1.0, 2.0);
        let oracle = GridFunction::from_fn(grid, Parity::Even, |x| c.powf(-0.5) * (-PI * x * x / c).exp()).unwrap();
        assert!(f.sub(&oracle).unwrap().sup_norm() < 1e-12);
        let back = act_unipotent_pow(Unipotent::FTilde, -1, &f).unwrap();
        assert!(back.sub(&g).unwrap().sup_norm() < 1e-12);
    }
}
