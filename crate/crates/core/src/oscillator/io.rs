//! JSON layouts: split real/imaginary arrays, grid stored as (L, N).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::{Grid, GridFunction, Parity};
use super::hermite::HermiteCoefficients;
use super::sampling::SampleVector;
use super::OscError;

fn split(v: &[Complex64]) -> (Vec<f64>, Vec<f64>) {
    v.iter().map(|z| (z.re, z.im)).unzip()
}

fn join(re: &[f64], im: &[f64], expected: usize) -> Result<Vec<Complex64>, OscError> {
    if re.len() != expected || im.len() != expected {
        return Err(OscError::LengthMismatch { expected, got: re.len().min(im.len()) });
    }
    Ok(re.iter().zip(im).map(|(&r, &i)| Complex64::new(r, i)).collect())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GridFunctionFile {
    #[serde(rename = "L")]
    pub half_width: f64,
    #[serde(rename = "N")]
    pub points: usize,
    pub parity: Parity,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl From<GridFunction> for GridFunctionFile {
    fn from(f: GridFunction) -> Self {
        let grid = f.grid();
        let parity = f.parity();
        let (re, im) = split(f.values());
        Self { half_width: grid.half_width, points: grid.points, parity, re, im }
    }
}

impl TryFrom<GridFunctionFile> for GridFunction {
    type Error = OscError;
    fn try_from(f: GridFunctionFile) -> Result<Self, OscError> {
        let grid = Grid::new(f.half_width, f.points)?;
        GridFunction::new(grid, f.parity, join(&f.re, &f.im, f.points)?)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SampleVectorFile {
    pub n_max: usize,
    pub a_re: Vec<f64>,
    pub a_im: Vec<f64>,
    pub b_re: Vec<f64>,
    pub b_im: Vec<f64>,
}

impl From<SampleVector> for SampleVectorFile {
    fn from(s: SampleVector) -> Self {
        let (a_re, a_im) = split(&s.a);
        let (b_re, b_im) = split(&s.b);
        Self { n_max: s.n_max, a_re, a_im, b_re, b_im }
    }
}

impl TryFrom<SampleVectorFile> for SampleVector {
    type Error = OscError;
    fn try_from(f: SampleVectorFile) -> Result<Self, OscError> {
        Ok(Self { n_max: f.n_max, a: join(&f.a_re, &f.a_im, f.n_max + 1)?, b: join(&f.b_re, &f.b_im, f.n_max + 1)? })
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HermiteFile {
    pub parity: Parity,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl From<HermiteCoefficients> for HermiteFile {
    fn from(c: HermiteCoefficients) -> Self {
        let (re, im) = split(&c.coeffs);
        Self { parity: c.parity, re, im }
    }
}

impl TryFrom<HermiteFile> for HermiteCoefficients {
    type Error = OscError;
    fn try_from(f: HermiteFile) -> Result<Self, OscError> {
        Ok(Self { parity: f.parity, coeffs: join(&f.re, &f.im, f.re.len())? })
    }
}
