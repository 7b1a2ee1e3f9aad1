//! H⁰ and H¹ of the free group ⟨e, f⟩ on a finite-dimensional module, from
//! the Mayer–Vietoris sequence of the two cyclic subgroups.

use nalgebra::{DMatrix, DVector};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{columns, identity, intersection_dim, inverse, Scalar};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CohomError {
    #[error("matrices must be square of size {dim}")]
    Shape { dim: usize },
    #[error("rho_{0} is not invertible")]
    Singular(&'static str),
    #[error("cocycle value has length {got}, expected {dim}")]
    VectorLength { dim: usize, got: usize },
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroupRep<T: Scalar> {
    rho_e: DMatrix<T>,
    rho_f: DMatrix<T>,
    inv_e: DMatrix<T>,
    inv_f: DMatrix<T>,
}

impl<T: Scalar> GroupRep<T> {
    pub fn new(rho_e: DMatrix<T>, rho_f: DMatrix<T>) -> Result<Self, CohomError> {
        let dim = rho_e.nrows();
        if !rho_e.is_square() || rho_f.shape() != (dim, dim) {
            return Err(CohomError::Shape { dim });
        }
        let inv_e = inverse(&rho_e).ok_or(CohomError::Singular("e"))?;
        let inv_f = inverse(&rho_f).ok_or(CohomError::Singular("f"))?;
        Ok(Self { rho_e, rho_f, inv_e, inv_f })
    }

    pub fn trivial(dim: usize) -> Self {
        Self::new(identity(dim), identity(dim)).expect("identity is invertible")
    }

    pub fn dim(&self) -> usize {
        self.rho_e.nrows()
    }

    pub fn rho_e(&self) -> &DMatrix<T> {
        &self.rho_e
    }

    pub fn rho_f(&self) -> &DMatrix<T> {
        &self.rho_f
    }

    pub fn matrix(&self, g: Generator) -> &DMatrix<T> {
        match g {
            Generator::E => &self.rho_e,
            Generator::F => &self.rho_f,
            Generator::EInv => &self.inv_e,
            Generator::FInv => &self.inv_f,
        }
    }

    /// (S ρ_e S⁻¹, S ρ_f S⁻¹).
    pub fn conjugate(&self, s: &DMatrix<T>) -> Option<Self> {
        let si = inverse(s)?;
        Self::new(s * &self.rho_e * &si, s * &self.rho_f * &si).ok()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Generator {
    #[serde(rename = "e")]
    E,
    #[serde(rename = "f")]
    F,
    #[serde(rename = "e^-1")]
    EInv,
    #[serde(rename = "f^-1")]
    FInv,
}

impl std::str::FromStr for Generator {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "e" => Ok(Generator::E),
            "f" => Ok(Generator::F),
            "E" | "e^-1" | "e-" => Ok(Generator::EInv),
            "F" | "f^-1" | "f-" => Ok(Generator::FInv),
            _ => Err(format!("unknown generator {s:?}")),
        }
    }
}

/// Basis of ker(M − I).
pub fn fixed_space<T: Scalar>(m: &DMatrix<T>) -> Vec<DVector<T>> {
    T::nullspace(&(m - identity::<T>(m.nrows())))
}

/// dim V/(M − I)V.
pub fn coinvariant_dim<T: Scalar>(m: &DMatrix<T>) -> usize {
    m.nrows() - T::rank(&(m - identity::<T>(m.nrows())))
}

#[derive(Clone, Debug, PartialEq)]
pub struct CohomologyReport<T: Scalar> {
    pub h0: usize,
    pub h1: usize,
    pub fixed_e: Vec<DVector<T>>,
    pub fixed_f: Vec<DVector<T>>,
    pub coinv_e: usize,
    pub coinv_f: usize,
    pub coker_dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologySummary {
    pub dim: usize,
    pub h0: usize,
    pub h1: usize,
    pub fixed_e_dim: usize,
    pub fixed_f_dim: usize,
    pub coinv_e: usize,
    pub coinv_f: usize,
    pub coker_dim: usize,
    pub simplification_applies: bool,
}

impl<T: Scalar> CohomologyReport<T> {
    pub fn summary(&self, dim: usize) -> CohomologySummary {
        CohomologySummary {
            dim,
            h0: self.h0,
            h1: self.h1,
            fixed_e_dim: self.fixed_e.len(),
            fixed_f_dim: self.fixed_f.len(),
            coinv_e: self.coinv_e,
            coinv_f: self.coinv_f,
            coker_dim: self.coker_dim,
            simplification_applies: self.coinv_e == 0 && self.coinv_f == 0,
        }
    }
}

/// 0 → H⁰(Γ) → V^e ⊕ V^f → V → H¹(Γ) → V_e ⊕ V_f → 0, with the difference map
/// (u, v) ↦ u − v in the middle.
pub fn mv_cohomology<T: Scalar>(rep: &GroupRep<T>) -> CohomologyReport<T> {
    let dim = rep.dim();
    let fixed_e = fixed_space(&rep.rho_e);
    let fixed_f = fixed_space(&rep.rho_f);
    let ue = columns(dim, &fixed_e);
    let uf = columns(dim, &fixed_f);
    let h0 = intersection_dim(&ue, &uf);
    let sum_dim = fixed_e.len() + fixed_f.len() - h0;
    let coker_dim = dim - sum_dim;
    let coinv_e = coinvariant_dim(&rep.rho_e);
    let coinv_f = coinvariant_dim(&rep.rho_f);
    CohomologyReport { h0, h1: coker_dim + coinv_e + coinv_f, fixed_e, fixed_f, coinv_e, coinv_f, coker_dim }
}

/// True when both coinvariant spaces vanish, so H¹ is the cokernel of the
/// difference map alone.
pub fn kernel_cokernel_shortcut_applies<T: Scalar>(rep: &GroupRep<T>) -> bool {
    coinvariant_dim(&rep.rho_e) == 0 && coinvariant_dim(&rep.rho_f) == 0
}

/// Independent computation from the standard complex of the free group:
/// 1-cocycles are all pairs (j(e), j(f)) ∈ V², coboundaries are the image of
/// v ↦ ((ρe − 1)v, (ρf − 1)v). So h0 = dim ker and h1 = 2d − rank.
pub fn bar_resolution_dims<T: Scalar>(rep: &GroupRep<T>) -> (usize, usize) {
    let d = rep.dim();
    let id = identity::<T>(d);
    let mut delta = DMatrix::from_element(2 * d, d, T::zero());
    delta.view_mut((0, 0), (d, d)).copy_from(&(&rep.rho_e - &id));
    delta.view_mut((d, 0), (d, d)).copy_from(&(&rep.rho_f - &id));
    let r = T::rank(&delta);
    (d - r, 2 * d - r)
}

/// Evaluate the 1-cocycle with j(e) = c_e, j(f) = c_f on a word, using
/// j(gh) = j(g) + g·j(h) and j(g⁻¹) = −g⁻¹j(g).
pub fn cocycle_verify<T: Scalar>(
    rep: &GroupRep<T>,
    c_e: &DVector<T>,
    c_f: &DVector<T>,
    word: &[Generator],
) -> Result<DVector<T>, CohomError> {
    let d = rep.dim();
    for c in [c_e, c_f] {
        if c.len() != d {
            return Err(CohomError::VectorLength { dim: d, got: c.len() });
        }
    }
    let j = |g: Generator| -> DVector<T> {
        match g {
            Generator::E => c_e.clone(),
            Generator::F => c_f.clone(),
            Generator::EInv => -(&rep.inv_e * c_e),
            Generator::FInv => -(&rep.inv_f * c_f),
        }
    };
    let mut acc = DVector::from_element(d, T::zero());
    let mut prefix = identity::<T>(d);
    for &g in word {
        acc += &prefix * j(g);
        prefix *= rep.matrix(g);
    }
    Ok(acc)
}

/// ρ(word) as a matrix.
pub fn word_matrix<T: Scalar>(rep: &GroupRep<T>, word: &[Generator]) -> DMatrix<T> {
    word.iter().fold(identity::<T>(rep.dim()), |acc, &g| acc * rep.matrix(g))
}

/// One matrix entry in a representation file: an integer, a rational string
/// such as "-3/4", or a float.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Int(i64),
    Text(String),
    Float(f64),
}

/// `{"dim": d, "rho_e": [[...]], "rho_f": [[...]]}`, row-major.
#[derive(Clone, Debug, Deserialize)]
pub struct RepFile {
    pub dim: usize,
    pub rho_e: Vec<Vec<Entry>>,
    pub rho_f: Vec<Vec<Entry>>,
}

/// A parsed representation: exact when every entry is an integer or rational.
#[derive(Clone, Debug)]
pub enum AnyRep {
    Exact(GroupRep<BigRational>),
    Float(GroupRep<f64>),
}

impl RepFile {
    fn matrix<T: Scalar>(&self, rows: &[Vec<Entry>], conv: &dyn Fn(&Entry) -> Option<T>) -> Result<DMatrix<T>, RepFileError> {
        if rows.len() != self.dim || rows.iter().any(|r| r.len() != self.dim) {
            return Err(RepFileError::Shape(self.dim));
        }
        let mut out = DMatrix::from_element(self.dim, self.dim, T::zero());
        for (i, r) in rows.iter().enumerate() {
            for (j, e) in r.iter().enumerate() {
                out[(i, j)] = conv(e).ok_or_else(|| RepFileError::Entry(format!("{e:?}")))?;
            }
        }
        Ok(out)
    }

    pub fn into_rep(self) -> Result<AnyRep, RepFileError> {
        if self.dim == 0 {
            return Err(RepFileError::Shape(0));
        }
        let exact = self.rho_e.iter().chain(&self.rho_f).flatten().all(|e| !matches!(e, Entry::Float(_)));
        if exact {
            let conv = |e: &Entry| -> Option<BigRational> {
                match e {
                    Entry::Int(v) => Some(BigRational::from_integer((*v).into())),
                    Entry::Text(s) => s.trim().parse::<BigRational>().ok(),
                    Entry::Float(_) => None,
                }
            };
            let (a, b) = (self.matrix(&self.rho_e, &conv)?, self.matrix(&self.rho_f, &conv)?);
            Ok(AnyRep::Exact(GroupRep::new(a, b)?))
        } else {
            let conv = |e: &Entry| -> Option<f64> {
                match e {
                    Entry::Int(v) => Some(*v as f64),
                    Entry::Float(v) => Some(*v),
                    Entry::Text(s) => s.trim().parse::<BigRational>().ok().and_then(|r| r.to_f64()),
                }
            };
            let (a, b) = (self.matrix(&self.rho_e, &conv)?, self.matrix(&self.rho_f, &conv)?);
            Ok(AnyRep::Float(GroupRep::new(a, b)?))
        }
    }
}

#[derive(Debug, Error)]
pub enum RepFileError {
    #[error("expected {0}x{0} matrices")]
    Shape(usize),
    #[error("unreadable matrix entry {0}")]
    Entry(String),
    #[error(transparent)]
    Rep(#[from] CohomError),
}

impl AnyRep {
    pub fn dim(&self) -> usize {
        match self {
            AnyRep::Exact(r) => r.dim(),
            AnyRep::Float(r) => r.dim(),
        }
    }

    pub fn summary(&self) -> CohomologySummary {
        match self {
            AnyRep::Exact(r) => mv_cohomology(r).summary(r.dim()),
            AnyRep::Float(r) => mv_cohomology(r).summary(r.dim()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    type Q = BigRational;

    fn q(n: i64) -> Q {
        Q::from_integer(n.into())
    }

    fn mat(rows: usize, v: &[i64]) -> DMatrix<Q> {
        DMatrix::from_row_slice(rows, rows, &v.iter().map(|&x| q(x)).collect::<Vec<_>>())
    }

    #[test]
    fn fixed_space_examples() {
        assert_eq!(fixed_space(&identity::<Q>(3)).len(), 3);
        assert_eq!(fixed_space(&mat(2, &[2, 0, 0, 3])).len(), 0);
        // companion matrix of (t−1)(t−2) = t² − 3t + 2
        assert_eq!(fixed_space(&mat(2, &[0, -2, 1, 3])).len(), 1);
    }

    #[test]
    fn trivial_and_identity_reps() {
        let r = mv_cohomology(&GroupRep::<Q>::trivial(1));
        assert_eq!((r.h0, r.h1), (1, 2));
        let r = mv_cohomology(&GroupRep::<Q>::trivial(4));
        assert_eq!((r.h0, r.h1), (4, 8));
        assert!(!kernel_cokernel_shortcut_applies(&GroupRep::<Q>::trivial(2)));
    }

    #[test]
    fn unipotent_pair() {
        let rep = GroupRep::new(mat(2, &[1, 1, 0, 1]), mat(2, &[1, 0, 1, 1])).unwrap();
        assert!(!kernel_cokernel_shortcut_applies(&rep));
        assert_eq!(coinvariant_dim(rep.rho_e()), 1);
        let r = mv_cohomology(&rep);
        assert_eq!((r.h0, r.h1), bar_resolution_dims(&rep));
    }

    #[test]
    fn eigenvalue_one_free_pair() {
        let rep = GroupRep::new(mat(2, &[2, 1, 0, 3]), mat(2, &[-1, 0, 4, 5])).unwrap();
        assert!(kernel_cokernel_shortcut_applies(&rep));
        let r = mv_cohomology(&rep);
        assert_eq!((r.h0, r.h1), (0, 2));
        assert_eq!(r.h1, r.coker_dim);
    }

    #[test]
    fn singular_matrix_rejected() {
        assert_eq!(GroupRep::new(mat(2, &[1, 2, 2, 4]), identity::<Q>(2)).unwrap_err(), CohomError::Singular("e"));
    }

    #[test]
    fn cocycle_basics() {
        use Generator::*;
        let rep = GroupRep::new(mat(2, &[1, 1, 0, 1]), mat(2, &[2, 0, 1, 1])).unwrap();
        let ce = DVector::from_vec(vec![q(1), q(2)]);
        let cf = DVector::from_vec(vec![q(-3), q(5)]);
        assert!(cocycle_verify(&rep, &ce, &cf, &[]).unwrap().iter().all(|x| x.is_zero()));
        assert!(cocycle_verify(&rep, &ce, &cf, &[E, EInv]).unwrap().iter().all(|x| x.is_zero()));
        assert!(cocycle_verify(&rep, &ce, &cf, &[FInv, F]).unwrap().iter().all(|x| x.is_zero()));
        // coboundary of v evaluates to (ρ(w) − 1)v
        let v = DVector::from_vec(vec![q(7), q(-1)]);
        let id = identity::<Q>(2);
        let be = (rep.rho_e() - &id) * &v;
        let bf = (rep.rho_f() - &id) * &v;
        let w = [E, F, FInv, E, F, EInv, F];
        let got = cocycle_verify(&rep, &be, &bf, &w).unwrap();
        assert_eq!(got, (word_matrix(&rep, &w) - id) * v);
    }

    #[test]
    fn rep_file_parsing() {
        let f: RepFile = serde_json::from_str(r#"{"dim":2,"rho_e":[[1,"1/2"],[0,1]],"rho_f":[[1,0],[1,1]]}"#).unwrap();
        let rep = f.into_rep().unwrap();
        assert!(matches!(rep, AnyRep::Exact(_)));
        assert_eq!(rep.summary().h1 as i64 - rep.summary().h0 as i64, 2);
        let f: RepFile = serde_json::from_str(r#"{"dim":1,"rho_e":[[0.5]],"rho_f":[[2]]}"#).unwrap();
        assert!(matches!(f.into_rep().unwrap(), AnyRep::Float(_)));
        let f: RepFile = serde_json::from_str(r#"{"dim":2,"rho_e":[[1]],"rho_f":[[1]]}"#).unwrap();
        assert!(matches!(f.into_rep(), Err(RepFileError::Shape(2))));
    }

    #[test]
    fn float_mode_matches_exact() {
        let rep = GroupRep::new(
            DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 0.0, 1.0]),
            DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 1.0, 1.0]),
        )
        .unwrap();
        let r = mv_cohomology(&rep);
        assert_eq!((r.h0, r.h1), bar_resolution_dims(&rep));
    }
}
