//! Exact calculator for (𝔤,K)-modules of finite covers of SL₂(ℝ).
//!
//! Weights live in q⁻¹ℤ and every quantity is a `Rational64`. Descriptors are
//! compared up to isomorphism: a highest-weight module with integral weight
//! ζ ≥ 0 *is* the finite-dimensional module of dimension ζ+1, and likewise
//! for lowest weights ζ ≤ 0.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use nalgebra::DMatrix;
use num_integer::Roots;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GkError {
    #[error("cover degree must be at least 1")]
    ZeroCover,
    #[error("cannot parse weight {0:?}; expected an integer or n/q")]
    Parse(String),
    #[error("{0} is not an irreducible infinite-dimensional module")]
    NotInfiniteIrreducible(String),
    #[error("{0} is reducible")]
    Reducible(String),
    #[error("window start {start} is not in the weight coset {coset} + 2Z")]
    LatticeMismatch { start: KWeight, coset: KWeight },
    #[error("ladder window needs at least one weight")]
    EmptyWindow,
}

/// A K-type ζ ∈ q⁻¹ℤ, stored as `numerator / cover_degree`.
#[derive(Clone, Copy, Debug)]
pub struct KWeight {
    numerator: i64,
    cover_degree: u32,
}

impl KWeight {
    pub fn new(numerator: i64, cover_degree: u32) -> Result<Self, GkError> {
        if cover_degree == 0 {
            return Err(GkError::ZeroCover);
        }
        Ok(Self { numerator, cover_degree })
    }

    pub fn integer(n: i64) -> Self {
        Self { numerator: n, cover_degree: 1 }
    }

    /// Uses the reduced denominator as the cover degree.
    pub fn from_rational(r: Rational64) -> Self {
        Self { numerator: *r.numer(), cover_degree: *r.denom() as u32 }
    }

    pub fn numerator(&self) -> i64 {
        self.numerator
    }

    pub fn cover_degree(&self) -> u32 {
        self.cover_degree
    }

    pub fn value(&self) -> Rational64 {
        Rational64::new(self.numerator, self.cover_degree as i64)
    }

    /// ζ + k, staying on the same q⁻¹ℤ lattice.
    pub fn shift(&self, k: i64) -> Self {
        Self { numerator: self.numerator + k * self.cover_degree as i64, cover_degree: self.cover_degree }
    }

    pub fn is_integral(&self) -> bool {
        self.value().is_integer()
    }

    /// Whether `other − self ∈ 2ℤ`.
    pub fn same_coset(&self, other: Rational64) -> bool {
        in_coset(other, self.value())
    }
}

fn in_coset(r: Rational64, base: Rational64) -> bool {
    let d = (r - base) / 2;
    d.is_integer()
}

impl PartialEq for KWeight {
    fn eq(&self, other: &Self) -> bool {
        self.numerator as i128 * other.cover_degree as i128
            == other.numerator as i128 * self.cover_degree as i128
    }
}

impl Eq for KWeight {}

impl Hash for KWeight {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.value().hash(state)
    }
}

impl fmt::Display for KWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

impl FromStr for KWeight {
    type Err = GkError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GkError::Parse(s.to_string());
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n: i64 = n.trim().parse().map_err(|_| bad())?;
                let d: u32 = d.trim().parse().map_err(|_| bad())?;
                KWeight::new(n, d)
            }
            None => Ok(KWeight::integer(s.parse().map_err(|_| bad())?)),
        }
    }
}

impl Serialize for KWeight {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Parse an integer or `n/d` rational.
pub fn parse_rational(s: &str) -> Result<Rational64, GkError> {
    let w: KWeight = s.parse()?;
    Ok(w.value())
}

#[derive(Clone, Copy, Debug)]
pub enum GkModule {
    LowestWeight(KWeight),
    HighestWeight(KWeight),
    DoublyInfinite { coset: KWeight, casimir: Rational64 },
    FiniteDim(u32),
}

impl fmt::Display for GkModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GkModule::LowestWeight(z) => write!(f, "LowestWeight({z})"),
            GkModule::HighestWeight(z) => write!(f, "HighestWeight({z})"),
            GkModule::DoublyInfinite { coset, casimir } => write!(f, "DoublyInfinite({coset} mod 2, C={casimir})"),
            GkModule::FiniteDim(d) => write!(f, "FiniteDim({d})"),
        }
    }
}

impl GkModule {
    /// Replace finite-dimensional highest/lowest weight descriptors by
    /// `FiniteDim` and reduce the coset representative into [0, 2).
    pub fn normalized(&self) -> GkModule {
        match *self {
            GkModule::HighestWeight(z) if z.is_integral() && !z.value().is_negative() => {
                GkModule::FiniteDim((z.value().to_integer() + 1) as u32)
            }
            GkModule::LowestWeight(z) if z.is_integral() && !z.value().is_positive() => {
                GkModule::FiniteDim((1 - z.value().to_integer()) as u32)
            }
            GkModule::DoublyInfinite { coset, casimir } => {
                let v = coset.value();
                let k = (v / 2).floor();
                GkModule::DoublyInfinite { coset: KWeight::from_rational(v - k * 2), casimir }
            }
            m => m,
        }
    }

    pub fn is_finite_dimensional(&self) -> bool {
        matches!(self.normalized(), GkModule::FiniteDim(_))
    }

    /// Irreducibility of the descriptor. Only a doubly infinite ladder can be
    /// reducible: it is iff some coupling ¼(2λ+1 − (ζ±1)²) vanishes on the coset.
    pub fn is_irreducible(&self) -> bool {
        match self.normalized() {
            GkModule::DoublyInfinite { coset, casimir } => {
                let disc = casimir * 2 + 1;
                match rational_sqrt(disc) {
                    None => true,
                    Some(xi) => !(coset.same_coset(xi + 1) || coset.same_coset(-xi + 1)),
                }
            }
            GkModule::FiniteDim(d) => d >= 1,
            _ => true,
        }
    }

    /// Whether ζ is a weight of the module.
    pub fn has_weight(&self, zeta: Rational64) -> bool {
        match self.normalized() {
            GkModule::LowestWeight(z) => z.same_coset(zeta) && zeta >= z.value(),
            GkModule::HighestWeight(z) => z.same_coset(zeta) && zeta <= z.value(),
            GkModule::DoublyInfinite { coset, .. } => coset.same_coset(zeta),
            GkModule::FiniteDim(d) => {
                let top = Rational64::from_integer(d as i64 - 1);
                in_coset(zeta, top) && zeta.abs() <= top
            }
        }
    }
}

impl PartialEq for GkModule {
    fn eq(&self, other: &Self) -> bool {
        use GkModule::*;
        match (self.normalized(), other.normalized()) {
            (LowestWeight(a), LowestWeight(b)) | (HighestWeight(a), HighestWeight(b)) => a == b,
            (DoublyInfinite { coset: a, casimir: x }, DoublyInfinite { coset: b, casimir: y }) => {
                a.same_coset(b.value()) && x == y
            }
            (FiniteDim(a), FiniteDim(b)) => a == b,
            _ => false,
        }
    }
}

fn rational_sqrt(r: Rational64) -> Option<Rational64> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    (n * n == *r.numer() && d * d == *r.denom()).then(|| Rational64::new(n, d))
}

pub fn casimir_eigenvalue(m: &GkModule) -> Rational64 {
    match *m {
        GkModule::LowestWeight(z) => {
            let z = z.value();
            z * (z - 2) / 2
        }
        GkModule::HighestWeight(z) => {
            let z = z.value();
            z * (z + 2) / 2
        }
        GkModule::DoublyInfinite { casimir, .. } => casimir,
        GkModule::FiniteDim(d) => {
            let d = Rational64::from_integer(d as i64);
            (d * d - 1) / 2
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Complement {
    pub module: GkModule,
    /// Set when the complement is finite-dimensional (integral lowest weight ≥ 2
    /// or highest weight ≤ −2).
    pub finite_dimensional: bool,
}

pub fn complementary_module(w: &GkModule) -> Result<Complement, GkError> {
    let w = w.normalized();
    let module = match w {
        GkModule::FiniteDim(_) => return Err(GkError::NotInfiniteIrreducible(w.to_string())),
        _ if !w.is_irreducible() => return Err(GkError::Reducible(w.to_string())),
        GkModule::LowestWeight(z) => GkModule::HighestWeight(z.shift(-2)),
        GkModule::HighestWeight(z) => GkModule::LowestWeight(z.shift(2)),
        d @ GkModule::DoublyInfinite { .. } => d,
    };
    let module = module.normalized();
    Ok(Complement { module, finite_dimensional: module.is_finite_dimensional() })
}

/// dim Ext¹(W, V) for irreducible W (infinite-dimensional) and V.
pub fn ext1_dim(w: &GkModule, v: &GkModule) -> Result<u32, GkError> {
    if !v.is_irreducible() {
        return Err(GkError::Reducible(v.to_string()));
    }
    let c = complementary_module(w)?;
    Ok(u32::from(c.module == *v))
}

/// Recompute dim Ext¹(W, V) from weight data on a ladder window.
///
/// For W of lowest weight ζ this is the Casimir-matched part of V_{ζ−2}/mV_ζ,
/// with m read off a rational realization of V; dually V_{ζ+2}/pV_ζ for
/// highest weight. A doubly infinite W only pairs with itself.
pub fn ext1_weight_criterion(w: &GkModule, v: &GkModule) -> Result<u32, GkError> {
    let w = w.normalized();
    if w.is_finite_dimensional() {
        return Err(GkError::NotInfiniteIrreducible(w.to_string()));
    }
    if !w.is_irreducible() {
        return Err(GkError::Reducible(w.to_string()));
    }
    if !v.is_irreducible() {
        return Err(GkError::Reducible(v.to_string()));
    }
    if casimir_eigenvalue(&w) != casimir_eigenvalue(v) {
        return Ok(0);
    }
    let (zeta, lowering) = match w {
        GkModule::LowestWeight(z) => (z, true),
        GkModule::HighestWeight(z) => (z, false),
        GkModule::DoublyInfinite { coset, .. } => {
            let same = matches!(v.normalized(), GkModule::DoublyInfinite { coset: c, .. } if c.same_coset(coset.value()));
            return Ok(u32::from(same));
        }
        GkModule::FiniteDim(_) => unreachable!(),
    };
    // Window of four weights ζ−4 … ζ+2 so both ζ and ζ∓2 are interior.
    let start = zeta.shift(-4);
    let (p, m, _) = module_ladder(v, start, 4);
    let zi = 2; // index of ζ
    let (target, op) = if lowering { (zi - 1, &m) } else { (zi + 1, &p) };
    let target_weight = start.value() + Rational64::from_integer(2 * target as i64);
    let dim_target = usize::from(v.has_weight(target_weight));
    let block = DMatrix::from_element(1, 1, op[(target, zi)]);
    let image = Rational64::rank(&block);
    Ok((dim_target - image.min(dim_target)) as u32)
}

/// Ladder matrices of a rational realization of an irreducible module:
/// p e_ζ = ¼(2λ+1 − (ζ+1)²) e_{ζ+2}, m e_ζ = e_{ζ−2}, zero outside the support.
pub fn module_ladder(
    v: &GkModule,
    start: KWeight,
    count: usize,
) -> (DMatrix<Rational64>, DMatrix<Rational64>, DMatrix<Rational64>) {
    let lam = casimir_eigenvalue(v);
    let weight = |i: usize| start.value() + Rational64::from_integer(2 * i as i64);
    let mut p = DMatrix::zeros(count, count);
    let mut m = DMatrix::zeros(count, count);
    let kappa = DMatrix::from_fn(count, count, |i, j| if i == j && v.has_weight(weight(i)) { weight(i) } else { Rational64::zero() });
    for i in 0..count {
        let z = weight(i);
        if !v.has_weight(z) {
            continue;
        }
        if i + 1 < count && v.has_weight(weight(i + 1)) {
            let c = lam * 2 + 1 - (z + 1) * (z + 1);
            p[(i + 1, i)] = c / 4;
        }
        if i >= 1 && v.has_weight(weight(i - 1)) {
            m[(i - 1, i)] = Rational64::one();
        }
    }
    (p, m, kappa)
}

/// Principal series with K-types ζ₀ + 2ℤ and Casimir (ξ²−1)/2.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PrincipalSeries {
    pub zeta0: KWeight,
    pub xi: Rational64,
}

impl PrincipalSeries {
    pub fn new(zeta0: KWeight, xi: Rational64) -> Self {
        Self { zeta0, xi }
    }

    pub fn casimir(&self) -> Rational64 {
        (self.xi * self.xi - 1) / 2
    }

    /// Coefficient of e_{ζ+2} in p e_ζ.
    pub fn raise_coeff(&self, zeta: Rational64) -> Rational64 {
        (zeta + 1 + self.xi) / 2
    }

    /// Coefficient of e_{ζ−2} in m e_ζ.
    pub fn lower_coeff(&self, zeta: Rational64) -> Rational64 {
        (-zeta + 1 + self.xi) / 2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CaseTag {
    A,
    B,
    C,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Irreducible,
    Sub,
    Quotient,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Factor {
    pub module: GkModule,
    pub role: Role,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompositionReport {
    pub case_tag: CaseTag,
    pub factors: Vec<Factor>,
    /// ξ = 0 in case C: the two discrete pieces meet with no finite quotient.
    pub degenerate: bool,
}

pub fn principal_series_structure(ps: &PrincipalSeries) -> CompositionReport {
    let one_xi = ps.xi + 1;
    let plus = ps.zeta0.same_coset(one_xi);
    let minus = ps.zeta0.same_coset(-one_xi);
    let w = |r: Rational64| KWeight::from_rational(r);
    let f = |module: GkModule, role| Factor { module: module.normalized(), role };
    let xi = ps.xi;
    match (plus, minus) {
        (false, false) => CompositionReport {
            case_tag: CaseTag::A,
            factors: vec![f(GkModule::DoublyInfinite { coset: ps.zeta0, casimir: ps.casimir() }, Role::Irreducible)],
            degenerate: false,
        },
        (true, false) => CompositionReport {
            case_tag: CaseTag::B,
            factors: vec![
                f(GkModule::LowestWeight(w(one_xi)), Role::Sub),
                f(GkModule::HighestWeight(w(xi - 1)), Role::Quotient),
            ],
            degenerate: false,
        },
        (false, true) => CompositionReport {
            case_tag: CaseTag::B,
            factors: vec![
                f(GkModule::HighestWeight(w(-one_xi)), Role::Sub),
                f(GkModule::LowestWeight(w(-xi + 1)), Role::Quotient),
            ],
            degenerate: false,
        },
        (true, true) => {
            // Both memberships force ζ₀ and ξ integral.
            let x = xi.to_integer();
            let factors = if x >= 1 {
                vec![
                    f(GkModule::LowestWeight(w(xi + 1)), Role::Sub),
                    f(GkModule::HighestWeight(w(-xi - 1)), Role::Sub),
                    f(GkModule::FiniteDim(x as u32), Role::Quotient),
                ]
            } else if x == 0 {
                vec![
                    f(GkModule::LowestWeight(KWeight::integer(1)), Role::Sub),
                    f(GkModule::HighestWeight(KWeight::integer(-1)), Role::Sub),
                ]
            } else {
                vec![
                    f(GkModule::FiniteDim((-x) as u32), Role::Sub),
                    f(GkModule::LowestWeight(w(-xi + 1)), Role::Quotient),
                    f(GkModule::HighestWeight(w(xi - 1)), Role::Quotient),
                ]
            };
            CompositionReport { case_tag: CaseTag::C, factors, degenerate: x == 0 }
        }
    }
}

/// Truncated ladder matrices (P, M, Kappa) on ζ_min, ζ_min+2, …; raising or
/// lowering out of the window is zero.
pub fn ps_ladder_matrices(
    ps: &PrincipalSeries,
    zeta_min: KWeight,
    count: usize,
) -> Result<(DMatrix<Rational64>, DMatrix<Rational64>, DMatrix<Rational64>), GkError> {
    if count == 0 {
        return Err(GkError::EmptyWindow);
    }
    if !ps.zeta0.same_coset(zeta_min.value()) {
        return Err(GkError::LatticeMismatch { start: zeta_min, coset: ps.zeta0 });
    }
    let weight = |i: usize| zeta_min.value() + Rational64::from_integer(2 * i as i64);
    let mut p = DMatrix::zeros(count, count);
    let mut m = DMatrix::zeros(count, count);
    let kappa = DMatrix::from_fn(count, count, |i, j| if i == j { weight(i) } else { Rational64::zero() });
    for i in 0..count {
        if i + 1 < count {
            p[(i + 1, i)] = ps.raise_coeff(weight(i));
        }
        if i >= 1 {
            m[(i - 1, i)] = ps.lower_coeff(weight(i));
        }
    }
    Ok((p, m, kappa))
}

/// Classify by counting vanishing couplings on a ladder window wide enough to
/// contain ±(1+ξ): none means case A, one case B, two case C.
pub fn ladder_case(ps: &PrincipalSeries) -> CaseTag {
    let reach = (ps.xi + 1).abs().ceil().to_integer() + 6;
    let z0 = ps.zeta0.value();
    let k = ((Rational64::from_integer(-reach) - z0) / 2).floor();
    let start = KWeight::from_rational(z0 + k * 2);
    let count = (reach as usize) + 4;
    let (p, m, _) = ps_ladder_matrices(ps, start, count).expect("start is on the coset");
    let zeros = 2 * (count - 1) - Rational64::rank(&p) - Rational64::rank(&m);
    match zeros {
        0 => CaseTag::A,
        1 => CaseTag::B,
        _ => CaseTag::C,
    }
}

/// JSON-facing view of a descriptor.
#[derive(Clone, Debug, Serialize)]
pub struct ModuleView {
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<u32>,
    pub casimir: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub role: Option<Role>,
}

impl ModuleView {
    pub fn new(m: &GkModule, role: Option<Role>) -> Self {
        let casimir = casimir_eigenvalue(m).to_string();
        let (kind, weight, dim) = match m {
            GkModule::LowestWeight(z) => ("lowest", Some(z.to_string()), None),
            GkModule::HighestWeight(z) => ("highest", Some(z.to_string()), None),
            GkModule::DoublyInfinite { coset, .. } => ("doubly-infinite", Some(coset.to_string()), None),
            GkModule::FiniteDim(d) => ("finite", None, Some(*d)),
        };
        Self { kind, weight, dim, casimir, role }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CompositionView {
    pub case: CaseTag,
    pub degenerate: bool,
    pub factors: Vec<ModuleView>,
}

impl From<&CompositionReport> for CompositionView {
    fn from(r: &CompositionReport) -> Self {
        Self {
            case: r.case_tag,
            degenerate: r.degenerate,
            factors: r.factors.iter().map(|f| ModuleView::new(&f.module, Some(f.role))).collect(),
        }
    }
}
