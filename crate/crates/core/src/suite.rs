//! The acceptance experiments, one function per criterion. Each returns the
//! measured quantities next to their limits so callers can print or serialize
//! them.

use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_rational::{BigRational, Rational64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cohomology::{bar_resolution_dims, kernel_cokernel_shortcut_applies, mv_cohomology, GroupRep};
use crate::cusp::{indicial_roots, random_bump_profile, solve_cusp};
use crate::gk::{
    casimir_eigenvalue, complementary_module, ext1_dim, ext1_weight_criterion, ladder_case, principal_series_structure,
    CaseTag, GkModule, KWeight, PrincipalSeries,
};
use crate::heisenberg::{
    coefficients_until_decayed, lattice_sum, poisson_values, relation_residuals, relation_table, HomogeneousForm,
    QuadratureConfig, Which,
};
use crate::interpolation::{
    build_design, left_kernel, mv_dimension_report, numerical_kernel, reconstruct, PoissonFunctional, RowSupport, Sector,
    SolveOptions, ROW_RESOLUTION,
};
use crate::oscillator::testfns::{gaussian_mixture, random_hermite_combination};
use crate::oscillator::{
    act_lie, casimir_apply_form, commutator, fourier, hermite_basis_function, hermite_synthesis, q_invariance_report, sample_map,
    theta_coefficients, CasimirForm, Grid, GridFunction, LieOp, OscError, Parity,
};
use crate::scalar::{inverse, Scalar};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub seed: u64,
    pub grid: Grid,
    /// Interpolation finite section.
    pub n_max: usize,
    pub k_max: usize,
    /// Square n_max of the balanced Mayer–Vietoris section.
    pub mv_n_max: usize,
    pub heis_radius: usize,
    pub heis_tdepth: usize,
    /// Disc radius for the lattice-sum cross-check.
    pub lattice_radius: usize,
    pub cusp_points: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 7,
            grid: Grid::default(),
            n_max: 40,
            k_max: 24,
            mv_n_max: 9,
            heis_radius: 64,
            heis_tdepth: 64,
            lattice_radius: 256,
            cusp_points: 8001,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Metric {
    pub name: String,
    pub value: f64,
    /// Pass condition: value ≤ max and value ≥ min where given.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min: Option<f64>,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub metrics: Vec<Metric>,
    pub notes: Vec<String>,
    pub elapsed_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time_limit_ms: Option<f64>,
}

impl CriterionResult {
    /// First failing metric or note, for one-line summaries.
    pub fn summary(&self) -> String {
        if let Some(m) = self.metrics.iter().find(|m| !m.ok) {
            return format!("{} = {:.3e} (limits {:?}/{:?})", m.name, m.value, m.min, m.max);
        }
        if let Some(n) = self.notes.iter().find(|n| n.starts_with("FAIL")) {
            return n.clone();
        }
        if let Some(limit) = self.time_limit_ms.filter(|&l| self.elapsed_ms > l) {
            return format!("runtime {:.0} ms over {:.0} ms", self.elapsed_ms, limit);
        }
        format!("{} checks, {:.0} ms", self.metrics.len(), self.elapsed_ms)
    }
}

struct Recorder {
    metrics: Vec<Metric>,
    notes: Vec<String>,
}

impl Recorder {
    fn new() -> Self {
        Self { metrics: Vec::new(), notes: Vec::new() }
    }

    fn at_most(&mut self, name: impl Into<String>, value: f64, max: f64) {
        let ok = value <= max;
        self.metrics.push(Metric { name: name.into(), value, max: Some(max), min: None, ok });
    }

    fn at_least(&mut self, name: impl Into<String>, value: f64, min: f64) {
        let ok = value >= min;
        self.metrics.push(Metric { name: name.into(), value, max: None, min: Some(min), ok });
    }

    fn equal(&mut self, name: impl Into<String>, value: f64, want: f64) {
        let ok = value == want;
        self.metrics.push(Metric { name: name.into(), value, max: Some(want), min: Some(want), ok });
    }

    fn info(&mut self, name: impl Into<String>, value: f64) {
        self.metrics.push(Metric { name: name.into(), value, max: None, min: None, ok: true });
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        self.notes.push(if ok { what } else { format!("FAIL {what}") });
    }

    fn fail(&mut self, what: impl std::fmt::Display) {
        self.notes.push(format!("FAIL {what}"));
    }

    fn finish(self, id: u8, title: &'static str, start: Instant, time_limit_ms: Option<f64>) -> CriterionResult {
        let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
        let passed = self.metrics.iter().all(|m| m.ok)
            && !self.notes.iter().any(|n| n.starts_with("FAIL"))
            && time_limit_ms.is_none_or(|l| elapsed_ms <= l);
        CriterionResult { id, title, passed, metrics: self.metrics, notes: self.notes, elapsed_ms, time_limit_ms }
    }
}

/// Metric name of the intertwining relation as stated; see criterion 1.
pub const LITERAL_INTERTWINING: &str = "sigma X sigma^-1 - Y";

pub const TITLES: [&str; 10] = [
    "oscillator commutators and Fourier intertwining",
    "kappa spectrum and Casimir value",
    "interpolation finite section",
    "round-trip reconstruction",
    "Mayer-Vietoris dimension report",
    "free-group cohomology",
    "symbolic (g,K) facts and principal series",
    "cusp ODE",
    "Heisenberg relations",
    "theta coefficients and Q invariance",
];

pub fn run_criterion(id: u8, cfg: &SuiteConfig) -> Option<CriterionResult> {
    Some(match id {
        1 => oscillator_identities(cfg),
        2 => spectral_facts(cfg),
        3 => finite_section(cfg),
        4 => round_trip(cfg),
        5 => mv_report(cfg),
        6 => free_group(cfg),
        7 => symbolic(cfg),
        8 => cusp(cfg),
        9 => heisenberg(cfg),
        10 => theta_and_q(cfg),
        _ => return None,
    })
}

pub fn run_all(cfg: &SuiteConfig) -> Vec<CriterionResult> {
    (1..=10).filter_map(|id| run_criterion(id, cfg)).collect()
}

fn rel_diff(a: &GridFunction, b: &GridFunction, scale: f64) -> f64 {
    a.sub(b).map(|d| d.l2_norm() / scale.max(f64::MIN_POSITIVE)).unwrap_or(f64::INFINITY)
}

fn lie(op: LieOp, f: &GridFunction) -> Result<GridFunction, String> {
    act_lie(op, f).map_err(|e| e.to_string())
}

pub fn oscillator_identities(cfg: &SuiteConfig) -> CriterionResult {
    let start = Instant::now();
    let mut rec = Recorder::new();
    let mut worst = [0.0f64; 4];
    let mut literal: f64 = 0.0;
    let two = Complex64::new(2.0, 0.0);
    let run = |k: usize, worst: &mut [f64; 4], literal: &mut f64| -> Result<(), String> {
        let psi = hermite_basis_function(cfg.grid, k).map_err(|e| e.to_string())?;
        let scale = |f: &GridFunction| f.l2_norm().max(psi.l2_norm());
        let (p, m, kap) = (lie(LieOp::P, &psi)?, lie(LieOp::M, &psi)?, lie(LieOp::Kappa, &psi)?);
        let err = |e: OscError| e.to_string();
        let pm = commutator(LieOp::P, LieOp::M, &psi).map_err(err)?;
        worst[0] = worst[0].max(rel_diff(&pm, &kap, scale(&kap)));
        let kp = commutator(LieOp::Kappa, LieOp::P, &psi).map_err(err)?;
        let p2 = p.scale(two);
        worst[1] = worst[1].max(rel_diff(&kp, &p2, scale(&p2)));
        let km = commutator(LieOp::Kappa, LieOp::M, &psi).map_err(err)?;
        let m2 = m.scale(-two);
        worst[2] = worst[2].max(rel_diff(&km, &m2, scale(&m2)));
        let sx = fourier(&lie(LieOp::X, &psi)?).map_err(|e| e.to_string())?;
        let ys = lie(LieOp::Y, &fourier(&psi).map_err(|e| e.to_string())?)?;
        worst[3] = worst[3].max(rel_diff(&sx, &ys.scale(Complex64::new(-1.0, 0.0)), sx.l2_norm()));
        *literal = literal.max(rel_diff(&sx, &ys, sx.l2_norm()));
        Ok(())
    };
    for k in 0..=20 {
        if let Err(e) = run(k, &mut worst, &mut literal) {
            rec.fail(format!("psi_{k}: {e}"));
        }
    }
    rec.at_most("[p,m] - kappa", worst[0], 1e-6);
    rec.at_most("[kappa,p] - 2p", worst[1], 1e-6);
    rec.at_most("[kappa,m] + 2m", worst[2], 1e-6);
    // X = −iπx², Y = (−i/4π)d² and σ = Fourier give σXσ⁻¹ = −Y; the stated
    // relation σXσ⁻¹ = Y is checked as written and fails by 2‖σXφ‖.
    rec.at_most(LITERAL_INTERTWINING, literal, 1e-6);
    rec.at_most("sigma X sigma^-1 + Y (derived sign)", worst[3], 1e-6);
    rec.finish(1, TITLES[0], start, Some(5000.0))
}

pub fn spectral_facts(cfg: &SuiteConfig) -> CriterionResult {
    let start = Instant::now();
    let mut rec = Recorder::new();
    let mut eig_err: f64 = 0.0;
    for k in 0..=10 {
        match hermite_basis_function(cfg.grid, 2 * k).and_then(|psi| act_lie(LieOp::Kappa, &psi).map(|kp| (psi, kp))) {
            Ok((psi, kp)) => {
                let want = 2.0 * k as f64 + 0.5;
                let rayleigh = psi.inner(&kp) / psi.inner(&psi);
                eig_err = eig_err.max((rayleigh - want).norm()).max(rel_diff(&kp, &psi.scale(Complex64::new(want, 0.0)), want));
            }
            Err(e) => rec.fail(format!("psi_{}: {e}", 2 * k)),
        }
    }
    rec.at_most("kappa eigenvalues 1/2, 5/2, 9/2, ...", eig_err, 1e-6);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for parity in [Parity::Even, Parity::Odd] {
        let mut worst: f64 = 0.0;
        for trial in 0..6 {
            let phi = if trial % 2 == 0 {
                hermite_synthesis(&random_hermite_combination(&mut rng, parity, 10, 5), cfg.grid)
            } else {
                gaussian_mixture(&mut rng, cfg.grid, parity, 3)
            };
            let phi = match phi {
                Ok(p) => p,
                Err(e) => {
                    rec.fail(e);
                    continue;
                }
            };
            let target = phi.scale(Complex64::new(-0.375, 0.0));
            for form in CasimirForm::ALL {
                match casimir_apply_form(form, &phi) {
                    Ok(c) => worst = worst.max(rel_diff(&c, &target, phi.l2_norm())),
                    Err(e) => rec.fail(format!("{form:?}: {e}")),
                }
            }
        }
        rec.at_most(format!("Casimir + 3/8 ({parity:?})"), worst, 1e-6);
    }
    rec.finish(2, TITLES[1], start, None)
}

pub fn finite_section(cfg: &SuiteConfig) -> CriterionResult {
    let start = Instant::now();
    let mut rec = Recorder::new();
    match build_design(cfg.n_max, cfg.k_max, cfg.grid, Parity::Even) {
        Ok(d) => {
            let k = numerical_kernel(&d, 1e-10);
            rec.equal("kernel dimension", k.kernel_dim as f64, 0.0);
            rec.info("sigma_min / sigma_max", k.smallest_singular_values[0] / k.singular_values[0]);
            match left_kernel(&d, ROW_RESOLUTION, RowSupport::ResolvedSquares) {
                Ok(lk) => {
                    rec.equal("left kernel dimension (square rows)", lk.dim() as f64, 1.0);
                    // Square rows below ROW_RESOLUTION are numerically zero; the
                    // functional's weight on them acts on nothing.
                    let w = PoissonFunctional::new(cfg.n_max).vector(&d);
                    let mut on_rows = DVector::zeros(w.len());
                    for &r in &lk.rows_used {
                        on_rows[r] = w[r];
                    }
                    let dropped = (&w - &on_rows).transpose() * &d.matrix;
                    rec.at_least("alignment with truncated Poisson functional", lk.alignment(&on_rows), 0.9999);
                    rec.info("alignment including unresolved rows", lk.alignment(&w));
                    rec.info("|functional on unresolved rows applied to D|", dropped.norm());
                    rec.info("square rows used", lk.rows_used.len() as f64);
                    if lk.singular_values.len() >= 2 {
                        let n = lk.singular_values.len();
                        rec.info("gap: next singular value / sigma_max", lk.singular_values[n - 2] / lk.singular_values[0]);
                    }
                }
                Err(e) => rec.fail(e),
            }
        }
        Err(e) => rec.fail(e),
    }
    rec.finish(3, TITLES[2], start, Some(30_000.0))
}

pub fn round_trip(cfg: &SuiteConfig) -> CriterionResult {
    let start = Instant::now();
    let mut rec = Recorder::new();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(4));
    let mut worst: f64 = 0.0;
    for trial in 0..25 {
        let parity = if trial % 2 == 0 { Parity::Even } else { Parity::Odd };
        let c = random_hermite_combination(&mut rng, parity, cfg.k_max, 8);
        let out = hermite_synthesis(&c, cfg.grid)
            .map_err(|e| e.to_string())
            .and_then(|phi| sample_map(&phi, cfg.n_max).map_err(|e| e.to_string()))
            .and_then(|s| reconstruct(&s, cfg.k_max, cfg.grid, parity, SolveOptions::default()).map_err(|e| e.to_string()));
        match out {
            Ok(r) => {
                let num: f64 = r.coeffs.coeffs.iter().zip(&c.coeffs).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
                let den: f64 = c.coeffs.iter().map(|b| b.norm_sqr()).sum::<f64>().sqrt();
                worst = worst.max(num / den);
            }
            Err(e) => rec.fail(format!("trial {trial}: {e}")),
        }
    }
    rec.at_most("max relative coefficient error (25 trials)", worst, 1e-5);
    rec.finish(4, TITLES[3], start, None)
}

pub fn mv_report(cfg: &SuiteConfig) -> CriterionResult {
    let start = Instant::now();
    let mut rec = Recorder::new();
    let rows = cfg.mv_n_max + 1;
    for sector in [Sector::Even, Sector::Odd, Sector::Radial(3), Sector::Radial(5)] {
        let k = 2 * rows - sector.expected_h0();
        match mv_dimension_report(cfg.grid, cfg.mv_n_max, k, sector) {
            Ok(r) => {
                let name = format!("{sector:?}");
                if matches!(sector, Sector::Even | Sector::Odd) {
                    rec.equal(format!("{name} h0"), r.h0 as f64, 1.0);
                } else {
                    rec.info(format!("{name} h0"), r.h0 as f64);
                }
                rec.equal(format!("{name} h1"), r.h1 as f64, 0.0);
                rec.info(format!("{name} relation alignment"), r.alignment);
            }
            Err(e) => rec.fail(format!("{sector:?}: {e}")),
        }
    }
    rec.finish(5, TITLES[4], start, None)
}

fn small_matrices<T: Scalar>(dim: usize, entries: &[T]) -> Vec<DMatrix<T>> {
    let cells = dim * dim;
    let mut out = Vec::new();
    let mut idx = vec![0usize; cells];
    loop {
        let m = DMatrix::from_fn(dim, dim, |i, j| entries[idx[i * dim + j]].clone());
        if T::rank(&m) == dim {
            out.push(m);
        }
        let mut pos = 0;
        while pos < cells {
            idx[pos] += 1;
            if idx[pos] < entries.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
        if pos == cells {
            return out;
        }
    }
}

/// Random rep of the given dimension: half the time conjugates of
/// block-unipotent matrices (so coinvariants appear), otherwise small
/// integer matrices.
fn random_rep<R: Rng>(rng: &mut R, dim: usize) -> GroupRep<BigRational> {
    let q = |v: i64| BigRational::from_integer(v.into());
    loop {
        let rand_int = |rng: &mut R| DMatrix::from_fn(dim, dim, |_, _| q(rng.gen_range(-3..=3)));
        let (a, b) = if rng.gen_bool(0.5) {
            let pick = |rng: &mut R| {
                let mut j = DMatrix::from_fn(dim, dim, |i, k| if i == k { q(if rng.gen_bool(0.6) { 1 } else { 2 }) } else { q(0) });
                for i in 0..dim.saturating_sub(1) {
                    if rng.gen_bool(0.5) {
                        j[(i, i + 1)] = q(1);
                    }
                }
                j
            };
            let (ja, jb) = (pick(rng), pick(rng));
            let s = rand_int(rng);
            let t = rand_int(rng);
            match (inverse(&s), inverse(&t)) {
                (Some(si), Some(ti)) => (&s * ja * si, &t * jb * ti),
                _ => continue,
            }
        } else {
            (rand_int(rng), rand_int(rng))
        };
        if let Ok(rep) = GroupRep::new(a, b) {
            return rep;
        }
    }
}

pub fn free_group(cfg: &SuiteConfig) -> CriterionResult {
    let start = Instant::now();
    let mut rec = Recorder::new();
    let r = |n: i64, d: i64| Rational64::new(n, d);
    let mut cases = 0usize;
    let mut disagreements = 0usize;
    let mut euler_exhaustive = 0usize;
    let mut shortcut_cases = 0usize;
    let mut check = |rep: &GroupRep<Rational64>| {
        let report = mv_cohomology(rep);
        let (h0, h1) = bar_resolution_dims(rep);
        cases += 1;
        if (report.h0, report.h1) != (h0, h1) {
            disagreements += 1;
        }
        if report.h0 as i64 - report.h1 as i64 != -(rep.dim() as i64) {
            euler_exhaustive += 1;
        }
        if kernel_cokernel_shortcut_applies(rep) {
            shortcut_cases += 1;
            if report.h1 != report.coker_dim {
                disagreements += 1;
            }
        }
    };
    let scalars = [r(-2, 1), r(-1, 1), r(-1, 2), r(1, 2), r(1, 1), r(2, 1), r(3, 1)];
    let ones: Vec<DMatrix<Rational64>> = scalars.iter().map(|s| DMatrix::from_element(1, 1, *s)).collect();
    let twos = small_matrices(2, &[r(-1, 1), r(0, 1), r(1, 1)]);
    let threes = small_matrices(3, &[r(0, 1), r(1, 1)]);
    for set in [&ones, &twos, &threes] {
        for a in set.iter() {
            for b in set.iter() {
                check(&GroupRep::new(a.clone(), b.clone()).expect("invertible by construction"));
            }
        }
    }
    rec.info("exhaustive reps checked", cases as f64);
    rec.info("reps where the kernel/cokernel shortcut applies", shortcut_cases as f64);
    rec.equal("disagreements with bar-resolution oracle", disagreements as f64, 0.0);
    rec.equal("Euler identity failures (exhaustive)", euler_exhaustive as f64, 0.0);

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(6));
    let mut euler_random = 0usize;
    let mut with_coinvariants = 0usize;
    for _ in 0..200 {
        let dim = rng.gen_range(1..=4);
        let rep = random_rep(&mut rng, dim);
        let report = mv_cohomology(&rep);
        if report.h0 as i64 - report.h1 as i64 != -(dim as i64) || (report.h0, report.h1) != bar_resolution_dims(&rep) {
            euler_random += 1;
        }
        if report.coinv_e + report.coinv_f > 0 {
            with_coinvariants += 1;
        }
    }
    rec.equal("Euler identity failures (200 random reps)", euler_random as f64, 0.0);
    rec.info("random reps with nonzero coinvariants", with_coinvariants as f64);
    let trivial = mv_cohomology(&GroupRep::<BigRational>::trivial(1));
    rec.check((trivial.h0, trivial.h1) == (1, 2), format!("trivial rep gives ({}, {})", trivial.h0, trivial.h1));
    rec.finish(6, TITLES[5], start, None)
}

pub fn symbolic(_cfg: &SuiteConfig) -> CriterionResult {
    let start = Instant::now();
    let mut rec = Recorder::new();
    let w = |n: i64, q: u32| KWeight::new(n, q).expect("valid weight");
    let lowest_half = GkModule::LowestWeight(w(1, 2));
    let highest = GkModule::HighestWeight(w(-3, 2));
    let c = casimir_eigenvalue(&lowest_half);
    rec.check(c == Rational64::new(-3, 8), format!("Casimir of lowest 1/2 = {c}"));
    rec.check(casimir_eigenvalue(&highest) == Rational64::new(-3, 8), "Casimir of highest -3/2 = -3/8");
    match (complementary_module(&lowest_half), complementary_module(&highest)) {
        (Ok(a), Ok(b)) => {
            rec.check(a.module == highest && !a.finite_dimensional, format!("complement of lowest 1/2 is {}", a.module));
            rec.check(b.module == lowest_half, format!("complement of highest -3/2 is {}", b.module));
        }
        _ => rec.fail("complement lookup failed"),
    }
    // ext¹ on complementary and non-complementary pairs, by rule and by ladder rank
    let weights = [w(1, 2), w(3, 2), w(5, 2), w(1, 1), w(2, 1), w(3, 1), w(1, 3), w(-1, 2)];
    let mut ext_pairs = 0;
    for &z in &weights {
        for build in [GkModule::LowestWeight as fn(KWeight) -> GkModule, GkModule::HighestWeight] {
            let m = build(if matches!(build(z), GkModule::HighestWeight(_)) { z.shift(-4) } else { z });
            let Ok(comp) = complementary_module(&m) else { continue };
            for (v, want) in [(comp.module, 1u32), (m, 0u32), (GkModule::LowestWeight(z.shift(6)), 0)] {
                let (a, b) = (ext1_dim(&m, &v), ext1_weight_criterion(&m, &v));
                ext_pairs += 1;
                if a.as_ref().ok() != Some(&want) || b.as_ref().ok() != Some(&want) {
                    rec.fail(format!("ext1({m}, {v}) = {a:?} / {b:?}, want {want}"));
                }
            }
        }
    }
    rec.info("ext1 pairs checked", ext_pairs as f64);
    // principal series grid
    let zetas = [w(0, 1), w(1, 1), w(1, 2), w(-1, 2), w(1, 3)];
    let xis = [
        Rational64::from_integer(0),
        Rational64::from_integer(1),
        Rational64::from_integer(2),
        Rational64::from_integer(3),
        Rational64::from_integer(-1),
        Rational64::from_integer(-2),
        Rational64::new(1, 2),
        Rational64::new(3, 2),
        Rational64::new(1, 3),
        Rational64::new(2, 5),
    ];
    let mut seen = [0usize; 3];
    let mut mismatches = 0;
    for &z in &zetas {
        for &xi in &xis {
            let ps = PrincipalSeries::new(z, xi);
            let tag = principal_series_structure(&ps).case_tag;
            if ladder_case(&ps) != tag {
                mismatches += 1;
            }
            seen[match tag {
                CaseTag::A => 0,
                CaseTag::B => 1,
                CaseTag::C => 2,
            }] += 1;
        }
    }
    rec.equal("case mismatches against ladder ranks (50 cases)", mismatches as f64, 0.0);
    rec.info("case (a) count", seen[0] as f64);
    rec.info("case (b) count", seen[1] as f64);
    rec.info("case (c) count", seen[2] as f64);
    rec.check(seen.iter().all(|&n| n > 0), "all three cases occur");
    rec.finish(7, TITLES[6], start, Some(1000.0))
}

pub fn cusp(cfg: &SuiteConfig) -> CriterionResult {
    let start = Instant::now();
    let mut rec = Recorder::new();
    let lambda = Complex64::new(-0.375, 0.0);
    let r = indicial_roots(lambda);
    let err = (r.p1 - Complex64::new(0.75, 0.0)).norm().max((r.p2 - Complex64::new(0.25, 0.0)).norm());
    rec.at_most("indicial roots at -3/8 vs {1/4, 3/4}", err, 1e-14);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(8));
    let lambdas = [Complex64::new(0.0, 0.0), lambda, Complex64::new(-0.5, 0.0), Complex64::new(1.0, 1.0)];
    let mut worst = [0.0f64; 4];
    for _ in 0..20 {
        let y0 = rng.gen_range(0.5..3.0);
        let f = random_bump_profile(&mut rng, y0, cfg.cusp_points);
        for (i, &l) in lambdas.iter().enumerate() {
            match solve_cusp(&f, l) {
                Ok(s) => worst[i] = worst[i].max(s.residual),
                Err(e) => rec.fail(format!("lambda {l}: {e}")),
            }
        }
    }
    for (l, wst) in lambdas.iter().zip(worst) {
        rec.at_most(format!("residual, lambda = {l}"), wst, 1e-6);
    }
    rec.finish(8, TITLES[7], start, None)
}

pub fn heisenberg(cfg: &SuiteConfig) -> CriterionResult {
    let start = Instant::now();
    let mut rec = Recorder::new();
    let qc = QuadratureConfig::default();
    let family = [
        ("1/(1+x^2)^2", HomogeneousForm::reference()),
        ("1/(1+x^2)^3", HomogeneousForm::cubic_reference()),
        ("rational", HomogeneousForm::rational(0.8, 0.3, 1.1)),
        ("angular", HomogeneousForm::angular(1.0, 0.3, 0.5)),
    ];
    for (name, phi) in &family {
        match coefficients_until_decayed(phi, &qc) {
            Ok(c) => {
                let r = relation_residuals(phi, &c, cfg.heis_radius, cfg.heis_tdepth);
                rec.at_most(format!("|a0 - b0| {name}"), r.r_a, 1e-8);
                rec.info(format!("r_I {name}"), r.r_i);
                rec.info(format!("r_J {name}"), r.r_j);
            }
            Err(e) => rec.fail(format!("{name}: {e}")),
        }
    }
    let phi = HomogeneousForm::reference();
    match coefficients_until_decayed(&phi, &qc) {
        Ok(c) => {
            let table = relation_table(&phi, &c, cfg.heis_radius, cfg.heis_tdepth);
            let floor = 1e-10;
            let monotone = |pick: fn(&crate::heisenberg::RelationResiduals) -> f64| {
                table.windows(2).all(|w| pick(&w[1]) <= pick(&w[0]) || pick(&w[1]) < floor)
            };
            rec.check(monotone(|r| r.r_i), "r_I decreases along the doubling table");
            rec.check(monotone(|r| r.r_j), "r_J decreases along the doubling table");
            if let Some(last) = table.last() {
                rec.at_most(format!("r_I at ({}, {})", last.radius, last.tdepth), last.r_i, 1e-3);
                rec.at_most(format!("r_J at ({}, {})", last.radius, last.tdepth), last.r_j, 1e-3);
                rec.info("literal r_I (no 2 ln2 a0 term)", last.r_i_literal);
            }
            // independent oracle: disc-ordered lattice sums against both Poisson evaluations
            let pi = poisson_values(&phi, &c);
            let pj = poisson_values(&phi.swapped(), &c.swapped());
            rec.at_most("I column vs row evaluation", (pi.column - pi.row).abs(), 1e-9);
            rec.at_most("J column vs row evaluation", (pj.column - pj.row).abs(), 1e-9);
            for (which, value) in [(Which::I, pi.column), (Which::J, pj.column)] {
                match lattice_sum(&phi, which, cfg.lattice_radius) {
                    Ok(s) => {
                        rec.at_most(format!("{which:?} disc sum (Cesaro, R = {}) vs Poisson value", cfg.lattice_radius), (s.cesaro - value).abs(), 1e-4);
                        rec.info(format!("{which:?} raw partial sum error"), (s.raw - value).abs());
                    }
                    Err(e) => rec.fail(e),
                }
            }
            match lattice_sum(&phi, Which::A, cfg.lattice_radius) {
                Ok(a) => rec.at_most("A (arc integral) vs a0", (a.raw - c.a(0).re).abs(), 1e-8),
                Err(e) => rec.fail(e),
            }
        }
        Err(e) => rec.fail(e),
    }
    rec.finish(9, TITLES[8], start, None)
}

pub fn theta_and_q(cfg: &SuiteConfig) -> CriterionResult {
    let start = Instant::now();
    let mut rec = Recorder::new();
    let got = theta_coefficients(100);
    let mut oracle = vec![0u64; 100];
    for m in -10i64..=10 {
        if let Some(c) = oracle.get_mut((m * m) as usize) {
            *c += 1;
        }
    }
    let wrong = got.iter().zip(&oracle).filter(|(a, b)| a != b).count();
    rec.equal("theta coefficient mismatches (prec 100)", wrong as f64, 0.0);
    rec.check(got[..5] == [1, 2, 0, 0, 2], format!("theta starts {:?}", &got[..5]));
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(10));
    let (mut we, mut wf) = (0.0f64, 0.0f64);
    for _ in 0..20 {
        let terms = rng.gen_range(1..=4);
        match gaussian_mixture(&mut rng, cfg.grid, Parity::Even, terms).and_then(|phi| {
            let scale = phi.sup_norm();
            q_invariance_report(&phi).map(|r| (r, scale))
        }) {
            Ok((r, scale)) => {
                we = we.max(r.residual_e / scale);
                wf = wf.max(r.residual_f / scale);
            }
            Err(e) => rec.fail(e),
        }
    }
    rec.at_most("Q residual under e~ (relative)", we, 1e-12);
    rec.at_most("Q residual under f~ (relative)", wf, 1e-8);
    rec.finish(10, TITLES[9], start, None)
}
