use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use fourier_interp::cohomology::{bar_resolution_dims, RepFile};
use fourier_interp::cusp::{growth_report, random_bump_profile, solve_cusp, CuspProfile};
use fourier_interp::gk::{
    casimir_eigenvalue, complementary_module, ext1_dim, ext1_weight_criterion, parse_rational, principal_series_structure,
    CompositionView, GkModule, KWeight, ModuleView, PrincipalSeries,
};
use fourier_interp::heisenberg::{coefficients_until_decayed, relation_table, HomogeneousForm, ProfileFile, QuadratureConfig};
use fourier_interp::interpolation::{
    build_design, left_kernel, mv_dimension_report, numerical_kernel, reconstruct, PoissonFunctional, RowSupport, Sector,
    SolveOptions, ROW_RESOLUTION,
};
use fourier_interp::oscillator::testfns::gaussian_mixture;
use fourier_interp::oscillator::{
    commutator, act_lie, fourier, hermite_basis_function, poisson_residual, sample_map, Grid, GridFunction, LieOp, Parity,
    SampleVector,
};
use fourier_interp::suite::{run_criterion, CriterionResult, SuiteConfig};

#[derive(Parser)]
#[command(name = "finterp", version, about = "Fourier interpolation toolkit: oscillator, sampling, cohomology, cusp ODE, Heisenberg relations")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// JSON file with suite settings; flags given explicitly win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Grid half-width L.
    #[arg(long = "grid-l", global = true)]
    grid_l: Option<f64>,
    /// Grid point count N (even).
    #[arg(long = "grid-n", global = true)]
    grid_n: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Symbolic (g,K)-module facts.
    Gk {
        #[command(subcommand)]
        op: GkOp,
    },
    /// Numerical oscillator representation.
    Osc {
        #[command(subcommand)]
        op: OscOp,
    },
    /// Square-root sampling and its inversion.
    Interp {
        #[command(subcommand)]
        op: InterpOp,
    },
    /// H⁰, H¹ of the free group on a representation.
    Cohom {
        #[arg(long)]
        rep: PathBuf,
    },
    /// Cusp ODE 2y²g″ − λg = f.
    Cusp {
        #[command(subcommand)]
        op: CuspOp,
    },
    /// Heisenberg uniqueness relations on the projective line.
    Heis {
        #[command(subcommand)]
        op: HeisOp,
    },
    /// Acceptance experiments: `all` or a criterion number 1-10.
    Run {
        target: String,
        /// Directory for report.json, report.csv and per-criterion files.
        #[arg(long, default_value = "finterp-out")]
        out_dir: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Lowest,
    Highest,
}

#[derive(Args)]
struct ModuleArg {
    #[arg(long, value_enum)]
    kind: Kind,
    /// K-weight as an integer or fraction, e.g. 1/2.
    #[arg(long, allow_hyphen_values = true)]
    weight: String,
}

#[derive(Subcommand)]
enum GkOp {
    Casimir(ModuleArg),
    Complement(ModuleArg),
    /// dim Ext¹(W, V) by the ladder-rank rule and by the weight criterion.
    Ext1 {
        #[arg(long, value_enum)]
        w_kind: Kind,
        #[arg(long, allow_hyphen_values = true)]
        w_weight: String,
        #[arg(long, value_enum)]
        v_kind: Kind,
        #[arg(long, allow_hyphen_values = true)]
        v_weight: String,
    },
    /// Composition structure of a principal series.
    Ps {
        #[arg(long, allow_hyphen_values = true)]
        zeta0: String,
        #[arg(long, allow_hyphen_values = true)]
        xi: String,
    },
}

#[derive(Subcommand)]
enum OscOp {
    /// Commutator and intertwining residuals on ψ_0..ψ_kmax.
    CheckCommutators {
        #[arg(long, default_value_t = 20)]
        kmax: usize,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Write a test function: a Hermite function or a seeded Gaussian mixture.
    Generate {
        #[arg(long, value_enum)]
        kind: TestFn,
        /// Hermite degree.
        #[arg(long, default_value_t = 0)]
        k: usize,
        #[arg(long, value_parser = parse_parity, default_value = "even")]
        parity: Parity,
        #[arg(long, default_value_t = 3)]
        terms: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// (φ(√n), φ̂(√n)) for n ≤ nmax.
    Sample {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 64)]
        nmax: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Σφ(n) − Σφ̂(n).
    Poisson {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TestFn {
    Hermite,
    Mixture,
}

fn parse_parity(s: &str) -> Result<Parity, String> {
    s.parse()
}

#[derive(Clone, Copy, ValueEnum)]
enum SectorArg {
    Even,
    Odd,
    Radial,
}

#[derive(Subcommand)]
enum InterpOp {
    /// Singular values and kernel report of the sampling design matrix.
    Design {
        #[arg(long, default_value_t = 40)]
        nmax: usize,
        #[arg(long, default_value_t = 24)]
        kmax: usize,
        #[arg(long, value_parser = parse_parity, default_value = "even")]
        parity: Parity,
        /// CSV of (index, singular_value).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Least-squares Hermite coefficients from a SampleVector.
    Reconstruct {
        #[arg(long)]
        samples: PathBuf,
        #[arg(long, default_value_t = 24)]
        kmax: usize,
        #[arg(long, value_parser = parse_parity, default_value = "even")]
        parity: Parity,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Numerical (h0, h1) on a balanced finite section.
    MvReport {
        #[arg(long, value_enum, default_value = "even")]
        sector: SectorArg,
        /// Dimension for the radial sector (odd).
        #[arg(long, default_value_t = 3)]
        dim: u32,
        #[arg(long, default_value_t = 9)]
        nmax: usize,
        /// Column count; defaults to the balanced 2R − h0.
        #[arg(long)]
        kmax: Option<usize>,
    },
}

#[derive(Subcommand)]
enum CuspOp {
    Solve {
        /// Real part of λ.
        #[arg(long, allow_hyphen_values = true)]
        lambda: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        lambda_im: f64,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Add the residual and growth seminorms to the summary.
        #[arg(long)]
        residual_report: bool,
    },
    /// Write a seeded random bump forcing term.
    Bump {
        #[arg(long, default_value_t = 1.0)]
        y0: f64,
        #[arg(long, default_value_t = 8001)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum HeisOp {
    /// Residual table over the (R, T) doubling ladder.
    Relations {
        /// `reference`, `cubic`, or a profile JSON file.
        #[arg(long, default_value = "reference")]
        profile: String,
        #[arg(long, default_value_t = 64)]
        radius: usize,
        #[arg(long, default_value_t = 64)]
        tdepth: usize,
        /// CSV with columns R, T, r_A, r_I, r_J.
        #[arg(long)]
        table: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum CliError {
    /// Bad flags, files or parameters.
    Usage(String),
    /// An acceptance check or invariant failed.
    Failed(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failed(_) => 1,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

type CliResult = Result<(), CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Usage(m) => eprintln!("error: {m}"),
                CliError::Failed(m) => eprintln!("FAILED: {m}"),
            }
            ExitCode::from(e.code())
        }
    }
}

fn suite_config(g: &Global) -> Result<SuiteConfig, CliError> {
    let mut cfg = match &g.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?
        }
        None => SuiteConfig::default(),
    };
    if g.grid_l.is_some() || g.grid_n.is_some() {
        let l = g.grid_l.unwrap_or(cfg.grid.half_width);
        let n = g.grid_n.unwrap_or(cfg.grid.points);
        cfg.grid = Grid::new(l, n).map_err(usage)?;
    }
    if let Some(seed) = g.seed {
        cfg.seed = seed;
    }
    if cfg.k_max == 0 || cfg.k_max > 2 * (cfg.n_max + 1) {
        return Err(usage(format!("k_max = {} must be in 1..=2(n_max+1)", cfg.k_max)));
    }
    if cfg.lattice_radius < 10 || cfg.heis_radius == 0 || cfg.heis_tdepth == 0 {
        return Err(usage("lattice_radius must be ≥ 10 and heis_radius, heis_tdepth positive"));
    }
    Ok(cfg)
}

fn dispatch(cli: Cli) -> CliResult {
    let cfg = suite_config(&cli.global)?;
    match cli.command {
        Command::Gk { op } => gk(op),
        Command::Osc { op } => osc(op, &cfg),
        Command::Interp { op } => interp(op, &cfg),
        Command::Cohom { rep } => cohom(&rep),
        Command::Cusp { op } => cusp(op, &cfg),
        Command::Heis { op } => heis(op),
        Command::Run { target, out_dir } => run(&target, &out_dir, &cfg),
    }
}

fn print_json<T: Serialize>(value: &T) -> CliResult {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Failed(e.to_string()))?;
    println!("{text}");
    Ok(())
}

/// Write via a temporary file and rename, so readers never see partial output.
fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult {
    let io = |e: std::io::Error| usage(format!("{}: {e}", path.display()));
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io)?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    let mut f = fs::File::create(&tmp).map_err(io)?;
    f.write_all(bytes).map_err(io)?;
    f.sync_all().map_err(io)?;
    fs::rename(&tmp, path).map_err(io)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Failed(e.to_string()))?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

/// JSON to `out` when given, otherwise to stdout.
fn emit<T: Serialize>(out: Option<&Path>, value: &T) -> CliResult {
    match out {
        Some(p) => write_json(p, value),
        None => print_json(value),
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn csv_bytes(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| CliError::Failed(e.to_string());
    w.write_record(header).map_err(fail)?;
    for r in rows {
        w.write_record(&r).map_err(fail)?;
    }
    w.into_inner().map_err(|e| CliError::Failed(e.to_string()))
}

fn module(kind: Kind, weight: &str) -> Result<GkModule, CliError> {
    let z: KWeight = weight.parse().map_err(usage)?;
    Ok(match kind {
        Kind::Lowest => GkModule::LowestWeight(z),
        Kind::Highest => GkModule::HighestWeight(z),
    })
}

fn gk(op: GkOp) -> CliResult {
    #[derive(Serialize)]
    struct CasimirOut {
        module: ModuleView,
        casimir: String,
    }
    #[derive(Serialize)]
    struct ComplementOut {
        module: ModuleView,
        complement: ModuleView,
        finite_dimensional: bool,
    }
    #[derive(Serialize)]
    struct Ext1Out {
        w: ModuleView,
        v: ModuleView,
        ext1_dim: u32,
        weight_criterion: u32,
    }
    match op {
        GkOp::Casimir(m) => {
            let m = module(m.kind, &m.weight)?;
            print_json(&CasimirOut { module: ModuleView::new(&m, None), casimir: casimir_eigenvalue(&m).to_string() })
        }
        GkOp::Complement(m) => {
            let m = module(m.kind, &m.weight)?;
            let c = complementary_module(&m).map_err(usage)?;
            print_json(&ComplementOut {
                module: ModuleView::new(&m, None),
                complement: ModuleView::new(&c.module, None),
                finite_dimensional: c.finite_dimensional,
            })
        }
        GkOp::Ext1 { w_kind, w_weight, v_kind, v_weight } => {
            let (w, v) = (module(w_kind, &w_weight)?, module(v_kind, &v_weight)?);
            let a = ext1_dim(&w, &v).map_err(usage)?;
            let b = ext1_weight_criterion(&w, &v).map_err(usage)?;
            print_json(&Ext1Out { w: ModuleView::new(&w, None), v: ModuleView::new(&v, None), ext1_dim: a, weight_criterion: b })?;
            if a != b {
                return Err(CliError::Failed(format!("ladder rank gives {a}, weight criterion gives {b}")));
            }
            Ok(())
        }
        GkOp::Ps { zeta0, xi } => {
            let z: KWeight = zeta0.parse().map_err(usage)?;
            let xi = parse_rational(&xi).map_err(usage)?;
            let report = principal_series_structure(&PrincipalSeries::new(z, xi));
            print_json(&CompositionView::from(&report))
        }
    }
}

fn load_function(path: &Path) -> Result<GridFunction, CliError> {
    read_json(path)
}

fn osc(op: OscOp, cfg: &SuiteConfig) -> CliResult {
    match op {
        OscOp::CheckCommutators { kmax, tol } => {
            #[derive(Serialize)]
            struct Row {
                k: usize,
                pm_minus_kappa: f64,
                kappa_p_minus_2p: f64,
                kappa_m_plus_2m: f64,
                sigma_x_plus_y: f64,
                sigma_x_minus_y: f64,
            }
            let rel = |a: &GridFunction, b: &GridFunction, scale: f64| -> Result<f64, CliError> {
                Ok(a.sub(b).map_err(usage)?.l2_norm() / scale)
            };
            let two = Complex64::new(2.0, 0.0);
            let mut rows = Vec::new();
            for k in 0..=kmax {
                let psi = hermite_basis_function(cfg.grid, k).map_err(usage)?;
                let step = |e| CliError::Failed(format!("psi_{k}: {e}"));
                let lie = |op| act_lie(op, &psi).map_err(step);
                let (p, m, kap) = (lie(LieOp::P)?, lie(LieOp::M)?, lie(LieOp::Kappa)?);
                let scale = |f: &GridFunction| f.l2_norm().max(psi.l2_norm());
                let pm = commutator(LieOp::P, LieOp::M, &psi).map_err(step)?;
                let kp = commutator(LieOp::Kappa, LieOp::P, &psi).map_err(step)?;
                let km = commutator(LieOp::Kappa, LieOp::M, &psi).map_err(step)?;
                let (p2, m2) = (p.scale(two), m.scale(-two));
                let sx = fourier(&lie(LieOp::X)?).map_err(step)?;
                let ys = act_lie(LieOp::Y, &fourier(&psi).map_err(step)?).map_err(step)?;
                rows.push(Row {
                    k,
                    pm_minus_kappa: rel(&pm, &kap, scale(&kap))?,
                    kappa_p_minus_2p: rel(&kp, &p2, scale(&p2))?,
                    kappa_m_plus_2m: rel(&km, &m2, scale(&m2))?,
                    sigma_x_plus_y: rel(&sx, &ys.scale(-Complex64::new(1.0, 0.0)), sx.l2_norm())?,
                    sigma_x_minus_y: rel(&sx, &ys, sx.l2_norm())?,
                });
            }
            print_json(&rows)?;
            let worst = rows
                .iter()
                .map(|r| r.pm_minus_kappa.max(r.kappa_p_minus_2p).max(r.kappa_m_plus_2m).max(r.sigma_x_plus_y))
                .fold(0.0, f64::max);
            if worst > tol {
                return Err(CliError::Failed(format!("largest residual {worst:.3e} exceeds {tol:.1e}")));
            }
            Ok(())
        }
        OscOp::Generate { kind, k, parity, terms, out } => {
            let f = match kind {
                TestFn::Hermite => hermite_basis_function(cfg.grid, k).map_err(usage)?,
                TestFn::Mixture => {
                    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                    gaussian_mixture(&mut rng, cfg.grid, parity, terms).map_err(usage)?
                }
            };
            emit(out.as_deref(), &f)
        }
        OscOp::Sample { input, nmax, out } => {
            let f = load_function(&input)?;
            let s = sample_map(&f, nmax).map_err(usage)?;
            emit(out.as_deref(), &s)
        }
        OscOp::Poisson { input } => {
            let f = load_function(&input)?;
            print_json(&poisson_residual(&f).map_err(usage)?)
        }
    }
}

fn interp(op: InterpOp, cfg: &SuiteConfig) -> CliResult {
    match op {
        InterpOp::Design { nmax, kmax, parity, out } => {
            #[derive(Serialize)]
            struct DesignOut {
                n_max: usize,
                k_max: usize,
                parity: Parity,
                kernel_dim: usize,
                smallest_singular_values: Vec<f64>,
                left_kernel_dim: usize,
                left_kernel_rows: Vec<usize>,
                poisson_alignment: f64,
            }
            let d = build_design(nmax, kmax, cfg.grid, parity).map_err(usage)?;
            let k = numerical_kernel(&d, 1e-10);
            let lk = left_kernel(&d, ROW_RESOLUTION, RowSupport::ResolvedSquares).map_err(usage)?;
            let w = PoissonFunctional::new(nmax).vector(&d);
            let mut on_rows = w.map(|_| Complex64::new(0.0, 0.0));
            for &r in &lk.rows_used {
                on_rows[r] = w[r];
            }
            if let Some(path) = &out {
                let rows = k.singular_values.iter().enumerate().map(|(i, s)| vec![i.to_string(), format!("{s:e}")]);
                write_atomic(path, &csv_bytes(&["index", "singular_value"], rows)?)?;
            }
            print_json(&DesignOut {
                n_max: nmax,
                k_max: kmax,
                parity,
                kernel_dim: k.kernel_dim,
                smallest_singular_values: k.smallest_singular_values,
                left_kernel_dim: lk.dim(),
                left_kernel_rows: lk.rows_used.clone(),
                poisson_alignment: lk.alignment(&on_rows),
            })
        }
        InterpOp::Reconstruct { samples, kmax, parity, out } => {
            #[derive(Serialize)]
            struct Summary {
                relative_residual: f64,
                poisson_residual: Complex64,
                condition: f64,
            }
            let s: SampleVector = read_json(&samples)?;
            let r = reconstruct(&s, kmax, cfg.grid, parity, SolveOptions::default()).map_err(usage)?;
            let summary = Summary { relative_residual: r.relative_residual, poisson_residual: r.poisson_residual, condition: r.condition };
            match out {
                Some(p) => {
                    write_json(&p, &r.coeffs)?;
                    print_json(&summary)
                }
                None => print_json(&r.coeffs),
            }
        }
        InterpOp::MvReport { sector, dim, nmax, kmax } => {
            let sector = match sector {
                SectorArg::Even => Sector::Even,
                SectorArg::Odd => Sector::Odd,
                SectorArg::Radial if dim % 2 == 1 => Sector::Radial(dim),
                SectorArg::Radial => return Err(usage(format!("radial dimension must be odd, got {dim}"))),
            };
            let k = kmax.unwrap_or(2 * (nmax + 1) - sector.expected_h0());
            print_json(&mv_dimension_report(cfg.grid, nmax, k, sector).map_err(usage)?)
        }
    }
}

fn cohom(rep: &Path) -> CliResult {
    #[derive(Serialize)]
    struct Out<S> {
        #[serde(flatten)]
        summary: S,
        bar_resolution: (usize, usize),
    }
    let file: RepFile = read_json(rep)?;
    let rep = file.into_rep().map_err(usage)?;
    let summary = rep.summary();
    let bar = match &rep {
        fourier_interp::cohomology::AnyRep::Exact(r) => bar_resolution_dims(r),
        fourier_interp::cohomology::AnyRep::Float(r) => bar_resolution_dims(r),
    };
    let agree = (summary.h0, summary.h1) == bar;
    print_json(&Out { summary, bar_resolution: bar })?;
    if !agree {
        return Err(CliError::Failed("Mayer-Vietoris and bar-resolution dimensions differ".into()));
    }
    Ok(())
}

fn cusp(op: CuspOp, cfg: &SuiteConfig) -> CliResult {
    match op {
        CuspOp::Solve { lambda, lambda_im, input, out, residual_report } => {
            #[derive(Serialize)]
            struct Summary {
                lambda: Complex64,
                roots: fourier_interp::cusp::IndicialRoots,
                #[serde(skip_serializing_if = "Option::is_none")]
                residual: Option<f64>,
                #[serde(skip_serializing_if = "Option::is_none")]
                growth: Option<Vec<fourier_interp::cusp::GrowthEntry>>,
            }
            let f: CuspProfile = read_json(&input)?;
            f.validate().map_err(usage)?;
            let lambda = Complex64::new(lambda, lambda_im);
            let s = solve_cusp(&f, lambda).map_err(|e| CliError::Failed(e.to_string()))?;
            let summary = Summary {
                lambda,
                roots: s.roots,
                residual: residual_report.then_some(s.residual),
                growth: residual_report.then(|| growth_report(&s.g, 3)),
            };
            match out {
                Some(p) => {
                    write_json(&p, &s.g)?;
                    print_json(&summary)
                }
                None => print_json(&s.g),
            }
        }
        CuspOp::Bump { y0, points, out } => {
            if !(y0 > 0.0) || points < 17 {
                return Err(usage("need y0 > 0 and at least 17 points"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            emit(out.as_deref(), &random_bump_profile(&mut rng, y0, points))
        }
    }
}

fn heis(op: HeisOp) -> CliResult {
    let HeisOp::Relations { profile, radius, tdepth, table } = op;
    if radius == 0 || tdepth == 0 {
        return Err(usage("radius and tdepth must be positive"));
    }
    let phi = match profile.as_str() {
        "reference" => HomogeneousForm::reference(),
        "cubic" => HomogeneousForm::cubic_reference(),
        path => {
            let file: ProfileFile = read_json(Path::new(path))?;
            HomogeneousForm::from_samples(&file).map_err(usage)?
        }
    };
    let c = coefficients_until_decayed(&phi, &QuadratureConfig::default()).map_err(|e| CliError::Failed(e.to_string()))?;
    let rows = relation_table(&phi, &c, radius, tdepth);
    if let Some(path) = &table {
        let body = rows.iter().map(|r| {
            vec![r.radius.to_string(), r.tdepth.to_string(), format!("{:e}", r.r_a), format!("{:e}", r.r_i), format!("{:e}", r.r_j)]
        });
        write_atomic(path, &csv_bytes(&["R", "T", "r_A", "r_I", "r_J"], body)?)?;
    }
    print_json(&rows)
}

/// Per-criterion record without wall-clock fields, so reports from identical
/// configurations are byte-identical.
#[derive(Serialize)]
struct ReportEntry<'a> {
    id: u8,
    title: &'a str,
    passed: bool,
    metrics: &'a [fourier_interp::suite::Metric],
    notes: &'a [String],
    #[serde(skip_serializing_if = "Option::is_none")]
    time_limit_ms: Option<f64>,
}

impl<'a> From<&'a CriterionResult> for ReportEntry<'a> {
    fn from(r: &'a CriterionResult) -> Self {
        Self { id: r.id, title: r.title, passed: r.passed, metrics: &r.metrics, notes: &r.notes, time_limit_ms: r.time_limit_ms }
    }
}

#[derive(Serialize)]
struct Report<'a> {
    config: &'a SuiteConfig,
    passed: bool,
    criteria: Vec<ReportEntry<'a>>,
}

fn run(target: &str, out_dir: &Path, cfg: &SuiteConfig) -> CliResult {
    let ids: Vec<u8> = match target {
        "all" => (1..=10).collect(),
        t => match t.parse::<u8>() {
            Ok(id @ 1..=10) => vec![id],
            _ => return Err(usage(format!("run target must be `all` or 1-10, got {t:?}"))),
        },
    };
    // Criteria run concurrently; each writes its own file, the summary is
    // assembled afterwards on this thread.
    let results: Vec<Result<CriterionResult, CliError>> = std::thread::scope(|s| {
        let handles: Vec<_> = ids
            .iter()
            .map(|&id| {
                s.spawn(move || {
                    let r = run_criterion(id, cfg).expect("id in range");
                    write_json(&out_dir.join(format!("criterion-{id:02}.json")), &ReportEntry::from(&r))?;
                    Ok(r)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("criterion thread panicked")).collect()
    });
    let results = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let passed = results.iter().all(|r| r.passed);
    let report = Report { config: cfg, passed, criteria: results.iter().map(ReportEntry::from).collect() };
    write_json(&out_dir.join("report.json"), &report)?;
    let rows = results.iter().map(|r| {
        vec![r.id.to_string(), r.title.to_string(), r.passed.to_string(), format!("{:.1}", r.elapsed_ms), r.summary()]
    });
    write_atomic(&out_dir.join("report.csv"), &csv_bytes(&["criterion", "title", "passed", "elapsed_ms", "summary"], rows)?)?;
    for r in &results {
        println!("criterion {:>2} [{}] {}: {}", r.id, if r.passed { "PASS" } else { "FAIL" }, r.title, r.summary());
    }
    if passed {
        Ok(())
    } else {
        let failed: Vec<String> = results.iter().filter(|r| !r.passed).map(|r| r.id.to_string()).collect();
        Err(CliError::Failed(format!("criteria {} failed; see {}", failed.join(", "), out_dir.join("report.json").display())))
    }
}
