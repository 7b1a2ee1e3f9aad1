use fourier_interp::cohomology::{bar_resolution_dims, mv_cohomology, GroupRep};
use fourier_interp::cusp::{random_bump_profile, solve_cusp, CuspProfile};
use fourier_interp::gk::{casimir_eigenvalue, complementary_module, ext1_dim, ext1_weight_criterion, GkModule, KWeight};
use fourier_interp::heisenberg::{coefficients, poisson_values, HomogeneousForm, QuadratureConfig};
use fourier_interp::oscillator::testfns::random_hermite_combination;
use fourier_interp::oscillator::{fourier, hermite_synthesis, sample_map, Grid, HermiteCoefficients, Parity};
use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::Rational64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn small_matrix(dim: usize) -> impl Strategy<Value = DMatrix<Rational64>> {
    prop::collection::vec(-2i64..=2, dim * dim)
        .prop_map(move |v| DMatrix::from_row_iterator(dim, dim, v.into_iter().map(Rational64::from_integer)))
}

fn small_rep() -> impl Strategy<Value = GroupRep<Rational64>> {
    (1usize..=3)
        .prop_flat_map(|d| (small_matrix(d), small_matrix(d)))
        .prop_filter_map("singular", |(a, b)| GroupRep::new(a, b).ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn euler_characteristic_and_bar_agreement(rep in small_rep()) {
        let r = mv_cohomology(&rep);
        prop_assert_eq!(r.h0 as i64 - r.h1 as i64, -(rep.dim() as i64));
        prop_assert_eq!((r.h0, r.h1), bar_resolution_dims(&rep));
    }

    #[test]
    fn cohomology_is_conjugation_invariant(rep in small_rep(), s in small_matrix(3)) {
        let d = rep.dim();
        let s = s.view((0, 0), (d, d)).into_owned();
        if let Some(conj) = rep.conjugate(&s) {
            let (a, b) = (mv_cohomology(&rep), mv_cohomology(&conj));
            prop_assert_eq!((a.h0, a.h1, a.coinv_e, a.coinv_f), (b.h0, b.h1, b.coinv_e, b.coinv_f));
        }
    }

    #[test]
    fn swapping_generators_keeps_dimensions(rep in small_rep()) {
        let swapped = GroupRep::new(rep.rho_f().clone(), rep.rho_e().clone()).unwrap();
        let (a, b) = (mv_cohomology(&rep), mv_cohomology(&swapped));
        prop_assert_eq!((a.h0, a.h1), (b.h0, b.h1));
        prop_assert_eq!((a.coinv_e, a.coinv_f), (b.coinv_f, b.coinv_e));
    }

    #[test]
    fn complement_preserves_casimir(num in -30i64..30, q in 1u32..6, lowest in any::<bool>()) {
        let z = KWeight::new(num, q).unwrap();
        let m = if lowest { GkModule::LowestWeight(z) } else { GkModule::HighestWeight(z) };
        if let Ok(c) = complementary_module(&m) {
            prop_assert_eq!(casimir_eigenvalue(&c.module), casimir_eigenvalue(&m));
            if !c.finite_dimensional {
                prop_assert_eq!(complementary_module(&c.module).unwrap().module, m);
            }
        }
    }

    #[test]
    fn ext1_rule_matches_ladder_rank(a in -12i64..12, b in -12i64..12, q in 1u32..4, la in any::<bool>(), lb in any::<bool>()) {
        let build = |n: i64, lowest: bool| {
            let z = KWeight::new(n, q).unwrap();
            if lowest { GkModule::LowestWeight(z) } else { GkModule::HighestWeight(z) }
        };
        let (w, v) = (build(a, la), build(b, lb));
        prop_assert_eq!(ext1_dim(&w, &v).ok(), ext1_weight_criterion(&w, &v).ok());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    // σψ_k = (−i)^k ψ_k, independent of the FFT path.
    #[test]
    fn fourier_acts_diagonally_on_hermite_functions(seed in any::<u64>(), odd in any::<bool>()) {
        let grid = Grid::default();
        let parity = if odd { Parity::Odd } else { Parity::Even };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_hermite_combination(&mut rng, parity, 12, 4);
        let rotated = HermiteCoefficients {
            parity,
            coeffs: c.coeffs.iter().enumerate()
                .map(|(j, z)| z * Complex64::new(0.0, -1.0).powu(HermiteCoefficients::degree(parity, j) as u32))
                .collect(),
        };
        let lhs = fourier(&hermite_synthesis(&c, grid).unwrap()).unwrap();
        let rhs = hermite_synthesis(&rotated, grid).unwrap();
        prop_assert!(lhs.sub(&rhs).unwrap().l2_norm() < 1e-9 * rhs.l2_norm());
    }

    #[test]
    fn even_samples_satisfy_poisson(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_hermite_combination(&mut rng, Parity::Even, 16, 5);
        let s = sample_map(&hermite_synthesis(&c, Grid::default()).unwrap(), 60).unwrap();
        let scale: f64 = s.a.iter().map(|z| z.norm()).sum();
        prop_assert!(s.poisson_residual().norm() < 1e-9 * scale);
    }

    #[test]
    fn cusp_solution_is_linear(seed in any::<u64>(), re in -1.0f64..2.0, im in -1.0f64..1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f1 = random_bump_profile(&mut rng, 1.0, 2001);
        let f2 = random_bump_profile(&mut rng, 1.0, 2001);
        let lambda = Complex64::new(re, im);
        let (a, b) = (Complex64::new(0.7, -0.2), Complex64::new(-1.3, 0.5));
        let g = solve_cusp(&f1.linear_combination(a, &f2, b), lambda).unwrap().g;
        let g1 = solve_cusp(&f1, lambda).unwrap().g;
        let g2 = solve_cusp(&f2, lambda).unwrap().g;
        let combo = g1.linear_combination(a, &g2, b);
        let diff = g.linear_combination(Complex64::new(1.0, 0.0), &combo, Complex64::new(-1.0, 0.0));
        prop_assert!(diff.sup_norm() <= 1e-10 * g.sup_norm().max(1.0));
    }

    #[test]
    fn zero_forcing_gives_zero(re in -1.0f64..2.0, im in -1.0f64..1.0) {
        let f = CuspProfile::zero(1.0, 10.0, 501).unwrap();
        let s = solve_cusp(&f, Complex64::new(re, im)).unwrap();
        prop_assert_eq!(s.g.sup_norm(), 0.0);
    }

    #[test]
    fn heisenberg_coefficients_scale_and_swap(alpha in 0.5f64..1.5, beta in -0.4f64..0.4, gamma in 0.5f64..1.5, c in 0.2f64..3.0) {
        let cfg = QuadratureConfig::default();
        let phi = HomogeneousForm::rational(alpha, beta, gamma);
        let base = coefficients(&phi, 16, &cfg).unwrap();
        let scaled = coefficients(&phi.scaled(c), 16, &cfg).unwrap();
        let swapped = coefficients(&phi.swapped(), 16, &cfg).unwrap();
        for n in -16..=16 {
            prop_assert!((scaled.a(n) - base.a(n) * c).norm() < 1e-12 * c.max(1.0));
            prop_assert!((swapped.a(n) - base.b(n)).norm() < 1e-12);
        }
        let (p, q) = (poisson_values(&phi, &base), poisson_values(&phi.swapped(), &swapped));
        prop_assert!((p.column - p.row).abs() < 1e-8 && (q.column - q.row).abs() < 1e-8);
    }
}
