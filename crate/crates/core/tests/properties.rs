use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hypolab_core::cecoh::{ce_differential, AlgCochain, Representation};
use hypolab_core::dyncoh::{codifferential, diagonality_residual, differential, Cochain};
use hypolab_core::exterior::{ExtVector, MultiIndex};
use hypolab_core::heis::{
    attempt_solve_multiplication, heisenberg_gh_check, multiplication_symbol, HeisenbergAction,
    MultiplicationOutcome, SchrodingerModel,
};
use hypolab_core::liealg::LieAlgebra;
use hypolab_core::rational::{format_q, parse_q, QMatrix, Q};
use hypolab_core::torus::{laplacian_symbol, solve_laplacian, FourierSeries, TranslationAction};

fn small_q(rng: &mut ChaCha8Rng) -> Q {
    Q::new(rng.gen_range(-6i64..=6).into(), rng.gen_range(1i64..=5).into())
}

fn random_ext(rng: &mut ChaCha8Rng, k: usize, degree: usize) -> ExtVector<Q> {
    let terms = MultiIndex::all(k, degree).into_iter().map(|i| (i, small_q(rng))).collect::<Vec<_>>();
    ExtVector::from_terms(k, degree, terms).unwrap()
}

fn algebras() -> Vec<LieAlgebra> {
    vec![
        LieAlgebra::heisenberg(1),
        LieAlgebra::heisenberg(2),
        LieAlgebra::filiform(3),
        LieAlgebra::free_nilpotent_2_3(),
        LieAlgebra::abelian(3),
    ]
}

fn rel_close(a: Complex64, b: Complex64, scale: f64) -> bool {
    (a - b).norm() <= 1e-10 * scale.max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rational_text_round_trip(n in -10_000i64..10_000, d in 1i64..10_000) {
        let x = Q::new(n.into(), d.into());
        prop_assert_eq!(parse_q(&format_q(&x)).unwrap(), x);
    }

    #[test]
    fn wedge_contract_adjoint(seed in any::<u64>(), k in 1usize..=5, j in 0usize..5, degree in 0usize..5) {
        prop_assume!(j < k && degree < k);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_ext(&mut rng, k, degree);
        let b = random_ext(&mut rng, k, degree + 1);
        let lhs = a.wedge_e(j).unwrap().inner_product(&b).unwrap();
        let rhs = a.inner_product(&b.contract(j).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert!(a.wedge_e(j).unwrap().wedge_e(j).unwrap().is_zero());
    }

    #[test]
    fn ce_differential_squares_to_zero(seed in any::<u64>(), which in 0usize..5, adjoint in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alg = algebras().swap_remove(which);
        let n = alg.dim();
        let rep = if adjoint { Representation::adjoint(alg) } else { Representation::trivial(alg, 2) };
        let degree = rng.gen_range(0..n - 1);
        let values = (0..rep.cochain_dim(degree)).map(|_| small_q(&mut rng)).collect();
        let w = AlgCochain::from_values(&rep, degree, values).unwrap();
        let dd = ce_differential(&rep, &ce_differential(&rep, &w).unwrap()).unwrap();
        prop_assert!(dd.is_zero());
    }

    #[test]
    fn series_invariant_under_basis_change(seed in any::<u64>(), g in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = LieAlgebra::heisenberg(g);
        let n = h.dim();
        let p = loop {
            let rows: Vec<Vec<Q>> = (0..n).map(|_| (0..n).map(|_| small_q(&mut rng)).collect()).collect();
            let p = QMatrix::from_rows(&rows);
            if p.inverse().is_some() {
                break p;
            }
        };
        let h2 = h.change_basis(&p).unwrap();
        prop_assert_eq!(h2.lower_central_dims(), h.lower_central_dims());
        prop_assert_eq!(h2.center().dim(), 1);
    }

    #[test]
    fn dynamical_complex(seed in any::<u64>(), k in 2usize..=3, degree in 0usize..=2) {
        prop_assume!(degree < k);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let act = TranslationAction::golden_k(k);
        let w = Cochain::random(&act, degree, 2, 3, &mut rng);
        let eta = Cochain::random(&act, degree + 1, 2, 3, &mut rng);
        let dw = differential(&w).unwrap();
        let scale = w.sobolev_norm(2.0) * eta.sobolev_norm(2.0);
        prop_assert!(rel_close(dw.inner(&eta).unwrap(), w.inner(&codifferential(&eta).unwrap()).unwrap(), scale));
        if degree + 2 <= k {
            prop_assert!(differential(&dw).unwrap().max_abs() <= 1e-9 * w.sobolev_norm(2.0).max(1.0));
        }
        prop_assert!(diagonality_residual(&w).unwrap() <= 1e-12);
    }

    #[test]
    fn laplacian_solve_then_apply(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let act = TranslationAction::golden();
        let v = FourierSeries::random(2, 6, 8, rng.gen(), &mut rng);
        let u = solve_laplacian(&act, &v).unwrap().solution;
        let back = u.map_multiplier(|n| Complex64::new(laplacian_symbol(&act, n).unwrap(), 0.0));
        prop_assert!(back.sub(&v.without_mean()).unwrap().l2_norm() <= 1e-12 * v.l2_norm().max(1.0));
    }

    #[test]
    fn symbol_symmetries(x in proptest::collection::vec(-5.0f64..5.0, 3), flip in 0usize..3) {
        let m = SchrodingerModel::with_defaults(3, 2).unwrap();
        let s = multiplication_symbol(&m, &x);
        let swapped = [x[1], x[0], x[2]];
        let mut flipped = x.clone();
        flipped[flip] = -flipped[flip];
        prop_assert_eq!(multiplication_symbol(&m, &swapped), s);
        prop_assert_eq!(multiplication_symbol(&m, &flipped), s);
        prop_assert!(s >= 0.0);
    }

    #[test]
    fn witness_scales_linearly(c in prop_oneof![-50.0f64..-1e-3, 1e-3f64..50.0]) {
        let m = SchrodingerModel::new(1, 1, 3.0, 0.05, 1e-9).unwrap();
        let v: Vec<f64> = m.sample(|x| c * (-x[0] * x[0]).exp());
        match attempt_solve_multiplication(&m, &v).unwrap() {
            MultiplicationOutcome::Obstruction { value, .. } => prop_assert!((value - c).abs() <= 1e-15 * c.abs()),
            other => prop_assert!(false, "expected obstruction, got {:?}", other.is_obstruction()),
        }
    }

    #[test]
    fn heisenberg_check_reparametrization(seed in any::<u64>(), which in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let act = vec![HeisenbergAction::golden_with_center(), HeisenbergAction::xy(), HeisenbergAction::x_flow()]
            .swap_remove(which);
        let k = act.k();
        let p = loop {
            let rows: Vec<Vec<Q>> = (0..k).map(|_| (0..k).map(|_| small_q(&mut rng)).collect()).collect();
            let p = QMatrix::from_rows(&rows);
            if p.inverse().is_some() {
                break p;
            }
        };
        let a = heisenberg_gh_check(&act, 1.0, 60);
        let b = heisenberg_gh_check(&act.reparametrize(&p).unwrap(), 1.0, 60);
        prop_assert_eq!(a.center_test, b.center_test);
        prop_assert_eq!(a.abelian, b.abelian);
        prop_assert_eq!(a.verdict, b.verdict);
        prop_assert_eq!(a.completion.image_dim, b.completion.image_dim);
    }
}
