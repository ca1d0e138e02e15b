use proptest::prelude::*;

use hypermobius::projline::equivalent;
use hypermobius::subgroups::{group_law_residual, SigmaKind, SubgroupSpec};
use hypermobius::{AlgebraKind, Hypercomplex, Mat2, MoebiusMap, ProjPoint, RealMat2};

fn kind() -> impl Strategy<Value = AlgebraKind> {
    prop_oneof![Just(AlgebraKind::Complex), Just(AlgebraKind::Dual), Just(AlgebraKind::Double)]
}

fn num(kind: AlgebraKind) -> impl Strategy<Value = Hypercomplex> {
    (-10.0..10.0f64, -10.0..10.0f64).prop_map(move |(re, im)| Hypercomplex::new(kind, re, im))
}

fn away_from_zero() -> impl Strategy<Value = f64> {
    (0.2..5.0f64, any::<bool>()).prop_map(|(x, neg)| if neg { -x } else { x })
}

fn unit(kind: AlgebraKind) -> impl Strategy<Value = Hypercomplex> {
    (away_from_zero(), away_from_zero()).prop_map(move |(a, b)| match kind {
        AlgebraKind::Double => Hypercomplex::recompose(a, b),
        _ => Hypercomplex::new(kind, a, b),
    })
}

fn real_mat() -> impl Strategy<Value = RealMat2> {
    prop::array::uniform4(-3.0..3.0f64).prop_map(|[a, b, c, d]| RealMat2::new(a, b, c, d))
}

fn mat(kind: AlgebraKind) -> impl Strategy<Value = Mat2> {
    (real_mat(), real_mat()).prop_map(move |(re, im)| Mat2::from_parts(kind, &re, &im))
}

fn sigma_kind() -> impl Strategy<Value = SigmaKind> {
    prop::sample::select(SigmaKind::ALL.to_vec())
}

fn close(x: Hypercomplex, y: Hypercomplex, tol: f64) -> bool {
    let scale = 1f64.max(x.re.abs() + x.im.abs()).max(y.re.abs() + y.im.abs());
    (x.re - y.re).abs() <= tol * scale && (x.im - y.im).abs() <= tol * scale
}

proptest! {
    #[test]
    fn product_is_commutative_and_associative((x, y, z) in kind().prop_flat_map(|k| (num(k), num(k), num(k)))) {
        prop_assert!(close(x * y, y * x, 1e-12));
        prop_assert!(close((x * y) * z, x * (y * z), 1e-12));
        prop_assert!(close(x * (y + z), x * y + x * z, 1e-12));
    }

    #[test]
    fn conjugate_product_is_the_norm(x in kind().prop_flat_map(num)) {
        let n = x * x.conj();
        prop_assert!(close(n, Hypercomplex::new(x.kind, x.norm_sq(), 0.0), 1e-12));
    }

    #[test]
    fn units_invert(x in kind().prop_flat_map(unit)) {
        let inv = x.invert().unwrap();
        prop_assert!(close(x * inv, Hypercomplex::one(x.kind), 1e-9));
    }

    #[test]
    fn square_roots_square_back(x in kind().prop_flat_map(num)) {
        for r in x.sqrt_all() {
            prop_assert!(close(r * r, x, 1e-9));
        }
    }

    #[test]
    fn double_components_round_trip(plus in -10.0..10.0f64, minus in -10.0..10.0f64) {
        let (p, m) = Hypercomplex::recompose(plus, minus).decompose().unwrap();
        prop_assert!((p - plus).abs() < 1e-12 && (m - minus).abs() < 1e-12);
    }

    #[test]
    fn determinant_is_multiplicative((x, y) in kind().prop_flat_map(|k| (mat(k), mat(k)))) {
        prop_assert!(close((x * y).det(), x.det() * y.det(), 1e-10));
    }

    #[test]
    fn adjugate_gives_determinant(x in kind().prop_flat_map(mat)) {
        let expect = Mat2::scalar(x.det());
        prop_assert!((x * x.hat()).max_abs_diff(&expect) <= 1e-10 * (1.0 + x.max_abs().powi(2)));
    }

    #[test]
    fn double_matrix_components_round_trip(p in real_mat(), m in real_mat()) {
        let (p2, m2) = Mat2::from_double_components(&p, &m).double_components().unwrap();
        prop_assert!(p.max_abs_diff(&p2) < 1e-12 && m.max_abs_diff(&m2) < 1e-12);
    }

    #[test]
    fn canonical_class_ignores_unit_scaling(
        (x, y, u) in kind().prop_flat_map(|k| (num(k), num(k), unit(k)))
    ) {
        let Ok(p) = ProjPoint::new(x, y) else { return Ok(()) };
        let q = p.scale(u);
        prop_assert!(p.canonicalize().approx_eq(&q.canonicalize(), 1e-9));
        prop_assert!(equivalent(&p, &q).unwrap());
    }

    #[test]
    fn moebius_composition_matches_product(
        (a, b, x) in kind().prop_flat_map(|k| (mat(k), mat(k), num(k)))
    ) {
        let (Ok(f), Ok(g)) = (MoebiusMap::new(a), MoebiusMap::new(b)) else { return Ok(()) };
        prop_assume!(a.det().is_unit() && b.det().is_unit());
        let p = ProjPoint::affine(x);
        let composed = f.compose(&g).unwrap().apply(&p).unwrap();
        let stepwise = f.apply_point(&g.apply_point(&p).unwrap()).unwrap().canonicalize();
        prop_assert!(composed.approx_eq(&stepwise, 1e-6), "{composed} vs {stepwise}");
        prop_assert_eq!(p.admissible(), g.apply_point(&p).unwrap().admissible());
    }

    #[test]
    fn double_sl_is_a_one_parameter_subgroup(
        sp in sigma_kind(), sm in sigma_kind(), a in 0.2..2.0f64, t1 in -2.0..2.0f64, t2 in -2.0..2.0f64
    ) {
        let spec = SubgroupSpec::DoubleSl { sigma_plus: sp, sigma_minus: sm, a };
        prop_assert!(group_law_residual(&spec, t1, t2).unwrap() < 1e-8);
    }

    #[test]
    fn dual_gl_is_a_one_parameter_subgroup(
        s in sigma_kind(), l1 in -1.0..1.0f64, l in away_from_zero(), t0 in -1.0..1.0f64,
        t1 in -2.0..2.0f64, t2 in -2.0..2.0f64
    ) {
        let spec = SubgroupSpec::DualGl { sigma: s, lambda1: l1, lambda: l / 5.0, t0 };
        prop_assert!(group_law_residual(&spec, t1, t2).unwrap() < 1e-8);
    }

    #[test]
    fn spec_text_round_trips(s in sigma_kind(), l in away_from_zero(), l1 in -1.0..1.0f64, t0 in -1.0..1.0f64) {
        let spec = SubgroupSpec::DualSl { sigma: s, lambda: l, lambda1: l1, t0 };
        let back: SubgroupSpec = spec.to_string().parse().unwrap();
        prop_assert_eq!(back, spec);
    }
}
