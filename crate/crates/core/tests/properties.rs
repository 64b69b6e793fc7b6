//! Property tests for the group, sphere and presentation invariants.

use std::f64::consts::FRAC_PI_3;

use horotube::ford::FordDomain;
use horotube::heisenberg::{
    cygan_distance, heisenberg_product, HeisenbergPoint, HorosphericalPoint,
};
use horotube::hermitian::c;
use horotube::isometry::heisenberg_translation;
use horotube::presentation::FreeWord;
use horotube::smith::{smith_diagonal, AbelianGroup};
use horotube::spheres::{
    f_eval, geographic_point, isometric_sphere, side_of, sphere_of, FFunction, Family,
    GeographicCoord, SphereId,
};
use horotube::triangle::{TriangleGroup, Word};
use proptest::prelude::*;

fn heis() -> impl Strategy<Value = HeisenbergPoint> {
    (-3.0..3.0f64, -3.0..3.0f64, -6.0..6.0f64)
        .prop_map(|(x, y, t)| HeisenbergPoint::new(c(x, y), t))
}

fn word() -> impl Strategy<Value = String> {
    proptest::collection::vec(
        prop_oneof![Just('S'), Just('s'), Just('T'), Just('t')],
        1..8,
    )
    .prop_map(|v| v.into_iter().collect())
}

fn theta() -> impl Strategy<Value = f64> {
    0.0..=FRAC_PI_3
}

fn family() -> impl Strategy<Value = Family> {
    prop_oneof![
        Just(Family::Plus),
        Just(Family::Minus),
        Just(Family::Star),
        Just(Family::Diamond)
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn heisenberg_product_is_associative(a in heis(), b in heis(), d in heis()) {
        let l = heisenberg_product(&heisenberg_product(&a, &b), &d);
        let r = heisenberg_product(&a, &heisenberg_product(&b, &d));
        prop_assert!(l.coord_distance(&r) < 1e-12);
    }

    #[test]
    fn cygan_distance_is_left_invariant(a in heis(), b in heis(), g in heis()) {
        let d0 = cygan_distance(a, b).unwrap();
        let d1 = cygan_distance(heisenberg_product(&g, &a), heisenberg_product(&g, &b)).unwrap();
        prop_assert!((d0 - d1).abs() < 1e-9 * (1.0 + d0));
    }

    #[test]
    fn translations_act_by_the_product(a in heis(), g in heis()) {
        let m = heisenberg_translation(g.z, g.t);
        let img = m.apply(a).unwrap().finite().unwrap().base();
        prop_assert!(img.coord_distance(&heisenberg_product(&g, &a)) < 1e-9);
    }

    #[test]
    fn words_are_unitary_and_invert(w in word(), th in theta()) {
        let g = TriangleGroup::build(th).unwrap();
        let e = g.eval_str(&w).unwrap();
        prop_assert!(e.unitarity_residual() < 1e-8);
        prop_assert!(e.mul(&e.inverse()).identity_residual() < 1e-9);
        let parsed = Word::parse(&w).unwrap();
        prop_assert!(g.evaluate(&parsed.concat(&parsed.inverse())).identity_residual() < 1e-9);
    }

    #[test]
    fn sphere_table_matches_isometric_sphere(f in family(), k in -3i32..=3, th in theta()) {
        let g = TriangleGroup::build(th).unwrap();
        let id = SphereId::new(f, k);
        let closed = sphere_of(id, th);
        let computed = isometric_sphere(&g.evaluate(&id.word())).unwrap();
        prop_assert!(closed.center.coord_distance(&computed.center) < 1e-9);
        prop_assert!((closed.radius - computed.radius).abs() < 1e-9);
    }

    #[test]
    fn left_multiplication_by_t_keeps_the_sphere(m in -3i32..=3, w in word(), th in theta()) {
        let g = TriangleGroup::build(th).unwrap();
        let e = g.eval_str(&w).unwrap();
        prop_assume!(isometric_sphere(&e).is_ok());
        let a = isometric_sphere(&e).unwrap();
        let tm = Word::parse("T").unwrap().pow(m);
        let b = isometric_sphere(&g.evaluate(&tm).mul(&e)).unwrap();
        prop_assert!(a.center.coord_distance(&b.center) < 1e-8 * (1.0 + a.center.t.abs()));
        prop_assert!((a.radius - b.radius).abs() < 1e-9 * a.radius);
    }

    #[test]
    fn g_maps_its_sphere_onto_the_inverse_sphere(w in word(), th in theta(), al in -1.5..1.5f64, be in 0.0..std::f64::consts::PI, s in -1.0..1.0f64) {
        let g = TriangleGroup::build(th).unwrap();
        let e = g.eval_str(&w).unwrap();
        prop_assume!(isometric_sphere(&e).is_ok() && isometric_sphere(&e.inverse()).is_ok());
        let src = isometric_sphere(&e).unwrap();
        let dst = isometric_sphere(&e.inverse()).unwrap();
        let coord = GeographicCoord::new(al, be, s * al.cos().sqrt());
        let p = geographic_point(&src, &coord).unwrap();
        let q = e.apply(p).unwrap();
        let scale = dst.radius * dst.radius;
        prop_assert!(side_of(q, &dst).abs() < 1e-7 * (1.0 + scale));
    }

    #[test]
    fn sides_are_t_equivariant(f in family(), k in -3i32..=3, p in heis(), th in theta()) {
        let g = TriangleGroup::build(th).unwrap();
        let tp = g.t.apply(p).unwrap();
        let a = side_of(p, &sphere_of(SphereId::new(f, k), th));
        let b = side_of(tp, &sphere_of(SphereId::new(f, k + 1), th));
        prop_assert!((a - b).abs() < 1e-8 * (1.0 + a.abs()));
    }

    #[test]
    fn f_functions_agree_in_sign_with_sides(al in -1.5..1.5f64, be in 0.0..std::f64::consts::PI, s in -1.0..1.0f64, th in theta()) {
        let coord = GeographicCoord::new(al, be, s * al.cos().sqrt());
        let base = sphere_of(SphereId::plus(0), th);
        let p = geographic_point(&base, &coord).unwrap();
        for which in [FFunction::Star0, FFunction::Minus0, FFunction::MinusMinus1] {
            let f = f_eval(which, th, &coord);
            let side = side_of(p, &sphere_of(which.sphere(), th));
            if f.abs() > 1e-6 && side.abs() > 1e-6 {
                prop_assert_eq!(f > 0.0, side > 0.0, "{:?} f={} side={}", which, f, side);
            }
        }
    }

    #[test]
    fn window_is_sufficient_near_the_slab(x in -2.0..2.0f64, y in -2.0..3.0f64, t in -8.0..8.0f64, u in 0.0..1.0f64, th in theta()) {
        let p = HorosphericalPoint::new(c(x, y), t, u);
        let small = FordDomain::new(th, 3).unwrap().margin(p).0;
        let large = FordDomain::new(th, 7).unwrap().margin(p).0;
        prop_assert!((small - large).abs() < 1e-12);
    }

    #[test]
    fn free_word_inverse_cancels(v in proptest::collection::vec((0usize..3, -3i32..=3), 0..10)) {
        let w = FreeWord::new(v);
        let id = FreeWord::new(w.syllables().iter().copied().chain(w.inverse().syllables().iter().copied()));
        prop_assert!(id.syllables().is_empty());
    }

    #[test]
    fn smith_diagonal_divides_and_preserves_determinant(m in proptest::collection::vec(-6i64..=6, 9)) {
        let rows: Vec<Vec<i64>> = m.chunks(3).map(|r| r.to_vec()).collect();
        let d = smith_diagonal(&rows).unwrap();
        for pair in d.windows(2) {
            prop_assert!(pair[1] % pair[0] == 0);
        }
        let det = rows[0][0] * (rows[1][1] * rows[2][2] - rows[1][2] * rows[2][1])
            - rows[0][1] * (rows[1][0] * rows[2][2] - rows[1][2] * rows[2][0])
            + rows[0][2] * (rows[1][0] * rows[2][1] - rows[1][1] * rows[2][0]);
        let prod: i64 = if d.len() == 3 { d.iter().product() } else { 0 };
        prop_assert_eq!(det.abs(), prod);
        let g = AbelianGroup::from_relations(&rows, 3).unwrap();
        prop_assert_eq!(g.free_rank, 3 - d.iter().filter(|&&x| x != 0).count());
    }
}
