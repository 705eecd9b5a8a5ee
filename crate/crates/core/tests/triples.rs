use chgeom::hermitian::{alpha, beta, tance};
use chgeom::isometry::{reflection, CubeRoot, Isometry};
use chgeom::linalg::{c, cr};
use chgeom::sample::{random_isometry, random_point, random_scoords};
use chgeom::triples::{
    apply_program, classify_triple, connect_triples, decompose_three_reflections, gram_from_coords,
    horizontal_line, s_coords, triple_from_coords, vertical_line, BendMove, BendProgram, Pair,
    SCoords, Sheet, Triple, TripleClass,
};
use chgeom::{Error, Mat3};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const PATTERNS: [[i8; 3]; 4] = [[-1, -1, -1], [-1, 1, -1], [1, -1, -1], [-1, -1, 1]];

fn frozen_coords() -> SCoords {
    SCoords::on_surface(1.2, 2.0, 3.0, [-1, -1, -1], 0.5)
}

#[test]
fn frozen_surface_point() {
    let c0 = frozen_coords();
    // (t₁−1)(t₂−1) − t₁t₂(t−1)² − α²/(t₁t₂)
    assert!((c0.beta - (2.0 - 6.0 * 0.04 - 0.25 / 6.0)).abs() < 1e-15);
    assert!(c0.residual().abs() < 1e-15);
    assert_eq!(c0.sheet(), Sheet::Above);
    let g = gram_from_coords(&c0).unwrap();
    assert!((g.get(0, 1) - cr(2f64.sqrt())).norm() < 1e-15);
    assert!((g.get(1, 2) - cr(3f64.sqrt())).norm() < 1e-15);
    assert!((g.get(2, 0) - c(-1.2 * 6f64.sqrt(), -0.5 / 6f64.sqrt())).norm() < 1e-14);
    let t = triple_from_coords(&c0).unwrap();
    assert_eq!(classify_triple(&t), TripleClass::StronglyRegular);
    assert!((alpha(&t.p1, &t.p2, &t.p3) - 0.5).abs() < 1e-12);
    assert!((beta(&t.p1, &t.p2, &t.p3) - (1.76 - 1.0 / 24.0)).abs() < 1e-12);
}

#[test]
fn inadmissible_coordinates_are_rejected() {
    let mut c0 = frozen_coords();
    c0.beta = -c0.beta;
    assert!(matches!(triple_from_coords(&c0), Err(Error::InadmissibleCoords(_))));
}

#[test]
fn trace_minus_one_is_rejected() {
    let mut r = ChaCha8Rng::seed_from_u64(1);
    let p = random_point(&mut r);
    assert_eq!(decompose_three_reflections(&reflection(&p)), Err(Error::TraceMinusOne));
    // a nontrivial cube root of unity times the identity is not regular
    let d = Isometry::from_matrix_unchecked(Mat3::identity() * CubeRoot::new(1).unwrap().value());
    assert!(decompose_three_reflections(&d).is_err());
}

#[test]
fn program_json_format() {
    let prog = BendProgram {
        moves: vec![BendMove { pair: Pair::P23, s: 0.5 }, BendMove { pair: Pair::P12, s: -1.0 }],
    };
    let s = serde_json::to_string(&prog).unwrap();
    assert_eq!(s, r#"[{"pair":"23","s":0.5},{"pair":"12","s":-1.0}]"#);
    let back: BendProgram = serde_json::from_str(&s).unwrap();
    assert_eq!(back, prog);
}

#[test]
fn coords_json_format() {
    let c0 = frozen_coords();
    let v = serde_json::to_value(c0).unwrap();
    for key in ["t", "t1", "t2", "sigma", "alpha", "beta"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    let back: SCoords = serde_json::from_value(v).unwrap();
    assert_eq!(back, c0);
}

#[test]
fn vertical_and_horizontal_lines_hit_targets() {
    let t = triple_from_coords(&frozen_coords()).unwrap();
    for sheet in [Sheet::Above, Sheet::Below] {
        let s = vertical_line(&t, 5.0, sheet).unwrap();
        let moved = apply_program(&t, &BendProgram { moves: vec![BendMove { pair: Pair::P12, s }] }).unwrap();
        let c1 = s_coords(&moved).unwrap();
        assert!((c1.t2 - 5.0).abs() < 1e-9);
        assert!((c1.t1 - 2.0).abs() < 1e-11);
        assert_eq!(c1.sheet(), sheet);
        let s = horizontal_line(&t, 4.0, sheet).unwrap();
        let moved = apply_program(&t, &BendProgram { moves: vec![BendMove { pair: Pair::P23, s }] }).unwrap();
        let c2 = s_coords(&moved).unwrap();
        assert!((c2.t1 - 4.0).abs() < 1e-9);
        assert!((c2.t2 - 3.0).abs() < 1e-11);
        assert_eq!(c2.sheet(), sheet);
    }
    assert_eq!(vertical_line(&t, 0.5, Sheet::Above), Err(Error::Unreachable));
}

fn random_triple(seed: u64, k: usize) -> (SCoords, Triple) {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let c0 = random_scoords(&mut r, PATTERNS[k % 4], false);
    let t = triple_from_coords(&c0).unwrap().map(&random_isometry(&mut r, 0.5));
    (c0, t)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn coordinates_roundtrip(seed in any::<u64>(), k in 0usize..4) {
        let (c0, t) = random_triple(seed, k);
        let c1 = s_coords(&t).unwrap();
        prop_assert!(c0.distance(&c1) <= 1e-9);
        prop_assert_eq!(c0.sigma, c1.sigma);
        prop_assert!(c1.residual().abs() <= 1e-9);
    }

    #[test]
    fn decomposition_reproduces_products(seed in any::<u64>(), k in 0usize..4) {
        let (_, t) = random_triple(seed, k);
        let f = t.product();
        prop_assume!((f.trace() + cr(1.0)).norm() > 1e-6);
        let d = decompose_three_reflections(&f).unwrap();
        prop_assert!(classify_triple(&d).is_regular());
        prop_assert!((d.product().matrix() - f.matrix()).norm() <= 1e-8);
    }

    #[test]
    fn connected_triples_share_coordinates(seed in any::<u64>(), k in 0usize..4) {
        let (ca, a) = random_triple(seed, k);
        let mut r = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        // bend A to get a second triple with the same invariants
        let moves = vec![
            BendMove { pair: Pair::P12, s: rand::Rng::random_range(&mut r, -1.0..1.0) },
            BendMove { pair: Pair::P23, s: rand::Rng::random_range(&mut r, -1.0..1.0) },
        ];
        let b = apply_program(&a, &BendProgram { moves }).unwrap();
        let conn = connect_triples(&a, &b).unwrap();
        prop_assert!(conn.program.len() <= 3);
        let end = apply_program(&a, &conn.program).unwrap();
        prop_assert!(s_coords(&end).unwrap().distance(&s_coords(&b).unwrap()) <= 1e-8);
        for (p, q) in end.map(&conn.conjugator).points().iter().zip(b.points().iter()) {
            prop_assert!(p.approx_eq(q, 1e-7));
        }
        prop_assert!((tance(&end.p1, &end.p2) - tance(&b.p1, &b.p2)).abs() <= 1e-8 * ca.t1.abs().max(1.0));
    }
}
