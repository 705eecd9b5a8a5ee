use chgeom::hermitian::{
    alpha, beta, form, gram_of, line_type, norm2, point, polar_point, realize_gram, tance, tau,
    LineType, Point,
};
use chgeom::linalg::{c, cr};
use chgeom::sample::{random_isometry, random_point, random_vector};
use chgeom::{Error, Gram, Vector};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn v(a: [(f64, f64); 3]) -> Vector {
    Vector::new(c(a[0].0, a[0].1), c(a[1].0, a[1].1), c(a[2].0, a[2].1))
}

fn frozen_points() -> [Point; 3] {
    [
        point(v([(0.3, 0.1), (-0.2, 0.0), (1.0, 0.0)])).unwrap(),
        point(v([(1.0, 0.0), (0.0, 0.4), (0.5, 0.0)])).unwrap(),
        point(v([(-0.1, 0.0), (0.2, 0.3), (1.0, 0.0)])).unwrap(),
    ]
}

// reference values computed at 50 digits from the defining formulas
#[test]
fn frozen_invariants() {
    let [p1, p2, p3] = frozen_points();
    assert_eq!([p1.sign(), p2.sign(), p3.sign()], [-1, 1, -1]);
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-14 * b.abs().max(1.0);
    assert!(close(tance(&p1, &p2), -0.092512139023766941));
    assert!(close(tance(&p2, &p3), -0.30258113979044212));
    assert!(close(tance(&p1, &p3), 1.5513791238507301));
    assert!(close(alpha(&p1, &p2, &p3), 0.15673455803255696));
    assert!(close(beta(&p1, &p2, &p3), -0.43095763079538094));
}

#[test]
fn line_types_of_standard_pairs() {
    let e = |k: usize| {
        let mut x = Vector::zeros();
        x[k] = cr(1.0);
        x
    };
    let origin = point(e(2)).unwrap();
    let near = point(Vector::new(cr(0.5), cr(0.0), cr(1.0))).unwrap();
    assert_eq!(line_type(&origin, &near).unwrap(), LineType::Hyperbolic);
    let (a, b) = (point(e(0)).unwrap(), point(e(1)).unwrap());
    assert_eq!(line_type(&a, &b).unwrap(), LineType::Spherical);
    let p = point(e(1)).unwrap();
    let q = point(e(1) + e(0) + e(2)).unwrap();
    assert_eq!(line_type(&p, &q).unwrap(), LineType::Euclidean);
    assert_eq!(polar_point(&p, &q), Err(Error::EuclideanLine));
    let pol = polar_point(&origin, &near).unwrap();
    assert!(form(pol.rep(), origin.rep()).norm() < 1e-15);
    assert!(form(pol.rep(), near.rep()).norm() < 1e-15);
}

#[test]
fn isotropic_vectors_are_rejected() {
    assert_eq!(point(Vector::new(cr(1.0), cr(0.0), cr(1.0))), Err(Error::IsotropicVector));
    assert_eq!(point(Vector::zeros()), Err(Error::IsotropicVector));
}

#[test]
fn tau_of_degenerate_triple() {
    let a = point(Vector::new(cr(1.0), cr(0.0), cr(0.0))).unwrap();
    let b = point(Vector::new(cr(0.0), cr(1.0), cr(0.0))).unwrap();
    let o = point(Vector::new(cr(0.0), cr(0.0), cr(1.0))).unwrap();
    assert_eq!(tau(&a, &b, &o), Err(Error::DegenerateTau));
}

#[test]
fn point_json_roundtrip() {
    let [p1, ..] = frozen_points();
    let s = serde_json::to_string(&p1).unwrap();
    let back: Point = serde_json::from_str(&s).unwrap();
    assert!(back.approx_eq(&p1, 1e-15));
    let wrong = s.replace("\"sign\":-1", "\"sign\":1");
    assert!(serde_json::from_str::<Point>(&wrong).is_err());
}

#[test]
fn gram_json_roundtrip() {
    let [p1, p2, p3] = frozen_points();
    let g = gram_of(&[*p1.rep(), *p2.rep(), *p3.rep()]);
    let s = serde_json::to_string(&g).unwrap();
    let back: Gram = serde_json::from_str(&s).unwrap();
    for j in 0..3 {
        for k in 0..3 {
            assert_eq!(back.get(j, k), g.get(j, k));
        }
    }
}

proptest! {
    #[test]
    fn invariants_are_projective_and_isometry_invariant(seed in any::<u64>(), re in -2.0..2.0f64, im in -2.0..2.0f64) {
        prop_assume!(re.hypot(im) > 0.1);
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let ps: Vec<Point> = (0..3).map(|_| random_point(&mut r)).collect();
        let g = random_isometry(&mut r, 0.5);
        let qs: Vec<Point> = ps.iter().map(|p| g.apply_point(p)).collect();
        let scaled = point(ps[0].rep() * c(re, im)).unwrap();
        let t = tance(&ps[0], &ps[1]);
        let scale = 1.0 + t.abs();
        prop_assert!((tance(&qs[0], &qs[1]) - t).abs() <= 1e-9 * scale);
        prop_assert!((tance(&scaled, &ps[1]) - t).abs() <= 1e-9 * scale);
        let a = alpha(&ps[0], &ps[1], &ps[2]);
        let b = beta(&ps[0], &ps[1], &ps[2]);
        let s3 = 1.0 + a.abs() + b.abs();
        prop_assert!((alpha(&qs[0], &qs[1], &qs[2]) - a).abs() <= 1e-8 * s3);
        prop_assert!((beta(&qs[0], &qs[1], &qs[2]) - b).abs() <= 1e-8 * s3);
    }

    #[test]
    fn realized_gram_reproduces_entries(seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let vs: Vec<Vector> = (0..3).map(|_| random_vector(&mut r)).collect();
        prop_assume!(vs.iter().all(|v| norm2(v).abs() > 0.05 * v.norm_squared()));
        let g = gram_of(&vs);
        let us = realize_gram(&g).unwrap();
        let h = gram_of(&us);
        let scale = vs.iter().map(|v| v.norm_squared()).sum::<f64>();
        for j in 0..3 {
            for k in 0..3 {
                prop_assert!((h.get(j, k) - g.get(j, k)).norm() <= 1e-10 * scale);
            }
        }
    }

    #[test]
    fn tance_is_symmetric(seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let (p, q) = (random_point(&mut r), random_point(&mut r));
        prop_assert!((tance(&p, &q) - tance(&q, &p)).abs() <= 1e-12 * (1.0 + tance(&p, &q).abs()));
    }
}
