use chgeom::hermitian::{form, line_type, norm2, point, tance, LineType, Point};
use chgeom::isometry::{reflection, Isometry};
use chgeom::linalg::{c, cr};
use chgeom::paths::{
    bend_pair, bending, follow_path, make_hyperbolic, normalized_lift, orthogonal_partner,
    PathSample, SphericalBendFixture,
};
use chgeom::sample::{random_negative_point, random_vector};
use chgeom::{Error, Vector};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn spherical_bend_fixture_values() {
    let fx = SphericalBendFixture::new(cr(0.125)).unwrap();
    // |1 + z|² and |½ + 2z|² for z = 1/8
    assert!((tance(&fx.p2, &fx.p3) - 81.0 / 64.0).abs() < 1e-12);
    assert!((tance(&fx.p2_prime, &fx.p3) - 9.0 / 16.0).abs() < 1e-12);
    assert!((tance(&fx.p1, &fx.p2) + 9.0 / 16.0).abs() < 1e-12);
    assert_eq!(line_type(&fx.p2, &fx.p3).unwrap(), LineType::Hyperbolic);
    assert_eq!(line_type(&fx.p2_prime, &fx.p3).unwrap(), LineType::Spherical);
    // (p₁,p₂) and (p₁',p₂') give the same product of reflections
    let a = reflection(&fx.p2) * reflection(&fx.p1);
    let b = reflection(&fx.p2_prime) * reflection(&fx.p1_prime);
    assert!((a.matrix() - b.matrix()).norm() < 1e-12);
    let s = serde_json::to_value(&fx).unwrap();
    assert_eq!(s["z"], serde_json::json!([0.125, 0.0]));
}

#[test]
fn unit_rate_hyperbolic_bending() {
    let o = point(Vector::new(cr(0.0), cr(0.0), cr(1.0))).unwrap();
    let q = point(Vector::new(cr(1f64.sinh()), cr(0.0), cr(1f64.cosh()))).unwrap();
    let b = bending(&o, &q).unwrap();
    assert_eq!(b.kind, LineType::Hyperbolic);
    let (q1, q2) = bend_pair(&o, &q, 1.0).unwrap();
    assert!(q1.approx_eq(&q, 1e-12));
    // B(1) moves q by the same distance again
    assert!((tance(&o, &q2) - 2f64.cosh().powi(2)).abs() < 1e-10);
}

#[test]
fn identical_points_do_not_bend() {
    let o = point(Vector::new(cr(0.0), cr(0.0), cr(1.0))).unwrap();
    assert!(bending(&o, &o).is_err());
}

#[test]
fn sign_change_is_rejected() {
    let path = PathSample::from_fn(0.0, 1.0, 50, |s| Vector::new(cr(2.0 * s), cr(0.0), cr(1.0)));
    let err = path.and_then(|p| follow_path(&p, &Isometry::identity()).map(|_| ()));
    assert!(matches!(err, Err(Error::SignChange) | Err(Error::IsotropicVector)));
}

#[test]
fn geodesic_path_follows_bending() {
    let mut r = ChaCha8Rng::seed_from_u64(3);
    let (p1, p2) = (random_negative_point(&mut r, 0.5), random_negative_point(&mut r, 0.5));
    let b = bending(&p1, &p2).unwrap();
    let path = PathSample::from_fn(0.0, 1.0, 2000, |s| b.evaluate(s).apply(p1.rep())).unwrap();
    let fs = follow_path(&path, &Isometry::identity()).unwrap();
    let lift = normalized_lift(&path).unwrap();
    for k in (0..=2000).step_by(100) {
        assert!((fs[k].matrix() - b.evaluate(path.params[k]).matrix()).norm() < 1e-6);
        assert!((fs[k].apply(&lift[0]) - lift[k]).norm() < 1e-6);
    }
}

#[test]
fn make_hyperbolic_from_spherical_fixture() {
    let fx = SphericalBendFixture::new(cr(0.125)).unwrap();
    let s = make_hyperbolic(&fx.p1_prime, &fx.p2_prime, &fx.p3).unwrap();
    let (_, q2) = bend_pair(&fx.p1_prime, &fx.p2_prime, s).unwrap();
    assert_eq!(line_type(&q2, &fx.p3).unwrap(), LineType::Hyperbolic);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bending_preserves_product_and_signs(seed in any::<u64>(), s in -3.0..3.0f64) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let (p1, p2) = (random_negative_point(&mut r, 0.4), random_negative_point(&mut r, 0.4));
        let (q1, q2) = bend_pair(&p1, &p2, s).unwrap();
        let before = reflection(&p2) * reflection(&p1);
        let after = reflection(&q2) * reflection(&q1);
        prop_assert!((before.matrix() - after.matrix()).norm() <= 1e-9);
        prop_assert_eq!((q1.sign(), q2.sign()), (p1.sign(), p2.sign()));
        prop_assert!((tance(&q1, &q2) - tance(&p1, &p2)).abs() <= 1e-9 * tance(&p1, &p2));
    }

    #[test]
    fn orthogonal_partner_is_orthogonal_and_on_geodesic(seed in any::<u64>(), s in -2.0..2.0f64) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let (p1, p2) = (random_negative_point(&mut r, 0.5), random_negative_point(&mut r, 0.5));
        let q = bending(&p1, &p2).unwrap().evaluate(s).apply_point(&p1);
        let qp = orthogonal_partner(&q, (&p1, &p2)).unwrap();
        let unit = |p: &Point| p.rep() / cr(norm2(p.rep()).abs().sqrt());
        prop_assert!(form(&unit(&q), &unit(&qp)).norm() <= 1e-9);
        prop_assert_eq!(qp.sign(), -q.sign());
        let back = orthogonal_partner(&qp, (&p1, &p2)).unwrap();
        prop_assert!(back.approx_eq(&q, 1e-8));
    }

    #[test]
    fn off_geodesic_points_have_no_partner(seed in any::<u64>()) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let (p1, p2) = (random_negative_point(&mut r, 0.5), random_negative_point(&mut r, 0.5));
        let w = p1.rep() + random_vector(&mut r) * c(0.3, 0.0);
        let q = point(w).unwrap();
        prop_assert_eq!(orthogonal_partner(&q, (&p1, &p2)), Err(Error::NotOnGeodesic));
    }
}
