use chgeom::holonomy::{
    b_commutator, b_fields, centralizer_log_coords, commutator_defect, flow_commutator,
    flow_commutator_one_sided, holonomy_probe, holonomy_sample, omega_commutator, omega_pairings,
    rank_of_samples, real_plane_defect, rectangle_holonomy, vertical_part, DEFAULT_DS,
};
use chgeom::sample::{random_isometry, random_scoords};
use chgeom::triples::{triple_from_coords, SCoords, Triple};
use chgeom::Error;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const PATTERNS: [[i8; 3]; 4] = [[-1, -1, -1], [-1, 1, -1], [1, -1, -1], [-1, -1, 1]];

fn triple(seed: u64, k: usize, real: bool) -> Triple {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let c = random_scoords(&mut r, PATTERNS[k % 4], real);
    triple_from_coords(&c).unwrap().map(&random_isometry(&mut r, 0.4))
}

#[test]
fn rank_of_synthetic_samples() {
    let line: Vec<[f64; 2]> = (1..10).map(|k| [k as f64, 2.0 * k as f64]).collect();
    let noise = vec![1e-15; line.len()];
    let h = rank_of_samples(&line, &noise);
    assert_eq!(h.dimension, 1);
    assert!(h.conclusive);
    let plane: Vec<[f64; 2]> = (1..10).map(|k| [k as f64, (k * k) as f64]).collect();
    let h = rank_of_samples(&plane, &noise);
    assert_eq!(h.dimension, 2);
    assert!(h.gap >= 1e3);
}

#[test]
fn fixed_triples_have_expected_dimension() {
    let c = SCoords::on_surface(1.2, 2.0, 3.0, [-1, -1, -1], 0.5);
    let t = triple_from_coords(&c).unwrap();
    assert_eq!(holonomy_probe(&t, 8, DEFAULT_DS).unwrap().dimension, 2);
    let c = SCoords::on_surface(1.2, 2.0, 3.0, [-1, -1, -1], 0.0);
    let t = triple_from_coords(&c).unwrap();
    let h = holonomy_probe(&t, 8, DEFAULT_DS).unwrap();
    assert_eq!(h.dimension, 1);
    assert!(h.off_centralizer.iter().all(|x| *x < 1e-10));
}

#[test]
fn ramification_is_reported() {
    let c = SCoords::on_surface(1.0, 2.0, 3.0, [-1, -1, -1], 0.5);
    let t = triple_from_coords(&c).unwrap();
    assert!(matches!(omega_commutator(&t), Err(Error::OnRamification { .. })));
}

#[test]
fn symmetric_flow_commutator_is_second_order() {
    let t = triple(5, 0, false);
    let closed = b_commutator(&t).unwrap().velocities(&t.reps());
    let err = |f: fn(&Triple, f64) -> [chgeom::Vector; 3], eps: f64| {
        let v = f(&t, eps);
        (0..3).map(|j| (v[j] - closed[j]).norm()).fold(0.0, f64::max)
    };
    let two = (err(flow_commutator, 1e-2) / err(flow_commutator, 1e-3)).log10();
    let one = (err(flow_commutator_one_sided, 1e-2) / err(flow_commutator_one_sided, 1e-3)).log10();
    assert!(two > 1.8, "{two}");
    assert!((one - 1.0).abs() < 0.1, "{one}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn b_fields_are_tangent(seed in any::<u64>(), k in 0usize..4) {
        let t = triple(seed, k, false);
        let (b1, b2) = b_fields(&t).unwrap();
        prop_assert!(b1.ef_residual(&t) <= 1e-10);
        prop_assert!(b2.ef_residual(&t) <= 1e-10);
        prop_assert!(b1.norm() > 0.0 && b2.norm() > 0.0);
    }

    #[test]
    fn omega_matches_vertical_part(seed in any::<u64>(), k in 0usize..4) {
        let t = triple(seed, k, false);
        let om = omega_commutator(&t).unwrap();
        let lie = vertical_part(&t, &b_commutator(&t).unwrap()).unwrap().lie;
        prop_assert!((lie.m * t.reps()[0] - om).norm() <= 1e-9);
        prop_assert!(omega_pairings(&t).unwrap().max_error() <= 1e-9);
    }

    #[test]
    fn loop_holonomy_centralizes(seed in any::<u64>(), k in 0usize..4) {
        let t = triple(seed, k, false);
        let g = (0..16).find_map(|j| holonomy_sample(&t, j, DEFAULT_DS).ok()).unwrap();
        let f = t.product();
        prop_assert!(commutator_defect(&g, &f) <= 1e-8);
        let (_, off) = centralizer_log_coords(&f, &g).unwrap();
        prop_assert!(off <= 1e-8);
    }

    #[test]
    fn real_holonomy_keeps_the_real_plane(seed in any::<u64>()) {
        let t = triple(seed, 0, true);
        let g = rectangle_holonomy(&t, 0.05, 0.05).unwrap();
        prop_assert!(real_plane_defect(&t, &g).unwrap() <= 1e-7);
    }
}
