//! Library results against the brute-force references in `common`.

mod common;

use std::collections::BTreeSet;

use bestprox::analysis::quadruple_ratio;
use bestprox::fixtures::{flat4, gen_strip, swap4};
use bestprox::hunt::trial_instance;
use bestprox::metric::{metric_repair, random_metric, validate_metric, DEFAULT_METRIC_EPS};
use bestprox::*;
use common::{relaxation_closure, triangle_failures, Raw};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// k_min of gen_strip(64, 8), recorded from the exhaustive certifier and
/// cross-checked against an exact-rational computation.
const STRIP_64_8_K_MIN: f64 = 1.0;

#[test]
fn flat4_is_a_metric_by_triple_enumeration() {
    let rows = flat4().space().rows();
    assert_eq!(triangle_failures(&rows, 0.0), 0);
    assert!(validate_metric(&rows, DEFAULT_METRIC_EPS).unwrap().is_empty());
}

#[test]
fn strip_point_cloud_is_a_metric() {
    let rows = gen_strip(8, 2).unwrap().space().rows();
    assert_eq!(triangle_failures(&rows, 1e-9), 0);
    assert!(validate_metric(&rows, DEFAULT_METRIC_EPS).unwrap().is_empty());
}

#[test]
fn fixture_proximal_structure_matches_enumeration() {
    for inst in [flat4(), swap4(), gen_strip(8, 2).unwrap()] {
        let raw = Raw::of(&inst);
        let ps = proximal_sets(&inst);
        assert_eq!(ps.d_ab, raw.d_ab());
        assert_eq!(ps.a0, raw.a0());
        assert_eq!(ps.b0, raw.b0());
    }
    assert_eq!(pair_distance(&flat4()), 1.0);
    let strip = gen_strip(8, 2).unwrap();
    assert_eq!(pair_distance(&strip), 1.0);
    let ps = proximal_sets(&strip);
    assert_eq!(ps.a0, strip.a().clone());
    assert_eq!(ps.b0, strip.b().clone());
}

#[test]
fn fixture_constants_match_enumeration() {
    let cases = [(flat4(), 0.0), (swap4(), 1.0), (gen_strip(64, 8).unwrap(), STRIP_64_8_K_MIN)];
    for (inst, frozen) in cases {
        let raw = Raw::of(&inst);
        assert_eq!(raw.k_min(), frozen);
        let ps = proximal_sets(&inst);
        let rep = p_proximal_constant(&inst, &ps).unwrap();
        assert_eq!(rep.k_min, frozen);
        if let Some(w) = rep.witness {
            assert_eq!(quadruple_ratio(inst.space(), w), rep.k_min);
        }
    }
}

#[test]
fn strip_64_8_witness_sits_on_a_block_boundary() {
    let inst = gen_strip(64, 8).unwrap();
    let ps = proximal_sets(&inst);
    let rep = p_proximal_constant(&inst, &ps).unwrap();
    assert_eq!(rep.witness, Some((7, 0, 8, 1)));
    let im = induced_map(&inst, &ps).unwrap();
    assert_eq!(lipschitz_constant(&im, &rep).lipschitz, 1.0);
}

#[test]
fn certifier_matches_enumeration_on_random_instances() {
    let mut checked = 0;
    for trial in 0..400 {
        let inst = trial_instance(2024, trial, 2, 9).unwrap();
        let raw = Raw::of(&inst);
        let ps = proximal_sets(&inst);
        let rep = p_proximal_constant(&inst, &ps).unwrap();
        assert_eq!(rep.k_min, raw.k_min(), "trial {trial}");
        match (induced_map(&inst, &ps), raw.induced()) {
            (Ok(im), Some(s)) => {
                assert_eq!(im.table(), &s);
                let lip = lipschitz_constant(&im, &rep);
                assert_eq!(lip.lipschitz, raw.lipschitz(&s), "trial {trial}");
                checked += 1;
            }
            (Err(Error::NonUniquePreimage { .. }), None) => {}
            (a, b) => panic!("trial {trial}: library {a:?} vs reference {b:?}"),
        }
        let oracle = best_proximity_oracle(&inst, &ps);
        assert_eq!(oracle.best_proximity_points(), raw.best_proximity());
    }
    assert!(checked > 100, "only {checked} induced maps exercised");
}

#[test]
fn repair_matches_relaxation_closure() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let n = rng.gen_range(2..9);
        let mut rows = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = f64::from(rng.gen_range(1..=16u32)) / 4.0;
                rows[i][j] = v;
                rows[j][i] = v;
            }
        }
        let repaired = metric_repair(&rows).unwrap();
        assert_eq!(repaired.rows(), relaxation_closure(&rows));
    }
}

#[test]
fn random_6x6_repair_is_valid() {
    let mut rng = ChaCha8Rng::seed_from_u64(66);
    let mut rows = vec![vec![0.0; 6]; 6];
    for i in 0..6 {
        for j in (i + 1)..6 {
            let v = rng.gen_range(0.01..10.0);
            rows[i][j] = v;
            rows[j][i] = v;
        }
    }
    let sp = metric_repair(&rows).unwrap();
    assert!(validate_metric(&sp.rows(), DEFAULT_METRIC_EPS).unwrap().is_empty());
}

#[test]
fn picard_orbit_matches_direct_iteration() {
    for trial in 0..200 {
        let inst = trial_instance(77, trial, 3, 10).unwrap();
        let raw = Raw::of(&inst);
        let Some(s) = raw.induced() else { continue };
        let ps = proximal_sets(&inst);
        let im = induced_map(&inst, &ps).unwrap();
        for &x0 in s.keys() {
            let res = picard_solve(&im, x0, &PicardOptions::default()).unwrap();
            let mut orbit = vec![x0];
            let mut seen = BTreeSet::from([x0]);
            loop {
                let next = s[orbit.last().unwrap()];
                if next == *orbit.last().unwrap() || !seen.insert(next) {
                    break;
                }
                orbit.push(next);
            }
            assert_eq!(&res.trace[..orbit.len()], &orbit[..], "trial {trial}");
            assert_eq!(res.converged, s[&res.z] == res.z);
        }
    }
}

#[test]
fn random_metric_points_are_on_the_grid() {
    let sp = random_metric(3, 7, 2.0).unwrap();
    for i in 0..7 {
        for j in 0..7 {
            let steps = sp.d(i, j) / 0.25;
            assert_eq!(steps, steps.round());
        }
    }
}
