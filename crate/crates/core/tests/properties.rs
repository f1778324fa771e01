use std::collections::HashSet;

use conelight::detector::{recordable_subsets, run_with_ledger};
use conelight::geometry::extreme_point_to_subset;
use conelight::illumination::{
    canonical_classes, chain_illuminator, construct_illuminating_set, illuminates_by_definition, illumination_patterns,
};
use conelight::maps::{check_cone_map, image_distance};
use conelight::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn positive(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec((-6.0f64..6.0).prop_map(f64::exp), n)
}

fn pair_of_positive() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (2usize..=8).prop_flat_map(|n| (positive(n), positive(n)))
}

fn hvec() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0f64..10.0, 1..8)
}

fn builtins() -> Vec<BuiltinMap> {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut maps = vec![MapSpec::Shear2.build().unwrap()];
    for n in [2usize, 3, 5] {
        let dense = |rng: &mut ChaCha8Rng, zero_p: f64| -> Vec<Vec<f64>> {
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            if i != j && rng.random::<f64>() < zero_p {
                                0.0
                            } else {
                                rng.random_range(0.1..3.0)
                            }
                        })
                        .collect()
                })
                .collect()
        };
        maps.push(
            MapSpec::Matrix {
                data: dense(&mut rng, 0.4),
            }
            .build()
            .unwrap(),
        );
        maps.push(
            MapSpec::MaxPlus {
                data: dense(&mut rng, 0.4),
            }
            .build()
            .unwrap(),
        );
        let exponents = dense(&mut rng, 0.4)
            .into_iter()
            .map(|row| {
                let s: f64 = row.iter().sum();
                row.into_iter().map(|p| p / s).collect::<Vec<f64>>()
            })
            .map(|mut row| {
                // exact row sum 1
                let rest: f64 = row[1..].iter().sum();
                row[0] = 1.0 - rest;
                row
            })
            .collect();
        maps.push(MapSpec::Monomial { exponents }.build().unwrap());
    }
    maps
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn log_chart_is_an_isometry((x, y) in pair_of_positive()) {
        let x = PositiveVector::new(x).unwrap();
        let y = PositiveVector::new(y).unwrap();
        let d = hilbert_distance(&x, &y).unwrap();
        let diff = &log_map(&x).unwrap() - &log_map(&y).unwrap();
        prop_assert!((d - diff.norm()).abs() <= 1e-9);
    }

    #[test]
    fn hilbert_distance_is_scale_invariant(
        (x, y) in pair_of_positive(),
        a in -5.0f64..5.0,
        b in -5.0f64..5.0,
    ) {
        let x = PositiveVector::new(x).unwrap();
        let y = PositiveVector::new(y).unwrap();
        let d = hilbert_distance(&x, &y).unwrap();
        let ds = hilbert_distance(&x.scaled(a.exp()).unwrap(), &y.scaled(b.exp()).unwrap()).unwrap();
        prop_assert!((d - ds).abs() <= 1e-12 * (1.0 + d));
        prop_assert!((hilbert_distance(&y, &x).unwrap() - d).abs() <= 1e-12);
    }

    #[test]
    fn hilbert_norm_is_variation_norm_with_zero(v in hvec()) {
        let mut with_zero = v.clone();
        with_zero.push(0.0);
        prop_assert_eq!(hilbert_norm(&v), variation_norm(&with_zero));
    }

    #[test]
    fn hilbert_norm_axioms(
        (v, w) in (1usize..8).prop_flat_map(|d| (
            prop::collection::vec(-10.0f64..10.0, d),
            prop::collection::vec(-10.0f64..10.0, d),
        )),
        t in -4.0f64..4.0,
    ) {
        let sum: Vec<f64> = v.iter().zip(&w).map(|(a, b)| a + b).collect();
        prop_assert!(hilbert_norm(&sum) <= hilbert_norm(&v) + hilbert_norm(&w) + 1e-12);
        let scaled: Vec<f64> = v.iter().map(|a| t * a).collect();
        prop_assert!((hilbert_norm(&scaled) - t.abs() * hilbert_norm(&v)).abs() <= 1e-12 * (1.0 + hilbert_norm(&scaled)));
        let zero_iff = hilbert_norm(&v) <= 1e-12;
        prop_assert_eq!(zero_iff, v.iter().all(|a| a.abs() <= 1e-12));
    }

    #[test]
    fn exp_inverts_log(x in (2usize..8).prop_flat_map(positive)) {
        let x = PositiveVector::new(x).unwrap();
        let back = exp_map(&log_map(&x).unwrap()).unwrap();
        prop_assert!(hilbert_distance(&x, &back).unwrap() <= 1e-9);
    }

    #[test]
    fn recorded_subsets_form_a_chain(r in prop::collection::vec(0.01f64..10.0, 2..10)) {
        let rec = recordable_subsets(&r);
        prop_assert!(rec.len() < r.len());
        for w in rec.windows(2) {
            prop_assert!(w[0].is_subset_of(w[1]) && w[0] != w[1]);
        }
        // every recorded set certifies the strict inequality
        for j in &rec {
            let inside = j.iter().map(|i| r[i]).fold(f64::NEG_INFINITY, f64::max);
            let outside = (0..r.len()).filter(|i| !j.contains(*i)).map(|i| r[i]).fold(f64::INFINITY, f64::min);
            prop_assert!(inside < outside);
        }
    }
}

#[test]
fn builtin_maps_are_homogeneous_and_order_preserving() {
    for f in builtins() {
        check_cone_map(&f, 1000, 5).unwrap_or_else(|e| panic!("{}: {e}", f.name()));
    }
}

#[test]
fn builtin_maps_are_nonexpansive() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for f in builtins() {
        let n = f.dim();
        for _ in 0..2000 {
            let x = PositiveVector::new((0..n).map(|_| rng.random_range(-4.0f64..4.0).exp()).collect()).unwrap();
            let y = PositiveVector::new((0..n).map(|_| rng.random_range(-4.0f64..4.0).exp()).collect()).unwrap();
            let before = hilbert_distance(&x, &y).unwrap();
            let after = image_distance(&f, &x, &y).unwrap();
            assert!(after <= before + 1e-9, "{}: {after} > {before}", f.name());

            if n >= 2 {
                let v = log_map(&x).unwrap();
                let w = log_map(&y).unwrap();
                let hv = conjugate_log_map(&f, &v).unwrap();
                let hw = conjugate_log_map(&f, &w).unwrap();
                assert!((&hv - &hw).norm() <= (&v - &w).norm() + 1e-9);
            }
        }
    }
}

#[test]
fn interior_eigenvalues_agree() {
    // max-plus [[1, .5], [.5, 1]] fixes every x with 1/2 <= x_2/x_1 <= 2
    let f = MapSpec::MaxPlus {
        data: vec![vec![1.0, 0.5], vec![0.5, 1.0]],
    }
    .build()
    .unwrap();
    let a = PositiveVector::new(vec![1.0, 1.0]).unwrap();
    let b = PositiveVector::new(vec![1.0, 1.5]).unwrap();
    let ra = ratio_vector(&f, &a).unwrap();
    let rb = ratio_vector(&f, &b).unwrap();
    assert!(ra.iter().chain(&rb).all(|r| (r - ra[0]).abs() <= 1e-9));

    let id = MapSpec::identity(4).build().unwrap();
    let a = PositiveVector::new(vec![1.0, 2.0, 3.0, 4.0]).unwrap();
    let b = PositiveVector::new(vec![0.1, 0.2, 7.0, 1.0]).unwrap();
    assert_eq!(ratio_vector(&id, &a).unwrap(), ratio_vector(&id, &b).unwrap());
}

#[test]
fn normalized_fixed_points_are_eigenvectors() {
    let f = MapSpec::Matrix {
        data: vec![vec![1.0, 2.0, 0.5], vec![0.3, 1.0, 1.0], vec![2.0, 0.1, 1.0]],
    }
    .build()
    .unwrap();
    let x0 = PositiveVector::new(vec![1.0, 1.0, 1.0]).unwrap();
    let est = estimate_eigenvector(&f, &x0, 1e-12, 10_000).unwrap();
    assert!(est.converged);
    let g = normalize(&f, &est.vector).unwrap();
    assert!(hilbert_distance(&g, &est.vector).unwrap() <= 1e-11);
    let r = ratio_vector(&f, &est.vector).unwrap();
    assert!(r.iter().all(|ri| (ri - est.eigenvalue).abs() <= 1e-9 * est.eigenvalue));
}

#[test]
fn class_patterns_match_subset_prefixes() {
    // The pattern of a class is the image of its n-1 proper prefixes under the
    // subset bijection.
    for n in 2..=6 {
        let points = extreme_points(n).unwrap();
        for p in illumination_patterns(n, &points).unwrap() {
            let got: HashSet<Subset> = p.illuminated.iter().map(extreme_point_to_subset).collect();
            let order = &p.class.ordering;
            let want: HashSet<Subset> = (1..n)
                .map(|k| Subset::from_indices(order[..k].iter().copied()))
                .collect();
            assert_eq!(got, want, "n = {n}, ordering {order:?}");
        }
    }
}

#[test]
fn patterns_depend_only_on_the_class() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for n in 2..=5 {
        let points = extreme_points(n).unwrap();
        for p in illumination_patterns(n, &points).unwrap() {
            for _ in 0..5 {
                // random increasing values, shifted so the marker lands on zero
                let mut values: Vec<f64> = (0..n).map(|_| rng.random_range(0.01..1.0)).collect();
                for k in 1..n {
                    values[k] += values[k - 1];
                }
                let zero_rank = p.class.ordering.iter().position(|&s| s == n - 1).unwrap();
                let shift = values[zero_rank];
                let mut w = vec![0.0; n - 1];
                for (rank, &s) in p.class.ordering.iter().enumerate() {
                    if s != n - 1 {
                        w[s] = values[rank] - shift;
                    }
                }
                let w = Direction::new(w).unwrap();
                let lit: Vec<ExtremePoint> = points.iter().filter(|z| illuminates(&w, z).unwrap()).copied().collect();
                assert_eq!(lit, p.illuminated);
            }
        }
    }
}

#[test]
fn closed_form_matches_definition_on_structured_directions() {
    // integer-valued directions have exact ties broken only by order
    for n in 2..=8 {
        let points = extreme_points(n).unwrap();
        let mut dirs = optimal_illuminating_set(n).unwrap();
        if n <= 6 {
            dirs.extend(canonical_classes(n).unwrap().into_iter().map(|c| c.direction));
        }
        for w in &dirs {
            for z in &points {
                assert_eq!(illuminates(w, z).unwrap(), illuminates_by_definition(w, z).unwrap());
            }
        }
    }
}

#[test]
fn optimal_sets_are_pointwise_tight() {
    for n in 2..=6 {
        let dirs = optimal_illuminating_set(n).unwrap();
        for skip in 0..dirs.len() {
            let rest: Vec<Direction> = dirs
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != skip)
                .map(|(_, d)| d.clone())
                .collect();
            assert!(!verify_illumination(&rest, n).unwrap().covered, "n = {n}, drop {skip}");
        }
    }
}

#[test]
fn construction_chains_partition_extreme_points() {
    for n in 2..=10 {
        let c = construct_illuminating_set(n).unwrap();
        let mut seen = HashSet::new();
        for chain in c.plus_chains.iter().chain(&c.minus_chains) {
            for p in chain {
                assert!(seen.insert(*p), "n = {n}: {p:?} twice");
            }
            let w = chain_illuminator(chain).unwrap();
            assert!(chain.iter().all(|z| illuminates(&w, z).unwrap()));
        }
        for (x, xp) in &c.pairs {
            assert!(seen.insert(*x) && seen.insert(*xp));
        }
        assert_eq!(seen.len(), (1 << n) - 2);
        assert_eq!(c.directions.len() as u64, central_binomial(n));
        if n % 2 == 1 {
            let d = n - 1;
            let expected = conelight::subset::binomial(d, d / 2) - conelight::subset::binomial(d, d / 2 + 1);
            assert_eq!(c.pairs.len() as u64, expected);
        }
    }
}

/// Minimum number of maximal chains (permutations of {1..n}) whose proper
/// prefixes cover every nonempty proper subset, by plain enumeration of
/// permutation combinations. This is the fewest samples the detector could
/// ever need when every ratio ordering is reachable.
fn min_chain_cover_brute_force(n: usize) -> usize {
    use itertools::Itertools;
    let full = (1u64 << n) - 1;
    let chains: Vec<u64> = (0..n)
        .permutations(n)
        .map(|p| {
            let mut prefix = 0u64;
            let mut mask = 0u64;
            for &i in &p[..n - 1] {
                prefix |= 1 << i;
                mask |= 1 << (prefix - 1);
            }
            mask
        })
        .collect();
    let target = (0..full - 1).fold(0u64, |m, b| m | (1 << b));
    for size in 1.. {
        if chains
            .iter()
            .combinations(size)
            .any(|combo| combo.iter().fold(0u64, |m, c| m | **c) == target)
        {
            return size;
        }
    }
    unreachable!()
}

#[test]
fn minimal_sample_count_equals_illumination_number() {
    for n in 2..=4 {
        let brute = min_chain_cover_brute_force(n);
        assert_eq!(brute as u64, central_binomial(n));
        assert_eq!(brute, illumination_number_exact(n).unwrap().illumination_number);
    }
}

#[test]
fn detection_is_deterministic() {
    let f = MapSpec::Matrix {
        data: vec![vec![1.0, 2.0, 1.5], vec![1.2, 1.0, 1.9], vec![1.1, 1.7, 1.0]],
    }
    .build()
    .unwrap();
    for cfg in [
        SamplerConfig::log_uniform(3.0, 42, 10_000),
        SamplerConfig::paper_literal(42, 2_000),
        SamplerConfig::scheduled(1000.0, 100),
    ] {
        let a = serde_json::to_string(&run(&f, &cfg).unwrap()).unwrap();
        let b = serde_json::to_string(&run(&f, &cfg).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn maxplus_with_interior_eigenvectors_halts() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for n in 2..=4 {
        for seed in 0..10 {
            let data = (0..n)
                .map(|_| (0..n).map(|_| rng.random_range(1.0..2.0)).collect())
                .collect();
            let f = MapSpec::MaxPlus { data }.build().unwrap();
            let report = run(&f, &SamplerConfig::log_uniform(3.0, seed, 10_000)).unwrap();
            assert!(report.halted, "n = {n}, seed {seed}: {report:?}");
            assert!(report.samples_used as u64 >= central_binomial(n));
        }
    }
}

#[test]
fn ledger_history_is_capped() {
    let shear = MapSpec::Shear2.build().unwrap();
    let mut cfg = SamplerConfig::log_uniform(3.0, 1, 500);
    cfg.history_cap = 10;
    let (report, ledger) = run_with_ledger(&shear, &cfg).unwrap();
    assert_eq!(report.samples_used, 500);
    assert_eq!(ledger.history().len(), 10);
    assert_eq!(ledger.recordings(), 500);
    assert_eq!(ledger.last_new_sample(), Some(0));
    assert!(ledger.history().iter().all(|r| r.recorded.len() == 1));
}

#[test]
fn invalid_user_maps_abort_detection() {
    struct Cube;
    impl ConeMap for Cube {
        fn dim(&self) -> usize {
            3
        }
        fn name(&self) -> String {
            "cube".into()
        }
        fn apply(&self, x: &[f64]) -> Vec<f64> {
            x.iter().map(|v| v * v * v).collect()
        }
    }
    let err = run(&Cube, &SamplerConfig::default()).unwrap_err();
    assert_eq!(err.invariant(), Some("homogeneity"));
}
