mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use trifree_color::finisher::FinisherOptions;
use trifree_color::harness::{
    color_instance, generate, independent_set_from_coloring, run_experiment, summarize,
    verify_coloring, ColorChoice, ExperimentConfig, GeneratorKind, GeneratorSpec, PracticalSpec,
    Verdict,
};
use trifree_color::hypergraph::{parse, serialize};
use trifree_color::lists::{parse_coloring, parse_lists, serialize_coloring, serialize_lists};
use trifree_color::nibble::RunOptions;
use trifree_color::reduce::{codegree_reduce, codegree_threshold, lift_coloring};
use trifree_color::{is_triangle_free, ListAssignment};

use common::{brute_proper, max_codegree, max_degree2, random_rank3};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn verifier_agrees_with_brute_force(seed in any::<u64>(), n in 1usize..=25, colors in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_rank3(&mut rng, n, n / 2, n);
        let coloring: Vec<usize> = (0..n).map(|_| rng.gen_range(0..colors)).collect();
        let v = verify_coloring(&h, None, &coloring);
        prop_assert_eq!(v.is_ok(), brute_proper(&h, &coloring));
        if let Verdict::Monochromatic { edge, color } = v {
            prop_assert!(edge.vertices().iter().all(|&x| coloring[x] == color));
        }
    }

    #[test]
    fn io_roundtrips(seed in any::<u64>(), n in 0usize..30) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_rank3(&mut rng, n, n, 2 * n);
        prop_assert_eq!(parse(&serialize(&h)).unwrap(), h);
        let lists = ListAssignment::from_lists((0..n).map(|_| vec![rng.gen_range(0..4), 4]).collect());
        prop_assert_eq!(parse_lists(&serialize_lists(&lists), n).unwrap(), lists);
        let partial: Vec<Option<usize>> = (0..n).map(|_| rng.gen_bool(0.7).then(|| rng.gen_range(0..9))).collect();
        prop_assert_eq!(parse_coloring(&serialize_coloring(&partial), n).unwrap(), partial);
    }
}

#[test]
fn verifier_reports_list_violations() {
    let h = random_rank3(&mut ChaCha8Rng::seed_from_u64(1), 6, 0, 0);
    let lists = ListAssignment::uniform(6, 2);
    assert_eq!(
        verify_coloring(&h, Some(&lists), &[0, 1, 0, 1, 0, 1]),
        Verdict::Ok
    );
    assert_eq!(
        verify_coloring(&h, Some(&lists), &[0, 1, 2, 1, 0, 1]),
        Verdict::NotInList {
            vertex: 2,
            color: 2
        }
    );
}

#[test]
fn generators_are_seed_deterministic() {
    for kind in [
        GeneratorKind::PartialSteiner,
        GeneratorKind::Random3,
        GeneratorKind::RandomRank3,
        GeneratorKind::TriangleFreeFiltered,
    ] {
        let spec = GeneratorSpec::new(kind, 60, 4)
            .with_delta(5)
            .with_degree2(1.0);
        assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
        let other = GeneratorSpec {
            seed: 5,
            ..spec.clone()
        };
        assert_ne!(generate(&spec).unwrap(), generate(&other).unwrap());
    }
}

#[test]
fn partial_steiner_is_linear() {
    for seed in 0..10 {
        let h =
            generate(&GeneratorSpec::new(GeneratorKind::PartialSteiner, 90, seed).with_delta(12))
                .unwrap();
        assert!(max_codegree(&h) <= 1);
        assert!(h.profile().delta3 <= 12);
    }
    let full = generate(&GeneratorSpec::new(GeneratorKind::PartialSteiner, 9, 0).full()).unwrap();
    assert_eq!(full.edges3().len(), 12);
    assert_eq!(max_codegree(&full), 1);
    assert!(
        generate(&GeneratorSpec::new(GeneratorKind::PartialSteiner, 9, 0).with_edges(13)).is_err()
    );
}

#[test]
fn filtered_instances_are_triangle_free() {
    for seed in 0..20 {
        let spec = GeneratorSpec::new(GeneratorKind::TriangleFreeFiltered, 200, seed)
            .with_delta(30)
            .with_degree2(1.0)
            .with_book_bias(0.3);
        let h = generate(&spec).unwrap();
        assert!(is_triangle_free(&h), "seed {seed}");
        assert!(h.profile().delta3 <= 30);
        assert!(h.profile().delta3 >= 25, "Δ = {}", h.profile().delta3);
    }
}

#[test]
fn empty_instance_needs_one_color() {
    let h = generate(&GeneratorSpec::new(GeneratorKind::Random3, 10, 0).with_edges(0)).unwrap();
    assert_eq!(h.edge_count(), 0);
    let np = PracticalSpec::default().resolve(0).unwrap();
    assert_eq!(np.colors, 1);
}

#[test]
fn independent_sets_contain_no_full_edge() {
    for seed in 0..10 {
        let spec = GeneratorSpec::new(GeneratorKind::TriangleFreeFiltered, 150, seed)
            .with_delta(10)
            .with_degree2(1.0);
        let h = generate(&spec).unwrap();
        let np = PracticalSpec::default()
            .resolve(h.profile().delta3)
            .unwrap();
        let lists = ListAssignment::uniform(h.n(), np.colors);
        let out = color_instance(
            &h,
            &lists,
            np,
            false,
            seed,
            &RunOptions::default(),
            &FinisherOptions::default(),
        )
        .unwrap();
        let c = out.coloring.expect("colored");
        assert!(brute_proper(&h, &c));
        let set = independent_set_from_coloring(&h, &c).unwrap();
        let used = c.iter().collect::<std::collections::BTreeSet<_>>().len();
        assert!(set.len() >= h.n().div_ceil(used));
        let mut inside = vec![false; h.n()];
        for &v in &set {
            inside[v] = true;
        }
        assert!(h.edges().all(|e| e.vertices().iter().any(|&x| !inside[x])));
    }
}

#[test]
fn reduction_bounds_hold() {
    for seed in 0..20 {
        let spec = GeneratorSpec::new(GeneratorKind::TriangleFreeFiltered, 100, seed)
            .with_delta(20)
            .with_degree2(0.5)
            .with_book_bias(0.8);
        let h = generate(&spec).unwrap();
        let d = h.profile().delta3;
        let (r, rep) = codegree_reduce(&h, d).unwrap();
        assert!(max_codegree(&r) < codegree_threshold(d));
        assert!(max_degree2(&r) as f64 <= max_degree2(&h) as f64 + 2.0 * (d as f64).powf(0.4));
        assert!(is_triangle_free(&r));
        assert_eq!(rep.edges2_added, r.edges2().len() - h.edges2().len());
        // any proper coloring of the reduced instance is proper for the input
        let rainbow: Vec<usize> = (0..h.n()).collect();
        assert!(lift_coloring(&h, &r, &rainbow).unwrap());
    }
}

#[test]
fn experiment_results_are_ordered_and_summarised() {
    let cfg = ExperimentConfig {
        generator: GeneratorSpec::new(GeneratorKind::TriangleFreeFiltered, 80, 0).with_delta(6),
        vary_instance: true,
        practical: PracticalSpec {
            colors: ColorChoice::Scaled(3.0),
            ..Default::default()
        },
        reduce: true,
        run: RunOptions::default(),
        finisher: FinisherOptions::default(),
        seeds: vec![4, 1, 3],
    };
    let (rs, s) = run_experiment(&cfg).unwrap();
    assert_eq!(rs.iter().map(|r| r.seed).collect::<Vec<_>>(), vec![4, 1, 3]);
    assert_eq!(s, summarize(&rs));
    assert_eq!(s.success_rate, 1.0);
    assert!(s.mean_ratio.unwrap() > 0.0);
}
