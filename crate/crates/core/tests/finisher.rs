mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use trifree_color::finisher::{finish, FinishMethod, FinisherMode, FinisherOptions};
use trifree_color::nibble::{NibbleState, RunOptions};
use trifree_color::params::{NibbleParams, Parameters};
use trifree_color::ListAssignment;

use common::{brute_proper, random_rank3};

fn fresh_state(seed: u64, extra_colors: usize) -> (trifree_color::RankedHypergraph, NibbleState) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(6..30);
    let h = random_rank3(&mut rng, n, n / 3, n);
    let prof = h.profile();
    let colors = prof.delta2 + prof.delta3 + 1 + extra_colors;
    let np = NibbleParams {
        colors,
        iterations: 1,
        theta: 0.5,
        p_hat: 0.5,
    };
    let params = Parameters::practical(prof.delta3.max(1) as f64, 1.0, 1.0, np).unwrap();
    let opts = RunOptions {
        skip_triangle_check: true,
        ..Default::default()
    };
    let state = NibbleState::init(&h, &ListAssignment::uniform(n, colors), &params, &opts).unwrap();
    (h, state)
}

#[test]
fn greedy_colors_whenever_lists_exceed_the_degree() {
    for seed in 0..100 {
        let (h, state) = fresh_state(seed, 0);
        let opts = FinisherOptions {
            mode: FinisherMode::Greedy,
            ..Default::default()
        };
        let res = finish(&state, &opts).unwrap();
        assert_eq!(res.method, FinishMethod::Greedy);
        let coloring = res.coloring.clone().expect("greedy succeeds");
        assert!(brute_proper(&h, &coloring), "seed {seed}");
        assert!(res.is_success());
    }
}

#[test]
fn resampling_output_is_proper_or_falls_back() {
    for seed in 0..100 {
        let (h, state) = fresh_state(seed, 6);
        let opts = FinisherOptions {
            seed,
            ..Default::default()
        };
        let res = finish(&state, &opts).unwrap();
        assert!(matches!(
            res.method,
            FinishMethod::Resampling | FinishMethod::Greedy
        ));
        assert_eq!(
            res.method == FinishMethod::Greedy,
            res.fallback_reason.is_some()
        );
        assert!(
            brute_proper(&h, res.coloring.as_ref().unwrap()),
            "seed {seed}"
        );
        assert!(res
            .coloring
            .unwrap()
            .iter()
            .all(|&c| c < state_colors(&state)));
    }
}

fn state_colors(state: &NibbleState) -> usize {
    state.params().nibble_params().unwrap().colors
}

#[test]
fn report_only_leaves_the_residual() {
    let (h, state) = fresh_state(3, 2);
    let opts = FinisherOptions {
        mode: FinisherMode::ReportOnly,
        ..Default::default()
    };
    let res = finish(&state, &opts).unwrap();
    assert_eq!(res.method, FinishMethod::Skipped);
    assert_eq!(res.residual, h.n());
    assert!(res.coloring.is_none() && res.verdict.is_none());
    assert!(res.lll.events_a + res.lll.events_b > 0);
}

#[test]
fn resampling_replays_from_its_seed() {
    let (_, state) = fresh_state(9, 4);
    let opts = FinisherOptions {
        seed: 17,
        ..Default::default()
    };
    assert_eq!(
        finish(&state, &opts).unwrap(),
        finish(&state, &opts).unwrap()
    );
}
