use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use trifree_color::params::{
    check_constraints, fixed_assignment, ln_tail_bound, NibbleParams, Parameters, TailBound,
};

#[test]
fn tail_bounds_match_closed_forms() {
    let h = TailBound::Hoeffding {
        ranges: vec![1.0; 4],
    };
    assert!((ln_tail_bound(&h, 2.0).unwrap() + 2.0).abs() < 1e-12);
    let v = TailBound::Variance {
        variance: 3.0,
        b: 1.0,
    };
    assert!((ln_tail_bound(&v, 4.0).unwrap() + 16.0 / 10.0).abs() < 1e-12);
    let c = TailBound::Conditional {
        differences: vec![1.0; 4],
        prob_not_a: 0.1,
    };
    let want = ((-2.0f64).exp() + 0.1).ln();
    assert!((ln_tail_bound(&c, 2.0).unwrap() - want).abs() < 1e-12);
}

#[test]
fn tail_bounds_reject_bad_input() {
    let h = TailBound::Hoeffding { ranges: vec![] };
    assert!(ln_tail_bound(&h, 1.0).is_err());
    let m = TailBound::McDiarmid {
        differences: vec![1.0],
    };
    assert!(ln_tail_bound(&m, 0.0).is_err());
    assert!(ln_tail_bound(&m, f64::NAN).is_err());
    let c = TailBound::Conditional {
        differences: vec![1.0],
        prob_not_a: 1.5,
    };
    assert!(ln_tail_bound(&c, 1.0).is_err());
}

#[test]
fn hoeffding_dominates_simulated_deviation() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (n, reps, t) = (40usize, 40_000usize, 6.0);
    let hits = (0..reps)
        .filter(|_| {
            let s: f64 = (0..n).map(|_| f64::from(u8::from(rng.gen_bool(0.5)))).sum();
            s - n as f64 / 2.0 >= t
        })
        .count();
    let bound = ln_tail_bound(
        &TailBound::Hoeffding {
            ranges: vec![1.0; n],
        },
        t,
    )
    .unwrap()
    .exp();
    assert!((hits as f64 / reps as f64) <= bound);
}

#[test]
fn fixed_assignment_follows_its_formulas() {
    for log10 in [50.0f64, 100.0, 1000.0, 100_000.0] {
        let ln_delta = log10 * std::f64::consts::LN_10;
        let p = fixed_assignment(ln_delta, ln_delta);
        assert!((p.theta - p.epsilon / p.omega).abs() <= 1e-12 * p.theta.abs());
        let t = ((5.0 * p.omega / p.epsilon) * p.omega.ln()).ceil();
        assert_eq!(p.iterations, t);
        let ln_c = 0.5 * (ln_delta - p.omega.ln());
        assert!(p.ln_colors >= ln_c - 1e-9 && p.ln_colors <= ln_c + 1e-6);
        let report = check_constraints(&p);
        let names: BTreeSet<&str> = report.constraints.iter().map(|c| c.name.as_str()).collect();
        let want: BTreeSet<String> = (1..=21).map(|i| format!("R{i}")).collect();
        assert_eq!(names, want.iter().map(String::as_str).collect());
        for c in &report.constraints {
            assert!(!c.satisfied || c.holds_numerically, "{}", c.name);
        }
    }
}

proptest! {
    #[test]
    fn practical_parameters_round_trip(
        delta in 2usize..10_000,
        colors in 1usize..500,
        iterations in 1usize..50,
        theta in 0.01f64..1.0,
        p_hat in 0.001f64..1.0,
    ) {
        let np = NibbleParams { colors, iterations, theta, p_hat };
        let p = Parameters::practical(delta as f64, 3.0, 2.0, np).unwrap();
        prop_assert_eq!(p.nibble_params().unwrap(), np);
        prop_assert!((p.delta() - delta as f64).abs() < 1e-6 * delta as f64);
    }

    #[test]
    fn practical_rejects_out_of_range(theta in 1.0001f64..5.0, p_hat in 1.0001f64..5.0) {
        let base = NibbleParams { colors: 4, iterations: 3, theta: 0.5, p_hat: 0.5 };
        let bad = [
            NibbleParams { theta, ..base },
            NibbleParams { p_hat, ..base },
            NibbleParams { colors: 0, ..base },
        ];
        for np in bad {
            prop_assert!(Parameters::practical(10.0, 1.0, 1.0, np).is_err());
        }
    }
}
