mod common;

use adaptive_oco::harness::{run_experiment, write_trace, Algorithm, EnvironmentSpec, ExperimentConfig};
use adaptive_oco::{run_game, Ader, Aoa, Aod, Domain, Loss, Ogd, OnlineLearner, Point};
use common::{abrupt, env, naive_aod, thetas};
use proptest::prelude::*;

#[test]
fn ogd_replays_against_hand_computation() {
    let e = env(&abrupt(3), 8, 7);
    let th = thetas(&e);
    let mut ogd = Ogd::tuned(e.domain().clone(), e.lipschitz(), 8).unwrap();
    let trace = run_game(&mut ogd, &e).unwrap();

    let eta = 1.0 / 8f64.sqrt();
    let mut w = 0.0f64;
    for (t, theta) in th.iter().enumerate() {
        assert_eq!(trace.rounds[t].action.coords()[0].to_bits(), w.to_bits(), "round {}", t + 1);
        assert_eq!(trace.rounds[t].loss_value, (w - theta).abs());
        let g = if w == *theta { 0.0 } else { (w - theta).signum() };
        w = (w - eta * g).clamp(0.0, 1.0);
    }
}

#[test]
fn aod_matches_naive_reimplementation_bit_for_bit() {
    for (horizon, seed, segments) in [(16, 0, 4), (16, 9, 1), (100, 2, 7), (257, 5, 16)] {
        let e = env(&abrupt(segments), horizon, seed);
        let mut aod = Aod::new(e.domain().clone(), e.lipschitz(), horizon).unwrap();
        let trace = run_game(&mut aod, &e).unwrap();
        let naive = naive_aod(&thetas(&e));
        for (t, (a, b)) in trace.actions().iter().zip(&naive).enumerate() {
            assert_eq!(a.coords()[0].to_bits(), b.to_bits(), "T={horizon} round {}", t + 1);
        }
    }
}

fn learners(domain: &Domain, horizon: usize) -> Vec<(&'static str, Box<dyn OnlineLearner>)> {
    vec![
        ("ogd", Box::new(Ogd::tuned(domain.clone(), 1.0, horizon).unwrap())),
        ("ader", Box::new(Ader::new(domain.clone(), 1.0, horizon).unwrap())),
        ("aod", Box::new(Aod::new(domain.clone(), 1.0, horizon).unwrap())),
        ("aoa", Box::new(Aoa::new(domain.clone(), 1.0).unwrap())),
    ]
}

#[test]
fn actions_never_depend_on_future_losses() {
    let horizon = 40;
    let base = env(&abrupt(5), horizon, 11);
    for t0 in [1, 7, 20, 40] {
        let mut changed = base.clone();
        let th = thetas(&base)[t0 - 1];
        changed.replace_loss(t0, Loss::distance(Point::scalar(1.0 - th), 1.0).unwrap()).unwrap();
        let runs = learners(base.domain(), horizon).into_iter().zip(learners(base.domain(), horizon));
        for ((name, mut a), (_, mut b)) in runs {
            let x = run_game(a.as_mut(), &base).unwrap().actions();
            let y = run_game(b.as_mut(), &changed).unwrap().actions();
            assert_eq!(x[..t0], y[..t0], "{name}: perturbing round {t0} changed an earlier action");
        }
    }
}

#[test]
fn identical_configs_give_identical_trace_files() {
    for algorithm in [Algorithm::Ogd, Algorithm::Ader, Algorithm::Aod, Algorithm::Aoa] {
        for spec in [abrupt(4), EnvironmentSpec::AdversarialLinear { dim: 3, segments: 1 }] {
            let config = ExperimentConfig::new(algorithm, 48, 21, spec);
            let render = || {
                let exp = run_experiment(&config).unwrap();
                let mut buf = Vec::new();
                write_trace(&mut buf, &exp.trace_file()).unwrap();
                buf
            };
            assert_eq!(render(), render(), "{algorithm}");
        }
    }
}

#[test]
fn warm_starts_copy_the_dying_iterate() {
    let horizon = 64;
    let e = env(&abrupt(8), horizon, 4);
    let mut aod = Aod::new(e.domain().clone(), e.lipschitz(), horizon).unwrap();
    for t in 1..=horizon {
        // the dying expert of each level, just before its replacement opens
        let before: Vec<_> = aod.slots().map(|s| (s.interval, s.learner.current().clone())).collect();
        aod.act().unwrap();
        for ws in aod.warm_starts().iter().filter(|w| w.round == t) {
            let (_, prev) = before.iter().find(|(i, _)| *i == ws.from).unwrap();
            assert_eq!(ws.inherited, *prev);
            let successor = aod.slots().find(|s| s.interval == ws.to).unwrap();
            assert_eq!(successor.last_action.coords()[0].to_bits(), prev.coords()[0].to_bits());
        }
        aod.observe(e.loss_at(t)).unwrap();
    }
    assert_eq!(aod.warm_starts().len(), (1..=6).map(|k| horizon / (1 << k) - 1).sum::<usize>() + horizon - 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn combined_weights_form_a_distribution(thetas in proptest::collection::vec(0.0f64..=1.0, 1..80)) {
        let domain = Domain::interval(0.0, 1.0).unwrap();
        let losses: Vec<Loss> = thetas.iter().map(|&t| Loss::distance(Point::scalar(t), 1.0).unwrap()).collect();
        let e = adaptive_oco::Environment::new(domain.clone(), losses, 0).unwrap();
        let mut aod = Aod::new(domain.clone(), 1.0, thetas.len()).unwrap();
        let mut aoa = Aoa::new(domain, 1.0).unwrap();
        for learner in [&mut aod as &mut dyn OnlineLearner, &mut aoa] {
            let trace = run_game(learner, &e).unwrap();
            for r in &trace.rounds {
                let total: f64 = r.experts.iter().map(|x| x.weight).sum();
                prop_assert!((total - 1.0).abs() <= 1e-12);
                prop_assert!(r.experts.iter().all(|x| x.weight >= 0.0));
                let w = r.action.coords()[0];
                prop_assert!((0.0..=1.0).contains(&w));
            }
        }
    }
}
