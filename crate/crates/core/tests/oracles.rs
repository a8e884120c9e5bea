mod common;

use common::*;
use qsigma::envs::RandomWalk19;
use qsigma::rng::agent_rng;
use qsigma::SigmaScheme;

const EPISODES: usize = 100;

fn compare<E, F>(make_env: F, states: usize, scheme: SigmaScheme, sigma_ref: Option<f64>, p: &Params, seed: u64)
where
    E: qsigma::envs::Environment<Obs = usize>,
    F: Fn() -> E,
{
    let ours = library_learner(&mut make_env(), states, scheme, p, &mut agent_rng(seed));
    let reference = match sigma_ref {
        None => sarsa_lambda(&mut make_env(), states, p, &mut agent_rng(seed)),
        Some(s) if s == 0.0 && p.lambda == 0.0 => expected_sarsa(&mut make_env(), states, p, &mut agent_rng(seed)),
        Some(s) => one_step_q_sigma(&mut make_env(), states, s, p, &mut agent_rng(seed)),
    };
    if let Err(msg) = assert_identical(&ours, &reference) {
        panic!("{msg}");
    }
}

fn chain_params(lambda: f64) -> Params {
    Params {
        alpha: 0.1,
        gamma: 0.9,
        lambda,
        behaviour: Behaviour::Greedy(0.1),
        episodes: EPISODES,
    }
}

fn walk_params(lambda: f64) -> Params {
    Params {
        alpha: 0.2,
        gamma: 1.0,
        lambda,
        behaviour: Behaviour::Uniform,
        episodes: EPISODES,
    }
}

#[test]
fn full_sampling_is_sarsa_lambda_on_chain() {
    for (seed, lambda) in [(1, 0.8), (2, 0.5), (3, 0.95)] {
        compare(
            || Chain::new(seed),
            Chain::STATES,
            SigmaScheme::constant(1.0).unwrap(),
            None,
            &chain_params(lambda),
            seed,
        );
    }
}

#[test]
fn full_sampling_is_sarsa_lambda_on_random_walk() {
    for (seed, lambda) in [(4, 0.7), (5, 0.3)] {
        compare(
            RandomWalk19::new,
            21,
            SigmaScheme::constant(1.0).unwrap(),
            None,
            &walk_params(lambda),
            seed,
        );
    }
}

#[test]
fn zero_lambda_is_one_step_q_sigma() {
    for sigma in [1.0, 0.5, 0.25] {
        let scheme = || SigmaScheme::constant(sigma).unwrap();
        compare(
            || Chain::new(7),
            Chain::STATES,
            scheme(),
            Some(sigma),
            &chain_params(0.0),
            7,
        );
        compare(RandomWalk19::new, 21, scheme(), Some(sigma), &walk_params(0.0), 8);
    }
}

#[test]
fn no_sampling_without_traces_is_expected_sarsa() {
    let scheme = || SigmaScheme::constant(0.0).unwrap();
    compare(
        || Chain::new(9),
        Chain::STATES,
        scheme(),
        Some(0.0),
        &chain_params(0.0),
        9,
    );
    compare(RandomWalk19::new, 21, scheme(), Some(0.0), &walk_params(0.0), 10);
}

#[test]
fn oracle_mismatch_is_detected() {
    // Guard against a comparison that passes vacuously.
    let p = chain_params(0.8);
    let ours = library_learner(
        &mut Chain::new(1),
        3,
        SigmaScheme::constant(0.5).unwrap(),
        &p,
        &mut agent_rng(1),
    );
    let reference = sarsa_lambda(&mut Chain::new(1), 3, &p, &mut agent_rng(1));
    assert!(assert_identical(&ours, &reference).is_err());
}

#[test]
fn no_sampling_with_traces_is_tree_backup() {
    for (seed, lambda) in [(11, 0.8), (12, 0.4)] {
        let p = chain_params(lambda);
        let ours = library_learner(
            &mut Chain::new(seed),
            3,
            SigmaScheme::constant(0.0).unwrap(),
            &p,
            &mut agent_rng(seed),
        );
        let reference = tree_backup_lambda(&mut Chain::new(seed), 3, &p, &mut agent_rng(seed));
        assert_identical(&ours, &reference).unwrap();
    }
    let p = walk_params(0.7);
    let ours = library_learner(
        &mut RandomWalk19::new(),
        21,
        SigmaScheme::constant(0.0).unwrap(),
        &p,
        &mut agent_rng(13),
    );
    let reference = tree_backup_lambda(&mut RandomWalk19::new(), 21, &p, &mut agent_rng(13));
    assert_identical(&ours, &reference).unwrap();
}
