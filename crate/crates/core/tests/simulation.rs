use trust_pomdp::experiment::with_workers;
use trust_pomdp::{
    run_monte_carlo, simulate_episode, simulate_episodes, BehaviorModel, EnvConfig, RewardSpec, ScenarioConfig,
    TrustParams,
};

fn scenario(assumed: BehaviorModel, actual: BehaviorModel, trust_seeking: bool, n: usize) -> ScenarioConfig {
    ScenarioConfig {
        reward_spec: RewardSpec {
            trust_seeking,
            ..RewardSpec::default()
        },
        assumed_model: assumed,
        actual_model: actual,
        n_episodes: n,
        master_seed: 77,
        ..ScenarioConfig::default()
    }
}

#[test]
fn episode_replay_is_identical() {
    let cfg = scenario(BehaviorModel::ReversePsychology, BehaviorModel::Disuse, true, 4);
    for i in 0..4 {
        assert_eq!(simulate_episode(&cfg, i).unwrap(), simulate_episode(&cfg, i).unwrap());
    }
}

#[test]
fn episodes_respect_model_invariants() {
    for assumed in BehaviorModel::ALL {
        for actual in BehaviorModel::ALL {
            for ts in [false, true] {
                let cfg = scenario(assumed, actual, ts, 40);
                let params = cfg.trust_params;
                let (lo, hi) = cfg.reward_spec.utility_range();
                for log in simulate_episodes(&cfg).unwrap() {
                    assert_eq!(log.sites.len(), 15);
                    let total: f64 = log.sites.iter().map(|s| s.reward).sum();
                    assert_eq!(total, log.mission_total);
                    assert!(log.mission_total >= 15.0 * lo && log.mission_total <= 15.0 * hi);
                    assert!(log.mission_total >= -1650.0 && log.mission_total <= -90.0);

                    let mut belief = params.initial_belief();
                    for s in &log.sites {
                        assert_eq!(s.belief_before, belief);
                        assert_eq!(s.success, s.recommend_wear == s.threat_present);
                        belief = belief.update(s.success, &params);
                    }
                    assert_eq!(belief, log.final_belief);
                    let i = log.sites.iter().filter(|s| s.success).count();
                    assert_eq!(log.final_belief, params.lattice_point(i, 15 - i));
                    assert!(log.final_trust > 0.0 && log.final_trust < 1.0);
                    assert_eq!(log.final_trust, log.final_belief.trust_mean());
                }
            }
        }
    }
}

#[test]
fn full_trust_human_always_complies() {
    for model in BehaviorModel::ALL {
        let mut cfg = scenario(model, model, false, 20);
        cfg.trust_params = TrustParams::new(10.0, 20.0, 1e9, 1.0).unwrap();
        for log in simulate_episodes(&cfg).unwrap() {
            for s in &log.sites {
                assert_eq!(s.wear, s.recommend_wear);
            }
        }
    }
}

#[test]
fn monte_carlo_is_independent_of_worker_count() {
    let cfg = ScenarioConfig {
        env: EnvConfig {
            kappa1: 2.0,
            kappa2: 2.0,
            ..EnvConfig::default()
        },
        ..scenario(BehaviorModel::Disuse, BehaviorModel::ReversePsychology, true, 300)
    };
    let one = with_workers(Some(1), || run_monte_carlo(&cfg)).unwrap().unwrap();
    let four = with_workers(Some(4), || run_monte_carlo(&cfg)).unwrap().unwrap();
    assert_eq!(one.mean_reward.to_bits(), four.mean_reward.to_bits());
    assert_eq!(one.std_reward.to_bits(), four.std_reward.to_bits());
    assert_eq!(one.mean_final_trust.to_bits(), four.mean_final_trust.to_bits());
    assert_eq!(one.std_final_trust.to_bits(), four.std_final_trust.to_bits());
}

#[test]
fn zero_episodes_rejected() {
    let cfg = scenario(BehaviorModel::Disuse, BehaviorModel::Disuse, false, 0);
    assert!(run_monte_carlo(&cfg).is_err());
}
