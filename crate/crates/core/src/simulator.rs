//! Mission simulation: the robot re-plans at every site against an assumed
//! behavior model while a simulated human acts under the actual model.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::behavior::{human_action_distribution, sample_human_action, BehaviorModel};
use crate::error::{Error, Result};
use crate::mission::{generate_mission, observe_performance, EnvConfig, SeedStream, SiteTruth, Variate};
use crate::planner::{backward_induction, optimal_action, Lattice, PlanningProblem};
use crate::reward::{realized_reward, RewardSpec};
use crate::trust::{TrustBelief, TrustParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub env: EnvConfig,
    pub trust_params: TrustParams,
    pub reward_spec: RewardSpec,
    /// Model the robot plans against.
    pub assumed_model: BehaviorModel,
    /// Model generating the simulated human's actions.
    pub actual_model: BehaviorModel,
    pub discount: f64,
    pub n_episodes: usize,
    pub master_seed: u64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            env: EnvConfig::default(),
            trust_params: TrustParams::default(),
            reward_spec: RewardSpec::default(),
            assumed_model: BehaviorModel::ReversePsychology,
            actual_model: BehaviorModel::ReversePsychology,
            discount: 0.9,
            n_episodes: 10_000,
            master_seed: 0,
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        self.env.validate()?;
        self.trust_params.validate()?;
        self.reward_spec.validate()?;
        if !(self.discount > 0.0 && self.discount <= 1.0) {
            return Err(Error::invalid("discount", format!("must lie in (0, 1], got {}", self.discount)));
        }
        if self.n_episodes == 0 {
            return Err(Error::invalid("n_episodes", "at least one episode is required"));
        }
        Ok(())
    }

    pub fn problem_at(&self, mission: &[SiteTruth], site: usize) -> Result<PlanningProblem> {
        PlanningProblem::at_site(
            mission,
            site,
            self.assumed_model,
            self.reward_spec,
            self.trust_params,
            self.discount,
        )
    }

    /// Random streams of episode `index`.
    pub fn episode_stream(&self, index: usize) -> SeedStream {
        SeedStream::new(self.master_seed).child(index as u64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SiteRecord {
    /// One-based site index.
    pub site: usize,
    pub belief_before: TrustBelief,
    pub recommend_wear: bool,
    pub wear: bool,
    pub threat_present: bool,
    pub success: bool,
    pub reward: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpisodeLog {
    pub sites: Vec<SiteRecord>,
    /// Undiscounted sum of realized rewards.
    pub mission_total: f64,
    /// Trust mean after the last site's update.
    pub final_trust: f64,
    pub final_belief: TrustBelief,
}

/// Runs one mission. Human draws come from `stream`'s per-site substreams.
pub fn run_episode(config: &ScenarioConfig, mission: &[SiteTruth], stream: &SeedStream) -> Result<EpisodeLog> {
    if mission.len() != config.env.n_sites {
        return Err(Error::MissionLength {
            expected: config.env.n_sites,
            actual: mission.len(),
        });
    }
    let params = &config.trust_params;
    let mut belief = params.initial_belief();
    let mut total = 0.0;
    let mut sites = Vec::with_capacity(mission.len());
    for (k, truth) in mission.iter().enumerate() {
        let site = k + 1;
        let problem = config.problem_at(mission, site)?;
        let solution = backward_induction(&problem, &Lattice::single(belief))?;
        let recommend_wear = optimal_action(&solution, &belief)?;

        let dist = human_action_distribution(config.actual_model, &belief, recommend_wear, truth.reported)?;
        let wear = sample_human_action(&dist, stream.uniform(k, Variate::Human));
        let reward = realized_reward(wear, truth.threat_present, &config.reward_spec);
        total += reward;

        let success = observe_performance(recommend_wear, truth.threat_present);
        sites.push(SiteRecord {
            site,
            belief_before: belief,
            recommend_wear,
            wear,
            threat_present: truth.threat_present,
            success,
            reward,
        });
        belief = belief.update(success, params);
    }
    Ok(EpisodeLog {
        sites,
        mission_total: total,
        final_trust: belief.trust_mean(),
        final_belief: belief,
    })
}

/// Generates and runs episode `index` of the scenario.
pub fn simulate_episode(config: &ScenarioConfig, index: usize) -> Result<EpisodeLog> {
    let stream = config.episode_stream(index);
    let mission = generate_mission(&config.env, &stream)?;
    run_episode(config, &mission, &stream)
}

/// All episode logs in index order. Episodes run on the current rayon pool.
pub fn simulate_episodes(config: &ScenarioConfig) -> Result<Vec<EpisodeLog>> {
    config.validate()?;
    (0..config.n_episodes)
        .into_par_iter()
        .map(|i| simulate_episode(config, i))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AggregateStats {
    pub n_episodes: usize,
    pub mean_reward: f64,
    pub std_reward: f64,
    pub mean_final_trust: f64,
    pub std_final_trust: f64,
}

impl AggregateStats {
    pub fn se_reward(&self) -> f64 {
        self.std_reward / (self.n_episodes as f64).sqrt()
    }

    pub fn se_final_trust(&self) -> f64 {
        self.std_final_trust / (self.n_episodes as f64).sqrt()
    }
}

/// Mean and sample standard deviation (n - 1 denominator; zero for one sample).
fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = xs.iter().map(|x| (x - mean) * (x - mean)).sum();
    (mean, (ss / (n - 1.0)).sqrt())
}

fn aggregate(outcomes: &[(f64, f64)]) -> Result<AggregateStats> {
    if outcomes.is_empty() {
        return Err(Error::EmptyLogs);
    }
    let rewards: Vec<f64> = outcomes.iter().map(|o| o.0).collect();
    let trusts: Vec<f64> = outcomes.iter().map(|o| o.1).collect();
    let (mean_reward, std_reward) = mean_std(&rewards);
    let (mean_final_trust, std_final_trust) = mean_std(&trusts);
    Ok(AggregateStats {
        n_episodes: outcomes.len(),
        mean_reward,
        std_reward,
        mean_final_trust,
        std_final_trust,
    })
}

pub fn summarize(logs: &[EpisodeLog]) -> Result<AggregateStats> {
    let outcomes: Vec<(f64, f64)> = logs.iter().map(|l| (l.mission_total, l.final_trust)).collect();
    aggregate(&outcomes)
}

/// Monte Carlo estimate over `n_episodes` independent missions. The result
/// does not depend on the size of the rayon pool.
pub fn run_monte_carlo(config: &ScenarioConfig) -> Result<AggregateStats> {
    config.validate()?;
    let outcomes: Vec<(f64, f64)> = (0..config.n_episodes)
        .into_par_iter()
        .map(|i| simulate_episode(config, i).map(|log| (log.mission_total, log.final_trust)))
        .collect::<Result<_>>()?;
    aggregate(&outcomes)
}
