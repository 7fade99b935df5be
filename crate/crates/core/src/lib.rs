//! Trust-aware POMDP planning for a human-robot reconnaissance team.
//!
//! The robot keeps a Beta belief over the human's trust, plans recommendations
//! by backward induction over the reachable belief lattice, and is evaluated in
//! Monte Carlo missions against a simulated human whose compliance follows
//! either a reverse-psychology or a disuse trust-behavior model.

pub mod behavior;
pub mod error;
pub mod experiment;
pub mod mission;
pub mod planner;
pub mod reward;
pub mod simulator;
pub mod trust;

pub use behavior::{human_action_distribution, sample_human_action, ActionDistribution, BehaviorModel};
pub use error::{ConfigError, Error, Result, RunError};
pub use mission::{
    generate_mission, observe_performance, realized_cost, CostPair, CostTable, EnvConfig, SeedStream, SiteTruth,
    Variate,
};
pub use planner::{
    backward_induction, optimal_action, q_value, transition_probabilities, Lattice, PlanningProblem, PolicyCell,
    PolicySolution, StepGrid,
};
pub use reward::{cell_utility, expected_task_reward, expected_trust_bonus, realized_reward, RewardSpec};
pub use simulator::{
    run_episode, run_monte_carlo, simulate_episode, simulate_episodes, summarize, AggregateStats, EpisodeLog,
    ScenarioConfig, SiteRecord,
};
pub use trust::{follow_probability, trust_mean, update_belief, TrustBelief, TrustParams};
