//! Brute-force expectimax over full (threat, human action) branch trees.
//!
//! Written directly from the model definitions, sharing no code with the
//! planner: every step enumerates both recommendations, both threat outcomes
//! and both human actions, and recurses on the updated experience pair.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use trust_pomdp::{BehaviorModel, PlanningProblem, RewardSpec, TrustParams};

pub struct Oracle {
    pub first_site: usize,
    /// Threat probability assumed at each step.
    pub threat: Vec<f64>,
    /// Report a disuse human falls back on at each step.
    pub report: Vec<f64>,
    pub reverse_psychology: bool,
    pub trust_seeking: bool,
    pub w_success: f64,
    pub w_failure: f64,
    pub discount: f64,
}

// (health, time) indexed by [wear][threat]
const COSTS: [[(f64, f64); 2]; 2] = [[(0.0, 30.0), (100.0, 50.0)], [(0.0, 250.0), (1.0, 300.0)]];
const W_HEALTH: f64 = 1.0;
const W_TIME: f64 = 0.2;

impl Oracle {
    pub fn from_problem(p: &PlanningProblem) -> Self {
        let mut threat = vec![p.sensed_current];
        threat.extend(&p.reported_future);
        let mut report = vec![p.reported_current];
        report.extend(&p.reported_future);
        Self {
            first_site: p.current_site,
            threat,
            report,
            reverse_psychology: p.assumed_model == BehaviorModel::ReversePsychology,
            trust_seeking: p.reward_spec.trust_seeking,
            w_success: p.trust_params.w_success,
            w_failure: p.trust_params.w_failure,
            discount: p.discount,
        }
    }

    fn wear_mass(&self, step: usize, alpha: f64, beta: f64, rec: usize, wear: usize) -> f64 {
        let trust = alpha / (alpha + beta);
        if self.reverse_psychology {
            if wear == rec {
                trust
            } else {
                1.0 - trust
            }
        } else {
            let own = if wear == 1 { self.report[step] } else { 1.0 - self.report[step] };
            (if wear == rec { trust } else { 0.0 }) + (1.0 - trust) * own
        }
    }

    pub fn q(&self, step: usize, alpha: f64, beta: f64, rec: usize) -> f64 {
        let d = self.threat[step];
        let mut total = 0.0;
        for eta in 0..2 {
            let p_eta = if eta == 1 { d } else { 1.0 - d };
            let agree = rec == eta;
            let bonus = if self.trust_seeking && agree {
                80.0 / (1.0 + (0.5 * (self.first_site + step) as f64).exp())
            } else {
                0.0
            };
            let cont = if step + 1 < self.threat.len() {
                let (a2, b2) = if agree {
                    (alpha + self.w_success, beta)
                } else {
                    (alpha, beta + self.w_failure)
                };
                self.discount * self.value(step + 1, a2, b2)
            } else {
                0.0
            };
            for wear in 0..2 {
                let (h, t) = COSTS[wear][eta];
                let util = -W_HEALTH * h - W_TIME * t;
                total += p_eta * self.wear_mass(step, alpha, beta, rec, wear) * (util + bonus + cont);
            }
        }
        total
    }

    pub fn value(&self, step: usize, alpha: f64, beta: f64) -> f64 {
        self.q(step, alpha, beta, 0).max(self.q(step, alpha, beta, 1))
    }
}

pub fn random_problem(rng: &mut ChaCha8Rng, model: BehaviorModel, trust_seeking: bool) -> (PlanningProblem, f64, f64) {
    let horizon = rng.random_range(1..=3usize);
    let first = rng.random_range(1..=13usize);
    let mut p = || rng.random_range(0.02..0.98);
    let sensed = p();
    let reported_current = p();
    let reported_future: Vec<f64> = (1..horizon).map(|_| p()).collect();
    let problem = PlanningProblem {
        current_site: first,
        sensed_current: sensed,
        reported_current,
        reported_future,
        assumed_model: model,
        reward_spec: RewardSpec {
            trust_seeking,
            ..RewardSpec::default()
        },
        trust_params: TrustParams::default(),
        discount: rng.random_range(0.5..=1.0),
    };
    let alpha = rng.random_range(1.0..300.0);
    let beta = rng.random_range(1.0..300.0);
    (problem, alpha, beta)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
