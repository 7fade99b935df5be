//! Trust-behavior models: how a human responds to a recommendation.
//!
//! With probability `q = follow_probability(belief)` the human does what the robot
//! recommends. Otherwise a reverse-psychology human does the opposite, while a
//! disuse human ignores the robot and wears gear with the probability given by
//! the mission-start intelligence report.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::trust::TrustBelief;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BehaviorModel {
    ReversePsychology,
    Disuse,
}

impl BehaviorModel {
    pub const ALL: [BehaviorModel; 2] = [BehaviorModel::ReversePsychology, BehaviorModel::Disuse];

    pub fn as_str(&self) -> &'static str {
        match self {
            BehaviorModel::ReversePsychology => "reverse_psychology",
            BehaviorModel::Disuse => "disuse",
        }
    }
}

impl fmt::Display for BehaviorModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BehaviorModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "reverse_psychology" | "rp" => Ok(BehaviorModel::ReversePsychology),
            "disuse" => Ok(BehaviorModel::Disuse),
            other => Err(Error::invalid("behavior_model", format!("unknown model `{other}`"))),
        }
    }
}

/// Distribution over the human's binary action (wear gear or not).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActionDistribution {
    p_wear: f64,
}

impl ActionDistribution {
    pub fn from_wear(p_wear: f64) -> Self {
        debug_assert!((0.0..=1.0).contains(&p_wear));
        Self { p_wear }
    }

    #[inline]
    pub fn p_wear(&self) -> f64 {
        self.p_wear
    }

    #[inline]
    pub fn p_skip(&self) -> f64 {
        1.0 - self.p_wear
    }

    #[inline]
    pub fn prob(&self, wear: bool) -> f64 {
        if wear {
            self.p_wear()
        } else {
            self.p_skip()
        }
    }
}

pub(crate) fn check_open_unit(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value < 1.0 {
        Ok(())
    } else {
        Err(Error::ProbabilityOutOfRange { name, value })
    }
}

/// Wear probability with all inputs already validated.
#[inline]
pub(crate) fn wear_probability(
    model: BehaviorModel,
    belief: &TrustBelief,
    recommend_wear: bool,
    reported_threat: f64,
) -> f64 {
    let follow = belief.follow_probability();
    match (model, recommend_wear) {
        (BehaviorModel::ReversePsychology, true) => follow,
        (BehaviorModel::ReversePsychology, false) => 1.0 - follow,
        (BehaviorModel::Disuse, true) => follow + (1.0 - follow) * reported_threat,
        (BehaviorModel::Disuse, false) => (1.0 - follow) * reported_threat,
    }
}

pub fn human_action_distribution(
    model: BehaviorModel,
    belief: &TrustBelief,
    recommend_wear: bool,
    reported_threat: f64,
) -> Result<ActionDistribution> {
    check_open_unit("reported_threat", reported_threat)?;
    Ok(ActionDistribution::from_wear(wear_probability(
        model,
        belief,
        recommend_wear,
        reported_threat,
    )))
}

/// Realizes a human action from a uniform draw in `[0, 1)`: wear iff `draw < p_wear`.
#[inline]
pub fn sample_human_action(dist: &ActionDistribution, draw: f64) -> bool {
    draw < dist.p_wear()
}
