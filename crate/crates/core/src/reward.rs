//! Task reward and trust-seeking bonus.

use serde::{Deserialize, Serialize};

use crate::behavior::{check_open_unit, wear_probability, BehaviorModel};
use crate::error::{Error, Result};
use crate::mission::{CostPair, CostTable};
use crate::trust::TrustBelief;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RewardSpec {
    pub cost_table: CostTable,
    /// Weight on health loss.
    pub health_weight: f64,
    /// Weight on time cost.
    pub time_weight: f64,
    /// Numerator of the trust bonus `scale / (1 + exp(rate * k))`.
    pub bonus_scale: f64,
    pub bonus_rate: f64,
    /// Add the trust bonus to the planning reward.
    pub trust_seeking: bool,
}

impl Default for RewardSpec {
    fn default() -> Self {
        Self {
            cost_table: CostTable::default(),
            health_weight: 1.0,
            time_weight: 0.2,
            bonus_scale: 80.0,
            bonus_rate: 0.5,
            trust_seeking: false,
        }
    }
}

impl RewardSpec {
    pub fn trust_seeking() -> Self {
        Self {
            trust_seeking: true,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.health_weight.is_finite() && self.health_weight >= 0.0) {
            return Err(Error::invalid("health_weight", "must be finite and non-negative"));
        }
        if !(self.time_weight.is_finite() && self.time_weight >= 0.0) {
            return Err(Error::invalid("time_weight", "must be finite and non-negative"));
        }
        if !self.bonus_scale.is_finite() {
            return Err(Error::invalid("bonus_scale", "must be finite"));
        }
        if !self.bonus_rate.is_finite() {
            return Err(Error::invalid("bonus_rate", "must be finite"));
        }
        let cells = [
            self.cost_table.wear_threat,
            self.cost_table.wear_clear,
            self.cost_table.skip_threat,
            self.cost_table.skip_clear,
        ];
        if cells.iter().any(|c| !(c.health.is_finite() && c.time.is_finite())) {
            return Err(Error::invalid("cost_table", "costs must be finite"));
        }
        Ok(())
    }

    /// Trust bonus weight at (one-based) mission site `k`.
    #[inline]
    pub fn bonus_weight(&self, site_index: usize) -> f64 {
        self.bonus_scale / (1.0 + (self.bonus_rate * site_index as f64).exp())
    }

    #[inline]
    pub fn utility(&self, wear: bool, threat: bool) -> f64 {
        cell_utility(self.cost_table.cost(wear, threat), self)
    }

    /// Smallest and largest one-site utility in the table.
    pub fn utility_range(&self) -> (f64, f64) {
        let u = [
            self.utility(true, true),
            self.utility(true, false),
            self.utility(false, true),
            self.utility(false, false),
        ];
        let lo = u.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = u.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    }
}

#[inline]
pub fn cell_utility(cost: CostPair, spec: &RewardSpec) -> f64 {
    -spec.health_weight * cost.health - spec.time_weight * cost.time
}

#[inline]
pub(crate) fn task_reward_unchecked(
    belief: &TrustBelief,
    model: BehaviorModel,
    recommend_wear: bool,
    threat_prob: f64,
    reported_threat: f64,
    spec: &RewardSpec,
) -> f64 {
    let wear = wear_probability(model, belief, recommend_wear, reported_threat);
    let skip = 1.0 - wear;
    let clear = 1.0 - threat_prob;
    wear * (threat_prob * spec.utility(true, true) + clear * spec.utility(true, false))
        + skip * (threat_prob * spec.utility(false, true) + clear * spec.utility(false, false))
}

/// Expected one-site task reward, with the human's action and the threat
/// independent given the belief.
pub fn expected_task_reward(
    belief: &TrustBelief,
    model: BehaviorModel,
    recommend_wear: bool,
    threat_prob: f64,
    reported_threat: f64,
    spec: &RewardSpec,
) -> Result<f64> {
    check_open_unit("threat_prob", threat_prob)?;
    check_open_unit("reported_threat", reported_threat)?;
    Ok(task_reward_unchecked(
        belief,
        model,
        recommend_wear,
        threat_prob,
        reported_threat,
        spec,
    ))
}

/// Probability that the recommendation will match the threat.
#[inline]
pub fn agreement_probability(recommend_wear: bool, threat_prob: f64) -> f64 {
    if recommend_wear {
        threat_prob
    } else {
        1.0 - threat_prob
    }
}

/// Expected trust bonus at one-based site `site_index`; zero unless trust seeking is on.
#[inline]
pub fn expected_trust_bonus(site_index: usize, recommend_wear: bool, threat_prob: f64, spec: &RewardSpec) -> f64 {
    if !spec.trust_seeking {
        return 0.0;
    }
    spec.bonus_weight(site_index) * agreement_probability(recommend_wear, threat_prob)
}

#[inline]
pub fn realized_reward(wear: bool, threat_present: bool, spec: &RewardSpec) -> f64 {
    spec.utility(wear, threat_present)
}
