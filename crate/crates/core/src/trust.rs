//! Beta-distributed trust belief and its performance-driven update.
//!
//! The human's trust before interaction `k` is `Beta(alpha_k, beta_k)`. The pair
//! `(alpha, beta)` is a sufficient statistic of the interaction history and is the
//! planner's belief state. A robot success adds `w_success` to `alpha`; a failure
//! adds `w_failure` to `beta`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Experience pair `(alpha, beta)` of the Beta trust distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrustBelief {
    alpha: f64,
    beta: f64,
}

impl TrustBelief {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::invalid("alpha", format!("must be positive, got {alpha}")));
        }
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::invalid("beta", format!("must be positive, got {beta}")));
        }
        Ok(Self { alpha, beta })
    }

    #[inline]
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    #[inline]
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Mean of the trust distribution, `alpha / (alpha + beta)`.
    #[inline]
    pub fn trust_mean(&self) -> f64 {
        self.alpha / (self.alpha + self.beta)
    }

    /// Probability that the human follows a recommendation.
    #[inline]
    pub fn follow_probability(&self) -> f64 {
        follow_link(self.trust_mean())
    }

    /// Belief after observing one robot performance bit.
    #[inline]
    pub fn update(&self, success: bool, params: &TrustParams) -> Self {
        if success {
            Self {
                alpha: self.alpha + params.w_success,
                beta: self.beta,
            }
        } else {
            Self {
                alpha: self.alpha,
                beta: self.beta + params.w_failure,
            }
        }
    }
}

/// Maps trust mean to follow probability. Identity; any non-decreasing map on
/// `[0, 1]` may replace it.
#[inline]
pub fn follow_link(trust: f64) -> f64 {
    trust
}

pub fn update_belief(belief: TrustBelief, success: bool, params: &TrustParams) -> TrustBelief {
    belief.update(success, params)
}

pub fn trust_mean(belief: TrustBelief) -> f64 {
    belief.trust_mean()
}

pub fn follow_probability(belief: TrustBelief) -> f64 {
    belief.follow_probability()
}

/// Experience gains and the initial belief.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrustParams {
    pub w_success: f64,
    pub w_failure: f64,
    pub alpha_init: f64,
    pub beta_init: f64,
}

impl Default for TrustParams {
    fn default() -> Self {
        Self {
            w_success: 10.0,
            w_failure: 20.0,
            alpha_init: 100.0,
            beta_init: 50.0,
        }
    }
}

impl TrustParams {
    pub fn new(w_success: f64, w_failure: f64, alpha_init: f64, beta_init: f64) -> Result<Self> {
        let params = Self {
            w_success,
            w_failure,
            alpha_init,
            beta_init,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("w_success", self.w_success),
            ("w_failure", self.w_failure),
            ("alpha_init", self.alpha_init),
            ("beta_init", self.beta_init),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::invalid(name, format!("must be positive, got {value}")));
            }
        }
        Ok(())
    }

    pub fn initial_belief(&self) -> TrustBelief {
        TrustBelief {
            alpha: self.alpha_init,
            beta: self.beta_init,
        }
    }

    /// Belief reached from the initial belief after `successes` successes and
    /// `failures` failures.
    pub fn lattice_point(&self, successes: usize, failures: usize) -> TrustBelief {
        TrustBelief {
            alpha: self.alpha_init + successes as f64 * self.w_success,
            beta: self.beta_init + failures as f64 * self.w_failure,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gains() -> TrustParams {
        TrustParams::new(10.0, 20.0, 100.0, 50.0).unwrap()
    }

    #[test]
    fn update_adds_gain_to_matching_side() {
        let b = TrustBelief::new(100.0, 50.0).unwrap();
        assert_eq!(update_belief(b, true, &gains()), TrustBelief::new(110.0, 50.0).unwrap());
        assert_eq!(update_belief(b, false, &gains()), TrustBelief::new(100.0, 70.0).unwrap());
        // input is a value, untouched
        assert_eq!(b, TrustBelief::new(100.0, 50.0).unwrap());

        let uniform = TrustBelief::new(1.0, 1.0).unwrap();
        assert_eq!(uniform.update(true, &gains()), TrustBelief::new(11.0, 1.0).unwrap());
    }

    #[test]
    fn zero_gain_rejected() {
        assert!(matches!(
            TrustParams::new(0.0, 20.0, 1.0, 1.0),
            Err(Error::InvalidParameter { name: "w_success", .. })
        ));
        assert!(TrustParams::new(10.0, 20.0, 1.0, -1.0).is_err());
        assert!(TrustBelief::new(0.0, 1.0).is_err());
        assert!(TrustBelief::new(1.0, f64::NAN).is_err());
    }

    #[test]
    fn mean_and_follow_probability() {
        let hi = TrustBelief::new(100.0, 50.0).unwrap();
        let lo = TrustBelief::new(50.0, 100.0).unwrap();
        assert!((trust_mean(hi) - 2.0 / 3.0).abs() < 1e-12);
        assert!((trust_mean(lo) - 1.0 / 3.0).abs() < 1e-12);
        assert!((follow_probability(hi) - 0.6667).abs() < 1e-4);
        assert!((follow_probability(lo) - 0.3333).abs() < 1e-4);
        assert_eq!(follow_probability(TrustBelief::new(1.0, 1.0).unwrap()), 0.5);
        assert_eq!(trust_mean(TrustBelief::new(7.25, 7.25).unwrap()), 0.5);
    }

    #[test]
    fn failure_outweighs_success() {
        let start = TrustBelief::new(100.0, 50.0).unwrap();
        let end = start.update(true, &gains()).update(false, &gains());
        assert_eq!(end, TrustBelief::new(110.0, 70.0).unwrap());
        assert!((end.trust_mean() - 0.6111).abs() < 1e-4);
        assert!(end.trust_mean() < start.trust_mean());
    }

    proptest! {
        #[test]
        fn update_is_monotone(alpha in 0.01f64..1e4, beta in 0.01f64..1e4,
                              ws in 0.01f64..100.0, wf in 0.01f64..100.0) {
            let p = TrustParams::new(ws, wf, 1.0, 1.0).unwrap();
            let b = TrustBelief::new(alpha, beta).unwrap();
            prop_assert!(b.update(true, &p).trust_mean() > b.trust_mean());
            prop_assert!(b.update(false, &p).trust_mean() < b.trust_mean());
        }

        #[test]
        fn updates_stay_on_lattice(bits in proptest::collection::vec(any::<bool>(), 0..40)) {
            let p = gains();
            let mut b = p.initial_belief();
            for &s in &bits {
                b = b.update(s, &p);
            }
            let i = bits.iter().filter(|&&s| s).count();
            let j = bits.len() - i;
            prop_assert_eq!(b, p.lattice_point(i, j));
        }

        #[test]
        fn follow_probability_is_scale_free(alpha in 0.01f64..1e3, beta in 0.01f64..1e3, c in 0.01f64..100.0) {
            let b = TrustBelief::new(alpha, beta).unwrap();
            let scaled = TrustBelief::new(c * alpha, c * beta).unwrap();
            prop_assert!((b.follow_probability() - scaled.follow_probability()).abs() < 1e-12);
        }
    }
}
