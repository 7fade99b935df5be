//! Reconnaissance mission environment.
//!
//! Each site has a latent danger level `d ~ U[0, 1]`, a realized threat
//! `eta ~ Bern(d)`, a mission-start intelligence report `d_tilde ~ Beta(k1 d, k1 (1 - d))`
//! and the robot's on-site estimate `d_hat ~ Beta(k2 d, k2 (1 - d))`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Clamp margin keeping Beta parameters and estimates inside the open unit interval.
pub const EPSILON: f64 = 1e-6;

#[inline]
pub fn clamp_unit(p: f64) -> f64 {
    p.clamp(EPSILON, 1.0 - EPSILON)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SiteTruth {
    /// Latent danger level `d`.
    pub danger: f64,
    /// Whether a threat is actually present.
    pub threat_present: bool,
    /// Intelligence report available before the mission.
    pub reported: f64,
    /// Robot's estimate after scanning the site.
    pub sensed: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EnvConfig {
    pub n_sites: usize,
    /// Concentration of the intelligence report around `d`.
    pub kappa1: f64,
    /// Concentration of the robot's estimate around `d`.
    pub kappa2: f64,
    pub seed: u64,
}

impl Default for EnvConfig {
    fn default() -> Self {
        Self {
            n_sites: 15,
            kappa1: 3.0,
            kappa2: 50.0,
            seed: 0,
        }
    }
}

impl EnvConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_sites == 0 {
            return Err(Error::invalid("n_sites", "a mission needs at least one site"));
        }
        if !(self.kappa1.is_finite() && self.kappa1 >= 1.0) {
            return Err(Error::invalid("kappa1", format!("must be >= 1, got {}", self.kappa1)));
        }
        // kappa2 == kappa1 is allowed for the equal-accuracy sweep cells.
        if !(self.kappa2.is_finite() && self.kappa2 >= self.kappa1) {
            return Err(Error::invalid(
                "kappa2",
                format!("must be >= kappa1 ({}), got {}", self.kappa1, self.kappa2),
            ));
        }
        Ok(())
    }
}

/// Random variates drawn per site. Each gets its own substream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Variate {
    Danger = 1,
    Threat = 2,
    Reported = 3,
    Sensed = 4,
    Human = 5,
}

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A node in a tree of deterministic random streams.
///
/// `child(i)` derives an independent node, and `rng(site, role)` yields the
/// generator for one variate at one site. Values never depend on the order in
/// which streams are requested, so episodes may run on any number of workers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedStream {
    key: u64,
}

impl SeedStream {
    pub fn new(seed: u64) -> Self {
        Self {
            key: splitmix64(seed),
        }
    }

    pub fn child(&self, index: u64) -> Self {
        Self {
            key: splitmix64(self.key ^ splitmix64(index.wrapping_add(0x5851_F42D_4C95_7F2D))),
        }
    }

    pub fn key(&self) -> u64 {
        self.key
    }

    pub fn rng(&self, site: usize, role: Variate) -> ChaCha8Rng {
        let site_key = self.child(site as u64).key;
        ChaCha8Rng::seed_from_u64(splitmix64(site_key ^ (role as u64)))
    }

    /// One uniform draw in `[0, 1)` for `(site, role)`.
    pub fn uniform(&self, site: usize, role: Variate) -> f64 {
        self.rng(site, role).random::<f64>()
    }
}

fn sample_estimate(stream: &SeedStream, site: usize, role: Variate, kappa: f64, danger: f64) -> f64 {
    let d = clamp_unit(danger);
    let dist = Beta::new(kappa * d, kappa * (1.0 - d)).expect("beta parameters positive after clamping");
    let x: f64 = dist.sample(&mut stream.rng(site, role));
    if x.is_nan() {
        // Extreme shape parameters can underflow both gamma draws.
        return clamp_unit(d);
    }
    clamp_unit(x)
}

/// Samples one site. `site` is zero-based.
pub fn generate_site(config: &EnvConfig, stream: &SeedStream, site: usize) -> SiteTruth {
    let danger = stream.uniform(site, Variate::Danger);
    let threat_present = stream.uniform(site, Variate::Threat) < danger;
    let reported = sample_estimate(stream, site, Variate::Reported, config.kappa1, danger);
    let sensed = sample_estimate(stream, site, Variate::Sensed, config.kappa2, danger);
    SiteTruth {
        danger,
        threat_present,
        reported,
        sensed,
    }
}

pub fn generate_mission(config: &EnvConfig, stream: &SeedStream) -> Result<Vec<SiteTruth>> {
    config.validate()?;
    Ok((0..config.n_sites).map(|k| generate_site(config, stream, k)).collect())
}

/// Robot performance: success iff the recommendation matches threat presence.
#[inline]
pub fn observe_performance(recommend_wear: bool, threat_present: bool) -> bool {
    recommend_wear == threat_present
}

/// Health loss and time cost of one site outcome.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostPair {
    pub health: f64,
    pub time: f64,
}

impl CostPair {
    pub const fn new(health: f64, time: f64) -> Self {
        Self { health, time }
    }
}

impl From<[f64; 2]> for CostPair {
    fn from([health, time]: [f64; 2]) -> Self {
        Self { health, time }
    }
}

impl From<CostPair> for [f64; 2] {
    fn from(c: CostPair) -> Self {
        [c.health, c.time]
    }
}

/// Outcome costs keyed by (human wears gear, threat present).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostTable {
    #[serde(with = "pair")]
    pub wear_threat: CostPair,
    #[serde(with = "pair")]
    pub wear_clear: CostPair,
    #[serde(with = "pair")]
    pub skip_threat: CostPair,
    #[serde(with = "pair")]
    pub skip_clear: CostPair,
}

mod pair {
    use super::CostPair;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(c: &CostPair, s: S) -> Result<S::Ok, S::Error> {
        <[f64; 2]>::from(*c).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<CostPair, D::Error> {
        <[f64; 2]>::deserialize(d).map(CostPair::from)
    }
}

impl Default for CostTable {
    fn default() -> Self {
        Self {
            wear_threat: CostPair::new(1.0, 300.0),
            wear_clear: CostPair::new(0.0, 250.0),
            skip_threat: CostPair::new(100.0, 50.0),
            skip_clear: CostPair::new(0.0, 30.0),
        }
    }
}

impl CostTable {
    #[inline]
    pub fn cost(&self, wear: bool, threat: bool) -> CostPair {
        match (wear, threat) {
            (true, true) => self.wear_threat,
            (true, false) => self.wear_clear,
            (false, true) => self.skip_threat,
            (false, false) => self.skip_clear,
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        let s = |p: CostPair| CostPair::new(p.health * c, p.time * c);
        Self {
            wear_threat: s(self.wear_threat),
            wear_clear: s(self.wear_clear),
            skip_threat: s(self.skip_threat),
            skip_clear: s(self.skip_clear),
        }
    }
}

pub fn realized_cost(table: &CostTable, wear: bool, threat_present: bool) -> CostPair {
    table.cost(wear, threat_present)
}
