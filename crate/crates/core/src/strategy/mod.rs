//! The strategy layer: per-interest choice of outgoing faces.
//!
//! Every selector is a pure function of a snapshot of [`FaceStats`] for the
//! eligible faces (plus, for the adaptive strategy, a small piece of
//! explicit state). Ties are always broken toward the lowest [`FaceId`].

mod adaptive;
mod select;
mod stats;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ccn::FaceId;

pub use adaptive::{adaptive_select, AdaptiveState};
pub use select::{bif_local_first_select, default_select, loadsharing_select, parallel_select};
pub use stats::{rte_on_data, rte_on_timeout, DataSample, FaceStats};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StrategyKind {
    #[default]
    Default,
    LoadSharing,
    Parallel,
    BifLocal,
    Adaptive,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 5] = [
        StrategyKind::Default,
        StrategyKind::LoadSharing,
        StrategyKind::Parallel,
        StrategyKind::BifLocal,
        StrategyKind::Adaptive,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            StrategyKind::Default => "default",
            StrategyKind::LoadSharing => "loadsharing",
            StrategyKind::Parallel => "parallel",
            StrategyKind::BifLocal => "bif-local",
            StrategyKind::Adaptive => "adaptive",
        }
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown strategy \"{0}\" (valid: default, loadsharing, parallel, bif-local, adaptive)")]
pub struct UnknownStrategy(pub String);

impl FromStr for StrategyKind {
    type Err = UnknownStrategy;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        StrategyKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| UnknownStrategy(s.to_string()))
    }
}

impl Serialize for StrategyKind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for StrategyKind {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rationale {
    BestFace,
    LoadShare,
    Flood,
    LocalFirst,
    CostConstrained,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScheduledSend {
    pub face: FaceId,
    /// Offset from the decision instant, ms. Zero means "now".
    pub delay_ms: f64,
}

/// Output of a selector: which faces get the interest, and when.
#[derive(Clone, Debug, PartialEq)]
pub struct StrategyDecision {
    pub sends: Vec<ScheduledSend>,
    pub rationale: Rationale,
}

impl StrategyDecision {
    pub fn single(face: FaceId, rationale: Rationale) -> Self {
        StrategyDecision { sends: vec![ScheduledSend { face, delay_ms: 0.0 }], rationale }
    }

    pub fn faces(&self) -> Vec<FaceId> {
        self.sends.iter().map(|s| s.face).collect()
    }

    /// Checks the structural invariants: non-empty, offsets >= 0, no duplicate face.
    pub fn is_well_formed(&self) -> bool {
        !self.sends.is_empty()
            && self.sends.iter().all(|s| s.delay_ms >= 0.0 && s.delay_ms.is_finite())
            && self
                .sends
                .iter()
                .enumerate()
                .all(|(i, s)| self.sends[..i].iter().all(|o| o.face != s.face))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preference {
    Throughput,
    Delay,
    Loss,
}

/// Per-application goals handed to the adaptive strategy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AppRequirements {
    #[serde(default)]
    pub max_cost: Option<f64>,
    pub preference: Preference,
    #[serde(default)]
    pub delay_target_ms: Option<f64>,
}

impl Default for AppRequirements {
    fn default() -> Self {
        AppRequirements { max_cost: None, preference: Preference::Throughput, delay_target_ms: None }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RequirementsError {
    #[error("delay preference requires delay_target_ms")]
    MissingDelayTarget,
    #[error("max_cost must be non-negative, got {0}")]
    NegativeCost(f64),
    #[error("delay_target_ms must be positive, got {0}")]
    NonPositiveTarget(f64),
}

impl AppRequirements {
    pub fn validate(&self) -> Result<(), RequirementsError> {
        if let Some(c) = self.max_cost {
            if !(c >= 0.0) {
                return Err(RequirementsError::NegativeCost(c));
            }
        }
        match (self.preference, self.delay_target_ms) {
            (Preference::Delay, None) => Err(RequirementsError::MissingDelayTarget),
            (_, Some(t)) if !(t > 0.0) => Err(RequirementsError::NonPositiveTarget(t)),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AdaptiveConfig {
    /// Sliding window over which returning Data are counted as throughput.
    pub throughput_window_ms: f64,
    /// Consecutive constraint violations before flooding starts.
    pub flood_trigger: u32,
    /// How long the constraint must hold again before flooding stops.
    pub calm_down_ms: f64,
}

impl Default for AdaptiveConfig {
    fn default() -> Self {
        AdaptiveConfig { throughput_window_ms: 1000.0, flood_trigger: 3, calm_down_ms: 2000.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StrategyConfig {
    pub rte_decrease_factor: f64,
    pub rte_increase_factor: f64,
    pub rte_initial_ms: f64,
    pub rte_min_ms: f64,
    pub rte_max_ms: f64,
    /// Upper bound of the uniform stagger between the default strategy's re-sends.
    pub stagger_jitter_max_ms: f64,
    /// EWMA weight of a new delay sample.
    pub delay_ewma_alpha: f64,
    /// Fixed local wait for bif-local; `None` means twice the local face's RTE.
    pub local_wait_ms: Option<f64>,
    pub adaptive: AdaptiveConfig,
}

impl Default for StrategyConfig {
    fn default() -> Self {
        StrategyConfig {
            rte_decrease_factor: 1.0 / 128.0,
            rte_increase_factor: 1.0 / 8.0,
            rte_initial_ms: 1000.0,
            rte_min_ms: 1.0,
            rte_max_ms: 60_000.0,
            stagger_jitter_max_ms: 20.0,
            delay_ewma_alpha: 1.0 / 8.0,
            local_wait_ms: None,
            adaptive: AdaptiveConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StrategyConfigError {
    #[error("need 0 < rte_decrease_factor < rte_increase_factor < 1 (got {dec} and {inc})")]
    Factors { dec: f64, inc: f64 },
    #[error("need 0 < rte_min_ms <= rte_initial_ms <= rte_max_ms")]
    RteBounds,
    #[error("{0} must be non-negative and finite")]
    Negative(&'static str),
    #[error("delay_ewma_alpha must lie in (0, 1]")]
    Alpha,
    #[error("adaptive.flood_trigger must be at least 1")]
    FloodTrigger,
}

impl StrategyConfig {
    pub fn validate(&self) -> Result<(), StrategyConfigError> {
        let (dec, inc) = (self.rte_decrease_factor, self.rte_increase_factor);
        if !(0.0 < dec && dec < inc && inc < 1.0) {
            return Err(StrategyConfigError::Factors { dec, inc });
        }
        if !(0.0 < self.rte_min_ms
            && self.rte_min_ms <= self.rte_initial_ms
            && self.rte_initial_ms <= self.rte_max_ms)
        {
            return Err(StrategyConfigError::RteBounds);
        }
        let non_neg = |v: f64| v >= 0.0 && v.is_finite();
        if !non_neg(self.stagger_jitter_max_ms) {
            return Err(StrategyConfigError::Negative("stagger_jitter_max_ms"));
        }
        if self.local_wait_ms.is_some_and(|w| !non_neg(w)) {
            return Err(StrategyConfigError::Negative("local_wait_ms"));
        }
        if !non_neg(self.adaptive.throughput_window_ms) {
            return Err(StrategyConfigError::Negative("adaptive.throughput_window_ms"));
        }
        if !non_neg(self.adaptive.calm_down_ms) {
            return Err(StrategyConfigError::Negative("adaptive.calm_down_ms"));
        }
        if !(self.delay_ewma_alpha > 0.0 && self.delay_ewma_alpha <= 1.0) {
            return Err(StrategyConfigError::Alpha);
        }
        if self.adaptive.flood_trigger == 0 {
            return Err(StrategyConfigError::FloodTrigger);
        }
        Ok(())
    }
}
