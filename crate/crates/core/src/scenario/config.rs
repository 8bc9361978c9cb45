//! Declarative scenario description, dotted-path overrides and validation.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::ccn::{Name, DEFAULT_PIT_LIFETIME_MS};
use crate::link::{LinkModel, SignalProfile};
use crate::strategy::{AppRequirements, StrategyConfig, StrategyKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Role {
    Client,
    Router,
    Repository,
}

fn default_cs_capacity() -> usize {
    100_000
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeConfig {
    pub name: String,
    pub role: Role,
    #[serde(default = "default_cs_capacity")]
    pub cs_capacity: usize,
    #[serde(default)]
    pub strategy: StrategyKind,
    /// May re-broadcast an interest on the broadcast face it arrived on.
    #[serde(default)]
    pub designated_forwarder: bool,
    #[serde(default)]
    pub routes: Vec<RouteConfig>,
    /// Prefixes a repository answers from its own storage.
    #[serde(default)]
    pub serves: Vec<Name>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RouteConfig {
    pub prefix: Name,
    /// Names of the links or media, in preference order.
    pub faces: Vec<String>,
}

/// A point-to-point link between nodes `a` and `b`.
///
/// `up_at_ms`/`down_at_ms` describe when endpoint `a` is attached. A
/// packet is lost if the link is down when it is sent; a packet heading to
/// `a` is also lost if `a` has detached by the time it arrives.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkConfig {
    pub name: String,
    pub a: String,
    pub b: String,
    #[serde(default)]
    pub model: LinkModel,
    #[serde(default)]
    pub signal: SignalProfile,
    #[serde(default)]
    pub up_at_ms: Option<f64>,
    #[serde(default)]
    pub down_at_ms: Option<f64>,
    /// Links naming the same channel share one transmitter (airtime) in both directions.
    #[serde(default)]
    pub channel: Option<String>,
}

/// A broadcast medium shared by its members.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MediumConfig {
    pub name: String,
    pub members: Vec<String>,
    #[serde(default)]
    pub model: LinkModel,
    #[serde(default)]
    pub signal: SignalProfile,
}

fn default_pipeline() -> u32 {
    100
}

fn default_max_retx() -> u32 {
    10
}

fn default_processing_delay() -> f64 {
    0.05
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConsumerConfig {
    pub node: String,
    pub prefix: Name,
    pub total_chunks: u64,
    #[serde(default = "default_pipeline")]
    pub pipeline: u32,
    /// Fixed per-interest timeout; adaptive (twice the smoothed VRTT) when absent.
    #[serde(default)]
    pub interest_timeout_ms: Option<f64>,
    #[serde(default = "default_max_retx")]
    pub max_retx: u32,
    #[serde(default)]
    pub requirements: AppRequirements,
    /// CPU time the client spends on every arriving Data packet.
    #[serde(default = "default_processing_delay")]
    pub processing_delay_ms: f64,
}

/// Content pre-seeded into caches before the run, split disjointly among `holders`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PreloadConfig {
    pub prefix: Name,
    pub total_chunks: u64,
    /// Fraction of the chunks that is seeded; the subset is drawn per replication.
    pub fraction: f64,
    pub holders: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepPoint {
    pub label: String,
    /// Dotted-path overrides applied at this point.
    #[serde(default)]
    pub set: BTreeMap<String, Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// Strategies run on the consumer's node at every point.
    #[serde(default)]
    pub strategies: Vec<StrategyKind>,
    pub points: Vec<SweepPoint>,
}

fn default_pit_lifetime() -> f64 {
    DEFAULT_PIT_LIFETIME_MS
}

fn default_interest_size() -> f64 {
    0.02
}

fn default_payload_size() -> u32 {
    4096
}

fn default_horizon() -> f64 {
    600_000.0
}

fn default_replications() -> u32 {
    30
}

fn default_seed_base() -> u64 {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    pub nodes: Vec<NodeConfig>,
    #[serde(default)]
    pub links: Vec<LinkConfig>,
    #[serde(default)]
    pub media: Vec<MediumConfig>,
    pub consumer: ConsumerConfig,
    #[serde(default)]
    pub strategy_config: StrategyConfig,
    #[serde(default = "default_pit_lifetime")]
    pub pit_lifetime_ms: f64,
    /// Interest size as a fraction of a full Data packet (serialization time).
    #[serde(default = "default_interest_size")]
    pub interest_size: f64,
    #[serde(default = "default_payload_size")]
    pub payload_size: u32,
    #[serde(default = "default_horizon")]
    pub horizon_ms: f64,
    #[serde(default)]
    pub preload: Vec<PreloadConfig>,
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
    #[serde(default = "default_replications")]
    pub replications: u32,
    #[serde(default = "default_seed_base")]
    pub seed_base: u64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{path}: unknown strategy \"{name}\" (valid: default, loadsharing, parallel, bif-local, adaptive)")]
    UnknownStrategy { path: String, name: String },
    #[error("{path}: face \"{face}\" is not a link or medium attached to node \"{node}\"")]
    UnboundFace { path: String, node: String, face: String },
    #[error("consumer.prefix: no repository serves {prefix}")]
    PrefixNotServed { prefix: String },
    #[error("consumer.pipeline: must be at least 1")]
    NonPositivePipeline,
    #[error("{path}: unknown node \"{name}\"")]
    UnknownNode { path: String, name: String },
    #[error("{path}: duplicate name \"{name}\"")]
    DuplicateName { path: String, name: String },
    #[error("{path}: {reason}")]
    InvalidValue { path: String, reason: String },
    #[error("override {key}: {reason}")]
    BadOverride { key: String, reason: String },
    #[error("sweep.points: the grid is empty")]
    EmptySweep,
}

impl ConfigError {
    /// Stable machine-readable code for each error class.
    pub fn code(&self) -> &'static str {
        match self {
            ConfigError::Parse(_) => "parse",
            ConfigError::UnknownStrategy { .. } => "unknown-strategy",
            ConfigError::UnboundFace { .. } => "unbound-face",
            ConfigError::PrefixNotServed { .. } => "prefix-not-served",
            ConfigError::NonPositivePipeline => "non-positive-pipeline",
            ConfigError::UnknownNode { .. } => "unknown-node",
            ConfigError::DuplicateName { .. } => "duplicate-name",
            ConfigError::InvalidValue { .. } => "invalid-value",
            ConfigError::BadOverride { .. } => "bad-override",
            ConfigError::EmptySweep => "empty-sweep",
        }
    }
}

/// All problems found in one config.
#[derive(Debug, Clone, PartialEq, Error)]
pub struct ConfigErrors(pub Vec<ConfigError>);

impl fmt::Display for ConfigErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "[{}] {e}", e.code())?;
        }
        Ok(())
    }
}

impl From<ConfigError> for ConfigErrors {
    fn from(e: ConfigError) -> Self {
        ConfigErrors(vec![e])
    }
}

/// Parses a `key=value` override. The value is read as JSON when possible
/// and as a plain string otherwise.
pub fn parse_override(spec: &str) -> Result<(String, Value), ConfigError> {
    let (key, raw) = spec.split_once('=').ok_or_else(|| ConfigError::BadOverride {
        key: spec.to_string(),
        reason: "expected key=value".into(),
    })?;
    let key = key.trim();
    if key.is_empty() {
        return Err(ConfigError::BadOverride { key: spec.into(), reason: "empty key".into() });
    }
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    Ok((key.to_string(), value))
}

/// Sets `path` (dotted; array steps are an index or an element's `name`) in a JSON tree.
pub fn apply_override(root: &mut Value, path: &str, value: Value) -> Result<(), ConfigError> {
    let bad = |reason: String| ConfigError::BadOverride { key: path.to_string(), reason };
    let steps: Vec<&str> = path.split('.').collect();
    if steps.iter().any(|s| s.is_empty()) {
        return Err(bad("empty path segment".into()));
    }
    let mut cur = root;
    for (i, step) in steps.iter().enumerate() {
        let last = i + 1 == steps.len();
        cur = match cur {
            Value::Object(map) => {
                if last {
                    map.insert(step.to_string(), value);
                    return Ok(());
                }
                map.entry(step.to_string()).or_insert_with(|| Value::Object(Default::default()))
            }
            Value::Array(items) => {
                let idx = match step.parse::<usize>() {
                    Ok(i) if i < items.len() => i,
                    _ => items
                        .iter()
                        .position(|it| it.get("name").and_then(Value::as_str) == Some(step))
                        .ok_or_else(|| bad(format!("no element \"{step}\"")))?,
                };
                if last {
                    items[idx] = value;
                    return Ok(());
                }
                &mut items[idx]
            }
            Value::Null => {
                *cur = Value::Object(Default::default());
                if last {
                    cur.as_object_mut().expect("object").insert(step.to_string(), value);
                    return Ok(());
                }
                cur.as_object_mut()
                    .expect("object")
                    .entry(step.to_string())
                    .or_insert_with(|| Value::Object(Default::default()))
            }
            _ => return Err(bad(format!("\"{step}\" steps into a scalar"))),
        };
    }
    Ok(())
}

fn check_strategy_names(root: &Value) -> Vec<ConfigError> {
    let mut errs = Vec::new();
    let mut check = |path: String, v: &Value| {
        if let Some(s) = v.as_str() {
            if s.parse::<StrategyKind>().is_err() {
                errs.push(ConfigError::UnknownStrategy { path, name: s.to_string() });
            }
        }
    };
    if let Some(nodes) = root.get("nodes").and_then(Value::as_array) {
        for (i, n) in nodes.iter().enumerate() {
            if let Some(v) = n.get("strategy") {
                check(format!("nodes[{i}].strategy"), v);
            }
        }
    }
    if let Some(list) = root.pointer("/sweep/strategies").and_then(Value::as_array) {
        for (i, v) in list.iter().enumerate() {
            check(format!("sweep.strategies[{i}]"), v);
        }
    }
    errs
}

/// Parses config text, applies overrides, and validates the result.
pub fn parse_with_overrides(
    text: &str,
    overrides: &[(String, Value)],
) -> Result<ScenarioConfig, ConfigErrors> {
    let mut root: Value =
        serde_json::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
    for (k, v) in overrides {
        apply_override(&mut root, k, v.clone())?;
    }
    from_value(root)
}

/// Parses and validates config text.
pub fn parse_and_validate(text: &str) -> Result<ScenarioConfig, ConfigErrors> {
    parse_with_overrides(text, &[])
}

fn from_value(root: Value) -> Result<ScenarioConfig, ConfigErrors> {
    let errs = check_strategy_names(&root);
    if !errs.is_empty() {
        return Err(ConfigErrors(errs));
    }
    let cfg: ScenarioConfig =
        serde_json::from_value(root).map_err(|e| ConfigError::Parse(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

/// One fully resolved run configuration of a sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepJob {
    pub point: usize,
    pub label: String,
    pub strategy: StrategyKind,
    pub config: ScenarioConfig,
}

impl ScenarioConfig {
    pub fn node_index(&self, name: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.name == name)
    }

    pub fn consumer_node(&self) -> &NodeConfig {
        &self.nodes[self.node_index(&self.consumer.node).expect("validated consumer node")]
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Returns a copy with the overrides applied, re-validated.
    pub fn with_overrides(&self, overrides: &[(String, Value)]) -> Result<Self, ConfigErrors> {
        let mut root = serde_json::to_value(self).expect("config serializes");
        for (k, v) in overrides {
            apply_override(&mut root, k, v.clone())?;
        }
        from_value(root)
    }

    /// Enumerates the sweep grid in order: points outermost, then strategies.
    /// Without a sweep there is one point, labelled `base`.
    pub fn expand(&self) -> Result<Vec<SweepJob>, ConfigErrors> {
        let mut base = self.clone();
        let sweep = base.sweep.take();
        let consumer_node = base.consumer.node.clone();
        let (points, strategies) = match sweep {
            Some(s) => {
                let strategies = if s.strategies.is_empty() {
                    vec![self.consumer_node().strategy]
                } else {
                    s.strategies
                };
                (s.points, strategies)
            }
            None => (
                vec![SweepPoint { label: "base".into(), set: BTreeMap::new() }],
                vec![self.consumer_node().strategy],
            ),
        };
        if points.is_empty() {
            return Err(ConfigError::EmptySweep.into());
        }
        let mut jobs = Vec::new();
        for (pi, point) in points.iter().enumerate() {
            for &strategy in &strategies {
                let mut sets: Vec<(String, Value)> =
                    point.set.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
                sets.push((
                    format!("nodes.{consumer_node}.strategy"),
                    Value::String(strategy.as_str().into()),
                ));
                let config = base.with_overrides(&sets).map_err(|mut e| {
                    for err in &mut e.0 {
                        if let ConfigError::InvalidValue { path, .. } = err {
                            *path = format!("sweep.points[{pi}] ({}): {path}", point.label);
                        }
                    }
                    e
                })?;
                jobs.push(SweepJob { point: pi, label: point.label.clone(), strategy, config });
            }
        }
        Ok(jobs)
    }

    pub fn validate(&self) -> Result<(), ConfigErrors> {
        let mut errs = Vec::new();
        let invalid = |path: String, reason: String| ConfigError::InvalidValue { path, reason };

        let mut seen = BTreeSet::new();
        for (i, n) in self.nodes.iter().enumerate() {
            if !seen.insert(n.name.as_str()) {
                errs.push(ConfigError::DuplicateName { path: format!("nodes[{i}]"), name: n.name.clone() });
            }
        }
        let mut attach: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
        let mut face_names = BTreeSet::new();
        let node_known = |name: &str| self.node_index(name).is_some();
        for (i, l) in self.links.iter().enumerate() {
            if !face_names.insert(l.name.as_str()) {
                errs.push(ConfigError::DuplicateName { path: format!("links[{i}]"), name: l.name.clone() });
            }
            for (end, who) in [("a", &l.a), ("b", &l.b)] {
                if !node_known(who) {
                    errs.push(ConfigError::UnknownNode { path: format!("links[{i}].{end}"), name: who.clone() });
                }
                attach.entry(who.as_str()).or_default().insert(l.name.as_str());
            }
            if l.a == l.b {
                errs.push(invalid(format!("links[{i}]"), "a link needs two distinct endpoints".into()));
            }
            if let Err(e) = l.model.validate() {
                errs.push(invalid(format!("links[{i}].model"), e.to_string()));
            }
            match (l.up_at_ms, l.down_at_ms) {
                (Some(u), _) if !(u >= 0.0) => errs.push(invalid(format!("links[{i}].up_at_ms"), "must be >= 0".into())),
                (u, Some(d)) if !(d >= u.unwrap_or(0.0)) => {
                    errs.push(invalid(format!("links[{i}].down_at_ms"), "must not precede up_at_ms".into()))
                }
                _ => {}
            }
        }
        for (i, m) in self.media.iter().enumerate() {
            if !face_names.insert(m.name.as_str()) {
                errs.push(ConfigError::DuplicateName { path: format!("media[{i}]"), name: m.name.clone() });
            }
            if m.members.len() < 2 {
                errs.push(invalid(format!("media[{i}].members"), "a medium needs at least two members".into()));
            }
            let mut uniq = BTreeSet::new();
            for (j, who) in m.members.iter().enumerate() {
                if !node_known(who) {
                    errs.push(ConfigError::UnknownNode { path: format!("media[{i}].members[{j}]"), name: who.clone() });
                }
                if !uniq.insert(who.as_str()) {
                    errs.push(ConfigError::DuplicateName { path: format!("media[{i}].members[{j}]"), name: who.clone() });
                }
                attach.entry(who.as_str()).or_default().insert(m.name.as_str());
            }
            if let Err(e) = m.model.validate() {
                errs.push(invalid(format!("media[{i}].model"), e.to_string()));
            }
        }
        for (i, n) in self.nodes.iter().enumerate() {
            let bound = attach.get(n.name.as_str());
            for (r, route) in n.routes.iter().enumerate() {
                let path = format!("nodes[{i}].routes[{r}].faces");
                if route.faces.is_empty() {
                    errs.push(invalid(path.clone(), "a route needs at least one face".into()));
                }
                let mut uniq = BTreeSet::new();
                for (f, face) in route.faces.iter().enumerate() {
                    if !bound.is_some_and(|b| b.contains(face.as_str())) {
                        errs.push(ConfigError::UnboundFace {
                            path: format!("{path}[{f}]"),
                            node: n.name.clone(),
                            face: face.clone(),
                        });
                    }
                    if !uniq.insert(face.as_str()) {
                        errs.push(ConfigError::DuplicateName { path: format!("{path}[{f}]"), name: face.clone() });
                    }
                }
            }
            if n.role == Role::Router && n.designated_forwarder && self.media.is_empty() {
                errs.push(invalid(format!("nodes[{i}].designated_forwarder"), "no broadcast medium exists".into()));
            }
            if !n.serves.is_empty() && n.role != Role::Repository {
                errs.push(invalid(format!("nodes[{i}].serves"), "only repositories serve content".into()));
            }
        }

        let c = &self.consumer;
        match self.node_index(&c.node) {
            None => errs.push(ConfigError::UnknownNode { path: "consumer.node".into(), name: c.node.clone() }),
            Some(i) if self.nodes[i].role != Role::Client => {
                errs.push(invalid("consumer.node".into(), "the consumer must run on a client node".into()))
            }
            _ => {}
        }
        if c.pipeline == 0 {
            errs.push(ConfigError::NonPositivePipeline);
        }
        if c.total_chunks == 0 {
            errs.push(invalid("consumer.total_chunks".into(), "must be at least 1".into()));
        }
        if c.interest_timeout_ms.is_some_and(|t| !(t > 0.0)) {
            errs.push(invalid("consumer.interest_timeout_ms".into(), "must be positive".into()));
        }
        if !(c.processing_delay_ms >= 0.0 && c.processing_delay_ms.is_finite()) {
            errs.push(invalid("consumer.processing_delay_ms".into(), "must be finite and >= 0".into()));
        }
        if let Err(e) = c.requirements.validate() {
            errs.push(invalid("consumer.requirements".into(), e.to_string()));
        }
        let served = self
            .nodes
            .iter()
            .filter(|n| n.role == Role::Repository)
            .any(|n| n.serves.iter().any(|p| p.is_prefix_of(&c.prefix)));
        if !served {
            errs.push(ConfigError::PrefixNotServed { prefix: c.prefix.to_string() });
        }

        if let Err(e) = self.strategy_config.validate() {
            errs.push(invalid("strategy_config".into(), e.to_string()));
        }
        for (path, v, positive) in [
            ("pit_lifetime_ms", self.pit_lifetime_ms, true),
            ("interest_size", self.interest_size, false),
            ("horizon_ms", self.horizon_ms, true),
        ] {
            let ok = v.is_finite() && if positive { v > 0.0 } else { v >= 0.0 };
            if !ok {
                errs.push(invalid(path.into(), "out of range".into()));
            }
        }
        for (i, p) in self.preload.iter().enumerate() {
            if !(0.0..=1.0).contains(&p.fraction) {
                errs.push(invalid(format!("preload[{i}].fraction"), "must lie in [0, 1]".into()));
            }
            if p.holders.is_empty() {
                errs.push(invalid(format!("preload[{i}].holders"), "needs at least one holder".into()));
            }
            for (j, h) in p.holders.iter().enumerate() {
                match self.node_index(h) {
                    None => errs.push(ConfigError::UnknownNode { path: format!("preload[{i}].holders[{j}]"), name: h.clone() }),
                    Some(k) if self.nodes[k].cs_capacity == 0 => errs.push(invalid(
                        format!("preload[{i}].holders[{j}]"),
                        "holder has no content store".into(),
                    )),
                    _ => {}
                }
            }
        }
        if self.replications == 0 {
            errs.push(invalid("replications".into(), "must be at least 1".into()));
        }
        if let Some(s) = &self.sweep {
            if s.points.is_empty() {
                errs.push(ConfigError::EmptySweep);
            }
        }

        if !errs.is_empty() {
            return Err(ConfigErrors(errs));
        }
        if self.sweep.is_some() {
            self.expand()?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn minimal() -> Value {
        json!({
            "name": "t",
            "nodes": [
                {"name": "c", "role": "client", "routes": [{"prefix": "/v", "faces": ["l"]}]},
                {"name": "r", "role": "repository", "serves": ["/v"]}
            ],
            "links": [{"name": "l", "a": "c", "b": "r"}],
            "consumer": {"node": "c", "prefix": "/v/f", "total_chunks": 10}
        })
    }

    fn codes(r: Result<ScenarioConfig, ConfigErrors>) -> Vec<&'static str> {
        r.unwrap_err().0.iter().map(ConfigError::code).collect()
    }

    #[test]
    fn minimal_config_validates_with_defaults() {
        let cfg = parse_and_validate(&minimal().to_string()).unwrap();
        assert_eq!(cfg.consumer.pipeline, 100);
        assert_eq!(cfg.replications, 30);
        assert_eq!(cfg.pit_lifetime_ms, 4000.0);
        assert_eq!(cfg.consumer.max_retx, 10);
    }

    #[test]
    fn misspelled_strategy_names_valid_options() {
        let mut v = minimal();
        v["nodes"][0]["strategy"] = json!("paralell");
        let e = parse_and_validate(&v.to_string()).unwrap_err();
        assert_eq!(e.0[0].code(), "unknown-strategy");
        let msg = e.to_string();
        assert!(msg.contains("unknown strategy") && msg.contains("parallel") && msg.contains("nodes[0].strategy"));
    }

    #[test]
    fn distinct_codes_for_wiring_errors() {
        let mut v = minimal();
        v["nodes"][0]["routes"][0]["faces"] = json!(["nope"]);
        assert_eq!(codes(parse_and_validate(&v.to_string())), vec!["unbound-face"]);

        let mut v = minimal();
        v["consumer"]["prefix"] = json!("/other");
        assert_eq!(codes(parse_and_validate(&v.to_string())), vec!["prefix-not-served"]);

        let mut v = minimal();
        v["consumer"]["pipeline"] = json!(0);
        assert_eq!(codes(parse_and_validate(&v.to_string())), vec!["non-positive-pipeline"]);

        assert_eq!(codes(parse_and_validate("{")), vec!["parse"]);
    }

    #[test]
    fn overrides_reach_the_config() {
        let text = minimal().to_string();
        let ov = vec![
            parse_override("consumer.pipeline=1").unwrap(),
            parse_override("links.l.model.retry_limit=3").unwrap(),
            parse_override("nodes.c.strategy=parallel").unwrap(),
            parse_override("consumer.interest_timeout_ms=250").unwrap(),
        ];
        let cfg = parse_with_overrides(&text, &ov).unwrap();
        assert_eq!(cfg.consumer.pipeline, 1);
        assert_eq!(cfg.links[0].model.retry_limit, 3);
        assert_eq!(cfg.nodes[0].strategy, StrategyKind::Parallel);
        assert_eq!(cfg.consumer.interest_timeout_ms, Some(250.0));
        let echoed = parse_and_validate(&cfg.to_json_pretty()).unwrap();
        assert_eq!(echoed, cfg);
    }

    #[test]
    fn override_errors() {
        assert!(parse_override("novalue").is_err());
        let text = minimal().to_string();
        let ov = vec![("links.missing.model".to_string(), json!(1))];
        assert_eq!(codes(parse_with_overrides(&text, &ov)), vec!["bad-override"]);
        let ov = vec![("name.x".to_string(), json!(1))];
        assert_eq!(codes(parse_with_overrides(&text, &ov)), vec!["bad-override"]);
    }

    #[test]
    fn sweep_expands_points_then_strategies() {
        let mut v = minimal();
        v["sweep"] = json!({
            "strategies": ["default", "parallel"],
            "points": [
                {"label": "r0", "set": {"links.l.model.retry_limit": 0}},
                {"label": "r5", "set": {"links.l.model.retry_limit": 5}}
            ]
        });
        let cfg = parse_and_validate(&v.to_string()).unwrap();
        let jobs = cfg.expand().unwrap();
        let seen: Vec<_> = jobs.iter().map(|j| (j.label.as_str(), j.strategy.as_str())).collect();
        assert_eq!(seen, vec![("r0", "default"), ("r0", "parallel"), ("r5", "default"), ("r5", "parallel")]);
        assert_eq!(jobs[3].config.links[0].model.retry_limit, 5);
        assert_eq!(jobs[1].config.nodes[0].strategy, StrategyKind::Parallel);
        assert!(jobs.iter().all(|j| j.config.sweep.is_none()));
    }

    #[test]
    fn empty_sweep_is_rejected() {
        let mut v = minimal();
        v["sweep"] = json!({"points": []});
        assert_eq!(codes(parse_and_validate(&v.to_string())), vec!["empty-sweep"]);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let mut v = minimal();
        v["consumer"]["pipelin"] = json!(3);
        assert_eq!(codes(parse_and_validate(&v.to_string())), vec!["parse"]);
    }
}
