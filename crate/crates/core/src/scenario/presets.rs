//! Built-in scenarios. Every builder returns a validated config.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use super::config::{
    ConfigError, ConfigErrors, ConsumerConfig, LinkConfig, MediumConfig, NodeConfig,
    PreloadConfig, Role, RouteConfig, ScenarioConfig, SweepConfig, SweepPoint,
};
use crate::ccn::Name;
use crate::link::{LinkModel, LossModel, SignalProfile};
use crate::strategy::{StrategyConfig, StrategyKind};

/// Names accepted by [`get`].
pub const NAMES: &[&str] = &[
    "mobile_client",
    "mobile_ap",
    "retry_sweep",
    "handover",
    "p2p_local",
    "rte_equilibrium",
    "vrtt_min",
];

pub fn names() -> &'static [&'static str] {
    NAMES
}

/// A preset with its default parameters.
pub fn get(name: &str) -> Option<ScenarioConfig> {
    let cfg = match name {
        "mobile_client" => build_mobile_client(&MobileClientParams::default()),
        "mobile_ap" => build_mobile_client(&MobileClientParams { move_ap: true, ..Default::default() }),
        "retry_sweep" => build_retry_sweep(&RetrySweepParams::default()),
        "handover" => build_handover(&HandoverParams::default()),
        "p2p_local" => build_p2p_local(&P2pParams::default()),
        "rte_equilibrium" => build_rte_equilibrium(50_000),
        "vrtt_min" => build_vrtt_min(),
        _ => return None,
    };
    Some(cfg.expect("presets are valid"))
}

fn prefix() -> Name {
    "/video".parse().expect("static name")
}

fn node(name: &str, role: Role) -> NodeConfig {
    NodeConfig {
        name: name.into(),
        role,
        cs_capacity: 100_000,
        strategy: StrategyKind::Default,
        designated_forwarder: false,
        routes: Vec::new(),
        serves: Vec::new(),
    }
}

fn router(name: &str, faces: &[&str]) -> NodeConfig {
    NodeConfig {
        routes: vec![RouteConfig { prefix: prefix(), faces: faces.iter().map(|f| f.to_string()).collect() }],
        ..node(name, Role::Router)
    }
}

fn client(name: &str, faces: &[&str], strategy: StrategyKind) -> NodeConfig {
    NodeConfig { role: Role::Client, strategy, ..router(name, faces) }
}

fn repository(name: &str) -> NodeConfig {
    NodeConfig { serves: vec![prefix()], ..node(name, Role::Repository) }
}

fn link(name: &str, a: &str, b: &str, model: LinkModel) -> LinkConfig {
    LinkConfig {
        name: name.into(),
        a: a.into(),
        b: b.into(),
        model,
        signal: SignalProfile::default(),
        up_at_ms: None,
        down_at_ms: None,
        channel: None,
    }
}

fn consumer(node: &str, total_chunks: u64, pipeline: u32) -> ConsumerConfig {
    ConsumerConfig {
        node: node.into(),
        prefix: prefix(),
        total_chunks,
        pipeline,
        interest_timeout_ms: None,
        max_retx: 10,
        requirements: Default::default(),
        processing_delay_ms: 0.05,
    }
}

fn scenario(name: &str, nodes: Vec<NodeConfig>, links: Vec<LinkConfig>, consumer: ConsumerConfig) -> ScenarioConfig {
    ScenarioConfig {
        name: name.into(),
        nodes,
        links,
        media: Vec::new(),
        consumer,
        strategy_config: StrategyConfig::default(),
        pit_lifetime_ms: 4000.0,
        interest_size: 0.02,
        payload_size: 4096,
        horizon_ms: 600_000.0,
        preload: Vec::new(),
        sweep: None,
        replications: 30,
        seed_base: 1,
    }
}

fn signal_value(q: f64) -> Value {
    json!([[0.0, q]])
}

fn point(label: String, set: impl IntoIterator<Item = (String, Value)>) -> SweepPoint {
    SweepPoint { label, set: set.into_iter().collect::<BTreeMap<_, _>>() }
}

fn finish(cfg: ScenarioConfig) -> Result<ScenarioConfig, ConfigErrors> {
    cfg.validate()?;
    Ok(cfg)
}

fn empty_grid(what: &str) -> ConfigErrors {
    ConfigError::InvalidValue { path: what.into(), reason: "the grid is empty".into() }.into()
}

/// WiFi access hop of the mobile scenarios.
fn wireless(bandwidth: f64) -> LinkModel {
    LinkModel {
        base_delay_ms: 2.0,
        jitter_ms: 0.5,
        bandwidth,
        loss: LossModel::Signal { p_max: 0.9, gamma: 2.0 },
        retry_limit: 7,
        per_retry_delay_ms: 0.5,
        cost_per_packet: 1.0,
        q_floor: 0.1,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MobileClientParams {
    /// Signal quality of the two wireless faces at each position.
    pub positions: Vec<(f64, f64)>,
    pub total_chunks: u64,
    pub pipeline: u32,
    /// Move one access point instead of the client: only face 1 degrades.
    pub move_ap: bool,
    pub strategies: Vec<StrategyKind>,
}

impl Default for MobileClientParams {
    fn default() -> Self {
        let n = 8;
        let positions = (0..n)
            .map(|i| {
                let q = 1.0 - 0.8 * i as f64 / (n - 1) as f64;
                (q, q)
            })
            .collect();
        MobileClientParams {
            positions,
            total_chunks: 20_000,
            pipeline: 100,
            move_ap: false,
            strategies: vec![StrategyKind::Default, StrategyKind::LoadSharing, StrategyKind::Parallel],
        }
    }
}

/// Client on two access points (R1, R2) joined at R3 in front of the repository.
pub fn build_mobile_client(p: &MobileClientParams) -> Result<ScenarioConfig, ConfigErrors> {
    if p.positions.is_empty() {
        return Err(empty_grid("positions"));
    }
    let nodes = vec![
        client("Client", &["wifi1", "wifi2"], StrategyKind::Default),
        router("R1", &["core1"]),
        router("R2", &["core2"]),
        router("R3", &["backbone"]),
        repository("Repo"),
    ];
    let links = vec![
        link("wifi1", "Client", "R1", wireless(15.0)),
        link("wifi2", "Client", "R2", wireless(15.0)),
        link("core1", "R1", "R3", LinkModel::wired(0.5)),
        link("core2", "R2", "R3", LinkModel::wired(0.5)),
        link("backbone", "R3", "Repo", LinkModel::wired(0.05)),
    ];
    let mut cfg = scenario(
        if p.move_ap { "mobile_ap" } else { "mobile_client" },
        nodes,
        links,
        consumer("Client", p.total_chunks, p.pipeline),
    );
    // A fixed timeout keeps queueing spikes at poor signal from triggering
    // spurious consumer retransmissions.
    cfg.consumer.interest_timeout_ms = Some(500.0);
    let points = p
        .positions
        .iter()
        .enumerate()
        .map(|(i, &(q1, q2))| {
            let q2 = if p.move_ap { 1.0 } else { q2 };
            point(
                format!("pos{i}"),
                [
                    ("links.wifi1.signal".to_string(), signal_value(q1)),
                    ("links.wifi2.signal".to_string(), signal_value(q2)),
                ],
            )
        })
        .collect();
    cfg.sweep = Some(SweepConfig { strategies: p.strategies.clone(), points });
    finish(cfg)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RetrySweepParams {
    pub retry_limits: Vec<u32>,
    /// Per-attempt frame loss on the fast face.
    pub fast_frame_loss: f64,
    /// Per-attempt frame loss on the slow face.
    pub slow_frame_loss: f64,
    pub total_chunks: u64,
    pub replications: u32,
}

impl Default for RetrySweepParams {
    fn default() -> Self {
        RetrySweepParams {
            retry_limits: (0..=12).collect(),
            fast_frame_loss: 0.3,
            slow_frame_loss: 0.4,
            total_chunks: 2000,
            replications: 20,
        }
    }
}

/// Two wireless faces sharing one radio channel: a fast card and a card
/// with half its rate, a weaker radio and a longer path to the core. The
/// retry limit is swept on both.
pub fn build_retry_sweep(p: &RetrySweepParams) -> Result<ScenarioConfig, ConfigErrors> {
    if p.retry_limits.is_empty() {
        return Err(empty_grid("retry_limits"));
    }
    let radio = |bandwidth: f64, loss: f64| LinkModel {
        loss: LossModel::Constant { p: loss },
        ..wireless(bandwidth)
    };
    let nodes = vec![
        client("Client", &["fast", "slow"], StrategyKind::Default),
        router("R1", &["core1"]),
        router("R2", &["core2"]),
        router("R3", &["backbone"]),
        repository("Repo"),
    ];
    let mut links = vec![
        link("fast", "Client", "R1", radio(20.0, p.fast_frame_loss)),
        link("slow", "Client", "R2", radio(10.0, p.slow_frame_loss)),
        link("core1", "R1", "R3", LinkModel::wired(0.5)),
        link("core2", "R2", "R3", LinkModel::wired(5.0)),
        link("backbone", "R3", "Repo", LinkModel::wired(1.0)),
    ];
    for l in &mut links[..2] {
        l.channel = Some("air".into());
    }
    let mut c = consumer("Client", p.total_chunks, 25);
    c.max_retx = 50;
    let mut cfg = scenario("retry_sweep", nodes, links, c);
    cfg.replications = p.replications;
    let points = p
        .retry_limits
        .iter()
        .map(|&r| {
            point(
                format!("R{r}"),
                [
                    ("links.fast.model.retry_limit".to_string(), json!(r)),
                    ("links.slow.model.retry_limit".to_string(), json!(r)),
                ],
            )
        })
        .collect();
    cfg.sweep = Some(SweepConfig {
        strategies: vec![StrategyKind::Default, StrategyKind::LoadSharing, StrategyKind::Parallel],
        points,
    });
    finish(cfg)
}

#[derive(Debug, Clone, PartialEq)]
pub struct HandoverParams {
    pub handover_ms: f64,
    pub total_chunks: u64,
    pub pipeline: u32,
    /// Content Store capacity of the shared core router R3 (0 disables it).
    pub r3_cs_capacity: usize,
}

impl Default for HandoverParams {
    fn default() -> Self {
        HandoverParams { handover_ms: 500.0, total_chunks: 5000, pipeline: 100, r3_cs_capacity: 100_000 }
    }
}

/// Client leaves access router AR1 for AR2 at the handover time; both hang
/// off core router R3, which is far closer than the repository.
pub fn build_handover(p: &HandoverParams) -> Result<ScenarioConfig, ConfigErrors> {
    let mut r3 = router("R3", &["backbone"]);
    r3.cs_capacity = p.r3_cs_capacity;
    let nodes = vec![
        client("Client", &["w1", "w2"], StrategyKind::Default),
        router("AR1", &["up1"]),
        router("AR2", &["up2"]),
        r3,
        repository("Repo"),
    ];
    let access = LinkModel {
        loss: LossModel::Constant { p: 0.0 },
        base_delay_ms: 1.0,
        jitter_ms: 0.0,
        ..wireless(50.0)
    };
    let mut w1 = link("w1", "Client", "AR1", access.clone());
    w1.down_at_ms = Some(p.handover_ms);
    let mut w2 = link("w2", "Client", "AR2", access);
    w2.up_at_ms = Some(p.handover_ms);
    let links = vec![
        w1,
        w2,
        link("up1", "AR1", "R3", LinkModel::wired(1.0)),
        link("up2", "AR2", "R3", LinkModel::wired(1.0)),
        link("backbone", "R3", "Repo", LinkModel::wired(20.0)),
    ];
    let mut cfg = scenario("handover", nodes, links, consumer("Client", p.total_chunks, p.pipeline));
    cfg.replications = 5;
    finish(cfg)
}

#[derive(Debug, Clone, PartialEq)]
pub struct P2pParams {
    pub peers: usize,
    /// Fractions of the content pre-seeded at the peers, one sweep point each.
    pub fractions: Vec<f64>,
    pub total_chunks: u64,
    pub local_wait_ms: f64,
}

impl Default for P2pParams {
    fn default() -> Self {
        P2pParams { peers: 3, fractions: vec![0.0, 0.5, 1.0], total_chunks: 2000, local_wait_ms: 20.0 }
    }
}

/// Peers on a shared broadcast medium seeded with disjoint chunk subsets; a
/// costlier upstream router backs them up.
pub fn build_p2p_local(p: &P2pParams) -> Result<ScenarioConfig, ConfigErrors> {
    if p.fractions.is_empty() {
        return Err(empty_grid("fractions"));
    }
    let peers: Vec<String> = (1..=p.peers).map(|i| format!("P{i}")).collect();
    let mut nodes = vec![client("Client", &["lan", "up"], StrategyKind::BifLocal), router("R1", &["backbone"]), repository("Repo")];
    nodes.extend(peers.iter().map(|n| node(n, Role::Client)));
    let mut up = LinkModel::wired(4.0);
    up.cost_per_packet = 3.0;
    let links = vec![link("up", "Client", "R1", up), link("backbone", "R1", "Repo", LinkModel::wired(1.0))];
    let mut cfg = scenario("p2p_local", nodes, links, consumer("Client", p.total_chunks, 20));
    cfg.media = vec![MediumConfig {
        name: "lan".into(),
        members: std::iter::once("Client".to_string()).chain(peers.iter().cloned()).collect(),
        model: LinkModel {
            base_delay_ms: 0.5,
            bandwidth: 100.0,
            loss: LossModel::Constant { p: 0.0 },
            cost_per_packet: 0.5,
            ..LinkModel::default()
        },
        signal: SignalProfile::default(),
    }];
    cfg.strategy_config.local_wait_ms = Some(p.local_wait_ms);
    cfg.preload = vec![PreloadConfig { prefix: prefix(), total_chunks: p.total_chunks, fraction: 0.0, holders: peers }];
    cfg.replications = 10;
    let points = p
        .fractions
        .iter()
        .map(|&f| point(format!("local{:.0}", f * 100.0), [("preload.0.fraction".to_string(), json!(f))]))
        .collect();
    cfg.sweep = Some(SweepConfig { strategies: vec![StrategyKind::BifLocal], points });
    finish(cfg)
}

/// One stable lossless face under the default strategy.
pub fn build_rte_equilibrium(total_chunks: u64) -> Result<ScenarioConfig, ConfigErrors> {
    let nodes = vec![client("Client", &["wire"], StrategyKind::Default), repository("Repo")];
    let model = LinkModel { jitter_ms: 0.5, ..LinkModel::wired(2.0) };
    let mut c = consumer("Client", total_chunks, 4);
    c.processing_delay_ms = 0.0;
    let mut cfg = scenario("rte_equilibrium", nodes, vec![link("wire", "Client", "Repo", model)], c);
    cfg.replications = 1;
    finish(cfg)
}

/// Two lossless direct faces with round trips of 30 ms and 50 ms, used in parallel.
pub fn build_vrtt_min() -> Result<ScenarioConfig, ConfigErrors> {
    let nodes = vec![client("Client", &["near", "far"], StrategyKind::Parallel), repository("Repo")];
    let wire = |d: f64| LinkModel { jitter_ms: 1.0, ..LinkModel::wired(d) };
    let links = vec![link("near", "Client", "Repo", wire(15.0)), link("far", "Client", "Repo", wire(25.0))];
    let mut c = consumer("Client", 2000, 10);
    c.processing_delay_ms = 0.0;
    let mut cfg = scenario("vrtt_min", nodes, links, c);
    cfg.replications = 3;
    finish(cfg)
}
