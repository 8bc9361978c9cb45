//! Discrete-event core: event queue, node forwarding pipeline, links and
//! the pipelined consumer application.
//!
//! Events are ordered by `(time, sequence number)`, timestamps are integer
//! microseconds, and every random draw comes from a per-node, per-link or
//! per-medium ChaCha stream derived from the run seed. Equal config and
//! seed therefore give an identical event sequence.

mod consumer;
mod metrics;
mod trace;

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use metrics::{percentile, ChunkRecord, MetricsReport, NodeMetrics};
pub use trace::TraceMode;

use crate::ccn::{
    ContentStore, Data, Face, FaceId, FaceKind, Fib, FibEntry, Interest, InterestDisposition,
    Name, NodeId, Packet, Pit,
};
use crate::link::{broadcast_deliver, transmit_sized, LinkModel, SignalProfile};
use crate::scenario::{ConfigErrors, Role, ScenarioConfig};
use crate::strategy::{
    adaptive_select, bif_local_first_select, default_select, loadsharing_select, parallel_select,
    AdaptiveState, AppRequirements, DataSample, FaceStats, StrategyConfig, StrategyDecision,
    StrategyKind,
};
use crate::time::{SimDuration, SimTime};
use consumer::Consumer;
use trace::Trace;

/// Face 0 of every node is its local application face.
pub const APP_FACE: FaceId = FaceId(0);

const LINK_STREAM: u64 = 1 << 20;
const MEDIUM_STREAM: u64 = 2 << 20;
const PRELOAD_STREAM: u64 = 3 << 20;

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

#[derive(Debug)]
enum EventKind {
    Arrival { node: usize, face: FaceId, packet: Packet },
    /// The client finished its per-packet processing of a Data.
    Processed { node: usize, face: FaceId, data: Data },
    RteTimer { node: usize, name: Name, entry: u64, face: FaceId, sent_at: SimTime },
    Staggered { node: usize, entry: u64, face: FaceId, interest: Interest },
    ConsumerTimer { chunk: u64, attempt: u32 },
    ConsumerTick,
}

#[derive(Debug)]
struct Event {
    at: SimTime,
    seq: u64,
    kind: EventKind,
}

impl PartialEq for Event {
    fn eq(&self, other: &Self) -> bool {
        (self.at, self.seq) == (other.at, other.seq)
    }
}

impl Eq for Event {}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Event {
    // Reversed: BinaryHeap is a max-heap and the earliest event must pop first.
    fn cmp(&self, other: &Self) -> Ordering {
        (other.at, other.seq).cmp(&(self.at, self.seq))
    }
}

#[derive(Debug, Clone, Copy)]
enum Attach {
    App,
    Link { link: usize, side: usize },
    Medium { medium: usize, member: usize },
}

struct NodeRt {
    name: String,
    strategy: StrategyKind,
    designated_forwarder: bool,
    cs: ContentStore,
    pit: Pit,
    fib: Fib,
    serves: Vec<Name>,
    faces: Vec<(Face, Attach)>,
    stats: Vec<FaceStats>,
    adaptive: AdaptiveState,
    rng: ChaCha8Rng,
    m: NodeMetrics,
    processing: SimDuration,
    cpu_free_at: SimTime,
}

struct LinkRt {
    model: LinkModel,
    signal: SignalProfile,
    ends: [(usize, FaceId); 2],
    resource: [usize; 2],
    up_at: SimTime,
    down_at: Option<SimTime>,
    rng: ChaCha8Rng,
}

impl LinkRt {
    fn up(&self, t: SimTime) -> bool {
        t >= self.up_at && self.down_at.map_or(true, |d| t < d)
    }
}

struct MediumRt {
    model: LinkModel,
    signal: SignalProfile,
    members: Vec<(usize, FaceId)>,
    resource: usize,
    rng: ChaCha8Rng,
}

/// One simulation instance. Build with [`Simulation::new`], consume with [`Simulation::run`].
pub struct Simulation {
    now: SimTime,
    seq: u64,
    queue: BinaryHeap<Event>,
    nodes: Vec<NodeRt>,
    links: Vec<LinkRt>,
    media: Vec<MediumRt>,
    /// Per transmitter (link direction, shared channel or medium): when it is next free.
    busy_until: Vec<SimTime>,
    consumer: Consumer,
    strategy_cfg: StrategyConfig,
    reqs: AppRequirements,
    interest_size: f64,
    payload_size: u32,
    horizon: SimTime,
    trace: Trace,
    events: u64,
}

macro_rules! trace {
    ($sim:expr, $node:expr, $kind:expr, $($arg:tt)*) => {
        if $sim.trace.enabled() {
            $sim.trace.record($sim.now.as_us(), &$sim.nodes[$node].name, $kind, format_args!($($arg)*));
        }
    };
}

impl Simulation {
    pub fn new(cfg: &ScenarioConfig, seed: u64, mode: TraceMode) -> Result<Self, ConfigErrors> {
        cfg.validate()?;
        let strategy_cfg = cfg.strategy_config.clone();
        let pit_lifetime = SimDuration::from_ms(cfg.pit_lifetime_ms);
        let consumer_node = cfg.node_index(&cfg.consumer.node).expect("validated");

        let mut nodes: Vec<NodeRt> = cfg
            .nodes
            .iter()
            .enumerate()
            .map(|(i, n)| NodeRt {
                name: n.name.clone(),
                strategy: n.strategy,
                designated_forwarder: n.designated_forwarder,
                cs: ContentStore::new(n.cs_capacity),
                pit: Pit::new(pit_lifetime),
                fib: Fib::new(),
                serves: if n.role == Role::Repository { n.serves.clone() } else { Vec::new() },
                faces: vec![(Face::new(APP_FACE, "app", 0.0, FaceKind::Local), Attach::App)],
                stats: vec![FaceStats::new(APP_FACE, 0.0, &strategy_cfg)],
                adaptive: AdaptiveState::default(),
                rng: stream(seed, i as u64),
                m: NodeMetrics { name: n.name.clone(), ..Default::default() },
                processing: if i == consumer_node {
                    SimDuration::from_ms(cfg.consumer.processing_delay_ms)
                } else {
                    SimDuration::ZERO
                },
                cpu_free_at: SimTime::ZERO,
            })
            .collect();

        let mut add_face = |node: usize, label: &str, cost: f64, kind: FaceKind, attach: Attach| {
            let n = &mut nodes[node];
            let id = FaceId(u16::try_from(n.faces.len()).expect("fewer than 65536 faces per node"));
            n.faces.push((Face::new(id, label, cost, kind), attach));
            n.stats.push(FaceStats::new(id, cost, &strategy_cfg));
            id
        };

        let mut busy_until = Vec::new();
        let mut channels: Vec<(String, usize)> = Vec::new();
        let mut links = Vec::new();
        for (j, l) in cfg.links.iter().enumerate() {
            let a = cfg.node_index(&l.a).expect("validated");
            let b = cfg.node_index(&l.b).expect("validated");
            let cost = l.model.cost_per_packet;
            let fa = add_face(a, &l.name, cost, FaceKind::PointToPoint, Attach::Link { link: j, side: 0 });
            let fb = add_face(b, &l.name, cost, FaceKind::PointToPoint, Attach::Link { link: j, side: 1 });
            let resource = match &l.channel {
                Some(ch) => {
                    let r = match channels.iter().find(|(name, _)| name == ch) {
                        Some(&(_, r)) => r,
                        None => {
                            busy_until.push(SimTime::ZERO);
                            channels.push((ch.clone(), busy_until.len() - 1));
                            busy_until.len() - 1
                        }
                    };
                    [r, r]
                }
                None => {
                    busy_until.extend([SimTime::ZERO; 2]);
                    [busy_until.len() - 2, busy_until.len() - 1]
                }
            };
            links.push(LinkRt {
                model: l.model.clone(),
                signal: l.signal.clone(),
                ends: [(a, fa), (b, fb)],
                resource,
                up_at: SimTime::from_ms(l.up_at_ms.unwrap_or(0.0)),
                down_at: l.down_at_ms.map(SimTime::from_ms),
                rng: stream(seed, LINK_STREAM + j as u64),
            });
        }
        let mut media = Vec::new();
        for (k, m) in cfg.media.iter().enumerate() {
            let members = m
                .members
                .iter()
                .enumerate()
                .map(|(member, who)| {
                    let node = cfg.node_index(who).expect("validated");
                    let attach = Attach::Medium { medium: k, member };
                    (node, add_face(node, &m.name, m.model.cost_per_packet, FaceKind::Broadcast, attach))
                })
                .collect();
            busy_until.push(SimTime::ZERO);
            media.push(MediumRt {
                model: m.model.clone(),
                signal: m.signal.clone(),
                members,
                resource: busy_until.len() - 1,
                rng: stream(seed, MEDIUM_STREAM + k as u64),
            });
        }

        for (i, n) in cfg.nodes.iter().enumerate() {
            for r in &n.routes {
                let faces = r
                    .faces
                    .iter()
                    .map(|label| {
                        nodes[i]
                            .faces
                            .iter()
                            .find(|(f, _)| f.label == *label)
                            .map(|(f, _)| f.id)
                            .expect("validated binding")
                    })
                    .collect();
                let entry = FibEntry::new(r.prefix.clone(), faces).map_err(|e| {
                    ConfigErrors(vec![crate::scenario::ConfigError::InvalidValue {
                        path: format!("nodes[{i}].routes"),
                        reason: e.to_string(),
                    }])
                })?;
                nodes[i].fib.insert(entry);
            }
        }

        for (p, pre) in cfg.preload.iter().enumerate() {
            let mut rng = stream(seed, PRELOAD_STREAM + p as u64);
            let mut chunks: Vec<u64> = (0..pre.total_chunks).collect();
            chunks.shuffle(&mut rng);
            let take = (pre.fraction * pre.total_chunks as f64).round() as usize;
            let holders: Vec<usize> =
                pre.holders.iter().map(|h| cfg.node_index(h).expect("validated")).collect();
            for (i, &c) in chunks.iter().take(take).enumerate() {
                let h = holders[i % holders.len()];
                nodes[h].cs.insert(Data {
                    name: pre.prefix.with_segment(c),
                    payload_size: cfg.payload_size,
                    origin: NodeId(h as u32),
                });
            }
        }

        Ok(Simulation {
            now: SimTime::ZERO,
            seq: 0,
            queue: BinaryHeap::new(),
            nodes,
            links,
            media,
            busy_until,
            consumer: Consumer::new(consumer_node, &cfg.consumer),
            strategy_cfg,
            reqs: cfg.consumer.requirements.clone(),
            interest_size: cfg.interest_size,
            payload_size: cfg.payload_size,
            horizon: SimTime::from_ms(cfg.horizon_ms),
            trace: Trace::new(mode),
            events: 0,
        })
    }

    /// Processes events until the transfer completes, fails, or the horizon passes.
    pub fn run(mut self) -> MetricsReport {
        self.schedule(SimTime::ZERO, EventKind::ConsumerTick);
        while let Some(ev) = self.queue.pop() {
            if ev.at > self.horizon {
                self.now = self.horizon;
                break;
            }
            debug_assert!(ev.at >= self.now, "event queue went back in time");
            self.now = ev.at;
            self.events += 1;
            self.dispatch(ev.kind);
            if self.consumer.is_finished() {
                break;
            }
        }
        self.report()
    }

    fn schedule(&mut self, at: SimTime, kind: EventKind) {
        self.seq += 1;
        self.queue.push(Event { at, seq: self.seq, kind });
    }

    fn dispatch(&mut self, kind: EventKind) {
        match kind {
            EventKind::Arrival { node, face, packet } => match packet {
                Packet::Interest(i) => self.on_interest(node, face, i),
                Packet::Data(d) => {
                    let n = &mut self.nodes[node];
                    if n.processing > SimDuration::ZERO {
                        let done = n.cpu_free_at.max(self.now) + n.processing;
                        n.cpu_free_at = done;
                        self.schedule(done, EventKind::Processed { node, face, data: d });
                    } else {
                        self.on_data(node, face, d);
                    }
                }
            },
            EventKind::Processed { node, face, data } => self.on_data(node, face, data),
            EventKind::RteTimer { node, name, entry, face, sent_at } => {
                self.on_rte_timer(node, &name, entry, face, sent_at)
            }
            EventKind::Staggered { node, entry, face, interest } => {
                self.on_staggered(node, entry, face, interest)
            }
            EventKind::ConsumerTimer { chunk, attempt } => self.on_consumer_timer(chunk, attempt),
            EventKind::ConsumerTick => {
                self.consumer.tick_pending = false;
                self.fill_window();
            }
        }
    }

    fn expire_pit(&mut self, n: usize) {
        let now = self.now;
        let expired = self.nodes[n].pit.expire(now);
        for e in expired {
            let node = &mut self.nodes[n];
            for r in e.upstream.iter().filter(|r| !r.settled) {
                node.stats[r.face.0 as usize].on_timeout(&self.strategy_cfg);
                node.m.timeouts += 1;
            }
            trace!(self, n, "pit-expire", "{}", e.name);
        }
    }

    fn face_up(&self, n: usize, face: FaceId) -> bool {
        match self.nodes[n].faces[face.0 as usize].1 {
            Attach::App => false,
            Attach::Link { link, .. } => self.links[link].up(self.now),
            Attach::Medium { .. } => true,
        }
    }

    fn candidate(&self, n: usize, face: FaceId, from: FaceId) -> bool {
        if !self.face_up(n, face) {
            return false;
        }
        face != from
            || (self.nodes[n].faces[face.0 as usize].0.kind == FaceKind::Broadcast
                && self.nodes[n].designated_forwarder)
    }

    /// The forwarding pipeline: repository, Content Store, PIT, FIB, strategy.
    fn on_interest(&mut self, n: usize, from: FaceId, interest: Interest) {
        let now = self.now;
        self.expire_pit(n);
        trace!(self, n, "int-rx", "{} {} {:016x}", from, interest.name, interest.nonce);

        if self.nodes[n].serves.iter().any(|p| p.is_prefix_of(&interest.name)) {
            self.nodes[n].m.served += 1;
            let data = Data {
                name: interest.name,
                payload_size: self.payload_size,
                origin: NodeId(n as u32),
            };
            self.send_data(n, from, data);
            return;
        }
        if let Some(data) = self.nodes[n].cs.lookup(&interest.name) {
            self.nodes[n].m.cache_hits += 1;
            trace!(self, n, "cs-hit", "{}", interest.name);
            self.send_data(n, from, data);
            return;
        }
        match self.nodes[n].pit.process_incoming_interest(&interest, from, now) {
            InterestDisposition::DuplicateNonce => {
                self.nodes[n].m.duplicate_nonce += 1;
                trace!(self, n, "dup-nonce", "{} {:016x}", interest.name, interest.nonce);
                return;
            }
            InterestDisposition::Aggregated => {
                self.nodes[n].m.aggregated += 1;
                trace!(self, n, "aggregate", "{} {}", interest.name, from);
                return;
            }
            InterestDisposition::CacheMissNew => {}
        }
        let entry_id = self.nodes[n].pit.get(&interest.name).expect("just created").id;
        let nexthops: Vec<FaceId> = self.nodes[n]
            .fib
            .longest_prefix_match(&interest.name)
            .map(|e| e.nexthops.clone())
            .unwrap_or_default();
        let mut candidates: Vec<FaceId> =
            nexthops.into_iter().filter(|&f| self.candidate(n, f, from)).collect();
        candidates.sort();
        if candidates.is_empty() {
            self.nodes[n].m.no_route += 1;
            self.nodes[n].pit.remove(&interest.name);
            trace!(self, n, "no-route", "{}", interest.name);
            return;
        }

        let decision = self.decide(n, &candidates);
        trace!(
            self,
            n,
            "fwd",
            "{} {:016x} {:?} {}",
            interest.name,
            interest.nonce,
            decision.rationale,
            decision
                .sends
                .iter()
                .map(|s| format!("{}@{:.3}", s.face, s.delay_ms))
                .collect::<Vec<_>>()
                .join(",")
        );
        let out = Interest { hop_count: interest.hop_count + 1, ..interest };
        for s in decision.sends {
            if s.delay_ms <= 0.0 {
                self.send_interest(n, s.face, &out, entry_id);
            } else {
                let at = now + SimDuration::from_ms(s.delay_ms);
                let kind = EventKind::Staggered { node: n, entry: entry_id, face: s.face, interest: out.clone() };
                self.schedule(at, kind);
            }
        }
    }

    fn decide(&mut self, n: usize, candidates: &[FaceId]) -> StrategyDecision {
        let now = self.now;
        let node = &mut self.nodes[n];
        let lo = candidates[0].0 as usize;
        let hi = candidates[candidates.len() - 1].0 as usize;
        let owned: Vec<FaceStats>;
        // Candidates are sorted and distinct, so a contiguous id range is a plain slice.
        let stats: &[FaceStats] = if hi - lo + 1 == candidates.len() {
            &node.stats[lo..=hi]
        } else {
            owned = candidates.iter().map(|f| node.stats[f.0 as usize].clone()).collect();
            &owned
        };
        let cfg = &self.strategy_cfg;
        match node.strategy {
            StrategyKind::Default => default_select(stats, cfg, &mut node.rng),
            StrategyKind::LoadSharing => loadsharing_select(stats),
            StrategyKind::Parallel => parallel_select(stats),
            StrategyKind::BifLocal => bif_local_first_select(stats, cfg),
            StrategyKind::Adaptive => adaptive_select(stats, &self.reqs, cfg, &mut node.adaptive, now),
        }
    }

    fn send_interest(&mut self, n: usize, face: FaceId, interest: &Interest, entry_id: u64) {
        let now = self.now;
        let node = &mut self.nodes[n];
        let Some(entry) = node.pit.get_by_id_mut(&interest.name, entry_id) else {
            return;
        };
        let fi = face.0 as usize;
        if entry.upstream_mut(face).is_some_and(|r| !r.settled) {
            node.stats[fi].release();
        }
        entry.add_upstream(face, now);
        node.stats[fi].on_sent();
        node.m.interest_tx += 1;
        if node.m.face_sends.len() < node.faces.len() {
            node.m.face_sends.resize(node.faces.len(), 0);
        }
        node.m.face_sends[fi] += 1;
        if node.strategy == StrategyKind::Default {
            let at = now + SimDuration::from_ms(node.stats[fi].rte_ms);
            let kind = EventKind::RteTimer { node: n, name: interest.name.clone(), entry: entry_id, face, sent_at: now };
            self.schedule(at, kind);
        }
        trace!(self, n, "int-tx", "{} {} {:016x}", face, interest.name, interest.nonce);
        self.transmit(n, face, Packet::Interest(interest.clone()));
    }

    fn on_staggered(&mut self, n: usize, entry_id: u64, face: FaceId, interest: Interest) {
        let now = self.now;
        let live = self.nodes[n]
            .pit
            .get_by_id_mut(&interest.name, entry_id)
            .is_some_and(|e| e.is_live(now));
        if !live || !self.face_up(n, face) {
            self.nodes[n].m.cancelled_sends += 1;
            trace!(self, n, "send-cancel", "{} {}", face, interest.name);
            return;
        }
        self.send_interest(n, face, &interest, entry_id);
    }

    fn on_rte_timer(&mut self, n: usize, name: &Name, entry_id: u64, face: FaceId, sent_at: SimTime) {
        let node = &mut self.nodes[n];
        let Some(entry) = node.pit.get_by_id_mut(name, entry_id) else {
            return;
        };
        let Some(rec) = entry.upstream_mut(face) else {
            return;
        };
        if rec.settled || rec.sent_at != sent_at {
            return;
        }
        rec.settled = true;
        node.stats[face.0 as usize].on_timeout(&self.strategy_cfg);
        node.m.timeouts += 1;
        trace!(self, n, "rte-timeout", "{} {}", face, name);
    }

    fn on_data(&mut self, n: usize, face: FaceId, data: Data) {
        let now = self.now;
        self.expire_pit(n);
        trace!(self, n, "data-rx", "{} {}", face, data.name);
        let cfg = &self.strategy_cfg;
        let node = &mut self.nodes[n];
        let Some(entry) = node.pit.satisfy(&data.name, now) else {
            node.m.unsolicited += 1;
            return;
        };
        let fi = face.0 as usize;
        let mut from_upstream = false;
        for r in &entry.upstream {
            if r.face == face {
                from_upstream = true;
                let rtt = (now - r.sent_at).as_ms();
                node.stats[fi].on_data(cfg, DataSample { at: now, rtt_ms: Some(rtt), settles_pending: !r.settled });
            } else if !r.settled {
                node.stats[r.face.0 as usize].release();
            }
        }
        if !from_upstream {
            node.stats[fi].on_data(cfg, DataSample { at: now, rtt_ms: None, settles_pending: false });
        }
        node.cs.insert(data.clone());
        for d in entry.downstream {
            // A broadcast face already delivered this Data to everyone on it.
            if d != face {
                self.send_data(n, d, data.clone());
            }
        }
    }

    fn send_data(&mut self, n: usize, face: FaceId, data: Data) {
        if let Attach::App = self.nodes[n].faces[face.0 as usize].1 {
            self.deliver_to_app(n, data);
            return;
        }
        self.nodes[n].m.data_tx += 1;
        trace!(self, n, "data-tx", "{} {}", face, data.name);
        self.transmit(n, face, Packet::Data(data));
    }

    fn transmit(&mut self, n: usize, face: FaceId, packet: Packet) {
        let now = self.now;
        let size = match packet {
            Packet::Interest(_) => self.interest_size,
            Packet::Data(_) => 1.0,
        };
        match self.nodes[n].faces[face.0 as usize].1 {
            Attach::App => unreachable!("application face is handled by the caller"),
            Attach::Link { link, side } => {
                let l = &mut self.links[link];
                if !l.up(now) {
                    self.nodes[n].m.link_drops += 1;
                    return;
                }
                let q = l.signal.quality_at(now.as_ms());
                let o = transmit_sized(&l.model, q, size, &mut l.rng);
                let res = l.resource[side];
                let start = self.busy_until[res].max(now);
                self.busy_until[res] = start + SimDuration::from_ms(o.occupancy_ms);
                let arrival = start + SimDuration::from_ms(o.total_delay_ms);
                // Endpoint `a` is the attaching side: it misses whatever arrives after it left.
                let detached = side == 1 && l.down_at.is_some_and(|d| arrival >= d);
                if !o.delivered || detached {
                    self.nodes[n].m.link_drops += 1;
                    return;
                }
                let (dst, dst_face) = l.ends[1 - side];
                self.schedule(arrival, EventKind::Arrival { node: dst, face: dst_face, packet });
            }
            Attach::Medium { medium, member } => {
                let m = &mut self.media[medium];
                let q = m.signal.quality_at(now.as_ms());
                let qualities = vec![q; m.members.len()];
                let (rx, occupancy) = broadcast_deliver(&m.model, member, &qualities, size, &mut m.rng);
                let start = self.busy_until[m.resource].max(now);
                self.busy_until[m.resource] = start + SimDuration::from_ms(occupancy);
                let targets: Vec<_> = rx
                    .iter()
                    .filter(|r| r.outcome.delivered)
                    .map(|r| (m.members[r.listener], r.outcome.total_delay_ms))
                    .collect();
                self.nodes[n].m.link_drops += (rx.len() - targets.len()) as u64;
                for ((dst, dst_face), delay) in targets {
                    let kind = EventKind::Arrival { node: dst, face: dst_face, packet: packet.clone() };
                    self.schedule(start + SimDuration::from_ms(delay), kind);
                }
            }
        }
    }

    fn report(self) -> MetricsReport {
        let cn = self.consumer.node;
        let end = self.consumer.done_at.unwrap_or(self.now);
        let end_ms = end.as_ms();
        let client = &self.nodes[cn];
        let mut face_sends = Vec::new();
        let mut signals = Vec::new();
        for (face, attach) in client.faces.iter().skip(1) {
            let sent = client.m.face_sends.get(face.id.0 as usize).copied().unwrap_or(0);
            face_sends.push((face.label.clone(), sent));
            let profile = match *attach {
                Attach::Link { link, .. } => &self.links[link].signal,
                Attach::Medium { medium, .. } => &self.media[medium].signal,
                Attach::App => continue,
            };
            signals.push(profile.mean_over(0.0, end_ms));
        }
        let mean_signal = if signals.is_empty() {
            1.0
        } else {
            signals.iter().sum::<f64>() / signals.len() as f64
        };
        let mut vrtt = self.consumer.vrtt.clone();
        vrtt.sort_by(f64::total_cmp);
        let vrtt_mean_ms = if vrtt.is_empty() { 0.0 } else { vrtt.iter().sum::<f64>() / vrtt.len() as f64 };
        let (trace_hash, trace) = self.trace.finish();
        let c = self.consumer;
        MetricsReport {
            completed: c.done_at.is_some(),
            failed: c.failed,
            transfer_time_ms: end_ms,
            interests_sent: client.m.interest_tx,
            expressions: c.expressions,
            data_received: c.data_received,
            duplicate_data: client.m.unsolicited,
            timeouts: client.m.timeouts,
            consumer_timeouts: c.timeouts,
            face_sends,
            nodes: self.nodes.iter().map(|n| n.m.clone()).collect(),
            vrtt_mean_ms,
            vrtt_p50_ms: percentile(&vrtt, 0.5),
            vrtt_p95_ms: percentile(&vrtt, 0.95),
            chunks: c.records,
            mean_signal,
            events: self.events,
            trace_hash,
            trace,
        }
    }
}

/// Runs one replication of a single-point scenario with the given seed.
pub fn run(cfg: &ScenarioConfig, seed: u64) -> Result<MetricsReport, ConfigErrors> {
    Ok(Simulation::new(cfg, seed, TraceMode::Off)?.run())
}

impl Simulation {
    fn fill_window(&mut self) {
        while let Some(chunk) = self.consumer.next_to_request() {
            self.express(chunk, 0);
        }
    }

    fn express(&mut self, chunk: u64, attempt: u32) {
        let now = self.now;
        let cn = self.consumer.node;
        let timeout = self.consumer.timeout_ms();
        let nonce: u64 = self.nodes[cn].rng.gen();
        let name = self.consumer.prefix.with_segment(chunk);
        let interest = Interest::new(name, nonce, now).with_lifetime(SimDuration::from_ms(timeout));
        self.consumer.on_expressed(chunk, attempt, now);
        self.schedule(now + SimDuration::from_ms(timeout), EventKind::ConsumerTimer { chunk, attempt });
        trace!(self, cn, "express", "{} {} {:016x}", interest.name, attempt, nonce);
        self.on_interest(cn, APP_FACE, interest);
    }

    fn on_consumer_timer(&mut self, chunk: u64, attempt: u32) {
        if !self.consumer.is_current(chunk, attempt) {
            return;
        }
        self.consumer.timeouts += 1;
        let cn = self.consumer.node;
        trace!(self, cn, "consumer-timeout", "{} {}", chunk, attempt);
        if attempt >= self.consumer.max_retx {
            self.consumer.failed = true;
            trace!(self, cn, "transfer-failed", "{}", chunk);
            return;
        }
        self.express(chunk, attempt + 1);
    }

    fn deliver_to_app(&mut self, n: usize, data: Data) {
        debug_assert_eq!(n, self.consumer.node, "only the consumer node has an application");
        if self.consumer.on_data(&data.name, self.now) {
            trace!(self, n, "complete", "{}", data.name);
        }
        if !self.consumer.tick_pending && !self.consumer.is_finished() {
            self.consumer.tick_pending = true;
            self.schedule(self.now, EventKind::ConsumerTick);
        }
    }
}
