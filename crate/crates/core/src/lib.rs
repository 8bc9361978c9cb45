//! Deterministic discrete-event simulation of CCN forwarding strategies on
//! multihomed terminals.
//!
//! The crate is layered bottom-up:
//!
//! - [`ccn`]: names, packets, faces and the three forwarding tables.
//! - [`strategy`]: per-face measurements and the face-selection functions.
//! - [`link`]: wireless and wired link behavior (delay, loss, ARQ, bandwidth).
//! - [`engine`]: the event loop, node forwarding pipeline and pipelined consumer.
//! - [`scenario`]: declarative configs, presets, sweeps and summary statistics.

pub mod ccn;
pub mod engine;
pub mod link;
pub mod scenario;
pub mod strategy;
pub mod time;

pub use ccn::{
    fib_longest_prefix_match, ContentStore, Data, Face, FaceId, FaceKind, Fib, FibEntry, Interest,
    InterestDisposition, Name, NodeId, Pit, PitEntry,
};
pub use engine::{run, ChunkRecord, MetricsReport, NodeMetrics, Simulation, TraceMode};
pub use link::{
    broadcast_deliver, delivery_probability, effective_bandwidth, transmit, LinkModel, LossModel,
    SignalProfile, TransmitOutcome,
};
pub use scenario::{
    parse_and_validate, presets, summarize, ConfigError, RunResult, ScenarioConfig, SummaryRow,
    Sweep,
};
pub use strategy::{
    AppRequirements, FaceStats, Preference, Rationale, StrategyConfig, StrategyDecision,
    StrategyKind,
};
pub use time::{SimDuration, SimTime};
