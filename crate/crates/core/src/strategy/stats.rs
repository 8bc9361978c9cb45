use std::collections::VecDeque;

use super::StrategyConfig;
use crate::ccn::FaceId;
use crate::time::{SimDuration, SimTime};

/// Per-face measurements maintained by a node's strategy layer.
#[derive(Clone, Debug, PartialEq)]
pub struct FaceStats {
    pub face: FaceId,
    /// Response-time estimate, ms. Always within the configured bounds.
    pub rte_ms: f64,
    /// Interests forwarded on this face and not yet answered or timed out.
    pub pending: u32,
    /// EWMA of interest-to-data round trips; `None` before the first sample.
    pub delay_ewma_ms: Option<f64>,
    pub data_returned: u64,
    pub timeouts: u64,
    pub cost: f64,
    recent_data: VecDeque<SimTime>,
}

/// One Data arrival attributed to a face.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DataSample {
    pub at: SimTime,
    /// Round trip of the interest this Data answered, when known.
    pub rtt_ms: Option<f64>,
    /// False when the interest's pending slot was already released by a timeout.
    pub settles_pending: bool,
}

impl DataSample {
    pub fn new(at: SimTime, rtt_ms: f64) -> Self {
        DataSample { at, rtt_ms: Some(rtt_ms), settles_pending: true }
    }
}

impl FaceStats {
    pub fn new(face: FaceId, cost: f64, cfg: &StrategyConfig) -> Self {
        FaceStats {
            face,
            rte_ms: cfg.rte_initial_ms,
            pending: 0,
            delay_ewma_ms: None,
            data_returned: 0,
            timeouts: 0,
            cost,
            recent_data: VecDeque::new(),
        }
    }

    pub fn on_sent(&mut self) {
        self.pending += 1;
    }

    /// Releases a pending slot without touching the estimates (e.g. another face answered).
    pub fn release(&mut self) {
        self.pending = self.pending.saturating_sub(1);
    }

    pub fn on_data(&mut self, cfg: &StrategyConfig, sample: DataSample) {
        self.rte_ms = clamp_rte(self.rte_ms * (1.0 - cfg.rte_decrease_factor), cfg);
        if sample.settles_pending {
            self.release();
        }
        if let Some(rtt) = sample.rtt_ms {
            let a = cfg.delay_ewma_alpha;
            self.delay_ewma_ms = Some(match self.delay_ewma_ms {
                Some(prev) => (1.0 - a) * prev + a * rtt,
                None => rtt,
            });
        }
        self.data_returned += 1;
        let window = SimDuration::from_ms(cfg.adaptive.throughput_window_ms);
        self.recent_data.push_back(sample.at);
        while let Some(&front) = self.recent_data.front() {
            if sample.at.saturating_since(front) >= window {
                self.recent_data.pop_front();
            } else {
                break;
            }
        }
    }

    pub fn on_timeout(&mut self, cfg: &StrategyConfig) {
        self.rte_ms = clamp_rte(self.rte_ms * (1.0 + cfg.rte_increase_factor), cfg);
        self.release();
        self.timeouts += 1;
    }

    /// Data arrivals within the sliding window ending at `now`.
    pub fn data_returned_window(&self, now: SimTime, cfg: &StrategyConfig) -> usize {
        let window = SimDuration::from_ms(cfg.adaptive.throughput_window_ms);
        let cut = self.recent_data.partition_point(|&t| now.saturating_since(t) >= window);
        self.recent_data.len() - cut
    }

    /// Fraction of answered-or-timed-out interests that timed out.
    pub fn loss_estimate(&self) -> f64 {
        let total = self.timeouts + self.data_returned;
        if total == 0 {
            0.0
        } else {
            self.timeouts as f64 / total as f64
        }
    }
}

fn clamp_rte(v: f64, cfg: &StrategyConfig) -> f64 {
    v.clamp(cfg.rte_min_ms, cfg.rte_max_ms)
}

/// RTE after one returning Data: shrinks by `rte_decrease_factor`.
pub fn rte_on_data(stats: &FaceStats, cfg: &StrategyConfig, sample: DataSample) -> FaceStats {
    let mut s = stats.clone();
    s.on_data(cfg, sample);
    s
}

/// RTE after one timeout: grows by `rte_increase_factor`.
pub fn rte_on_timeout(stats: &FaceStats, cfg: &StrategyConfig) -> FaceStats {
    let mut s = stats.clone();
    s.on_timeout(cfg);
    s
}
