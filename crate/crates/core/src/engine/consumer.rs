use std::collections::BTreeMap;

use super::metrics::ChunkRecord;
use crate::ccn::Name;
use crate::scenario::ConsumerConfig;
use crate::time::SimTime;

const INITIAL_TIMEOUT_MS: f64 = 1000.0;
const MIN_TIMEOUT_MS: f64 = 50.0;
const MAX_TIMEOUT_MS: f64 = 4000.0;
const VRTT_ALPHA: f64 = 1.0 / 8.0;

/// Fixed-window pipelined chunk fetcher.
#[derive(Debug)]
pub(super) struct Consumer {
    pub node: usize,
    pub prefix: Name,
    total: u64,
    pipeline: usize,
    fixed_timeout_ms: Option<f64>,
    pub max_retx: u32,
    next_chunk: u64,
    /// chunk -> current attempt number.
    in_flight: BTreeMap<u64, u32>,
    completed: u64,
    pub records: Vec<ChunkRecord>,
    vrtt_ewma: Option<f64>,
    pub vrtt: Vec<f64>,
    pub expressions: u64,
    pub data_received: u64,
    pub timeouts: u64,
    pub failed: bool,
    pub done_at: Option<SimTime>,
    pub tick_pending: bool,
}

impl Consumer {
    pub fn new(node: usize, cfg: &ConsumerConfig) -> Self {
        Consumer {
            node,
            prefix: cfg.prefix.clone(),
            total: cfg.total_chunks,
            pipeline: cfg.pipeline as usize,
            fixed_timeout_ms: cfg.interest_timeout_ms,
            max_retx: cfg.max_retx,
            next_chunk: 0,
            in_flight: BTreeMap::new(),
            completed: 0,
            records: Vec::new(),
            vrtt_ewma: None,
            vrtt: Vec::new(),
            expressions: 0,
            data_received: 0,
            timeouts: 0,
            failed: false,
            done_at: None,
            tick_pending: false,
        }
    }

    pub fn is_finished(&self) -> bool {
        self.failed || self.done_at.is_some()
    }

    /// Twice the smoothed VRTT, clamped, unless a fixed timeout is configured.
    pub fn timeout_ms(&self) -> f64 {
        match (self.fixed_timeout_ms, self.vrtt_ewma) {
            (Some(t), _) => t,
            (None, None) => INITIAL_TIMEOUT_MS,
            (None, Some(v)) => (2.0 * v).clamp(MIN_TIMEOUT_MS, MAX_TIMEOUT_MS),
        }
    }

    /// The next new chunk to request if the window has room.
    pub fn next_to_request(&mut self) -> Option<u64> {
        if self.is_finished() || self.in_flight.len() >= self.pipeline || self.next_chunk >= self.total {
            return None;
        }
        let c = self.next_chunk;
        self.next_chunk += 1;
        Some(c)
    }

    pub fn on_expressed(&mut self, chunk: u64, attempt: u32, now: SimTime) {
        self.in_flight.insert(chunk, attempt);
        self.expressions += 1;
        let ms = now.as_ms();
        match self.records.get_mut(chunk as usize) {
            Some(r) => {
                r.last_sent_ms = ms;
                r.retx = attempt;
            }
            None => {
                debug_assert_eq!(chunk as usize, self.records.len(), "chunks are first requested in order");
                self.records.push(ChunkRecord {
                    chunk,
                    first_sent_ms: ms,
                    last_sent_ms: ms,
                    completed_ms: None,
                    retx: attempt,
                    vrtt_ms: None,
                });
            }
        }
    }

    pub fn is_current(&self, chunk: u64, attempt: u32) -> bool {
        self.in_flight.get(&chunk) == Some(&attempt)
    }

    /// Accounts one delivered Data; true if it completed an outstanding chunk.
    pub fn on_data(&mut self, name: &Name, now: SimTime) -> bool {
        self.data_received += 1;
        let Some(chunk) = name.segment() else {
            return false;
        };
        if self.in_flight.remove(&chunk).is_none() {
            return false;
        }
        let rec = &mut self.records[chunk as usize];
        let vrtt = now.as_ms() - rec.last_sent_ms;
        rec.completed_ms = Some(now.as_ms());
        rec.vrtt_ms = Some(vrtt);
        self.vrtt.push(vrtt);
        self.vrtt_ewma = Some(match self.vrtt_ewma {
            Some(prev) => (1.0 - VRTT_ALPHA) * prev + VRTT_ALPHA * vrtt,
            None => vrtt,
        });
        self.completed += 1;
        if self.completed == self.total {
            self.done_at = Some(now);
        }
        true
    }

    #[cfg(test)]
    pub fn in_flight_len(&self) -> usize {
        self.in_flight.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(pipeline: u32, total: u64) -> ConsumerConfig {
        ConsumerConfig {
            node: "c".into(),
            prefix: "/v".parse().unwrap(),
            total_chunks: total,
            pipeline,
            interest_timeout_ms: None,
            max_retx: 10,
            requirements: Default::default(),
            processing_delay_ms: 0.0,
        }
    }

    #[test]
    fn window_limits_requests() {
        let mut c = Consumer::new(0, &cfg(100, 1000));
        let mut n = 0;
        while let Some(k) = c.next_to_request() {
            c.on_expressed(k, 0, SimTime::ZERO);
            n += 1;
        }
        assert_eq!(n, 100);
        assert_eq!(c.in_flight_len(), 100);
    }

    #[test]
    fn conservation_and_completion() {
        let mut c = Consumer::new(0, &cfg(3, 5));
        let prefix: Name = "/v".parse().unwrap();
        let mut t = 0.0;
        loop {
            while let Some(k) = c.next_to_request() {
                c.on_expressed(k, 0, SimTime::from_ms(t));
            }
            let unrequested = 5 - c.next_chunk;
            assert_eq!(c.completed + c.in_flight_len() as u64 + unrequested, 5);
            let Some((&k, _)) = c.in_flight.iter().next() else { break };
            t += 10.0;
            assert!(c.on_data(&prefix.with_segment(k), SimTime::from_ms(t)));
        }
        assert_eq!(c.done_at, Some(SimTime::from_ms(50.0)));
    }

    #[test]
    fn adaptive_timeout_clamps() {
        let mut c = Consumer::new(0, &cfg(1, 10));
        assert_eq!(c.timeout_ms(), 1000.0);
        c.on_expressed(0, 0, SimTime::ZERO);
        c.on_data(&"/v/s0".parse().unwrap(), SimTime::from_ms(5.0));
        assert_eq!(c.timeout_ms(), 50.0);
        c.vrtt_ewma = Some(300.0);
        assert_eq!(c.timeout_ms(), 600.0);
        c.vrtt_ewma = Some(3000.0);
        assert_eq!(c.timeout_ms(), 4000.0);
    }

    #[test]
    fn stale_data_is_not_a_completion() {
        let mut c = Consumer::new(0, &cfg(1, 10));
        assert!(!c.on_data(&"/v/s0".parse().unwrap(), SimTime::ZERO));
        assert_eq!(c.data_received, 1);
    }
}
