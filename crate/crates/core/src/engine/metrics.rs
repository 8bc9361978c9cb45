use serde::{Deserialize, Serialize};

/// Per-node forwarding counters.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct NodeMetrics {
    pub name: String,
    /// Interests transmitted on network faces.
    pub interest_tx: u64,
    /// Data transmitted on network faces.
    pub data_tx: u64,
    /// Interests answered from the Content Store.
    pub cache_hits: u64,
    /// Interests answered by a repository from its own content.
    pub served: u64,
    pub duplicate_nonce: u64,
    pub aggregated: u64,
    pub no_route: u64,
    /// Data with no matching PIT entry (including late parallel duplicates).
    pub unsolicited: u64,
    /// Strategy-level timeouts (RTE timers and PIT expiry).
    pub timeouts: u64,
    /// Staggered or fallback sends cancelled because Data arrived first.
    pub cancelled_sends: u64,
    /// Packets lost on links leaving this node (loss, detach).
    pub link_drops: u64,
    /// Interest sends per face, indexed by face id.
    pub face_sends: Vec<u64>,
}

/// Timeline of one chunk at the consumer.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChunkRecord {
    pub chunk: u64,
    pub first_sent_ms: f64,
    pub last_sent_ms: f64,
    pub completed_ms: Option<f64>,
    pub retx: u32,
    /// Time from the last expression to the Data, if completed.
    pub vrtt_ms: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub completed: bool,
    /// A chunk exhausted its retransmissions.
    pub failed: bool,
    /// Time of the last chunk (or of the end of the run when incomplete).
    pub transfer_time_ms: f64,
    /// Interests the client transmitted on its network faces.
    pub interests_sent: u64,
    /// Interests the consumer application expressed (first tries and retransmissions).
    pub expressions: u64,
    /// Data delivered to the consumer application.
    pub data_received: u64,
    /// Data that reached the client after its PIT entry was consumed.
    pub duplicate_data: u64,
    /// Strategy-level timeouts at the client.
    pub timeouts: u64,
    /// Consumer retransmission timeouts.
    pub consumer_timeouts: u64,
    /// `(face label, interests sent)` for each client face.
    pub face_sends: Vec<(String, u64)>,
    pub nodes: Vec<NodeMetrics>,
    pub vrtt_mean_ms: f64,
    pub vrtt_p50_ms: f64,
    pub vrtt_p95_ms: f64,
    pub chunks: Vec<ChunkRecord>,
    /// Time-averaged signal quality over the client's links during the transfer.
    pub mean_signal: f64,
    pub events: u64,
    pub trace_hash: Option<u64>,
    #[serde(skip)]
    pub trace: Vec<String>,
}

impl MetricsReport {
    pub fn node(&self, name: &str) -> Option<&NodeMetrics> {
        self.nodes.iter().find(|n| n.name == name)
    }

    /// Interests sent on the client face with this label.
    pub fn sends_on(&self, label: &str) -> u64 {
        self.face_sends.iter().find(|(l, _)| l == label).map_or(0, |(_, n)| *n)
    }

    /// Chunks outstanding at `t_ms`: requested at or before it, not completed by then.
    pub fn in_flight_at(&self, t_ms: f64) -> usize {
        self.chunks
            .iter()
            .filter(|c| c.first_sent_ms <= t_ms && c.completed_ms.map_or(true, |d| d > t_ms))
            .count()
    }
}

/// Linear-interpolated percentile of `sorted` (ascending), `p` in `[0, 1]`.
pub fn percentile(sorted: &[f64], p: f64) -> f64 {
    if sorted.is_empty() {
        return 0.0;
    }
    let rank = p.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = rank.floor() as usize;
    let hi = rank.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (rank - lo as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn percentile_interpolates() {
        let v = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(percentile(&v, 0.5), 2.5);
        assert_eq!(percentile(&v, 0.0), 1.0);
        assert_eq!(percentile(&v, 1.0), 4.0);
        assert_eq!(percentile(&[], 0.5), 0.0);
    }

    #[test]
    fn in_flight_counts_open_chunks() {
        let rec = |s: f64, d: Option<f64>| ChunkRecord {
            chunk: 0,
            first_sent_ms: s,
            last_sent_ms: s,
            completed_ms: d,
            retx: 0,
            vrtt_ms: None,
        };
        let r = MetricsReport {
            chunks: vec![rec(0.0, Some(5.0)), rec(1.0, Some(20.0)), rec(2.0, None), rec(30.0, None)],
            ..Default::default()
        };
        assert_eq!(r.in_flight_at(10.0), 2);
    }
}
