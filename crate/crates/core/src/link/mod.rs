//! Link behavior: propagation delay with jitter, signal-dependent frame loss,
//! link-layer ARQ bounded by a retry limit, and rate-adapted serialization.

mod signal;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use signal::{SignalError, SignalProfile};

/// Per-attempt frame loss as a function of signal quality.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum LossModel {
    /// `p_max · (1 − q)^gamma`.
    Signal { p_max: f64, gamma: f64 },
    /// Fixed loss regardless of signal.
    Constant { p: f64 },
}

impl Default for LossModel {
    fn default() -> Self {
        LossModel::Signal { p_max: 0.9, gamma: 2.0 }
    }
}

impl LossModel {
    pub fn frame_loss(&self, q: f64) -> f64 {
        let q = q.clamp(0.0, 1.0);
        let p = match *self {
            LossModel::Signal { p_max, gamma } => p_max * (1.0 - q).powf(gamma),
            LossModel::Constant { p } => p,
        };
        p.clamp(0.0, 1.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LinkModel {
    pub base_delay_ms: f64,
    /// Half-width of the uniform jitter added to every packet.
    pub jitter_ms: f64,
    /// Full-size packets per ms at perfect signal.
    pub bandwidth: f64,
    pub loss: LossModel,
    /// Link-layer retransmissions after the first attempt.
    pub retry_limit: u32,
    pub per_retry_delay_ms: f64,
    /// Per-interest cost weight of faces bound to this link.
    pub cost_per_packet: f64,
    /// Lowest fraction of `bandwidth` that rate adaptation falls back to.
    pub q_floor: f64,
}

impl Default for LinkModel {
    fn default() -> Self {
        LinkModel {
            base_delay_ms: 1.0,
            jitter_ms: 0.0,
            bandwidth: 100.0,
            loss: LossModel::default(),
            retry_limit: 7,
            per_retry_delay_ms: 2.0,
            cost_per_packet: 1.0,
            q_floor: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinkModelError {
    #[error("{0} must be finite and non-negative")]
    Negative(&'static str),
    #[error("bandwidth must be positive")]
    Bandwidth,
    #[error("jitter_ms must not exceed base_delay_ms")]
    JitterExceedsDelay,
    #[error("loss parameters must lie in [0, 1] with gamma >= 0")]
    Loss,
    #[error("q_floor must lie in (0, 1]")]
    QFloor,
}

impl LinkModel {
    /// A loss-free link with fixed delay and ample bandwidth.
    pub fn wired(delay_ms: f64) -> Self {
        LinkModel {
            base_delay_ms: delay_ms,
            bandwidth: 1000.0,
            loss: LossModel::Constant { p: 0.0 },
            ..LinkModel::default()
        }
    }

    pub fn validate(&self) -> Result<(), LinkModelError> {
        let fine = |v: f64| v.is_finite() && v >= 0.0;
        for (name, v) in [
            ("base_delay_ms", self.base_delay_ms),
            ("jitter_ms", self.jitter_ms),
            ("per_retry_delay_ms", self.per_retry_delay_ms),
            ("cost_per_packet", self.cost_per_packet),
        ] {
            if !fine(v) {
                return Err(LinkModelError::Negative(name));
            }
        }
        if !(self.bandwidth > 0.0 && self.bandwidth.is_finite()) {
            return Err(LinkModelError::Bandwidth);
        }
        if self.jitter_ms > self.base_delay_ms {
            return Err(LinkModelError::JitterExceedsDelay);
        }
        let unit = |v: f64| (0.0..=1.0).contains(&v);
        let loss_ok = match self.loss {
            LossModel::Signal { p_max, gamma } => unit(p_max) && fine(gamma),
            LossModel::Constant { p } => unit(p),
        };
        if !loss_ok {
            return Err(LinkModelError::Loss);
        }
        if !(self.q_floor > 0.0 && self.q_floor <= 1.0) {
            return Err(LinkModelError::QFloor);
        }
        Ok(())
    }

    pub fn frame_loss(&self, q: f64) -> f64 {
        self.loss.frame_loss(q)
    }

    /// Time one full-size packet occupies the transmitter at quality `q`.
    pub fn serialization_ms(&self, q: f64) -> f64 {
        1.0 / effective_bandwidth(self, q)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransmitOutcome {
    pub delivered: bool,
    /// Send-to-arrival time of a delivered packet; for a lost packet, the
    /// time until the sender gives up.
    pub total_delay_ms: f64,
    /// Attempts made, in `[1, retry_limit + 1]`.
    pub attempts: u32,
    /// Airtime consumed on the transmitter, `attempts × serialization`.
    pub occupancy_ms: f64,
}

/// Rate-adapted bandwidth: `bandwidth × max(q, q_floor)`.
pub fn effective_bandwidth(link: &LinkModel, q: f64) -> f64 {
    link.bandwidth * q.clamp(0.0, 1.0).max(link.q_floor)
}

/// Probability that ARQ gets a packet through: `1 − p^(R+1)`.
pub fn delivery_probability(link: &LinkModel, q: f64) -> f64 {
    1.0 - link.frame_loss(q).powi(link.retry_limit as i32 + 1)
}

/// Number of failed attempts before the first success, by inversion of one
/// uniform draw. Using one draw per packet whatever the retry limit keeps
/// runs that differ only in the limit on common random numbers.
fn failures_before_success(p: f64, u: f64) -> u64 {
    if p <= 0.0 {
        0
    } else if p >= 1.0 || u <= 0.0 {
        u64::MAX
    } else {
        let k = (u.ln() / p.ln()).floor();
        if k >= u64::MAX as f64 {
            u64::MAX
        } else {
            k as u64
        }
    }
}

/// One full-size packet over `link` at signal quality `q`.
pub fn transmit<R: Rng + ?Sized>(link: &LinkModel, q: f64, rng: &mut R) -> TransmitOutcome {
    transmit_sized(link, q, 1.0, rng)
}

/// A packet of `size` full-packet units (interests are much smaller than data).
pub fn transmit_sized<R: Rng + ?Sized>(
    link: &LinkModel,
    q: f64,
    size: f64,
    rng: &mut R,
) -> TransmitOutcome {
    let u_loss: f64 = rng.gen();
    let u_jitter: f64 = rng.gen();
    outcome_from_draws(link, q, size, u_loss, u_jitter)
}

fn outcome_from_draws(link: &LinkModel, q: f64, size: f64, u_loss: f64, u_jitter: f64) -> TransmitOutcome {
    let max_attempts = link.retry_limit as u64 + 1;
    let failures = failures_before_success(link.frame_loss(q), u_loss);
    let delivered = failures < max_attempts;
    let attempts = if delivered { failures + 1 } else { max_attempts } as u32;
    let serialization = size * link.serialization_ms(q);
    let jitter = link.jitter_ms * (2.0 * u_jitter - 1.0);
    let retries = f64::from(attempts - 1) * link.per_retry_delay_ms;
    TransmitOutcome {
        delivered,
        total_delay_ms: (link.base_delay_ms + jitter + retries + serialization).max(0.0),
        attempts,
        occupancy_ms: f64::from(attempts) * serialization,
    }
}

/// Per-listener result of one broadcast transmission.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BroadcastReception {
    pub listener: usize,
    pub outcome: TransmitOutcome,
}

/// One packet sent on a shared medium by `sender` to every other member.
///
/// `qualities[i]` is listener `i`'s signal quality. Loss and jitter are drawn
/// independently per listener; the medium is occupied once, for as long as the
/// slowest listener's ARQ exchange lasts. The sender never hears itself.
pub fn broadcast_deliver<R: Rng + ?Sized>(
    link: &LinkModel,
    sender: usize,
    qualities: &[f64],
    size: f64,
    rng: &mut R,
) -> (Vec<BroadcastReception>, f64) {
    let mut out = Vec::with_capacity(qualities.len().saturating_sub(1));
    let mut occupancy: f64 = 0.0;
    for (listener, &q) in qualities.iter().enumerate() {
        if listener == sender {
            continue;
        }
        let outcome = transmit_sized(link, q, size, rng);
        occupancy = occupancy.max(outcome.occupancy_ms);
        out.push(BroadcastReception { listener, outcome });
    }
    (out, occupancy)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn lossy(p: f64, r: u32) -> LinkModel {
        LinkModel { loss: LossModel::Constant { p }, retry_limit: r, ..LinkModel::default() }
    }

    #[test]
    fn lossless_delivers_first_try() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for r in [0, 3, 12] {
            let o = transmit(&lossy(0.0, r), 0.4, &mut rng);
            assert!(o.delivered);
            assert_eq!(o.attempts, 1);
        }
    }

    #[test]
    fn total_loss_exhausts_retries() {
        let o = transmit(&lossy(1.0, 7), 1.0, &mut ChaCha8Rng::seed_from_u64(1));
        assert!(!o.delivered);
        assert_eq!(o.attempts, 8);
    }

    #[test]
    fn delivery_probability_closed_form() {
        assert_eq!(delivery_probability(&lossy(0.5, 0), 1.0), 0.5);
        assert_eq!(delivery_probability(&lossy(0.5, 1), 1.0), 0.75);
        assert!((delivery_probability(&lossy(0.3, 7), 1.0) - 0.99993439).abs() < 1e-8);
    }

    #[test]
    fn effective_bandwidth_floor() {
        let l = LinkModel { bandwidth: 10.0, ..LinkModel::default() };
        assert_eq!(effective_bandwidth(&l, 1.0), 10.0);
        assert_eq!(effective_bandwidth(&l, 0.5), 5.0);
        assert_eq!(effective_bandwidth(&l, 0.05), 1.0);
    }

    #[test]
    fn signal_loss_shape() {
        let m = LossModel::default();
        assert_eq!(m.frame_loss(1.0), 0.0);
        assert!((m.frame_loss(0.0) - 0.9).abs() < 1e-12);
        assert!((m.frame_loss(0.5) - 0.225).abs() < 1e-12);
    }

    #[test]
    fn delay_components_add_up() {
        let l = LinkModel {
            base_delay_ms: 5.0,
            jitter_ms: 0.0,
            bandwidth: 2.0,
            per_retry_delay_ms: 2.0,
            ..lossy(0.5, 7)
        };
        // u = 0.2 → floor(ln 0.2 / ln 0.5) = 2 failures → 3 attempts.
        let o = outcome_from_draws(&l, 1.0, 1.0, 0.2, 0.5);
        assert_eq!(o.attempts, 3);
        assert_eq!(o.total_delay_ms, 5.0 + 4.0 + 0.5);
        assert_eq!(o.occupancy_ms, 1.5);
    }

    #[test]
    fn same_draw_sequence_whatever_the_retry_limit() {
        let mut a = ChaCha8Rng::seed_from_u64(9);
        let mut b = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..1000 {
            let x = transmit(&lossy(0.3, 2), 1.0, &mut a);
            let y = transmit(&lossy(0.3, 9), 1.0, &mut b);
            if x.delivered {
                assert_eq!(x, y);
            }
        }
    }

    #[test]
    fn broadcast_skips_sender_and_shares_serialization() {
        let l = LinkModel { jitter_ms: 0.0, loss: LossModel::Constant { p: 0.0 }, ..LinkModel::default() };
        let (rx, occ) = broadcast_deliver(&l, 1, &[1.0; 4], 1.0, &mut ChaCha8Rng::seed_from_u64(3));
        assert_eq!(rx.iter().map(|r| r.listener).collect::<Vec<_>>(), vec![0, 2, 3]);
        assert!(rx.iter().all(|r| r.outcome.delivered && r.outcome.total_delay_ms == rx[0].outcome.total_delay_ms));
        assert_eq!(occ, l.serialization_ms(1.0));
    }

    #[test]
    fn validation() {
        LinkModel::default().validate().unwrap();
        assert_eq!(LinkModel { bandwidth: 0.0, ..LinkModel::default() }.validate(), Err(LinkModelError::Bandwidth));
        assert_eq!(lossy(1.5, 0).validate(), Err(LinkModelError::Loss));
    }

    #[test]
    fn serde_shape() {
        let l: LinkModel = serde_json::from_str(
            r#"{"base_delay_ms": 2, "loss": {"kind": "constant", "p": 0.3}, "retry_limit": 0}"#,
        )
        .unwrap();
        assert_eq!(l.loss, LossModel::Constant { p: 0.3 });
        assert_eq!(l.bandwidth, LinkModel::default().bandwidth);
    }

    proptest! {
        #[test]
        fn outcome_invariants(p in 0.0f64..=1.0, r in 0u32..13, u in 0.0f64..1.0, v in 0.0f64..1.0, q in 0.0f64..=1.0) {
            let o = outcome_from_draws(&lossy(p, r), q, 1.0, u, v);
            prop_assert!(o.attempts >= 1 && o.attempts <= r + 1);
            if !o.delivered {
                prop_assert_eq!(o.attempts, r + 1);
            }
            prop_assert!(o.total_delay_ms >= 0.0);
        }

        #[test]
        fn delivery_monotone_in_quality(q1 in 0.0f64..=1.0, q2 in 0.0f64..=1.0, r in 0u32..13) {
            let l = LinkModel { retry_limit: r, ..LinkModel::default() };
            let (lo, hi) = if q1 < q2 { (q1, q2) } else { (q2, q1) };
            prop_assert!(delivery_probability(&l, lo) <= delivery_probability(&l, hi));
        }
    }
}
