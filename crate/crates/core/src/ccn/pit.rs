//! Pending Interest Table.
//!
//! Maps a pending name to the faces that asked for it (downstream) and the
//! faces it was forwarded on (upstream). Nonces seen for the name make
//! looping copies detectable. An entry leaves the table exactly once: either
//! consumed by the first matching Data or expired.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use super::face::FaceId;
use super::name::Name;
use super::packet::Interest;
use crate::time::{SimDuration, SimTime};

pub const DEFAULT_PIT_LIFETIME_MS: f64 = 4000.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InterestDisposition {
    /// No live entry existed; a fresh one was created and the interest must be forwarded.
    CacheMissNew,
    /// A live entry absorbed the interest; nothing goes upstream.
    Aggregated,
    /// The nonce was already seen for this name: a looping or duplicated copy.
    DuplicateNonce,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UpstreamRecord {
    pub face: FaceId,
    pub sent_at: SimTime,
    /// Set once the record has been accounted as answered or timed out.
    pub settled: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PitEntry {
    /// Unique per table; lets timers detect that "their" entry is gone.
    pub id: u64,
    pub name: Name,
    /// Nonce of the interest that created the entry; reused by staggered re-sends.
    pub nonce: u64,
    pub downstream: Vec<FaceId>,
    pub upstream: Vec<UpstreamRecord>,
    pub nonces_seen: Vec<u64>,
    pub created_at: SimTime,
    pub expiry: SimTime,
}

impl PitEntry {
    pub fn is_live(&self, now: SimTime) -> bool {
        self.expiry > now
    }

    pub fn has_upstream(&self, face: FaceId) -> bool {
        self.upstream.iter().any(|r| r.face == face)
    }

    pub fn upstream_mut(&mut self, face: FaceId) -> Option<&mut UpstreamRecord> {
        self.upstream.iter_mut().find(|r| r.face == face)
    }

    pub fn add_upstream(&mut self, face: FaceId, now: SimTime) {
        if let Some(r) = self.upstream_mut(face) {
            r.sent_at = now;
            r.settled = false;
        } else {
            self.upstream.push(UpstreamRecord { face, sent_at: now, settled: false });
        }
    }

    fn add_downstream(&mut self, face: FaceId) {
        if let Err(at) = self.downstream.binary_search(&face) {
            self.downstream.insert(at, face);
        }
    }
}

#[derive(Debug, Clone)]
pub struct Pit {
    lifetime: SimDuration,
    entries: BTreeMap<Name, PitEntry>,
    expiries: BinaryHeap<Reverse<(SimTime, u64, Name)>>,
    next_id: u64,
}

impl Default for Pit {
    fn default() -> Self {
        Pit::new(SimDuration::from_ms(DEFAULT_PIT_LIFETIME_MS))
    }
}

impl Pit {
    pub fn new(lifetime: SimDuration) -> Self {
        Pit { lifetime, entries: BTreeMap::new(), expiries: BinaryHeap::new(), next_id: 1 }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, name: &Name) -> Option<&PitEntry> {
        self.entries.get(name)
    }

    pub fn get_mut(&mut self, name: &Name) -> Option<&mut PitEntry> {
        self.entries.get_mut(name)
    }

    /// The entry for `name` if it is still the incarnation with `id`.
    pub fn get_by_id_mut(&mut self, name: &Name, id: u64) -> Option<&mut PitEntry> {
        self.entries.get_mut(name).filter(|e| e.id == id)
    }

    pub fn remove(&mut self, name: &Name) -> Option<PitEntry> {
        self.entries.remove(name)
    }

    /// Classifies an interest that missed the Content Store.
    ///
    /// Callers run [`Pit::expire`] first so stale entries are reported as
    /// timeouts instead of being silently replaced.
    pub fn process_incoming_interest(
        &mut self,
        interest: &Interest,
        from: FaceId,
        now: SimTime,
    ) -> InterestDisposition {
        let lifetime = interest.lifetime.unwrap_or(self.lifetime);
        if let Some(entry) = self.entries.get_mut(&interest.name).filter(|e| e.is_live(now)) {
            if entry.nonces_seen.contains(&interest.nonce) {
                return InterestDisposition::DuplicateNonce;
            }
            entry.nonces_seen.push(interest.nonce);
            // A face we forwarded on never becomes downstream of the same entry.
            if !entry.has_upstream(from) {
                entry.add_downstream(from);
            }
            let expiry = now + lifetime;
            if expiry > entry.expiry {
                entry.expiry = expiry;
                self.expiries.push(Reverse((expiry, entry.id, interest.name.clone())));
            }
            return InterestDisposition::Aggregated;
        }
        let id = self.next_id;
        self.next_id += 1;
        let expiry = now + lifetime;
        let entry = PitEntry {
            id,
            name: interest.name.clone(),
            nonce: interest.nonce,
            downstream: vec![from],
            upstream: Vec::new(),
            nonces_seen: vec![interest.nonce],
            created_at: now,
            expiry,
        };
        self.entries.insert(interest.name.clone(), entry);
        self.expiries.push(Reverse((expiry, id, interest.name.clone())));
        InterestDisposition::CacheMissNew
    }

    /// Consumes the live entry matching a Data name. `None` means the Data is
    /// unsolicited (or late) and must be dropped.
    pub fn satisfy(&mut self, name: &Name, now: SimTime) -> Option<PitEntry> {
        match self.entries.get(name) {
            Some(e) if e.is_live(now) => self.entries.remove(name),
            _ => None,
        }
    }

    /// Convenience form returning only the downstream faces.
    pub fn satisfy_faces(&mut self, name: &Name, now: SimTime) -> Vec<FaceId> {
        self.satisfy(name, now).map(|e| e.downstream).unwrap_or_default()
    }

    /// Removes and returns every entry whose expiry is at or before `now`,
    /// ordered by expiry time.
    pub fn expire(&mut self, now: SimTime) -> Vec<PitEntry> {
        let mut out = Vec::new();
        while let Some(Reverse((at, id, _))) = self.expiries.peek() {
            if *at > now {
                break;
            }
            let (at, id) = (*at, *id);
            let Reverse((_, _, name)) = self.expiries.pop().expect("peeked");
            let expired = matches!(self.entries.get(&name), Some(e) if e.id == id && e.expiry <= now && e.expiry == at);
            if expired {
                out.push(self.entries.remove(&name).expect("checked"));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn interest(name: &str, nonce: u64) -> Interest {
        Interest::new(name.parse().unwrap(), nonce, SimTime::ZERO)
    }

    fn t(ms: f64) -> SimTime {
        SimTime::from_ms(ms)
    }

    fn pit() -> Pit {
        Pit::new(SimDuration::from_ms(1000.0))
    }

    #[test]
    fn first_interest_creates_entry() {
        let mut p = pit();
        let d = p.process_incoming_interest(&interest("/a/s0", 1), FaceId(1), t(0.0));
        assert_eq!(d, InterestDisposition::CacheMissNew);
        let e = p.get(&"/a/s0".parse().unwrap()).unwrap();
        assert_eq!(e.expiry, t(1000.0));
        assert_eq!(e.downstream, vec![FaceId(1)]);
    }

    #[test]
    fn new_nonce_aggregates_and_grows_downstream() {
        let mut p = pit();
        p.process_incoming_interest(&interest("/a/s0", 1), FaceId(1), t(0.0));
        let d = p.process_incoming_interest(&interest("/a/s0", 2), FaceId(4), t(5.0));
        assert_eq!(d, InterestDisposition::Aggregated);
        let e = p.get(&"/a/s0".parse().unwrap()).unwrap();
        assert_eq!(e.downstream, vec![FaceId(1), FaceId(4)]);
        assert!(e.upstream.is_empty());
    }

    #[test]
    fn repeated_nonce_is_duplicate() {
        let mut p = pit();
        p.process_incoming_interest(&interest("/a/s0", 7), FaceId(1), t(0.0));
        let d = p.process_incoming_interest(&interest("/a/s0", 7), FaceId(2), t(1.0));
        assert_eq!(d, InterestDisposition::DuplicateNonce);
        assert_eq!(p.get(&"/a/s0".parse().unwrap()).unwrap().downstream, vec![FaceId(1)]);
    }

    #[test]
    fn aggregation_never_adds_an_upstream_face() {
        let mut p = pit();
        let name = "/a/s0".parse().unwrap();
        p.process_incoming_interest(&interest("/a/s0", 1), FaceId(1), t(0.0));
        p.get_mut(&name).unwrap().add_upstream(FaceId(2), t(0.0));
        p.process_incoming_interest(&interest("/a/s0", 2), FaceId(2), t(1.0));
        assert_eq!(p.get(&name).unwrap().downstream, vec![FaceId(1)]);
    }

    #[test]
    fn satisfy_returns_downstream_once() {
        let mut p = pit();
        p.process_incoming_interest(&interest("/a/s0", 1), FaceId(2), t(0.0));
        p.process_incoming_interest(&interest("/a/s0", 2), FaceId(5), t(0.0));
        let name = "/a/s0".parse().unwrap();
        assert_eq!(p.satisfy_faces(&name, t(10.0)), vec![FaceId(2), FaceId(5)]);
        assert!(p.is_empty());
        assert!(p.satisfy_faces(&name, t(11.0)).is_empty());
    }

    #[test]
    fn unsolicited_data_matches_nothing() {
        let mut p = pit();
        assert!(p.satisfy(&"/zzz".parse().unwrap(), t(0.0)).is_none());
    }

    #[test]
    fn expiry_boundary_is_inclusive() {
        let mut p = pit();
        p.process_incoming_interest(&interest("/a", 1), FaceId(1), t(0.0));
        assert!(p.expire(t(999.0)).is_empty());
        let gone = p.expire(t(1000.0));
        assert_eq!(gone.len(), 1);
        assert!(p.is_empty());
    }

    #[test]
    fn expired_entry_cannot_be_satisfied() {
        let mut p = pit();
        p.process_incoming_interest(&interest("/a", 1), FaceId(1), t(0.0));
        assert!(p.satisfy(&"/a".parse().unwrap(), t(1000.0)).is_none());
        assert_eq!(p.expire(t(1000.0)).len(), 1);
    }

    #[test]
    fn expire_filters_exactly_the_stale_entries() {
        let mut p = pit();
        p.process_incoming_interest(&interest("/a", 1), FaceId(1), t(0.0));
        p.process_incoming_interest(&interest("/b", 2), FaceId(1), t(300.0));
        p.process_incoming_interest(&interest("/c", 3), FaceId(1), t(900.0));
        // Filter oracle: entries with expiry <= now.
        let now = t(1400.0);
        let mut expected: Vec<Name> = ["/a", "/b", "/c"]
            .iter()
            .map(|s| s.parse::<Name>().unwrap())
            .filter(|n| p.get(n).unwrap().expiry <= now)
            .collect();
        expected.sort();
        let mut got: Vec<Name> = p.expire(now).into_iter().map(|e| e.name).collect();
        got.sort();
        assert_eq!(got.len(), 2);
        assert_eq!(got, expected);
        assert_eq!(p.len(), 1);
    }

    #[test]
    fn aggregation_extends_expiry() {
        let mut p = pit();
        p.process_incoming_interest(&interest("/a", 1), FaceId(1), t(0.0));
        p.process_incoming_interest(&interest("/a", 2), FaceId(2), t(500.0));
        assert!(p.expire(t(1000.0)).is_empty());
        assert_eq!(p.expire(t(1500.0)).len(), 1);
    }

    #[test]
    fn interest_lifetime_overrides_table_default() {
        let mut p = pit();
        let i = interest("/a", 1).with_lifetime(SimDuration::from_ms(50.0));
        p.process_incoming_interest(&i, FaceId(1), t(0.0));
        assert_eq!(p.expire(t(50.0)).len(), 1);
    }
}
