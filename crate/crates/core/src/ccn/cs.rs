//! Content Store: an exact-name LRU cache of Data packets.

use std::collections::{BTreeMap, HashMap};

use super::name::Name;
use super::packet::Data;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InsertOutcome {
    Inserted { evicted: Option<Name> },
    /// Capacity is zero; nothing is stored.
    StoreDisabled,
}

impl InsertOutcome {
    pub fn evicted(&self) -> Option<&Name> {
        match self {
            InsertOutcome::Inserted { evicted } => evicted.as_ref(),
            InsertOutcome::StoreDisabled => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ContentStore {
    capacity: usize,
    clock: u64,
    // name -> recency stamp; stamp -> entry. The smallest stamp is the LRU entry.
    index: HashMap<Name, u64>,
    by_recency: BTreeMap<u64, Data>,
}

impl ContentStore {
    pub fn new(capacity: usize) -> Self {
        ContentStore { capacity, clock: 0, index: HashMap::new(), by_recency: BTreeMap::new() }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    pub fn contains(&self, name: &Name) -> bool {
        self.index.contains_key(name)
    }

    fn tick(&mut self) -> u64 {
        self.clock += 1;
        self.clock
    }

    /// Exact-name lookup. A hit becomes the most recently used entry.
    pub fn lookup(&mut self, name: &Name) -> Option<Data> {
        let stamp = *self.index.get(name)?;
        let data = self.by_recency.remove(&stamp).expect("index and recency map agree");
        let fresh = self.tick();
        self.index.insert(name.clone(), fresh);
        self.by_recency.insert(fresh, data.clone());
        Some(data)
    }

    pub fn insert(&mut self, data: Data) -> InsertOutcome {
        if self.capacity == 0 {
            return InsertOutcome::StoreDisabled;
        }
        let fresh = self.tick();
        if let Some(old) = self.index.insert(data.name.clone(), fresh) {
            self.by_recency.remove(&old);
            self.by_recency.insert(fresh, data);
            return InsertOutcome::Inserted { evicted: None };
        }
        self.by_recency.insert(fresh, data);
        let evicted = if self.index.len() > self.capacity {
            let (_, lru) = self.by_recency.pop_first().expect("store is over capacity");
            self.index.remove(&lru.name);
            Some(lru.name)
        } else {
            None
        };
        InsertOutcome::Inserted { evicted }
    }

    /// Names from least to most recently used.
    pub fn lru_order(&self) -> impl Iterator<Item = &Name> {
        self.by_recency.values().map(|d| &d.name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ccn::packet::NodeId;

    fn data(n: &str) -> Data {
        Data { name: n.parse().unwrap(), payload_size: 4096, origin: NodeId(0) }
    }

    fn name(n: &str) -> Name {
        n.parse().unwrap()
    }

    #[test]
    fn exact_hit_and_miss() {
        let mut cs = ContentStore::new(4);
        cs.insert(data("/a/s0"));
        assert_eq!(cs.lookup(&name("/a/s0")).map(|d| d.name), Some(name("/a/s0")));
        assert!(cs.lookup(&name("/a/s1")).is_none());
        assert!(cs.lookup(&name("/a")).is_none());
        assert_eq!(cs.len(), 1);
    }

    #[test]
    fn lookup_refreshes_recency() {
        let mut cs = ContentStore::new(2);
        cs.insert(data("/x"));
        cs.insert(data("/y"));
        cs.lookup(&name("/x"));
        let out = cs.insert(data("/z"));
        assert_eq!(out.evicted(), Some(&name("/y")));
        assert!(cs.contains(&name("/x")) && cs.contains(&name("/z")));
    }

    #[test]
    fn eviction_of_oldest() {
        let mut cs = ContentStore::new(2);
        assert_eq!(cs.insert(data("/a/s0")), InsertOutcome::Inserted { evicted: None });
        cs.insert(data("/b"));
        assert_eq!(cs.insert(data("/c")).evicted(), Some(&name("/a/s0")));
    }

    #[test]
    fn reinsert_refreshes_without_eviction() {
        let mut cs = ContentStore::new(2);
        cs.insert(data("/a"));
        cs.insert(data("/b"));
        assert_eq!(cs.insert(data("/b")), InsertOutcome::Inserted { evicted: None });
        assert_eq!(cs.lru_order().cloned().collect::<Vec<_>>(), vec![name("/a"), name("/b")]);
        cs.insert(data("/a"));
        assert_eq!(cs.lru_order().last(), Some(&name("/a")));
        assert_eq!(cs.len(), 2);
    }

    #[test]
    fn zero_capacity_disables_store() {
        let mut cs = ContentStore::new(0);
        assert_eq!(cs.insert(data("/a")), InsertOutcome::StoreDisabled);
        assert!(cs.is_empty());
        assert!(cs.lookup(&name("/a")).is_none());
    }
}
