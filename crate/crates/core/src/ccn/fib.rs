//! Forwarding Information Base: name prefixes to ordered next-hop faces,
//! looked up by longest component-wise prefix match over a component trie.

use std::collections::BTreeMap;

use thiserror::Error;

use super::face::FaceId;
use super::name::{Component, Name};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FibEntry {
    pub prefix: Name,
    pub nexthops: Vec<FaceId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FibError {
    #[error("FIB entry {0} has no next hops")]
    NoNexthops(Name),
    #[error("FIB entry {prefix} lists face {face} twice")]
    DuplicateNexthop { prefix: Name, face: FaceId },
}

impl FibEntry {
    pub fn new(prefix: Name, nexthops: Vec<FaceId>) -> Result<Self, FibError> {
        if nexthops.is_empty() {
            return Err(FibError::NoNexthops(prefix));
        }
        for (i, f) in nexthops.iter().enumerate() {
            if nexthops[..i].contains(f) {
                return Err(FibError::DuplicateNexthop { prefix, face: *f });
            }
        }
        Ok(FibEntry { prefix, nexthops })
    }
}

#[derive(Debug, Clone, Default)]
struct TrieNode {
    entry: Option<usize>,
    children: BTreeMap<Component, TrieNode>,
}

#[derive(Debug, Clone, Default)]
pub struct Fib {
    entries: Vec<FibEntry>,
    root: TrieNode,
}

impl Fib {
    pub fn new() -> Self {
        Fib::default()
    }

    pub fn from_entries(entries: impl IntoIterator<Item = FibEntry>) -> Self {
        let mut fib = Fib::new();
        for e in entries {
            fib.insert(e);
        }
        fib
    }

    /// Inserts or replaces the entry for `entry.prefix`.
    pub fn insert(&mut self, entry: FibEntry) {
        let mut node = &mut self.root;
        for c in entry.prefix.components() {
            node = node.children.entry(c.clone()).or_default();
        }
        match node.entry {
            Some(i) => self.entries[i] = entry,
            None => {
                node.entry = Some(self.entries.len());
                self.entries.push(entry);
            }
        }
    }

    pub fn entries(&self) -> &[FibEntry] {
        &self.entries
    }

    pub fn longest_prefix_match(&self, name: &Name) -> Option<&FibEntry> {
        let mut node = &self.root;
        let mut best = node.entry;
        for c in name.components() {
            match node.children.get(c) {
                Some(child) => {
                    node = child;
                    if node.entry.is_some() {
                        best = node.entry;
                    }
                }
                None => break,
            }
        }
        best.map(|i| &self.entries[i])
    }
}

/// Longest-prefix match over a plain list of entries with unique prefixes.
pub fn fib_longest_prefix_match<'a>(fib: &'a [FibEntry], name: &Name) -> Option<&'a FibEntry> {
    let trie = Fib::from_entries(fib.iter().cloned());
    let prefix = trie.longest_prefix_match(name)?.prefix.clone();
    fib.iter().find(|e| e.prefix == prefix)
}
