//! Shared fixtures for the benchmarks.

use mhsim::{Data, Name, NodeId};

/// Deterministic hierarchical names: `/c{i % fanout}/v{i}/s{i % 64}`.
pub fn names(n: usize, fanout: usize) -> Vec<Name> {
    (0..n)
        .map(|i| format!("/c{}/v{}/s{}", i % fanout, i, i % 64).parse().expect("valid name"))
        .collect()
}

pub fn data(name: &Name) -> Data {
    Data { name: name.clone(), payload_size: 4096, origin: NodeId(0) }
}
