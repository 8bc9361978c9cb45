//! Forwarding-plane data structures of a CCN node.

pub mod cs;
pub mod face;
pub mod fib;
pub mod name;
pub mod packet;
pub mod pit;

pub use cs::{ContentStore, InsertOutcome};
pub use face::{Face, FaceId, FaceKind};
pub use fib::{fib_longest_prefix_match, Fib, FibEntry, FibError};
pub use name::{Component, Name, NameError};
pub use packet::{Data, Interest, NodeId, Packet};
pub use pit::{InterestDisposition, Pit, PitEntry, UpstreamRecord, DEFAULT_PIT_LIFETIME_MS};
