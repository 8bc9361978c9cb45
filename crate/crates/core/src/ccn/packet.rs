use serde::{Deserialize, Serialize};

use super::name::Name;
use crate::time::{SimDuration, SimTime};

/// Index of a node within one simulation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NodeId(pub u32);

/// A request for one named chunk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interest {
    pub name: Name,
    pub nonce: u64,
    pub hop_count: u32,
    pub created_at: SimTime,
    /// Interest lifetime; routers use their configured PIT lifetime when absent.
    pub lifetime: Option<SimDuration>,
}

impl Interest {
    pub fn new(name: Name, nonce: u64, created_at: SimTime) -> Self {
        Interest { name, nonce, hop_count: 0, created_at, lifetime: None }
    }

    pub fn with_lifetime(mut self, lifetime: SimDuration) -> Self {
        self.lifetime = Some(lifetime);
        self
    }
}

/// A response carrying one chunk back along the reverse interest path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Data {
    pub name: Name,
    pub payload_size: u32,
    /// Repository or cache that answered.
    pub origin: NodeId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Packet {
    Interest(Interest),
    Data(Data),
}

impl Packet {
    pub fn name(&self) -> &Name {
        match self {
            Packet::Interest(i) => &i.name,
            Packet::Data(d) => &d.name,
        }
    }
}
