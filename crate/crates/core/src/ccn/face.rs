use std::fmt;

use serde::{Deserialize, Serialize};

/// Per-node face identifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FaceId(pub u16);

impl fmt::Display for FaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FaceKind {
    PointToPoint,
    Broadcast,
    /// The local application (consumer) attached to a node.
    Local,
}

/// A generalized interface: a link endpoint, a broadcast medium, or an application.
#[derive(Clone, Debug, PartialEq)]
pub struct Face {
    pub id: FaceId,
    pub label: String,
    /// Per-interest cost weight, e.g. 0.5 Bluetooth, 1 WiFi, 3 LTE.
    pub cost: f64,
    pub kind: FaceKind,
}

impl Face {
    pub fn new(id: FaceId, label: impl Into<String>, cost: f64, kind: FaceKind) -> Self {
        debug_assert!(cost >= 0.0, "face cost must be non-negative");
        Face { id, label: label.into(), cost, kind }
    }
}
