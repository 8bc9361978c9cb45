use std::fmt::Write;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TraceMode {
    /// No trace is produced.
    #[default]
    Off,
    /// Only the running hash of the event log is kept.
    Hash,
    /// The full log is kept in the report as well.
    Full,
}

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

/// Event log in the `t_us node event_kind detail` line format.
#[derive(Debug)]
pub(crate) struct Trace {
    mode: TraceMode,
    hash: u64,
    lines: Vec<String>,
    buf: String,
}

impl Trace {
    pub fn new(mode: TraceMode) -> Self {
        Trace { mode, hash: FNV_OFFSET, lines: Vec::new(), buf: String::new() }
    }

    pub fn enabled(&self) -> bool {
        self.mode != TraceMode::Off
    }

    pub fn record(&mut self, t_us: u64, node: &str, kind: &str, detail: std::fmt::Arguments<'_>) {
        if !self.enabled() {
            return;
        }
        self.buf.clear();
        let _ = write!(self.buf, "{t_us} {node} {kind} {detail}");
        for &b in self.buf.as_bytes().iter().chain(b"\n") {
            self.hash ^= u64::from(b);
            self.hash = self.hash.wrapping_mul(FNV_PRIME);
        }
        if self.mode == TraceMode::Full {
            self.lines.push(self.buf.clone());
        }
    }

    pub fn finish(self) -> (Option<u64>, Vec<String>) {
        match self.mode {
            TraceMode::Off => (None, Vec::new()),
            _ => (Some(self.hash), self.lines),
        }
    }
}
