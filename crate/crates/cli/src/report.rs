use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

pub const REPORT_VERSION: u32 = 1;

/// Machine-readable outcome of one command.
#[derive(Debug, Serialize)]
pub struct Report {
    pub version: u32,
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub decision: Value,
    pub witnesses: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<BTreeMap<String, f64>>,
}

/// What a command hands back to the dispatcher.
pub struct Outcome {
    pub lines: Vec<String>,
    pub decision: Value,
    pub witnesses: Vec<String>,
    /// The yes/no answer `--expect` is compared against.
    pub verdict: Option<bool>,
    pub timings: BTreeMap<String, f64>,
}

impl Outcome {
    pub fn new(decision: Value) -> Self {
        Outcome { lines: Vec::new(), decision, witnesses: Vec::new(), verdict: None, timings: BTreeMap::new() }
    }

    pub fn verdict(mut self, v: bool) -> Self {
        self.verdict = Some(v);
        self
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    pub fn witness(&mut self, s: impl Into<String>) {
        let s = s.into();
        self.lines.push(format!("witness: {s}"));
        self.witnesses.push(s);
    }
}
