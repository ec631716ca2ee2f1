//! Run reports: one JSON document per invocation, with exact values as
//! decimal strings and a verdict list that decides the exit code.

use realbez::bounds::Profile;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub bound: String,
    pub actual: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile: Option<Profile>,
    /// Named exact bound values, decimal strings.
    pub bounds: BTreeMap<String, String>,
    /// Named exact or flagged actual counts.
    pub actuals: BTreeMap<String, String>,
    pub flags: BTreeMap<String, bool>,
    pub verdicts: Vec<Verdict>,
    /// Typed payload of the subcommand (per-tuple tables and the like).
    pub details: serde_json::Value,
    pub timing_ms: u128,
}

impl RunReport {
    pub fn new(command: &str, seed: u64) -> Self {
        RunReport {
            command: command.to_string(),
            seed,
            profile: None,
            bounds: BTreeMap::new(),
            actuals: BTreeMap::new(),
            flags: BTreeMap::new(),
            verdicts: Vec::new(),
            details: serde_json::Value::Null,
            timing_ms: 0,
        }
    }

    pub fn verdict(&mut self, name: &str, pass: bool, bound: impl ToString, actual: impl ToString) {
        self.verdicts.push(Verdict {
            name: name.to_string(),
            pass,
            bound: bound.to_string(),
            actual: actual.to_string(),
        });
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn print_human(&self) {
        println!("command: {}", self.command);
        println!("seed: {}", self.seed);
        for (k, v) in &self.bounds {
            println!("bound {k} = {v}");
        }
        for (k, v) in &self.actuals {
            println!("actual {k} = {v}");
        }
        for (k, v) in &self.flags {
            println!("flag {k} = {v}");
        }
        for v in &self.verdicts {
            let mark = if v.pass { "PASS" } else { "FAIL" };
            println!("[{mark}] {}: bound {} vs actual {}", v.name, v.bound, v.actual);
        }
        println!("elapsed: {} ms", self.timing_ms);
    }
}
