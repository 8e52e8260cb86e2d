//! Run configuration and self-contained JSON reports.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;

/// A named pass/fail assertion recorded in a report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: detail.into() }
    }
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub seed: u64,
    /// Cap on search nodes for exhaustive tuple searches.
    pub tuple_budget: u64,
    pub mc_samples: u64,
    pub lp_max_iterations: usize,
    pub tolerance: f64,
    pub output_dir: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0x5eed_cafe,
            tuple_budget: crate::connectivity::DEFAULT_TUPLE_BUDGET,
            mc_samples: 100_000,
            lp_max_iterations: crate::lp::LpOptions::default().max_iterations,
            tolerance: crate::fourier::TOL,
            output_dir: None,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub config: RunConfig,
    /// Input name → SHA-256 of its canonical bytes.
    pub inputs: BTreeMap<String, String>,
    pub results: serde_json::Value,
    pub assertions: Vec<Check>,
    pub passed: bool,
    /// Wall-clock milliseconds per phase; excluded from reproducibility comparisons.
    pub timings: BTreeMap<String, f64>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Report {
    pub fn new(command: impl Into<String>, config: RunConfig) -> Self {
        Report {
            command: command.into(),
            config,
            inputs: BTreeMap::new(),
            results: serde_json::Value::Null,
            assertions: Vec::new(),
            passed: true,
            timings: BTreeMap::new(),
        }
    }

    pub fn add_input(&mut self, name: impl Into<String>, bytes: &[u8]) {
        self.inputs.insert(name.into(), sha256_hex(bytes));
    }

    pub fn set_results<T: Serialize>(&mut self, results: &T) -> Result<()> {
        self.results = serde_json::to_value(results)?;
        Ok(())
    }

    pub fn assert(&mut self, check: Check) {
        self.passed &= check.passed;
        self.assertions.push(check);
    }

    pub fn extend_assertions(&mut self, checks: impl IntoIterator<Item = Check>) {
        for c in checks {
            self.assert(c);
        }
    }

    pub fn time(&mut self, phase: impl Into<String>, millis: f64) {
        self.timings.insert(phase.into(), millis);
    }

    /// Everything except timings, serialized deterministically.
    pub fn result_section(&self) -> Result<String> {
        #[derive(Serialize)]
        struct Stable<'a> {
            command: &'a str,
            config: &'a RunConfig,
            inputs: &'a BTreeMap<String, String>,
            results: &'a serde_json::Value,
            assertions: &'a [Check],
            passed: bool,
        }
        Ok(serde_json::to_string(&Stable {
            command: &self.command,
            config: &self.config,
            inputs: &self.inputs,
            results: &self.results,
            assertions: &self.assertions,
            passed: self.passed,
        })?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}
