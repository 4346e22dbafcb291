//! Pass/fail verdicts with reproducible witnesses.

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub property: String,
    pub result: Outcome,
    pub witness: Value,
    pub trials: u64,
    pub seed: u64,
}

impl Verdict {
    pub fn pass(property: impl Into<String>, trials: u64, seed: u64) -> Verdict {
        Verdict { property: property.into(), result: Outcome::Pass, witness: Value::Null, trials, seed }
    }

    pub fn fail(property: impl Into<String>, witness: Value, trials: u64, seed: u64) -> Verdict {
        Verdict { property: property.into(), result: Outcome::Fail, witness, trials, seed }
    }

    pub fn with_witness(mut self, witness: Value) -> Verdict {
        self.witness = witness;
        self
    }

    pub fn passed(&self) -> bool {
        self.result == Outcome::Pass
    }
}

/// Why a candidate was rejected, with the input that shows it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Refutation {
    pub reason: String,
    pub witness: Value,
}

impl std::fmt::Display for Refutation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} (witness: {})", self.reason, self.witness)
    }
}

impl std::error::Error for Refutation {}
