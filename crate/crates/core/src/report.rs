//! The JSON report shared by every property checker.

use serde::{Serialize, Serializer};
use serde_json::{Map, Value};

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub pass: bool,
    /// Largest violation measured by the checker; may be `+∞`.
    #[serde(serialize_with = "serialize_extended")]
    pub max_gap: f64,
    pub witness: Value,
    pub trials: usize,
    pub seed: u64,
    #[serde(flatten)]
    pub extras: Map<String, Value>,
}

impl CheckReport {
    pub fn new(check: &str, pass: bool, max_gap: f64, witness: Value, trials: usize, seed: u64) -> Self {
        CheckReport {
            check: check.to_string(),
            pass,
            max_gap,
            witness,
            trials,
            seed,
            extras: Map::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.extras.insert(key.to_string(), value.into());
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// JSON for a real that may be infinite: a number, or `"inf"` / `"-inf"`.
pub fn extended_value(x: f64) -> Value {
    if x == f64::INFINITY {
        Value::from("inf")
    } else if x == f64::NEG_INFINITY {
        Value::from("-inf")
    } else if x.is_nan() {
        Value::from("nan")
    } else {
        Value::from(x)
    }
}

pub fn serialize_extended<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    extended_value(*x).serialize(s)
}
