//! Machine-readable verification reports.
//!
//! Every report serializes as
//! `{"check": name, "weight": k | null, "pass": bool, "details": {...}}`,
//! with `terms`, `seed` and `envelope_A` added by numerical checks. Keys are
//! emitted in sorted order so identical inputs give byte-identical output.

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub check: String,
    pub weight: Option<u32>,
    pub pass: bool,
    pub details: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub terms: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(rename = "envelope_A", skip_serializing_if = "Option::is_none")]
    pub envelope_a: Option<f64>,
}

impl Report {
    pub fn new(check: &str, weight: Option<u32>, pass: bool, details: Value) -> Self {
        Report {
            check: check.to_string(),
            weight,
            pass,
            details,
            terms: None,
            seed: None,
            envelope_a: None,
        }
    }

    pub fn to_json(&self) -> String {
        to_canonical_json(self)
    }
}

/// Compact JSON with object keys sorted.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("report values serialize");
    serde_json::to_string(&v).expect("json values serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn keys_are_sorted_and_optional_fields_skipped() {
        let r = Report::new("demo", Some(6), true, json!({"z": 1, "a": 2}));
        assert_eq!(
            r.to_json(),
            r#"{"check":"demo","details":{"a":2,"z":1},"pass":true,"weight":6}"#
        );
    }
}
