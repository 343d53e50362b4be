//! Canonical report emission.
//!
//! Reports are JSON with sorted keys and every float rounded to 12
//! significant digits, so identical inputs and configuration produce
//! byte-identical files.

use crate::error::Result;
use crate::measure::MeasureResult;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use std::fmt::Write as _;

pub const TOOL_NAME: &str = "recfair";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Round to 12 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

/// Shortest decimal form of `x` after rounding to 12 significant digits.
pub fn fmt_sig(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    let r = round_sig(x);
    if r == 0.0 {
        "0".into()
    } else {
        format!("{r}")
    }
}

/// Round every number in a JSON tree to 12 significant digits.
pub fn canonicalize(v: Value) -> Value {
    match v {
        Value::Number(n) => match n.as_f64() {
            Some(f) if n.is_f64() => serde_json::Number::from_f64(round_sig(f)).map_or(Value::Null, Value::Number),
            _ => Value::Number(n),
        },
        Value::Array(a) => Value::Array(a.into_iter().map(canonicalize).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, canonicalize(v))).collect()),
        other => other,
    }
}

/// Pretty canonical JSON of any serializable value.
pub fn to_canonical_json<T: Serialize>(value: &T) -> Result<String> {
    let v = canonicalize(serde_json::to_value(value)?);
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

/// Hex SHA-256 of the compact canonical JSON of a configuration.
pub fn config_hash<T: Serialize>(config: &T) -> Result<String> {
    let v = canonicalize(serde_json::to_value(config)?);
    let bytes = serde_json::to_vec(&v)?;
    let digest = Sha256::digest(&bytes);
    let mut hex = String::with_capacity(64);
    for b in digest.iter() {
        let _ = write!(hex, "{b:02x}");
    }
    Ok(hex)
}

/// Scores of one run with the configuration that produced them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub tool: String,
    pub version: String,
    pub config_hash: String,
    pub dataset: String,
    pub run: String,
    pub k: usize,
    pub measures: Vec<MeasureResult>,
}

impl MeasureReport {
    pub fn new<T: Serialize>(dataset: &str, run: &str, k: usize, config: &T) -> Result<Self> {
        Ok(MeasureReport {
            tool: TOOL_NAME.into(),
            version: TOOL_VERSION.into(),
            config_hash: config_hash(config)?,
            dataset: dataset.into(),
            run: run.into(),
            k,
            measures: Vec::new(),
        })
    }

    pub fn to_json(&self) -> Result<String> {
        to_canonical_json(self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Flat CSV: `measure,variant,direction,value,warnings`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("dataset,run,measure,variant,direction,value,warnings\n");
        for m in &self.measures {
            let codes: Vec<&str> = m.warnings.iter().map(|w| w.code()).collect();
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{}",
                self.dataset,
                self.run,
                m.measure,
                m.variant,
                serde_json::to_value(m.direction)
                    .ok()
                    .and_then(|v| v.as_str().map(str::to_string))
                    .unwrap_or_default(),
                m.value.map(fmt_sig).unwrap_or_default(),
                codes.join(";")
            );
        }
        s
    }

    /// The first result with this measure name.
    pub fn get(&self, measure: &str) -> Option<&MeasureResult> {
        self.measures.iter().find(|m| m.measure == measure)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{Direction, Variant, Warning};

    #[test]
    fn twelve_digits() {
        assert_eq!(fmt_sig(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_sig(2.0 / 3.0), "0.666666666667");
        assert_eq!(fmt_sig(0.5), "0.5");
        assert_eq!(fmt_sig(0.0), "0");
    }

    #[test]
    fn report_round_trip_and_hash() {
        let mut r = MeasureReport::new("d", "r", 10, &serde_json::json!({"k": 10})).unwrap();
        r.measures.push(
            MeasureResult::new("Jain", Variant::Corrected, Direction::Higher, 1.0 / 3.0).warn(Warning::AlwaysFair),
        );
        let json = r.to_json().unwrap();
        assert!(json.contains("0.333333333333"));
        assert!(json.contains("ALWAYS_FAIR"));
        let back = MeasureReport::from_json(&json).unwrap();
        assert_eq!(back.to_json().unwrap(), json);
        assert_eq!(r.config_hash.len(), 64);
        assert_ne!(r.config_hash, config_hash(&serde_json::json!({"k": 5})).unwrap());
        assert!(r.to_csv().contains("Jain,corrected,higher,0.333333333333,ALWAYS_FAIR"));
    }
}
