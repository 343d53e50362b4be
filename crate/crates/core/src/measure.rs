//! Result types shared by all measure families.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Which end of a measure's range is the fair (or better) one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Higher,
    Lower,
}

impl Direction {
    /// True when `a` is strictly better than `b` under this direction.
    pub fn better(self, a: f64, b: f64) -> bool {
        match self {
            Direction::Higher => a > b,
            Direction::Lower => a < b,
        }
    }

    /// Sign that maps scores onto a higher-is-better axis.
    pub fn sign(self) -> f64 {
        match self {
            Direction::Higher => 1.0,
            Direction::Lower => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// The formula as originally published.
    Original,
    /// Entropy restricted to recommended items.
    Defined,
    /// Min-max corrected against achievable bounds.
    Corrected,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Variant::Original => "original",
            Variant::Defined => "defined",
            Variant::Corrected => "corrected",
        };
        f.write_str(s)
    }
}

/// Machine-readable warning attached to a score.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "code", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Warning {
    Undefined { reason: String },
    AlwaysFair,
    Constant,
    SingleRelevantUsers { count: usize },
    ExcludedUsers { count: usize, reason: String },
    Degenerate { reason: String },
}

impl Warning {
    pub fn code(&self) -> &'static str {
        match self {
            Warning::Undefined { .. } => "UNDEFINED",
            Warning::AlwaysFair => "ALWAYS_FAIR",
            Warning::Constant => "CONSTANT",
            Warning::SingleRelevantUsers { .. } => "SINGLE_RELEVANT_USERS",
            Warning::ExcludedUsers { .. } => "EXCLUDED_USERS",
            Warning::Degenerate { .. } => "DEGENERATE",
        }
    }

    pub(crate) fn undefined(reason: impl Into<String>) -> Self {
        Warning::Undefined { reason: reason.into() }
    }
}

/// A single measure score. `value` is `None` when the formula is incomputable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureResult {
    pub measure: String,
    pub variant: Variant,
    pub direction: Direction,
    pub value: Option<f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<Warning>,
    /// Per-user scores for measures that average over users.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_user: Option<Vec<(String, f64)>>,
}

impl MeasureResult {
    pub fn new(measure: &str, variant: Variant, direction: Direction, value: f64) -> Self {
        MeasureResult {
            measure: measure.to_string(),
            variant,
            direction,
            value: Some(value),
            params: BTreeMap::new(),
            warnings: Vec::new(),
            per_user: None,
        }
    }

    pub fn undefined(measure: &str, variant: Variant, direction: Direction, reason: impl Into<String>) -> Self {
        let mut r = MeasureResult::new(measure, variant, direction, f64::NAN);
        r.value = None;
        r.warnings.push(Warning::undefined(reason));
        r
    }

    pub fn param(mut self, name: &str, value: f64) -> Self {
        self.params.insert(name.to_string(), value);
        self
    }

    pub fn warn(mut self, w: Warning) -> Self {
        self.warnings.push(w);
        self
    }

    pub fn is_undefined(&self) -> bool {
        self.value.is_none()
    }

    pub fn has_warning(&self, code: &str) -> bool {
        self.warnings.iter().any(|w| w.code() == code)
    }

    /// The score, or NaN when undefined.
    pub fn score(&self) -> f64 {
        self.value.unwrap_or(f64::NAN)
    }
}
