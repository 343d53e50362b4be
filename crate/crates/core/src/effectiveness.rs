//! Per-user effectiveness: HR, MRR, P, R, MAP and NDCG at cutoff `k`.
//!
//! MAP and NDCG normalise by `min(|R*_u|, k)`, so a user whose relevant items
//! fill the top of the list scores 1 even when `|R*_u| < k`.

use crate::error::{invalid, Error, Result};
use crate::model::{contains_sorted, Qrels, RunSet};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EffMeasure {
    #[serde(rename = "HR")]
    Hr,
    #[serde(rename = "MRR")]
    Mrr,
    P,
    R,
    #[serde(rename = "MAP")]
    Map,
    #[serde(rename = "NDCG")]
    Ndcg,
}

impl EffMeasure {
    pub const ALL: [EffMeasure; 6] = [
        EffMeasure::Hr,
        EffMeasure::Mrr,
        EffMeasure::P,
        EffMeasure::R,
        EffMeasure::Map,
        EffMeasure::Ndcg,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EffMeasure::Hr => "HR",
            EffMeasure::Mrr => "MRR",
            EffMeasure::P => "P",
            EffMeasure::R => "R",
            EffMeasure::Map => "MAP",
            EffMeasure::Ndcg => "NDCG",
        }
    }
}

impl fmt::Display for EffMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EffMeasure {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        EffMeasure::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| invalid("measure", format!("unknown effectiveness measure {s}")))
    }
}

/// Scores for the evaluable users of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerUserScores {
    pub measure: String,
    pub users: Vec<String>,
    pub values: Vec<f64>,
    /// Judged users with no relevant item; they carry no score.
    pub excluded: Vec<String>,
    /// Judged users the run has no list for; they score 0.
    pub missing_from_run: Vec<String>,
}

impl PerUserScores {
    pub fn from_values(measure: &str, values: Vec<f64>) -> Self {
        PerUserScores {
            measure: measure.to_string(),
            users: crate::model::synthetic_user_ids(values.len()),
            values,
            excluded: Vec::new(),
            missing_from_run: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn discount(rank: usize) -> f64 {
    1.0 / ((rank + 1) as f64).log2()
}

/// Score one ranked list against a sorted relevant set.
pub fn score_list(measure: EffMeasure, list: &[usize], relevant: &[usize], k: usize) -> f64 {
    if relevant.is_empty() || k == 0 {
        return 0.0;
    }
    let top = &list[..k.min(list.len())];
    let ideal = relevant.len().min(k);
    match measure {
        EffMeasure::Hr => {
            if top.iter().any(|&i| contains_sorted(relevant, i)) {
                1.0
            } else {
                0.0
            }
        }
        EffMeasure::Mrr => top
            .iter()
            .position(|&i| contains_sorted(relevant, i))
            .map_or(0.0, |p| 1.0 / (p + 1) as f64),
        EffMeasure::P => hits(top, relevant) as f64 / k as f64,
        EffMeasure::R => hits(top, relevant) as f64 / relevant.len() as f64,
        EffMeasure::Map => {
            let mut found = 0usize;
            let mut sum = 0.0;
            for (p, &i) in top.iter().enumerate() {
                if contains_sorted(relevant, i) {
                    found += 1;
                    sum += found as f64 / (p + 1) as f64;
                }
            }
            sum / ideal as f64
        }
        EffMeasure::Ndcg => {
            let dcg: f64 = top
                .iter()
                .enumerate()
                .filter(|(_, &i)| contains_sorted(relevant, i))
                .map(|(p, _)| discount(p + 1))
                .sum();
            let idcg: f64 = (1..=ideal).map(discount).sum();
            dcg / idcg
        }
    }
}

fn hits(top: &[usize], relevant: &[usize]) -> usize {
    top.iter().filter(|&&i| contains_sorted(relevant, i)).count()
}

/// Per-user scores over judged users with at least one relevant item.
pub fn per_user_effectiveness(measure: EffMeasure, run: &RunSet, qrels: &Qrels, k: usize) -> Result<PerUserScores> {
    if k == 0 {
        return Err(invalid("k", "must be positive"));
    }
    let mut out = PerUserScores {
        measure: measure.name().to_string(),
        users: Vec::new(),
        values: Vec::new(),
        excluded: Vec::new(),
        missing_from_run: Vec::new(),
    };
    for (qu, id) in qrels.users().iter().enumerate() {
        let rel = qrels.relevant(qu);
        if rel.is_empty() {
            out.excluded.push(id.clone());
            continue;
        }
        let value = match run.user_index(id) {
            Some(ru) => score_list(measure, run.list(ru), rel, k),
            None => {
                out.missing_from_run.push(id.clone());
                0.0
            }
        };
        out.users.push(id.clone());
        out.values.push(value);
    }
    if out.values.is_empty() {
        return Err(Error::NoEvaluableUsers);
    }
    Ok(out)
}

/// Arithmetic mean over included users, with the user count.
pub fn mean_effectiveness(scores: &PerUserScores) -> Result<(f64, usize)> {
    if scores.values.is_empty() {
        return Err(Error::Empty("score map"));
    }
    let n = scores.values.len();
    Ok((scores.values.iter().sum::<f64>() / n as f64, n))
}
