//! Agreement between model rankings induced by different measures.

use crate::error::{invalid, Error, Result};
use crate::measure::Direction;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};
use std::collections::HashMap;
use std::fmt::Write as _;

/// Scores within this distance count as tied.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Rankings with `tau` at or above this are considered equivalent.
pub const EQUIVALENCE_THRESHOLD: f64 = 0.9;

/// Models ordered best first by one measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelRanking {
    pub measure: String,
    pub direction: Direction,
    /// `(model, score)`, best first; ties keep name order.
    pub models: Vec<(String, f64)>,
}

impl ModelRanking {
    pub fn new(measure: &str, direction: Direction, scores: Vec<(String, f64)>) -> Result<Self> {
        if scores.is_empty() {
            return Err(Error::Empty("models"));
        }
        if let Some((m, _)) = scores.iter().find(|(_, s)| !s.is_finite()) {
            return Err(invalid(
                "scores",
                format!("model {m} has no finite score for {measure}"),
            ));
        }
        let mut seen = HashMap::new();
        for (m, _) in &scores {
            if seen.insert(m.clone(), ()).is_some() {
                return Err(Error::DuplicateId(m.clone()));
            }
        }
        let mut models = scores;
        let sign = direction.sign();
        models.sort_by(|a, b| (sign * b.1).total_cmp(&(sign * a.1)).then(a.0.cmp(&b.0)));
        Ok(ModelRanking {
            measure: measure.to_string(),
            direction,
            models,
        })
    }

    /// Score oriented so that larger is better.
    fn goodness(&self) -> HashMap<&str, f64> {
        let s = self.direction.sign();
        self.models.iter().map(|(m, v)| (m.as_str(), s * v)).collect()
    }

    /// Groups of tied models, best group first.
    pub fn tie_groups(&self) -> Vec<Vec<String>> {
        let mut groups: Vec<Vec<String>> = Vec::new();
        let mut last: Option<f64> = None;
        for (m, v) in &self.models {
            match last {
                Some(l) if (l - v).abs() <= TIE_TOLERANCE => groups.last_mut().expect("open group").push(m.clone()),
                _ => groups.push(vec![m.clone()]),
            }
            last = Some(*v);
        }
        groups
    }

    /// The best-scoring models (the first tie group).
    pub fn best(&self) -> Vec<String> {
        self.tie_groups().swap_remove(0)
    }
}

/// Kendall tau-b with its two-sided normal-approximation p-value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tau {
    /// `None` when either ranking is a single tie group.
    pub tau: Option<f64>,
    pub p_value: Option<f64>,
    /// Fewer than 10 models, where the normal approximation is rough.
    pub small_sample: bool,
}

fn sign(x: f64) -> i64 {
    if x.abs() <= TIE_TOLERANCE {
        0
    } else if x > 0.0 {
        1
    } else {
        -1
    }
}

fn tie_sums(values: &[f64]) -> (f64, f64, f64) {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let (mut t1, mut t2, mut t3) = (0.0, 0.0, 0.0);
    let mut start = 0;
    for i in 1..=v.len() {
        if i == v.len() || (v[i] - v[start]).abs() > TIE_TOLERANCE {
            let t = (i - start) as f64;
            t1 += t * (t - 1.0);
            t2 += t * (t - 1.0) * (t - 2.0);
            t3 += t * (t - 1.0) * (2.0 * t + 5.0);
            start = i;
        }
    }
    (t1, t2, t3)
}

/// Kendall tau-b between two rankings of the same models, both oriented best first.
pub fn kendall_tau_b(a: &ModelRanking, b: &ModelRanking) -> Result<Tau> {
    let ga = a.goodness();
    let gb = b.goodness();
    if ga.len() != gb.len() || ga.keys().any(|m| !gb.contains_key(m)) {
        return Err(Error::ModelSetMismatch);
    }
    let names: Vec<&str> = a.models.iter().map(|(m, _)| m.as_str()).collect();
    let x: Vec<f64> = names.iter().map(|m| ga[m]).collect();
    let y: Vec<f64> = names.iter().map(|m| gb[m]).collect();
    let n = x.len();
    let mut s = 0i64;
    for i in 0..n {
        for j in i + 1..n {
            s += sign(x[i] - x[j]) * sign(y[i] - y[j]);
        }
    }
    let n0 = (n * n.saturating_sub(1) / 2) as f64;
    let (tx1, tx2, tx3) = tie_sums(&x);
    let (ty1, ty2, ty3) = tie_sums(&y);
    let n1 = tx1 / 2.0;
    let n2 = ty1 / 2.0;
    let small_sample = n < 10;
    let denom = ((n0 - n1) * (n0 - n2)).sqrt();
    if denom == 0.0 {
        return Ok(Tau {
            tau: None,
            p_value: None,
            small_sample,
        });
    }
    let tau = (s as f64 / denom).clamp(-1.0, 1.0);
    let nf = n as f64;
    let v0 = nf * (nf - 1.0) * (2.0 * nf + 5.0);
    let mut var = (v0 - tx3 - ty3) / 18.0 + tx1 * ty1 / (2.0 * nf * (nf - 1.0));
    if n > 2 {
        var += tx2 * ty2 / (9.0 * nf * (nf - 1.0) * (nf - 2.0));
    }
    let p_value = if var > 0.0 {
        let z = s as f64 / var.sqrt();
        let normal = Normal::new(0.0, 1.0).expect("unit normal");
        Some((2.0 * (1.0 - normal.cdf(z.abs()))).clamp(0.0, 1.0))
    } else {
        None
    };
    Ok(Tau {
        tau: Some(tau),
        p_value,
        small_sample,
    })
}

/// `tau >= 0.9`.
pub fn equivalence(tau: f64) -> bool {
    tau >= EQUIVALENCE_THRESHOLD - TIE_TOLERANCE
}

fn check_p(p_values: &[f64], alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(invalid("alpha", "must lie in (0, 1]"));
    }
    if p_values.iter().any(|p| !(0.0..=1.0).contains(p)) {
        return Err(invalid("p_values", "must lie in [0, 1]"));
    }
    Ok(())
}

/// Benjamini-Hochberg step-up; flags follow the input order.
pub fn bh_correct(p_values: &[f64], alpha: f64) -> Result<Vec<bool>> {
    check_p(p_values, alpha)?;
    let m = p_values.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| p_values[a].total_cmp(&p_values[b]).then(a.cmp(&b)));
    let cut = (0..m)
        .rev()
        .find(|&r| p_values[order[r]] <= (r + 1) as f64 * alpha / m as f64)
        .map_or(0, |r| r + 1);
    let mut flags = vec![false; m];
    for &i in &order[..cut] {
        flags[i] = true;
    }
    Ok(flags)
}

/// Bonferroni: `p <= alpha / m`.
pub fn bonferroni_correct(p_values: &[f64], alpha: f64) -> Result<Vec<bool>> {
    check_p(p_values, alpha)?;
    let m = p_values.len() as f64;
    Ok(p_values.iter().map(|&p| p <= alpha / m).collect())
}

/// Multiple-testing correction applied across a matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Correction {
    BenjaminiHochberg,
    Bonferroni,
}

/// Pairwise tau between measures with corrected significance flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgreementMatrix {
    pub measures: Vec<String>,
    pub directions: Vec<Direction>,
    pub tau: Vec<Vec<Option<f64>>>,
    pub p_value: Vec<Vec<Option<f64>>>,
    pub significant: Vec<Vec<bool>>,
    pub alpha: f64,
    pub correction: Correction,
    pub small_sample: bool,
}

/// Tau for every pair of rankings, with significance corrected over the off-diagonal cells.
pub fn agreement_matrix(rankings: &[ModelRanking], alpha: f64, correction: Correction) -> Result<AgreementMatrix> {
    if rankings.len() < 2 {
        return Err(invalid("rankings", "need at least two"));
    }
    let r = rankings.len();
    let cells: Vec<(usize, usize)> = (0..r).flat_map(|a| (a..r).map(move |b| (a, b))).collect();
    let taus: Vec<Tau> = cells
        .par_iter()
        .map(|&(a, b)| kendall_tau_b(&rankings[a], &rankings[b]))
        .collect::<Result<_>>()?;
    let mut tau = vec![vec![None; r]; r];
    let mut p_value = vec![vec![None; r]; r];
    let mut small_sample = false;
    for (&(a, b), t) in cells.iter().zip(&taus) {
        tau[a][b] = t.tau;
        tau[b][a] = t.tau;
        if a != b {
            p_value[a][b] = t.p_value;
            p_value[b][a] = t.p_value;
        }
        small_sample |= t.small_sample;
    }
    let tested: Vec<(usize, usize, f64)> = cells
        .iter()
        .filter(|(a, b)| a < b)
        .filter_map(|&(a, b)| p_value[a][b].map(|p| (a, b, p)))
        .collect();
    let ps: Vec<f64> = tested.iter().map(|t| t.2).collect();
    let flags = match correction {
        Correction::BenjaminiHochberg => bh_correct(&ps, alpha)?,
        Correction::Bonferroni => bonferroni_correct(&ps, alpha)?,
    };
    let mut significant = vec![vec![false; r]; r];
    for (&(a, b, _), &f) in tested.iter().zip(&flags) {
        significant[a][b] = f;
        significant[b][a] = f;
    }
    Ok(AgreementMatrix {
        measures: rankings.iter().map(|x| x.measure.clone()).collect(),
        directions: rankings.iter().map(|x| x.direction).collect(),
        tau,
        p_value,
        significant,
        alpha,
        correction,
        small_sample,
    })
}

impl AgreementMatrix {
    /// Long-format CSV: `measure_a,measure_b,tau,p_value,significant`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("measure_a,measure_b,tau,p_value,significant\n");
        let fmt = |v: Option<f64>| v.map_or(String::new(), crate::report::fmt_sig);
        for (a, ma) in self.measures.iter().enumerate() {
            for (b, mb) in self.measures.iter().enumerate() {
                let _ = writeln!(
                    s,
                    "{ma},{mb},{},{},{}",
                    fmt(self.tau[a][b]),
                    fmt(self.p_value[a][b]),
                    self.significant[a][b]
                );
            }
        }
        s
    }
}
