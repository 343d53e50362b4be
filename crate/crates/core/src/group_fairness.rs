//! Group user fairness over per-user effectiveness: between-group,
//! within-group and individual measures, and the Atkinson decomposition
//! `1 - Atk_ind = (1 - Atk_b)(1 - Atk_w)`.

use crate::effectiveness::PerUserScores;
use crate::error::{invalid, Result};
use crate::measure::{Direction, MeasureResult, Variant};
use crate::model::GroupTable;
use crate::stats;

/// One user group with its scores.
#[derive(Debug, Clone, PartialEq)]
pub struct Group {
    /// Attribute values identifying the group.
    pub key: Vec<String>,
    pub members: Vec<String>,
    pub values: Vec<f64>,
    pub mean: f64,
    /// Share of the grand total score held by this group (0 when the grand total is 0).
    pub share: f64,
}

impl Group {
    pub fn size(&self) -> usize {
        self.values.len()
    }
}

/// Users partitioned into non-empty groups.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupScores {
    pub groups: Vec<Group>,
}

impl GroupScores {
    /// Build groups directly from value vectors (keys are the group positions).
    pub fn from_values(groups: Vec<Vec<f64>>) -> Result<Self> {
        if groups.iter().any(Vec::is_empty) || groups.is_empty() {
            return Err(invalid("groups", "groups must be non-empty"));
        }
        let grand: f64 = groups.iter().flatten().sum();
        let mut next = 0usize;
        let groups = groups
            .into_iter()
            .enumerate()
            .map(|(j, values)| {
                let total: f64 = values.iter().sum();
                let members = (next..next + values.len()).map(|u| format!("u{u}")).collect();
                next += values.len();
                Group {
                    key: vec![j.to_string()],
                    members,
                    mean: total / values.len() as f64,
                    share: if grand > 0.0 { total / grand } else { 0.0 },
                    values,
                }
            })
            .collect();
        Ok(GroupScores { groups })
    }

    /// All scores in group order.
    pub fn all_values(&self) -> Vec<f64> {
        self.groups.iter().flat_map(|g| g.values.iter().copied()).collect()
    }

    pub fn means(&self) -> Vec<f64> {
        self.groups.iter().map(|g| g.mean).collect()
    }

    pub fn sizes(&self) -> Vec<f64> {
        self.groups.iter().map(|g| g.size() as f64).collect()
    }

    pub fn user_count(&self) -> usize {
        self.groups.iter().map(Group::size).sum()
    }
}

/// Partition scored users by the combination of `attributes`.
pub fn group_scores(per_user: &PerUserScores, table: &GroupTable, attributes: &[&str]) -> Result<GroupScores> {
    if attributes.is_empty() {
        return Err(invalid("attributes", "choose at least one attribute"));
    }
    let parts = table.partition(&per_user.users, attributes)?;
    if parts.is_empty() {
        return Err(invalid("scores", "no scored user"));
    }
    let grand: f64 = per_user.values.iter().sum();
    let groups = parts
        .into_iter()
        .map(|(key, idx)| {
            let values: Vec<f64> = idx.iter().map(|&u| per_user.values[u]).collect();
            let total: f64 = values.iter().sum();
            Group {
                key,
                members: idx.iter().map(|&u| per_user.users[u].clone()).collect(),
                mean: total / values.len() as f64,
                share: if grand > 0.0 { total / grand } else { 0.0 },
                values,
            }
        })
        .collect();
    Ok(GroupScores { groups })
}

/// Between-group measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BetweenMeasure {
    /// Mean of the group means at or below their first quartile (higher is fairer).
    Min25,
    Range,
    Sd,
    Mad,
    Gini,
    Atk(f64),
    Cv,
    FStat,
    Kl,
    /// Generalized cross entropy with exponent `b`, smoothing weight `lambda` and floor `c`.
    Gce {
        b: f64,
        lambda: f64,
        c: f64,
    },
}

impl BetweenMeasure {
    pub fn name(&self) -> &'static str {
        match self {
            BetweenMeasure::Min25 => "Min25",
            BetweenMeasure::Range => "Range",
            BetweenMeasure::Sd => "SD",
            BetweenMeasure::Mad => "MAD",
            BetweenMeasure::Gini => "Gini",
            BetweenMeasure::Atk(_) => "Atk",
            BetweenMeasure::Cv => "CV",
            BetweenMeasure::FStat => "FStat",
            BetweenMeasure::Kl => "KL",
            BetweenMeasure::Gce { .. } => "GCE",
        }
    }

    /// Default GCE parameters `B = 2`, `lambda = 0.95`, `c = 1e-4`.
    pub fn gce_default() -> Self {
        BetweenMeasure::Gce {
            b: 2.0,
            lambda: 0.95,
            c: 1e-4,
        }
    }
}

fn scalar(name: &str, direction: Direction, v: Option<f64>, reason: &str) -> MeasureResult {
    match v {
        Some(v) => MeasureResult::new(name, Variant::Original, direction, v),
        None => MeasureResult::undefined(name, Variant::Original, direction, reason),
    }
}

/// Between-group Atkinson index: EDE of each group weighted by group size.
pub fn atkinson_between(gs: &GroupScores, epsilon: f64) -> f64 {
    let edes: Vec<f64> = gs
        .groups
        .iter()
        .map(|g| stats::ede(&g.values, &vec![1.0; g.size()], epsilon))
        .collect();
    stats::atkinson_weighted(&edes, &gs.sizes(), epsilon)
}

/// Evaluate a between-group measure.
pub fn between_group(measure: BetweenMeasure, gs: &GroupScores) -> Result<MeasureResult> {
    let means = gs.means();
    let k = means.len();
    if k == 0 {
        return Err(invalid("groups", "no group"));
    }
    let name = measure.name();
    let lower = Direction::Lower;
    let res = match measure {
        BetweenMeasure::Min25 => {
            let q = stats::quantile_inclusive(&means, 0.25).expect("non-empty");
            let low: Vec<f64> = means.iter().copied().filter(|&v| v <= q).collect();
            scalar(name, Direction::Higher, stats::mean(&low), "")
        }
        BetweenMeasure::Range => {
            let hi = means.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let lo = means.iter().copied().fold(f64::INFINITY, f64::min);
            MeasureResult::new(name, Variant::Original, lower, hi - lo)
        }
        BetweenMeasure::Sd => MeasureResult::new(
            name,
            Variant::Original,
            lower,
            stats::population_sd(&means).expect("non-empty"),
        ),
        BetweenMeasure::Mad => {
            let v = if k < 2 {
                0.0
            } else {
                let mut s = 0.0;
                for a in 0..k {
                    for b in 0..k {
                        s += (means[a] - means[b]).abs();
                    }
                }
                s / (k * (k - 1)) as f64
            };
            MeasureResult::new(name, Variant::Original, lower, v)
        }
        BetweenMeasure::Gini => scalar(name, lower, stats::gini(&means), "every group mean is 0"),
        BetweenMeasure::Atk(eps) => {
            check_epsilon(eps)?;
            MeasureResult::new(name, Variant::Original, lower, atkinson_between(gs, eps)).param("epsilon", eps)
        }
        BetweenMeasure::Cv => {
            let mu = stats::mean(&means).expect("non-empty");
            let v = if mu > 0.0 {
                Some(stats::population_sd(&means).expect("non-empty") / mu)
            } else {
                None
            };
            scalar(name, lower, v, "mean of group means is 0")
        }
        BetweenMeasure::FStat => {
            let all = gs.all_values();
            let n = all.len();
            let nf = n as f64;
            let grand = all.iter().sum::<f64>() / nf;
            let v_between: f64 = gs
                .groups
                .iter()
                .map(|g| g.size() as f64 * (g.mean - grand) * (g.mean - grand))
                .sum::<f64>()
                / nf;
            let u_within: f64 = gs
                .groups
                .iter()
                .flat_map(|g| g.values.iter().map(move |x| (x - g.mean) * (x - g.mean)))
                .sum::<f64>()
                / nf;
            let v = if k < 2 || n == k || u_within <= 0.0 {
                None
            } else {
                Some((v_between / (k as f64 - 1.0)) / (u_within / (nf - k as f64)))
            };
            scalar(name, lower, v, "no within-group variance or one user per group")
        }
        BetweenMeasure::Kl => {
            let total: f64 = means.iter().sum();
            let n = gs.user_count() as f64;
            let v = if total > 0.0 {
                Some(
                    gs.groups
                        .iter()
                        .map(|g| {
                            let p = g.mean / total;
                            let q = g.size() as f64 / n;
                            if p > 0.0 {
                                p * (p / q).log2()
                            } else {
                                0.0
                            }
                        })
                        .sum(),
                )
            } else {
                None
            };
            scalar(name, lower, v, "every group mean is 0")
        }
        BetweenMeasure::Gce { b, lambda, c } => {
            if b == 0.0 || b == 1.0 {
                return Err(invalid("B", "must differ from 0 and 1"));
            }
            if !(0.0..=1.0).contains(&lambda) || c <= 0.0 {
                return Err(invalid("lambda", "need lambda in [0, 1] and c > 0"));
            }
            let total: f64 = means.iter().sum();
            let smoothed: Vec<f64> = means
                .iter()
                .map(|m| {
                    let p = if total > 0.0 { m / total } else { 0.0 };
                    lambda * p + (1.0 - lambda) * c
                })
                .collect();
            let st: f64 = smoothed.iter().sum();
            let p_ref = 1.0 / k as f64;
            let inner: f64 = smoothed.iter().map(|p| p_ref.powf(b) * (p / st).powf(1.0 - b)).sum();
            MeasureResult::new(name, Variant::Original, lower, -(inner - 1.0) / (b * (1.0 - b)))
                .param("B", b)
                .param("lambda", lambda)
                .param("c", c)
        }
    };
    Ok(res.param("groups", k as f64))
}

fn check_epsilon(eps: f64) -> Result<()> {
    if !(eps > 0.0) {
        return Err(invalid("epsilon", "must be positive"));
    }
    Ok(())
}

/// Dispersion measure used within groups and over individuals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DispersionMeasure {
    Sd,
    Gini,
    Atk(f64),
}

impl DispersionMeasure {
    fn name(&self) -> &'static str {
        match self {
            DispersionMeasure::Sd => "SD",
            DispersionMeasure::Gini => "Gini",
            DispersionMeasure::Atk(_) => "Atk",
        }
    }

    fn eval(&self, x: &[f64]) -> Option<f64> {
        match *self {
            DispersionMeasure::Sd => stats::population_sd(x),
            DispersionMeasure::Gini => stats::gini(x),
            DispersionMeasure::Atk(eps) => Some(stats::atkinson(x, eps)),
        }
    }
}

/// Share-weighted sum of per-group dispersion.
pub fn within_group(measure: DispersionMeasure, gs: &GroupScores) -> Result<MeasureResult> {
    if let DispersionMeasure::Atk(eps) = measure {
        check_epsilon(eps)?;
    }
    let v: f64 = gs
        .groups
        .iter()
        .map(|g| g.share * measure.eval(&g.values).unwrap_or(0.0))
        .sum();
    Ok(
        MeasureResult::new(measure.name(), Variant::Original, Direction::Lower, v)
            .param("groups", gs.groups.len() as f64),
    )
}

/// Dispersion over individual user scores with equal weights.
pub fn individual(measure: DispersionMeasure, per_user: &PerUserScores) -> Result<MeasureResult> {
    if per_user.values.len() < 2 {
        return Err(invalid("scores", "needs at least two users"));
    }
    if let DispersionMeasure::Atk(eps) = measure {
        check_epsilon(eps)?;
    }
    Ok(scalar(
        measure.name(),
        Direction::Lower,
        measure.eval(&per_user.values),
        "every user scores 0",
    )
    .param("users", per_user.values.len() as f64))
}

/// Residual `|(1 - Atk_ind) - (1 - Atk_b)(1 - Atk_w)|` of the Atkinson decomposition.
pub fn atk_decomposition_check(gs: &GroupScores, epsilon: f64) -> Result<f64> {
    check_epsilon(epsilon)?;
    let ind = stats::atkinson(&gs.all_values(), epsilon);
    let b = atkinson_between(gs, epsilon);
    let w: f64 = gs
        .groups
        .iter()
        .map(|g| g.share * stats::atkinson(&g.values, epsilon))
        .sum();
    Ok(((1.0 - ind) - (1.0 - b) * (1.0 - w)).abs())
}
