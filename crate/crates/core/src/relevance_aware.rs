//! Relevance-aware individual item fairness: IAA, IFD÷, IFD×, HD, MME,
//! IBO/IWO, II-F and AI-F, with per-user min-max corrections computed from
//! extreme ranking strategies.
//!
//! Measures that look beyond the top `k` expect full rankings. Items missing
//! from a list receive no exposure. Multi-round inputs are given as one
//! [`RunSet`] per round over the same users.

use crate::error::{invalid, Error, Result};
use crate::exposure::check_rounds;
use crate::measure::{Direction, MeasureResult, Variant, Warning};
use crate::model::{Catalog, ExamFn, Qrels, RunSet};
use std::collections::BTreeMap;

/// Examination weight at a 1-based position under cutoff `k` (0 beyond `k`).
pub fn exam_weight(exam: ExamFn, position: usize, k: usize) -> Result<f64> {
    exam.weight(position, k)
}

fn dcg(position: usize) -> f64 {
    1.0 / ((position + 1) as f64).log2()
}

/// 1-based positions of every item in `list`; 0 marks an unranked item.
fn positions(list: &[usize], n: usize) -> Vec<usize> {
    let mut pos = vec![0usize; n];
    for (p, &i) in list.iter().enumerate() {
        pos[i] = p + 1;
    }
    pos
}

/// Ranking strategies that realise the extreme values of the per-user measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// All relevant items at the top.
    Top,
    /// All relevant items at the bottom.
    Bottom,
    /// `ceil(|R|/2)` relevant items at the top, the rest at the bottom.
    HalfHalf,
    /// `a` relevant items at the top, the rest at the bottom.
    Split(usize),
}

/// Full ranking of `n` items realising `strategy` for the sorted relevant set.
///
/// Relevant items keep ascending id order; irrelevant items fill the middle in
/// ascending id order.
pub fn extreme_ranking(strategy: Strategy, relevant: &[usize], n: usize) -> Result<Vec<usize>> {
    let r = relevant.len();
    if relevant.iter().any(|&i| i >= n) {
        return Err(invalid("relevant", "item outside the catalog"));
    }
    let a = match strategy {
        Strategy::Top => r,
        Strategy::Bottom => 0,
        Strategy::HalfHalf => r.div_ceil(2),
        Strategy::Split(a) => {
            if a > r {
                return Err(invalid("a", format!("split point {a} exceeds |R| = {r}")));
            }
            a
        }
    };
    let mut rel_sorted = relevant.to_vec();
    rel_sorted.sort_unstable();
    let mut out = Vec::with_capacity(n);
    out.extend_from_slice(&rel_sorted[..a]);
    out.extend((0..n).filter(|i| rel_sorted.binary_search(i).is_err()));
    out.extend_from_slice(&rel_sorted[a..]);
    Ok(out)
}

/// Per-user relevance min-max normalized over the whole catalog.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedRelevance {
    /// `None` for users whose relevance is constant over all items.
    values: Vec<Option<Vec<f64>>>,
}

impl NormalizedRelevance {
    /// Normalize raw per-user grades (one row of length `n` per run user).
    pub fn from_grades(grades: Vec<Vec<f64>>) -> Self {
        let values = grades
            .into_iter()
            .map(|row| {
                let lo = row.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                if !(hi > lo) {
                    None
                } else {
                    Some(row.iter().map(|v| (v - lo) / (hi - lo)).collect())
                }
            })
            .collect();
        NormalizedRelevance { values }
    }

    /// Binary judgments aligned with the run's users.
    pub fn from_qrels(run: &RunSet, qrels: &Qrels, n: usize) -> Self {
        let grades = qrels
            .aligned(run)
            .into_iter()
            .map(|rel| {
                let mut row = vec![0.0; n];
                for &i in rel.unwrap_or(&[]) {
                    row[i] = 1.0;
                }
                row
            })
            .collect();
        NormalizedRelevance::from_grades(grades)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn user(&self, u: usize) -> Option<&[f64]> {
        self.values[u].as_deref()
    }
}

fn relevant_sets<'a>(run: &RunSet, qrels: &'a Qrels) -> Vec<&'a [usize]> {
    qrels.aligned(run).into_iter().map(|r| r.unwrap_or(&[])).collect()
}

/// Weighted exposure of every item for user `u`, averaged over rounds.
fn user_exposure(rounds: &[RunSet], u: usize, weights: &[f64], n: usize) -> Vec<f64> {
    let mut e = vec![0.0; n];
    let wn = rounds.len() as f64;
    for r in rounds {
        for (p, &i) in r.list(u).iter().take(weights.len()).enumerate() {
            e[i] += weights[p] / wn;
        }
    }
    e
}

fn iaa_core(exposure: &[f64], rel: &[f64]) -> f64 {
    exposure.iter().zip(rel).map(|(e, r)| (e - r).abs()).sum::<f64>() / rel.len() as f64
}

fn ranking_by_relevance(rel: &[f64], descending: bool) -> Vec<usize> {
    let mut order: Vec<usize> = (0..rel.len()).collect();
    order.sort_by(|&a, &b| {
        let c = rel[a].total_cmp(&rel[b]);
        if descending { c.reverse() } else { c }.then(a.cmp(&b))
    });
    order
}

fn single_exposure(list: &[usize], weights: &[f64], n: usize) -> Vec<f64> {
    let mut e = vec![0.0; n];
    for (p, &i) in list.iter().take(weights.len()).enumerate() {
        e[i] = weights[p];
    }
    e
}

fn summarize(
    name: &str,
    variant: Variant,
    direction: Direction,
    per_user: Vec<(String, f64)>,
    mut warnings: Vec<Warning>,
    empty_reason: &str,
) -> MeasureResult {
    let mut res = if per_user.is_empty() {
        MeasureResult::undefined(name, variant, direction, empty_reason)
    } else {
        let mean = per_user.iter().map(|p| p.1).sum::<f64>() / per_user.len() as f64;
        MeasureResult::new(name, variant, direction, mean)
    };
    res.warnings.append(&mut warnings);
    res.per_user = Some(per_user);
    res
}

/// Inequity of amortized attention: mean absolute gap between normalized
/// exposure and normalized relevance, averaged over users.
///
/// `exam` defaults to the original normalized linear weights for the original
/// variant and the corrected ones for the corrected variant. The corrected
/// variant normalizes each user between the rankings sorted by non-increasing
/// and non-decreasing relevance.
pub fn iaa(
    rounds: &[RunSet],
    catalog: &Catalog,
    relevance: &NormalizedRelevance,
    k: usize,
    exam: Option<ExamFn>,
    variant: Variant,
) -> Result<MeasureResult> {
    let m = check_rounds(rounds, catalog, k)?;
    let n = catalog.len();
    if relevance.len() != m {
        return Err(invalid("relevance", "one row per run user is required"));
    }
    let exam = exam.unwrap_or(match variant {
        Variant::Corrected => ExamFn::LinearNormalizedCorrected,
        _ => ExamFn::LinearNormalizedOriginal,
    });
    let weights: Vec<f64> = (1..=k).map(|p| exam.weight(p, k)).collect::<Result<_>>()?;
    let mut per_user = Vec::new();
    let mut constant = 0usize;
    let mut degenerate = 0usize;
    for u in 0..m {
        let Some(rel) = relevance.user(u) else {
            constant += 1;
            continue;
        };
        if rel.len() != n {
            return Err(invalid("relevance", "rows must cover the catalog"));
        }
        let raw = iaa_core(&user_exposure(rounds, u, &weights, n), rel);
        let v = match variant {
            Variant::Corrected => {
                let lo = iaa_core(&single_exposure(&ranking_by_relevance(rel, true), &weights, n), rel);
                let hi = iaa_core(&single_exposure(&ranking_by_relevance(rel, false), &weights, n), rel);
                if hi - lo <= 1e-15 {
                    degenerate += 1;
                    0.0
                } else {
                    (raw - lo) / (hi - lo)
                }
            }
            Variant::Defined => return Err(invalid("variant", "IAA has no defined variant")),
            Variant::Original => raw,
        };
        per_user.push((rounds[0].user(u).to_string(), v));
    }
    let mut warnings = Vec::new();
    if constant > 0 {
        warnings.push(Warning::ExcludedUsers {
            count: constant,
            reason: "relevance is constant over all items".into(),
        });
    }
    if degenerate > 0 {
        warnings.push(Warning::Degenerate {
            reason: format!("{degenerate} users have equal minimum and maximum; scored 0"),
        });
    }
    Ok(summarize(
        "IAA",
        variant,
        Direction::Lower,
        per_user,
        warnings,
        "no user with varying relevance",
    )
    .param("k", k as f64)
    .param("W", rounds.len() as f64))
}

/// Options of the IFD÷ family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct IfdDivOptions {
    /// Apply the top-`k` indicator to the exposure; defaults to on for the
    /// corrected variant and off for the original.
    pub topk_indicator: Option<bool>,
    /// Drop users with a single relevant item instead of scoring them 0.
    pub exclude_single_relevant: bool,
}

fn ifd_div_core(pos_rounds: &[Vec<usize>], relevant: &[usize], k: usize, indicator: bool) -> f64 {
    let wn = pos_rounds.len() as f64;
    let j: Vec<f64> = relevant
        .iter()
        .map(|&i| {
            pos_rounds
                .iter()
                .map(|pos| {
                    let z = pos[i];
                    if z == 0 || (indicator && z > k) {
                        0.0
                    } else {
                        dcg(z)
                    }
                })
                .sum::<f64>()
                / wn
        })
        .collect();
    let r = relevant.len() as f64;
    let mut s = 0.0;
    for a in 0..j.len() {
        for b in a + 1..j.len() {
            s += (j[a] - j[b]).abs();
        }
    }
    s / (r * r)
}

fn strategy_positions(strategy: Strategy, relevant: &[usize], n: usize) -> Result<Vec<usize>> {
    Ok(positions(&extreme_ranking(strategy, relevant, n)?, n))
}

/// Individual fairness disparity with exposure divided by relevance.
pub fn ifd_div(
    rounds: &[RunSet],
    catalog: &Catalog,
    qrels: &Qrels,
    k: usize,
    variant: Variant,
    options: IfdDivOptions,
) -> Result<MeasureResult> {
    let m = check_rounds(rounds, catalog, k)?;
    let n = catalog.len();
    let indicator = options.topk_indicator.unwrap_or(variant == Variant::Corrected);
    let rel = relevant_sets(&rounds[0], qrels);
    let mut per_user = Vec::new();
    let (mut no_rel, mut single, mut degenerate) = (0usize, 0usize, 0usize);
    for u in 0..m {
        let r = rel[u];
        if r.is_empty() {
            no_rel += 1;
            continue;
        }
        let pos: Vec<Vec<usize>> = rounds.iter().map(|run| positions(run.list(u), n)).collect();
        let raw = ifd_div_core(&pos, r, k, indicator);
        let v = match variant {
            Variant::Original => raw,
            Variant::Corrected => {
                if r.len() == 1 {
                    single += 1;
                    if options.exclude_single_relevant {
                        continue;
                    }
                    0.0
                } else {
                    let lo = ifd_div_core(&[strategy_positions(Strategy::Bottom, r, n)?], r, k, true);
                    let hi = ifd_div_core(&[strategy_positions(Strategy::HalfHalf, r, n)?], r, k, true);
                    if hi - lo <= 1e-15 {
                        degenerate += 1;
                        0.0
                    } else {
                        (raw - lo) / (hi - lo)
                    }
                }
            }
            Variant::Defined => return Err(invalid("variant", "IFD÷ has no defined variant")),
        };
        per_user.push((rounds[0].user(u).to_string(), v));
    }
    let mut warnings = Vec::new();
    if no_rel > 0 {
        warnings.push(Warning::ExcludedUsers {
            count: no_rel,
            reason: "no relevant item".into(),
        });
    }
    if single > 0 {
        warnings.push(Warning::SingleRelevantUsers { count: single });
    }
    if degenerate > 0 {
        warnings.push(Warning::Degenerate {
            reason: format!("{degenerate} users have equal minimum and maximum; scored 0"),
        });
    }
    Ok(summarize(
        "IFD÷",
        variant,
        Direction::Lower,
        per_user,
        warnings,
        "no user with a relevant item",
    )
    .param("k", k as f64)
    .param("topk_indicator", if indicator { 1.0 } else { 0.0 }))
}

fn ifd_mul_core(pos_rounds: &[Vec<usize>], relevant: &[usize], k: usize, n: usize) -> f64 {
    let wn = pos_rounds.len() as f64;
    let j: Vec<f64> = relevant
        .iter()
        .map(|&i| {
            pos_rounds
                .iter()
                .map(|pos| if pos[i] == 0 || pos[i] > k { 0.0 } else { dcg(pos[i]) })
                .sum::<f64>()
                / wn
        })
        .collect();
    // Irrelevant items have J = 0; expand the ordered-pair sum accordingly.
    let zeros = (n - relevant.len()) as f64;
    let mut s = 0.0;
    for a in 0..j.len() {
        s += 2.0 * zeros * j[a] * j[a];
        for b in a + 1..j.len() {
            s += 2.0 * (j[a] - j[b]) * (j[a] - j[b]);
        }
    }
    s / (n as f64 * (n as f64 - 1.0))
}

/// The per-user IFD× maximum over all split strategies, with its split point.
pub fn ifd_mul_max(relevant: &[usize], k: usize, n: usize) -> Result<(f64, usize)> {
    let mut best = (f64::NEG_INFINITY, 0);
    for a in 0..=relevant.len() {
        let v = ifd_mul_core(&[strategy_positions(Strategy::Split(a), relevant, n)?], relevant, k, n);
        if v > best.0 {
            best = (v, a);
        }
    }
    Ok(best)
}

/// Individual fairness disparity with exposure multiplied by relevance.
pub fn ifd_mul(
    rounds: &[RunSet],
    catalog: &Catalog,
    qrels: &Qrels,
    k: usize,
    variant: Variant,
) -> Result<MeasureResult> {
    let m = check_rounds(rounds, catalog, k)?;
    let n = catalog.len();
    if n < 2 {
        return Err(invalid("catalog", "IFD× needs at least two items"));
    }
    let rel = relevant_sets(&rounds[0], qrels);
    let mut per_user = Vec::new();
    let (mut no_rel, mut degenerate) = (0usize, 0usize);
    for u in 0..m {
        let r = rel[u];
        if r.is_empty() {
            no_rel += 1;
            continue;
        }
        let pos: Vec<Vec<usize>> = rounds.iter().map(|run| positions(run.list(u), n)).collect();
        let raw = ifd_mul_core(&pos, r, k, n);
        let v = match variant {
            Variant::Original => raw,
            Variant::Corrected => {
                let lo = ifd_mul_core(&[strategy_positions(Strategy::Bottom, r, n)?], r, k, n);
                let (hi, _) = ifd_mul_max(r, k, n)?;
                if hi - lo <= 1e-15 {
                    degenerate += 1;
                    0.0
                } else {
                    (raw - lo) / (hi - lo)
                }
            }
            Variant::Defined => return Err(invalid("variant", "IFD× has no defined variant")),
        };
        per_user.push((rounds[0].user(u).to_string(), v));
    }
    let mut warnings = Vec::new();
    if no_rel > 0 {
        warnings.push(Warning::ExcludedUsers {
            count: no_rel,
            reason: "no relevant item".into(),
        });
    }
    if degenerate > 0 {
        warnings.push(Warning::Degenerate {
            reason: format!("{degenerate} users have equal minimum and maximum; scored 0"),
        });
    }
    Ok(summarize(
        "IFD×",
        variant,
        Direction::Lower,
        per_user,
        warnings,
        "no user with a relevant item",
    )
    .param("k", k as f64))
}

/// Hellinger distance between the positional relevance distribution of the
/// ideal ranking and the cascade interaction distribution of the run.
///
/// The ideal ranking orders each user's relevant items first, ties broken by
/// ascending item id (a stable sort), so repeated evaluation is deterministic.
pub fn hd(run: &RunSet, catalog: &Catalog, qrels: &Qrels, k: usize, gamma: f64) -> Result<MeasureResult> {
    let m = check_rounds(std::slice::from_ref(run), catalog, k)?;
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(invalid("gamma", "must lie in (0, 1]"));
    }
    let rel = relevant_sets(run, qrels);
    let mut q = vec![0.0; k];
    let mut c = vec![0.0; k];
    let mut used = 0usize;
    for u in 0..m {
        let r = rel[u];
        if r.is_empty() {
            continue;
        }
        used += 1;
        let rf = r.len() as f64;
        for qp in q.iter_mut().take(r.len().min(k)) {
            *qp += 1.0 / rf;
        }
        // Cascade interaction probabilities along the predicted list.
        let top = run.top_k(u, k);
        let mut survive = 1.0;
        let mut cu = Vec::with_capacity(top.len());
        for (p, &i) in top.iter().enumerate() {
            let ri = if r.binary_search(&i).is_ok() { 1.0 } else { 0.0 };
            cu.push(ri * gamma * gamma.powi(p as i32) * survive);
            survive *= 1.0 - ri;
        }
        let total: f64 = cu.iter().sum();
        // Map interaction mass to items, then read it off the ideal positions.
        let mut by_item: BTreeMap<usize, f64> = BTreeMap::new();
        if total > 0.0 {
            for (p, &i) in top.iter().enumerate() {
                by_item.insert(i, cu[p] / total);
            }
        }
        let ideal: Vec<usize> = r
            .iter()
            .copied()
            .chain((0..catalog.len()).filter(|i| r.binary_search(i).is_err()))
            .take(k)
            .collect();
        let star: Vec<f64> = ideal.iter().map(|i| by_item.get(i).copied().unwrap_or(0.0)).collect();
        let star_total: f64 = star.iter().sum();
        if star_total > 0.0 {
            for (p, s) in star.iter().enumerate() {
                c[p] += s / star_total;
            }
        }
    }
    let excluded = m - used;
    if used == 0 {
        return Ok(MeasureResult::undefined(
            "HD",
            Variant::Original,
            Direction::Lower,
            "no user with a relevant item",
        ));
    }
    let uf = used as f64;
    let s: f64 = q
        .iter()
        .zip(&c)
        .map(|(qp, cp)| {
            let d = (qp / uf).sqrt() - (cp / uf).sqrt();
            d * d
        })
        .sum();
    let mut res = MeasureResult::new("HD", Variant::Original, Direction::Lower, (s / 2.0).sqrt())
        .param("k", k as f64)
        .param("gamma", gamma);
    if excluded > 0 {
        res = res.warn(Warning::ExcludedUsers {
            count: excluded,
            reason: "no relevant item".into(),
        });
    }
    Ok(res)
}

/// `x_{u,i} = (1/W) sum_w 1[z <= k] / z` for the top-`k` items of every user.
fn inverse_exposure(rounds: &[RunSet], k: usize) -> Vec<BTreeMap<usize, f64>> {
    let m = rounds[0].m();
    let wn = rounds.len() as f64;
    (0..m)
        .map(|u| {
            let mut x: BTreeMap<usize, f64> = BTreeMap::new();
            for r in rounds {
                for (p, &i) in r.top_k(u, k).iter().enumerate() {
                    *x.entry(i).or_default() += 1.0 / ((p + 1) as f64 * wn);
                }
            }
            x
        })
        .collect()
}

/// Users to whom each item is relevant, aligned to run users.
fn item_audiences(run: &RunSet, qrels: &Qrels, n: usize) -> Vec<Vec<usize>> {
    let mut aud = vec![Vec::new(); n];
    for (u, r) in relevant_sets(run, qrels).into_iter().enumerate() {
        for &i in r {
            aud[i].push(u);
        }
    }
    aud
}

/// Mean max envy between items under inverse examination.
pub fn mme(rounds: &[RunSet], catalog: &Catalog, qrels: &Qrels, k: usize) -> Result<MeasureResult> {
    let m = check_rounds(rounds, catalog, k)?;
    let n = catalog.len();
    let x = inverse_exposure(rounds, k);
    let aud = item_audiences(&rounds[0], qrels, n);
    let mf = m as f64;
    let mut total = 0.0;
    for (i, users) in aud.iter().enumerate() {
        let mut imp: BTreeMap<usize, f64> = BTreeMap::new();
        for &u in users {
            for (&j, &v) in &x[u] {
                *imp.entry(j).or_default() += v / mf;
            }
        }
        let own = imp.get(&i).copied().unwrap_or(0.0);
        let best = imp.values().copied().fold(0.0, f64::max);
        total += best - own;
    }
    Ok(
        MeasureResult::new("MME", Variant::Original, Direction::Lower, total / n as f64)
            .param("k", k as f64)
            .param("W", rounds.len() as f64),
    )
}

/// Items-better-off and items-worse-off rates. Returns `(IBO, IWO)`.
///
/// An item is better (worse) off when its impact is at least `upper` (at most
/// `lower`) times its impact under uniform exposure. The corrected variant
/// evaluates only items relevant to at least one user.
pub fn ibo_iwo(
    rounds: &[RunSet],
    catalog: &Catalog,
    qrels: &Qrels,
    k: usize,
    variant: Variant,
    thresholds: (f64, f64),
) -> Result<(MeasureResult, MeasureResult)> {
    let m = check_rounds(rounds, catalog, k)?;
    let n = catalog.len();
    let (upper, lower) = thresholds;
    if !(upper >= 1.0 && (0.0..=1.0).contains(&lower)) {
        return Err(invalid("thresholds", "need upper >= 1 >= lower >= 0"));
    }
    if variant == Variant::Defined {
        return Err(invalid("variant", "IBO/IWO have no defined variant"));
    }
    let x = inverse_exposure(rounds, k);
    let aud = item_audiences(&rounds[0], qrels, n);
    let mf = m as f64;
    let harmonic: f64 = (1..=k).map(|p| 1.0 / p as f64).sum();
    let mut better = 0usize;
    let mut worse = 0usize;
    let mut evaluated = 0usize;
    let mut undefined = false;
    for (i, users) in aud.iter().enumerate() {
        let unif = harmonic * users.len() as f64 / (mf * n as f64);
        if users.is_empty() {
            if variant == Variant::Original {
                undefined = true;
            }
            continue;
        }
        evaluated += 1;
        let imp: f64 = users.iter().map(|&u| x[u].get(&i).copied().unwrap_or(0.0)).sum::<f64>() / mf;
        if imp >= upper * unif {
            better += 1;
        } else if imp <= lower * unif {
            worse += 1;
        }
    }
    let make = |name: &str, count: usize, dir: Direction| -> MeasureResult {
        let r = if undefined {
            MeasureResult::undefined(
                name,
                variant,
                dir,
                "an item relevant to no user has zero uniform impact",
            )
        } else if evaluated == 0 {
            MeasureResult::undefined(name, variant, dir, "no item is relevant to any user")
        } else {
            let denom = if variant == Variant::Original { n } else { evaluated };
            MeasureResult::new(name, variant, dir, count as f64 / denom as f64)
        };
        r.param("k", k as f64).param("upper", upper).param("lower", lower)
    };
    Ok((
        make("IBO", better, Direction::Higher),
        make("IWO", worse, Direction::Lower),
    ))
}

/// Which expected-exposure fairness measure to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpectedExposureKind {
    IiF,
    AiF,
}

fn target_exposure(rel_count: usize, gamma: f64) -> f64 {
    if rel_count == 0 {
        0.0
    } else {
        (1.0 - gamma.powi(rel_count as i32)) / ((1.0 - gamma) * rel_count as f64)
    }
}

/// Per-user II-F from a sparse system exposure map.
fn iif_user(exposure: &BTreeMap<usize, f64>, relevant: &[usize], gamma: f64, n: usize) -> f64 {
    let t = target_exposure(relevant.len(), gamma);
    let mut s = 0.0;
    for (&i, &e) in exposure {
        let target = if relevant.binary_search(&i).is_ok() { t } else { 0.0 };
        s += (e - target) * (e - target);
    }
    for &i in relevant {
        if !exposure.contains_key(&i) {
            s += t * t;
        }
    }
    s / n as f64
}

fn rbp_exposure(lists: &[&[usize]], k: usize, gamma: f64) -> BTreeMap<usize, f64> {
    let wn = lists.len() as f64;
    let mut e: BTreeMap<usize, f64> = BTreeMap::new();
    for list in lists {
        for (p, &i) in list.iter().take(k).enumerate() {
            *e.entry(i).or_default() += gamma.powi(p as i32) / wn;
        }
    }
    e
}

/// Expected exposure fairness against the relevance-proportional target
/// `E* = r / |R| * (1 - gamma^|R|) / (1 - gamma)`.
///
/// Corrected II-F normalizes each user between the all-relevant-at-top and
/// all-relevant-at-bottom rankings and excludes users with no relevant item.
pub fn expected_exposure_fairness(
    kind: ExpectedExposureKind,
    rounds: &[RunSet],
    catalog: &Catalog,
    qrels: &Qrels,
    k: usize,
    gamma: f64,
    variant: Variant,
) -> Result<MeasureResult> {
    let m = check_rounds(rounds, catalog, k)?;
    let n = catalog.len();
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(invalid("gamma", "must lie in (0, 1)"));
    }
    let rel = relevant_sets(&rounds[0], qrels);
    match (kind, variant) {
        (ExpectedExposureKind::IiF, Variant::Original | Variant::Corrected) => {
            let mut per_user = Vec::new();
            let (mut no_rel, mut degenerate) = (0usize, 0usize);
            for u in 0..m {
                let lists: Vec<&[usize]> = rounds.iter().map(|r| r.list(u)).collect();
                let raw = iif_user(&rbp_exposure(&lists, k, gamma), rel[u], gamma, n);
                let v = if variant == Variant::Corrected {
                    if rel[u].is_empty() {
                        no_rel += 1;
                        continue;
                    }
                    let top = extreme_ranking(Strategy::Top, rel[u], n)?;
                    let bottom = extreme_ranking(Strategy::Bottom, rel[u], n)?;
                    let lo = iif_user(&rbp_exposure(&[&top], k, gamma), rel[u], gamma, n);
                    let hi = iif_user(&rbp_exposure(&[&bottom], k, gamma), rel[u], gamma, n);
                    if hi - lo <= 1e-15 {
                        degenerate += 1;
                        0.0
                    } else {
                        (raw - lo) / (hi - lo)
                    }
                } else {
                    raw
                };
                per_user.push((rounds[0].user(u).to_string(), v));
            }
            let mut warnings = Vec::new();
            if no_rel > 0 {
                warnings.push(Warning::ExcludedUsers {
                    count: no_rel,
                    reason: "no relevant item".into(),
                });
            }
            if degenerate > 0 {
                warnings.push(Warning::Degenerate {
                    reason: format!("{degenerate} users have equal minimum and maximum; scored 0"),
                });
            }
            Ok(summarize(
                "II-F",
                variant,
                Direction::Lower,
                per_user,
                warnings,
                "no user with a relevant item",
            )
            .param("k", k as f64)
            .param("gamma", gamma)
            .param("W", rounds.len() as f64))
        }
        (ExpectedExposureKind::AiF, Variant::Original) => {
            let mf = m as f64;
            let mut sys = vec![0.0; n];
            let mut tgt = vec![0.0; n];
            for u in 0..m {
                let lists: Vec<&[usize]> = rounds.iter().map(|r| r.list(u)).collect();
                for (i, e) in rbp_exposure(&lists, k, gamma) {
                    sys[i] += e / mf;
                }
                let t = target_exposure(rel[u].len(), gamma);
                for &i in rel[u] {
                    tgt[i] += t / mf;
                }
            }
            let v = sys.iter().zip(&tgt).map(|(s, t)| (s - t) * (s - t)).sum::<f64>() / n as f64;
            Ok(MeasureResult::new("AI-F", variant, Direction::Lower, v)
                .param("k", k as f64)
                .param("gamma", gamma)
                .param("W", rounds.len() as f64))
        }
        (ExpectedExposureKind::AiF, _) => Err(Error::Unsupported("AI-F has no closed-form normalization".into())),
        (_, Variant::Defined) => Err(invalid("variant", "II-F has no defined variant")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn strategies() {
        assert_eq!(
            extreme_ranking(Strategy::HalfHalf, &[0, 1, 2, 3], 8).unwrap(),
            vec![0, 1, 4, 5, 6, 7, 2, 3]
        );
        assert!(extreme_ranking(Strategy::Top, &[5], 3).is_err());
        assert_eq!(extreme_ranking(Strategy::Bottom, &[0], 3).unwrap(), vec![1, 2, 0]);
    }

    #[test]
    fn iaa_worked_values() {
        let cat = Catalog::with_size(4);
        let rel = NormalizedRelevance::from_grades(vec![vec![1.0, 0.8, 0.0, 0.0]]);
        let run = RunSet::from_lists(vec![vec![0, 1, 2, 3]]);
        let r = iaa(&[run], &cat, &rel, 2, None, Variant::Original).unwrap();
        assert!(close(r.score(), 0.2, 1e-12));

        let rel = NormalizedRelevance::from_grades(vec![vec![0.8, 1.0, 0.0, 0.0]]);
        let run = RunSet::from_lists(vec![vec![0, 1, 2, 3]]);
        let a = iaa(
            std::slice::from_ref(&run),
            &cat,
            &rel,
            2,
            Some(ExamFn::LinearNormalizedOriginal),
            Variant::Corrected,
        )
        .unwrap();
        let b = iaa(&[run], &cat, &rel, 2, None, Variant::Corrected).unwrap();
        assert!(close(a.score(), 0.2, 1e-12));
        assert!(close(b.score(), 0.4 / 3.0, 1e-12));
    }

    #[test]
    fn iaa_original_exam_at_k1_is_undefined() {
        let cat = Catalog::with_size(2);
        let rel = NormalizedRelevance::from_grades(vec![vec![1.0, 0.0]]);
        let run = RunSet::from_lists(vec![vec![0, 1]]);
        assert!(matches!(
            iaa(&[run], &cat, &rel, 1, None, Variant::Original),
            Err(Error::Undefined(_))
        ));
    }

    #[test]
    fn ifd_div_worked_values() {
        let cat = Catalog::with_size(3);
        let run = RunSet::from_lists(vec![vec![0, 1, 2]]);
        let q = Qrels::from_lists(vec![vec![1, 2]]);
        for k in 1..=3 {
            let v = ifd_div(
                std::slice::from_ref(&run),
                &cat,
                &q,
                k,
                Variant::Original,
                IfdDivOptions::default(),
            )
            .unwrap()
            .score();
            assert!(close(v, 0.033, 1e-3), "k={k} {v}");
        }
        let with = |_k: usize| IfdDivOptions {
            topk_indicator: Some(true),
            ..Default::default()
        };
        let v2 = ifd_div(std::slice::from_ref(&run), &cat, &q, 2, Variant::Original, with(2))
            .unwrap()
            .score();
        let v1 = ifd_div(&[run], &cat, &q, 1, Variant::Original, with(1))
            .unwrap()
            .score();
        assert!(close(v2, 0.158, 1e-3));
        assert_eq!(v1, 0.0);
    }

    #[test]
    fn mme_envy_free() {
        let cat = Catalog::with_size(2);
        let run = RunSet::from_lists(vec![vec![0, 1], vec![1, 0]]);
        let q = Qrels::from_lists(vec![vec![0, 1], vec![0, 1]]);
        assert!(close(mme(&[run], &cat, &q, 2).unwrap().score(), 0.0, 1e-15));
    }

    #[test]
    fn ibo_iwo_original_undefined_with_unjudged_item() {
        let cat = Catalog::with_size(3);
        let run = RunSet::from_lists(vec![vec![0, 1, 2]]);
        let q = Qrels::from_lists(vec![vec![0]]);
        let (b, w) = ibo_iwo(std::slice::from_ref(&run), &cat, &q, 2, Variant::Original, (1.1, 0.9)).unwrap();
        assert!(b.is_undefined() && w.is_undefined());
        let (b, w) = ibo_iwo(&[run], &cat, &q, 2, Variant::Corrected, (1.1, 0.9)).unwrap();
        assert_eq!((b.score(), w.score()), (1.0, 0.0));
    }

    #[test]
    fn hd_zero_when_first_relevant_matches_ideal() {
        let cat = Catalog::with_size(3);
        let run = RunSet::from_lists(vec![vec![1, 0, 2], vec![2, 0, 1]]);
        let q = Qrels::from_lists(vec![vec![1], vec![2]]);
        assert!(close(hd(&run, &cat, &q, 1, 0.9).unwrap().score(), 0.0, 1e-15));
    }

    #[test]
    fn iif_zero_when_exposure_matches_target() {
        // Cycling three rounds gives every item the mean RBP exposure, which
        // equals the target when all items are relevant.
        let cat = Catalog::with_size(3);
        let rounds: Vec<RunSet> = (0..3)
            .map(|s| RunSet::from_lists(vec![(0..3).map(|p| (p + s) % 3).collect()]))
            .collect();
        let q = Qrels::from_lists(vec![vec![0, 1, 2]]);
        for kind in [ExpectedExposureKind::IiF, ExpectedExposureKind::AiF] {
            let r = expected_exposure_fairness(kind, &rounds, &cat, &q, 3, 0.8, Variant::Original).unwrap();
            assert!(close(r.score(), 0.0, 1e-15));
        }
    }
}
