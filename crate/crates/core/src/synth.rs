//! Deterministic synthetic scenarios that stress measure behavior.
//!
//! Every stochastic generator takes an explicit seed and draws from
//! [`PRNG_NAME`], so identical parameters reproduce identical output.

use crate::effectiveness::PerUserScores;
use crate::error::{invalid, Error, Result};
use crate::model::{contains_sorted, synthetic_user_ids, Catalog, Interactions, Qrels, RunSet};
use crate::relevance_aware::Strategy;
use crate::user_fairness::SimilarityMatrix;
use rand::seq::{IteratorRandom, SliceRandom};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Weibull};
use serde::{Deserialize, Serialize};

/// Name and version of the PRNG behind every seeded generator.
pub const PRNG_NAME: &str = "ChaCha8 (rand_chacha 0.3)";

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Whether items from a user's history may be recommended again.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Repeatability {
    Repeatable,
    Nonrepeatable,
}

fn check_k(k: usize, catalog: &Catalog, m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::Empty("users"));
    }
    if k == 0 || k > catalog.len() {
        return Err(invalid("k", format!("must lie in 1..={}", catalog.len())));
    }
    Ok(())
}

fn history_of<'a>(mode: Repeatability, interactions: Option<&'a Interactions>, user: &str) -> Result<&'a [usize]> {
    match mode {
        Repeatability::Repeatable => Ok(&[]),
        Repeatability::Nonrepeatable => interactions
            .map(|h| h.history(user))
            .ok_or_else(|| invalid("interactions", "the nonrepeatable setting needs interaction histories")),
    }
}

/// Spread exposure as evenly as possible.
///
/// Repeatable mode deals slots cyclically (`(u*k + s) mod n`), so item counts
/// differ by at most one. Nonrepeatable mode gives each user, in order, the `k`
/// least exposed items outside their history (ties by item id); a user with
/// fewer recommendable items receives a shorter list.
pub fn most_fair_run(
    mode: Repeatability,
    interactions: Option<&Interactions>,
    catalog: &Catalog,
    users: &[String],
    k: usize,
) -> Result<RunSet> {
    check_k(k, catalog, users.len())?;
    let n = catalog.len();
    let mut counts = vec![0usize; n];
    let mut lists = Vec::with_capacity(users.len());
    for (u, id) in users.iter().enumerate() {
        let list: Vec<usize> = match mode {
            Repeatability::Repeatable => (0..k).map(|s| (u * k + s) % n).collect(),
            Repeatability::Nonrepeatable => {
                let hist = history_of(mode, interactions, id)?;
                let mut cands: Vec<usize> = (0..n).filter(|&i| !contains_sorted(hist, i)).collect();
                cands.sort_by_key(|&i| (counts[i], i));
                cands.truncate(k);
                cands
            }
        };
        for &i in &list {
            counts[i] += 1;
        }
        lists.push(list);
    }
    RunSet::new(users.to_vec(), lists)
}

/// Concentrate exposure on the same `k` items.
///
/// Repeatable mode recommends items `0..k` to everyone. Nonrepeatable mode
/// replaces any item from a user's history with the lowest-id recommendable
/// item not already in the list.
pub fn most_unfair_run(
    mode: Repeatability,
    interactions: Option<&Interactions>,
    catalog: &Catalog,
    users: &[String],
    k: usize,
) -> Result<RunSet> {
    check_k(k, catalog, users.len())?;
    let n = catalog.len();
    let mut lists = Vec::with_capacity(users.len());
    for id in users {
        let hist = history_of(mode, interactions, id)?;
        let mut list: Vec<usize> = (0..k).collect();
        let mut spare = (k..n).filter(|&i| !contains_sorted(hist, i));
        let mut out = Vec::with_capacity(k);
        for i in list.drain(..) {
            if !contains_sorted(hist, i) {
                out.push(i);
            } else if let Some(j) = spare.next() {
                out.push(j);
            }
        }
        lists.push(out);
    }
    RunSet::new(users.to_vec(), lists)
}

/// Progressive insertion of items that are both least exposed and relevant.
#[derive(Debug, Clone, PartialEq)]
pub struct InsertLe {
    pub qrels: Qrels,
    /// `runs[t]` has the bottom `t` slots of every non-anchor user replaced (`P = t/k`).
    pub runs: Vec<RunSet>,
    pub catalog: Catalog,
}

/// Build the insertion sequence with `m` users, `n >= km` items and cut-off `k`.
///
/// Step 0 recommends items `0..k` to everyone; they are relevant only to the
/// anchor user `u0`, whose list never changes. User `u >= 1` owns the items
/// `uk..uk+k`, and step `t` places item `uk + p` at each of the bottom `t`
/// positions `p`. At the final step all `km` recommended items are distinct.
pub fn insert_le_relevant(m: usize, n: usize, k: usize) -> Result<InsertLe> {
    if m == 0 || k == 0 {
        return Err(invalid("m, k", "must be positive"));
    }
    if n < k * m {
        return Err(invalid("n", format!("needs at least km = {} items", k * m)));
    }
    let users = synthetic_user_ids(m);
    let sets: Vec<Vec<usize>> = (0..m).map(|u| (u * k..u * k + k).collect()).collect();
    let qrels = Qrels::new(users.clone(), sets)?;
    let runs = (0..=k)
        .map(|t| {
            let lists = (0..m)
                .map(|u| {
                    (0..k)
                        .map(|p| if u > 0 && p >= k - t { u * k + p } else { p })
                        .collect()
                })
                .collect();
            RunSet::new(users.clone(), lists)
        })
        .collect::<Result<_>>()?;
    Ok(InsertLe {
        qrels,
        runs,
        catalog: Catalog::with_size(n),
    })
}

/// Re-rank the window of positions `start..start+width` (1-based) as `1..=width`.
pub fn sliding_window(run: &RunSet, width: usize, start: usize) -> Result<RunSet> {
    if width == 0 || start == 0 {
        return Err(invalid("window", "width and start must be positive"));
    }
    let lo = start - 1;
    let hi = lo + width;
    for u in 0..run.m() {
        if run.list(u).len() < hi {
            return Err(invalid(
                "window",
                format!("positions {start}..{} exceed the list of user {}", hi, run.user(u)),
            ));
        }
    }
    let lists = run.lists().iter().map(|l| l[lo..hi].to_vec()).collect();
    let out = RunSet::new(run.users().to_vec(), lists)?;
    match run.scores() {
        Some(s) => out.with_scores(s.iter().map(|row| row[lo..hi].to_vec()).collect()),
        None => Ok(out),
    }
}

/// Judgment sequence from [`add_relevant_beyond_topk`].
#[derive(Debug, Clone, PartialEq)]
pub struct QrelsSequence {
    /// `qrels[t]` has `t` extra relevant items per user; `qrels[0]` is the input.
    pub qrels: Vec<Qrels>,
    /// Set when some user ran out of candidates before `count` iterations.
    pub stopped_early: Option<String>,
}

/// Flip irrelevant items ranked below `k` to relevant, one per user per iteration.
///
/// [`Strategy::Top`] starts from position `k + 1` and moves down; [`Strategy::Bottom`]
/// starts from the end of the list and moves up.
pub fn add_relevant_beyond_topk(
    run: &RunSet,
    qrels: &Qrels,
    k: usize,
    strategy: Strategy,
    count: usize,
) -> Result<QrelsSequence> {
    if !matches!(strategy, Strategy::Top | Strategy::Bottom) {
        return Err(invalid("strategy", "use top or bottom"));
    }
    let aligned = qrels.aligned(run);
    let cands: Vec<Vec<usize>> = (0..run.m())
        .map(|u| {
            let rel = aligned[u].unwrap_or(&[]);
            let tail = run.list(u).get(k..).unwrap_or(&[]);
            let mut c: Vec<usize> = tail.iter().copied().filter(|&i| !contains_sorted(rel, i)).collect();
            if strategy == Strategy::Bottom {
                c.reverse();
            }
            c
        })
        .collect();
    let mut out = vec![qrels.clone()];
    let mut stopped_early = None;
    for t in 1..=count {
        if let Some(u) = (0..run.m()).find(|&u| cands[u].len() < t) {
            stopped_early = Some(format!(
                "user {} has only {} candidates beyond position {k}; stopped after {} iterations",
                run.user(u),
                cands[u].len(),
                t - 1
            ));
            break;
        }
        let mut sets: Vec<Vec<usize>> = (0..qrels.len()).map(|q| qrels.relevant(q).to_vec()).collect();
        for u in 0..run.m() {
            let q = qrels.user_index(run.user(u));
            match q {
                Some(q) => sets[q].extend_from_slice(&cands[u][..t]),
                None => return Err(Error::ModelSetMismatch),
            }
        }
        out.push(Qrels::new(qrels.users().to_vec(), sets)?);
    }
    Ok(QrelsSequence {
        qrels: out,
        stopped_early,
    })
}

/// Similarity value distribution for [`sample_similarity`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SimDistribution {
    /// Weibull with unit scale and shape `lambda`.
    Weibull(f64),
    /// Standard normal.
    Normal,
}

/// Draw `count` values and min-max normalize them to `[0, 1]`.
pub fn sample_values(dist: SimDistribution, count: usize, seed: u64) -> Result<Vec<f64>> {
    let mut r = rng(seed);
    let mut v: Vec<f64> = match dist {
        SimDistribution::Weibull(lambda) => {
            if !(lambda > 0.0 && lambda.is_finite()) {
                return Err(invalid("lambda", "must be positive"));
            }
            let d = Weibull::new(1.0, lambda).map_err(|e| invalid("lambda", e.to_string()))?;
            (0..count).map(|_| d.sample(&mut r)).collect()
        }
        SimDistribution::Normal => {
            let d = Normal::new(0.0, 1.0).expect("unit normal");
            (0..count).map(|_| d.sample(&mut r)).collect()
        }
    };
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi > lo {
        v.iter_mut().for_each(|x| *x = (*x - lo) / (hi - lo));
    }
    Ok(v)
}

/// Sample one similarity per user pair and assign them to pairs at random.
pub fn sample_similarity(dist: SimDistribution, users: Vec<String>, seed: u64) -> Result<SimilarityMatrix> {
    let m = users.len();
    let pairs = m * m.saturating_sub(1) / 2;
    let mut values = sample_values(dist, pairs, seed)?;
    values.shuffle(&mut rng(seed.wrapping_add(1)));
    let mut s = SimilarityMatrix::uniform(users, 0.0)?;
    s.set_pair_values(values)?;
    s.normalize_min_max();
    Ok(s)
}

/// Sample skewness `E[(x - mean)^3] / sd^3`.
pub fn skewness(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let m2 = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    let m3 = values.iter().map(|x| (x - mean).powi(3)).sum::<f64>() / n;
    m3 / m2.powf(1.5)
}

/// Pairing direction for [`assign_similarity`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Assignment {
    /// The most similar pairs get the smallest score gaps.
    MostFair,
    /// The most similar pairs get the largest score gaps.
    MostUnfair,
}

/// Absolute score gaps `|s_a - s_b|` in pair order.
pub fn pair_diffs(scores: &PerUserScores) -> Vec<f64> {
    let s = &scores.values;
    let m = s.len();
    let mut out = Vec::with_capacity(m * m.saturating_sub(1) / 2);
    for a in 0..m {
        for b in a + 1..m {
            out.push((s[a] - s[b]).abs());
        }
    }
    out
}

/// Assign the similarity multiset `sims` to user pairs according to their score gaps.
pub fn assign_similarity(
    users: Vec<String>,
    sims: &[f64],
    diffs: &[f64],
    mode: Assignment,
) -> Result<SimilarityMatrix> {
    if sims.len() != diffs.len() {
        return Err(invalid("sims", "needs one value per user pair"));
    }
    let mut order: Vec<usize> = (0..diffs.len()).collect();
    order.sort_by(|&a, &b| diffs[a].total_cmp(&diffs[b]).then(a.cmp(&b)));
    let mut sorted = sims.to_vec();
    match mode {
        Assignment::MostFair => sorted.sort_by(|a, b| b.total_cmp(a)),
        Assignment::MostUnfair => sorted.sort_by(|a, b| a.total_cmp(b)),
    }
    let mut values = vec![0.0; diffs.len()];
    for (rank, &pair) in order.iter().enumerate() {
        values[pair] = sorted[rank];
    }
    let mut s = SimilarityMatrix::uniform(users, 0.0)?;
    s.set_pair_values(values)?;
    Ok(s)
}

/// A run where a fraction of users receive only irrelevant items.
///
/// Every user first gets up to `k` relevant items drawn at random, padded with
/// random irrelevant ones, and separately a list of `k` random irrelevant
/// items. A seeded shuffle fixes the user order; the first
/// `round(frac_zero * m)` users in it receive the irrelevant list. Draws do not
/// depend on `frac_zero`, so the zeroed sets are nested as the fraction grows.
pub fn vary_relevance(qrels: &Qrels, catalog: &Catalog, k: usize, frac_zero: f64, seed: u64) -> Result<RunSet> {
    if !(0.0..=1.0).contains(&frac_zero) {
        return Err(invalid("frac_zero", "must lie in [0, 1]"));
    }
    check_k(k, catalog, qrels.len())?;
    let n = catalog.len();
    let m = qrels.len();
    let mut r = rng(seed);
    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(&mut r);
    let mut relevant_lists = Vec::with_capacity(m);
    let mut irrelevant_lists = Vec::with_capacity(m);
    for u in 0..m {
        let rel = qrels.relevant(u);
        if n - rel.len() < k {
            return Err(invalid(
                "catalog",
                format!("user {} has fewer than k irrelevant items", qrels.users()[u]),
            ));
        }
        let mut list: Vec<usize> = rel.choose_multiple(&mut r, k.min(rel.len())).copied().collect();
        let mut pad = (0..n)
            .filter(|&i| !contains_sorted(rel, i))
            .choose_multiple(&mut r, k - list.len());
        pad.shuffle(&mut r);
        list.extend(pad);
        relevant_lists.push(list);
        let mut zero = (0..n).filter(|&i| !contains_sorted(rel, i)).choose_multiple(&mut r, k);
        zero.shuffle(&mut r);
        irrelevant_lists.push(zero);
    }
    let zeroed = (frac_zero * m as f64).round() as usize;
    let mut lists = relevant_lists;
    for &u in order.iter().take(zeroed) {
        lists[u] = std::mem::take(&mut irrelevant_lists[u]);
    }
    RunSet::new(qrels.users().to_vec(), lists)
}
