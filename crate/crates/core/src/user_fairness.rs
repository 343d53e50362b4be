//! Individual user fairness: dispersion of per-user effectiveness, the envy
//! family (ME, MME, PEU), similarity kernels, UF and PUF.

use crate::effectiveness::{score_list, EffMeasure, PerUserScores};
use crate::error::{invalid, Error, Result};
use crate::measure::{Direction, MeasureResult, Variant, Warning};
use crate::model::{Interactions, Qrels, RunSet};
use crate::stats;
use rayon::prelude::*;
use std::collections::HashMap;

/// Symmetric user-pair similarity stored as the strict upper triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    users: Vec<String>,
    index: HashMap<String, usize>,
    values: Vec<f64>,
    normalized: bool,
    /// Users with an empty history; their similarity to everyone is 0.
    pub empty_history: Vec<String>,
}

fn tri(m: usize, a: usize, b: usize) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    a * (2 * m - a - 1) / 2 + (b - a - 1)
}

impl SimilarityMatrix {
    /// Build from a pair function evaluated for every `a < b`.
    pub fn from_fn(users: Vec<String>, f: impl Fn(usize, usize) -> f64 + Sync) -> Result<Self> {
        let m = users.len();
        let mut index = HashMap::with_capacity(m);
        for (p, u) in users.iter().enumerate() {
            if index.insert(u.clone(), p).is_some() {
                return Err(Error::DuplicateId(u.clone()));
            }
        }
        let rows: Vec<Vec<f64>> = (0..m)
            .into_par_iter()
            .map(|a| (a + 1..m).map(|b| f(a, b)).collect())
            .collect();
        Ok(SimilarityMatrix {
            users,
            index,
            values: rows.concat(),
            normalized: false,
            empty_history: Vec::new(),
        })
    }

    /// Every pair has similarity `value`.
    pub fn uniform(users: Vec<String>, value: f64) -> Result<Self> {
        SimilarityMatrix::from_fn(users, |_, _| value)
    }

    /// Build from `(u, u', sim)` triples; missing pairs are 0.
    pub fn from_triples(users: Vec<String>, triples: &[(String, String, f64)]) -> Result<Self> {
        let mut s = SimilarityMatrix::uniform(users, 0.0)?;
        for (a, b, v) in triples {
            let ia = s
                .index
                .get(a)
                .copied()
                .ok_or_else(|| invalid("similarity", format!("unknown user {a}")))?;
            let ib = s
                .index
                .get(b)
                .copied()
                .ok_or_else(|| invalid("similarity", format!("unknown user {b}")))?;
            if ia == ib {
                continue;
            }
            let m = s.users.len();
            s.values[tri(m, ia, ib)] = *v;
        }
        Ok(s)
    }

    pub fn m(&self) -> usize {
        self.users.len()
    }

    pub fn users(&self) -> &[String] {
        &self.users
    }

    pub fn user_index(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Similarity of users `a != b` by index.
    pub fn get(&self, a: usize, b: usize) -> f64 {
        assert_ne!(a, b, "the diagonal is not stored");
        self.values[tri(self.users.len(), a, b)]
    }

    /// All pair values in `(0,1), (0,2), ..., (1,2), ...` order.
    pub fn pair_values(&self) -> &[f64] {
        &self.values
    }

    /// Overwrite pair values in pair order.
    pub fn set_pair_values(&mut self, values: Vec<f64>) -> Result<()> {
        if values.len() != self.values.len() {
            return Err(invalid("similarity", "wrong number of pair values"));
        }
        self.values = values;
        Ok(())
    }

    /// Min-max normalize over all pairs; a constant matrix is left unchanged.
    pub fn normalize_min_max(&mut self) {
        let lo = self.values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if hi > lo {
            self.values.iter_mut().for_each(|v| *v = (*v - lo) / (hi - lo));
        }
        self.normalized = true;
    }

    /// Triples `(u, u', sim)` for `u < u'`.
    pub fn triples(&self) -> Vec<(String, String, f64)> {
        let m = self.users.len();
        let mut out = Vec::with_capacity(self.values.len());
        for a in 0..m {
            for b in a + 1..m {
                out.push((self.users[a].clone(), self.users[b].clone(), self.get(a, b)));
            }
        }
        out
    }
}

/// Per-item categorical feature distributions over `categories` classes.
#[derive(Debug, Clone, PartialEq)]
pub struct ItemFeatures {
    pub categories: usize,
    pub dist: Vec<Vec<(usize, f64)>>,
}

/// Similarity kernel over interaction histories.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SimilarityKind {
    Jaccard,
    Cosine,
    /// `gamma * Jaccard + (1 - gamma) * (1 - JS divergence of feature distributions)`.
    Uf(f64),
}

fn intersection(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

/// Jaccard similarity of two sorted sets; 0 when both are empty.
pub fn jaccard(a: &[usize], b: &[usize]) -> f64 {
    let inter = intersection(a, b);
    let union = a.len() + b.len() - inter;
    if union == 0 {
        0.0
    } else {
        inter as f64 / union as f64
    }
}

/// Cosine similarity of two binary vectors given as sorted index sets.
pub fn binary_cosine(a: &[usize], b: &[usize]) -> f64 {
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    intersection(a, b) as f64 / ((a.len() * b.len()) as f64).sqrt()
}

/// Jensen-Shannon divergence in base 2 between two dense distributions.
pub fn js_divergence(p: &[f64], q: &[f64]) -> f64 {
    let kl = |a: &[f64], b: &[f64]| -> f64 {
        a.iter()
            .zip(b)
            .filter(|(x, _)| **x > 0.0)
            .map(|(x, y)| x * (x / y).log2())
            .sum()
    };
    let mid: Vec<f64> = p.iter().zip(q).map(|(a, b)| 0.5 * (a + b)).collect();
    0.5 * kl(p, &mid) + 0.5 * kl(q, &mid)
}

fn user_distribution(history: &[usize], features: &ItemFeatures) -> Option<Vec<f64>> {
    let mut d = vec![0.0; features.categories];
    for &i in history {
        for &(c, w) in features.dist.get(i).map(Vec::as_slice).unwrap_or(&[]) {
            d[c] += w;
        }
    }
    let total: f64 = d.iter().sum();
    if total <= 0.0 {
        return None;
    }
    d.iter_mut().for_each(|v| *v /= total);
    Some(d)
}

/// Pairwise user similarity from interaction histories.
pub fn similarity(
    kind: SimilarityKind,
    interactions: &Interactions,
    features: Option<&ItemFeatures>,
    normalize: bool,
) -> Result<SimilarityMatrix> {
    let users = interactions.users().to_vec();
    let m = users.len();
    let h: Vec<&[usize]> = (0..m).map(|u| interactions.history_at(u)).collect();
    let mut s = match kind {
        SimilarityKind::Jaccard => SimilarityMatrix::from_fn(users, |a, b| jaccard(h[a], h[b]))?,
        SimilarityKind::Cosine => SimilarityMatrix::from_fn(users, |a, b| binary_cosine(h[a], h[b]))?,
        SimilarityKind::Uf(gamma) => {
            if !(0.0..=1.0).contains(&gamma) {
                return Err(invalid("gamma", "must lie in [0, 1]"));
            }
            let features = features.ok_or_else(|| invalid("features", "the UF kernel needs item features"))?;
            for d in &features.dist {
                if d.iter().any(|&(c, w)| c >= features.categories || w < 0.0) {
                    return Err(invalid("features", "category out of range or negative weight"));
                }
            }
            let dists: Vec<Option<Vec<f64>>> = h.iter().map(|hist| user_distribution(hist, features)).collect();
            SimilarityMatrix::from_fn(users, |a, b| {
                let js_sim = match (&dists[a], &dists[b]) {
                    (Some(p), Some(q)) => 1.0 - js_divergence(p, q),
                    _ => 0.0,
                };
                gamma * jaccard(h[a], h[b]) + (1.0 - gamma) * js_sim
            })?
        }
    };
    s.empty_history = (0..m)
        .filter(|&u| h[u].is_empty())
        .map(|u| interactions.users()[u].clone())
        .collect();
    if normalize {
        s.normalize_min_max();
    }
    Ok(s)
}

/// Utility of a list for a user.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Utility {
    /// Relevant items of `u` in the top `k` of the list, over `min(|R*_u|, k)`.
    Phi,
    /// An effectiveness measure evaluated with `u`'s judgments.
    Measure(EffMeasure),
}

/// `phi_u(L)`: share of `u`'s attainable top-`k` relevance present in `list`.
/// `None` when `u` has no relevant item.
pub fn phi_utility(list: &[usize], relevant: &[usize], k: usize) -> Option<f64> {
    if relevant.is_empty() || k == 0 {
        return None;
    }
    let hits = list
        .iter()
        .take(k)
        .filter(|&&i| relevant.binary_search(&i).is_ok())
        .count();
    Some(hits as f64 / relevant.len().min(k) as f64)
}

fn utility(kind: Utility, list: &[usize], relevant: &[usize], k: usize) -> f64 {
    match kind {
        Utility::Phi => phi_utility(list, relevant, k).unwrap_or(0.0),
        Utility::Measure(m) => score_list(m, list, relevant, k),
    }
}

/// Dispersion statistic over per-user scores.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DispersionKind {
    Sd,
    Gini,
}

/// Population SD or Gini index of per-user scores.
pub fn dispersion(kind: DispersionKind, scores: &PerUserScores) -> Result<MeasureResult> {
    if scores.values.len() < 2 {
        return Err(invalid("scores", "dispersion needs at least two users"));
    }
    let name = match kind {
        DispersionKind::Sd => "SD",
        DispersionKind::Gini => "Gini",
    };
    let res = match kind {
        DispersionKind::Sd => MeasureResult::new(
            name,
            Variant::Original,
            Direction::Lower,
            stats::population_sd(&scores.values).expect("non-empty"),
        ),
        DispersionKind::Gini => match stats::gini(&scores.values) {
            Some(g) => MeasureResult::new(name, Variant::Original, Direction::Lower, g),
            None => MeasureResult::undefined(name, Variant::Original, Direction::Lower, "every user scores 0"),
        },
    };
    Ok(res.param("users", scores.values.len() as f64))
}

/// Envy-based measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EnvyKind {
    /// Mean envy over ordered user pairs.
    Me,
    /// Mean over users of their maximum envy.
    Mme,
    /// Fraction of users whose maximum envy exceeds `epsilon`.
    Peu(f64),
}

/// Per-user envy matrix summary: for each included user, (sum of envy, max envy).
fn envy_rows(run: &RunSet, qrels: &Qrels, k: usize, kind: Utility) -> (Vec<usize>, Vec<(f64, f64)>) {
    let rel: Vec<&[usize]> = qrels.aligned(run).into_iter().map(|r| r.unwrap_or(&[])).collect();
    let included: Vec<usize> = (0..run.m()).filter(|&u| !rel[u].is_empty()).collect();
    let rows = included
        .par_iter()
        .map(|&u| {
            let own = utility(kind, run.list(u), rel[u], k);
            let mut sum = 0.0;
            let mut max: f64 = 0.0;
            for &v in &included {
                if v == u {
                    continue;
                }
                let e = (utility(kind, run.list(v), rel[u], k) - own).max(0.0);
                sum += e;
                max = max.max(e);
            }
            (sum, max)
        })
        .collect();
    (included, rows)
}

/// ME, MME or PEU over users with at least one relevant item.
pub fn envy_family(
    kind: EnvyKind,
    run: &RunSet,
    qrels: &Qrels,
    k: usize,
    utility_kind: Utility,
) -> Result<MeasureResult> {
    if k == 0 {
        return Err(invalid("k", "must be positive"));
    }
    let (included, rows) = envy_rows(run, qrels, k, utility_kind);
    let m = included.len();
    if m < 2 {
        return Err(invalid("run", "envy needs at least two users with relevant items"));
    }
    let mf = m as f64;
    let (name, v) = match kind {
        EnvyKind::Me => ("ME", 2.0 / (mf * (mf - 1.0)) * rows.iter().map(|r| r.0).sum::<f64>()),
        EnvyKind::Mme => ("MME", rows.iter().map(|r| r.1).sum::<f64>() / mf),
        EnvyKind::Peu(eps) => {
            if eps < 0.0 {
                return Err(invalid("epsilon", "must be non-negative"));
            }
            ("PEU", rows.iter().filter(|r| r.1 > eps).count() as f64 / mf)
        }
    };
    let mut res = MeasureResult::new(name, Variant::Original, Direction::Lower, v).param("k", k as f64);
    if let EnvyKind::Peu(eps) = kind {
        res = res.param("epsilon", eps);
    }
    let excluded = run.m() - m;
    if excluded > 0 {
        res = res.warn(Warning::ExcludedUsers {
            count: excluded,
            reason: "no relevant item".into(),
        });
    }
    Ok(res)
}

/// Item representation used by the list distance of UF.
#[derive(Debug, Clone, PartialEq)]
pub enum ItemRepr {
    /// Binary vectors as sorted index sets.
    Binary(Vec<Vec<usize>>),
    /// Dense real vectors.
    Dense(Vec<Vec<f64>>),
}

impl ItemRepr {
    /// One-hot user-interaction vectors: item `i` is the set of users who interacted with it.
    pub fn from_interactions(interactions: &Interactions, n: usize) -> Self {
        let mut v = vec![Vec::new(); n];
        for u in 0..interactions.len() {
            for &i in interactions.history_at(u) {
                if i < n {
                    v[i].push(u);
                }
            }
        }
        ItemRepr::Binary(v)
    }

    fn cosine(&self, a: usize, b: usize) -> f64 {
        match self {
            ItemRepr::Binary(v) => binary_cosine(&v[a], &v[b]),
            ItemRepr::Dense(v) => {
                let (x, y) = (&v[a], &v[b]);
                let dot: f64 = x.iter().zip(y).map(|(p, q)| p * q).sum();
                let nx: f64 = x.iter().map(|p| p * p).sum::<f64>().sqrt();
                let ny: f64 = y.iter().map(|p| p * p).sum::<f64>().sqrt();
                if nx == 0.0 || ny == 0.0 {
                    0.0
                } else {
                    dot / (nx * ny)
                }
            }
        }
    }

    fn len(&self) -> usize {
        match self {
            ItemRepr::Binary(v) => v.len(),
            ItemRepr::Dense(v) => v.len(),
        }
    }
}

/// Mean pairwise cosine distance between the top-`k` items of two lists.
pub fn list_distance(a: &[usize], b: &[usize], repr: &ItemRepr) -> f64 {
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    let mut s = 0.0;
    for &i in a {
        for &j in b {
            s += 1.0 - repr.cosine(i, j);
        }
    }
    s / (a.len() * b.len()) as f64
}

/// UF: `log_{#pairs}` of the similarity-weighted list distance summed over
/// user pairs whose similarity reaches `threshold` (default mean + SD).
pub fn uf(
    run: &RunSet,
    sim: &SimilarityMatrix,
    repr: &ItemRepr,
    k: usize,
    threshold: Option<f64>,
) -> Result<MeasureResult> {
    let m = run.m();
    let idx: Vec<usize> = run
        .users()
        .iter()
        .map(|u| {
            sim.user_index(u)
                .ok_or_else(|| invalid("similarity", format!("no row for user {u}")))
        })
        .collect::<Result<_>>()?;
    if run.lists().iter().flatten().any(|&i| i >= repr.len()) {
        return Err(invalid("item_repr", "missing representation for a recommended item"));
    }
    let pairs = m * m.saturating_sub(1) / 2;
    let values: Vec<f64> = (0..m)
        .flat_map(|a| (a + 1..m).map(move |b| (a, b)))
        .map(|(a, b)| sim.get(idx[a], idx[b]))
        .collect();
    let t = match threshold {
        Some(t) => t,
        None => {
            let mu = stats::mean(&values).unwrap_or(0.0);
            mu + stats::population_sd(&values).unwrap_or(0.0)
        }
    };
    let contributions: Vec<f64> = (0..m)
        .into_par_iter()
        .map(|a| {
            let mut s = 0.0;
            for b in a + 1..m {
                let w = sim.get(idx[a], idx[b]);
                if w >= t {
                    s += w * list_distance(run.top_k(a, k), run.top_k(b, k), repr);
                }
            }
            s
        })
        .collect();
    let similar = values.iter().filter(|&&v| v >= t).count();
    let arg: f64 = contributions.iter().sum();
    let res = if similar == 0 {
        MeasureResult::undefined(
            "UF",
            Variant::Original,
            Direction::Lower,
            "no user pair reaches the threshold",
        )
    } else if pairs < 2 {
        MeasureResult::undefined(
            "UF",
            Variant::Original,
            Direction::Lower,
            "log base needs at least two user pairs",
        )
    } else if arg <= 0.0 {
        MeasureResult::undefined("UF", Variant::Original, Direction::Lower, "log of zero (-inf)")
    } else {
        MeasureResult::new(
            "UF",
            Variant::Original,
            Direction::Lower,
            arg.ln() / (pairs as f64).ln(),
        )
    };
    Ok(res.param("k", k as f64).param("threshold", t))
}

/// PUF: similarity-weighted mean absolute score gap over unordered user pairs.
pub fn puf(scores: &PerUserScores, sim: &SimilarityMatrix) -> Result<MeasureResult> {
    let m = scores.values.len();
    if m < 2 {
        return Err(invalid("scores", "PUF needs at least two users"));
    }
    let idx: Vec<usize> = scores
        .users
        .iter()
        .map(|u| {
            sim.user_index(u)
                .ok_or_else(|| invalid("similarity", format!("no row for user {u}")))
        })
        .collect::<Result<_>>()?;
    let s = &scores.values;
    let rows: Vec<f64> = (0..m)
        .into_par_iter()
        .map(|a| {
            (a + 1..m)
                .map(|b| sim.get(idx[a], idx[b]) * (s[a] - s[b]).abs())
                .sum::<f64>()
        })
        .collect();
    let mf = m as f64;
    let v = 2.0 / (mf * (mf - 1.0)) * rows.iter().sum::<f64>();
    Ok(MeasureResult::new("PUF", Variant::Original, Direction::Lower, v).param("users", mf))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn phi_values() {
        assert_eq!(phi_utility(&[0, 1, 2], &[0, 1, 2, 5], 3), Some(1.0));
        assert_eq!(phi_utility(&[3, 4], &[0, 1], 2), Some(0.0));
        let list: Vec<usize> = (10..20).chain([0]).collect();
        let mut list2 = list.clone();
        list2[3] = 0;
        list2[10] = 13;
        assert_eq!(phi_utility(&list2, &[0, 1], 10), Some(0.5));
        assert_eq!(phi_utility(&list, &[], 10), None);
    }

    #[test]
    fn dispersion_values() {
        let s = PerUserScores::from_values("P", vec![0.0, 1.0]);
        assert!(close(dispersion(DispersionKind::Sd, &s).unwrap().score(), 0.5));
        let s = PerUserScores::from_values("P", vec![0.0, 0.0, 1.0, 1.0]);
        assert!(close(dispersion(DispersionKind::Gini, &s).unwrap().score(), 0.5));
        let s = PerUserScores::from_values("P", vec![0.0, 0.0]);
        assert!(dispersion(DispersionKind::Gini, &s).unwrap().is_undefined());
    }

    #[test]
    fn envy_two_users() {
        // u0 has 1/3 on its own list and would get 2/3 on u1's list (P@3).
        let run = RunSet::from_lists(vec![vec![0, 5, 6], vec![0, 1, 7]]);
        let q = Qrels::from_lists(vec![vec![0, 1, 2], vec![7]]);
        let u = Utility::Measure(EffMeasure::P);
        let me = envy_family(EnvyKind::Me, &run, &q, 3, u).unwrap().score();
        let mme = envy_family(EnvyKind::Mme, &run, &q, 3, u).unwrap().score();
        let peu = envy_family(EnvyKind::Peu(0.05), &run, &q, 3, u).unwrap().score();
        assert!(close(me, 1.0 / 3.0));
        assert!(close(mme, 1.0 / 6.0));
        assert!(close(peu, 0.5));
    }

    #[test]
    fn kernels() {
        assert!(close(jaccard(&[0, 1], &[1, 2]), 1.0 / 3.0));
        assert!(close(jaccard(&[0, 1], &[0, 1]), 1.0));
        assert!(close(binary_cosine(&[0, 1], &[0, 1]), 1.0));
        assert_eq!(jaccard(&[0], &[1]), 0.0);
        assert!(close(js_divergence(&[1.0, 0.0], &[0.0, 1.0]), 1.0));
    }

    #[test]
    fn similarity_reports_empty_history() {
        let inter = Interactions::from_lists(vec![vec![0, 1], vec![1, 2], vec![]]);
        let s = similarity(SimilarityKind::Jaccard, &inter, None, false).unwrap();
        assert!(close(s.get(0, 1), 1.0 / 3.0));
        assert_eq!(s.get(0, 2), 0.0);
        assert_eq!(s.empty_history, vec!["u2".to_string()]);
    }

    #[test]
    fn puf_values() {
        let users = crate::model::synthetic_user_ids(3);
        let sim = SimilarityMatrix::uniform(users, 1.0).unwrap();
        let s = PerUserScores::from_values("P", vec![1.0, 1.0, 0.0]);
        assert!(close(puf(&s, &sim).unwrap().score(), 2.0 / 3.0));
        let sim2 = SimilarityMatrix::uniform(crate::model::synthetic_user_ids(2), 1.0).unwrap();
        let s2 = PerUserScores::from_values("P", vec![1.0, 0.0]);
        assert!(close(puf(&s2, &sim2).unwrap().score(), 1.0));
    }

    #[test]
    fn uf_edges() {
        let run = RunSet::from_lists(vec![vec![0], vec![0], vec![1]]);
        let users = run.users().to_vec();
        let repr = ItemRepr::Binary(vec![vec![0], vec![0]]);
        let sim = SimilarityMatrix::uniform(users.clone(), 1.0).unwrap();
        assert!(uf(&run, &sim, &repr, 1, None).unwrap().is_undefined());
        let sim = SimilarityMatrix::uniform(users, 0.0).unwrap();
        assert!(uf(&run, &sim, &repr, 1, Some(0.5)).unwrap().is_undefined());
    }
}
