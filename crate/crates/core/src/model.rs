//! Core domain types: catalog, ranked runs, binary relevance judgments,
//! interaction histories, user attribute tables and examination functions.
//!
//! Item and user identifiers are opaque strings. Internally items are dense
//! indices into a [`Catalog`]; users are dense indices into the owning
//! [`RunSet`] or [`Qrels`]. Wherever a tiebreak "by ascending id" is needed,
//! index order is used, so loaders keep identifiers sorted.

use crate::error::{invalid, Error, Result};
use std::collections::{BTreeMap, HashMap, HashSet};

fn pad_width(n: usize) -> usize {
    n.saturating_sub(1).to_string().len()
}

/// Synthetic user identifiers `u0..u{m-1}`, zero padded so lexicographic
/// order equals numeric order.
pub fn synthetic_user_ids(m: usize) -> Vec<String> {
    let w = pad_width(m);
    (0..m).map(|u| format!("u{u:0w$}")).collect()
}

fn synthetic_item_ids(n: usize) -> Vec<String> {
    let w = pad_width(n);
    (0..n).map(|i| format!("i{i:0w$}")).collect()
}

fn build_index(ids: &[String]) -> Result<HashMap<String, usize>> {
    let mut index = HashMap::with_capacity(ids.len());
    for (pos, id) in ids.iter().enumerate() {
        if index.insert(id.clone(), pos).is_some() {
            return Err(Error::DuplicateId(id.clone()));
        }
    }
    Ok(index)
}

/// The set of all items `I`, with `n = |I|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Catalog {
    ids: Vec<String>,
    index: HashMap<String, usize>,
}

impl Catalog {
    pub fn new<S: Into<String>>(ids: impl IntoIterator<Item = S>) -> Result<Self> {
        let ids: Vec<String> = ids.into_iter().map(Into::into).collect();
        if ids.is_empty() {
            return Err(Error::Empty("catalog"));
        }
        let index = build_index(&ids)?;
        Ok(Catalog { ids, index })
    }

    /// Catalog of `n` synthetic items `i0..i{n-1}`.
    pub fn with_size(n: usize) -> Self {
        assert!(n >= 1, "catalog needs at least one item");
        let ids = synthetic_item_ids(n);
        let index = build_index(&ids).expect("synthetic ids are unique");
        Catalog { ids, index }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn id(&self, item: usize) -> &str {
        &self.ids[item]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }
}

/// Per-user ranked item lists (`L_u`), rank 1 first.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSet {
    users: Vec<String>,
    index: HashMap<String, usize>,
    lists: Vec<Vec<usize>>,
    scores: Option<Vec<Vec<f64>>>,
}

impl RunSet {
    pub fn new(users: Vec<String>, lists: Vec<Vec<usize>>) -> Result<Self> {
        if users.is_empty() {
            return Err(Error::Empty("run"));
        }
        if users.len() != lists.len() {
            return Err(invalid(
                "lists",
                format!("{} users but {} lists", users.len(), lists.len()),
            ));
        }
        let index = build_index(&users)?;
        Ok(RunSet {
            users,
            index,
            lists,
            scores: None,
        })
    }

    /// Run over synthetic users `u0..u{m-1}`.
    pub fn from_lists(lists: Vec<Vec<usize>>) -> Self {
        let users = synthetic_user_ids(lists.len());
        let index = build_index(&users).expect("synthetic ids are unique");
        RunSet {
            users,
            index,
            lists,
            scores: None,
        }
    }

    /// Build from `(user, item, rank)` entries; ranks must run 1, 2, ... per user.
    pub fn from_entries(entries: &[(String, usize, usize, Option<f64>)], catalog: &Catalog) -> Result<Self> {
        let mut per_user: BTreeMap<&str, Vec<(usize, usize, Option<f64>)>> = BTreeMap::new();
        for (user, item, rank, score) in entries {
            per_user.entry(user.as_str()).or_default().push((*rank, *item, *score));
        }
        let mut users = Vec::with_capacity(per_user.len());
        let mut lists = Vec::with_capacity(per_user.len());
        let mut scores = Vec::with_capacity(per_user.len());
        let mut any_score = false;
        for (user, mut rows) in per_user {
            rows.sort_by_key(|r| r.0);
            for (pos, row) in rows.iter().enumerate() {
                if row.0 != pos + 1 {
                    return Err(Error::NonContiguousRanks {
                        user: user.to_string(),
                        expected: pos + 1,
                        found: row.0,
                    });
                }
            }
            any_score |= rows.iter().any(|r| r.2.is_some());
            users.push(user.to_string());
            lists.push(rows.iter().map(|r| r.1).collect::<Vec<_>>());
            scores.push(rows.iter().map(|r| r.2.unwrap_or(f64::NAN)).collect());
        }
        let mut run = RunSet::new(users, lists)?;
        if any_score {
            run.scores = Some(scores);
        }
        validate_run(&run, catalog)?;
        Ok(run)
    }

    /// Attach per-entry predicted scores (same shape as the lists).
    pub fn with_scores(mut self, scores: Vec<Vec<f64>>) -> Result<Self> {
        if scores.len() != self.lists.len() || scores.iter().zip(&self.lists).any(|(s, l)| s.len() != l.len()) {
            return Err(invalid("scores", "shape differs from the ranked lists"));
        }
        self.scores = Some(scores);
        Ok(self)
    }

    pub fn m(&self) -> usize {
        self.users.len()
    }

    pub fn users(&self) -> &[String] {
        &self.users
    }

    pub fn user(&self, u: usize) -> &str {
        &self.users[u]
    }

    pub fn user_index(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn list(&self, u: usize) -> &[usize] {
        &self.lists[u]
    }

    pub fn lists(&self) -> &[Vec<usize>] {
        &self.lists
    }

    /// The first `min(k, len)` items of user `u`'s list.
    pub fn top_k(&self, u: usize, k: usize) -> &[usize] {
        let l = &self.lists[u];
        &l[..k.min(l.len())]
    }

    pub fn scores(&self) -> Option<&[Vec<f64>]> {
        self.scores.as_deref()
    }

    pub fn into_lists(self) -> Vec<Vec<usize>> {
        self.lists
    }
}

/// Check list invariants: no duplicate items within a list and every item in the catalog.
pub fn validate_run(run: &RunSet, catalog: &Catalog) -> Result<()> {
    let n = catalog.len();
    for (u, list) in run.lists().iter().enumerate() {
        let mut seen = HashSet::with_capacity(list.len());
        for &item in list {
            if item >= n {
                return Err(Error::UnknownItem {
                    user: run.user(u).to_string(),
                    item: format!("#{item}"),
                });
            }
            if !seen.insert(item) {
                return Err(Error::DuplicateItem {
                    user: run.user(u).to_string(),
                    item: catalog.id(item).to_string(),
                });
            }
        }
    }
    Ok(())
}

/// How many times each item appears in the top `k` across all users.
pub fn exposure_counts(run: &RunSet, k: usize, catalog: &Catalog) -> Vec<usize> {
    counts_of(run.lists(), k, catalog.len())
}

pub(crate) fn counts_of(lists: &[Vec<usize>], k: usize, n: usize) -> Vec<usize> {
    let mut counts = vec![0usize; n];
    for list in lists {
        for &i in list.iter().take(k) {
            counts[i] += 1;
        }
    }
    counts
}

/// Binary relevance judgments; `relevant(u)` is `R*_u`.
#[derive(Debug, Clone, PartialEq)]
pub struct Qrels {
    users: Vec<String>,
    index: HashMap<String, usize>,
    relevant: Vec<Vec<usize>>,
}

impl Qrels {
    pub fn new(users: Vec<String>, sets: Vec<Vec<usize>>) -> Result<Self> {
        if users.len() != sets.len() {
            return Err(invalid("qrels", "user and set counts differ"));
        }
        let index = build_index(&users)?;
        let relevant = sets
            .into_iter()
            .map(|mut s| {
                s.sort_unstable();
                s.dedup();
                s
            })
            .collect();
        Ok(Qrels { users, index, relevant })
    }

    /// Judgments over synthetic users `u0..u{m-1}` (aligned with [`RunSet::from_lists`]).
    pub fn from_lists(sets: Vec<Vec<usize>>) -> Self {
        let users = synthetic_user_ids(sets.len());
        Qrels::new(users, sets).expect("synthetic ids are unique")
    }

    pub fn len(&self) -> usize {
        self.users.len()
    }

    pub fn is_empty(&self) -> bool {
        self.users.is_empty()
    }

    pub fn users(&self) -> &[String] {
        &self.users
    }

    pub fn user_index(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    /// Sorted relevant items of user index `u`.
    pub fn relevant(&self, u: usize) -> &[usize] {
        &self.relevant[u]
    }

    pub fn is_relevant(&self, u: usize, item: usize) -> bool {
        self.relevant[u].binary_search(&item).is_ok()
    }

    /// Relevant items of the user with this id, if judged.
    pub fn for_user(&self, id: &str) -> Option<&[usize]> {
        self.user_index(id).map(|u| self.relevant[u].as_slice())
    }

    /// For each run user, their relevant set (`None` when not judged).
    pub fn aligned<'a>(&'a self, run: &RunSet) -> Vec<Option<&'a [usize]>> {
        run.users().iter().map(|u| self.for_user(u)).collect()
    }
}

pub(crate) fn contains_sorted(set: &[usize], item: usize) -> bool {
    set.binary_search(&item).is_ok()
}

/// Historical interactions `H_u` per user.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Interactions {
    users: Vec<String>,
    index: HashMap<String, usize>,
    items: Vec<Vec<usize>>,
}

impl Interactions {
    pub fn new(users: Vec<String>, histories: Vec<Vec<usize>>) -> Result<Self> {
        if users.len() != histories.len() {
            return Err(invalid("interactions", "user and history counts differ"));
        }
        let index = build_index(&users)?;
        let items = histories
            .into_iter()
            .map(|mut h| {
                h.sort_unstable();
                h.dedup();
                h
            })
            .collect();
        Ok(Interactions { users, index, items })
    }

    pub fn from_lists(histories: Vec<Vec<usize>>) -> Self {
        let users = synthetic_user_ids(histories.len());
        Interactions::new(users, histories).expect("synthetic ids are unique")
    }

    pub fn users(&self) -> &[String] {
        &self.users
    }

    pub fn len(&self) -> usize {
        self.users.len()
    }

    pub fn is_empty(&self) -> bool {
        self.users.is_empty()
    }

    pub fn history_at(&self, u: usize) -> &[usize] {
        &self.items[u]
    }

    /// Sorted history of the user with this id (empty when unknown).
    pub fn history(&self, id: &str) -> &[usize] {
        self.index.get(id).map(|&u| self.items[u].as_slice()).unwrap_or(&[])
    }
}

/// Per-user categorical attributes used to form user groups.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GroupTable {
    rows: HashMap<String, BTreeMap<String, String>>,
}

impl GroupTable {
    pub fn new() -> Self {
        GroupTable::default()
    }

    pub fn insert(&mut self, user: &str, attribute: &str, value: &str) {
        self.rows
            .entry(user.to_string())
            .or_default()
            .insert(attribute.to_string(), value.to_string());
    }

    pub fn value(&self, user: &str, attribute: &str) -> Option<&str> {
        self.rows.get(user).and_then(|r| r.get(attribute)).map(String::as_str)
    }

    /// Partition `users` by the combination of `attributes`. Groups are returned
    /// in ascending order of their attribute-value key; empty combinations never appear.
    pub fn partition(&self, users: &[String], attributes: &[&str]) -> Result<Vec<(Vec<String>, Vec<usize>)>> {
        let mut groups: BTreeMap<Vec<String>, Vec<usize>> = BTreeMap::new();
        let mut missing = Vec::new();
        for (u, id) in users.iter().enumerate() {
            let key: Option<Vec<String>> = attributes
                .iter()
                .map(|a| self.value(id, a).map(str::to_string))
                .collect();
            match key {
                Some(key) => groups.entry(key).or_default().push(u),
                None => missing.push(id.clone()),
            }
        }
        if !missing.is_empty() {
            return Err(Error::MissingGroup(missing));
        }
        Ok(groups.into_iter().collect())
    }
}

/// Position weighting of an examination model.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExamFn {
    Uniform,
    /// `k + 1 - z`
    Linear,
    /// `(k - z) / (k - 1)`: zero at position `k`, undefined for `k = 1`.
    LinearNormalizedOriginal,
    /// `(k + 1 - z) / k`: `1/k` at position `k`.
    LinearNormalizedCorrected,
    /// `1 / log2(z + 1)`
    Dcg,
    /// `gamma^(z - 1)`
    Rbp(f64),
    /// `1 / z`
    Inverse,
}

impl ExamFn {
    /// Weight at 1-based `position` ignoring the top-k cutoff.
    pub fn raw_weight(self, position: usize, k: usize) -> Result<f64> {
        if position == 0 {
            return Err(invalid("position", "positions start at 1"));
        }
        let z = position as f64;
        let kf = k as f64;
        Ok(match self {
            ExamFn::Uniform => 1.0,
            ExamFn::Linear => kf + 1.0 - z,
            ExamFn::LinearNormalizedOriginal => {
                if k < 2 {
                    return Err(Error::Undefined(
                        "original normalized linear examination at k = 1".into(),
                    ));
                }
                (kf - z) / (kf - 1.0)
            }
            ExamFn::LinearNormalizedCorrected => (kf + 1.0 - z) / kf,
            ExamFn::Dcg => 1.0 / (z + 1.0).log2(),
            ExamFn::Rbp(gamma) => {
                if !(gamma > 0.0 && gamma < 1.0) {
                    return Err(invalid("gamma", "must lie in (0, 1)"));
                }
                gamma.powf(z - 1.0)
            }
            ExamFn::Inverse => 1.0 / z,
        })
    }

    /// Weight at 1-based `position`, zero beyond the cutoff `k`.
    pub fn weight(self, position: usize, k: usize) -> Result<f64> {
        if position > k {
            if position == 0 {
                return Err(invalid("position", "positions start at 1"));
            }
            if self == ExamFn::LinearNormalizedOriginal && k < 2 {
                return Err(Error::Undefined(
                    "original normalized linear examination at k = 1".into(),
                ));
            }
            return Ok(0.0);
        }
        self.raw_weight(position, k)
    }

    /// Weights for positions `1..=len` under cutoff `k`.
    pub fn weights(self, len: usize, k: usize) -> Result<Vec<f64>> {
        (1..=len).map(|p| self.weight(p, k)).collect()
    }
}

/// Cutoff settings: evaluation depth `k`, optional re-rank depth `k'` and rounds `W`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cutoff {
    pub k: usize,
    pub k_prime: Option<usize>,
    pub rounds: usize,
}

impl Cutoff {
    pub fn new(k: usize) -> Self {
        Cutoff {
            k,
            k_prime: None,
            rounds: 1,
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.k == 0 || self.k > n {
            return Err(invalid("k", format!("must lie in 1..={n}")));
        }
        if let Some(kp) = self.k_prime {
            if kp < self.k || kp > n {
                return Err(invalid("k_prime", format!("must lie in {}..={n}", self.k)));
            }
        }
        if self.rounds == 0 {
            return Err(invalid("rounds", "must be positive"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valid_run_passes() {
        let cat = Catalog::with_size(10);
        let run = RunSet::from_lists(vec![vec![0, 1, 2], vec![3, 4, 5]]);
        assert!(validate_run(&run, &cat).is_ok());
    }

    #[test]
    fn duplicate_item_is_rejected() {
        let cat = Catalog::with_size(10);
        let run = RunSet::from_lists(vec![vec![1, 0, 1]]);
        match validate_run(&run, &cat) {
            Err(Error::DuplicateItem { user, item }) => {
                assert_eq!(user, "u0");
                assert_eq!(item, "i1");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_item_is_rejected() {
        let cat = Catalog::with_size(3);
        let run = RunSet::from_lists(vec![vec![0, 7]]);
        assert!(matches!(validate_run(&run, &cat), Err(Error::UnknownItem { .. })));
    }

    #[test]
    fn gaps_in_ranks_are_rejected() {
        let cat = Catalog::with_size(5);
        let entries = vec![("a".to_string(), 0, 1, None), ("a".to_string(), 1, 3, None)];
        assert!(matches!(
            RunSet::from_entries(&entries, &cat),
            Err(Error::NonContiguousRanks {
                expected: 2,
                found: 3,
                ..
            })
        ));
    }

    #[test]
    fn counts_disjoint_lists() {
        let cat = Catalog::with_size(10);
        let run = RunSet::from_lists(vec![vec![0, 1, 2], vec![3, 4, 5]]);
        let c = exposure_counts(&run, 3, &cat);
        assert_eq!(&c[..6], &[1, 1, 1, 1, 1, 1]);
        assert!(c[6..].iter().all(|&x| x == 0));
    }

    #[test]
    fn counts_overlapping_lists() {
        let cat = Catalog::with_size(10);
        let run = RunSet::from_lists(vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 4, 5]]);
        let c = exposure_counts(&run, 3, &cat);
        assert_eq!(&c[..6], &[3, 2, 1, 1, 1, 1]);
    }

    #[test]
    fn counts_replicated_lists() {
        let cat = Catalog::with_size(6);
        let run = RunSet::from_lists(vec![vec![2, 4]; 5]);
        let c = exposure_counts(&run, 2, &cat);
        assert_eq!(c, vec![0, 0, 5, 0, 5, 0]);
    }

    #[test]
    fn exam_functions() {
        assert_eq!(ExamFn::LinearNormalizedOriginal.weight(10, 10).unwrap(), 0.0);
        assert!((ExamFn::LinearNormalizedCorrected.weight(10, 10).unwrap() - 0.1).abs() < 1e-15);
        assert_eq!(ExamFn::Inverse.weight(4, 10).unwrap(), 0.25);
        assert!(ExamFn::LinearNormalizedOriginal.weight(1, 1).is_err());
        assert_eq!(ExamFn::Dcg.weight(3, 2).unwrap(), 0.0);
        assert_eq!(ExamFn::Dcg.raw_weight(1, 2).unwrap(), 1.0);
        assert!((ExamFn::Rbp(0.8).weight(3, 5).unwrap() - 0.64).abs() < 1e-15);
    }

    #[test]
    fn partition_by_two_attributes() {
        let mut g = GroupTable::new();
        let users = synthetic_user_ids(4);
        for (u, (a, b)) in users.iter().zip([("x", "1"), ("x", "2"), ("y", "1"), ("x", "1")]) {
            g.insert(u, "age", a);
            g.insert(u, "gender", b);
        }
        let parts = g.partition(&users, &["age", "gender"]).unwrap();
        assert_eq!(parts.len(), 3);
        assert_eq!(parts[0].1, vec![0, 3]);
        assert!(matches!(g.partition(&users, &["missing"]), Err(Error::MissingGroup(_))));
    }
}
