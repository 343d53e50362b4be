//! Fair re-rankers over each user's top-`k'` candidates.
//!
//! Coverage is how often an item appears in the top `k` across all users.
//! CombMNZ and Borda fuse a relevance ranking with an increasing-coverage
//! ranking per user. Greedy substitution swaps popular items out of the top
//! `k` for unpopular candidates already in the user's top `k'`, cheapest
//! relevance loss first.

use crate::error::{invalid, Error, Result};
use crate::model::RunSet;
use serde::{Deserialize, Serialize};

/// Re-ranking method.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Reranker {
    CombMnz,
    Borda,
    /// `beta` is the fraction of the catalog treated as popular and as
    /// unpopular; `cap` is the maximum fraction of top-`k` slots swapped.
    GreedySubstitution {
        beta: f64,
        cap: f64,
    },
}

impl Reranker {
    pub fn greedy_default() -> Self {
        Reranker::GreedySubstitution { beta: 0.05, cap: 0.25 }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Reranker::CombMnz => "CM",
            Reranker::Borda => "BC",
            Reranker::GreedySubstitution { .. } => "GS",
        }
    }
}

/// Result of a re-ranking pass.
#[derive(Debug, Clone, PartialEq)]
pub struct Reranked {
    pub run: RunSet,
    /// Swaps applied by greedy substitution; 0 for the fusion methods.
    pub swaps: usize,
    /// Planned swaps skipped because they no longer applied.
    pub skipped: usize,
}

/// Top-`k` appearance count of every item.
pub fn topk_coverage(lists: &[Vec<usize>], k: usize, n: usize) -> Vec<usize> {
    let mut c = vec![0usize; n];
    for l in lists {
        for &i in l.iter().take(k) {
            c[i] += 1;
        }
    }
    c
}

fn min_max(values: &[f64]) -> Vec<f64> {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi > lo {
        values.iter().map(|v| (v - lo) / (hi - lo)).collect()
    } else {
        vec![0.0; values.len()]
    }
}

/// Sort positions `0..len` by descending score, ties by position.
fn order_desc(scores: &[f64]) -> Vec<usize> {
    let mut o: Vec<usize> = (0..scores.len()).collect();
    o.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    o
}

/// CombMNZ fusion of score lists over the same candidates.
///
/// The fused score is the score sum times the number of input rankings whose
/// top `depth` contains the candidate. Returns candidate positions, best first.
pub fn combmnz(score_lists: &[Vec<f64>], depth: usize) -> Vec<usize> {
    let len = score_lists.first().map_or(0, Vec::len);
    let mut hits = vec![0usize; len];
    let mut sums = vec![0.0; len];
    for s in score_lists {
        for &p in order_desc(s).iter().take(depth) {
            hits[p] += 1;
        }
        for (p, v) in s.iter().enumerate() {
            sums[p] += v;
        }
    }
    let fused: Vec<f64> = sums.iter().zip(&hits).map(|(s, &h)| s * h as f64).collect();
    order_desc(&fused)
}

/// Borda count over rankings of the same `len` candidates (each a permutation of positions).
///
/// Rank `r` (0-based) earns `len - r` points. Returns positions, best first, ties by position.
pub fn borda(rankings: &[Vec<usize>], len: usize) -> Vec<usize> {
    let mut pts = vec![0.0; len];
    for r in rankings {
        for (rank, &p) in r.iter().enumerate() {
            pts[p] += (len - rank) as f64;
        }
    }
    order_desc(&pts)
}

fn predicted(run: &RunSet, method: Reranker) -> Result<&[Vec<f64>]> {
    let s = run
        .scores()
        .ok_or_else(|| invalid("scores", format!("{} needs predicted relevance scores", method.name())))?;
    if s.iter().flatten().any(|v| !v.is_finite()) {
        return Err(invalid(
            "scores",
            format!("{} needs a score for every entry", method.name()),
        ));
    }
    Ok(s)
}

/// Re-rank each user's top `k'` so that the top `k` favors less covered items.
pub fn rerank(method: Reranker, run: &RunSet, n: usize, k: usize, k_prime: usize) -> Result<Reranked> {
    if k == 0 || k_prime < k {
        return Err(invalid("k'", "needs 1 <= k <= k'"));
    }
    if run.lists().iter().flatten().any(|&i| i >= n) {
        return Err(invalid("run", "item outside the catalog"));
    }
    let lists: Vec<Vec<usize>> = run.lists().iter().map(|l| l[..k_prime.min(l.len())].to_vec()).collect();
    let scores: Option<Vec<Vec<f64>>> = match method {
        Reranker::Borda => None,
        _ => Some(
            predicted(run, method)?
                .iter()
                .map(|s| s[..k_prime.min(s.len())].to_vec())
                .collect(),
        ),
    };
    let cov = topk_coverage(&lists, k, n);
    let (new_lists, new_scores, swaps, skipped) = match method {
        Reranker::CombMnz => {
            let cov_norm = min_max(&cov.iter().map(|&c| c as f64).collect::<Vec<_>>());
            let scores = scores.expect("checked");
            let mut out_l = Vec::with_capacity(lists.len());
            let mut out_s = Vec::with_capacity(lists.len());
            for (l, s) in lists.iter().zip(&scores) {
                let rel = min_max(s);
                let fair: Vec<f64> = l.iter().map(|&i| 1.0 - cov_norm[i]).collect();
                let order = combmnz(&[rel, fair], k);
                out_l.push(order.iter().map(|&p| l[p]).collect());
                out_s.push(order.iter().map(|&p| s[p]).collect());
            }
            (out_l, Some(out_s), 0, 0)
        }
        Reranker::Borda => {
            let mut out_l = Vec::with_capacity(lists.len());
            for l in &lists {
                let original: Vec<usize> = (0..l.len()).collect();
                let mut by_cov = original.clone();
                by_cov.sort_by_key(|&p| (cov[l[p]], p));
                let order = borda(&[original, by_cov], l.len());
                out_l.push(order.iter().map(|&p| l[p]).collect());
            }
            (out_l, None, 0, 0)
        }
        Reranker::GreedySubstitution { beta, cap } => {
            if !(beta > 0.0 && beta <= 1.0) || !(0.0..=1.0).contains(&cap) {
                return Err(invalid("beta, cap", "beta must lie in (0, 1] and cap in [0, 1]"));
            }
            let (l, s, a, b) = greedy_substitution(lists, scores.expect("checked"), n, k, k_prime, beta, cap);
            (l, Some(s), a, b)
        }
    };
    let mut out = RunSet::new(run.users().to_vec(), new_lists)?;
    if let Some(s) = new_scores {
        out = out.with_scores(s)?;
    }
    Ok(Reranked {
        run: out,
        swaps,
        skipped,
    })
}

fn greedy_substitution(
    mut lists: Vec<Vec<usize>>,
    mut scores: Vec<Vec<f64>>,
    n: usize,
    k: usize,
    k_prime: usize,
    beta: f64,
    cap: f64,
) -> (Vec<Vec<usize>>, Vec<Vec<f64>>, usize, usize) {
    let cov = topk_coverage(&lists, k_prime, n);
    let size = ((beta * n as f64).ceil() as usize).clamp(1, n);
    let mut by_pop: Vec<usize> = (0..n).collect();
    by_pop.sort_by_key(|&i| (std::cmp::Reverse(cov[i]), i));
    let mut popular = vec![false; n];
    by_pop.iter().take(size).for_each(|&i| popular[i] = true);
    let mut unpopular = vec![false; n];
    by_pop.iter().rev().take(size).for_each(|&i| unpopular[i] = true);

    // Every candidate swap (user, popular item in the top k, unpopular item below it).
    let mut plan: Vec<(f64, usize, usize, usize)> = Vec::new();
    for (u, l) in lists.iter().enumerate() {
        let top = k.min(l.len());
        for p in 0..top {
            let i = l[p];
            if !popular[i] || unpopular[i] {
                continue;
            }
            for q in top..l.len() {
                let j = l[q];
                if unpopular[j] && !popular[j] {
                    plan.push((scores[u][p] - scores[u][q], u, i, j));
                }
            }
        }
    }
    plan.sort_by(|a, b| a.0.total_cmp(&b.0).then((a.1, a.2, a.3).cmp(&(b.1, b.2, b.3))));
    let slots: usize = lists.iter().map(|l| k.min(l.len())).sum();
    let budget = (cap * slots as f64).floor() as usize;
    let (mut swaps, mut skipped) = (0, 0);
    for &(_, u, i, j) in plan.iter().take(budget) {
        let l = &lists[u];
        let top = k.min(l.len());
        let p = l[..top].iter().position(|&x| x == i);
        let q = l[top..].iter().position(|&x| x == j).map(|q| q + top);
        match (p, q) {
            (Some(p), Some(q)) => {
                lists[u].swap(p, q);
                scores[u].swap(p, q);
                swaps += 1;
            }
            _ => skipped += 1,
        }
    }
    (lists, scores, swaps, skipped)
}

/// Fail when runs that must share users do not.
pub fn check_same_users(a: &RunSet, b: &RunSet) -> Result<()> {
    if a.users() == b.users() {
        Ok(())
    } else {
        Err(Error::ModelSetMismatch)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combmnz_with_flat_coverage_keeps_relevance_order() {
        // Two users whose top-2 sets cover each item once.
        let run = RunSet::from_lists(vec![vec![0, 1, 2, 3], vec![2, 3, 0, 1]])
            .with_scores(vec![vec![0.9, 0.8, 0.3, 0.1], vec![0.7, 0.6, 0.5, 0.4]])
            .unwrap();
        let out = rerank(Reranker::CombMnz, &run, 4, 2, 4).unwrap();
        assert_eq!(out.run.lists(), run.lists());
    }

    #[test]
    fn borda_identical_rankings() {
        let r = vec![2, 0, 1, 3];
        assert_eq!(borda(&[r.clone(), r.clone()], 4), r);
    }

    #[test]
    fn cm_and_gs_need_scores() {
        let run = RunSet::from_lists(vec![vec![0, 1, 2]]);
        assert!(rerank(Reranker::CombMnz, &run, 3, 1, 3).is_err());
        assert!(rerank(Reranker::greedy_default(), &run, 3, 1, 3).is_err());
        assert!(rerank(Reranker::Borda, &run, 3, 1, 3).is_ok());
    }

    #[test]
    fn greedy_swaps_dominant_item() {
        // Item 0 tops every list; items 5..9 sit at the bottom once each.
        let lists: Vec<Vec<usize>> = (0..5).map(|u| vec![0, 1 + (u % 4), 5 + u]).collect();
        let scores: Vec<Vec<f64>> = (0..5).map(|u| vec![0.5, 1.0, 0.1 * u as f64]).collect();
        let run = RunSet::from_lists(lists).with_scores(scores).unwrap();
        let n = 10;
        let before = topk_coverage(run.lists(), 2, n)[0];
        let out = rerank(Reranker::GreedySubstitution { beta: 0.5, cap: 0.25 }, &run, n, 2, 3).unwrap();
        let after = topk_coverage(out.run.lists(), 2, n)[0];
        assert_eq!(out.swaps, 2);
        assert_eq!(before - after, out.swaps);
        // The cheapest losses come from the users with the highest tail scores.
        assert_eq!(out.run.list(4)[0], 9);
        assert_eq!(out.run.list(3)[0], 8);
    }
}
