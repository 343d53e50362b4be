//! Fixtures and exhaustive enumerators shared by the integration tests.
#![allow(dead_code)]

use rand::distributions::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use recfair::pareto::FrontierPoint;
use recfair::{Catalog, Interactions, Qrels, RunSet};

/// Every ordering of `0..n`.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            if !cur.contains(&i) {
                cur.push(i);
                go(cur, n, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), n, &mut out);
    out
}

/// Every `k`-subset of `0..n` in ascending order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, cur: &mut Vec<usize>, n: usize, k: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, cur, n, k, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, &mut Vec::new(), n, k, &mut out);
    out
}

/// Every subset of `0..n`, optionally without the empty set.
pub fn subsets(n: usize, nonempty: bool) -> Vec<Vec<usize>> {
    let start = usize::from(nonempty);
    (start..1usize << n)
        .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
        .collect()
}

/// Every `m`-tuple drawn from `options`, as a list of rows.
pub fn tuples<T: Clone>(options: &[T], m: usize) -> Vec<Vec<T>> {
    let mut out: Vec<Vec<T>> = vec![Vec::new()];
    for _ in 0..m {
        out = out
            .into_iter()
            .flat_map(|row| {
                options.iter().map(move |o| {
                    let mut r = row.clone();
                    r.push(o.clone());
                    r
                })
            })
            .collect();
    }
    out
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Popularity-skewed judgments and histories.
///
/// Item `i` is drawn with weight `(i + 1)^-skew`, so low ids are popular and
/// the Oracle output concentrates on them. Each user gets between `rel_lo`
/// and `rel_hi` relevant items and a five-item history disjoint from them.
pub struct Fixture {
    pub catalog: Catalog,
    pub qrels: Qrels,
    pub interactions: Interactions,
    pub k: usize,
}

pub fn skewed_fixture(m: usize, n: usize, k: usize, rel_lo: usize, rel_hi: usize, skew: f64, seed: u64) -> Fixture {
    let mut r = rng(seed);
    let weights: Vec<f64> = (0..n).map(|i| ((i + 1) as f64).powf(-skew)).collect();
    let dist = WeightedIndex::new(&weights).expect("positive weights");
    let mut sets = Vec::with_capacity(m);
    let mut histories = Vec::with_capacity(m);
    for _ in 0..m {
        let want = r.gen_range(rel_lo..=rel_hi);
        let mut set: Vec<usize> = Vec::new();
        while set.len() < want {
            let i = dist.sample(&mut r);
            if !set.contains(&i) {
                set.push(i);
            }
        }
        set.sort_unstable();
        let mut hist: Vec<usize> = Vec::new();
        while hist.len() < 5 {
            let i = r.gen_range(0..n);
            if !set.contains(&i) && !hist.contains(&i) {
                hist.push(i);
            }
        }
        hist.sort_unstable();
        sets.push(set);
        histories.push(hist);
    }
    Fixture {
        catalog: Catalog::with_size(n),
        qrels: Qrels::from_lists(sets),
        interactions: Interactions::from_lists(histories),
        k,
    }
}

/// Synthetic model runs spanning the relevance/fairness plane.
///
/// Model `j` fills each slot with a relevant item with probability `hit`,
/// otherwise with a popular item (ids below `n / 20`) with probability `pop`,
/// otherwise with a uniform item.
pub fn synthetic_models(f: &Fixture, count: usize, seed: u64) -> Vec<(String, RunSet)> {
    let n = f.catalog.len();
    let hot = (n / 20).max(f.k + 1);
    let mut r = rng(seed);
    (0..count)
        .map(|j| {
            let t = j as f64 / (count.max(2) - 1) as f64;
            let hit = 0.05 + 0.6 * t;
            let pop = 0.9 * (1.0 - t) * ((j % 3) as f64 / 2.0);
            let lists = (0..f.qrels.len())
                .map(|u| {
                    let rel = f.qrels.relevant(u);
                    let mut list: Vec<usize> = Vec::with_capacity(f.k);
                    while list.len() < f.k {
                        let x: f64 = r.gen();
                        let i = if x < hit {
                            rel[r.gen_range(0..rel.len())]
                        } else if x < hit + (1.0 - hit) * pop {
                            r.gen_range(0..hot)
                        } else {
                            r.gen_range(0..n)
                        };
                        if !list.contains(&i) {
                            list.push(i);
                        }
                    }
                    list
                })
                .collect();
            (format!("model{j:02}"), RunSet::from_lists(lists))
        })
        .collect()
}

/// Densely sampled quarter circle of radius 0.8 centred at (0.2, 0.2), from
/// the relevance-best end (1, 0.2) to the fairness-best end (0.2, 1).
pub fn quarter_circle_frontier(samples: usize) -> Vec<FrontierPoint> {
    (0..samples)
        .map(|j| {
            let t = std::f64::consts::FRAC_PI_2 * j as f64 / (samples - 1) as f64;
            FrontierPoint {
                rel: 0.2 + 0.8 * t.cos(),
                fair: 0.2 + 0.8 * t.sin(),
                checkpoint: j,
            }
        })
        .collect()
}
