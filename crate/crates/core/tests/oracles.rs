//! Independent brute-force oracles for derived values.

mod common;

use approx::assert_abs_diff_eq;
use common::*;
use rand::prelude::*;
use recfair::agreement::{bh_correct, bonferroni_correct, kendall_tau_b, ModelRanking};
use recfair::effectiveness::{score_list, EffMeasure};
use recfair::exposure::*;
use recfair::model::exposure_counts;
use recfair::pareto::num_replacements;
use recfair::relevance_aware::*;
use recfair::*;

fn oracle_score(measure: EffMeasure, list: &[usize], rel: &[usize], k: usize) -> f64 {
    let top: Vec<bool> = list.iter().take(k).map(|i| rel.contains(i)).collect();
    let hits = top.iter().filter(|&&h| h).count() as f64;
    match measure {
        EffMeasure::Hr => f64::from(u8::from(hits > 0.0)),
        EffMeasure::Mrr => top.iter().position(|&h| h).map_or(0.0, |p| 1.0 / (p as f64 + 1.0)),
        EffMeasure::P => hits / k as f64,
        EffMeasure::R => hits / rel.len() as f64,
        EffMeasure::Map => {
            let mut total = 0.0;
            for p in 0..top.len() {
                if top[p] {
                    let upto = top[..=p].iter().filter(|&&h| h).count() as f64;
                    total += upto / (p as f64 + 1.0);
                }
            }
            total / rel.len().min(k) as f64
        }
        EffMeasure::Ndcg => {
            let gain = |p: usize| 1.0 / (p as f64 + 2.0).log2();
            let dcg: f64 = (0..top.len()).filter(|&p| top[p]).map(gain).sum();
            let idcg: f64 = (0..rel.len().min(k)).map(gain).sum();
            dcg / idcg
        }
    }
}

#[test]
fn effectiveness_matches_direct_definitions() {
    let mut r = rng(1);
    for _ in 0..2000 {
        let n = r.gen_range(2..30);
        let k = r.gen_range(1..=n);
        let len = r.gen_range(1..=n);
        let list: Vec<usize> = (0..n).choose_multiple(&mut r, len);
        let size = r.gen_range(1..=n);
        let mut rel: Vec<usize> = (0..n).choose_multiple(&mut r, size);
        rel.sort_unstable();
        for m in EffMeasure::ALL {
            assert_abs_diff_eq!(
                score_list(m, &list, &rel, k),
                oracle_score(m, &list, &rel, k),
                epsilon = 1e-12
            );
        }
    }
}

fn oracle_jain(c: &[f64]) -> f64 {
    let s: f64 = c.iter().sum();
    let q: f64 = c.iter().map(|x| x * x).sum();
    s * s / (c.len() as f64 * q)
}

fn oracle_gini(c: &[f64]) -> f64 {
    let n = c.len() as f64;
    let mean = c.iter().sum::<f64>() / n;
    let mut abs = 0.0;
    for a in c {
        for b in c {
            abs += (a - b).abs();
        }
    }
    abs / (2.0 * n * n * mean)
}

#[test]
fn count_measures_match_direct_definitions() {
    let mut r = rng(2);
    for _ in 0..500 {
        let n = r.gen_range(3..25);
        let k = r.gen_range(1..n);
        let m = r.gen_range(1..12);
        let lists: Vec<Vec<usize>> = (0..m).map(|_| (0..n).choose_multiple(&mut r, k)).collect();
        let counts = exposure_counts(&RunSet::from_lists(lists), k, &Catalog::with_size(n));
        let c: Vec<f64> = counts.iter().map(|&x| x as f64).collect();
        let get = |measure, variant| count_measure(measure, &counts, k, m, variant, None).unwrap().score();
        assert_abs_diff_eq!(
            get(CountMeasure::Jain, Variant::Original),
            oracle_jain(&c),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            get(CountMeasure::Gini, Variant::Original),
            oracle_gini(&c),
            epsilon = 1e-12
        );
        let covered = c.iter().filter(|&&x| x > 0.0).count() as f64;
        assert_abs_diff_eq!(
            get(CountMeasure::Qf, Variant::Original),
            covered / n as f64,
            epsilon = 1e-12
        );
        let total: f64 = c.iter().sum();
        let ent: f64 = c
            .iter()
            .filter(|&&x| x > 0.0)
            .map(|&x| -(x / total) * (x / total).ln())
            .sum();
        assert_abs_diff_eq!(
            get(CountMeasure::Ent, Variant::Defined),
            ent / (n as f64).ln(),
            epsilon = 1e-12
        );
        let share = (k * m / n) as f64;
        let sat = c.iter().filter(|&&x| x >= share).count() as f64 / n as f64;
        assert_abs_diff_eq!(get(CountMeasure::Fsat, Variant::Original), sat, epsilon = 1e-12);
    }
}

#[test]
fn gini_w_bounds_match_enumeration_when_closed_form_exists() {
    for (k, m, n) in [(1, 2, 3), (1, 3, 4), (2, 2, 4), (2, 2, 5), (1, 2, 5)] {
        let cat = Catalog::with_size(n);
        let rankings: Vec<Vec<usize>> = combinations(n, k)
            .into_iter()
            .flat_map(|set| {
                permutations(k)
                    .into_iter()
                    .map(move |p| p.iter().map(|&j| set[j]).collect::<Vec<_>>())
            })
            .collect();
        let (mut lo, mut hi) = (f64::MAX, f64::MIN);
        for row in tuples(&rankings, m) {
            let v = gini_w(&[RunSet::from_lists(row)], &cat, k, Variant::Original)
                .unwrap()
                .score();
            lo = lo.min(v);
            hi = hi.max(v);
        }
        assert_abs_diff_eq!(lo, gini_w_min(k, m, n, ExamFn::Dcg).unwrap(), epsilon = 1e-12);
        assert_abs_diff_eq!(hi, gini_w_max(k, n, ExamFn::Dcg).unwrap(), epsilon = 1e-12);
    }
}

#[test]
fn ifd_mul_best_split_matches_enumeration() {
    // k = 3, n = 6, two relevant items: the best split maximises over every ordering.
    let (k, n) = (3, 6);
    let cat = Catalog::with_size(n);
    for rel in combinations(n, 2) {
        let q = Qrels::from_lists(vec![rel.clone()]);
        let brute = permutations(n)
            .into_iter()
            .map(|p| {
                ifd_mul(&[RunSet::from_lists(vec![p])], &cat, &q, k, Variant::Original)
                    .unwrap()
                    .score()
            })
            .fold(f64::MIN, f64::max);
        let (best, _) = ifd_mul_max(&rel, k, n).unwrap();
        assert_abs_diff_eq!(brute, best, epsilon = 1e-12);
        let floor = permutations(n)
            .into_iter()
            .map(|p| {
                ifd_mul(&[RunSet::from_lists(vec![p])], &cat, &q, k, Variant::Corrected)
                    .unwrap()
                    .score()
            })
            .fold(f64::MAX, f64::min);
        assert!(floor >= -1e-12, "corrected IFD× below 0: {floor}");
    }
}

#[test]
fn hd_exhaustive_extremes_at_k2_m2_n3() {
    let cat = Catalog::with_size(3);
    let (mut lo, mut hi) = (f64::MAX, f64::MIN);
    for row in tuples(&permutations(3), 2) {
        let run = RunSet::from_lists(row);
        for q in tuples(&subsets(3, true), 2) {
            let v = hd(&run, &cat, &Qrels::from_lists(q), 2, 0.9).unwrap().score();
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    assert_abs_diff_eq!(lo, 0.0, epsilon = 1e-12);
    assert_abs_diff_eq!(hi, 1.0 / 2f64.sqrt(), epsilon = 1e-12);
}

fn oracle_tau_b(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len();
    let (mut c, mut d, mut tx, mut ty) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for i in 0..n {
        for j in i + 1..n {
            let a = (x[i] - x[j]).signum() * f64::from(u8::from(x[i] != x[j]));
            let b = (y[i] - y[j]).signum() * f64::from(u8::from(y[i] != y[j]));
            if a == 0.0 && b == 0.0 {
                continue;
            } else if a == 0.0 {
                tx += 1.0;
            } else if b == 0.0 {
                ty += 1.0;
            } else if a == b {
                c += 1.0;
            } else {
                d += 1.0;
            }
        }
    }
    let den = ((c + d + tx) * (c + d + ty)).sqrt();
    (den > 0.0).then(|| (c - d) / den)
}

#[test]
fn kendall_tau_b_matches_pair_counting() {
    let mut r = rng(3);
    for _ in 0..400 {
        let n = r.gen_range(2..16);
        let levels = r.gen_range(1..6);
        let x: Vec<f64> = (0..n).map(|_| r.gen_range(0..levels) as f64).collect();
        let y: Vec<f64> = (0..n).map(|_| r.gen_range(0..levels) as f64).collect();
        let names = |v: &[f64]| v.iter().enumerate().map(|(i, &s)| (format!("m{i}"), s)).collect();
        let a = ModelRanking::new("x", Direction::Higher, names(&x)).unwrap();
        let b = ModelRanking::new("y", Direction::Higher, names(&y)).unwrap();
        let got = kendall_tau_b(&a, &b).unwrap().tau;
        match (got, oracle_tau_b(&x, &y)) {
            (Some(g), Some(w)) => assert_abs_diff_eq!(g, w, epsilon = 1e-12),
            (g, w) => assert_eq!(g.is_some(), w.is_some(), "{x:?} {y:?}"),
        }
    }
}

#[test]
fn tau_p_value_matches_reference_value() {
    // Ten models, one adjacent swap: tau = 43/45 and the normal approximation
    // gives z = 3 * 41 / sqrt(2 * 10 * 9 * 25).
    let a: Vec<(String, f64)> = (0..10).map(|i| (format!("m{i}"), i as f64)).collect();
    let mut b = a.clone();
    b[0].1 = 1.0;
    b[1].1 = 0.0;
    let t = kendall_tau_b(
        &ModelRanking::new("a", Direction::Higher, a).unwrap(),
        &ModelRanking::new("b", Direction::Higher, b).unwrap(),
    )
    .unwrap();
    assert_abs_diff_eq!(t.tau.unwrap(), 43.0 / 45.0, epsilon = 1e-12);
    let z: f64 = 3.0 * 41.0 / (2.0f64 * 10.0 * 9.0 * 25.0).sqrt();
    let p = t.p_value.unwrap();
    assert!(p > 0.0 && p < 1e-3, "p = {p}, z = {z}");
    assert!(!t.small_sample);
}

#[test]
fn bh_and_bonferroni_match_definitions() {
    let mut r = rng(4);
    for _ in 0..1000 {
        let len = r.gen_range(1..12);
        let p: Vec<f64> = (0..len).map(|_| r.gen::<f64>().powi(3)).collect();
        let alpha = 0.05;
        let mut sorted = p.clone();
        sorted.sort_by(f64::total_cmp);
        let cut = (1..=len)
            .filter(|&j| sorted[j - 1] <= j as f64 * alpha / len as f64)
            .map(|j| sorted[j - 1])
            .fold(f64::NEG_INFINITY, f64::max);
        let want: Vec<bool> = p.iter().map(|&x| x <= cut).collect();
        assert_eq!(bh_correct(&p, alpha).unwrap(), want, "{p:?}");
        let bonf: Vec<bool> = p.iter().map(|&x| x * len as f64 <= alpha).collect();
        assert_eq!(bonferroni_correct(&p, alpha).unwrap(), bonf);
    }
}

#[test]
fn num_replacements_matches_direct_sum() {
    let mut r = rng(5);
    for _ in 0..200 {
        let n = r.gen_range(2..20);
        let k = r.gen_range(1..=n);
        let m = r.gen_range(1..10);
        let lists: Vec<Vec<usize>> = (0..m).map(|_| (0..n).choose_multiple(&mut r, k)).collect();
        let counts = exposure_counts(&RunSet::from_lists(lists), k, &Catalog::with_size(n));
        let cap = (k * m).div_ceil(n);
        let want: usize = counts.iter().map(|&c| c.saturating_sub(cap)).sum();
        assert_eq!(num_replacements(&counts, k, m), want);
    }
}

#[test]
fn mme_is_zero_under_identical_allocations() {
    let cat = Catalog::with_size(3);
    let rounds: Vec<RunSet> = (0..3)
        .map(|s| {
            RunSet::from_lists(vec![
                (0..3).map(|p| (p + s) % 3).collect(),
                (0..3).map(|p| (p + s + 1) % 3).collect(),
            ])
        })
        .collect();
    let q = Qrels::from_lists(vec![vec![0, 1, 2], vec![0, 1, 2]]);
    assert_abs_diff_eq!(mme(&rounds, &cat, &q, 3).unwrap().score(), 0.0, epsilon = 1e-12);
}

#[test]
fn fsat_can_fall_below_the_same_items_scenario() {
    // Three items in every list, the other six shared two apiece: only the three
    // hot items reach the maximin share of 3, so FSat is 1/3 rather than k/n = 5/9.
    let (k, n) = (5, 9);
    let cold = [[3, 4], [5, 6], [7, 8], [3, 4], [5, 6], [7, 8]];
    let lists: Vec<Vec<usize>> = cold.iter().map(|c| vec![0, 1, 2, c[0], c[1]]).collect();
    let run = RunSet::from_lists(lists);
    let cat = Catalog::with_size(n);
    let ori = fsat(&run, &cat, k, Variant::Original).unwrap().score();
    assert_abs_diff_eq!(ori, 1.0 / 3.0, epsilon = 1e-12);
    let bound = exposure_bounds(BoundedMeasure::Fsat, k, 6, n, &BoundParams::default()).unwrap();
    assert!(ori < bound.most_unfair);
    let cor = fsat(&run, &cat, k, Variant::Corrected).unwrap().score();
    assert_abs_diff_eq!(cor, -0.5, epsilon = 1e-12);
}
