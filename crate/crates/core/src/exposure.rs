//! Exposure-based individual item fairness: Jain, QF, Ent, Gini, Gini-w, FSat,
//! VoCD, II-D and AI-D, their closed-form bounds and corrected variants.
//!
//! All count-based measures work on the exposure vector `c_i`, the number of
//! top-`k` slots item `i` occupies across the `m` users. Corrected variants
//! min-max normalize the raw score between its most unfair and most fair
//! achievable values so that 0 is the most unfair and 1 the most fair run
//! (for Gini the direction is kept: 0 is the fairest).

use crate::error::{degenerate, invalid, Error, Result};
use crate::measure::{Direction, MeasureResult, Variant, Warning};
use crate::model::{counts_of, validate_run, Catalog, ExamFn, RunSet};
use crate::stats;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

/// Measures whose value depends only on the exposure count vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CountMeasure {
    Jain,
    #[serde(rename = "QF")]
    Qf,
    Ent,
    Gini,
    #[serde(rename = "FSat")]
    Fsat,
}

impl CountMeasure {
    pub const ALL: [CountMeasure; 5] = [
        CountMeasure::Jain,
        CountMeasure::Qf,
        CountMeasure::Ent,
        CountMeasure::Gini,
        CountMeasure::Fsat,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CountMeasure::Jain => "Jain",
            CountMeasure::Qf => "QF",
            CountMeasure::Ent => "Ent",
            CountMeasure::Gini => "Gini",
            CountMeasure::Fsat => "FSat",
        }
    }

    pub fn direction(self) -> Direction {
        match self {
            CountMeasure::Gini => Direction::Lower,
            _ => Direction::Higher,
        }
    }
}

impl fmt::Display for CountMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CountMeasure {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        CountMeasure::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| invalid("measure", format!("unknown exposure measure {s}")))
    }
}

/// Measures with closed-form most-fair and most-unfair values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundedMeasure {
    Jain,
    #[serde(rename = "QF")]
    Qf,
    Ent,
    Gini,
    #[serde(rename = "Gini-w")]
    GiniW,
    #[serde(rename = "FSat")]
    Fsat,
    #[serde(rename = "VoCD")]
    Vocd,
}

impl FromStr for BoundedMeasure {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let all = [
            ("jain", BoundedMeasure::Jain),
            ("qf", BoundedMeasure::Qf),
            ("ent", BoundedMeasure::Ent),
            ("gini", BoundedMeasure::Gini),
            ("gini-w", BoundedMeasure::GiniW),
            ("fsat", BoundedMeasure::Fsat),
            ("vocd", BoundedMeasure::Vocd),
        ];
        let lower = s.to_ascii_lowercase();
        all.iter()
            .find(|(n, _)| *n == lower)
            .map(|(_, m)| *m)
            .ok_or_else(|| invalid("measure", format!("no closed-form bounds for {s}")))
    }
}

/// Closed-form extreme values of a measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundsResult {
    pub most_unfair: f64,
    pub most_fair: f64,
    pub formula: &'static str,
}

/// Optional parameters of the bound formulas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundParams {
    /// Entropy logarithm base; `None` means base `n`.
    pub log_base: Option<f64>,
    /// VoCD tolerance `beta`.
    pub beta: f64,
}

impl Default for BoundParams {
    fn default() -> Self {
        BoundParams {
            log_base: None,
            beta: 0.0,
        }
    }
}

pub(crate) fn check_kmn(k: usize, m: usize, n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Empty("catalog"));
    }
    if m == 0 {
        return Err(Error::Empty("run"));
    }
    if k == 0 || k > n {
        return Err(invalid("k", format!("must lie in 1..={n}")));
    }
    Ok(())
}

/// Largest Jain index achievable with `k` slots for each of `m` users over `n` items.
pub fn jain_max(k: usize, m: usize, n: usize) -> f64 {
    let km = (k * m) as f64;
    let f = ((k * m) / n) as f64;
    let r = ((k * m) % n) as f64;
    km * km / (n as f64 * (n as f64 * f * f + r * (2.0 * f + 1.0)))
}

/// Largest entropy achievable, `0 log 0 = 0`, in logarithm base `base`.
pub fn ent_max(k: usize, m: usize, n: usize, base: f64) -> f64 {
    let km = k * m;
    let f = km / n;
    let r = km % n;
    let kmf = km as f64;
    let mut h = 0.0;
    if f > 0 {
        let p = f as f64 / kmf;
        h -= (n - r) as f64 * p * p.ln();
    }
    if r > 0 {
        let p = (f + 1) as f64 / kmf;
        h -= r as f64 * p * p.ln();
    }
    h / base.ln()
}

/// Smallest Gini index achievable: `(n - r) r / (k m n)` with `r = km mod n`.
pub fn gini_min(k: usize, m: usize, n: usize) -> f64 {
    let r = (k * m) % n;
    ((n - r) * r) as f64 / (k * m * n) as f64
}

/// Largest Gini index achievable: `1 - k/n`.
pub fn gini_max(k: usize, n: usize) -> f64 {
    1.0 - k as f64 / n as f64
}

fn exam_positions(exam: ExamFn, k: usize) -> Result<Vec<f64>> {
    (1..=k).map(|p| exam.weight(p, k)).collect()
}

/// Largest position-weighted Gini: every user gets the same list.
pub fn gini_w_max(k: usize, n: usize, exam: ExamFn) -> Result<f64> {
    let w = exam_positions(exam, k)?;
    let total: f64 = w.iter().sum();
    let nf = n as f64;
    let num: f64 = w
        .iter()
        .enumerate()
        .map(|(l, wl)| (nf - 2.0 * (l + 1) as f64 + 1.0) * wl)
        .sum();
    Ok(num / (nf * total))
}

/// Smallest position-weighted Gini when `km <= n`: every slot holds a distinct item.
pub fn gini_w_min(k: usize, m: usize, n: usize, exam: ExamFn) -> Result<f64> {
    if k * m > n {
        return Err(Error::Unsupported(
            "Gini-w most fair value has no closed form when km > n".into(),
        ));
    }
    let w = exam_positions(exam, k)?;
    let total: f64 = w.iter().sum();
    let (nf, mf) = (n as f64, m as f64);
    let num: f64 = w
        .iter()
        .enumerate()
        .map(|(l, wl)| (nf - (2.0 * (l + 1) as f64 - 1.0) * mf) * wl)
        .sum();
    Ok(num / (nf * total))
}

fn resolve_base(base: Option<f64>, n: usize) -> Result<f64> {
    let b = base.unwrap_or(n as f64);
    if !(b > 1.0) {
        return Err(invalid(
            "log_base",
            format!("must exceed 1 (got {b}); base n needs at least two items"),
        ));
    }
    Ok(b)
}

/// Closed-form most-unfair and most-fair values for `measure` at `(k, m, n)`.
pub fn exposure_bounds(
    measure: BoundedMeasure,
    k: usize,
    m: usize,
    n: usize,
    params: &BoundParams,
) -> Result<BoundsResult> {
    check_kmn(k, m, n)?;
    let (kf, nf, mf) = (k as f64, n as f64, m as f64);
    let km = k * m;
    Ok(match measure {
        BoundedMeasure::Jain => BoundsResult {
            most_unfair: kf / nf,
            most_fair: jain_max(k, m, n),
            formula: "unfair k/n; fair (km)^2 / n(n f^2 + r(2f+1)), f = floor(km/n), r = km mod n",
        },
        BoundedMeasure::Qf => BoundsResult {
            most_unfair: kf / nf,
            most_fair: (km as f64 / nf).min(1.0),
            formula: "unfair k/n; fair min(km/n, 1)",
        },
        BoundedMeasure::Ent => {
            let b = resolve_base(params.log_base, n)?;
            BoundsResult {
                most_unfair: kf.ln() / b.ln(),
                most_fair: ent_max(k, m, n, b),
                formula: "unfair log k; fair entropy of floor/ceil(km/n) counts",
            }
        }
        BoundedMeasure::Gini => BoundsResult {
            most_unfair: gini_max(k, n),
            most_fair: gini_min(k, m, n),
            formula: "unfair 1 - k/n; fair (n - r) r / (kmn), r = km mod n",
        },
        BoundedMeasure::GiniW => BoundsResult {
            most_unfair: gini_w_max(k, n, ExamFn::Dcg)?,
            most_fair: gini_w_min(k, m, n, ExamFn::Dcg)?,
            formula: "unfair sum (n-2l+1) w_l / (n sum w); fair sum (n-(2l-1)m) w_l / (n sum w), km <= n",
        },
        BoundedMeasure::Fsat => BoundsResult {
            most_unfair: if km >= n { kf / nf } else { 1.0 },
            most_fair: 1.0,
            formula: "unfair k/n when km >= n, else 1; fair 1",
        },
        BoundedMeasure::Vocd => {
            if !(0.0..1.0).contains(&params.beta) {
                return Err(invalid("beta", "must lie in [0, 1)"));
            }
            BoundsResult {
                most_unfair: (mf - 1.0) / mf - params.beta,
                most_fair: 0.0,
                formula: "unfair (m-1)/m - beta (upper bound); fair 0",
            }
        }
    })
}

fn normalize(measure: &'static str, x: f64, lo: f64, hi: f64) -> Result<f64> {
    let den = hi - lo;
    if den.abs() <= 1e-15 {
        return Err(degenerate(
            measure,
            format!("x_max = x_min = {lo}; no normalization is possible"),
        ));
    }
    Ok((x - lo) / den)
}

fn require_not_full(measure: &'static str, k: usize, n: usize) -> Result<()> {
    if k == n {
        return Err(degenerate(measure, "k = n, every run exposes every item equally often"));
    }
    Ok(())
}

/// Evaluate a count-based measure on an exposure vector from `m` lists of length `k`.
///
/// `log_base` only affects entropy (default base `n`).
pub fn count_measure(
    measure: CountMeasure,
    counts: &[usize],
    k: usize,
    m: usize,
    variant: Variant,
    log_base: Option<f64>,
) -> Result<MeasureResult> {
    let n = counts.len();
    check_kmn(k, m, n)?;
    if variant == Variant::Defined && measure != CountMeasure::Ent {
        return Err(invalid("variant", "the defined variant exists only for Ent"));
    }
    let name = measure.name();
    let dir = measure.direction();
    let nf = n as f64;
    let kf = k as f64;
    let total: usize = counts.iter().sum();
    if total == 0 {
        return Ok(MeasureResult::undefined(name, variant, dir, "no item is exposed"));
    }
    let tf = total as f64;
    let res = match measure {
        CountMeasure::Jain => {
            let sq: f64 = counts.iter().map(|&c| (c as f64) * (c as f64)).sum();
            let j = tf * tf / (nf * sq);
            let v = match variant {
                Variant::Corrected => {
                    require_not_full("Jain", k, n)?;
                    normalize("Jain", j, kf / nf, jain_max(k, m, n))?
                }
                _ => j,
            };
            MeasureResult::new(name, variant, dir, v)
        }
        CountMeasure::Qf => {
            let covered = counts.iter().filter(|&&c| c > 0).count() as f64;
            let v = match variant {
                Variant::Corrected => {
                    require_not_full("QF", k, n)?;
                    if k * m >= n {
                        (covered - kf) / (nf - kf)
                    } else {
                        if m < 2 {
                            return Err(degenerate("QF", "a single user covers exactly k items"));
                        }
                        (covered - kf) / (kf * (m as f64 - 1.0))
                    }
                }
                _ => covered / nf,
            };
            MeasureResult::new(name, variant, dir, v)
        }
        CountMeasure::Ent => {
            let base = resolve_base(log_base, n)?;
            let h: f64 = -counts
                .iter()
                .filter(|&&c| c > 0)
                .map(|&c| {
                    let p = c as f64 / tf;
                    p * p.ln()
                })
                .sum::<f64>()
                / base.ln();
            let r = match variant {
                Variant::Original => {
                    if counts.contains(&0) {
                        MeasureResult::undefined(
                            name,
                            variant,
                            dir,
                            "an item with zero exposure makes log p(i) undefined",
                        )
                    } else {
                        MeasureResult::new(name, variant, dir, h)
                    }
                }
                Variant::Defined => MeasureResult::new(name, variant, dir, h),
                Variant::Corrected => {
                    require_not_full("Ent", k, n)?;
                    let lo = kf.ln() / base.ln();
                    let v = normalize("Ent", h, lo, ent_max(k, m, n, base))?;
                    MeasureResult::new(name, variant, dir, v)
                }
            };
            r.param("log_base", base)
        }
        CountMeasure::Gini => {
            let x: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
            let g = stats::gini(&x).expect("positive total");
            let v = match variant {
                Variant::Corrected => {
                    require_not_full("Gini", k, n)?;
                    normalize("Gini", g, gini_min(k, m, n), gini_max(k, n))?
                }
                _ => g,
            };
            MeasureResult::new(name, variant, dir, v)
        }
        CountMeasure::Fsat => {
            let share = total / n;
            let sat = counts.iter().filter(|&&c| c >= share).count() as f64 / nf;
            let v = match variant {
                Variant::Corrected => {
                    require_not_full("FSat", k, n)?;
                    (sat - kf / nf) / (1.0 - kf / nf)
                }
                _ => sat,
            };
            let mut r = MeasureResult::new(name, variant, dir, v);
            if total < n {
                r = r.warn(Warning::AlwaysFair);
            }
            r
        }
    };
    Ok(res.param("k", kf))
}

fn prepare(run: &RunSet, catalog: &Catalog, k: usize) -> Result<Vec<usize>> {
    validate_run(run, catalog)?;
    check_kmn(k, run.m(), catalog.len())?;
    Ok(counts_of(run.lists(), k, catalog.len()))
}

/// Jain's index `(sum c)^2 / (n sum c^2)`.
pub fn jain(run: &RunSet, catalog: &Catalog, k: usize, variant: Variant) -> Result<MeasureResult> {
    let c = prepare(run, catalog, k)?;
    count_measure(CountMeasure::Jain, &c, k, run.m(), variant, None)
}

/// Item coverage `|R| / n`.
pub fn qf(run: &RunSet, catalog: &Catalog, k: usize, variant: Variant) -> Result<MeasureResult> {
    let c = prepare(run, catalog, k)?;
    count_measure(CountMeasure::Qf, &c, k, run.m(), variant, None)
}

/// Shannon entropy of the exposure distribution; `log_base` defaults to `n`.
pub fn entropy(
    run: &RunSet,
    catalog: &Catalog,
    k: usize,
    variant: Variant,
    log_base: Option<f64>,
) -> Result<MeasureResult> {
    let c = prepare(run, catalog, k)?;
    count_measure(CountMeasure::Ent, &c, k, run.m(), variant, log_base)
}

/// Gini index of exposure counts (uniform examination, a single round).
pub fn gini(run: &RunSet, catalog: &Catalog, k: usize, variant: Variant) -> Result<MeasureResult> {
    let c = prepare(run, catalog, k)?;
    count_measure(CountMeasure::Gini, &c, k, run.m(), variant, None)
}

/// Fraction of items receiving at least their maximin share `floor(km/n)`.
pub fn fsat(run: &RunSet, catalog: &Catalog, k: usize, variant: Variant) -> Result<MeasureResult> {
    let c = prepare(run, catalog, k)?;
    count_measure(CountMeasure::Fsat, &c, k, run.m(), variant, None)
}

pub(crate) fn check_rounds(rounds: &[RunSet], catalog: &Catalog, k: usize) -> Result<usize> {
    let first = rounds.first().ok_or(Error::Empty("rounds"))?;
    for r in rounds {
        validate_run(r, catalog)?;
        if r.users() != first.users() {
            return Err(invalid("rounds", "every round must rank the same users"));
        }
    }
    check_kmn(k, first.m(), catalog.len())?;
    Ok(first.m())
}

/// Per-item exposure averaged over rounds, `Ex_i = (1/W) sum_w sum_u e(z)`.
pub fn item_exposure(rounds: &[RunSet], n: usize, k: usize, exam: ExamFn) -> Result<Vec<f64>> {
    let w = exam_positions(exam, k)?;
    let mut ex = vec![0.0; n];
    for r in rounds {
        for list in r.lists() {
            for (p, &i) in list.iter().take(k).enumerate() {
                ex[i] += w[p];
            }
        }
    }
    let wn = rounds.len() as f64;
    ex.iter_mut().for_each(|x| *x /= wn);
    Ok(ex)
}

/// Gini index of position-weighted exposure averaged over `W` rounds.
///
/// The corrected variant is bounded by the closed forms when `km <= n`;
/// otherwise only the most unfair value is known and the score is divided by it.
pub fn gini_exposure(
    rounds: &[RunSet],
    catalog: &Catalog,
    k: usize,
    variant: Variant,
    exam: ExamFn,
) -> Result<MeasureResult> {
    let m = check_rounds(rounds, catalog, k)?;
    let n = catalog.len();
    let name = if exam == ExamFn::Uniform { "Gini" } else { "Gini-w" };
    if variant == Variant::Defined {
        return Err(invalid("variant", "the defined variant exists only for Ent"));
    }
    let ex = item_exposure(rounds, n, k, exam)?;
    let Some(g) = stats::gini(&ex) else {
        return Ok(MeasureResult::undefined(
            name,
            variant,
            Direction::Lower,
            "no item is exposed",
        ));
    };
    let v = match variant {
        Variant::Corrected => {
            require_not_full("Gini-w", k, n)?;
            let hi = gini_w_max(k, n, exam)?;
            if k * m <= n {
                normalize("Gini-w", g, gini_w_min(k, m, n, exam)?, hi)?
            } else {
                if hi <= 0.0 {
                    return Err(degenerate("Gini-w", "maximum is zero"));
                }
                g / hi
            }
        }
        _ => g,
    };
    Ok(MeasureResult::new(name, variant, Direction::Lower, v)
        .param("k", k as f64)
        .param("W", rounds.len() as f64))
}

/// Gini-w: Gini of DCG-weighted exposure.
pub fn gini_w(rounds: &[RunSet], catalog: &Catalog, k: usize, variant: Variant) -> Result<MeasureResult> {
    gini_exposure(rounds, catalog, k, variant, ExamFn::Dcg)
}

/// Mean violation of coverage disparity over recommended item pairs that are
/// `alpha`-similar (`1 - sim <= alpha`). `similarity = None` treats every pair as similar.
pub fn vocd(
    run: &RunSet,
    catalog: &Catalog,
    k: usize,
    similarity: Option<&[Vec<f64>]>,
    alpha: f64,
    beta: f64,
) -> Result<MeasureResult> {
    let c = prepare(run, catalog, k)?;
    if !(0.0..=2.0).contains(&alpha) {
        return Err(invalid("alpha", "must lie in [0, 2]"));
    }
    if !(0.0..1.0).contains(&beta) {
        return Err(invalid("beta", "must lie in [0, 1)"));
    }
    let n = catalog.len();
    if let Some(s) = similarity {
        if s.len() != n || s.iter().any(|row| row.len() != n) {
            return Err(invalid("similarity", format!("must be an {n} x {n} matrix")));
        }
    }
    let max = *c.iter().max().unwrap_or(&0) as f64;
    let rec: Vec<usize> = (0..n).filter(|&i| c[i] > 0).collect();
    let mut sum = 0.0;
    let mut pairs = 0usize;
    for (a, &i) in rec.iter().enumerate() {
        for &j in &rec[a + 1..] {
            let similar = similarity.is_none_or(|s| 1.0 - s[i][j] <= alpha);
            if similar {
                pairs += 1;
                let cd = (c[i] as f64 - c[j] as f64).abs() / max;
                sum += (cd - beta).max(0.0);
            }
        }
    }
    let res = if pairs == 0 {
        MeasureResult::undefined(
            "VoCD",
            Variant::Original,
            Direction::Lower,
            "no pair of similar recommended items",
        )
    } else {
        MeasureResult::new("VoCD", Variant::Original, Direction::Lower, sum / pairs as f64)
    };
    Ok(res.param("k", k as f64).param("alpha", alpha).param("beta", beta))
}

/// Which expected-exposure disparity to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DisparityKind {
    #[serde(rename = "II-D")]
    IiD,
    #[serde(rename = "AI-D")]
    AiD,
}

impl DisparityKind {
    pub fn name(self) -> &'static str {
        match self {
            DisparityKind::IiD => "II-D",
            DisparityKind::AiD => "AI-D",
        }
    }
}

/// Expected exposure disparity against the uniform target `(1 - g^k) / (n (1 - g))`.
///
/// `rounds` holds one ranking per round for the same users; exposure at position
/// `z <= k` is `gamma^(z-1)`, averaged over the rounds.
pub fn expected_exposure_disparity(
    kind: DisparityKind,
    rounds: &[RunSet],
    catalog: &Catalog,
    k: usize,
    gamma: f64,
) -> Result<MeasureResult> {
    let m = check_rounds(rounds, catalog, k)?;
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(invalid("gamma", "must lie in (0, 1)"));
    }
    let n = catalog.len();
    let nf = n as f64;
    let mf = m as f64;
    let wn = rounds.len() as f64;
    let target = (1.0 - gamma.powi(k as i32)) / (nf * (1.0 - gamma));
    let pos: Vec<f64> = (0..k).map(|p| gamma.powi(p as i32)).collect();
    let value = match kind {
        DisparityKind::IiD => {
            let mut total = 0.0;
            for u in 0..m {
                let mut per_user = 0.0;
                let mut touched = 0usize;
                if rounds.len() == 1 {
                    for &e in pos.iter().take(rounds[0].top_k(u, k).len()) {
                        per_user += (e - target) * (e - target);
                        touched += 1;
                    }
                } else {
                    let mut e: BTreeMap<usize, f64> = BTreeMap::new();
                    for r in rounds {
                        for (p, &i) in r.top_k(u, k).iter().enumerate() {
                            *e.entry(i).or_default() += pos[p] / wn;
                        }
                    }
                    for v in e.values() {
                        per_user += (v - target) * (v - target);
                    }
                    touched = e.len();
                }
                per_user += (n - touched) as f64 * target * target;
                total += per_user;
            }
            total / (mf * nf)
        }
        DisparityKind::AiD => {
            let mut agg = vec![0.0; n];
            for r in rounds {
                for u in 0..m {
                    for (p, &i) in r.top_k(u, k).iter().enumerate() {
                        agg[i] += pos[p] / wn;
                    }
                }
            }
            agg.iter()
                .map(|a| {
                    let d = a / mf - target;
                    d * d
                })
                .sum::<f64>()
                / nf
        }
    };
    let mut res = MeasureResult::new(kind.name(), Variant::Original, Direction::Lower, value)
        .param("k", k as f64)
        .param("gamma", gamma)
        .param("W", wn);
    if kind == DisparityKind::IiD && rounds.len() == 1 {
        res = res.warn(Warning::Constant);
    }
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn run(lists: Vec<Vec<usize>>) -> RunSet {
        RunSet::from_lists(lists)
    }

    #[test]
    fn jain_hand_values() {
        let cat = Catalog::with_size(10);
        let r = run(vec![vec![0, 1, 2], vec![3, 4, 5]]);
        assert!(close(jain(&r, &cat, 3, Variant::Original).unwrap().score(), 0.6, 1e-12));
        let r = run(vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 4, 5]]);
        assert!(close(
            jain(&r, &cat, 3, Variant::Original).unwrap().score(),
            0.476,
            1e-3
        ));
    }

    #[test]
    fn qf_is_quantity_insensitive() {
        let cat = Catalog::with_size(5);
        let a = run(vec![vec![0, 1], vec![1, 2], vec![0, 2]]);
        let b = run(vec![vec![0, 1], vec![0, 1], vec![0, 2]]);
        assert!(close(qf(&a, &cat, 2, Variant::Original).unwrap().score(), 0.6, 1e-12));
        assert!(close(qf(&b, &cat, 2, Variant::Original).unwrap().score(), 0.6, 1e-12));
        let ja = jain(&a, &cat, 2, Variant::Original).unwrap().score();
        let jb = jain(&b, &cat, 2, Variant::Original).unwrap().score();
        assert!(close(ja, 0.6, 1e-12));
        assert!(close(jb, 36.0 / 70.0, 1e-12));
    }

    #[test]
    fn entropy_undefined_and_defined() {
        let cat = Catalog::with_size(6);
        let r = run(vec![vec![0, 1]; 3]);
        let o = entropy(&r, &cat, 2, Variant::Original, None).unwrap();
        assert!(o.is_undefined() && o.has_warning("UNDEFINED"));
        let d = entropy(&r, &cat, 2, Variant::Defined, None).unwrap();
        assert!(close(d.score(), 2f64.ln() / 6f64.ln(), 1e-12));
        let c = entropy(&r, &cat, 2, Variant::Corrected, None).unwrap();
        assert!(close(c.score(), 0.0, 1e-12));
    }

    #[test]
    fn corrected_scores_at_extremes() {
        let fair = run(vec![vec![0, 1], vec![2, 3]]);
        let unfair = run(vec![vec![0, 1], vec![0, 1]]);
        for m in CountMeasure::ALL {
            let f = count_measure(m, &counts_of(fair.lists(), 2, 4), 2, 2, Variant::Corrected, None)
                .unwrap()
                .score();
            let u = count_measure(m, &counts_of(unfair.lists(), 2, 4), 2, 2, Variant::Corrected, None)
                .unwrap()
                .score();
            let (want_f, want_u) = if m == CountMeasure::Gini {
                (0.0, 1.0)
            } else {
                (1.0, 0.0)
            };
            assert!(close(f, want_f, 1e-12), "{m} fair {f}");
            assert!(close(u, want_u, 1e-12), "{m} unfair {u}");
        }
    }

    #[test]
    fn normalization_with_k_equal_n_is_degenerate() {
        let cat = Catalog::with_size(2);
        let r = run(vec![vec![0, 1], vec![1, 0]]);
        for f in [jain, qf, gini, fsat] {
            assert!(matches!(
                f(&r, &cat, 2, Variant::Corrected),
                Err(Error::Degenerate { .. })
            ));
        }
    }

    #[test]
    fn fsat_always_fair_warning() {
        let cat = Catalog::with_size(10);
        let r = run(vec![vec![0], vec![0]]);
        let o = fsat(&r, &cat, 1, Variant::Original).unwrap();
        assert_eq!(o.score(), 1.0);
        assert!(o.has_warning("ALWAYS_FAIR"));
    }

    #[test]
    fn gini_single_item_everywhere() {
        let cat = Catalog::with_size(5);
        let r = run(vec![vec![3]; 4]);
        assert!(close(gini(&r, &cat, 1, Variant::Original).unwrap().score(), 0.8, 1e-12));
    }

    #[test]
    fn gini_w_small_case_bounds() {
        assert!(close(gini_w_max(3, 3, ExamFn::Dcg).unwrap(), 0.156, 1e-3));
        assert!(gini_w_min(3, 2, 3, ExamFn::Dcg).is_err());
    }

    #[test]
    fn vocd_hand_value() {
        let cat = Catalog::with_size(3);
        let r = run(vec![vec![0, 1], vec![0, 2], vec![0, 2]]);
        let mut sim = vec![vec![0.0; 3]; 3];
        for (i, row) in sim.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        sim[0][1] = 1.0;
        sim[1][0] = 1.0;
        let v = vocd(&r, &cat, 2, Some(&sim), 0.0, 0.0).unwrap();
        assert!(close(v.score(), 2.0 / 3.0, 1e-12));
        let none = vocd(&r, &cat, 2, Some(&vec![vec![0.0; 3]; 3]), 0.0, 0.0).unwrap();
        assert!(none.is_undefined());
    }

    #[test]
    fn disparity_single_round_values() {
        let cat = Catalog::with_size(3);
        let r = run(vec![vec![0], vec![1]]);
        let ii = expected_exposure_disparity(DisparityKind::IiD, std::slice::from_ref(&r), &cat, 1, 0.8).unwrap();
        let ai = expected_exposure_disparity(DisparityKind::AiD, &[r], &cat, 1, 0.8).unwrap();
        assert!(close(ii.score(), 2.0 / 9.0, 1e-12));
        assert!(ii.has_warning("CONSTANT"));
        assert!(close(ai.score(), 1.0 / 18.0, 1e-12));
    }

    #[test]
    fn bounds_table() {
        let p = BoundParams::default();
        let b = exposure_bounds(BoundedMeasure::Jain, 2, 3, 6, &p).unwrap();
        assert!(close(b.most_fair, 1.0, 1e-12));
        let b = exposure_bounds(BoundedMeasure::Qf, 2, 2, 10, &p).unwrap();
        assert!(close(b.most_fair, 0.4, 1e-12));
        let b = exposure_bounds(BoundedMeasure::Vocd, 2, 3, 10, &p).unwrap();
        assert!(close(b.most_unfair, 2.0 / 3.0, 1e-12));
        assert!(matches!(
            exposure_bounds(BoundedMeasure::GiniW, 3, 2, 3, &p),
            Err(Error::Unsupported(_))
        ));
    }
}
