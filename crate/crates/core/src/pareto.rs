//! Distance to the Pareto frontier (DPFR).
//!
//! The frontier is generated from the test judgments themselves: the Oracle
//! builds maximally relevant lists, then Oracle2Fair repeatedly moves a slot
//! from the most exposed item to an under-exposed one until no item appears
//! more than `ceil(km/n)` times. Relevance and fairness are measured at
//! checkpoints along the way. A model is scored by its Euclidean distance to a
//! reference point picked by arc length on the resulting frontier.

use crate::effectiveness::{mean_effectiveness, per_user_effectiveness, score_list, EffMeasure};
use crate::error::{invalid, Error, Result};
use crate::exposure::{count_measure, CountMeasure};
use crate::measure::{Direction, Variant, Warning};
use crate::model::{contains_sorted, counts_of, exposure_counts, Catalog, Interactions, Qrels, RunSet};
use crate::report::fmt_sig;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt::Write as _;

fn histories<'a>(qrels: &Qrels, interactions: &'a Interactions) -> Vec<&'a [usize]> {
    qrels.users().iter().map(|u| interactions.history(u)).collect()
}

fn check_inputs(qrels: &Qrels, catalog: &Catalog, k: usize) -> Result<()> {
    if qrels.is_empty() {
        return Err(Error::Empty("qrels"));
    }
    if k == 0 || k > catalog.len() {
        return Err(invalid("k", format!("must lie in 1..={}", catalog.len())));
    }
    for u in 0..qrels.len() {
        if qrels.relevant(u).iter().any(|&i| i >= catalog.len()) {
            return Err(Error::UnknownItem {
                user: qrels.users()[u].clone(),
                item: "relevant item outside the catalog".into(),
            });
        }
    }
    Ok(())
}

/// Maximally relevant top-`k` lists that spread exposure where relevance allows.
///
/// Users with exactly `k` relevant items receive them. Users with more are
/// processed by increasing `|R*_u|`, and within one size by the least total
/// exposure of their already-recommended relevant items; each keeps its
/// not-yet-recommended relevant items first (ascending id) and tops up with the
/// least exposed taken ones. Users with fewer than `k` relevant items receive
/// them all, then unexposed items outside their history, then the least
/// popular recommended item not in their history, judgments or list. Lists
/// stay short only when no such item exists.
pub fn oracle(qrels: &Qrels, interactions: &Interactions, catalog: &Catalog, k: usize) -> Result<RunSet> {
    check_inputs(qrels, catalog, k)?;
    let n = catalog.len();
    let m = qrels.len();
    let hist = histories(qrels, interactions);
    let mut rec: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut counts = vec![0usize; n];
    let size = |u: usize| qrels.relevant(u).len();

    for u in 0..m {
        if size(u) == k {
            rec[u] = qrels.relevant(u).to_vec();
            for &i in &rec[u] {
                counts[i] += 1;
            }
        }
    }

    let max_size = (0..m).map(size).max().unwrap_or(0);
    for big in k + 1..=max_size {
        let users: Vec<usize> = (0..m).filter(|&u| size(u) == big).collect();
        let mut batch: Vec<(usize, usize, Vec<usize>)> = users
            .iter()
            .map(|&u| {
                let taken: Vec<usize> = qrels.relevant(u).iter().copied().filter(|&i| counts[i] > 0).collect();
                let weight = taken.iter().map(|&i| counts[i]).sum();
                (u, weight, taken)
            })
            .collect();
        batch.sort_by_key(|&(u, w, _)| (w, u));
        for (u, _, mut taken) in batch {
            let mut list: Vec<usize> = qrels
                .relevant(u)
                .iter()
                .copied()
                .filter(|i| taken.binary_search(i).is_err())
                .take(k)
                .collect();
            taken.sort_by_key(|&i| (counts[i], i));
            let need = k - list.len();
            list.extend(taken.into_iter().take(need));
            for &i in &list {
                counts[i] += 1;
            }
            rec[u] = list;
        }
    }

    let remain: Vec<usize> = (0..m).filter(|&u| size(u) < k).collect();
    for &u in &remain {
        rec[u] = qrels.relevant(u).to_vec();
        for &i in &rec[u] {
            counts[i] += 1;
        }
    }
    let mut not_in_rec: BTreeSet<usize> = (0..n).filter(|&i| counts[i] == 0).collect();
    for &u in &remain {
        let fillers: Vec<usize> = not_in_rec
            .iter()
            .copied()
            .filter(|&i| !contains_sorted(hist[u], i))
            .take(k - rec[u].len())
            .collect();
        for i in fillers {
            not_in_rec.remove(&i);
            counts[i] += 1;
            rec[u].push(i);
        }
        while rec[u].len() < k {
            let cand = (0..n)
                .filter(|&i| counts[i] > 0)
                .filter(|&i| !contains_sorted(hist[u], i) && !qrels.is_relevant(u, i) && !rec[u].contains(&i))
                .min_by_key(|&i| (counts[i], i));
            match cand {
                Some(i) => {
                    counts[i] += 1;
                    rec[u].push(i);
                }
                None => break,
            }
        }
    }
    RunSet::new(qrels.users().to_vec(), rec)
}

/// Measures evaluated at every checkpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureSet {
    pub rel: Vec<EffMeasure>,
    pub fair: Vec<CountMeasure>,
    pub fair_variant: Variant,
}

impl Default for MeasureSet {
    fn default() -> Self {
        MeasureSet {
            rel: EffMeasure::ALL.to_vec(),
            fair: CountMeasure::ALL.to_vec(),
            fair_variant: Variant::Corrected,
        }
    }
}

/// When to evaluate the measures during Oracle2Fair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckpointPolicy {
    /// After every replacement.
    EveryStep,
    /// Every `interval` replacements, plus the start and the terminal state.
    Interval(usize),
    /// About `p` points: the start, `p - 2` evenly spaced by the estimated number of
    /// replacements, and the terminal state.
    Estimated(usize),
}

/// Scores at one checkpoint, in the order of the [`MeasureSet`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub step: usize,
    pub rel: Vec<f64>,
    pub fair: Vec<f64>,
}

/// The full record of one Oracle2Fair run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub measures: MeasureSet,
    pub k: usize,
    pub checkpoints: Vec<Checkpoint>,
    /// Replacements performed.
    pub steps: usize,
    /// Excess exposure of the Oracle output, `sum max(0, c_i - ceil(km/n))`.
    pub num_rep: usize,
    /// Skipped items and early stops.
    pub log: Vec<String>,
    pub users: Vec<String>,
    pub final_lists: Vec<Vec<usize>>,
}

struct State<'a> {
    k: usize,
    n: usize,
    lists: Vec<Vec<usize>>,
    counts: Vec<usize>,
    holders: Vec<Vec<usize>>,
    by_count: BTreeSet<(usize, usize)>,
    rel: Vec<&'a [usize]>,
    hist: Vec<&'a [usize]>,
    measures: &'a MeasureSet,
    evaluable: Vec<usize>,
    user_rel: Vec<Vec<f64>>,
}

impl<'a> State<'a> {
    fn new(
        lists: Vec<Vec<usize>>,
        n: usize,
        k: usize,
        rel: Vec<&'a [usize]>,
        hist: Vec<&'a [usize]>,
        measures: &'a MeasureSet,
    ) -> Self {
        let counts = counts_of(&lists, k, n);
        let mut holders = vec![Vec::new(); n];
        for (u, l) in lists.iter().enumerate() {
            for &i in l.iter().take(k) {
                holders[i].push(u);
            }
        }
        let by_count = (0..n).filter(|&i| counts[i] > 0).map(|i| (counts[i], i)).collect();
        let evaluable: Vec<usize> = (0..lists.len()).filter(|&u| !rel[u].is_empty()).collect();
        let mut s = State {
            k,
            n,
            lists,
            counts,
            holders,
            by_count,
            rel,
            hist,
            measures,
            evaluable,
            user_rel: Vec::new(),
        };
        s.recompute_relevance();
        s
    }

    fn user_scores(&self, u: usize) -> Vec<f64> {
        self.measures
            .rel
            .iter()
            .map(|&m| score_list(m, &self.lists[u], self.rel[u], self.k))
            .collect()
    }

    fn recompute_relevance(&mut self) {
        self.user_rel = (0..self.lists.len())
            .map(|u| {
                if self.rel[u].is_empty() {
                    vec![0.0; self.measures.rel.len()]
                } else {
                    self.user_scores(u)
                }
            })
            .collect();
    }

    fn max_count(&self) -> usize {
        self.by_count.last().map_or(0, |&(c, _)| c)
    }

    fn set_count(&mut self, i: usize, c: usize) {
        if self.counts[i] > 0 {
            self.by_count.remove(&(self.counts[i], i));
        }
        self.counts[i] = c;
        if c > 0 {
            self.by_count.insert((c, i));
        }
    }

    /// Items with the maximum count, ascending id.
    fn most_popular(&self) -> Vec<usize> {
        let c = self.max_count();
        self.by_count.range((c, 0)..).map(|&(_, i)| i).collect()
    }

    /// Holders of `item` sorted by the item's position, lowest ranked first.
    fn holders_by_position(&self, item: usize) -> Vec<(usize, usize)> {
        let mut v: Vec<(usize, usize)> = self.holders[item]
            .iter()
            .map(|&u| (u, self.lists[u].iter().position(|&x| x == item).expect("holder")))
            .collect();
        v.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        v
    }

    fn pick_user(&self, donor: usize, item: usize, exclude_listed: bool) -> Option<(usize, usize)> {
        let cands: Vec<(usize, usize)> = self
            .holders_by_position(donor)
            .into_iter()
            .filter(|&(u, _)| !contains_sorted(self.hist[u], item))
            .filter(|&(u, _)| !exclude_listed || !self.lists[u].contains(&item))
            .collect();
        cands
            .iter()
            .copied()
            .find(|&(u, _)| contains_sorted(self.rel[u], item))
            .or_else(|| cands.first().copied())
    }

    fn replace(&mut self, u: usize, pos: usize, item: usize) {
        let donor = self.lists[u][pos];
        self.lists[u][pos] = item;
        let c = self.counts[donor] - 1;
        self.set_count(donor, c);
        self.holders[donor].retain(|&x| x != u);
        let c = self.counts[item] + 1;
        self.set_count(item, c);
        self.holders[item].push(u);
        let rel = self.rel[u];
        let list = std::mem::take(&mut self.lists[u]);
        let (mut top, rest): (Vec<usize>, Vec<usize>) = list.into_iter().partition(|&i| contains_sorted(rel, i));
        top.extend(rest);
        self.lists[u] = top;
        if !rel.is_empty() {
            self.user_rel[u] = self.user_scores(u);
        }
    }

    fn verify(&mut self) {
        let fresh = counts_of(&self.lists, self.k, self.n);
        assert_eq!(fresh, self.counts, "incremental exposure counts drifted");
        self.recompute_relevance();
    }

    fn checkpoint(&self, step: usize) -> Result<Checkpoint> {
        let e = self.evaluable.len() as f64;
        let rel = (0..self.measures.rel.len())
            .map(|j| {
                let s: f64 = self.evaluable.iter().map(|&u| self.user_rel[u][j]).sum();
                if e > 0.0 {
                    s / e
                } else {
                    f64::NAN
                }
            })
            .collect();
        let m = self.lists.len();
        let fair = self
            .measures
            .fair
            .iter()
            .map(|&f| count_measure(f, &self.counts, self.k, m, self.measures.fair_variant, None).map(|r| r.score()))
            .collect::<Result<_>>()?;
        Ok(Checkpoint { step, rel, fair })
    }
}

fn ceil_share(k: usize, m: usize, n: usize) -> usize {
    (k * m).div_ceil(n)
}

/// Excess exposure `sum_i max(0, c_i - ceil(km/n))`.
pub fn num_replacements(counts: &[usize], k: usize, m: usize) -> usize {
    let cap = ceil_share(k, m, counts.len());
    counts.iter().map(|&c| c.saturating_sub(cap)).sum()
}

/// Run Oracle2Fair from the Oracle output, recording checkpoints per `policy`.
pub fn oracle2fair(
    qrels: &Qrels,
    interactions: &Interactions,
    catalog: &Catalog,
    k: usize,
    measures: &MeasureSet,
    policy: CheckpointPolicy,
) -> Result<Trace> {
    let start = oracle(qrels, interactions, catalog, k)?;
    oracle2fair_from(start, qrels, interactions, catalog, k, measures, policy)
}

/// Run the Oracle2Fair replacement loop from a given starting run.
pub fn oracle2fair_from(
    start: RunSet,
    qrels: &Qrels,
    interactions: &Interactions,
    catalog: &Catalog,
    k: usize,
    measures: &MeasureSet,
    policy: CheckpointPolicy,
) -> Result<Trace> {
    check_inputs(qrels, catalog, k)?;
    if start.users() != qrels.users() {
        return Err(invalid("start", "the starting run must list the judged users in order"));
    }
    if measures.fair.is_empty() && measures.rel.is_empty() {
        return Err(invalid("measures", "choose at least one measure"));
    }
    let n = catalog.len();
    let m = qrels.len();
    let users = start.users().to_vec();
    let rel: Vec<&[usize]> = (0..m).map(|u| qrels.relevant(u)).collect();
    let hist = histories(qrels, interactions);
    let mut st = State::new(start.into_lists(), n, k, rel, hist, measures);
    let cap = ceil_share(k, m, n);
    let num_rep = num_replacements(&st.counts, k, m);
    let interval = match policy {
        CheckpointPolicy::EveryStep => 1,
        CheckpointPolicy::Interval(i) => {
            if i == 0 {
                return Err(invalid("interval", "must be positive"));
            }
            i
        }
        CheckpointPolicy::Estimated(p) => {
            if p < 2 {
                return Err(invalid("p", "needs at least two points"));
            }
            (num_rep / (p - 1)).max(1)
        }
    };
    let max_marks = match policy {
        CheckpointPolicy::Estimated(p) => p.saturating_sub(2),
        _ => usize::MAX,
    };
    let mut trace = Trace {
        measures: measures.clone(),
        k,
        checkpoints: vec![st.checkpoint(0)?],
        steps: 0,
        num_rep,
        log: Vec::new(),
        users,
        final_lists: Vec::new(),
    };
    if num_rep == 0 {
        trace
            .log
            .push("oracle output already satisfies the exposure cap".into());
    }
    let mut marks = 0usize;
    let mut after_step = |st: &mut State, trace: &mut Trace| -> Result<()> {
        trace.steps += 1;
        if trace.steps.is_multiple_of(1000) {
            st.verify();
        }
        if trace.steps.is_multiple_of(interval) && marks < max_marks {
            marks += 1;
            trace.checkpoints.push(st.checkpoint(trace.steps)?);
        }
        Ok(())
    };

    // Phase A: give a slot to every never-recommended item.
    let unexposed: Vec<usize> = (0..n).filter(|&i| st.counts[i] == 0).collect();
    for i in unexposed {
        if st.max_count() <= 1 {
            break;
        }
        let donor = st.most_popular()[0];
        match st.pick_user(donor, i, false) {
            Some((u, pos)) => {
                st.replace(u, pos, i);
                after_step(&mut st, &mut trace)?;
            }
            None => trace.log.push(format!(
                "skipped item {}: every holder of {} has it in their history",
                catalog.id(i),
                catalog.id(donor)
            )),
        }
    }

    // Phase B: move slots from the most to the least popular items.
    'outer: while st.max_count() > cap {
        let top = st.max_count();
        let donors = st.most_popular();
        let receivers: Vec<usize> = st
            .by_count
            .iter()
            .take_while(|&&(c, _)| c + 2 <= top)
            .map(|&(_, i)| i)
            .collect();
        for &i in &receivers {
            for &donor in &donors {
                if let Some((u, pos)) = st.pick_user(donor, i, true) {
                    st.replace(u, pos, i);
                    after_step(&mut st, &mut trace)?;
                    continue 'outer;
                }
            }
        }
        trace.log.push(format!(
            "stopped with maximum count {top} above the cap {cap}: no feasible replacement"
        ));
        break;
    }

    st.verify();
    let last = trace.checkpoints.last().map(|c| c.step);
    if last != Some(trace.steps) {
        trace.checkpoints.push(st.checkpoint(trace.steps)?);
    }
    trace.final_lists = st.lists;
    Ok(trace)
}

/// Estimated frontier with a budget of `p` checkpoints.
pub fn estimate_frontier(
    qrels: &Qrels,
    interactions: &Interactions,
    catalog: &Catalog,
    k: usize,
    measures: &MeasureSet,
    p: usize,
) -> Result<Trace> {
    oracle2fair(
        qrels,
        interactions,
        catalog,
        k,
        measures,
        CheckpointPolicy::Estimated(p),
    )
}

/// One frontier point in raw measure coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrontierPoint {
    pub rel: f64,
    pub fair: f64,
    pub checkpoint: usize,
}

/// Pareto frontier for one (relevance, fairness) measure pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Frontier {
    pub rel_measure: String,
    pub fair_measure: String,
    pub fair_direction: Direction,
    /// Sorted by descending relevance with strictly improving fairness.
    pub points: Vec<FrontierPoint>,
    /// Slope between the first and last checkpoints of the trace.
    pub gradient: Option<f64>,
}

impl Frontier {
    /// Build from raw checkpoint points (in checkpoint order).
    pub fn from_points(
        rel_measure: &str,
        fair_measure: &str,
        fair_direction: Direction,
        raw: &[FrontierPoint],
    ) -> Self {
        let gradient = if raw.len() < 2 {
            None
        } else {
            pair_gradient(raw[0], raw[raw.len() - 1])
        };
        let points = pareto_filter(&dedupe_frontier(raw, fair_direction), fair_direction);
        Frontier {
            rel_measure: rel_measure.to_string(),
            fair_measure: fair_measure.to_string(),
            fair_direction,
            points,
            gradient,
        }
    }

    /// A measure pair is fit when its gradient is defined and non-zero.
    pub fn is_fit(&self) -> bool {
        matches!(self.gradient, Some(g) if g != 0.0)
    }

    pub fn to_tsv(&self) -> String {
        let mut s = format!("checkpoint\t{}\t{}\n", self.rel_measure, self.fair_measure);
        for p in &self.points {
            let _ = writeln!(s, "{}\t{}\t{}", p.checkpoint, fmt_sig(p.rel), fmt_sig(p.fair));
        }
        s
    }

    /// Parse the TSV written by [`Frontier::to_tsv`].
    pub fn from_tsv(text: &str, fair_direction: Direction) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or(Error::Empty("frontier"))?;
        let cols: Vec<&str> = header.split('\t').collect();
        if cols.len() != 3 {
            return Err(Error::Parse {
                path: "<frontier>".into(),
                line: 1,
                message: "expected three columns".into(),
            });
        }
        let mut points = Vec::new();
        for (no, line) in lines.enumerate() {
            let f: Vec<&str> = line.split('\t').collect();
            let bad = |msg: &str| Error::Parse {
                path: "<frontier>".into(),
                line: no + 2,
                message: msg.to_string(),
            };
            if f.len() != 3 {
                return Err(bad("expected three columns"));
            }
            points.push(FrontierPoint {
                checkpoint: f[0].parse().map_err(|_| bad("bad checkpoint"))?,
                rel: f[1].parse().map_err(|_| bad("bad relevance"))?,
                fair: f[2].parse().map_err(|_| bad("bad fairness"))?,
            });
        }
        let gradient = if points.len() < 2 {
            None
        } else {
            pair_gradient(points[0], points[points.len() - 1])
        };
        Ok(Frontier {
            rel_measure: cols[1].to_string(),
            fair_measure: cols[2].to_string(),
            fair_direction,
            points,
            gradient,
        })
    }
}

impl Trace {
    /// Raw checkpoint points for a measure pair.
    pub fn points(&self, rel: EffMeasure, fair: CountMeasure) -> Result<Vec<FrontierPoint>> {
        let ri = self
            .measures
            .rel
            .iter()
            .position(|&r| r == rel)
            .ok_or_else(|| invalid("rel", format!("{rel} was not measured")))?;
        let fi = self
            .measures
            .fair
            .iter()
            .position(|&f| f == fair)
            .ok_or_else(|| invalid("fair", format!("{fair} was not measured")))?;
        Ok(self
            .checkpoints
            .iter()
            .map(|c| FrontierPoint {
                rel: c.rel[ri],
                fair: c.fair[fi],
                checkpoint: c.step,
            })
            .collect())
    }

    /// Frontier for one measure pair.
    pub fn frontier(&self, rel: EffMeasure, fair: CountMeasure) -> Result<Frontier> {
        let raw = self.points(rel, fair)?;
        Ok(Frontier::from_points(rel.name(), fair.name(), fair.direction(), &raw))
    }

    /// Tab-separated checkpoint table with one column per measure.
    pub fn to_tsv(&self) -> String {
        let mut s = String::from("checkpoint");
        for r in &self.measures.rel {
            let _ = write!(s, "\t{r}");
        }
        for f in &self.measures.fair {
            let _ = write!(s, "\t{f}");
        }
        s.push('\n');
        for c in &self.checkpoints {
            let _ = write!(s, "{}", c.step);
            for v in c.rel.iter().chain(&c.fair) {
                let _ = write!(s, "\t{}", fmt_sig(*v));
            }
            s.push('\n');
        }
        s
    }

    /// The terminal recommendation lists.
    pub fn final_run(&self) -> Result<RunSet> {
        RunSet::new(self.users.clone(), self.final_lists.clone())
    }
}

/// Keep the fairest point for each distinct relevance value, sorted by descending relevance.
pub fn dedupe_frontier(points: &[FrontierPoint], fair_direction: Direction) -> Vec<FrontierPoint> {
    let mut sorted: Vec<FrontierPoint> = points
        .iter()
        .copied()
        .filter(|p| p.rel.is_finite() && p.fair.is_finite())
        .collect();
    sorted.sort_by(|a, b| b.rel.total_cmp(&a.rel).then(a.checkpoint.cmp(&b.checkpoint)));
    let mut out: Vec<FrontierPoint> = Vec::new();
    for p in sorted {
        match out.last_mut() {
            Some(last) if (last.rel - p.rel).abs() <= 1e-12 => {
                if fair_direction.better(p.fair, last.fair) {
                    *last = p;
                }
            }
            _ => out.push(p),
        }
    }
    out
}

/// Drop points whose fairness does not strictly improve on every higher-relevance point.
pub fn pareto_filter(points: &[FrontierPoint], fair_direction: Direction) -> Vec<FrontierPoint> {
    let mut out: Vec<FrontierPoint> = Vec::new();
    for &p in points {
        if out.last().is_none_or(|last| fair_direction.better(p.fair, last.fair)) {
            out.push(p);
        }
    }
    out
}

/// Slope `(fair_end - fair_start) / (rel_end - rel_start)`; `None` when relevance is unchanged.
pub fn pair_gradient(start: FrontierPoint, end: FrontierPoint) -> Option<f64> {
    let dr = end.rel - start.rel;
    if dr.abs() <= 1e-15 {
        None
    } else {
        Some((end.fair - start.fair) / dr)
    }
}

/// The point whose cumulative arc length from the first point is closest to
/// `alpha` times the total length. Returns a warning for a single-point frontier.
pub fn reference_point(points: &[FrontierPoint], alpha: f64) -> Result<(FrontierPoint, Option<Warning>)> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(invalid("alpha", "must lie in [0, 1]"));
    }
    let first = *points.first().ok_or(Error::Empty("frontier"))?;
    if points.len() == 1 {
        return Ok((
            first,
            Some(Warning::Degenerate {
                reason: "single-point frontier".into(),
            }),
        ));
    }
    let mut cum = Vec::with_capacity(points.len());
    let mut total = 0.0;
    cum.push(0.0);
    for w in points.windows(2) {
        total += ((w[1].rel - w[0].rel).powi(2) + (w[1].fair - w[0].fair).powi(2)).sqrt();
        cum.push(total);
    }
    let target = alpha * total;
    let mut best = 0usize;
    for (j, c) in cum.iter().enumerate() {
        if (c - target).abs() < (cum[best] - target).abs() {
            best = j;
        }
    }
    Ok((points[best], None))
}

/// Euclidean distance between a model's `(rel, fair)` point and the reference point.
pub fn dpfr(model: (f64, f64), reference: &FrontierPoint) -> f64 {
    ((model.0 - reference.rel).powi(2) + (model.1 - reference.fair).powi(2)).sqrt()
}

/// A model's `(relevance, fairness)` point on the same axes as the frontier.
///
/// Relevance is the mean over judged users with at least one relevant item;
/// fairness is the count measure on the run's top-`k` exposure.
pub fn model_point(
    run: &RunSet,
    qrels: &Qrels,
    catalog: &Catalog,
    k: usize,
    rel: EffMeasure,
    fair: CountMeasure,
    variant: Variant,
) -> Result<(f64, f64)> {
    let scores = per_user_effectiveness(rel, run, qrels, k)?;
    let (r, _) = mean_effectiveness(&scores)?;
    let counts = exposure_counts(run, k, catalog);
    let f = count_measure(fair, &counts, k, run.m(), variant, None)?;
    match f.value {
        Some(v) => Ok((r, v)),
        None => Err(Error::Undefined(format!("{fair} for this run"))),
    }
}
