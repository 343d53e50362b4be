//! C ABI for `recfair`.
//!
//! Every fallible function returns an [`RfStatus`] and writes results through
//! out-pointers. On failure, [`rf_last_error`] returns a description that stays
//! valid on the calling thread until the next failing call. Objects cross the
//! boundary as opaque handles created by the constructor functions and
//! released with the matching `rf_*_free`. Panics never unwind into C; they are
//! reported as [`RfStatus::Panic`].

#![allow(clippy::missing_safety_doc)]

use recfair::agreement::{bh_correct, kendall_tau_b, ModelRanking};
use recfair::effectiveness::{mean_effectiveness, per_user_effectiveness, EffMeasure};
use recfair::exposure::{count_measure, exposure_bounds, BoundParams, BoundedMeasure, CountMeasure};
use recfair::io::{parse_catalog, parse_interactions, parse_qrels, parse_run};
use recfair::model::exposure_counts;
use recfair::pareto::{dpfr, model_point, oracle2fair, reference_point, CheckpointPolicy, Frontier, MeasureSet, Trace};
use recfair::{Catalog, Direction, Error, Interactions, Qrels, RunSet, Variant};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RfStatus {
    Ok = 0,
    /// A required pointer argument was NULL.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// An argument or input failed validation.
    InvalidArgument = 3,
    /// Input text could not be parsed.
    Parse = 4,
    /// The score cannot be normalized for this shape.
    Degenerate = 5,
    /// The score is undefined for this input.
    Undefined = 6,
    /// A file could not be read.
    Io = 7,
    /// An internal error was caught at the boundary.
    Panic = 8,
}

/// Variant selector for measure calls.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RfVariant {
    Original = 0,
    Defined = 1,
    Corrected = 2,
}

impl From<RfVariant> for Variant {
    fn from(v: RfVariant) -> Self {
        match v {
            RfVariant::Original => Variant::Original,
            RfVariant::Defined => Variant::Defined,
            RfVariant::Corrected => Variant::Corrected,
        }
    }
}

/// An item catalog.
pub struct RfCatalog(Catalog);
/// Ranked lists, one per user.
pub struct RfRun(RunSet);
/// Binary relevance judgments.
pub struct RfQrels(Qrels);
/// Interaction histories used to exclude already consumed items.
pub struct RfInteractions(Interactions);
/// A frontier for one (relevance, fairness) measure pair.
pub struct RfFrontier(Frontier);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> RfStatus {
    match e {
        Error::Parse { .. } | Error::Json(_) => RfStatus::Parse,
        Error::Degenerate { .. } => RfStatus::Degenerate,
        Error::Undefined(_) | Error::NoEvaluableUsers => RfStatus::Undefined,
        Error::File { .. } | Error::Io(_) => RfStatus::Io,
        _ => RfStatus::InvalidArgument,
    }
}

struct Fail(RfStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

type Outcome = Result<(), Fail>;

fn guard(f: impl FnOnce() -> Outcome) -> RfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RfStatus::Ok,
        Ok(Err(Fail(status, message))) => {
            set_error(message);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal error: {msg}"));
            RfStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(RfStatus::NullPointer, format!("{what} is NULL"))
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn utf8<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(RfStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Outcome {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn emit<T>(out: *mut *mut T, value: T) -> Outcome {
    write(out, Box::into_raw(Box::new(value)), "out")
}

unsafe fn release<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

fn defined(r: recfair::MeasureResult) -> Result<f64, Fail> {
    match r.value {
        Some(v) => Ok(v),
        None => {
            let why = r
                .warnings
                .iter()
                .find_map(|w| match w {
                    recfair::Warning::Undefined { reason } => Some(reason.clone()),
                    _ => None,
                })
                .unwrap_or_else(|| "no value".into());
            Err(Fail(RfStatus::Undefined, format!("{} is undefined: {why}", r.measure)))
        }
    }
}

/// Description of the last failure on this thread, or NULL if none occurred.
#[no_mangle]
pub extern "C" fn rf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn rf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Catalog of `n` synthetic items with zero-padded ids.
#[no_mangle]
pub unsafe extern "C" fn rf_catalog_with_size(n: usize, out: *mut *mut RfCatalog) -> RfStatus {
    guard(|| {
        if n == 0 {
            return Err(Fail(RfStatus::InvalidArgument, "catalog size must be positive".into()));
        }
        emit(out, RfCatalog(Catalog::with_size(n)))
    })
}

/// Catalog parsed from one item id per line.
#[no_mangle]
pub unsafe extern "C" fn rf_catalog_from_text(text: *const c_char, out: *mut *mut RfCatalog) -> RfStatus {
    guard(|| emit(out, RfCatalog(parse_catalog("<catalog>", utf8(text, "text")?)?)))
}

#[no_mangle]
pub unsafe extern "C" fn rf_catalog_len(catalog: *const RfCatalog, out_len: *mut usize) -> RfStatus {
    guard(|| write(out_len, borrow(catalog, "catalog")?.0.len(), "out_len"))
}

#[no_mangle]
pub unsafe extern "C" fn rf_catalog_free(catalog: *mut RfCatalog) {
    release(catalog);
}

/// Run parsed from `user item rank [score]` rows.
#[no_mangle]
pub unsafe extern "C" fn rf_run_from_text(
    text: *const c_char,
    catalog: *const RfCatalog,
    out: *mut *mut RfRun,
) -> RfStatus {
    guard(|| {
        let cat = &borrow(catalog, "catalog")?.0;
        emit(out, RfRun(parse_run("<run>", utf8(text, "text")?, cat)?))
    })
}

/// Run from `m` lists of catalog indices laid end to end in `items`, with
/// `lengths[u]` entries for user `u`. Users get synthetic ids.
#[no_mangle]
pub unsafe extern "C" fn rf_run_from_lists(
    items: *const usize,
    lengths: *const usize,
    m: usize,
    out: *mut *mut RfRun,
) -> RfStatus {
    guard(|| {
        if m == 0 {
            return Err(Fail(RfStatus::InvalidArgument, "a run needs at least one user".into()));
        }
        if lengths.is_null() {
            return Err(null("lengths"));
        }
        let lengths = std::slice::from_raw_parts(lengths, m);
        let total: usize = lengths.iter().sum();
        if total > 0 && items.is_null() {
            return Err(null("items"));
        }
        let flat = if total == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(items, total)
        };
        let mut lists = Vec::with_capacity(m);
        let mut at = 0;
        for &len in lengths {
            let list = flat[at..at + len].to_vec();
            let mut seen = list.clone();
            seen.sort_unstable();
            seen.dedup();
            if seen.len() != list.len() {
                return Err(Fail(
                    RfStatus::InvalidArgument,
                    format!("user {} lists an item twice", lists.len()),
                ));
            }
            lists.push(list);
            at += len;
        }
        emit(out, RfRun(RunSet::from_lists(lists)))
    })
}

#[no_mangle]
pub unsafe extern "C" fn rf_run_users(run: *const RfRun, out_m: *mut usize) -> RfStatus {
    guard(|| write(out_m, borrow(run, "run")?.0.m(), "out_m"))
}

#[no_mangle]
pub unsafe extern "C" fn rf_run_free(run: *mut RfRun) {
    release(run);
}

/// Judgments parsed from `user item grade` rows; grades above 0 are relevant.
#[no_mangle]
pub unsafe extern "C" fn rf_qrels_from_text(
    text: *const c_char,
    catalog: *const RfCatalog,
    out: *mut *mut RfQrels,
) -> RfStatus {
    guard(|| {
        let cat = &borrow(catalog, "catalog")?.0;
        emit(out, RfQrels(parse_qrels("<qrels>", utf8(text, "text")?, cat)?))
    })
}

#[no_mangle]
pub unsafe extern "C" fn rf_qrels_free(qrels: *mut RfQrels) {
    release(qrels);
}

/// Histories parsed from `user item` rows.
#[no_mangle]
pub unsafe extern "C" fn rf_interactions_from_text(
    text: *const c_char,
    catalog: *const RfCatalog,
    out: *mut *mut RfInteractions,
) -> RfStatus {
    guard(|| {
        let cat = &borrow(catalog, "catalog")?.0;
        emit(
            out,
            RfInteractions(parse_interactions("<interactions>", utf8(text, "text")?, cat)?),
        )
    })
}

#[no_mangle]
pub unsafe extern "C" fn rf_interactions_free(interactions: *mut RfInteractions) {
    release(interactions);
}

/// Exposure measure (`Jain`, `QF`, `Ent`, `Gini` or `FSat`) of the run's top `k`.
#[no_mangle]
pub unsafe extern "C" fn rf_exposure_measure(
    measure: *const c_char,
    run: *const RfRun,
    catalog: *const RfCatalog,
    k: usize,
    variant: RfVariant,
    out_value: *mut f64,
) -> RfStatus {
    guard(|| {
        let measure: CountMeasure = utf8(measure, "measure")?.parse()?;
        let run = &borrow(run, "run")?.0;
        let cat = &borrow(catalog, "catalog")?.0;
        recfair::model::validate_run(run, cat)?;
        if k == 0 || k > cat.len() {
            return Err(Fail(
                RfStatus::InvalidArgument,
                format!("k must lie in 1..={}", cat.len()),
            ));
        }
        let counts = exposure_counts(run, k, cat);
        let r = count_measure(measure, &counts, k, run.m(), variant.into(), None)?;
        write(out_value, defined(r)?, "out_value")
    })
}

/// Mean effectiveness (`HR`, `MRR`, `P`, `R`, `MAP` or `NDCG`) at `k` over
/// judged users with at least one relevant item.
#[no_mangle]
pub unsafe extern "C" fn rf_effectiveness(
    measure: *const c_char,
    run: *const RfRun,
    qrels: *const RfQrels,
    k: usize,
    out_value: *mut f64,
) -> RfStatus {
    guard(|| {
        let measure: EffMeasure = utf8(measure, "measure")?.parse()?;
        let scores = per_user_effectiveness(measure, &borrow(run, "run")?.0, &borrow(qrels, "qrels")?.0, k)?;
        write(out_value, mean_effectiveness(&scores)?.0, "out_value")
    })
}

/// Closed-form most-unfair and most-fair values of an exposure measure.
#[no_mangle]
pub unsafe extern "C" fn rf_exposure_bounds(
    measure: *const c_char,
    k: usize,
    m: usize,
    n: usize,
    out_most_unfair: *mut f64,
    out_most_fair: *mut f64,
) -> RfStatus {
    guard(|| {
        let measure: BoundedMeasure = utf8(measure, "measure")?.parse()?;
        let b = exposure_bounds(measure, k, m, n, &BoundParams::default())?;
        write(out_most_unfair, b.most_unfair, "out_most_unfair")?;
        write(out_most_fair, b.most_fair, "out_most_fair")
    })
}

/// Kendall's tau-b between two score vectors over the same `len` models
/// (higher is better for both). `out_p_value` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn rf_kendall_tau_b(
    a: *const f64,
    b: *const f64,
    len: usize,
    out_tau: *mut f64,
    out_p_value: *mut f64,
) -> RfStatus {
    guard(|| {
        if a.is_null() || b.is_null() {
            return Err(null("score vector"));
        }
        let ranking = |name: &str, v: &[f64]| {
            ModelRanking::new(
                name,
                Direction::Higher,
                v.iter().enumerate().map(|(i, &s)| (format!("m{i}"), s)).collect(),
            )
        };
        let x = ranking("a", std::slice::from_raw_parts(a, len))?;
        let y = ranking("b", std::slice::from_raw_parts(b, len))?;
        let t = kendall_tau_b(&x, &y)?;
        let tau = t.tau.ok_or_else(|| {
            Fail(
                RfStatus::Undefined,
                "tau is undefined when one ranking is fully tied".into(),
            )
        })?;
        write(out_tau, tau, "out_tau")?;
        if !out_p_value.is_null() {
            out_p_value.write(t.p_value.unwrap_or(f64::NAN));
        }
        Ok(())
    })
}

/// Benjamini-Hochberg step-up flags (1 = significant) for `len` p-values.
#[no_mangle]
pub unsafe extern "C" fn rf_bh_correct(p_values: *const f64, len: usize, alpha: f64, out_flags: *mut u8) -> RfStatus {
    guard(|| {
        if p_values.is_null() || out_flags.is_null() {
            return Err(null("p_values or out_flags"));
        }
        let flags = bh_correct(std::slice::from_raw_parts(p_values, len), alpha)?;
        for (j, f) in flags.into_iter().enumerate() {
            out_flags.add(j).write(u8::from(f));
        }
        Ok(())
    })
}

fn measure_set(rel: EffMeasure, fair: CountMeasure, variant: Variant) -> MeasureSet {
    MeasureSet {
        rel: vec![rel],
        fair: vec![fair],
        fair_variant: variant,
    }
}

/// Frontier generated from the judgments by moving exposure from over-exposed
/// to unexposed items. `points == 0` records every step; otherwise about
/// `points` checkpoints are estimated. `interactions` may be NULL.
#[no_mangle]
pub unsafe extern "C" fn rf_frontier_generate(
    qrels: *const RfQrels,
    interactions: *const RfInteractions,
    catalog: *const RfCatalog,
    k: usize,
    rel_measure: *const c_char,
    fair_measure: *const c_char,
    variant: RfVariant,
    points: usize,
    out: *mut *mut RfFrontier,
) -> RfStatus {
    guard(|| {
        let rel: EffMeasure = utf8(rel_measure, "rel_measure")?.parse()?;
        let fair: CountMeasure = utf8(fair_measure, "fair_measure")?.parse()?;
        let empty = Interactions::default();
        let history = match interactions.as_ref() {
            Some(h) => &h.0,
            None => &empty,
        };
        let policy = if points == 0 {
            CheckpointPolicy::EveryStep
        } else {
            CheckpointPolicy::Estimated(points)
        };
        let trace: Trace = oracle2fair(
            &borrow(qrels, "qrels")?.0,
            history,
            &borrow(catalog, "catalog")?.0,
            k,
            &measure_set(rel, fair, variant.into()),
            policy,
        )?;
        emit(out, RfFrontier(trace.frontier(rel, fair)?))
    })
}

#[no_mangle]
pub unsafe extern "C" fn rf_frontier_len(frontier: *const RfFrontier, out_len: *mut usize) -> RfStatus {
    guard(|| write(out_len, borrow(frontier, "frontier")?.0.points.len(), "out_len"))
}

/// Point `index` of the frontier, in order of descending relevance.
#[no_mangle]
pub unsafe extern "C" fn rf_frontier_point(
    frontier: *const RfFrontier,
    index: usize,
    out_rel: *mut f64,
    out_fair: *mut f64,
) -> RfStatus {
    guard(|| {
        let f = &borrow(frontier, "frontier")?.0;
        let p = f.points.get(index).ok_or_else(|| {
            Fail(
                RfStatus::InvalidArgument,
                format!("index {index} out of {}", f.points.len()),
            )
        })?;
        write(out_rel, p.rel, "out_rel")?;
        write(out_fair, p.fair, "out_fair")
    })
}

/// Reference point at relative arc length `alpha` along the frontier.
#[no_mangle]
pub unsafe extern "C" fn rf_frontier_reference(
    frontier: *const RfFrontier,
    alpha: f64,
    out_rel: *mut f64,
    out_fair: *mut f64,
) -> RfStatus {
    guard(|| {
        let (p, _) = reference_point(&borrow(frontier, "frontier")?.0.points, alpha)?;
        write(out_rel, p.rel, "out_rel")?;
        write(out_fair, p.fair, "out_fair")
    })
}

/// Distance from a model run's (relevance, fairness) point to the frontier's
/// reference point at `alpha`, on the frontier's own measure pair.
#[no_mangle]
pub unsafe extern "C" fn rf_frontier_distance(
    frontier: *const RfFrontier,
    run: *const RfRun,
    qrels: *const RfQrels,
    catalog: *const RfCatalog,
    k: usize,
    variant: RfVariant,
    alpha: f64,
    out_distance: *mut f64,
) -> RfStatus {
    guard(|| {
        let f = &borrow(frontier, "frontier")?.0;
        let rel: EffMeasure = f.rel_measure.parse()?;
        let fair: CountMeasure = f.fair_measure.parse()?;
        let (reference, _) = reference_point(&f.points, alpha)?;
        let point = model_point(
            &borrow(run, "run")?.0,
            &borrow(qrels, "qrels")?.0,
            &borrow(catalog, "catalog")?.0,
            k,
            rel,
            fair,
            variant.into(),
        )?;
        write(out_distance, dpfr(point, &reference), "out_distance")
    })
}

#[no_mangle]
pub unsafe extern "C" fn rf_frontier_free(frontier: *mut RfFrontier) {
    release(frontier);
}
