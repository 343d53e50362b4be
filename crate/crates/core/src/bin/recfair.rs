use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use recfair::agreement::{agreement_matrix, Correction, ModelRanking};
use recfair::effectiveness::EffMeasure;
use recfair::eval::{evaluate, EvalConfig, Inputs};
use recfair::exposure::{exposure_bounds, BoundParams, BoundedMeasure, CountMeasure};
use recfair::io;
use recfair::measure::Variant;
use recfair::model::{synthetic_user_ids, Catalog, Interactions};
use recfair::pareto::{
    dpfr, estimate_frontier, model_point, oracle2fair, reference_point, CheckpointPolicy, MeasureSet, Trace,
};
use recfair::report::{to_canonical_json, MeasureReport};
use recfair::rerank::{rerank, Reranker};
use recfair::synth::{
    insert_le_relevant, most_fair_run, most_unfair_run, sample_similarity, vary_relevance, Repeatability,
    SimDistribution, PRNG_NAME,
};
use recfair::user_fairness::{similarity, SimilarityKind};
use serde_json::json;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Offline fairness evaluation for recommender systems.
///
/// Input files are tab-separated with `#` comments: run (user, item, rank,
/// score?), qrels (user, item, 0/1), interactions (user, item, weight?,
/// timestamp?), catalog (item), groups (user, attribute, value) and
/// similarity (user, user, value). Set RECFAIR_THREADS to bound the worker
/// pool.
#[derive(Parser)]
#[command(name = "recfair", version, about, long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute measures for one model run and write a report.
    Eval(EvalArgs),
    /// Print the closed-form most-fair and most-unfair values of exposure measures.
    Bounds(BoundsArgs),
    /// Build or estimate the relevance-fairness Pareto frontier from the judgments.
    Pareto(ParetoArgs),
    /// Score model runs by their distance to a cached frontier.
    Dpfr(DpfrArgs),
    /// Kendall tau agreement between measures over several model reports.
    Agree(AgreeArgs),
    /// Generate synthetic runs and judgments.
    Synth(SynthArgs),
    /// Re-rank each user's top k' candidates for fairer exposure.
    Rerank(RerankArgs),
    /// Compute or sample a user similarity matrix.
    Sim(SimArgs),
}

#[derive(Args)]
struct DataArgs {
    /// Judgments file.
    #[arg(long)]
    qrels: Option<PathBuf>,
    /// Catalog file; without it the catalog is every item named in the inputs.
    #[arg(long)]
    catalog: Option<PathBuf>,
    /// Interaction history file.
    #[arg(long)]
    interactions: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct EvalArgs {
    /// Run file; repeat once per round.
    #[arg(long = "run", alias = "round", required = true)]
    runs: Vec<PathBuf>,
    #[command(flatten)]
    data: DataArgs,
    /// User attribute file.
    #[arg(long)]
    groups: Option<PathBuf>,
    /// User similarity file.
    #[arg(long)]
    similarity: Option<PathBuf>,
    /// JSON configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(short, long)]
    k: Option<usize>,
    /// Comma-separated measures, families (eff, item, joint, user, group) or family:name ids.
    #[arg(long, value_delimiter = ',')]
    measures: Vec<String>,
    /// Comma-separated variants: original, defined, corrected.
    #[arg(long, value_delimiter = ',')]
    variants: Vec<String>,
    /// Attribute defining user groups; repeat for intersections.
    #[arg(long = "attribute")]
    attributes: Vec<String>,
    /// Drop users with one relevant item from IFD÷ instead of scoring them 0.
    #[arg(long)]
    exclude_single_relevant: bool,
    #[arg(long, default_value = "dataset")]
    dataset: String,
    /// Model name recorded in the report; defaults to the first run's file stem.
    #[arg(long)]
    name: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(short, long)]
    k: usize,
    #[arg(short, long)]
    m: usize,
    #[arg(short, long)]
    n: usize,
    /// Comma-separated measures; all by default.
    #[arg(long, value_delimiter = ',')]
    measures: Vec<String>,
    #[arg(long)]
    log_base: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    beta: f64,
}

#[derive(Args)]
struct ParetoArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(short, long, default_value_t = 10)]
    k: usize,
    /// Estimate the frontier with this many points instead of checkpointing every step.
    #[arg(long)]
    points: Option<usize>,
    /// Variant of the fairness measures evaluated at checkpoints.
    #[arg(long, default_value = "corrected")]
    variant: String,
    /// Trace output (JSON).
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Also write the checkpoint table as TSV.
    #[arg(long)]
    tsv: Option<PathBuf>,
}

#[derive(Args)]
struct DpfrArgs {
    /// Trace written by `pareto`.
    #[arg(long)]
    frontier: PathBuf,
    #[command(flatten)]
    data: DataArgs,
    /// Model runs as name=path.
    #[arg(long = "model", required = true)]
    models: Vec<String>,
    #[arg(long, default_value = "NDCG")]
    rel: String,
    #[arg(long, default_value = "Jain")]
    fair: String,
    /// Relative arc-length position of the reference point.
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AgreeArgs {
    /// Reports written by `eval`, one per model.
    #[arg(long = "report", required = true)]
    reports: Vec<PathBuf>,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    #[arg(long)]
    bonferroni: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SynthArgs {
    #[command(subcommand)]
    scenario: Scenario,
}

#[derive(Subcommand)]
enum Scenario {
    /// Spread exposure as evenly as possible.
    MostFair(ExtremeArgs),
    /// Recommend the same items to everyone.
    MostUnfair(ExtremeArgs),
    /// Insert least exposed relevant items from the bottom of the lists, one step per rank.
    InsertLe {
        #[arg(short, long, default_value_t = 1000)]
        m: usize,
        #[arg(short, long, default_value_t = 10000)]
        n: usize,
        #[arg(short, long, default_value_t = 10)]
        k: usize,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Give a fraction of users only irrelevant items.
    VaryRelevance {
        #[command(flatten)]
        data: DataArgs,
        #[arg(short, long, default_value_t = 10)]
        k: usize,
        #[arg(long)]
        frac_zero: f64,
        #[arg(long)]
        seed: u64,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ExtremeArgs {
    #[arg(short, long)]
    m: usize,
    #[arg(short, long)]
    n: usize,
    #[arg(short, long)]
    k: usize,
    /// Exclude each user's history (needs --interactions and --catalog).
    #[arg(long)]
    nonrepeatable: bool,
    #[arg(long)]
    interactions: Option<PathBuf>,
    #[arg(long)]
    catalog: Option<PathBuf>,
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Cm,
    Bc,
    Gs,
}

#[derive(Args)]
struct RerankArgs {
    #[arg(long)]
    run: PathBuf,
    #[arg(long)]
    catalog: Option<PathBuf>,
    #[arg(long, value_enum)]
    method: Method,
    #[arg(short, long, default_value_t = 10)]
    k: usize,
    #[arg(long, default_value_t = 25)]
    k_prime: usize,
    #[arg(long, default_value_t = 0.05)]
    beta: f64,
    #[arg(long, default_value_t = 0.25)]
    cap: f64,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SimKindArg {
    Jaccard,
    Cosine,
    Weibull,
    Normal,
}

#[derive(Args)]
struct SimArgs {
    #[arg(long, value_enum)]
    kind: SimKindArg,
    /// History file for jaccard and cosine.
    #[arg(long)]
    interactions: Option<PathBuf>,
    #[arg(long)]
    catalog: Option<PathBuf>,
    /// Min-max normalize computed similarities.
    #[arg(long)]
    normalize: bool,
    /// Weibull shape.
    #[arg(long, default_value_t = 2.0)]
    lambda: f64,
    /// Number of synthetic users for sampled similarities.
    #[arg(short, long)]
    m: Option<usize>,
    /// Take the users of this run for sampled similarities.
    #[arg(long)]
    users_from: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_variant(s: &str) -> Result<Variant> {
    Ok(match s.trim().to_ascii_lowercase().as_str() {
        "original" | "ori" => Variant::Original,
        "defined" => Variant::Defined,
        "corrected" | "our" => Variant::Corrected,
        other => bail!("unknown variant {other}"),
    })
}

fn load_catalog(explicit: Option<&Path>, mentions: &[&Path]) -> Result<Catalog> {
    match explicit {
        Some(p) => Ok(io::read_catalog(p)?),
        None => Ok(io::collect_item_ids(mentions)?),
    }
}

fn cmd_eval(a: EvalArgs) -> Result<()> {
    let mut cfg: EvalConfig = match &a.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing {}", p.display()))?
        }
        None => EvalConfig::default(),
    };
    if let Some(k) = a.k {
        cfg.k = k;
    }
    if !a.measures.is_empty() {
        cfg.measures = a.measures.clone();
    }
    if !a.variants.is_empty() {
        cfg.variants = a.variants.iter().map(|v| parse_variant(v)).collect::<Result<_>>()?;
    }
    if !a.attributes.is_empty() {
        cfg.attributes = a.attributes.clone();
    }
    cfg.exclude_single_relevant |= a.exclude_single_relevant;
    cfg.validate()?;

    let mut mentions: Vec<&Path> = a.runs.iter().map(PathBuf::as_path).collect();
    mentions.extend(a.data.qrels.as_deref());
    mentions.extend(a.data.interactions.as_deref());
    let catalog = load_catalog(a.data.catalog.as_deref(), &mentions)?;
    let rounds = a
        .runs
        .iter()
        .map(|p| io::read_run(p, &catalog))
        .collect::<recfair::Result<Vec<_>>>()?;
    let qrels = a
        .data
        .qrels
        .as_deref()
        .map(|p| io::read_qrels(p, &catalog))
        .transpose()?;
    let interactions = a
        .data
        .interactions
        .as_deref()
        .map(|p| io::read_interactions(p, &catalog))
        .transpose()?;
    let groups = a.groups.as_deref().map(io::read_groups).transpose()?;
    let similarity = a
        .similarity
        .as_deref()
        .map(|p| io::read_similarity(p, rounds[0].users().to_vec()))
        .transpose()?;
    let inputs = Inputs {
        catalog,
        rounds,
        qrels,
        interactions,
        groups,
        similarity,
    };
    let name = a.name.clone().unwrap_or_else(|| {
        a.runs[0]
            .file_stem()
            .map_or_else(|| "run".into(), |s| s.to_string_lossy().into_owned())
    });
    let mut report = MeasureReport::new(&a.dataset, &name, cfg.k, &cfg)?;
    report.measures = evaluate(&inputs, &cfg)?;
    let text = match a.format {
        Format::Json => report.to_json()?,
        Format::Csv => report.to_csv(),
    };
    emit(a.out.as_deref(), &text)
}

fn cmd_bounds(a: BoundsArgs) -> Result<()> {
    ensure!(
        a.k >= 1 && a.m >= 1 && a.k <= a.n,
        "need 1 <= k <= n and m >= 1, got k={} m={} n={}",
        a.k,
        a.m,
        a.n
    );
    let measures: Vec<BoundedMeasure> = if a.measures.is_empty() {
        vec![
            BoundedMeasure::Jain,
            BoundedMeasure::Qf,
            BoundedMeasure::Ent,
            BoundedMeasure::Gini,
            BoundedMeasure::GiniW,
            BoundedMeasure::Fsat,
            BoundedMeasure::Vocd,
        ]
    } else {
        a.measures.iter().map(|m| m.parse()).collect::<recfair::Result<_>>()?
    };
    let params = BoundParams {
        log_base: a.log_base,
        beta: a.beta,
    };
    let mut out = BTreeMap::new();
    for m in measures {
        let key = serde_json::to_value(m)?.as_str().unwrap_or_default().to_string();
        let v = match exposure_bounds(m, a.k, a.m, a.n, &params) {
            Ok(b) => serde_json::to_value(b)?,
            Err(e) => json!({ "error": e.to_string() }),
        };
        out.insert(key, v);
    }
    emit(
        None,
        &to_canonical_json(&json!({ "k": a.k, "m": a.m, "n": a.n, "bounds": out }))?,
    )
}

fn judged_inputs(data: &DataArgs, extra: &[&Path]) -> Result<(Catalog, recfair::Qrels, Interactions)> {
    let qpath = data.qrels.as_deref().context("--qrels is required")?;
    let mut mentions = vec![qpath];
    mentions.extend(data.interactions.as_deref());
    mentions.extend_from_slice(extra);
    let catalog = load_catalog(data.catalog.as_deref(), &mentions)?;
    let qrels = io::read_qrels(qpath, &catalog)?;
    let interactions = match data.interactions.as_deref() {
        Some(p) => io::read_interactions(p, &catalog)?,
        None => Interactions::default(),
    };
    Ok((catalog, qrels, interactions))
}

fn cmd_pareto(a: ParetoArgs) -> Result<()> {
    let (catalog, qrels, interactions) = judged_inputs(&a.data, &[])?;
    let measures = MeasureSet {
        fair_variant: parse_variant(&a.variant)?,
        ..MeasureSet::default()
    };
    let trace = match a.points {
        Some(p) => estimate_frontier(&qrels, &interactions, &catalog, a.k, &measures, p)?,
        None => oracle2fair(
            &qrels,
            &interactions,
            &catalog,
            a.k,
            &measures,
            CheckpointPolicy::EveryStep,
        )?,
    };
    for line in &trace.log {
        eprintln!("warning: {line}");
    }
    if let Some(p) = &a.tsv {
        std::fs::write(p, trace.to_tsv())?;
    }
    emit(a.out.as_deref(), &to_canonical_json(&trace)?)
}

fn cmd_dpfr(a: DpfrArgs) -> Result<()> {
    let text = std::fs::read_to_string(&a.frontier).with_context(|| format!("reading {}", a.frontier.display()))?;
    let trace: Trace = serde_json::from_str(&text).with_context(|| format!("parsing {}", a.frontier.display()))?;
    let rel: EffMeasure = a.rel.parse()?;
    let fair: CountMeasure = a.fair.parse()?;
    let models: Vec<(String, PathBuf)> = a
        .models
        .iter()
        .map(|s| match s.split_once('=') {
            Some((n, p)) => Ok((n.to_string(), PathBuf::from(p))),
            None => bail!("--model expects name=path, got {s}"),
        })
        .collect::<Result<_>>()?;
    let paths: Vec<&Path> = models.iter().map(|(_, p)| p.as_path()).collect();
    let (catalog, qrels, _) = judged_inputs(&a.data, &paths)?;
    let frontier = trace.frontier(rel, fair)?;
    let (reference, warning) = reference_point(&frontier.points, a.alpha)?;
    if let Some(w) = &warning {
        eprintln!("warning: {}", w.code());
    }
    let mut rows = Vec::new();
    for (name, path) in &models {
        let run = io::read_run(path, &catalog)?;
        let (r, f) = model_point(&run, &qrels, &catalog, trace.k, rel, fair, trace.measures.fair_variant)?;
        rows.push(json!({ "model": name, "rel": r, "fair": f, "dpfr": dpfr((r, f), &reference) }));
    }
    let out = json!({
        "rel_measure": rel.name(),
        "fair_measure": fair.name(),
        "alpha": a.alpha,
        "k": trace.k,
        "reference": reference,
        "frontier_points": frontier.points.len(),
        "gradient": frontier.gradient,
        "warnings": warning.map(|w| vec![w]).unwrap_or_default(),
        "models": rows,
    });
    emit(a.out.as_deref(), &to_canonical_json(&out)?)
}

fn cmd_agree(a: AgreeArgs) -> Result<()> {
    let reports: Vec<MeasureReport> = a
        .reports
        .iter()
        .map(|p| {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            MeasureReport::from_json(&text).with_context(|| format!("parsing {}", p.display()))
        })
        .collect::<Result<_>>()?;
    let mut by_measure: BTreeMap<String, (recfair::Direction, Vec<(String, f64)>)> = BTreeMap::new();
    for r in &reports {
        for m in &r.measures {
            if let Some(v) = m.value {
                let key = format!("{} ({})", m.measure, m.variant);
                by_measure
                    .entry(key)
                    .or_insert((m.direction, Vec::new()))
                    .1
                    .push((r.run.clone(), v));
            }
        }
    }
    let rankings: Vec<ModelRanking> = by_measure
        .into_iter()
        .filter(|(_, (_, s))| s.len() == reports.len())
        .map(|(k, (d, s))| ModelRanking::new(&k, d, s))
        .collect::<recfair::Result<_>>()?;
    let correction = if a.bonferroni {
        Correction::Bonferroni
    } else {
        Correction::BenjaminiHochberg
    };
    let m = agreement_matrix(&rankings, a.alpha, correction)?;
    if m.small_sample {
        eprintln!("warning: fewer than 10 models; p-values use the normal approximation");
    }
    let text = match a.format {
        Format::Json => to_canonical_json(&m)?,
        Format::Csv => m.to_csv(),
    };
    emit(a.out.as_deref(), &text)
}

fn write_file(dir: &Path, name: &str, text: &str) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let p = dir.join(name);
    std::fs::write(&p, text).with_context(|| format!("writing {}", p.display()))
}

fn cmd_synth(a: SynthArgs) -> Result<()> {
    match a.scenario {
        Scenario::MostFair(x) => synth_extreme(x, true),
        Scenario::MostUnfair(x) => synth_extreme(x, false),
        Scenario::InsertLe { m, n, k, out_dir } => {
            let s = insert_le_relevant(m, n, k)?;
            write_file(&out_dir, "catalog.tsv", &io::format_catalog(&s.catalog))?;
            write_file(&out_dir, "qrels.tsv", &io::format_qrels(&s.qrels, &s.catalog))?;
            for (t, run) in s.runs.iter().enumerate() {
                write_file(&out_dir, &format!("run_p{t:02}.tsv"), &io::format_run(run, &s.catalog))?;
            }
            Ok(())
        }
        Scenario::VaryRelevance {
            data,
            k,
            frac_zero,
            seed,
            out,
        } => {
            let (catalog, qrels, _) = judged_inputs(&data, &[])?;
            let run = vary_relevance(&qrels, &catalog, k, frac_zero, seed)?;
            eprintln!("prng: {PRNG_NAME}, seed {seed}");
            emit(out.as_deref(), &io::format_run(&run, &catalog))
        }
    }
}

fn synth_extreme(x: ExtremeArgs, fair: bool) -> Result<()> {
    let catalog = match &x.catalog {
        Some(p) => io::read_catalog(p)?,
        None => Catalog::with_size(x.n),
    };
    if catalog.len() != x.n {
        bail!("the catalog has {} items but -n is {}", catalog.len(), x.n);
    }
    let (mode, interactions) = if x.nonrepeatable {
        let p = x
            .interactions
            .as_deref()
            .context("--nonrepeatable needs --interactions")?;
        (Repeatability::Nonrepeatable, Some(io::read_interactions(p, &catalog)?))
    } else {
        (Repeatability::Repeatable, None)
    };
    let users = match &interactions {
        Some(h) if h.len() == x.m => h.users().to_vec(),
        Some(h) => bail!("the interaction file has {} users but -m is {}", h.len(), x.m),
        None => synthetic_user_ids(x.m),
    };
    let run = if fair {
        most_fair_run(mode, interactions.as_ref(), &catalog, &users, x.k)?
    } else {
        most_unfair_run(mode, interactions.as_ref(), &catalog, &users, x.k)?
    };
    write_file(&x.out_dir, "catalog.tsv", &io::format_catalog(&catalog))?;
    write_file(&x.out_dir, "run.tsv", &io::format_run(&run, &catalog))
}

fn cmd_rerank(a: RerankArgs) -> Result<()> {
    let catalog = load_catalog(a.catalog.as_deref(), &[a.run.as_path()])?;
    let run = io::read_run(&a.run, &catalog)?;
    let method = match a.method {
        Method::Cm => Reranker::CombMnz,
        Method::Bc => Reranker::Borda,
        Method::Gs => Reranker::GreedySubstitution {
            beta: a.beta,
            cap: a.cap,
        },
    };
    let out = rerank(method, &run, catalog.len(), a.k, a.k_prime)?;
    if out.skipped > 0 {
        eprintln!("{} swaps applied, {} stale swaps skipped", out.swaps, out.skipped);
    }
    emit(a.out.as_deref(), &io::format_run(&out.run, &catalog))
}

fn cmd_sim(a: SimArgs) -> Result<()> {
    let sim = match a.kind {
        SimKindArg::Jaccard | SimKindArg::Cosine => {
            let p = a.interactions.as_deref().context("--interactions is required")?;
            let catalog = load_catalog(a.catalog.as_deref(), &[p])?;
            let h = io::read_interactions(p, &catalog)?;
            let kind = if matches!(a.kind, SimKindArg::Jaccard) {
                SimilarityKind::Jaccard
            } else {
                SimilarityKind::Cosine
            };
            let s = similarity(kind, &h, None, a.normalize)?;
            if !s.empty_history.is_empty() {
                eprintln!("warning: {} users have an empty history", s.empty_history.len());
            }
            s
        }
        SimKindArg::Weibull | SimKindArg::Normal => {
            let users = match (&a.users_from, a.m) {
                (Some(p), _) => {
                    let catalog = load_catalog(a.catalog.as_deref(), &[p.as_path()])?;
                    io::read_run(p, &catalog)?.users().to_vec()
                }
                (None, Some(m)) => synthetic_user_ids(m),
                (None, None) => bail!("sampled similarities need --users-from or -m"),
            };
            let dist = if matches!(a.kind, SimKindArg::Weibull) {
                SimDistribution::Weibull(a.lambda)
            } else {
                SimDistribution::Normal
            };
            eprintln!("prng: {PRNG_NAME}, seed {}", a.seed);
            sample_similarity(dist, users, a.seed)?
        }
    };
    emit(a.out.as_deref(), &io::format_similarity(&sim))
}

fn run(cli: Cli) -> Result<()> {
    if let Ok(t) = std::env::var("RECFAIR_THREADS") {
        let n: usize = t.parse().context("RECFAIR_THREADS must be a positive integer")?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    match cli.command {
        Command::Eval(a) => cmd_eval(a),
        Command::Bounds(a) => cmd_bounds(a),
        Command::Pareto(a) => cmd_pareto(a),
        Command::Dpfr(a) => cmd_dpfr(a),
        Command::Agree(a) => cmd_agree(a),
        Command::Synth(a) => cmd_synth(a),
        Command::Rerank(a) => cmd_rerank(a),
        Command::Sim(a) => cmd_sim(a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
