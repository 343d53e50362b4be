//! Evaluate a selection of measures on loaded inputs.
//!
//! Measures are addressed by family and name, such as `item:Jain` or
//! `joint:IFD-div`. A bare family (`item`) selects all of its members, and a
//! bare name selects the measure wherever it is unique. With no selection,
//! every measure whose inputs are present is computed; such measures turn
//! computation failures into undefined results, while explicitly requested
//! ones propagate the error.

use crate::effectiveness::{mean_effectiveness, per_user_effectiveness, EffMeasure, PerUserScores};
use crate::error::{invalid, Error, Result};
use crate::exposure::{entropy, expected_exposure_disparity, fsat, gini, gini_w, jain, qf, vocd, DisparityKind};
use crate::group_fairness::{between_group, group_scores, within_group, BetweenMeasure, DispersionMeasure};
use crate::measure::{MeasureResult, Variant, Warning};
use crate::model::{Catalog, GroupTable, Interactions, Qrels, RunSet};
use crate::relevance_aware::{
    expected_exposure_fairness, hd, iaa, ibo_iwo, ifd_div, ifd_mul, mme, ExpectedExposureKind, IfdDivOptions,
    NormalizedRelevance,
};
use crate::user_fairness::{
    dispersion, envy_family, puf, uf, DispersionKind, EnvyKind, ItemRepr, SimilarityMatrix, Utility,
};
use serde::{Deserialize, Serialize};

/// Parameters of an evaluation. Unset fields take the documented defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvalConfig {
    pub k: usize,
    /// Selected measures; empty means every applicable one.
    pub measures: Vec<String>,
    /// Variants for measures that have several.
    pub variants: Vec<Variant>,
    /// Entropy logarithm base; `None` is base `n`.
    pub log_base: Option<f64>,
    /// Patience of II-D, AI-D, II-F and AI-F.
    pub gamma: f64,
    /// Cascade continuation of HD.
    pub hd_gamma: f64,
    pub vocd_alpha: f64,
    pub vocd_beta: f64,
    /// IBO/IWO thresholds (better, worse).
    pub ibo_thresholds: (f64, f64),
    pub exclude_single_relevant: bool,
    /// PEU envy tolerance.
    pub envy_epsilon: f64,
    /// Per-user effectiveness measure behind SD, Gini, PUF and group measures.
    pub user_measure: EffMeasure,
    /// UF similarity threshold; `None` is mean + SD.
    pub uf_threshold: Option<f64>,
    /// Attributes that define user groups.
    pub attributes: Vec<String>,
    /// Atkinson inequality aversion.
    pub atkinson_epsilon: f64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            k: 10,
            measures: Vec::new(),
            variants: vec![Variant::Original, Variant::Corrected],
            log_base: None,
            gamma: 0.8,
            hd_gamma: 0.9,
            vocd_alpha: 2.0,
            vocd_beta: 0.0,
            ibo_thresholds: (1.1, 0.9),
            exclude_single_relevant: false,
            envy_epsilon: 0.05,
            user_measure: EffMeasure::Ndcg,
            uf_threshold: None,
            attributes: Vec::new(),
            atkinson_epsilon: 0.5,
        }
    }
}

impl EvalConfig {
    /// Check every parameter against its domain.
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(invalid("k", "must be positive"));
        }
        if self.variants.is_empty() {
            return Err(invalid("variants", "choose at least one"));
        }
        for g in [self.gamma, self.hd_gamma] {
            if !(g > 0.0 && g < 1.0) {
                return Err(invalid("gamma", "must lie in (0, 1)"));
            }
        }
        if let Some(b) = self.log_base {
            if !(b > 0.0 && b != 1.0) {
                return Err(invalid("log_base", "must be positive and not 1"));
            }
        }
        if !(0.0..=2.0).contains(&self.vocd_alpha) || !(0.0..1.0).contains(&self.vocd_beta) {
            return Err(invalid("vocd", "alpha must lie in [0, 2] and beta in [0, 1)"));
        }
        if self.ibo_thresholds.0 < self.ibo_thresholds.1 {
            return Err(invalid(
                "ibo_thresholds",
                "the better threshold must not be below the worse one",
            ));
        }
        if !(0.0..=1.0).contains(&self.envy_epsilon) {
            return Err(invalid("envy_epsilon", "must lie in [0, 1]"));
        }
        if !(self.atkinson_epsilon > 0.0) {
            return Err(invalid("atkinson_epsilon", "must be positive"));
        }
        for m in &self.measures {
            resolve(m)?;
        }
        Ok(())
    }
}

/// Everything a measure may read.
#[derive(Debug, Clone)]
pub struct Inputs {
    pub catalog: Catalog,
    /// One run per round; the first is used by single-round measures.
    pub rounds: Vec<RunSet>,
    pub qrels: Option<Qrels>,
    pub interactions: Option<Interactions>,
    pub groups: Option<GroupTable>,
    pub similarity: Option<SimilarityMatrix>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Need {
    Run,
    Qrels,
    Similarity,
    SimilarityAndInteractions,
    Groups,
}

/// Every measure id with the inputs it needs.
const CATALOG: &[(&str, Need)] = &[
    ("eff:HR", Need::Qrels),
    ("eff:MRR", Need::Qrels),
    ("eff:P", Need::Qrels),
    ("eff:R", Need::Qrels),
    ("eff:MAP", Need::Qrels),
    ("eff:NDCG", Need::Qrels),
    ("item:Jain", Need::Run),
    ("item:QF", Need::Run),
    ("item:Ent", Need::Run),
    ("item:Gini", Need::Run),
    ("item:FSat", Need::Run),
    ("item:Gini-w", Need::Run),
    ("item:VoCD", Need::Run),
    ("item:II-D", Need::Run),
    ("item:AI-D", Need::Run),
    ("joint:IAA", Need::Qrels),
    ("joint:IFD-div", Need::Qrels),
    ("joint:IFD-mul", Need::Qrels),
    ("joint:HD", Need::Qrels),
    ("joint:MME", Need::Qrels),
    ("joint:IBO-IWO", Need::Qrels),
    ("joint:II-F", Need::Qrels),
    ("joint:AI-F", Need::Qrels),
    ("user:SD", Need::Qrels),
    ("user:Gini", Need::Qrels),
    ("user:ME", Need::Qrels),
    ("user:MME", Need::Qrels),
    ("user:PEU", Need::Qrels),
    ("user:PUF", Need::Similarity),
    ("user:UF", Need::SimilarityAndInteractions),
    ("group:Min25", Need::Groups),
    ("group:Range", Need::Groups),
    ("group:SD", Need::Groups),
    ("group:MAD", Need::Groups),
    ("group:Gini", Need::Groups),
    ("group:Atk", Need::Groups),
    ("group:CV", Need::Groups),
    ("group:FStat", Need::Groups),
    ("group:KL", Need::Groups),
    ("group:GCE", Need::Groups),
    ("group:within-SD", Need::Groups),
    ("group:within-Gini", Need::Groups),
    ("group:within-Atk", Need::Groups),
];

/// All measure ids.
pub fn measure_ids() -> Vec<&'static str> {
    CATALOG.iter().map(|(id, _)| *id).collect()
}

/// Expand a selector (`family`, `family:Name` or a unique `Name`) into measure ids.
pub fn resolve(selector: &str) -> Result<Vec<&'static str>> {
    let s = selector.trim();
    let lower = s.to_ascii_lowercase();
    let fam: Vec<&'static str> = CATALOG
        .iter()
        .map(|(id, _)| *id)
        .filter(|id| id.split(':').next().is_some_and(|f| f == lower))
        .collect();
    if !fam.is_empty() {
        return Ok(fam);
    }
    if let Some(id) = CATALOG.iter().map(|(id, _)| *id).find(|id| id.eq_ignore_ascii_case(s)) {
        return Ok(vec![id]);
    }
    let by_name: Vec<&'static str> = CATALOG
        .iter()
        .map(|(id, _)| *id)
        .filter(|id| id.split(':').nth(1).is_some_and(|n| n.eq_ignore_ascii_case(s)))
        .collect();
    match by_name.len() {
        1 => Ok(by_name),
        0 => Err(invalid("measures", format!("unknown measure {s}"))),
        _ => Err(invalid("measures", format!("{s} is ambiguous: {}", by_name.join(", ")))),
    }
}

fn available(need: Need, inputs: &Inputs) -> bool {
    match need {
        Need::Run => true,
        Need::Qrels => inputs.qrels.is_some(),
        Need::Similarity => inputs.qrels.is_some() && inputs.similarity.is_some(),
        Need::SimilarityAndInteractions => inputs.similarity.is_some() && inputs.interactions.is_some(),
        Need::Groups => inputs.qrels.is_some() && inputs.groups.is_some(),
    }
}

fn missing_input(id: &str, need: Need) -> Error {
    let what = match need {
        Need::Run => "a run",
        Need::Qrels => "qrels",
        Need::Similarity => "qrels and a similarity matrix",
        Need::SimilarityAndInteractions => "a similarity matrix and interactions",
        Need::Groups => "qrels, a group table and at least one attribute",
    };
    invalid("measures", format!("{id} needs {what}"))
}

/// Compute the selected measures.
pub fn evaluate(inputs: &Inputs, config: &EvalConfig) -> Result<Vec<MeasureResult>> {
    config.validate()?;
    if inputs.rounds.is_empty() {
        return Err(Error::Empty("rounds"));
    }
    let explicit = !config.measures.is_empty();
    let mut ids: Vec<&'static str> = Vec::new();
    if explicit {
        for s in &config.measures {
            for id in resolve(s)? {
                if !ids.contains(&id) {
                    ids.push(id);
                }
            }
        }
    } else {
        ids = CATALOG
            .iter()
            .filter(|(id, need)| {
                available(*need, inputs) && !(id.starts_with("group:") && config.attributes.is_empty())
            })
            .map(|(id, _)| *id)
            .collect();
    }
    let mut ev = Evaluator {
        inputs,
        config,
        per_user: None,
    };
    let mut out = Vec::new();
    for id in ids {
        let need = CATALOG.iter().find(|(x, _)| *x == id).expect("known id").1;
        if !available(need, inputs) || (id.starts_with("group:") && config.attributes.is_empty()) {
            return Err(missing_input(id, need));
        }
        match ev.compute(id) {
            Ok(rs) => out.extend(rs),
            Err(e) if !explicit => out.push(failed(id, &e)),
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

fn failed(id: &str, e: &Error) -> MeasureResult {
    let name = id.split(':').nth(1).unwrap_or(id);
    let mut r = MeasureResult::undefined(
        name,
        Variant::Original,
        crate::measure::Direction::Higher,
        e.to_string(),
    );
    r.warnings = vec![Warning::Degenerate { reason: e.to_string() }];
    r
}

struct Evaluator<'a> {
    inputs: &'a Inputs,
    config: &'a EvalConfig,
    per_user: Option<PerUserScores>,
}

impl Evaluator<'_> {
    fn run(&self) -> &RunSet {
        &self.inputs.rounds[0]
    }

    fn qrels(&self) -> &Qrels {
        self.inputs.qrels.as_ref().expect("checked")
    }

    fn user_scores(&mut self) -> Result<&PerUserScores> {
        if self.per_user.is_none() {
            self.per_user = Some(per_user_effectiveness(
                self.config.user_measure,
                self.run(),
                self.qrels(),
                self.config.k,
            )?);
        }
        Ok(self.per_user.as_ref().expect("set"))
    }

    fn variants(&self, allowed: &[Variant]) -> Vec<Variant> {
        self.config
            .variants
            .iter()
            .copied()
            .filter(|v| allowed.contains(v))
            .collect()
    }

    fn compute(&mut self, id: &str) -> Result<Vec<MeasureResult>> {
        let c = self.config;
        let k = c.k;
        let cat = &self.inputs.catalog;
        let rounds = self.inputs.rounds.as_slice();
        let ori_cor = [Variant::Original, Variant::Corrected];
        let (family, name) = id.split_once(':').expect("family:name");
        let mut out = Vec::new();
        match family {
            "eff" => {
                let m: EffMeasure = name.parse()?;
                let s = per_user_effectiveness(m, self.run(), self.qrels(), k)?;
                let (v, users) = mean_effectiveness(&s)?;
                let mut r = MeasureResult::new(m.name(), Variant::Original, crate::measure::Direction::Higher, v)
                    .param("k", k as f64)
                    .param("users", users as f64);
                if !s.excluded.is_empty() {
                    r = r.warn(Warning::ExcludedUsers {
                        count: s.excluded.len(),
                        reason: "no relevant item".into(),
                    });
                }
                out.push(r);
            }
            "item" => match name {
                "Jain" | "QF" | "Gini" | "FSat" => {
                    for v in self.variants(&ori_cor) {
                        out.push(match name {
                            "Jain" => jain(self.run(), cat, k, v)?,
                            "QF" => qf(self.run(), cat, k, v)?,
                            "Gini" => gini(self.run(), cat, k, v)?,
                            _ => fsat(self.run(), cat, k, v)?,
                        });
                    }
                }
                "Ent" => {
                    for v in self.variants(&[Variant::Original, Variant::Defined, Variant::Corrected]) {
                        out.push(entropy(self.run(), cat, k, v, c.log_base)?);
                    }
                }
                "Gini-w" => {
                    for v in self.variants(&ori_cor) {
                        out.push(gini_w(rounds, cat, k, v)?);
                    }
                }
                "VoCD" => out.push(vocd(self.run(), cat, k, None, c.vocd_alpha, c.vocd_beta)?),
                "II-D" => out.push(expected_exposure_disparity(
                    DisparityKind::IiD,
                    rounds,
                    cat,
                    k,
                    c.gamma,
                )?),
                "AI-D" => out.push(expected_exposure_disparity(
                    DisparityKind::AiD,
                    rounds,
                    cat,
                    k,
                    c.gamma,
                )?),
                _ => unreachable!("unknown item measure {name}"),
            },
            "joint" => {
                let q = self.qrels();
                match name {
                    "IAA" => {
                        let rel = NormalizedRelevance::from_qrels(self.run(), q, cat.len());
                        for v in self.variants(&ori_cor) {
                            out.push(iaa(rounds, cat, &rel, k, None, v)?);
                        }
                    }
                    "IFD-div" => {
                        let opts = IfdDivOptions {
                            topk_indicator: None,
                            exclude_single_relevant: c.exclude_single_relevant,
                        };
                        for v in self.variants(&ori_cor) {
                            out.push(ifd_div(rounds, cat, q, k, v, opts)?);
                        }
                    }
                    "IFD-mul" => {
                        for v in self.variants(&ori_cor) {
                            out.push(ifd_mul(rounds, cat, q, k, v)?);
                        }
                    }
                    "HD" => out.push(hd(self.run(), cat, q, k, c.hd_gamma)?),
                    "MME" => out.push(mme(rounds, cat, q, k)?),
                    "IBO-IWO" => {
                        for v in self.variants(&ori_cor) {
                            let (b, w) = ibo_iwo(rounds, cat, q, k, v, c.ibo_thresholds)?;
                            out.push(b);
                            out.push(w);
                        }
                    }
                    "II-F" => {
                        for v in self.variants(&ori_cor) {
                            out.push(expected_exposure_fairness(
                                ExpectedExposureKind::IiF,
                                rounds,
                                cat,
                                q,
                                k,
                                c.gamma,
                                v,
                            )?);
                        }
                    }
                    "AI-F" => out.push(expected_exposure_fairness(
                        ExpectedExposureKind::AiF,
                        rounds,
                        cat,
                        q,
                        k,
                        c.gamma,
                        Variant::Original,
                    )?),
                    _ => unreachable!("unknown joint measure {name}"),
                }
            }
            "user" => {
                let suffix = c.user_measure.name();
                let mut r = match name {
                    "SD" => dispersion(DispersionKind::Sd, self.user_scores()?)?,
                    "Gini" => dispersion(DispersionKind::Gini, self.user_scores()?)?,
                    "ME" => envy_family(EnvyKind::Me, self.run(), self.qrels(), k, Utility::Phi)?,
                    "MME" => envy_family(EnvyKind::Mme, self.run(), self.qrels(), k, Utility::Phi)?,
                    "PEU" => envy_family(EnvyKind::Peu(c.envy_epsilon), self.run(), self.qrels(), k, Utility::Phi)?,
                    "PUF" => {
                        let sim = self.inputs.similarity.as_ref().expect("checked");
                        puf(self.user_scores()?, sim)?
                    }
                    "UF" => {
                        let sim = self.inputs.similarity.as_ref().expect("checked");
                        let h = self.inputs.interactions.as_ref().expect("checked");
                        let repr = ItemRepr::from_interactions(h, cat.len());
                        uf(self.run(), sim, &repr, k, c.uf_threshold)?
                    }
                    _ => unreachable!("unknown user measure {name}"),
                };
                r.measure = match name {
                    "SD" | "Gini" | "PUF" => format!("{name}-{suffix}"),
                    "MME" => "U-MME".into(),
                    _ => r.measure,
                };
                out.push(r);
            }
            "group" => {
                let attrs: Vec<&str> = c.attributes.iter().map(String::as_str).collect();
                let table = self.inputs.groups.as_ref().expect("checked");
                let gs = group_scores(self.user_scores()?, table, &attrs)?;
                let suffix = c.user_measure.name();
                let mut r = match name {
                    "within-SD" => within_group(DispersionMeasure::Sd, &gs)?,
                    "within-Gini" => within_group(DispersionMeasure::Gini, &gs)?,
                    "within-Atk" => within_group(DispersionMeasure::Atk(c.atkinson_epsilon), &gs)?,
                    _ => {
                        let m = match name {
                            "Min25" => BetweenMeasure::Min25,
                            "Range" => BetweenMeasure::Range,
                            "SD" => BetweenMeasure::Sd,
                            "MAD" => BetweenMeasure::Mad,
                            "Gini" => BetweenMeasure::Gini,
                            "Atk" => BetweenMeasure::Atk(c.atkinson_epsilon),
                            "CV" => BetweenMeasure::Cv,
                            "FStat" => BetweenMeasure::FStat,
                            "KL" => BetweenMeasure::Kl,
                            "GCE" => BetweenMeasure::gce_default(),
                            _ => unreachable!("unknown group measure {name}"),
                        };
                        between_group(m, &gs)?
                    }
                };
                r.measure = format!("group-{name}-{suffix}");
                out.push(r);
            }
            _ => unreachable!("unknown family {family}"),
        }
        Ok(out)
    }
}
