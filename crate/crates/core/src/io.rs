//! Tab-separated input files.
//!
//! Lines starting with `#` and blank lines are skipped. Fields are split on
//! tabs, or on runs of whitespace when a line has no tab. Every error names
//! the file and line.
//!
//! | file | columns |
//! |------|---------|
//! | run | user, item, rank, score? |
//! | qrels | user, item, grade (0 or 1) |
//! | interactions | user, item, weight?, timestamp? |
//! | catalog | item |
//! | groups | user, attribute, value |
//! | similarity | user, user, value |

use crate::error::{Error, Result};
use crate::model::{Catalog, GroupTable, Interactions, Qrels, RunSet};
use crate::user_fairness::SimilarityMatrix;
use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::path::Path;

/// One data line with its 1-based line number.
struct Row {
    line: usize,
    fields: Vec<String>,
}

struct Source {
    path: String,
    rows: Vec<Row>,
}

impl Source {
    fn parse(path: &str, text: &str) -> Self {
        let rows = text
            .lines()
            .enumerate()
            .filter(|(_, l)| {
                let t = l.trim();
                !t.is_empty() && !t.starts_with('#')
            })
            .map(|(no, l)| {
                let l = l.trim_end_matches('\r');
                let fields = if l.contains('\t') {
                    l.split('\t').map(|f| f.trim().to_string()).collect()
                } else {
                    l.split_whitespace().map(str::to_string).collect()
                };
                Row { line: no + 1, fields }
            })
            .collect();
        Source {
            path: path.to_string(),
            rows,
        }
    }

    fn read(path: &Path) -> Result<Self> {
        let (p, text) = read(path)?;
        Ok(Source::parse(&p, &text))
    }

    fn err(&self, line: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            path: self.path.clone(),
            line,
            message: message.into(),
        }
    }

    fn arity(&self, row: &Row, min: usize, max: usize) -> Result<()> {
        let n = row.fields.len();
        if n < min || n > max {
            let want = if min == max {
                min.to_string()
            } else {
                format!("{min} to {max}")
            };
            return Err(self.err(row.line, format!("expected {want} columns, found {n}")));
        }
        Ok(())
    }

    fn item(&self, row: &Row, col: usize, catalog: &Catalog) -> Result<usize> {
        let id = &row.fields[col];
        catalog
            .index_of(id)
            .ok_or_else(|| self.err(row.line, format!("unknown item {id}")))
    }
}

/// Parsed run text (one ranked list per user).
pub fn parse_run(path: &str, text: &str, catalog: &Catalog) -> Result<RunSet> {
    let src = Source::parse(path, text);
    let mut seen = HashSet::new();
    let mut entries = Vec::with_capacity(src.rows.len());
    for row in &src.rows {
        src.arity(row, 3, 4)?;
        let user = row.fields[0].clone();
        let item = src.item(row, 1, catalog)?;
        if !seen.insert((user.clone(), item)) {
            return Err(src.err(row.line, format!("item {} listed twice for user {user}", row.fields[1])));
        }
        let rank: usize = row.fields[2].parse().ok().filter(|&r| r >= 1).ok_or_else(|| {
            src.err(
                row.line,
                format!("rank must be a positive integer, found {}", row.fields[2]),
            )
        })?;
        let score = match row.fields.get(3) {
            Some(s) => Some(
                s.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| src.err(row.line, format!("bad score {s}")))?,
            ),
            None => None,
        };
        entries.push((user, item, rank, score));
    }
    if entries.is_empty() {
        return Err(Error::Empty("run"));
    }
    RunSet::from_entries(&entries, catalog)
}

/// Parsed binary judgments. Users whose rows are all grade 0 keep an empty set.
pub fn parse_qrels(path: &str, text: &str, catalog: &Catalog) -> Result<Qrels> {
    let src = Source::parse(path, text);
    let mut sets: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    let mut seen = HashSet::new();
    for row in &src.rows {
        src.arity(row, 3, 3)?;
        let user = row.fields[0].clone();
        let item = src.item(row, 1, catalog)?;
        if !seen.insert((user.clone(), item)) {
            return Err(src.err(
                row.line,
                format!("duplicate judgment for user {user}, item {}", row.fields[1]),
            ));
        }
        let set = sets.entry(user).or_default();
        match row.fields[2].as_str() {
            "1" => set.push(item),
            "0" => {}
            g => return Err(src.err(row.line, format!("relevance must be binary (0 or 1), found {g}"))),
        }
    }
    if sets.is_empty() {
        return Err(Error::Empty("qrels"));
    }
    let (users, sets): (Vec<String>, Vec<Vec<usize>>) = sets.into_iter().unzip();
    Qrels::new(users, sets)
}

/// Parsed interaction histories; weights and timestamps are validated and dropped.
pub fn parse_interactions(path: &str, text: &str, catalog: &Catalog) -> Result<Interactions> {
    let src = Source::parse(path, text);
    let mut hist: BTreeMap<String, Vec<usize>> = BTreeMap::new();
    for row in &src.rows {
        src.arity(row, 2, 4)?;
        let item = src.item(row, 1, catalog)?;
        for (col, what) in [(2, "weight"), (3, "timestamp")] {
            if let Some(v) = row.fields.get(col) {
                if v.parse::<f64>().is_err() {
                    return Err(src.err(row.line, format!("bad {what} {v}")));
                }
            }
        }
        hist.entry(row.fields[0].clone()).or_default().push(item);
    }
    let (users, h): (Vec<String>, Vec<Vec<usize>>) = hist.into_iter().unzip();
    Interactions::new(users, h)
}

/// Parsed catalog, sorted by identifier.
pub fn parse_catalog(path: &str, text: &str) -> Result<Catalog> {
    let src = Source::parse(path, text);
    let mut ids = BTreeSet::new();
    for row in &src.rows {
        src.arity(row, 1, 1)?;
        if !ids.insert(row.fields[0].clone()) {
            return Err(src.err(row.line, format!("duplicate item {}", row.fields[0])));
        }
    }
    Catalog::new(ids)
}

/// Parsed user attribute table.
pub fn parse_groups(path: &str, text: &str) -> Result<GroupTable> {
    let src = Source::parse(path, text);
    let mut t = GroupTable::new();
    let mut seen = HashSet::new();
    for row in &src.rows {
        src.arity(row, 3, 3)?;
        if !seen.insert((row.fields[0].clone(), row.fields[1].clone())) {
            return Err(src.err(
                row.line,
                format!("attribute {} given twice for user {}", row.fields[1], row.fields[0]),
            ));
        }
        t.insert(&row.fields[0], &row.fields[1], &row.fields[2]);
    }
    Ok(t)
}

/// Parsed pairwise similarity over `users`; pairs not listed are 0.
pub fn parse_similarity(path: &str, text: &str, users: Vec<String>) -> Result<SimilarityMatrix> {
    let src = Source::parse(path, text);
    let known: HashSet<&str> = users.iter().map(String::as_str).collect();
    let mut triples = Vec::with_capacity(src.rows.len());
    for row in &src.rows {
        src.arity(row, 3, 3)?;
        for c in 0..2 {
            if !known.contains(row.fields[c].as_str()) {
                return Err(src.err(row.line, format!("unknown user {}", row.fields[c])));
            }
        }
        if row.fields[0] == row.fields[1] {
            return Err(src.err(row.line, "self-similarity is not stored"));
        }
        let v: f64 = row.fields[2]
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite())
            .ok_or_else(|| src.err(row.line, format!("bad similarity {}", row.fields[2])))?;
        triples.push((row.fields[0].clone(), row.fields[1].clone(), v));
    }
    SimilarityMatrix::from_triples(users, &triples)
}

/// Item identifiers mentioned in the second column of any of the given files.
pub fn collect_item_ids(paths: &[&Path]) -> Result<Catalog> {
    let mut ids = BTreeSet::new();
    for p in paths {
        let src = Source::read(p)?;
        for row in &src.rows {
            if row.fields.len() < 2 {
                return Err(src.err(row.line, "expected at least two columns"));
            }
            ids.insert(row.fields[1].clone());
        }
    }
    Catalog::new(ids)
}

fn read(path: &Path) -> Result<(String, String)> {
    let p = path.display().to_string();
    match std::fs::read_to_string(path) {
        Ok(text) => Ok((p, text)),
        Err(source) => Err(Error::File { path: p, source }),
    }
}

pub fn read_run(path: &Path, catalog: &Catalog) -> Result<RunSet> {
    let (p, t) = read(path)?;
    parse_run(&p, &t, catalog)
}

pub fn read_qrels(path: &Path, catalog: &Catalog) -> Result<Qrels> {
    let (p, t) = read(path)?;
    parse_qrels(&p, &t, catalog)
}

pub fn read_interactions(path: &Path, catalog: &Catalog) -> Result<Interactions> {
    let (p, t) = read(path)?;
    parse_interactions(&p, &t, catalog)
}

pub fn read_catalog(path: &Path) -> Result<Catalog> {
    let (p, t) = read(path)?;
    parse_catalog(&p, &t)
}

pub fn read_groups(path: &Path) -> Result<GroupTable> {
    let (p, t) = read(path)?;
    parse_groups(&p, &t)
}

pub fn read_similarity(path: &Path, users: Vec<String>) -> Result<SimilarityMatrix> {
    let (p, t) = read(path)?;
    parse_similarity(&p, &t, users)
}

/// Run file text for `run`, with scores when present.
pub fn format_run(run: &RunSet, catalog: &Catalog) -> String {
    let mut s = String::new();
    for u in 0..run.m() {
        for (r, &i) in run.list(u).iter().enumerate() {
            s.push_str(&format!("{}\t{}\t{}", run.user(u), catalog.id(i), r + 1));
            if let Some(sc) = run.scores() {
                s.push_str(&format!("\t{}", sc[u][r]));
            }
            s.push('\n');
        }
    }
    s
}

/// Qrels text listing only relevant pairs (grade 1).
pub fn format_qrels(qrels: &Qrels, catalog: &Catalog) -> String {
    let mut s = String::new();
    for u in 0..qrels.len() {
        for &i in qrels.relevant(u) {
            s.push_str(&format!("{}\t{}\t1\n", qrels.users()[u], catalog.id(i)));
        }
    }
    s
}

/// Similarity text with one line per user pair.
pub fn format_similarity(sim: &SimilarityMatrix) -> String {
    sim.triples()
        .into_iter()
        .map(|(a, b, v)| format!("{a}\t{b}\t{v}\n"))
        .collect()
}

/// Catalog text, one item per line.
pub fn format_catalog(catalog: &Catalog) -> String {
    catalog.ids().iter().map(|i| format!("{i}\n")).collect()
}
