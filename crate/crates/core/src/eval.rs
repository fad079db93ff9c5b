//! Rank-based evaluation: accuracy@k, rank median and spread, chance
//! baseline and search-depth sweeps.

use std::io::{BufRead, BufReader, Read};

use rayon::prelude::*;
use thiserror::Error;

use crate::bundle::IndexBundle;
use crate::graph::MatrixKind;
use crate::ingest::WordId;
use crate::similarity::{plan_query, score, QueryError};
use crate::textproc::lemmatize;

/// Cutoffs reported by default.
pub const CUTOFFS: [usize; 3] = [1, 10, 100];

/// Ranks strictly below this enter the median and standard deviation.
pub const RANK_WINDOW: usize = 100;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("no test cases")]
    NoCases,
    #[error("cutoff k={k} must satisfy 1 <= k <= N={n}")]
    BadCutoff { k: usize, n: usize },
    #[error("test set line {line}: {reason}")]
    Malformed { line: usize, reason: &'static str },
    #[error("failed to read test set: {0}")]
    Io(#[from] std::io::Error),
    #[error("depth list is empty")]
    NoDepths,
    #[error("depths must be strictly ascending and at least 1")]
    BadDepths,
    #[error(transparent)]
    Query(#[from] QueryError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestCase {
    pub target: String,
    pub phrase: String,
}

/// Reads a `target<TAB>phrase` test set. Blank lines and `#` comments are
/// skipped.
pub fn load_cases<R: Read>(source: R) -> Result<Vec<TestCase>, EvalError> {
    let mut cases = Vec::new();
    for (i, line) in BufReader::new(source).lines().enumerate() {
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let malformed = |reason| EvalError::Malformed { line: i + 1, reason };
        let (target, phrase) = line.split_once('\t').ok_or_else(|| malformed("missing tab"))?;
        let (target, phrase) = (target.trim(), phrase.trim());
        if target.is_empty() || phrase.is_empty() {
            return Err(malformed("empty field"));
        }
        cases.push(TestCase {
            target: target.to_string(),
            phrase: phrase.to_string(),
        });
    }
    Ok(cases)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CaseOutcome {
    /// 1-based rank of the target among positively scored words.
    Ranked(usize),
    /// Target in the lexicon but never scored above zero (or was an input
    /// word); counted as rank N.
    NotFound,
    /// Target outside the lexicon. Counted as rank N, or dropped in corr mode.
    OutOfLexicon,
    /// The phrase could not be queried; dropped from all denominators.
    Skipped(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseResult {
    pub case: TestCase,
    pub outcome: CaseOutcome,
    /// Rank entering the metrics, `None` when the case is dropped.
    pub scored_rank: Option<usize>,
}

/// Accuracy and rank statistics over a list of ranks.
#[derive(Debug, Clone, PartialEq)]
pub struct RankSummary {
    pub count: usize,
    /// `(k, fraction of ranks <= k)` for each cutoff.
    pub accuracy: Vec<(usize, f64)>,
    /// Number of ranks strictly below [`RANK_WINDOW`].
    pub window_count: usize,
    pub median: Option<f64>,
    pub std_population: Option<f64>,
    pub std_sample: Option<f64>,
}

pub fn accuracy_at(ranks: &[usize], k: usize) -> f64 {
    if ranks.is_empty() {
        return 0.0;
    }
    ranks.iter().filter(|&&r| r <= k).count() as f64 / ranks.len() as f64
}

fn median(sorted: &[usize]) -> Option<f64> {
    let n = sorted.len();
    match n {
        0 => None,
        _ if n % 2 == 1 => Some(sorted[n / 2] as f64),
        _ => Some((sorted[n / 2 - 1] + sorted[n / 2]) as f64 / 2.0),
    }
}

impl RankSummary {
    pub fn from_ranks(ranks: &[usize]) -> Self {
        Self::with_cutoffs(ranks, &CUTOFFS)
    }

    pub fn with_cutoffs(ranks: &[usize], cutoffs: &[usize]) -> Self {
        let mut window: Vec<usize> = ranks.iter().copied().filter(|&r| r < RANK_WINDOW).collect();
        window.sort_unstable();
        let m = window.len() as f64;
        let mean = window.iter().sum::<usize>() as f64 / m;
        let ss = window.iter().map(|&r| (r as f64 - mean).powi(2)).sum::<f64>();
        Self {
            count: ranks.len(),
            accuracy: cutoffs.iter().map(|&k| (k, accuracy_at(ranks, k))).collect(),
            window_count: window.len(),
            median: median(&window),
            std_population: (!window.is_empty()).then(|| (ss / m).sqrt()),
            std_sample: (window.len() > 1).then(|| (ss / (m - 1.0)).sqrt()),
        }
    }

    pub fn accuracy_at(&self, k: usize) -> Option<f64> {
        self.accuracy.iter().find(|(c, _)| *c == k).map(|(_, a)| *a)
    }
}

/// Expected accuracy@k when target ranks are uniform over `1..=n`.
pub fn chance_accuracy(k: usize, n: usize) -> Result<f64, EvalError> {
    if k == 0 || k > n {
        return Err(EvalError::BadCutoff { k, n });
    }
    Ok(k as f64 / n as f64)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EvalOptions {
    /// Search depth; defaults to the matrix's maximum non-redundant depth.
    pub depth: Option<u32>,
    /// Drop cases whose target is not in the lexicon.
    pub corr: bool,
    /// Defaults to the BLM.
    pub matrix: Option<MatrixKind>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub depth: u32,
    pub matrix: MatrixKind,
    pub corr: bool,
    pub lexicon_size: usize,
    pub cases: Vec<CaseResult>,
    pub summary: RankSummary,
    pub skipped: usize,
    pub excluded: usize,
}

fn resolve_target(index: &IndexBundle, target: &str) -> Option<WordId> {
    let norm = target
        .to_lowercase()
        .replace('_', " ")
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ");
    let lex = &index.lexicon;
    lex.id_of(&norm).or_else(|| {
        let lemma = lemmatize(&norm, &index.pipeline.rules, |t| lex.knows_token(t));
        lex.id_of(&lemma)
    })
}

/// Queries every case and scores the rank of its target word.
pub fn evaluate(
    cases: &[TestCase],
    index: &IndexBundle,
    options: &EvalOptions,
) -> Result<EvalReport, EvalError> {
    if cases.is_empty() {
        return Err(EvalError::NoCases);
    }
    let kind = options.matrix.unwrap_or(MatrixKind::Blm);
    let matrix = index.matrix(kind).ok_or(QueryError::MissingMatrix(kind))?;
    let depth = options.depth.unwrap_or_else(|| index.default_depth(kind).max(1));
    if depth == 0 {
        return Err(QueryError::InvalidDepth.into());
    }
    let n = index.lexicon.len();

    let results: Vec<CaseResult> = cases
        .par_iter()
        .map(|case| {
            let target = resolve_target(index, &case.target);
            let outcome = match plan_query(&case.phrase, &index.lexicon, &index.pipeline, depth) {
                Err(e) => CaseOutcome::Skipped(e.to_string()),
                Ok(plan) => match target {
                    None => CaseOutcome::OutOfLexicon,
                    Some(t) => {
                        let out = score(&plan, matrix, &index.lexicon);
                        match out.rank_of(t) {
                            Some(r) if out.entries[r - 1].score > 0.0 => CaseOutcome::Ranked(r),
                            _ => CaseOutcome::NotFound,
                        }
                    }
                },
            };
            let scored_rank = match &outcome {
                CaseOutcome::Ranked(r) => Some(*r),
                CaseOutcome::NotFound => Some(n),
                CaseOutcome::OutOfLexicon if !options.corr => Some(n),
                _ => None,
            };
            CaseResult {
                case: case.clone(),
                outcome,
                scored_rank,
            }
        })
        .collect();

    let ranks: Vec<usize> = results.iter().filter_map(|r| r.scored_rank).collect();
    let skipped = results
        .iter()
        .filter(|r| matches!(r.outcome, CaseOutcome::Skipped(_)))
        .count();
    let excluded = results.iter().filter(|r| r.scored_rank.is_none()).count() - skipped;
    Ok(EvalReport {
        depth,
        matrix: kind,
        corr: options.corr,
        lexicon_size: n,
        summary: RankSummary::from_ranks(&ranks),
        cases: results,
        skipped,
        excluded,
    })
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |v| format!("{v:.4}"))
}

impl EvalReport {
    /// Per-case `target<TAB>phrase<TAB>outcome<TAB>rank` lines with a header.
    pub fn cases_tsv(&self) -> String {
        let mut s = String::from("target\tphrase\toutcome\trank\n");
        for r in &self.cases {
            let outcome = match &r.outcome {
                CaseOutcome::Ranked(_) => "ranked".to_string(),
                CaseOutcome::NotFound => "not_found".to_string(),
                CaseOutcome::OutOfLexicon => "out_of_lexicon".to_string(),
                CaseOutcome::Skipped(why) => format!("skipped: {why}"),
            };
            let rank = r.scored_rank.map_or_else(|| "-".to_string(), |r| r.to_string());
            s.push_str(&format!("{}\t{}\t{}\t{}\n", r.case.target, r.case.phrase, outcome, rank));
        }
        s
    }

    pub fn summary_text(&self) -> String {
        let acc: Vec<String> = self
            .summary
            .accuracy
            .iter()
            .map(|(_, a)| format!("{a:.2}"))
            .collect();
        let ks: Vec<String> = self.summary.accuracy.iter().map(|(k, _)| k.to_string()).collect();
        let mut s = String::new();
        s.push_str(&format!("matrix\t{}\n", self.matrix));
        s.push_str(&format!("depth\t{}\n", self.depth));
        s.push_str(&format!("lexicon_size\t{}\n", self.lexicon_size));
        s.push_str(&format!("corr\t{}\n", self.corr));
        s.push_str(&format!("cases\t{}\n", self.cases.len()));
        s.push_str(&format!("scored\t{}\n", self.summary.count));
        s.push_str(&format!("skipped\t{}\n", self.skipped));
        s.push_str(&format!("excluded\t{}\n", self.excluded));
        s.push_str(&format!("not_found_rank\t{}\n", self.lexicon_size));
        s.push_str(&format!("accuracy@{}\t{}\n", ks.join("/"), acc.join("/")));
        s.push_str(&format!("ranks_below_{RANK_WINDOW}\t{}\n", self.summary.window_count));
        s.push_str(&format!("rank_median\t{}\n", fmt_opt(self.summary.median)));
        s.push_str(&format!("rank_std\t{}\n", fmt_opt(self.summary.std_population)));
        s.push_str(&format!("rank_std_sample\t{}\n", fmt_opt(self.summary.std_sample)));
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DepthSweep {
    pub reports: Vec<EvalReport>,
    /// Smallest swept depth from which every later report has identical
    /// per-case outcomes. `None` if the last two depths still differ.
    pub stable_from: Option<u32>,
}

pub fn depth_sweep(
    cases: &[TestCase],
    index: &IndexBundle,
    depths: &[u32],
    options: &EvalOptions,
) -> Result<DepthSweep, EvalError> {
    if depths.is_empty() {
        return Err(EvalError::NoDepths);
    }
    if depths[0] == 0 || depths.windows(2).any(|w| w[0] >= w[1]) {
        return Err(EvalError::BadDepths);
    }
    let reports = depths
        .iter()
        .map(|&d| {
            evaluate(
                cases,
                index,
                &EvalOptions {
                    depth: Some(d),
                    ..*options
                },
            )
        })
        .collect::<Result<Vec<_>, _>>()?;
    let same = |a: &EvalReport, b: &EvalReport| a.cases == b.cases;
    let last = reports.len() - 1;
    let mut k = last;
    while k > 0 && same(&reports[k - 1], &reports[last]) {
        k -= 1;
    }
    let stable_from = (k < last).then(|| reports[k].depth);
    Ok(DepthSweep {
        reports,
        stable_from,
    })
}

impl DepthSweep {
    /// Accuracy rows by depth columns.
    pub fn table(&self) -> String {
        let mut s = String::from("accuracy");
        for r in &self.reports {
            s.push_str(&format!("\tn={}", r.depth));
        }
        s.push('\n');
        for k in CUTOFFS {
            s.push_str(&format!("@{k}"));
            for r in &self.reports {
                s.push_str(&format!("\t{}", fmt_opt(r.summary.accuracy_at(k))));
            }
            s.push('\n');
        }
        s.push_str("median");
        for r in &self.reports {
            s.push_str(&format!("\t{}", fmt_opt(r.summary.median)));
        }
        s.push('\n');
        match self.stable_from {
            Some(d) => s.push_str(&format!("# stable from n={d}\n")),
            None => s.push_str("# not stable within the swept depths\n"),
        }
        s
    }
}
