//! Phrase-to-word similarity and the query pipeline.
//!
//! For a phrase with input words `P_i` the score of a word `W` is
//!
//! ```text
//!         sum_i 1 / (nu(P_i) * d(W, P_i))
//! E(W) = ---------------------------------
//!              sum_i 1 / nu(P_i)
//! ```
//!
//! where `d(W, P_i)` is the first-activation depth of `W` in a search
//! started at `P_i`, and `nu` is the word's frequency across definitions.
//! Unreached words contribute nothing; `nu = 0` is treated as 1.

use rayon::prelude::*;
use thiserror::Error;

use crate::bundle::IndexBundle;
use crate::graph::{evolve, MatrixKind, SparseBinaryMatrix, UNREACHED};
use crate::ingest::{Lexicon, WordId};
use crate::textproc::TextPipeline;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("no content words in phrase")]
    NoContentWords { unknown_tokens: Vec<String> },
    #[error("search depth must be at least 1")]
    InvalidDepth,
    #[error("index has no {0} matrix")]
    MissingMatrix(MatrixKind),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InputWord {
    pub id: WordId,
    pub nu: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryPlan {
    pub input_words: Vec<InputWord>,
    pub depth: u32,
    pub include_inputs: bool,
    pub unknown_tokens: Vec<String>,
}

/// Extracts the phrase's content words and resolves them to lexicon nodes.
///
/// Repeated lemmas collapse to one input word. Lemmas the lexicon does not
/// know are reported, not searched. Multi-word entries never match.
pub fn plan_query(
    phrase: &str,
    lexicon: &Lexicon,
    pipeline: &TextPipeline,
    depth: u32,
) -> Result<QueryPlan, QueryError> {
    if depth == 0 {
        return Err(QueryError::InvalidDepth);
    }
    let mut input_words: Vec<InputWord> = Vec::new();
    let mut unknown_tokens: Vec<String> = Vec::new();
    for lemma in pipeline.extract(phrase, |t| lexicon.knows_token(t)) {
        match lexicon.id_of(&lemma).filter(|&id| !lexicon.flags(id).is_mwe) {
            Some(id) => {
                if !input_words.iter().any(|w| w.id == id) {
                    input_words.push(InputWord {
                        id,
                        nu: lexicon.nu(id),
                    });
                }
            }
            None => {
                if !unknown_tokens.contains(&lemma) {
                    unknown_tokens.push(lemma);
                }
            }
        }
    }
    if input_words.is_empty() {
        return Err(QueryError::NoContentWords { unknown_tokens });
    }
    Ok(QueryPlan {
        input_words,
        depth,
        include_inputs: false,
        unknown_tokens,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankedEntry {
    pub word: WordId,
    pub score: f64,
}

/// Words in decreasing order of similarity, with the per-input depths kept
/// for explanation.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedOutput {
    pub plan: QueryPlan,
    pub matrix: MatrixKind,
    pub entries: Vec<RankedEntry>,
    input_depths: Vec<Vec<u32>>,
}

impl RankedOutput {
    /// Distance from each input word (plan order) to `word`.
    pub fn distances(&self, word: WordId) -> Vec<Option<u32>> {
        self.input_depths
            .iter()
            .map(|d| Some(d[word.index()]).filter(|&d| d != UNREACHED))
            .collect()
    }

    /// 1-based position of `word`, if it is listed.
    pub fn rank_of(&self, word: WordId) -> Option<usize> {
        self.entries.iter().position(|e| e.word == word).map(|p| p + 1)
    }

    pub fn truncate(&mut self, limit: usize) {
        self.entries.truncate(limit);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn smoothed(nu: u32) -> f64 {
    nu.max(1) as f64
}

/// Scores every word of the lexicon against the plan.
///
/// One search runs per input word. Input words themselves (distance 0) are
/// left out unless `plan.include_inputs` is set; then they score
/// `1 + E'`, where `E'` counts their own zero distance as 1, which places
/// them above every other word (whose scores never exceed 1).
pub fn score(plan: &QueryPlan, matrix: &SparseBinaryMatrix, lexicon: &Lexicon) -> RankedOutput {
    let input_depths: Vec<Vec<u32>> = plan
        .input_words
        .par_iter()
        .map(|w| evolve(matrix, &[w.id], plan.depth).into_depths())
        .collect();
    let nus: Vec<f64> = plan.input_words.iter().map(|w| smoothed(w.nu)).collect();
    let denominator: f64 = nus.iter().map(|nu| 1.0 / nu).sum();

    let mut entries = Vec::with_capacity(lexicon.len());
    for w in 0..matrix.n() {
        let mut numerator = 0.0;
        let mut own = 0.0;
        for (depths, &nu) in input_depths.iter().zip(&nus) {
            match depths[w] {
                UNREACHED => {}
                0 => own += 1.0 / nu,
                d => numerator += 1.0 / (nu * d as f64),
            }
        }
        let is_input = own > 0.0;
        if is_input && !plan.include_inputs {
            continue;
        }
        let score = if is_input {
            1.0 + (numerator + own) / denominator
        } else {
            numerator / denominator
        };
        entries.push(RankedEntry {
            word: WordId(w as u32),
            score,
        });
    }
    // Ids are alphabetical, so the final key is the alphabetical tie-break.
    entries.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| lexicon.nu(b.word).cmp(&lexicon.nu(a.word)))
            .then_with(|| a.word.cmp(&b.word))
    });
    RankedOutput {
        plan: plan.clone(),
        matrix: matrix.kind(),
        entries,
        input_depths,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryOptions {
    /// Search depth; defaults to the matrix's maximum non-redundant depth.
    pub depth: Option<u32>,
    pub limit: usize,
    pub include_inputs: bool,
    /// Matrix to search; defaults to the BLM.
    pub matrix: Option<MatrixKind>,
}

impl Default for QueryOptions {
    fn default() -> Self {
        Self {
            depth: None,
            limit: 20,
            include_inputs: false,
            matrix: None,
        }
    }
}

/// Full pipeline: extract input words, search, score, rank, truncate.
pub fn query(
    phrase: &str,
    index: &IndexBundle,
    options: &QueryOptions,
) -> Result<RankedOutput, QueryError> {
    let kind = options.matrix.unwrap_or(MatrixKind::Blm);
    let matrix = index.matrix(kind).ok_or(QueryError::MissingMatrix(kind))?;
    // A matrix with no links at all has depth 0; searching one step is harmless.
    let depth = options
        .depth
        .unwrap_or_else(|| index.default_depth(kind).max(1));
    let mut plan = plan_query(phrase, &index.lexicon, &index.pipeline, depth)?;
    plan.include_inputs = options.include_inputs;
    let mut out = score(&plan, matrix, &index.lexicon);
    out.truncate(options.limit);
    Ok(out)
}
