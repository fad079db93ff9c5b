//! Forward-dictionary ingestion.
//!
//! Raw `headword<TAB>definition` rows are pooled per headword (across every
//! input dictionary), run through the [`TextPipeline`], and turned into the
//! forward-linked list (word -> words of its definition) and the
//! back-linked list (word -> words whose definitions contain it).

use std::collections::{BTreeMap, HashMap};
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use thiserror::Error;

use crate::textproc::{lemmatize, TextPipeline};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("failed to read dictionary {name}: {source}")]
    Io {
        name: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{name}: line {line}: {reason}")]
    Malformed {
        name: String,
        line: usize,
        reason: &'static str,
    },
    #[error("{0}: dictionary has no entries")]
    EmptyDictionary(String),
    #[error("no dictionaries given")]
    NoDictionaries,
    #[error("lexicon is empty after processing")]
    EmptyLexicon,
    #[error("{0:?} is not a multi-word expression")]
    NotMultiWord(String),
}

/// Dense word index. Ids follow the alphabetical order of the lexicon; the
/// published 1-based word number is `index() + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WordId(pub u32);

impl WordId {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn number(self) -> usize {
        self.index() + 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DictFormat {
    Tsv,
}

/// One forward dictionary as read from disk. Headwords may repeat.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawDictionary {
    pub name: String,
    pub entries: Vec<(String, String)>,
}

impl RawDictionary {
    pub fn new(name: impl Into<String>, entries: Vec<(String, String)>) -> Self {
        Self {
            name: name.into(),
            entries,
        }
    }

    pub fn from_path(path: &Path) -> Result<Self, IngestError> {
        let name = path.display().to_string();
        let file = std::fs::File::open(path).map_err(|source| IngestError::Io {
            name: name.clone(),
            source,
        })?;
        load_dictionary(&name, file, DictFormat::Tsv)
    }
}

/// Reads `headword<TAB>definition` lines. Blank lines and `#` comments are
/// skipped.
pub fn load_dictionary<R: Read>(
    name: &str,
    source: R,
    format: DictFormat,
) -> Result<RawDictionary, IngestError> {
    let DictFormat::Tsv = format;
    let mut entries = Vec::new();
    for (i, line) in BufReader::new(source).lines().enumerate() {
        let line = line.map_err(|source| IngestError::Io {
            name: name.to_string(),
            source,
        })?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let malformed = |reason| IngestError::Malformed {
            name: name.to_string(),
            line: i + 1,
            reason,
        };
        let (head, def) = line.split_once('\t').ok_or_else(|| malformed("missing tab"))?;
        let (head, def) = (head.trim(), def.trim());
        if head.is_empty() {
            return Err(malformed("empty headword"));
        }
        if def.is_empty() {
            return Err(malformed("empty definition"));
        }
        entries.push((head.to_string(), def.to_string()));
    }
    if entries.is_empty() {
        return Err(IngestError::EmptyDictionary(name.to_string()));
    }
    Ok(RawDictionary::new(name, entries))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct WordFlags {
    pub is_mwe: bool,
    pub added_for_consistency: bool,
}

/// Alphabetically numbered word list with per-word flags and definition
/// frequencies.
#[derive(Debug, Clone)]
pub struct Lexicon {
    words: Vec<String>,
    flags: Vec<WordFlags>,
    nu: Vec<u32>,
    index: HashMap<String, WordId>,
}

impl PartialEq for Lexicon {
    fn eq(&self, other: &Self) -> bool {
        self.words == other.words && self.flags == other.flags && self.nu == other.nu
    }
}

impl Eq for Lexicon {}

impl Lexicon {
    /// Assembles a lexicon from parallel arrays. Words must be strictly
    /// ascending.
    pub fn from_parts(words: Vec<String>, flags: Vec<WordFlags>, nu: Vec<u32>) -> Option<Self> {
        if flags.len() != words.len() || nu.len() != words.len() {
            return None;
        }
        if words.windows(2).any(|w| w[0] >= w[1]) {
            return None;
        }
        let index = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), WordId(i as u32)))
            .collect();
        Some(Self {
            words,
            flags,
            nu,
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn id_of(&self, word: &str) -> Option<WordId> {
        self.index.get(word).copied()
    }

    pub fn word(&self, id: WordId) -> &str {
        &self.words[id.index()]
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn flags(&self, id: WordId) -> WordFlags {
        self.flags[id.index()]
    }

    pub fn all_flags(&self) -> &[WordFlags] {
        &self.flags
    }

    pub fn nu(&self, id: WordId) -> u32 {
        self.nu[id.index()]
    }

    pub fn frequencies(&self) -> &[u32] {
        &self.nu
    }

    /// True for single-word entries, the only ones a token can resolve to.
    pub fn knows_token(&self, token: &str) -> bool {
        self.id_of(token).is_some_and(|id| !self.flags(id).is_mwe)
    }

    pub fn ids(&self) -> impl Iterator<Item = WordId> {
        (0..self.words.len() as u32).map(WordId)
    }
}

/// Per-word processed definition tokens, multiplicity preserved.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForwardLinkedList {
    pub defs: Vec<Vec<WordId>>,
}

/// Per-word sorted, deduplicated list of the words whose definitions
/// contain it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BackLinkedList {
    pub refs: Vec<Vec<WordId>>,
}

impl BackLinkedList {
    pub fn degree(&self, id: WordId) -> usize {
        self.refs[id.index()].len()
    }
}

/// Normalizes a headword or expression: lowercase, `_` as space, single
/// spaces.
fn normalize_headword(raw: &str) -> String {
    raw.to_lowercase()
        .replace('_', " ")
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Debug, Default, Clone)]
struct Entry {
    defs: Vec<String>,
    flags: WordFlags,
}

/// Mutable word table used while building; ids only exist after `finish`.
#[derive(Debug, Default)]
struct LexiconBuilder {
    entries: BTreeMap<String, Entry>,
}

impl LexiconBuilder {
    fn from_built(lexicon: &Lexicon, fwd: &ForwardLinkedList) -> Self {
        let entries = lexicon
            .ids()
            .map(|id| {
                let defs = fwd.defs[id.index()]
                    .iter()
                    .map(|&d| lexicon.word(d).to_string())
                    .collect();
                (
                    lexicon.word(id).to_string(),
                    Entry {
                        defs,
                        flags: lexicon.flags(id),
                    },
                )
            })
            .collect();
        Self { entries }
    }

    fn knows_token(&self, token: &str) -> bool {
        self.entries.get(token).is_some_and(|e| !e.flags.is_mwe)
    }

    /// Adds any definition token missing from the table as a
    /// consistency word with an empty definition.
    fn add_missing(&mut self, tokens: &[String]) {
        for t in tokens {
            self.entries.entry(t.clone()).or_insert_with(|| Entry {
                defs: Vec::new(),
                flags: WordFlags {
                    is_mwe: false,
                    added_for_consistency: true,
                },
            });
        }
    }

    fn finish(self) -> Result<(Lexicon, ForwardLinkedList), IngestError> {
        if self.entries.is_empty() {
            return Err(IngestError::EmptyLexicon);
        }
        let index: HashMap<&str, WordId> = self
            .entries
            .keys()
            .enumerate()
            .map(|(i, w)| (w.as_str(), WordId(i as u32)))
            .collect();
        let mut nu = vec![0u32; self.entries.len()];
        let defs: Vec<Vec<WordId>> = self
            .entries
            .values()
            .map(|e| {
                e.defs
                    .iter()
                    .map(|t| {
                        let id = index[t.as_str()];
                        nu[id.index()] += 1;
                        id
                    })
                    .collect()
            })
            .collect();
        let flags = self.entries.values().map(|e| e.flags).collect();
        let words = self.entries.into_keys().collect();
        let lexicon = Lexicon::from_parts(words, flags, nu).expect("BTreeMap keys are sorted");
        Ok((lexicon, ForwardLinkedList { defs }))
    }
}

/// Builds the lexicon and forward-linked list from one or more forward
/// dictionaries. Several dictionaries are pooled before processing.
///
/// Headwords are lemmatized (exceptions only take effect, since every
/// headword is known to itself), functional-word headwords are deleted with
/// their rows, and definition tokens are lemmatized against the headword
/// set. Tokens that are not headwords become consistency words.
pub fn build_forward_list(
    dicts: &[RawDictionary],
    pipeline: &TextPipeline,
) -> Result<(Lexicon, ForwardLinkedList), IngestError> {
    if dicts.is_empty() {
        return Err(IngestError::NoDictionaries);
    }
    if let Some(d) = dicts.iter().find(|d| d.entries.is_empty()) {
        return Err(IngestError::EmptyDictionary(d.name.clone()));
    }

    let raw_heads: std::collections::HashSet<String> = dicts
        .iter()
        .flat_map(|d| d.entries.iter().map(|(h, _)| normalize_headword(h)))
        .collect();

    // Pool senses per headword lemma.
    let mut pooled: BTreeMap<String, (bool, Vec<&str>)> = BTreeMap::new();
    for (head, def) in dicts.iter().flat_map(|d| d.entries.iter()) {
        let head = normalize_headword(head);
        if head.is_empty() {
            continue;
        }
        let is_mwe = head.contains(' ');
        let lemma = if is_mwe {
            head
        } else {
            if pipeline.stopwords.contains(&head) {
                continue;
            }
            lemmatize(&head, &pipeline.rules, |w| raw_heads.contains(w))
        };
        if !is_mwe && pipeline.stopwords.contains(&lemma) {
            continue;
        }
        pooled.entry(lemma).or_insert((is_mwe, Vec::new())).1.push(def);
    }

    let mut builder = LexiconBuilder::default();
    for (word, (is_mwe, _)) in &pooled {
        builder.entries.insert(
            word.clone(),
            Entry {
                defs: Vec::new(),
                flags: WordFlags {
                    is_mwe: *is_mwe,
                    added_for_consistency: false,
                },
            },
        );
    }

    // Definitions are resolved against the headword table only, before any
    // consistency word is added, so the result is independent of row order.
    let mut processed = Vec::with_capacity(pooled.len());
    for (word, (_, senses)) in &pooled {
        let text = senses.join(" ");
        let tokens = pipeline.extract(&text, |t| builder.knows_token(t));
        processed.push((word, tokens));
    }
    for (word, tokens) in processed {
        builder.add_missing(&tokens);
        builder.entries.get_mut(word.as_str()).expect("headword present").defs = tokens;
    }
    builder.finish()
}

/// Inverts the forward list: `refs(j)` is the sorted set of words whose
/// definitions contain `j`.
pub fn build_back_list(fwd: &ForwardLinkedList) -> BackLinkedList {
    let mut refs = vec![Vec::new(); fwd.defs.len()];
    for (i, defs) in fwd.defs.iter().enumerate() {
        for &j in defs {
            refs[j.index()].push(WordId(i as u32));
        }
    }
    for r in &mut refs {
        r.dedup();
    }
    BackLinkedList { refs }
}

/// Adds a multi-word expression as a single output-only node.
///
/// The expression's definition is processed like any other; repeated
/// registration pools definitions. Since tokens never contain spaces the
/// expression can never appear inside a definition, so it has no back-links.
pub fn register_mwe(
    lexicon: &Lexicon,
    fwd: &ForwardLinkedList,
    expression: &str,
    definition: &str,
    pipeline: &TextPipeline,
) -> Result<(Lexicon, ForwardLinkedList), IngestError> {
    if !expression.chars().any(|c| c.is_whitespace() || c == '_') {
        return Err(IngestError::NotMultiWord(expression.to_string()));
    }
    let key = normalize_headword(expression);
    if !key.contains(' ') {
        return Err(IngestError::NotMultiWord(expression.to_string()));
    }
    let mut builder = LexiconBuilder::from_built(lexicon, fwd);
    let tokens = pipeline.extract(definition, |t| builder.knows_token(t));
    builder.add_missing(&tokens);
    let entry = builder.entries.entry(key).or_insert_with(|| Entry {
        defs: Vec::new(),
        flags: WordFlags {
            is_mwe: true,
            added_for_consistency: false,
        },
    });
    entry.flags.is_mwe = true;
    entry.defs.extend(tokens);
    builder.finish()
}
