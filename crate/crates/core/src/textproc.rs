//! Text normalization: tokenization, functional-word removal and
//! suffix-detachment lemmatization.
//!
//! Definitions and query phrases go through the exact same pipeline, so a
//! word in a phrase lands on the same node as the same word inside a
//! definition.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use sha2::{Digest, Sha256};
use thiserror::Error;

const DEFAULT_STOPWORDS: &str = include_str!("../data/stopwords-en.txt");
const DEFAULT_RULES: &str = include_str!("../data/rules-en.tsv");
const DEFAULT_EXCEPTIONS: &str = include_str!("../data/exceptions-en.tsv");

/// Errors raised while loading stopword, rule or exception tables.
#[derive(Debug, Error)]
pub enum TableError {
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("stopword list is empty")]
    EmptyStoplist,
}

fn read_table(path: &Path) -> Result<String, TableError> {
    std::fs::read_to_string(path).map_err(|source| TableError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Yields `(line_number, trimmed_line)` for every non-blank, non-comment line.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        })
}

/// Splits text into lowercase tokens.
///
/// A token is a maximal run of letters, digits, apostrophes and hyphens.
/// Runs made only of apostrophes or hyphens are punctuation and dropped.
pub fn tokenize(text: &str) -> Vec<String> {
    let is_token_char = |c: char| c.is_alphanumeric() || c == '\'' || c == '-';
    text.split(|c: char| !is_token_char(c))
        .filter(|run| run.chars().any(char::is_alphanumeric))
        .map(str::to_lowercase)
        .collect()
}

/// Set of functional words removed from definitions and phrases.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StopwordList {
    words: HashSet<String>,
}

impl StopwordList {
    pub fn empty() -> Self {
        Self::default()
    }

    /// The English list bundled with the crate.
    pub fn english() -> Self {
        Self::parse(DEFAULT_STOPWORDS).expect("bundled stoplist is valid")
    }

    pub fn from_words<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        Self {
            words: words
                .into_iter()
                .map(|w| w.as_ref().trim().to_lowercase())
                .filter(|w| !w.is_empty())
                .collect(),
        }
    }

    /// Parses a one-word-per-line list. `#` starts a comment line.
    pub fn parse(text: &str) -> Result<Self, TableError> {
        let list = Self::from_words(content_lines(text).map(|(_, l)| l));
        if list.words.is_empty() {
            return Err(TableError::EmptyStoplist);
        }
        Ok(list)
    }

    pub fn load(path: &Path) -> Result<Self, TableError> {
        Self::parse(&read_table(path)?)
    }

    pub fn contains(&self, word: &str) -> bool {
        if word.chars().any(char::is_uppercase) {
            self.words.contains(&word.to_lowercase())
        } else {
            self.words.contains(word)
        }
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Words in sorted order.
    pub fn sorted_words(&self) -> Vec<&str> {
        let mut words: Vec<&str> = self.words.iter().map(String::as_str).collect();
        words.sort_unstable();
        words
    }
}

/// Coarse word class a suffix rule applies to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PartTag {
    Noun,
    Verb,
    Adjective,
}

impl PartTag {
    pub fn as_str(self) -> &'static str {
        match self {
            PartTag::Noun => "noun",
            PartTag::Verb => "verb",
            PartTag::Adjective => "adj",
        }
    }
}

impl fmt::Display for PartTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PartTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "noun" | "n" => Ok(PartTag::Noun),
            "verb" | "v" => Ok(PartTag::Verb),
            "adj" | "adjective" | "a" => Ok(PartTag::Adjective),
            other => Err(format!("unknown part tag {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuffixRule {
    pub tag: PartTag,
    pub suffix: String,
    pub replacement: String,
}

/// Strips the `-` used in rule tables to write affixes; a lone `-` is empty.
fn affix(field: &str) -> String {
    let field = field.trim();
    field.strip_prefix('-').unwrap_or(field).to_lowercase()
}

/// Morphy-style lemmatizer tables: ordered suffix rules plus an exception map.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LemmaRules {
    suffix_rules: Vec<SuffixRule>,
    exceptions: HashMap<String, String>,
}

impl LemmaRules {
    /// Rules and exceptions that do nothing: every token is its own lemma.
    pub fn identity() -> Self {
        Self::default()
    }

    /// The English rule and exception tables bundled with the crate.
    pub fn english() -> Self {
        let mut rules = Self::parse_rules(DEFAULT_RULES).expect("bundled rules are valid");
        rules
            .add_exceptions(DEFAULT_EXCEPTIONS)
            .expect("bundled exceptions are valid");
        rules
    }

    pub fn new(suffix_rules: Vec<SuffixRule>, exceptions: HashMap<String, String>) -> Self {
        Self {
            suffix_rules,
            exceptions,
        }
    }

    /// Parses a `pos<TAB>suffix<TAB>replacement` table. Replacement may be
    /// empty, or written as `-`.
    pub fn parse_rules(text: &str) -> Result<Self, TableError> {
        let mut suffix_rules = Vec::new();
        for (line, l) in content_lines(text) {
            let fields: Vec<&str> = l.split('\t').collect();
            if fields.len() != 3 && fields.len() != 2 {
                return Err(TableError::Malformed {
                    line,
                    reason: "expected pos<TAB>suffix<TAB>replacement".into(),
                });
            }
            let tag = fields[0]
                .trim()
                .parse::<PartTag>()
                .map_err(|reason| TableError::Malformed { line, reason })?;
            let suffix = affix(fields[1]);
            if suffix.is_empty() {
                return Err(TableError::Malformed {
                    line,
                    reason: "empty suffix".into(),
                });
            }
            let replacement = fields.get(2).map(|f| affix(f)).unwrap_or_default();
            suffix_rules.push(SuffixRule {
                tag,
                suffix,
                replacement,
            });
        }
        Ok(Self {
            suffix_rules,
            exceptions: HashMap::new(),
        })
    }

    pub fn load_rules(path: &Path) -> Result<Self, TableError> {
        Self::parse_rules(&read_table(path)?)
    }

    /// Adds `inflected<TAB>lemma` lines to the exception map.
    pub fn add_exceptions(&mut self, text: &str) -> Result<(), TableError> {
        for (line, l) in content_lines(text) {
            let (inflected, lemma) = l.split_once('\t').ok_or(TableError::Malformed {
                line,
                reason: "expected inflected<TAB>lemma".into(),
            })?;
            let (inflected, lemma) = (inflected.trim().to_lowercase(), lemma.trim().to_lowercase());
            if inflected.is_empty() || lemma.is_empty() {
                return Err(TableError::Malformed {
                    line,
                    reason: "empty field".into(),
                });
            }
            self.exceptions.insert(inflected, lemma);
        }
        Ok(())
    }

    pub fn load_exceptions(&mut self, path: &Path) -> Result<(), TableError> {
        self.add_exceptions(&read_table(path)?)
    }

    /// Replaces the exception map, keeping the suffix rules.
    pub fn with_exceptions(mut self, exceptions: HashMap<String, String>) -> Self {
        self.exceptions = exceptions;
        self
    }

    pub fn suffix_rules(&self) -> &[SuffixRule] {
        &self.suffix_rules
    }

    pub fn exceptions(&self) -> &HashMap<String, String> {
        &self.exceptions
    }

    /// Candidate base forms in rule order: nouns, verbs, then adjectives.
    fn candidates<'a>(&'a self, token: &'a str) -> impl Iterator<Item = String> + 'a {
        [PartTag::Noun, PartTag::Verb, PartTag::Adjective]
            .into_iter()
            .flat_map(move |tag| self.suffix_rules.iter().filter(move |r| r.tag == tag))
            .filter_map(move |rule| {
                let stem = token.strip_suffix(rule.suffix.as_str())?;
                let candidate = format!("{stem}{}", rule.replacement);
                (!candidate.is_empty()).then_some(candidate)
            })
    }

    /// Canonical text form of the tables, used for manifest hashing and
    /// persistence.
    pub fn to_tsv(&self) -> (String, String) {
        let mut rules = String::new();
        for r in &self.suffix_rules {
            let rep = if r.replacement.is_empty() {
                "-"
            } else {
                r.replacement.as_str()
            };
            rules.push_str(&format!("{}\t{}\t{}\n", r.tag, r.suffix, rep));
        }
        let mut pairs: Vec<_> = self.exceptions.iter().collect();
        pairs.sort();
        let mut exceptions = String::new();
        for (k, v) in pairs {
            exceptions.push_str(&format!("{k}\t{v}\n"));
        }
        (rules, exceptions)
    }

    pub fn digest(&self) -> String {
        let (rules, exceptions) = self.to_tsv();
        let mut h = Sha256::new();
        h.update(rules.as_bytes());
        h.update(b"\0");
        h.update(exceptions.as_bytes());
        hex::encode(h.finalize())
    }
}

/// Reduces a lowercase token to its base form.
///
/// Order: the exception map, then the token itself if the lexicon already
/// knows it, then the first suffix-rule candidate the lexicon knows. When
/// nothing matches the token is returned unchanged.
pub fn lemmatize<F>(token: &str, rules: &LemmaRules, is_known: F) -> String
where
    F: Fn(&str) -> bool,
{
    if let Some(lemma) = rules.exceptions.get(token) {
        return lemma.clone();
    }
    if is_known(token) {
        return token.to_string();
    }
    rules
        .candidates(token)
        .find(|c| is_known(c))
        .unwrap_or_else(|| token.to_string())
}

/// Strips possessive `'s` and any leading/trailing apostrophes or hyphens.
fn trim_token(token: &str) -> &str {
    let t = token.trim_matches(|c| c == '\'' || c == '-');
    let t = t.strip_suffix("'s").unwrap_or(t);
    t.trim_matches(|c| c == '\'' || c == '-')
}

/// Stoplist and lemmatizer bundled together: the full normalization applied
/// to both definitions and query phrases.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TextPipeline {
    pub stopwords: StopwordList,
    pub rules: LemmaRules,
}

impl TextPipeline {
    pub fn new(stopwords: StopwordList, rules: LemmaRules) -> Self {
        Self { stopwords, rules }
    }

    pub fn english() -> Self {
        Self::new(StopwordList::english(), LemmaRules::english())
    }

    pub fn extract<F>(&self, text: &str, is_known: F) -> Vec<String>
    where
        F: Fn(&str) -> bool,
    {
        extract_content_lemmas(text, &self.stopwords, &self.rules, is_known)
    }

    pub fn stoplist_digest(&self) -> String {
        let mut h = Sha256::new();
        for w in self.stopwords.sorted_words() {
            h.update(w.as_bytes());
            h.update(b"\n");
        }
        hex::encode(h.finalize())
    }
}

/// Tokenize, drop functional words, lemmatize the survivors.
///
/// Multiplicity and order are preserved. Tokens containing digits are
/// dropped. A hyphenated token is kept whole when the lexicon knows it,
/// otherwise its parts are processed separately.
pub fn extract_content_lemmas<F>(
    text: &str,
    stop: &StopwordList,
    rules: &LemmaRules,
    is_known: F,
) -> Vec<String>
where
    F: Fn(&str) -> bool,
{
    let mut out = Vec::new();
    for raw in tokenize(text) {
        let token = trim_token(&raw);
        if token.is_empty() || token.chars().any(|c| c.is_numeric()) {
            continue;
        }
        if token.contains('-') {
            let whole = lemmatize(token, rules, &is_known);
            if is_known(&whole) && !stop.contains(&whole) {
                out.push(whole);
                continue;
            }
            for part in token.split('-').map(trim_token).filter(|p| !p.is_empty()) {
                push_lemma(part, stop, rules, &is_known, &mut out);
            }
        } else {
            push_lemma(token, stop, rules, &is_known, &mut out);
        }
    }
    out
}

fn push_lemma<F>(token: &str, stop: &StopwordList, rules: &LemmaRules, is_known: &F, out: &mut Vec<String>)
where
    F: Fn(&str) -> bool,
{
    if stop.contains(token) {
        return;
    }
    let lemma = lemmatize(token, rules, is_known);
    // "others" -> "other": a lemma can itself be a functional word
    if !stop.contains(&lemma) {
        out.push(lemma);
    }
}
