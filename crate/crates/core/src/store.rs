//! Single-file binary container for an [`IndexBundle`].
//!
//! Layout (all integers little-endian):
//!
//! ```text
//! magic    8 bytes  "REVDICT\0"
//! version  u32
//! count    u32      number of sections
//! section* tag [u8; 4], length u64, payload
//! ```
//!
//! Section payloads are described in `docs/index-format.md`.

use std::collections::HashMap;
use std::io::Write;
use std::path::Path;

use thiserror::Error;

use crate::bundle::{BuildManifest, IndexBundle};
use crate::graph::{GraphStats, MatrixKind, SparseBinaryMatrix};
use crate::ingest::{Lexicon, WordFlags};
use crate::textproc::{LemmaRules, PartTag, StopwordList, SuffixRule, TextPipeline};

pub const MAGIC: &[u8; 8] = b"REVDICT\0";
pub const FORMAT_VERSION: u32 = 1;

const LEXICON: [u8; 4] = *b"LEXN";
const FREQUENCIES: [u8; 4] = *b"FREQ";
const TEXT: [u8; 4] = *b"TEXT";
const MATRIX: [u8; 4] = *b"MATX";
const STATS: [u8; 4] = *b"STAT";
const MANIFEST: [u8; 4] = *b"MNFT";

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("not an index file (bad magic bytes)")]
    BadMagic,
    #[error("unsupported index format version {found} (expected {FORMAT_VERSION})")]
    UnsupportedVersion { found: u32 },
    #[error("corrupt {section} section: {reason}")]
    CorruptSection { section: String, reason: String },
}

fn corrupt(section: [u8; 4], reason: impl Into<String>) -> StoreError {
    StoreError::CorruptSection {
        section: String::from_utf8_lossy(&section).into_owned(),
        reason: reason.into(),
    }
}

#[derive(Default)]
struct Enc(Vec<u8>);

impl Enc {
    fn u8(&mut self, v: u8) {
        self.0.push(v);
    }
    fn u32(&mut self, v: u32) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn u64(&mut self, v: u64) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn f64(&mut self, v: f64) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }
    fn str(&mut self, s: &str) {
        self.u32(s.len() as u32);
        self.0.extend_from_slice(s.as_bytes());
    }
    fn opt_u32(&mut self, v: Option<u32>) {
        match v {
            Some(v) => {
                self.u8(1);
                self.u32(v);
            }
            None => self.u8(0),
        }
    }
    fn strs<'a>(&mut self, items: impl ExactSizeIterator<Item = &'a str>) {
        self.u32(items.len() as u32);
        for s in items {
            self.str(s);
        }
    }
}

struct Dec<'a> {
    buf: &'a [u8],
    pos: usize,
}

type DecResult<T> = Result<T, String>;

impl<'a> Dec<'a> {
    fn new(buf: &'a [u8]) -> Self {
        Self { buf, pos: 0 }
    }
    fn take(&mut self, n: usize) -> DecResult<&'a [u8]> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.buf.len());
        let end = end.ok_or_else(|| format!("truncated at byte {}", self.pos))?;
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }
    fn u8(&mut self) -> DecResult<u8> {
        Ok(self.take(1)?[0])
    }
    fn u32(&mut self) -> DecResult<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }
    fn u64(&mut self) -> DecResult<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn f64(&mut self) -> DecResult<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
    fn str(&mut self) -> DecResult<String> {
        let len = self.u32()? as usize;
        let bytes = self.take(len)?;
        String::from_utf8(bytes.to_vec()).map_err(|_| "invalid UTF-8 string".to_string())
    }
    fn opt_u32(&mut self) -> DecResult<Option<u32>> {
        match self.u8()? {
            0 => Ok(None),
            1 => Ok(Some(self.u32()?)),
            t => Err(format!("bad option tag {t}")),
        }
    }
    /// Element count, checked against the bytes left so corrupt lengths
    /// cannot trigger huge allocations.
    fn count(&mut self, min_elem_size: usize) -> DecResult<usize> {
        let n = self.u32()? as usize;
        if n.saturating_mul(min_elem_size) > self.buf.len() - self.pos {
            return Err(format!("count {n} exceeds section size"));
        }
        Ok(n)
    }
    fn u32s(&mut self, n: usize) -> DecResult<Vec<u32>> {
        let bytes = self.take(n.checked_mul(4).ok_or("length overflow")?)?;
        Ok(bytes
            .chunks_exact(4)
            .map(|c| u32::from_le_bytes(c.try_into().unwrap()))
            .collect())
    }
    fn strs(&mut self) -> DecResult<Vec<String>> {
        let n = self.count(4)?;
        (0..n).map(|_| self.str()).collect()
    }
    fn finish(&self) -> DecResult<()> {
        if self.pos == self.buf.len() {
            Ok(())
        } else {
            Err(format!("{} trailing bytes", self.buf.len() - self.pos))
        }
    }
}

fn encode_lexicon(lex: &Lexicon) -> Vec<u8> {
    let mut e = Enc::default();
    e.u32(lex.len() as u32);
    for (word, flags) in lex.words().iter().zip(lex.all_flags()) {
        e.u8(flags.is_mwe as u8 | (flags.added_for_consistency as u8) << 1);
        e.str(word);
    }
    e.0
}

fn encode_frequencies(lex: &Lexicon) -> Vec<u8> {
    let mut e = Enc::default();
    e.u32(lex.len() as u32);
    for &nu in lex.frequencies() {
        e.u32(nu);
    }
    e.0
}

fn encode_text(p: &TextPipeline) -> Vec<u8> {
    let mut e = Enc::default();
    e.strs(p.stopwords.sorted_words().into_iter());
    let rules = p.rules.suffix_rules();
    e.u32(rules.len() as u32);
    for r in rules {
        e.u8(match r.tag {
            PartTag::Noun => 0,
            PartTag::Verb => 1,
            PartTag::Adjective => 2,
        });
        e.str(&r.suffix);
        e.str(&r.replacement);
    }
    let mut pairs: Vec<_> = p.rules.exceptions().iter().collect();
    pairs.sort();
    e.u32(pairs.len() as u32);
    for (k, v) in pairs {
        e.str(k);
        e.str(v);
    }
    e.0
}

fn encode_matrix(m: &SparseBinaryMatrix) -> Vec<u8> {
    let mut e = Enc::default();
    e.u8(m.kind().code());
    e.u32(m.n() as u32);
    e.u64(m.nnz() as u64);
    for &o in m.row_offsets() {
        e.u64(o as u64);
    }
    for &c in m.col_indices() {
        e.u32(c);
    }
    e.0
}

fn encode_stats(s: &GraphStats) -> Vec<u8> {
    let mut e = Enc::default();
    e.u8(s.kind.code());
    e.u32(s.n as u32);
    e.u64(s.nnz as u64);
    e.f64(s.sparsity);
    e.u32(s.max_nonredundant_depth);
    e.f64(s.degree_mean);
    e.f64(s.degree_std);
    e.u32(s.degree_max);
    for d in &s.min_full_depth {
        e.u32(d.unwrap_or(u32::MAX));
    }
    for &d in &s.backlink_degree {
        e.u32(d);
    }
    e.0
}

fn encode_manifest(m: &BuildManifest) -> Vec<u8> {
    let mut e = Enc::default();
    e.strs(m.sources.iter().map(String::as_str));
    e.str(&m.stoplist_sha256);
    e.str(&m.rules_sha256);
    e.opt_u32(m.mixing_depth);
    e.opt_u32(m.mixed_sources);
    e.0
}

/// Serializes a bundle to the container format.
pub fn to_bytes(bundle: &IndexBundle) -> Vec<u8> {
    let mut sections: Vec<([u8; 4], Vec<u8>)> = vec![
        (LEXICON, encode_lexicon(&bundle.lexicon)),
        (FREQUENCIES, encode_frequencies(&bundle.lexicon)),
        (TEXT, encode_text(&bundle.pipeline)),
    ];
    sections.extend(bundle.matrices.iter().map(|m| (MATRIX, encode_matrix(m))));
    sections.extend(bundle.stats.iter().map(|s| (STATS, encode_stats(s))));
    sections.push((MANIFEST, encode_manifest(&bundle.manifest)));

    let mut out = Vec::with_capacity(16 + sections.iter().map(|(_, p)| p.len() + 12).sum::<usize>());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&(sections.len() as u32).to_le_bytes());
    for (tag, payload) in sections {
        out.extend_from_slice(&tag);
        out.extend_from_slice(&(payload.len() as u64).to_le_bytes());
        out.extend_from_slice(&payload);
    }
    out
}

fn decode_lexicon(d: &mut Dec) -> DecResult<(Vec<String>, Vec<WordFlags>)> {
    let n = d.count(5)?;
    let mut words = Vec::with_capacity(n);
    let mut flags = Vec::with_capacity(n);
    for _ in 0..n {
        let f = d.u8()?;
        if f > 3 {
            return Err(format!("bad flags {f}"));
        }
        flags.push(WordFlags {
            is_mwe: f & 1 != 0,
            added_for_consistency: f & 2 != 0,
        });
        words.push(d.str()?);
    }
    Ok((words, flags))
}

fn decode_frequencies(d: &mut Dec) -> DecResult<Vec<u32>> {
    let n = d.count(4)?;
    d.u32s(n)
}

fn decode_text(d: &mut Dec) -> DecResult<TextPipeline> {
    let stopwords = StopwordList::from_words(d.strs()?);
    let n = d.count(9)?;
    let mut rules = Vec::with_capacity(n);
    for _ in 0..n {
        let tag = match d.u8()? {
            0 => PartTag::Noun,
            1 => PartTag::Verb,
            2 => PartTag::Adjective,
            t => return Err(format!("bad part tag {t}")),
        };
        rules.push(SuffixRule {
            tag,
            suffix: d.str()?,
            replacement: d.str()?,
        });
    }
    let n = d.count(8)?;
    let mut exceptions = HashMap::with_capacity(n);
    for _ in 0..n {
        let k = d.str()?;
        exceptions.insert(k, d.str()?);
    }
    Ok(TextPipeline::new(stopwords, LemmaRules::new(rules, exceptions)))
}

fn decode_kind(d: &mut Dec) -> DecResult<MatrixKind> {
    let code = d.u8()?;
    MatrixKind::from_code(code).ok_or_else(|| format!("unknown matrix kind {code}"))
}

fn decode_matrix(d: &mut Dec) -> DecResult<SparseBinaryMatrix> {
    let kind = decode_kind(d)?;
    let n = d.u32()? as usize;
    let nnz = d.u64()? as usize;
    let need = (n + 1).saturating_mul(8).saturating_add(nnz.saturating_mul(4));
    if need > d.buf.len() - d.pos {
        return Err("matrix arrays exceed section size".into());
    }
    let offsets = (0..=n)
        .map(|_| d.u64().map(|o| o as usize))
        .collect::<DecResult<Vec<_>>>()?;
    let indices = d.u32s(nnz)?;
    SparseBinaryMatrix::from_csr(kind, n, offsets, indices).map_err(|e| e.to_string())
}

fn decode_stats(d: &mut Dec) -> DecResult<GraphStats> {
    let kind = decode_kind(d)?;
    let n = d.u32()? as usize;
    let nnz = d.u64()? as usize;
    let sparsity = d.f64()?;
    let max_nonredundant_depth = d.u32()?;
    let degree_mean = d.f64()?;
    let degree_std = d.f64()?;
    let degree_max = d.u32()?;
    if n.saturating_mul(8) > d.buf.len() - d.pos {
        return Err("stat arrays exceed section size".into());
    }
    let min_full_depth = d
        .u32s(n)?
        .into_iter()
        .map(|v| (v != u32::MAX).then_some(v))
        .collect();
    let backlink_degree = d.u32s(n)?;
    Ok(GraphStats {
        kind,
        n,
        nnz,
        sparsity,
        min_full_depth,
        backlink_degree,
        degree_mean,
        degree_std,
        degree_max,
        max_nonredundant_depth,
    })
}

fn decode_manifest(d: &mut Dec) -> DecResult<BuildManifest> {
    Ok(BuildManifest {
        sources: d.strs()?,
        stoplist_sha256: d.str()?,
        rules_sha256: d.str()?,
        mixing_depth: d.opt_u32()?,
        mixed_sources: d.opt_u32()?,
    })
}

fn section<T>(tag: [u8; 4], payload: &[u8], f: impl FnOnce(&mut Dec) -> DecResult<T>) -> Result<T, StoreError> {
    let mut d = Dec::new(payload);
    let v = f(&mut d).map_err(|r| corrupt(tag, r))?;
    d.finish().map_err(|r| corrupt(tag, r))?;
    Ok(v)
}

/// Parses and validates a serialized bundle.
pub fn from_bytes(bytes: &[u8]) -> Result<IndexBundle, StoreError> {
    if bytes.len() < MAGIC.len() || &bytes[..MAGIC.len()] != MAGIC {
        return Err(StoreError::BadMagic);
    }
    let mut d = Dec::new(&bytes[MAGIC.len()..]);
    let header = *b"HEAD";
    let version = d.u32().map_err(|r| corrupt(header, r))?;
    if version != FORMAT_VERSION {
        return Err(StoreError::UnsupportedVersion { found: version });
    }
    let count = d.u32().map_err(|r| corrupt(header, r))?;

    let mut lexicon = None;
    let mut frequencies = None;
    let mut pipeline = None;
    let mut manifest = None;
    let mut matrices = Vec::new();
    let mut stats = Vec::new();
    for _ in 0..count {
        let tag: [u8; 4] = d.take(4).map_err(|r| corrupt(header, r))?.try_into().unwrap();
        let len = d.u64().map_err(|r| corrupt(tag, r))?;
        let payload = usize::try_from(len)
            .map_err(|_| corrupt(tag, "length overflow"))
            .and_then(|len| d.take(len).map_err(|r| corrupt(tag, r)))?;
        match tag {
            LEXICON => lexicon = Some(section(tag, payload, decode_lexicon)?),
            FREQUENCIES => frequencies = Some(section(tag, payload, decode_frequencies)?),
            TEXT => pipeline = Some(section(tag, payload, decode_text)?),
            MATRIX => matrices.push(section(tag, payload, decode_matrix)?),
            STATS => stats.push(section(tag, payload, decode_stats)?),
            MANIFEST => manifest = Some(section(tag, payload, decode_manifest)?),
            other => return Err(corrupt(other, "unknown section")),
        }
    }
    d.finish().map_err(|r| corrupt(header, r))?;

    let (words, flags) = lexicon.ok_or_else(|| corrupt(LEXICON, "missing"))?;
    let nu = frequencies.ok_or_else(|| corrupt(FREQUENCIES, "missing"))?;
    let lexicon = Lexicon::from_parts(words, flags, nu)
        .ok_or_else(|| corrupt(LEXICON, "words unsorted or frequency count mismatch"))?;
    let n = lexicon.len();
    if let Some(m) = matrices.iter().find(|m| m.n() != n) {
        return Err(corrupt(MATRIX, format!("{} has {} nodes, lexicon has {n}", m.kind(), m.n())));
    }
    let mut kinds: Vec<_> = matrices.iter().map(|m| m.kind()).collect();
    let mut stat_kinds: Vec<_> = stats.iter().map(|s| s.kind).collect();
    kinds.sort();
    stat_kinds.sort();
    if kinds.windows(2).any(|w| w[0] == w[1]) || !kinds.contains(&MatrixKind::Blm) {
        return Err(corrupt(MATRIX, "need exactly one BLM and no duplicate kinds"));
    }
    if kinds != stat_kinds || stats.iter().any(|s| s.n != n || s.min_full_depth.len() != n) {
        return Err(corrupt(STATS, "statistics do not match matrices"));
    }
    matrices.sort_by_key(|m| m.kind());
    stats.sort_by_key(|s| s.kind);
    Ok(IndexBundle {
        lexicon,
        pipeline: pipeline.ok_or_else(|| corrupt(TEXT, "missing"))?,
        matrices,
        stats,
        manifest: manifest.ok_or_else(|| corrupt(MANIFEST, "missing"))?,
    })
}

/// Writes the bundle atomically: a temporary file in the target directory
/// is renamed over `path` once fully written.
pub fn save(bundle: &IndexBundle, path: &Path) -> Result<(), StoreError> {
    let io_err = |source| StoreError::Io {
        path: path.display().to_string(),
        source,
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
    tmp.write_all(&to_bytes(bundle)).map_err(io_err)?;
    tmp.as_file().sync_all().map_err(io_err)?;
    tmp.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

pub fn load(path: &Path) -> Result<IndexBundle, StoreError> {
    let bytes = std::fs::read(path).map_err(|source| StoreError::Io {
        path: path.display().to_string(),
        source,
    })?;
    from_bytes(&bytes)
}
