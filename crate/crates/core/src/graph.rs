//! Sparse connectivity matrices over the lexicon and signal propagation on
//! them.
//!
//! Matrix convention: entry `(j, i) = 1` means a signal leaving node `i`
//! activates node `j`. For a back-linked matrix (BLM) that is "word `i`
//! occurs in the definition of word `j`", so propagation walks the reverse
//! map. Propagation reads columns, so every matrix keeps a column-major copy
//! of its row-major (CSR) storage.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::ingest::{BackLinkedList, ForwardLinkedList, WordId};

/// Marker for "never activated" in depth arrays.
pub const UNREACHED: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MatrixKind {
    /// Back-linked: propagation follows the reverse map.
    Blm,
    /// Forward-linked: transpose of the BLM.
    Flm,
    /// Back-linked with forward links mixed into deficient columns.
    Mblm,
}

impl MatrixKind {
    pub const ALL: [MatrixKind; 3] = [MatrixKind::Blm, MatrixKind::Flm, MatrixKind::Mblm];

    pub fn as_str(self) -> &'static str {
        match self {
            MatrixKind::Blm => "blm",
            MatrixKind::Flm => "flm",
            MatrixKind::Mblm => "mblm",
        }
    }

    pub fn code(self) -> u8 {
        match self {
            MatrixKind::Blm => 1,
            MatrixKind::Flm => 2,
            MatrixKind::Mblm => 3,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.code() == code)
    }
}

impl fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MatrixKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "blm" => Ok(MatrixKind::Blm),
            "flm" => Ok(MatrixKind::Flm),
            "mblm" => Ok(MatrixKind::Mblm),
            other => Err(format!("unknown matrix kind {other:?} (expected blm, flm or mblm)")),
        }
    }
}

/// Compressed index arrays: `offsets[k]..offsets[k + 1]` slices `indices`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Compressed {
    offsets: Vec<usize>,
    indices: Vec<u32>,
}

impl Compressed {
    fn from_lists(lists: Vec<Vec<u32>>) -> Self {
        let mut offsets = Vec::with_capacity(lists.len() + 1);
        offsets.push(0);
        let total = lists.iter().map(Vec::len).sum();
        let mut indices = Vec::with_capacity(total);
        for l in lists {
            indices.extend_from_slice(&l);
            offsets.push(indices.len());
        }
        Self { offsets, indices }
    }

    fn slice(&self, k: usize) -> &[u32] {
        &self.indices[self.offsets[k]..self.offsets[k + 1]]
    }

    /// The same pattern with major and minor axes exchanged.
    fn transposed(&self, n: usize) -> Self {
        let mut counts = vec![0usize; n + 1];
        for &m in &self.indices {
            counts[m as usize + 1] += 1;
        }
        for k in 0..n {
            counts[k + 1] += counts[k];
        }
        let offsets = counts.clone();
        let mut cursor = counts;
        let mut indices = vec![0u32; self.indices.len()];
        for major in 0..n {
            for &minor in self.slice(major) {
                let slot = &mut cursor[minor as usize];
                indices[*slot] = major as u32;
                *slot += 1;
            }
        }
        Self { offsets, indices }
    }
}

/// Square 0/1 matrix in CSR layout with a zero diagonal.
#[derive(Debug, Clone)]
pub struct SparseBinaryMatrix {
    kind: MatrixKind,
    n: usize,
    rows: Compressed,
    cols: Compressed,
}

impl PartialEq for SparseBinaryMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.n == other.n && self.rows == other.rows
    }
}

impl Eq for SparseBinaryMatrix {}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatrixError {
    #[error("row offsets must have length n + 1 and start at 0")]
    BadOffsets,
    #[error("row offsets are not monotone or do not match the index count")]
    NonMonotone,
    #[error("column index {0} out of range")]
    OutOfRange(u32),
    #[error("row {0} is not strictly ascending")]
    Unsorted(usize),
    #[error("diagonal entry at {0}")]
    Diagonal(usize),
}

fn normalize(lists: &mut [Vec<u32>]) {
    for (k, l) in lists.iter_mut().enumerate() {
        l.sort_unstable();
        l.dedup();
        l.retain(|&m| m as usize != k);
    }
}

impl SparseBinaryMatrix {
    /// Builds from per-column row lists (out-neighbor lists of the
    /// propagation graph). Duplicates and diagonal entries are dropped.
    pub fn from_columns(kind: MatrixKind, mut columns: Vec<Vec<u32>>) -> Self {
        let n = columns.len();
        normalize(&mut columns);
        let cols = Compressed::from_lists(columns);
        let rows = cols.transposed(n);
        Self { kind, n, rows, cols }
    }

    /// Builds from per-row column lists. Duplicates and diagonal entries are
    /// dropped.
    pub fn from_rows(kind: MatrixKind, mut rows: Vec<Vec<u32>>) -> Self {
        let n = rows.len();
        normalize(&mut rows);
        let rows = Compressed::from_lists(rows);
        let cols = rows.transposed(n);
        Self { kind, n, rows, cols }
    }

    /// Builds from `(row, col)` pairs.
    pub fn from_entries(kind: MatrixKind, n: usize, entries: &[(u32, u32)]) -> Self {
        let mut rows = vec![Vec::new(); n];
        for &(r, c) in entries {
            rows[r as usize].push(c);
        }
        Self::from_rows(kind, rows)
    }

    /// Validates and adopts raw CSR arrays, e.g. read back from disk.
    pub fn from_csr(
        kind: MatrixKind,
        n: usize,
        offsets: Vec<usize>,
        indices: Vec<u32>,
    ) -> Result<Self, MatrixError> {
        if offsets.len() != n + 1 || offsets[0] != 0 {
            return Err(MatrixError::BadOffsets);
        }
        if offsets.windows(2).any(|w| w[0] > w[1]) || offsets[n] != indices.len() {
            return Err(MatrixError::NonMonotone);
        }
        let rows = Compressed { offsets, indices };
        for r in 0..n {
            let row = rows.slice(r);
            if let Some(&c) = row.iter().find(|&&c| c as usize >= n) {
                return Err(MatrixError::OutOfRange(c));
            }
            if row.windows(2).any(|w| w[0] >= w[1]) {
                return Err(MatrixError::Unsorted(r));
            }
            if row.binary_search(&(r as u32)).is_ok() {
                return Err(MatrixError::Diagonal(r));
            }
        }
        let cols = rows.transposed(n);
        Ok(Self { kind, n, rows, cols })
    }

    pub fn kind(&self) -> MatrixKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.rows.indices.len()
    }

    /// Columns `c` with `(r, c) = 1`, ascending.
    pub fn row(&self, r: usize) -> &[u32] {
        self.rows.slice(r)
    }

    /// Rows `r` with `(r, c) = 1`, ascending: the nodes a signal from `c`
    /// activates.
    pub fn column(&self, c: usize) -> &[u32] {
        self.cols.slice(c)
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.row(r).binary_search(&(c as u32)).is_ok()
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.rows.offsets
    }

    pub fn col_indices(&self) -> &[u32] {
        &self.rows.indices
    }

    /// Fraction of zero entries.
    pub fn sparsity(&self) -> f64 {
        if self.n == 0 {
            return 1.0;
        }
        let total = (self.n as f64) * (self.n as f64);
        1.0 - self.nnz() as f64 / total
    }

    pub fn transpose(&self, kind: MatrixKind) -> Self {
        Self {
            kind,
            n: self.n,
            rows: self.cols.clone(),
            cols: self.rows.clone(),
        }
    }

    /// All `(row, col)` entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.n).flat_map(move |r| self.row(r).iter().map(move |&c| (r as u32, c)))
    }
}

fn ids_to_u32(ids: &[WordId]) -> Vec<u32> {
    ids.iter().map(|w| w.0).collect()
}

/// `BLM(j, i) = 1` for every `j` in the back-linked list of `i`; diagonal
/// zeroed.
pub fn build_blm(fwd: &ForwardLinkedList, back: &BackLinkedList) -> SparseBinaryMatrix {
    debug_assert_eq!(fwd.defs.len(), back.refs.len());
    let columns = back.refs.iter().map(|r| ids_to_u32(r)).collect();
    SparseBinaryMatrix::from_columns(MatrixKind::Blm, columns)
}

/// Forward-linked matrix: column `i` holds the words of `i`'s definition,
/// so propagation follows definitions forward. Equals the BLM transposed.
pub fn build_flm(fwd: &ForwardLinkedList) -> SparseBinaryMatrix {
    let columns = fwd.defs.iter().map(|d| ids_to_u32(d)).collect();
    SparseBinaryMatrix::from_columns(MatrixKind::Flm, columns)
}

/// Sources whose propagation within `depth` steps does not reach every node.
pub fn deficient_sources(matrix: &SparseBinaryMatrix, depth: u32) -> Vec<WordId> {
    source_profiles(matrix, Some(depth))
        .iter()
        .enumerate()
        .filter(|(_, p)| p.reached as usize != matrix.n())
        .map(|(i, _)| WordId(i as u32))
        .collect()
}

/// Mixed back-linked matrix: each deficient source's column also receives
/// that word's own row, i.e. forward links to the words of its definition.
pub fn build_mblm(blm: &SparseBinaryMatrix, depth: u32) -> SparseBinaryMatrix {
    mix_forward_links(blm, &deficient_sources(blm, depth))
}

/// Mixes forward links into the columns of the given sources.
pub fn mix_forward_links(blm: &SparseBinaryMatrix, sources: &[WordId]) -> SparseBinaryMatrix {
    let mut columns: Vec<Vec<u32>> = (0..blm.n()).map(|c| blm.column(c).to_vec()).collect();
    for &source in sources {
        let i = source.index();
        columns[i].extend_from_slice(blm.row(i));
    }
    SparseBinaryMatrix::from_columns(MatrixKind::Mblm, columns)
}

/// First-activation depths from an `evolve` run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachabilityTrace {
    sources: Vec<WordId>,
    depth_of: Vec<u32>,
    max_depth_run: u32,
    saturation_depth: u32,
}

impl ReachabilityTrace {
    pub fn sources(&self) -> &[WordId] {
        &self.sources
    }

    /// Depth at which `w` first switched on, if it did.
    pub fn depth(&self, w: WordId) -> Option<u32> {
        let d = self.depth_of[w.index()];
        (d != UNREACHED).then_some(d)
    }

    /// Raw depths with [`UNREACHED`] for nodes that never activated.
    pub fn depths(&self) -> &[u32] {
        &self.depth_of
    }

    pub fn max_depth_run(&self) -> u32 {
        self.max_depth_run
    }

    /// Last step at which some node activated.
    pub fn saturation_depth(&self) -> u32 {
        self.saturation_depth
    }

    pub fn reached(&self) -> usize {
        self.depth_of.iter().filter(|&&d| d != UNREACHED).count()
    }

    pub fn into_depths(self) -> Vec<u32> {
        self.depth_of
    }
}

/// Runs the n-layered search from `sources` for `steps` steps.
///
/// Sources are held on by a constant external bias, and a node stays on
/// once activated, so the recorded depth is the first step at which the
/// node received input: the shortest-path distance from the nearest source.
/// Each step gathers the columns of the nodes that switched on in the
/// previous step.
pub fn evolve(matrix: &SparseBinaryMatrix, sources: &[WordId], steps: u32) -> ReachabilityTrace {
    let mut depth_of = vec![UNREACHED; matrix.n()];
    let mut frontier = Vec::new();
    for &s in sources {
        if depth_of[s.index()] == UNREACHED {
            depth_of[s.index()] = 0;
            frontier.push(s.0);
        }
    }
    let mut saturation_depth = 0;
    let mut next = Vec::new();
    for t in 1..=steps {
        for &u in &frontier {
            for &v in matrix.column(u as usize) {
                let d = &mut depth_of[v as usize];
                if *d == UNREACHED {
                    *d = t;
                    next.push(v);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        saturation_depth = t;
        std::mem::swap(&mut frontier, &mut next);
        next.clear();
    }
    ReachabilityTrace {
        sources: sources.to_vec(),
        depth_of,
        max_depth_run: steps,
        saturation_depth,
    }
}

/// Summary of a single-source search run to saturation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceProfile {
    /// Nodes activated, the source included.
    pub reached: u32,
    /// Last depth at which a new node activated (0 if none).
    pub saturation_depth: u32,
}

/// Sources searched together: 64 per `u64` word of the lane mask.
const WORDS: usize = 4;
const LANES: usize = 64 * WORDS;

type Mask = [u64; WORDS];

const EMPTY: Mask = [0; WORDS];

/// Per-node search state, kept on one cache line since every edge visit
/// touches both masks.
#[derive(Clone, Copy)]
#[repr(align(64))]
struct Cell {
    seen: Mask,
    next: Mask,
}

const CLEAR: Cell = Cell {
    seen: EMPTY,
    next: EMPTY,
};

#[derive(Default)]
struct BatchScratch {
    cells: Vec<Cell>,
    frontier: Vec<Mask>,
    /// One bit per node: every lane still searching has seen it.
    done: Vec<u64>,
    pending: Vec<u32>,
}

fn or_masks(a: Mask, b: Mask) -> Mask {
    std::array::from_fn(|k| a[k] | b[k])
}

fn for_each_lane(mask: Mask, mut f: impl FnMut(usize)) {
    for (k, mut word) in mask.into_iter().enumerate() {
        while word != 0 {
            f(64 * k + word.trailing_zeros() as usize);
            word &= word - 1;
        }
    }
}

/// Per-lane population counts over many masks, using bit-sliced counters
/// so each mask costs a few word operations instead of one per set bit.
fn count_lanes(masks: impl Iterator<Item = Mask>) -> [u32; LANES] {
    let mut planes = [EMPTY; 32];
    for mask in masks {
        let mut carry = mask;
        for plane in planes.iter_mut() {
            if carry == EMPTY {
                break;
            }
            let next: Mask = std::array::from_fn(|k| plane[k] & carry[k]);
            *plane = std::array::from_fn(|k| plane[k] ^ carry[k]);
            carry = next;
        }
    }
    let mut counts = [0u32; LANES];
    for (bit, plane) in planes.iter().enumerate() {
        for_each_lane(*plane, |b| counts[b] |= 1 << bit);
    }
    counts
}

/// Searches from up to `LANES` sources at once, one bit per source.
fn profile_batch(
    matrix: &SparseBinaryMatrix,
    sources: &[u32],
    limit: Option<u32>,
    scratch: &mut BatchScratch,
) -> Vec<SourceProfile> {
    let n = matrix.n();
    let width = sources.len();
    let BatchScratch {
        cells,
        frontier,
        done,
        pending,
    } = scratch;
    cells.clear();
    cells.resize(n, CLEAR);
    frontier.clear();
    frontier.resize(n, EMPTY);
    done.clear();
    done.resize(n.div_ceil(64), 0);
    pending.clear();
    pending.extend(0..n as u32);

    let mut saturation = [0u32; LANES];
    let mut active: Vec<u32> = Vec::with_capacity(width);
    for (b, &s) in sources.iter().enumerate() {
        let bit = 1u64 << (b % 64);
        cells[s as usize].seen[b / 64] |= bit;
        frontier[s as usize][b / 64] |= bit;
        if !active.contains(&s) {
            active.push(s);
        }
    }
    let mut touched: Vec<u32> = Vec::new();
    let mut depth = 0u32;
    let mut pull_cost: usize = matrix.nnz();
    while !active.is_empty() && limit.is_none_or(|l| depth < l) {
        depth += 1;
        let push_cost: usize = active.iter().map(|&u| matrix.column(u as usize).len()).sum();
        // Pulling walks the cells in order, so it wins well before it does
        // less work than pushing.
        if push_cost * 4 > pull_cost {
            // Dense step: each pending node gathers the frontier bits of the
            // (few) nodes that activate it.
            for &v in pending.iter() {
                let mut incoming = EMPTY;
                for &u in matrix.row(v as usize) {
                    incoming = or_masks(incoming, frontier[u as usize]);
                }
                let cell = &mut cells[v as usize];
                let fresh: Mask = std::array::from_fn(|k| incoming[k] & !cell.seen[k]);
                if fresh != EMPTY {
                    touched.push(v);
                    cell.next = fresh;
                    cell.seen = or_masks(cell.seen, fresh);
                }
            }
            for &u in &active {
                frontier[u as usize] = EMPTY;
            }
        } else {
            for &u in &active {
                let bits = std::mem::replace(&mut frontier[u as usize], EMPTY);
                for &v in matrix.column(u as usize) {
                    if done[v as usize / 64] >> (v % 64) & 1 != 0 {
                        continue;
                    }
                    let cell = &mut cells[v as usize];
                    let mut fresh = EMPTY;
                    let mut any = 0;
                    for k in 0..WORDS {
                        fresh[k] = bits[k] & !cell.seen[k];
                        any |= fresh[k];
                    }
                    if any != 0 {
                        if cell.next == EMPTY {
                            touched.push(v);
                        }
                        for k in 0..WORDS {
                            cell.next[k] |= fresh[k];
                            cell.seen[k] |= fresh[k];
                        }
                    }
                }
            }
        }
        let mut live = EMPTY;
        for &v in &touched {
            let bits = std::mem::replace(&mut cells[v as usize].next, EMPTY);
            frontier[v as usize] = bits;
            live = or_masks(live, bits);
        }
        for_each_lane(live, |b| saturation[b] = depth);
        // Lanes with an empty frontier are finished; a node seen by all the
        // others can never yield a fresh bit again.
        pull_cost = 0;
        pending.retain(|&v| {
            let seen = cells[v as usize].seen;
            let finished = (0..WORDS).all(|k| live[k] & !seen[k] == 0);
            if finished {
                done[v as usize / 64] |= 1 << (v % 64);
            } else {
                pull_cost += matrix.row(v as usize).len();
            }
            !finished
        });
        std::mem::swap(&mut active, &mut touched);
        touched.clear();
    }
    let reached = count_lanes(cells.iter().map(|c| c.seen));
    (0..width)
        .map(|b| SourceProfile {
            reached: reached[b],
            saturation_depth: saturation[b],
        })
        .collect()
}

/// Profiles every node as a single source, optionally stopping after
/// `limit` steps. Bit-parallel over batches of sources, batches spread over
/// the rayon pool. Nodes with no outgoing links are settled without a search.
pub fn source_profiles(matrix: &SparseBinaryMatrix, limit: Option<u32>) -> Vec<SourceProfile> {
    let n = matrix.n();
    let mut profiles = vec![
        SourceProfile {
            reached: 1,
            saturation_depth: 0,
        };
        n
    ];
    let searched: Vec<u32> = (0..n as u32)
        .filter(|&u| !matrix.column(u as usize).is_empty())
        .collect();
    let batches: Vec<&[u32]> = searched.chunks(LANES).collect();
    let results: Vec<Vec<SourceProfile>> = batches
        .par_iter()
        .map_init(BatchScratch::default, |scratch, batch| {
            profile_batch(matrix, batch, limit, scratch)
        })
        .collect();
    for (batch, found) in batches.iter().zip(results) {
        for (&s, p) in batch.iter().zip(found) {
            profiles[s as usize] = p;
        }
    }
    profiles
}

/// Smallest depth after which no source activates any new node.
pub fn max_nonredundant_depth(matrix: &SparseBinaryMatrix) -> u32 {
    source_profiles(matrix, None)
        .iter()
        .map(|p| p.saturation_depth)
        .max()
        .unwrap_or(0)
}

/// Connectivity diagnostics for one matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphStats {
    pub kind: MatrixKind,
    pub n: usize,
    pub nnz: usize,
    pub sparsity: f64,
    /// Depth at which a single source has activated every node; `None` if it
    /// never does.
    pub min_full_depth: Vec<Option<u32>>,
    /// Per-word count of propagation links leaving the word (column counts).
    pub backlink_degree: Vec<u32>,
    pub degree_mean: f64,
    pub degree_std: f64,
    pub degree_max: u32,
    pub max_nonredundant_depth: u32,
}

pub fn compute_stats(matrix: &SparseBinaryMatrix) -> GraphStats {
    let n = matrix.n();
    let profiles = source_profiles(matrix, None);
    let min_full_depth = profiles
        .iter()
        .map(|p| (p.reached as usize == n).then_some(p.saturation_depth))
        .collect();
    let backlink_degree: Vec<u32> = (0..n).map(|c| matrix.column(c).len() as u32).collect();
    let (mean, std) = mean_std(&backlink_degree);
    GraphStats {
        kind: matrix.kind(),
        n,
        nnz: matrix.nnz(),
        sparsity: matrix.sparsity(),
        min_full_depth,
        degree_mean: mean,
        degree_std: std,
        degree_max: backlink_degree.iter().copied().max().unwrap_or(0),
        backlink_degree,
        max_nonredundant_depth: profiles.iter().map(|p| p.saturation_depth).max().unwrap_or(0),
    }
}

/// Population mean and standard deviation.
fn mean_std(values: &[u32]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let n = values.len() as f64;
    let mean = values.iter().map(|&v| v as f64).sum::<f64>() / n;
    let var = values.iter().map(|&v| (v as f64 - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

impl GraphStats {
    /// Sources that never excite the whole graph. With no step limit this is
    /// the same set `deficient_sources` finds at the maximum non-redundant
    /// depth.
    pub fn deficient_sources(&self) -> Vec<WordId> {
        (0..self.n as u32)
            .filter(|&i| self.min_full_depth[i as usize].is_none())
            .map(WordId)
            .collect()
    }

    /// Words that cannot excite the whole graph.
    pub fn incomplete_sources(&self) -> usize {
        self.min_full_depth.iter().filter(|d| d.is_none()).count()
    }

    /// Words with no outgoing propagation link.
    pub fn zero_degree_count(&self) -> usize {
        self.backlink_degree.iter().filter(|&&d| d == 0).count()
    }

    /// `depth<TAB>words` histogram of full-coverage depths. Words that never
    /// cover the graph are counted under depth 0.
    pub fn full_depth_histogram(&self) -> Vec<(u32, usize)> {
        let mut counts = std::collections::BTreeMap::new();
        for d in &self.min_full_depth {
            *counts.entry(d.unwrap_or(0)).or_insert(0usize) += 1;
        }
        counts.into_iter().collect()
    }

    pub fn degree_histogram(&self) -> Vec<(u32, usize)> {
        let mut counts = std::collections::BTreeMap::new();
        for &d in &self.backlink_degree {
            *counts.entry(d).or_insert(0usize) += 1;
        }
        counts.into_iter().collect()
    }

    /// Key/value summary, one `key<TAB>value` pair per line.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            s.push_str(k);
            s.push('\t');
            s.push_str(&v);
            s.push('\n');
        };
        kv("matrix", self.kind.to_string());
        kv("nodes", self.n.to_string());
        kv("nonzeros", self.nnz.to_string());
        kv("sparsity", format!("{:.6}", self.sparsity));
        kv("max_nonredundant_depth", self.max_nonredundant_depth.to_string());
        kv("incomplete_sources", self.incomplete_sources().to_string());
        kv("zero_degree_words", self.zero_degree_count().to_string());
        kv("degree_mean", format!("{:.4}", self.degree_mean));
        kv("degree_std", format!("{:.4}", self.degree_std));
        kv("degree_max", self.degree_max.to_string());
        s
    }

    pub fn histogram_tsv(header: &str, rows: &[(u32, usize)]) -> String {
        let mut s = format!("{header}\twords\n");
        for (k, c) in rows {
            s.push_str(&format!("{k}\t{c}\n"));
        }
        s
    }
}
