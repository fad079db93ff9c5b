//! A built index: lexicon, text pipeline, matrices and their statistics.

use crate::graph::{
    build_blm, build_flm, compute_stats, mix_forward_links, GraphStats, MatrixKind,
    SparseBinaryMatrix,
};
use crate::ingest::{build_back_list, build_forward_list, ForwardLinkedList, IngestError, Lexicon, RawDictionary};
use crate::textproc::TextPipeline;

/// Which optional matrices to build next to the BLM.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildOptions {
    pub build_mblm: bool,
    pub build_flm: bool,
}

impl BuildOptions {
    pub fn all() -> Self {
        Self {
            build_mblm: true,
            build_flm: true,
        }
    }
}

/// Provenance recorded alongside the index.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BuildManifest {
    pub sources: Vec<String>,
    pub stoplist_sha256: String,
    pub rules_sha256: String,
    /// Depth used to detect deficient sources when mixing the mBLM.
    pub mixing_depth: Option<u32>,
    /// Number of columns that received forward links.
    pub mixed_sources: Option<u32>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndexBundle {
    pub lexicon: Lexicon,
    pub pipeline: TextPipeline,
    /// Sorted by kind; always holds a BLM.
    pub matrices: Vec<SparseBinaryMatrix>,
    /// Parallel to `matrices`.
    pub stats: Vec<GraphStats>,
    pub manifest: BuildManifest,
}

impl IndexBundle {
    /// Ingests the dictionaries (pooled) and builds every requested matrix.
    pub fn build(
        dicts: &[RawDictionary],
        pipeline: TextPipeline,
        options: &BuildOptions,
    ) -> Result<Self, IngestError> {
        let (lexicon, fwd) = build_forward_list(dicts, &pipeline)?;
        let sources = dicts.iter().map(|d| d.name.clone()).collect();
        Ok(Self::from_lists(lexicon, &fwd, pipeline, options, sources))
    }

    /// Builds matrices and stats from already ingested lists.
    pub fn from_lists(
        lexicon: Lexicon,
        fwd: &ForwardLinkedList,
        pipeline: TextPipeline,
        options: &BuildOptions,
        sources: Vec<String>,
    ) -> Self {
        let back = build_back_list(fwd);
        let blm = build_blm(fwd, &back);
        let blm_stats = compute_stats(&blm);
        let mut manifest = BuildManifest {
            sources,
            stoplist_sha256: pipeline.stoplist_digest(),
            rules_sha256: pipeline.rules.digest(),
            mixing_depth: None,
            mixed_sources: None,
        };
        let mut matrices = Vec::new();
        let mut stats = Vec::new();
        if options.build_flm {
            let flm = build_flm(fwd);
            stats.push(compute_stats(&flm));
            matrices.push(flm);
        }
        if options.build_mblm {
            let p = blm_stats.max_nonredundant_depth;
            manifest.mixing_depth = Some(p);
            let deficient = blm_stats.deficient_sources();
            manifest.mixed_sources = Some(deficient.len() as u32);
            let mblm = mix_forward_links(&blm, &deficient);
            stats.push(compute_stats(&mblm));
            matrices.push(mblm);
        }
        matrices.push(blm);
        stats.push(blm_stats);
        let mut bundle = Self {
            lexicon,
            pipeline,
            matrices,
            stats,
            manifest,
        };
        bundle.sort_matrices();
        bundle
    }

    fn sort_matrices(&mut self) {
        let mut pairs: Vec<_> = self.matrices.drain(..).zip(self.stats.drain(..)).collect();
        pairs.sort_by_key(|(m, _)| m.kind());
        (self.matrices, self.stats) = pairs.into_iter().unzip();
    }

    pub fn matrix(&self, kind: MatrixKind) -> Option<&SparseBinaryMatrix> {
        self.matrices.iter().find(|m| m.kind() == kind)
    }

    pub fn stats(&self, kind: MatrixKind) -> Option<&GraphStats> {
        self.stats.iter().find(|s| s.kind == kind)
    }

    pub fn kinds(&self) -> Vec<MatrixKind> {
        self.matrices.iter().map(|m| m.kind()).collect()
    }

    /// Maximum non-redundant depth of the given matrix, 0 if absent.
    pub fn default_depth(&self, kind: MatrixKind) -> u32 {
        self.stats(kind).map_or(0, |s| s.max_nonredundant_depth)
    }

    pub fn blm(&self) -> &SparseBinaryMatrix {
        self.matrix(MatrixKind::Blm).expect("bundle always holds a BLM")
    }
}
