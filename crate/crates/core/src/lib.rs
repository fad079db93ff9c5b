//! Reverse dictionary over a graph of dictionary definitions.
//!
//! A phrase is reduced to content-word lemmas; each lemma starts a search
//! over the reverse map (word -> words whose definitions contain it), and
//! every word is ranked by a frequency-weighted inverse of its distances
//! from the input words.
//!
//! ```
//! use revdict::{bundle::{BuildOptions, IndexBundle}, fixtures, similarity, textproc::TextPipeline};
//!
//! let index = IndexBundle::build(&[fixtures::fam_raw()], TextPipeline::english(), &BuildOptions::default())?;
//! let out = similarity::query("son of my parents", &index, &similarity::QueryOptions::default())?;
//! assert_eq!(index.lexicon.word(out.entries[0].word), "brother");
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod bundle;
pub mod eval;
pub mod fixtures;
pub mod graph;
pub mod ingest;
pub mod similarity;
pub mod store;
pub mod textproc;

pub use bundle::{BuildManifest, BuildOptions, IndexBundle};
pub use graph::{MatrixKind, SparseBinaryMatrix};
pub use ingest::{Lexicon, RawDictionary, WordId};
pub use similarity::{query, QueryError, QueryOptions, RankedOutput};
pub use textproc::TextPipeline;
