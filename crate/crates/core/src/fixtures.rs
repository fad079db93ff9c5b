//! Small hand-checkable dictionaries used across the test suites and docs.

use crate::ingest::{
    build_back_list, build_forward_list, load_dictionary, BackLinkedList, DictFormat,
    ForwardLinkedList, Lexicon, RawDictionary,
};
use crate::textproc::{LemmaRules, StopwordList, TextPipeline};

/// Three words, `a -> [b]`, `b -> [c]`, `c -> [b]`.
pub const TOY3_TSV: &str = "a\tb\nb\tc\nc\tb\n";

/// Six family words whose reverse map leads "son of my parents" to
/// `brother`.
pub const FAM_TSV: &str = "\
brother\tson father mother
father\tparent
mother\tparent
son\tchild
parent\tchild
child\tson
";

/// TOY3 uses `a` as a word, so it is processed without a stoplist.
pub fn toy3_pipeline() -> TextPipeline {
    TextPipeline::new(StopwordList::empty(), LemmaRules::english())
}

pub fn toy3_raw() -> RawDictionary {
    load_dictionary("toy3", TOY3_TSV.as_bytes(), DictFormat::Tsv).expect("valid fixture")
}

pub fn fam_raw() -> RawDictionary {
    load_dictionary("fam", FAM_TSV.as_bytes(), DictFormat::Tsv).expect("valid fixture")
}

pub fn toy3_lists() -> (Lexicon, ForwardLinkedList, BackLinkedList) {
    let (lex, fwd) = build_forward_list(&[toy3_raw()], &toy3_pipeline()).expect("valid fixture");
    let back = build_back_list(&fwd);
    (lex, fwd, back)
}

pub fn fam_lists() -> (Lexicon, ForwardLinkedList, BackLinkedList) {
    let (lex, fwd) = build_forward_list(&[fam_raw()], &TextPipeline::english()).expect("valid fixture");
    let back = build_back_list(&fwd);
    (lex, fwd, back)
}
