//! Message corpora and controlled pair construction.

mod message;
mod pairs;
mod similarity;

pub use message::{
    format_corpus, format_record, ingest, parse_corpus, save_corpus, Corpus, Message,
    CORPUS_HEADER, CORPUS_SCHEMA, MAX_MALFORMED_FRACTION,
};
pub use pairs::{
    build_identical_pairs, build_identical_pairs_with, build_tac_pairs, format_pairs, mine_pairs,
    mine_pairs_with, percentile_bounds, similarity_threshold, stopword_fraction, DiffMode, Label,
    LanguageFilter, MinedPairs, PairFilterConfig, TacPair, PAIR_EXPORT_HEADER,
};
pub use similarity::tf_cosine;
