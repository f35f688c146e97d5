//! Tokenization, normalization, tagging and syllable counting.

mod syllables;
mod tagger;
mod tagset;
mod tokenize;

pub use syllables::count_syllables;
pub use tagger::{
    accuracy, analyze, read_annotated, tag, train_tagger, write_annotated, TaggedSentence,
    TaggerModel, TAGGER_FORMAT_VERSION,
};
pub use tagset::{Category, Tag};
pub use tokenize::{
    canonical_url, extract_urls, norms, tokenize, Token, TokenKind, HASHTAG_NORM, MENTION_NORM,
    NUMBER_NORM, URL_NORM,
};

