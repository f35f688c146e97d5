//! Custom and bag-of-words features.

mod bow;
mod extract;
mod lexicon;
mod readability;
mod registry;
mod rs_table;

pub use bow::{BowVocabulary, Sparse, TaggedWord};
pub use extract::{
    build_bow_vocab, build_lm_pair, build_personal_lms, extract_pairs, Analyzed, Extraction,
    FeatureContext, PairFeatures, Personal,
};
pub use lexicon::{
    pronoun_class, Polarity, PronounClass, RequestWords, SentimentLexicon, REQUEST_FEATURES,
};
pub use readability::{flesch_reading_ease, negative_grade_level, text_counts, TextCounts};
pub use registry::{
    check_registry, feature_group, feature_index, feature_names, group_members, manifest,
    registry, registry_hash, FeatureSpec, Group, Manifest, GROUP_SIZES, N_CUSTOM,
};
pub use rs_table::{build_rs_table, is_rs_word, RetweetScoreTable};
