//! The fixed, ordered list of custom features.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Group {
    Lexicon,
    Informativeness,
    LanguageModel,
    RetweetScore,
    Readability,
}

impl Group {
    pub const ALL: [Group; 5] = [
        Group::Lexicon,
        Group::Informativeness,
        Group::LanguageModel,
        Group::RetweetScore,
        Group::Readability,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Group::Lexicon => "lexicon",
            Group::Informativeness => "informativeness",
            Group::LanguageModel => "lm",
            Group::RetweetScore => "rs",
            Group::Readability => "readability",
        }
    }

    pub fn from_name(s: &str) -> Option<Group> {
        Group::ALL.into_iter().find(|g| g.name() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FeatureSpec {
    pub index: usize,
    pub name: &'static str,
    pub group: Group,
    pub description: &'static str,
}

pub const N_CUSTOM: usize = 39;

macro_rules! registry {
    ($(($name:literal, $group:ident, $desc:literal)),* $(,)?) => {
        const ENTRIES: &[(&str, Group, &str)] = &[$(($name, Group::$group, $desc)),*];
    };
}

registry![
    ("rt", Lexicon, "verb-tagged occurrences of the request word 'rt'"),
    ("retweet", Lexicon, "verb-tagged occurrences of 'retweet'"),
    ("spread", Lexicon, "verb-tagged occurrences of 'spread'"),
    ("please", Lexicon, "verb-tagged occurrences of 'please'"),
    ("pls", Lexicon, "verb-tagged occurrences of 'pls'"),
    ("plz", Lexicon, "verb-tagged occurrences of 'plz'"),
    ("positive", Lexicon, "positive-lexicon word count"),
    ("negative", Lexicon, "negative-lexicon word count"),
    ("contrast", Lexicon, "1 when both positive and negative words occur"),
    ("pron_1st_sg", Lexicon, "first person singular pronoun count"),
    ("pron_1st_pl", Lexicon, "first person plural pronoun count"),
    ("pron_2nd", Lexicon, "second person pronoun count"),
    ("pron_3rd_sg", Lexicon, "third person singular pronoun count"),
    ("pron_3rd_pl", Lexicon, "third person plural pronoun count"),
    ("indefinite_article", Lexicon, "count of 'a' and 'an'"),
    ("definite_article", Lexicon, "count of 'the'"),
    ("length_chars", Informativeness, "length of the raw text in characters"),
    ("n_verb", Informativeness, "verb count"),
    ("n_noun", Informativeness, "common noun count"),
    ("n_adjective", Informativeness, "adjective count"),
    ("n_adverb", Informativeness, "adverb count"),
    ("n_proper_noun", Informativeness, "proper noun count"),
    ("n_number", Informativeness, "number count"),
    ("n_hashtag", Informativeness, "hashtag count"),
    ("n_mention", Informativeness, "@-mention count"),
    ("lm_twitter_uni", LanguageModel, "mean log-probability under the community unigram model"),
    ("lm_twitter_bi", LanguageModel, "mean log-probability under the community bigram model"),
    ("lm_personal_uni", LanguageModel, "mean log-probability under the author's unigram model"),
    ("lm_personal_bi", LanguageModel, "mean log-probability under the author's bigram model"),
    ("lm_headline_uni", LanguageModel, "mean log-probability under the headline unigram model"),
    ("lm_headline_bi", LanguageModel, "mean log-probability under the headline bigram model"),
    ("rs", RetweetScore, "max retweet score over all words"),
    ("rs_verb", RetweetScore, "max retweet score over verbs"),
    ("rs_noun", RetweetScore, "max retweet score over common nouns"),
    ("rs_adjective", RetweetScore, "max retweet score over adjectives"),
    ("rs_adverb", RetweetScore, "max retweet score over adverbs"),
    ("rs_proper_noun", RetweetScore, "max retweet score over proper nouns"),
    ("flesch_reading_ease", Readability, "Flesch reading ease"),
    ("negative_grade_level", Readability, "negated Flesch-Kincaid grade level"),
];

/// Published group sizes, in registry order.
pub const GROUP_SIZES: [(Group, usize); 5] = [
    (Group::Lexicon, 16),
    (Group::Informativeness, 9),
    (Group::LanguageModel, 6),
    (Group::RetweetScore, 6),
    (Group::Readability, 2),
];

pub fn registry() -> Vec<FeatureSpec> {
    ENTRIES
        .iter()
        .enumerate()
        .map(|(index, &(name, group, description))| FeatureSpec {
            index,
            name,
            group,
            description,
        })
        .collect()
}

pub fn feature_names() -> Vec<&'static str> {
    ENTRIES.iter().map(|e| e.0).collect()
}

pub fn feature_index(name: &str) -> Option<usize> {
    ENTRIES.iter().position(|e| e.0 == name)
}

pub fn feature_group(index: usize) -> Group {
    ENTRIES[index].1
}

/// Indices of a group's members.
pub fn group_members(group: Group) -> Vec<usize> {
    (0..N_CUSTOM).filter(|&i| ENTRIES[i].1 == group).collect()
}

/// Check count, group sizes and group contiguity against the published
/// layout.
pub fn check_registry() -> Result<(), String> {
    if ENTRIES.len() != N_CUSTOM {
        return Err(format!("registry has {} features, expected {N_CUSTOM}", ENTRIES.len()));
    }
    let mut start = 0;
    for (g, n) in GROUP_SIZES {
        if ENTRIES[start..start + n].iter().any(|e| e.1 != g) {
            return Err(format!("group {} is not {n} contiguous features", g.name()));
        }
        start += n;
    }
    let mut names: Vec<_> = feature_names();
    names.sort_unstable();
    names.dedup();
    if names.len() != N_CUSTOM {
        return Err("feature names are not unique".into());
    }
    Ok(())
}

/// Hex SHA-256 over the ordered `name:group` list. Model files record it so
/// a model is never applied to differently laid-out vectors.
pub fn registry_hash() -> String {
    let mut h = Sha256::new();
    for (name, group, _) in ENTRIES {
        h.update(name.as_bytes());
        h.update(b":");
        h.update(group.name().as_bytes());
        h.update(b"\n");
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub registry_hash: String,
    pub features: Vec<FeatureSpec>,
}

pub fn manifest() -> Manifest {
    Manifest {
        registry_hash: registry_hash(),
        features: registry(),
    }
}
