//! Word lists behind the lexicon features.
//!
//! Sentiment lexicon file: one `word<TAB>polarity` per line with polarity
//! `positive` or `negative`; `#` lines are comments. Request-word file: one
//! `feature<TAB>surface` per line, where `feature` is one of `rt`,
//! `retweet`, `spread`, `please`, `pls`, `plz`. Matching is on lowercased
//! token norms.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Polarity {
    Positive,
    Negative,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentimentLexicon {
    words: BTreeMap<String, Polarity>,
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
}

impl SentimentLexicon {
    pub fn parse(text: &str) -> Result<SentimentLexicon> {
        let mut words = BTreeMap::new();
        for (n, line) in data_lines(text) {
            let (w, p) = line
                .split_once('\t')
                .ok_or_else(|| Error::Parse(format!("lexicon line {n}: expected word<TAB>polarity")))?;
            let p = match p.trim() {
                "positive" => Polarity::Positive,
                "negative" => Polarity::Negative,
                other => {
                    return Err(Error::Parse(format!("lexicon line {n}: unknown polarity {other:?}")))
                }
            };
            words.insert(w.trim().to_lowercase(), p);
        }
        Ok(SentimentLexicon { words })
    }

    pub fn from_words<'a>(words: impl IntoIterator<Item = (&'a str, Polarity)>) -> SentimentLexicon {
        SentimentLexicon {
            words: words.into_iter().map(|(w, p)| (w.to_lowercase(), p)).collect(),
        }
    }

    /// The bundled general-purpose polarity list.
    pub fn bundled() -> SentimentLexicon {
        SentimentLexicon::parse(include_str!("../../data/sentiment_lexicon.tsv"))
            .expect("bundled lexicon parses")
    }

    pub fn polarity(&self, norm: &str) -> Option<Polarity> {
        self.words.get(norm).copied()
    }

    pub fn insert(&mut self, word: &str, polarity: Polarity) {
        self.words.insert(word.to_lowercase(), polarity);
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn to_tsv(&self) -> String {
        let mut s = String::new();
        for (w, p) in &self.words {
            let p = match p {
                Polarity::Positive => "positive",
                Polarity::Negative => "negative",
            };
            s.push_str(&format!("{w}\t{p}\n"));
        }
        s
    }
}

pub const REQUEST_FEATURES: [&str; 6] = ["rt", "retweet", "spread", "please", "pls", "plz"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RequestWords {
    /// Surface form → request feature slot.
    forms: BTreeMap<String, usize>,
}

impl Default for RequestWords {
    fn default() -> Self {
        RequestWords {
            forms: REQUEST_FEATURES
                .iter()
                .enumerate()
                .map(|(i, w)| (w.to_string(), i))
                .collect(),
        }
    }
}

impl RequestWords {
    pub fn parse(text: &str) -> Result<RequestWords> {
        let mut forms = BTreeMap::new();
        for (n, line) in data_lines(text) {
            let (f, w) = line
                .split_once('\t')
                .ok_or_else(|| Error::Parse(format!("request line {n}: expected feature<TAB>surface")))?;
            let slot = REQUEST_FEATURES
                .iter()
                .position(|x| *x == f.trim())
                .ok_or_else(|| Error::Parse(format!("request line {n}: unknown feature {f:?}")))?;
            forms.insert(w.trim().to_lowercase(), slot);
        }
        Ok(RequestWords { forms })
    }

    pub fn slot(&self, norm: &str) -> Option<usize> {
        self.forms.get(norm).copied()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PronounClass {
    FirstSingular,
    FirstPlural,
    Second,
    ThirdSingular,
    ThirdPlural,
}

const FIRST_SG: &[&str] = &[
    "i", "me", "my", "mine", "myself", "i'm", "im", "i've", "ive", "i'll", "i'd",
];
const FIRST_PL: &[&str] = &["we", "us", "our", "ours", "ourselves", "we're", "we've", "we'll", "we'd"];
const SECOND: &[&str] = &[
    "you", "your", "yours", "yourself", "yourselves", "u", "ur", "ya", "y'all", "yall", "you're",
    "youre", "you've", "you'll", "you'd",
];
const THIRD_SG: &[&str] = &[
    "he", "him", "his", "himself", "she", "her", "hers", "herself", "he's", "she's", "he'll",
    "she'll", "he'd", "she'd",
];
const THIRD_PL: &[&str] = &[
    "they", "them", "their", "theirs", "themselves", "they're", "they've", "they'll", "they'd",
];

/// Person and number of a pronoun norm. "it" and its forms are not counted.
pub fn pronoun_class(norm: &str) -> Option<PronounClass> {
    let n = norm.replace('’', "'");
    let n = n.as_str();
    if FIRST_SG.contains(&n) {
        Some(PronounClass::FirstSingular)
    } else if FIRST_PL.contains(&n) {
        Some(PronounClass::FirstPlural)
    } else if SECOND.contains(&n) {
        Some(PronounClass::Second)
    } else if THIRD_SG.contains(&n) {
        Some(PronounClass::ThirdSingular)
    } else if THIRD_PL.contains(&n) {
        Some(PronounClass::ThirdPlural)
    } else {
        None
    }
}
