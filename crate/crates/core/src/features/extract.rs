//! The feature context and custom-feature extraction.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::bow::BowVocabulary;
use super::lexicon::{pronoun_class, Polarity, PronounClass, RequestWords, SentimentLexicon};
use super::readability::{flesch_reading_ease, negative_grade_level, text_counts};
use super::registry::N_CUSTOM;
use super::rs_table::{is_rs_word, RetweetScoreTable};
use crate::corpus::{Message, TacPair};
use crate::error::{Error, Result};
use crate::ngram_lm::{LmPair, Smoothing};
use crate::textproc::{analyze, tokenize, Category, Tag, TaggerModel, Token};

/// Everything extraction needs besides the message itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureContext {
    pub community: Option<LmPair>,
    pub headline: Option<LmPair>,
    /// Author id → models over that author's messages.
    #[serde(default)]
    pub personal: BTreeMap<String, LmPair>,
    pub rs: Option<RetweetScoreTable>,
    pub lexicon: SentimentLexicon,
    pub requests: RequestWords,
    /// `None` selects the built-in tagger.
    #[serde(default)]
    pub tagger: Option<TaggerModel>,
}

impl Default for FeatureContext {
    fn default() -> Self {
        FeatureContext {
            community: None,
            headline: None,
            personal: BTreeMap::new(),
            rs: None,
            lexicon: SentimentLexicon::bundled(),
            requests: RequestWords::default(),
            tagger: None,
        }
    }
}

/// A message's text with its tagged tokens.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Analyzed {
    pub text: String,
    pub tokens: Vec<Token>,
}

impl Analyzed {
    pub fn norms(&self) -> Vec<String> {
        self.tokens.iter().map(|t| t.norm.clone()).collect()
    }
}

/// Where personal language-model scores come from.
#[derive(Debug, Clone, Copy)]
pub enum Personal<'a> {
    /// The context's model for this author, with the listed texts' counts
    /// removed (leave-pair-out).
    Author {
        id: &'a str,
        exclude: &'a [&'a [String]],
    },
    /// Models trained on an explicit history.
    History(&'a LmPair),
    /// No history; the community model stands in.
    Absent,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Extraction {
    pub values: Vec<f64>,
    /// Personal-LM features were computed with the community model.
    pub personal_fallback: bool,
}

impl FeatureContext {
    pub fn analyze(&self, text: &str) -> Result<Analyzed> {
        let tokens = match &self.tagger {
            Some(t) => analyze(text, t)?,
            None => analyze(text, &TaggerModel::builtin())?,
        };
        Ok(Analyzed {
            text: text.to_string(),
            tokens,
        })
    }

    pub fn analyze_many(&self, texts: &[&str]) -> Result<Vec<Analyzed>> {
        texts.iter().map(|t| self.analyze(t)).collect()
    }

    fn check(&self) -> Result<(&LmPair, &LmPair, &RetweetScoreTable)> {
        let community = self.community.as_ref().ok_or(Error::MissingContext("community language model"))?;
        let headline = self.headline.as_ref().ok_or(Error::MissingContext("headline language model"))?;
        let rs = self.rs.as_ref().ok_or(Error::MissingContext("retweet score table"))?;
        Ok((community, headline, rs))
    }

    /// The 39 custom feature values of an analyzed message, in registry order.
    pub fn extract_custom(&self, msg: &Analyzed, personal: Personal<'_>) -> Result<Extraction> {
        let (community, headline, rs_table) = self.check()?;
        let toks = &msg.tokens;
        let norms = msg.norms();
        let mut v = vec![0.0; N_CUSTOM];

        // Lexicon group.
        let (mut pos, mut neg) = (0.0, 0.0);
        for t in toks {
            if t.tag == Some(Tag::Verb) {
                if let Some(slot) = self.requests.slot(&t.norm) {
                    v[slot] += 1.0;
                }
            }
            match self.lexicon.polarity(&t.norm) {
                Some(Polarity::Positive) => pos += 1.0,
                Some(Polarity::Negative) => neg += 1.0,
                None => {}
            }
            if let Some(c) = pronoun_class(&t.norm) {
                let i = match c {
                    PronounClass::FirstSingular => 9,
                    PronounClass::FirstPlural => 10,
                    PronounClass::Second => 11,
                    PronounClass::ThirdSingular => 12,
                    PronounClass::ThirdPlural => 13,
                };
                v[i] += 1.0;
            }
            match t.norm.as_str() {
                "a" | "an" => v[14] += 1.0,
                "the" => v[15] += 1.0,
                _ => {}
            }
        }
        v[6] = pos;
        v[7] = neg;
        v[8] = (pos >= 1.0 && neg >= 1.0) as u8 as f64;

        // Informativeness group.
        v[16] = msg.text.chars().count() as f64;
        for t in toks {
            let i = match t.tag.map(Tag::category) {
                Some(Category::Verb) => 17,
                Some(Category::Noun) => 18,
                Some(Category::Adjective) => 19,
                Some(Category::Adverb) => 20,
                Some(Category::ProperNoun) => 21,
                Some(Category::Number) => 22,
                Some(Category::Hashtag) => 23,
                Some(Category::Mention) => 24,
                _ => continue,
            };
            v[i] += 1.0;
        }

        // Language-model group.
        let (u, b) = community.score(&norms);
        v[25] = u.value;
        v[26] = b.value;
        let (pu, pb, fallback) = match personal {
            Personal::Author { id, exclude } => match self.personal.get(id) {
                Some(lm) => match (
                    lm.unigram.score_excluding(&norms, exclude),
                    lm.bigram.score_excluding(&norms, exclude),
                ) {
                    (Some(pu), Some(pb)) => (pu.value, pb.value, false),
                    _ => (u.value, b.value, true),
                },
                None => (u.value, b.value, true),
            },
            Personal::History(lm) if lm.unigram.total() > 0 => {
                let (pu, pb) = lm.score(&norms);
                (pu.value, pb.value, false)
            }
            Personal::History(_) | Personal::Absent => (u.value, b.value, true),
        };
        v[27] = pu;
        v[28] = pb;
        let (hu, hb) = headline.score(&norms);
        v[29] = hu.value;
        v[30] = hb.value;

        // Retweet-score group: maxima over words, overall and per category.
        for t in toks.iter().filter(|t| is_rs_word(t)) {
            let Some(s) = rs_table.get(&t.norm) else { continue };
            v[31] = f64::max(v[31], s);
            let i = match t.tag.map(Tag::category) {
                Some(Category::Verb) => 32,
                Some(Category::Noun) => 33,
                Some(Category::Adjective) => 34,
                Some(Category::Adverb) => 35,
                Some(Category::ProperNoun) => 36,
                _ => continue,
            };
            v[i] = f64::max(v[i], s);
        }

        // Readability group.
        let counts = text_counts(toks);
        v[37] = flesch_reading_ease(counts);
        v[38] = negative_grade_level(counts);

        if let Some(i) = v.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { row: 0, column: i });
        }
        Ok(Extraction {
            values: v,
            personal_fallback: fallback,
        })
    }

    /// Analyze and extract both members of a pair, scoring personal models
    /// with both members left out.
    pub fn extract_pair(&self, t1: &Message, t2: &Message) -> Result<PairFeatures> {
        let a1 = self.analyze(&t1.text)?;
        let a2 = self.analyze(&t2.text)?;
        let (n1, n2) = (a1.norms(), a2.norms());
        let exclude: [&[String]; 2] = [&n1, &n2];
        let personal = Personal::Author {
            id: &t1.author_id,
            exclude: &exclude,
        };
        let e1 = self.extract_custom(&a1, personal)?;
        let e2 = self.extract_custom(&a2, personal)?;
        Ok(PairFeatures {
            custom1: e1.values,
            custom2: e2.values,
            tokens1: a1.tokens,
            tokens2: a2.tokens,
            personal_fallback: e1.personal_fallback || e2.personal_fallback,
        })
    }

    /// The same context without per-author models, for persistence next to a
    /// trained classifier.
    pub fn without_personal(&self) -> FeatureContext {
        FeatureContext {
            personal: BTreeMap::new(),
            ..self.clone()
        }
    }
}

/// Raw custom features and tagged tokens of both pair members.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairFeatures {
    pub custom1: Vec<f64>,
    pub custom2: Vec<f64>,
    pub tokens1: Vec<Token>,
    pub tokens2: Vec<Token>,
    pub personal_fallback: bool,
}

/// Per-author unigram and bigram models over message token norms.
pub fn build_personal_lms(messages: &[Message], smoothing: Smoothing) -> Result<BTreeMap<String, LmPair>> {
    let mut out: BTreeMap<String, LmPair> = BTreeMap::new();
    for m in messages {
        let norms: Vec<String> = tokenize(&m.text).into_iter().map(|t| t.norm).collect();
        match out.get_mut(&m.author_id) {
            Some(lm) => lm.add(&norms),
            None => {
                let mut lm = LmPair::new(smoothing)?;
                lm.add(&norms);
                out.insert(m.author_id.clone(), lm);
            }
        }
    }
    Ok(out)
}

/// Unigram and bigram models over tokenized texts.
pub fn build_lm_pair<'a>(texts: impl IntoIterator<Item = &'a str>, smoothing: Smoothing) -> Result<LmPair> {
    LmPair::train(
        texts
            .into_iter()
            .map(|t| tokenize(t).into_iter().map(|t| t.norm).collect::<Vec<_>>()),
        smoothing,
    )
}

/// Vocabulary over both members of every training pair.
pub fn build_bow_vocab(pairs: &[&PairFeatures], min_count: usize, with_bigrams: bool) -> Result<BowVocabulary> {
    if pairs.is_empty() {
        return Err(Error::EmptyInput("training pairs"));
    }
    BowVocabulary::build(
        pairs
            .iter()
            .flat_map(|p| [p.tokens1.as_slice(), p.tokens2.as_slice()]),
        min_count,
        with_bigrams,
    )
}

/// Convenience for callers holding TAC pairs.
pub fn extract_pairs(ctx: &FeatureContext, pairs: &[TacPair]) -> Result<Vec<PairFeatures>> {
    pairs.iter().map(|p| ctx.extract_pair(&p.t1, &p.t2)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::registry::feature_index;
    use crate::features::rs_table::build_rs_table;

    fn ctx() -> FeatureContext {
        let texts = ["please retweet this news", "the cat sat", "big game tonight"];
        let msgs: Vec<Message> = (0..12)
            .map(|i| Message::new(format!("{i}"), "a", 0, texts[i % 3], (i % 4) as u64, 10, false))
            .collect();
        FeatureContext {
            community: Some(build_lm_pair(texts, Smoothing::default()).unwrap()),
            headline: Some(build_lm_pair(["Big Game Tonight"], Smoothing::default()).unwrap()),
            rs: Some(build_rs_table(&msgs, 3).unwrap()),
            ..FeatureContext::default()
        }
    }

    fn value(e: &Extraction, name: &str) -> f64 {
        e.values[feature_index(name).unwrap()]
    }

    #[test]
    fn request_counts_need_verb_tags() {
        let c = ctx();
        let mut a = c.analyze("Please retweet this").unwrap();
        for t in &mut a.tokens[..2] {
            t.tag = Some(Tag::Verb);
        }
        let e = c.extract_custom(&a, Personal::Absent).unwrap();
        assert_eq!(value(&e, "please"), 1.0);
        assert_eq!(value(&e, "retweet"), 1.0);
        assert_eq!(value(&e, "rt"), 0.0);
        a.tokens[0].tag = Some(Tag::Interjection);
        let e = c.extract_custom(&a, Personal::Absent).unwrap();
        assert_eq!(value(&e, "please"), 0.0);
        assert!(e.personal_fallback);
    }

    #[test]
    fn readability_values() {
        let c = ctx();
        let e = c.extract_custom(&c.analyze("The cat sat.").unwrap(), Personal::Absent).unwrap();
        assert!((value(&e, "flesch_reading_ease") - 119.19).abs() < 1e-9);
        assert!((value(&e, "negative_grade_level") - 2.62).abs() < 1e-9);
        assert_eq!(value(&e, "definite_article"), 1.0);
        assert_eq!(value(&e, "length_chars"), 12.0);
    }

    #[test]
    fn rs_defaults_to_zero() {
        let c = ctx();
        let e = c.extract_custom(&c.analyze("zebra quokka").unwrap(), Personal::Absent).unwrap();
        for name in ["rs", "rs_verb", "rs_noun", "rs_adjective", "rs_adverb", "rs_proper_noun"] {
            assert_eq!(value(&e, name), 0.0);
        }
    }

    #[test]
    fn contrast_needs_both_polarities() {
        let c = ctx();
        let e = c.extract_custom(&c.analyze("great game but awful refs").unwrap(), Personal::Absent).unwrap();
        assert_eq!((value(&e, "positive"), value(&e, "negative"), value(&e, "contrast")), (1.0, 1.0, 1.0));
        let e = c.extract_custom(&c.analyze("great great game").unwrap(), Personal::Absent).unwrap();
        assert_eq!((value(&e, "positive"), value(&e, "contrast")), (2.0, 0.0));
    }

    #[test]
    fn missing_context_is_an_error() {
        let c = FeatureContext::default();
        let a = c.analyze("hi").unwrap();
        assert!(matches!(c.extract_custom(&a, Personal::Absent), Err(Error::MissingContext(_))));
    }

    #[test]
    fn pair_extraction_leaves_pair_out() {
        let mut c = ctx();
        let t1 = Message::new("1", "a", 0, "big news today", 1, 9000, false);
        let t2 = Message::new("2", "a", 60, "huge news today", 5, 9000, false);
        let other = Message::new("3", "a", 99, "news from the game", 0, 9000, false);
        c.personal = build_personal_lms(&[t1.clone(), t2.clone(), other.clone()], Smoothing::default()).unwrap();
        let pf = c.extract_pair(&t1, &t2).unwrap();
        assert!(!pf.personal_fallback);
        let only_other = build_lm_pair([other.text.as_str()], Smoothing::default()).unwrap();
        let want = only_other.score(&tokenize(&t1.text).into_iter().map(|t| t.norm).collect::<Vec<_>>());
        let i = feature_index("lm_personal_uni").unwrap();
        assert!((pf.custom1[i] - want.0.value).abs() < 1e-12);

        c.personal = build_personal_lms(&[t1.clone(), t2.clone()], Smoothing::default()).unwrap();
        assert!(c.extract_pair(&t1, &t2).unwrap().personal_fallback);
    }
}
