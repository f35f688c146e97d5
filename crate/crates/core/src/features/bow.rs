//! Tagged bag-of-words features: (norm, tag) unigrams and adjacent bigrams.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::textproc::{Tag, Token};

pub type TaggedWord = (String, Tag);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BowVocabulary {
    pub min_count: usize,
    pub unigrams: Vec<TaggedWord>,
    pub bigrams: Vec<(TaggedWord, TaggedWord)>,
    #[serde(skip)]
    index: Option<Index>,
}

#[derive(Debug, Clone, PartialEq)]
struct Index {
    unigrams: HashMap<TaggedWord, usize>,
    bigrams: HashMap<(TaggedWord, TaggedWord), usize>,
}

fn tagged(t: &Token) -> TaggedWord {
    (t.norm.clone(), t.tag.unwrap_or(Tag::Other))
}

/// Sparse feature section: (index, value) with strictly increasing indices.
pub type Sparse = Vec<(usize, f64)>;

impl BowVocabulary {
    /// Count tagged unigrams (and bigrams when `with_bigrams`) over `docs`
    /// and keep items occurring more than `min_count` times.
    pub fn build<'a>(
        docs: impl IntoIterator<Item = &'a [Token]>,
        min_count: usize,
        with_bigrams: bool,
    ) -> Result<BowVocabulary> {
        let mut uni: BTreeMap<TaggedWord, usize> = BTreeMap::new();
        let mut bi: BTreeMap<(TaggedWord, TaggedWord), usize> = BTreeMap::new();
        let mut n_docs = 0;
        for doc in docs {
            n_docs += 1;
            for t in doc {
                *uni.entry(tagged(t)).or_insert(0) += 1;
            }
            if with_bigrams {
                for w in doc.windows(2) {
                    *bi.entry((tagged(&w[0]), tagged(&w[1]))).or_insert(0) += 1;
                }
            }
        }
        if n_docs == 0 {
            return Err(Error::EmptyInput("bag-of-words training data"));
        }
        let mut v = BowVocabulary {
            min_count,
            unigrams: uni.into_iter().filter(|(_, c)| *c > min_count).map(|(k, _)| k).collect(),
            bigrams: bi.into_iter().filter(|(_, c)| *c > min_count).map(|(k, _)| k).collect(),
            index: None,
        };
        v.reindex();
        Ok(v)
    }

    fn reindex(&mut self) {
        let n = self.unigrams.len();
        self.index = Some(Index {
            unigrams: self.unigrams.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect(),
            bigrams: self
                .bigrams
                .iter()
                .cloned()
                .enumerate()
                .map(|(i, k)| (k, n + i))
                .collect(),
        });
    }

    /// Rebuild lookup tables after deserialization.
    pub fn ready(mut self) -> Self {
        self.reindex();
        self
    }

    pub fn len(&self) -> usize {
        self.unigrams.len() + self.bigrams.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn feature_name(&self, i: usize) -> String {
        if i < self.unigrams.len() {
            let (w, t) = &self.unigrams[i];
            format!("{w}/{t}")
        } else {
            let ((a, ta), (b, tb)) = &self.bigrams[i - self.unigrams.len()];
            format!("{a}/{ta} {b}/{tb}")
        }
    }

    /// Counts of in-vocabulary items in a tagged token list.
    pub fn extract(&self, tokens: &[Token]) -> Sparse {
        let index = match &self.index {
            Some(ix) => ix,
            None => panic!("vocabulary used before ready()"),
        };
        let mut counts: BTreeMap<usize, f64> = BTreeMap::new();
        for t in tokens {
            if let Some(&i) = index.unigrams.get(&tagged(t)) {
                *counts.entry(i).or_insert(0.0) += 1.0;
            }
        }
        if !index.bigrams.is_empty() {
            for w in tokens.windows(2) {
                if let Some(&i) = index.bigrams.get(&(tagged(&w[0]), tagged(&w[1]))) {
                    *counts.entry(i).or_insert(0.0) += 1.0;
                }
            }
        }
        counts.into_iter().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(words: &[(&str, Tag)]) -> Vec<Token> {
        words
            .iter()
            .map(|(w, t)| {
                let mut tok = crate::textproc::tokenize(w).remove(0);
                tok.tag = Some(*t);
                tok
            })
            .collect()
    }

    #[test]
    fn strict_threshold() {
        let a = doc(&[("go", Tag::Verb)]);
        let docs: Vec<&[Token]> = std::iter::repeat_n(a.as_slice(), 11).collect();
        let v = BowVocabulary::build(docs.clone(), 10, true).unwrap();
        assert_eq!(v.unigrams.len(), 1);
        let v = BowVocabulary::build(docs[..10].iter().copied(), 10, true).unwrap();
        assert!(v.is_empty());
    }

    #[test]
    fn same_word_different_tag_is_distinct() {
        let a = doc(&[("watch", Tag::Verb), ("watch", Tag::CommonNoun)]);
        let v = BowVocabulary::build([a.as_slice()], 0, false).unwrap();
        assert_eq!(v.len(), 2);
        assert_eq!(v.feature_name(0), "watch/N");
    }

    #[test]
    fn extraction_counts_and_ignores_unknown() {
        let a = doc(&[("go", Tag::Verb), ("team", Tag::CommonNoun)]);
        let v = BowVocabulary::build([a.as_slice()], 0, true).unwrap();
        let b = doc(&[("go", Tag::Verb), ("go", Tag::Verb), ("home", Tag::CommonNoun)]);
        assert_eq!(v.extract(&b), vec![(0, 2.0)]);
        let c = doc(&[("nothing", Tag::CommonNoun)]);
        assert!(v.extract(&c).is_empty());
        assert_eq!(v.extract(&a), vec![(0, 1.0), (1, 1.0), (2, 1.0)]);
    }

    #[test]
    fn empty_input_rejected() {
        assert!(BowVocabulary::build(std::iter::empty::<&[Token]>(), 10, true).is_err());
    }

    #[test]
    fn serde_round_trip_needs_ready() {
        let a = doc(&[("go", Tag::Verb)]);
        let v = BowVocabulary::build([a.as_slice()], 0, true).unwrap();
        let back: BowVocabulary = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
        assert_eq!(back.ready(), v);
    }
}
