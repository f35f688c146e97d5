//! From corpora to feature-bearing pair sets.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::corpus::{mine_pairs, Corpus, Label, Message, MinedPairs, PairFilterConfig, TacPair};
use crate::error::{Error, Result};
use crate::features::{
    build_lm_pair, build_personal_lms, build_rs_table, FeatureContext, PairFeatures,
    RequestWords, SentimentLexicon,
};
use crate::ngram_lm::Smoothing;
use crate::stats::ObservedPair;
use crate::textproc::TaggerModel;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ContextConfig {
    pub smoothing: Smoothing,
    pub rs_min_occurrences: usize,
}

impl Default for ContextConfig {
    fn default() -> Self {
        ContextConfig { smoothing: Smoothing::default(), rs_min_occurrences: 10 }
    }
}

/// Community and rs statistics from the unpaired corpus, headline models,
/// and per-author models over the paired corpus.
pub fn build_context(
    paired: &[Message],
    unpaired: &[Message],
    headlines: &[String],
    lexicon: SentimentLexicon,
    requests: RequestWords,
    tagger: Option<TaggerModel>,
    cfg: &ContextConfig,
) -> Result<FeatureContext> {
    let community_texts: Vec<&str> = unpaired
        .iter()
        .filter(|m| !m.is_retweet_like())
        .map(|m| m.text.as_str())
        .collect();
    if community_texts.is_empty() {
        return Err(Error::EmptyInput("community corpus"));
    }
    Ok(FeatureContext {
        community: Some(build_lm_pair(community_texts, cfg.smoothing)?),
        headline: Some(build_lm_pair(headlines.iter().map(|s| s.as_str()), cfg.smoothing)?),
        personal: build_personal_lms(paired, cfg.smoothing)?,
        rs: Some(build_rs_table(unpaired, cfg.rs_min_occurrences)?),
        lexicon,
        requests,
        tagger,
    })
}

/// Pairs with their extracted features, index-aligned.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub pairs: Vec<TacPair>,
    pub features: Vec<PairFeatures>,
}

impl Dataset {
    pub fn new(pairs: Vec<TacPair>, features: Vec<PairFeatures>) -> Result<Dataset> {
        if pairs.len() != features.len() {
            return Err(Error::Dimension { expected: pairs.len(), actual: features.len() });
        }
        Ok(Dataset { pairs, features })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn authors(&self) -> Vec<&str> {
        self.pairs.iter().map(|p| p.author_id()).collect()
    }

    pub fn author_set(&self) -> BTreeSet<&str> {
        self.pairs.iter().map(|p| p.author_id()).collect()
    }

    /// Gold labels; errors on an unlabeled pair.
    pub fn labels(&self) -> Result<Vec<Label>> {
        self.pairs
            .iter()
            .map(|p| p.label.ok_or_else(|| Error::Invalid(format!("pair {} has no label", p.key()))))
            .collect()
    }

    pub fn subset(&self, idx: &[usize]) -> Dataset {
        Dataset {
            pairs: idx.iter().map(|&i| self.pairs[i].clone()).collect(),
            features: idx.iter().map(|&i| self.features[i].clone()).collect(),
        }
    }

    /// Replace labels, e.g. with a permutation.
    pub fn with_labels(&self, labels: &[Label]) -> Dataset {
        let mut d = self.clone();
        for (p, l) in d.pairs.iter_mut().zip(labels) {
            p.label = Some(*l);
        }
        d
    }

    pub fn observed(&self) -> Vec<ObservedPair<'_>> {
        self.pairs
            .iter()
            .zip(&self.features)
            .map(|(p, f)| ObservedPair { v1: &f.custom1, v2: &f.custom2, label: p.label })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prepared {
    pub labeled: Dataset,
    pub preference: Dataset,
}

/// Mine pairs and extract features for the preference population; the
/// labeled set reuses those extractions.
pub fn prepare(paired: &Corpus, filter: &PairFilterConfig, ctx: &FeatureContext) -> Result<Prepared> {
    let MinedPairs { labeled, preference } = mine_pairs(paired, filter)?;
    let features: Vec<PairFeatures> = preference
        .iter()
        .map(|p| ctx.extract_pair(&p.t1, &p.t2))
        .collect::<Result<_>>()?;
    let by_key: BTreeMap<String, usize> = preference.iter().enumerate().map(|(i, p)| (p.key(), i)).collect();
    let labeled_features = labeled
        .iter()
        .map(|p| {
            by_key
                .get(&p.key())
                .map(|&i| features[i].clone())
                .ok_or_else(|| Error::Invalid(format!("labeled pair {} missing from preference set", p.key())))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Prepared {
        labeled: Dataset::new(labeled, labeled_features)?,
        preference: Dataset::new(preference, features)?,
    })
}
