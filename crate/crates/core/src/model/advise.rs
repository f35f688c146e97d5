//! Compare alternative phrasings of one message with a loaded model.

use serde::{Deserialize, Serialize};

use super::bundle::{ModelBundle, Predictor};
use crate::corpus::Message;
use crate::error::{Error, Result};
use crate::features::{build_lm_pair, feature_group, feature_names, Analyzed, Group, PairFeatures, Personal};
use crate::ngram_lm::LmPair;

pub const MIN_VARIANTS: usize = 2;
pub const MAX_VARIANTS: usize = 5;

/// One ordered matchup: the probability that variant `i` beats variant `j`
/// and the signed margin contributions toward `i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matchup {
    pub i: usize,
    pub j: usize,
    pub p_i_wins: f64,
    /// Per custom-feature group, in the fixed group order. Empty for models
    /// without a linear pair classifier.
    pub groups: Vec<(String, f64)>,
    pub bow: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariantComparison {
    pub model_version: String,
    pub condition: String,
    /// `probabilities[i][j]` is the chance that `i` beats `j`; the diagonal
    /// is 0.5.
    pub probabilities: Vec<Vec<f64>>,
    /// Sum of each variant's win probabilities over its matchups.
    pub scores: Vec<f64>,
    /// Highest score; ties go to the lower index.
    pub winner: usize,
    /// Every ordered matchup with `i != j`, row-major.
    pub matchups: Vec<Matchup>,
    /// Personal language-model features came from the community model.
    pub personal_fallback: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureValue {
    pub name: String,
    pub group: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureBreakdown {
    pub features: Vec<FeatureValue>,
    pub personal_fallback: bool,
}

fn history_lm(bundle: &ModelBundle, history: Option<&[String]>) -> Result<Option<LmPair>> {
    let texts = match history {
        Some(h) if h.iter().any(|t| !t.trim().is_empty()) => h,
        _ => return Ok(None),
    };
    let smoothing = bundle
        .context
        .community
        .as_ref()
        .ok_or(Error::MissingContext("community language model"))?
        .unigram
        .smoothing();
    build_lm_pair(texts.iter().map(|s| s.as_str()).filter(|s| !s.trim().is_empty()), smoothing).map(Some)
}

fn check_texts(texts: &[String], min: usize) -> Result<()> {
    if texts.len() < min || texts.len() > MAX_VARIANTS {
        return Err(Error::Invalid(format!(
            "expected {min} to {MAX_VARIANTS} variants, got {}",
            texts.len()
        )));
    }
    if let Some(i) = texts.iter().position(|t| t.trim().is_empty()) {
        return Err(Error::Invalid(format!("variant {i} is empty")));
    }
    Ok(())
}

struct Extracted {
    analyzed: Analyzed,
    values: Vec<f64>,
    fallback: bool,
}

fn extract_all(bundle: &ModelBundle, texts: &[String], history: Option<&[String]>) -> Result<Vec<Extracted>> {
    let lm = history_lm(bundle, history)?;
    let personal = match &lm {
        Some(lm) => Personal::History(lm),
        None => Personal::Absent,
    };
    texts
        .iter()
        .map(|t| {
            let analyzed = bundle.context.analyze(t)?;
            let e = bundle.context.extract_custom(&analyzed, personal)?;
            Ok(Extracted { analyzed, values: e.values, fallback: e.personal_fallback })
        })
        .collect()
}

/// The 39 raw custom feature values of one text.
pub fn feature_breakdown(bundle: &ModelBundle, text: &str, history: Option<&[String]>) -> Result<FeatureBreakdown> {
    let texts = [text.to_string()];
    check_texts(&texts, 1)?;
    let e = extract_all(bundle, &texts, history)?.remove(0);
    let features = feature_names()
        .iter()
        .enumerate()
        .map(|(i, n)| FeatureValue {
            name: n.to_string(),
            group: feature_group(i).name().to_string(),
            value: e.values[i],
        })
        .collect();
    Ok(FeatureBreakdown { features, personal_fallback: e.fallback })
}

/// Score every ordered pair of 2 to 5 variants. Variants carry no
/// metadata, so the baseline compares text alone.
pub fn compare_variants(bundle: &ModelBundle, texts: &[String], history: Option<&[String]>) -> Result<VariantComparison> {
    check_texts(texts, MIN_VARIANTS)?;
    let ex = extract_all(bundle, texts, history)?;
    let k = texts.len();
    let messages: Vec<Message> = texts
        .iter()
        .enumerate()
        .map(|(i, t)| Message::new(format!("v{i}"), "advisor", 0, t.as_str(), 0, 0, false))
        .collect();
    let mut probabilities = vec![vec![0.5; k]; k];
    let mut matchups = Vec::with_capacity(k * (k - 1));
    for i in 0..k {
        for j in 0..k {
            if i == j {
                continue;
            }
            // i plays the later member, so "t2 wins" means "i wins".
            let f = PairFeatures {
                custom1: ex[j].values.clone(),
                custom2: ex[i].values.clone(),
                tokens1: ex[j].analyzed.tokens.clone(),
                tokens2: ex[i].analyzed.tokens.clone(),
                personal_fallback: ex[i].fallback || ex[j].fallback,
            };
            let p = bundle.predictor.predict_members(&messages[j], &messages[i], &f)?;
            let (groups, bow) = match &bundle.predictor {
                Predictor::Pair(pp) => {
                    let c = pp.contributions(&f)?;
                    (c.groups, c.bow)
                }
                _ => (Vec::new(), 0.0),
            };
            probabilities[i][j] = p;
            matchups.push(Matchup { i, j, p_i_wins: p, groups, bow });
        }
    }
    let scores: Vec<f64> = (0..k)
        .map(|i| (0..k).filter(|&j| j != i).map(|j| probabilities[i][j]).sum())
        .collect();
    let mut winner = 0;
    for i in 1..k {
        if scores[i] > scores[winner] {
            winner = i;
        }
    }
    Ok(VariantComparison {
        model_version: bundle.format.clone(),
        condition: bundle.condition.clone(),
        probabilities,
        scores,
        winner,
        matchups,
        personal_fallback: ex.iter().any(|e| e.fallback),
    })
}

/// Group names in contribution order.
pub fn group_names() -> Vec<&'static str> {
    Group::ALL.iter().map(|g| g.name()).collect()
}
