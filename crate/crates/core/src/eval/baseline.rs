//! The single-message popularity baseline: training sets drawn from the
//! retweet extremes of an unpaired corpus, and its own cross-validation.

use serde::{Deserialize, Serialize};

use super::experiment::par_map;
use crate::corpus::Message;
use crate::error::{Error, Result};
use crate::features::FeatureContext;
use crate::model::{grouped_folds, select_extremes, train_baseline_labeled, BaselineConfig, BaselineModel, Scored};
use crate::textproc::Token;

/// Most retweeted messages (popular) followed by least retweeted ones,
/// with their tagged tokens.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtremeSet {
    pub messages: Vec<Message>,
    pub tokens: Vec<Vec<Token>>,
    pub popular: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MessageCvReport {
    pub accuracy: f64,
    pub fold_accuracies: Vec<f64>,
    pub n: usize,
    pub seed: u64,
}

impl ExtremeSet {
    pub fn select(ctx: &FeatureContext, messages: &[Message], k: usize) -> Result<ExtremeSet> {
        let (top, bottom) = select_extremes(messages, k)?;
        let mut set = ExtremeSet { messages: Vec::new(), tokens: Vec::new(), popular: Vec::new() };
        for (group, popular) in [(top, true), (bottom, false)] {
            for m in group {
                set.tokens.push(ctx.analyze(&m.text)?.tokens);
                set.messages.push(m.clone());
                set.popular.push(popular);
            }
        }
        Ok(set)
    }

    pub fn len(&self) -> usize {
        self.messages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.messages.is_empty()
    }

    fn rows(&self, idx: &[usize]) -> Vec<(Scored<'_>, bool)> {
        idx.iter()
            .map(|&i| (Scored { message: &self.messages[i], tokens: &self.tokens[i] }, self.popular[i]))
            .collect()
    }

    pub fn train(&self, cfg: &BaselineConfig) -> Result<BaselineModel> {
        let all: Vec<usize> = (0..self.len()).collect();
        train_baseline_labeled(&self.rows(&all), cfg)
    }

    /// Grouped-by-author k-fold accuracy at telling popular from unpopular
    /// messages; a message is called popular when its score is ≥ 0.
    pub fn cross_validate(&self, folds: usize, seed: u64, cfg: &BaselineConfig) -> Result<MessageCvReport> {
        if folds < 2 {
            return Err(Error::Config(format!("need at least 2 folds, got {folds}")));
        }
        let authors: Vec<&str> = self.messages.iter().map(|m| m.author_id.as_str()).collect();
        let fold_of = grouped_folds(&authors, folds, seed)?;
        let ks: Vec<usize> = (0..folds).collect();
        let outcomes = par_map(&ks, |&f| -> Result<f64> {
            let (train, test): (Vec<usize>, Vec<usize>) = (0..self.len()).partition(|&i| fold_of[i] != f);
            let mut fold_cfg = cfg.clone();
            fold_cfg.train.seed = cfg.train.seed.wrapping_add(f as u64);
            let model = train_baseline_labeled(&self.rows(&train), &fold_cfg)?;
            let mut right = 0usize;
            for (m, popular) in self.rows(&test) {
                if (model.score(&m)? >= 0.0) == popular {
                    right += 1;
                }
            }
            Ok(right as f64 / test.len().max(1) as f64)
        });
        let fold_accuracies = outcomes.into_iter().collect::<Result<Vec<f64>>>()?;
        Ok(MessageCvReport {
            accuracy: fold_accuracies.iter().sum::<f64>() / folds as f64,
            fold_accuracies,
            n: self.len(),
            seed,
        })
    }
}
