//! Single-message popularity classifier trained on the most and least
//! retweeted messages, applied to pairs by comparing scores.
//!
//! Columns: tagged unigram counts, log10(1 + followers), seven day-of-week
//! and 24 hour-of-day indicators taken from the timestamp in UTC.

use serde::{Deserialize, Serialize};

use super::logreg::{Example, LogRegModel};
use super::normalize::Normalizer;
use super::select::{train_with_cv, LambdaSelection, TrainConfig};
use crate::corpus::{Label, Message};
use crate::error::{Error, Result};
use crate::features::{BowVocabulary, Sparse};
use crate::textproc::Token;

pub const DAY_COLUMNS: usize = 7;
pub const HOUR_COLUMNS: usize = 24;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineConfig {
    pub min_count: usize,
    pub train: TrainConfig,
}

impl Default for BaselineConfig {
    fn default() -> Self {
        BaselineConfig {
            min_count: 10,
            train: TrainConfig { intercept: true, ..TrainConfig::default() },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineModel {
    pub vocab: BowVocabulary,
    pub normalizer: Normalizer,
    pub model: LogRegModel,
    pub selection: LambdaSelection,
}

/// A message with its tagged tokens.
#[derive(Debug, Clone, Copy)]
pub struct Scored<'a> {
    pub message: &'a Message,
    pub tokens: &'a [Token],
}

/// 0 = Sunday.
pub fn day_of_week(ts: i64) -> usize {
    (ts.div_euclid(86_400) + 4).rem_euclid(7) as usize
}

pub fn hour_of_day(ts: i64) -> usize {
    (ts.rem_euclid(86_400) / 3_600) as usize
}

/// The `k` most and `k` least retweeted messages that are neither
/// retweets nor replies. Ties break by id.
pub fn select_extremes(messages: &[Message], k: usize) -> Result<(Vec<&Message>, Vec<&Message>)> {
    let mut pool: Vec<&Message> = messages.iter().filter(|m| !m.is_retweet_like() && !m.is_reply()).collect();
    if pool.len() < 2 * k || k == 0 {
        return Err(Error::Invalid(format!(
            "need {} eligible messages for {k} top and {k} bottom, found {}",
            2 * k,
            pool.len()
        )));
    }
    pool.sort_by(|a, b| b.retweet_count.cmp(&a.retweet_count).then_with(|| a.id.cmp(&b.id)));
    let top = pool[..k].to_vec();
    let bottom = pool[pool.len() - k..].to_vec();
    Ok((top, bottom))
}

fn raw_row(vocab: &BowVocabulary, m: &Scored<'_>) -> Sparse {
    let v = vocab.len();
    let mut row = vocab.extract(m.tokens);
    row.push((v, (1.0 + m.message.follower_count as f64).log10()));
    row.push((v + 1 + day_of_week(m.message.timestamp), 1.0));
    row.push((v + 1 + DAY_COLUMNS + hour_of_day(m.message.timestamp), 1.0));
    row
}

fn dim(vocab: &BowVocabulary) -> usize {
    vocab.len() + 1 + DAY_COLUMNS + HOUR_COLUMNS
}

impl BaselineModel {
    pub fn ready(self) -> Self {
        BaselineModel { vocab: self.vocab.ready(), ..self }
    }

    fn encode(&self, m: &Scored<'_>) -> Sparse {
        raw_row(&self.vocab, m)
            .into_iter()
            .map(|(j, v)| (j, self.normalizer.apply(j, v)))
            .collect()
    }

    /// Linear score of one message.
    pub fn score(&self, m: &Scored<'_>) -> Result<f64> {
        self.model.margin(&self.encode(m))
    }

    /// T2 wins when its score is at least t1's.
    pub fn predict_pair(&self, t1: &Scored<'_>, t2: &Scored<'_>) -> Result<Label> {
        Ok(if self.score(t2)? >= self.score(t1)? { Label::T2Wins } else { Label::T1Wins })
    }
}

/// Fit on labeled single messages (true = popular).
pub fn train_baseline_labeled(data: &[(Scored<'_>, bool)], cfg: &BaselineConfig) -> Result<BaselineModel> {
    if data.is_empty() {
        return Err(Error::EmptyInput("baseline training messages"));
    }
    let vocab = BowVocabulary::build(data.iter().map(|(m, _)| m.tokens), cfg.min_count, false)?;
    let raw: Vec<Sparse> = data.iter().map(|(m, _)| raw_row(&vocab, m)).collect();
    let d = dim(&vocab);
    let normalizer = Normalizer::fit(&raw, d)?;
    let examples: Vec<Example> = raw
        .into_iter()
        .zip(data)
        .map(|(row, (_, y))| Example {
            x: row.into_iter().map(|(j, v)| (j, normalizer.apply(j, v))).collect(),
            y: *y as u8 as f64,
        })
        .collect();
    let groups: Vec<&str> = data.iter().map(|(m, _)| m.message.author_id.as_str()).collect();
    let (model, selection) = train_with_cv(&examples, d, &groups, &cfg.train)?;
    Ok(BaselineModel { vocab, normalizer, model, selection })
}

pub fn train_baseline(top: &[Scored<'_>], bottom: &[Scored<'_>], cfg: &BaselineConfig) -> Result<BaselineModel> {
    if top.is_empty() || bottom.is_empty() {
        return Err(Error::SingleClass);
    }
    let data: Vec<(Scored<'_>, bool)> = top
        .iter()
        .map(|m| (*m, true))
        .chain(bottom.iter().map(|m| (*m, false)))
        .collect();
    train_baseline_labeled(&data, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn calendar_cells() {
        assert_eq!(day_of_week(0), 4);
        assert_eq!(hour_of_day(0), 0);
        assert_eq!(day_of_week(3 * 86_400), 0);
        assert_eq!(hour_of_day(86_399), 23);
        assert_eq!(day_of_week(-1), 3);
        assert_eq!(hour_of_day(-1), 23);
    }
}
