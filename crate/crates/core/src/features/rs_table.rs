//! Retweet scores: for a word w, the fraction of unpaired messages
//! containing w that were retweeted more than once.

use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::corpus::Message;
use crate::error::{Error, Result};
use crate::textproc::{tokenize, Token, TokenKind};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RetweetScoreTable {
    pub min_occurrences: usize,
    pub rs: BTreeMap<String, f64>,
    /// Messages used after dropping retweets and replies.
    pub source_messages: usize,
}

/// Tokens eligible for retweet scoring: ordinary words (placeholders,
/// punctuation and emoticons excluded).
pub fn is_rs_word(t: &Token) -> bool {
    t.kind == TokenKind::Word
}

impl RetweetScoreTable {
    pub fn get(&self, norm: &str) -> Option<f64> {
        self.rs.get(norm).copied()
    }

    pub fn len(&self) -> usize {
        self.rs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rs.is_empty()
    }
}

/// Build the table from an unpaired corpus. Retweets and replies are
/// skipped; a word enters the table only if it occurs in more than
/// `min_occurrences` of the remaining messages.
pub fn build_rs_table(messages: &[Message], min_occurrences: usize) -> Result<RetweetScoreTable> {
    if messages.is_empty() {
        return Err(Error::EmptyInput("unpaired corpus"));
    }
    let mut counts: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    let mut used = 0;
    for m in messages {
        if m.is_retweet_like() || m.is_reply() {
            continue;
        }
        used += 1;
        let words: HashSet<String> = tokenize(&m.text)
            .into_iter()
            .filter(is_rs_word)
            .map(|t| t.norm)
            .collect();
        let popular = m.retweet_count > 1;
        for w in words {
            let e = counts.entry(w).or_insert((0, 0));
            e.0 += 1;
            e.1 += popular as usize;
        }
    }
    if used == 0 {
        return Err(Error::EmptyInput("unpaired corpus after dropping retweets and replies"));
    }
    let rs = counts
        .into_iter()
        .filter(|(_, (n, _))| *n > min_occurrences)
        .map(|(w, (n, k))| (w, k as f64 / n as f64))
        .collect();
    Ok(RetweetScoreTable {
        min_occurrences,
        rs,
        source_messages: used,
    })
}
