//! Named experimental conditions: which columns a classifier sees, or which
//! fixed rule stands in for one.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::features::{feature_index, group_members, Group, N_CUSTOM, REQUEST_FEATURES};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Condition {
    /// All 39 custom features.
    Custom,
    /// One custom-feature group.
    Group(Group),
    Unigram,
    /// Unigrams and bigrams.
    Bigram,
    CustomBigram,
    /// Single-message popularity scorer trained on unpaired extremes.
    Baseline,
    /// Majority label of the training data (ties go to T2).
    Majority,
    LengthOnly,
    ShareRequestOnly,
    /// Custom features passing the Bonferroni cutoff on the training data.
    BcCustom,
}

impl Condition {
    /// The conditions of the standard comparison, in display order.
    pub fn standard() -> Vec<Condition> {
        let mut v = vec![Condition::Custom];
        v.extend(Group::ALL.into_iter().map(Condition::Group));
        v.extend([
            Condition::BcCustom,
            Condition::Unigram,
            Condition::Bigram,
            Condition::CustomBigram,
            Condition::Baseline,
            Condition::LengthOnly,
            Condition::ShareRequestOnly,
            Condition::Majority,
        ]);
        v
    }

    pub fn name(self) -> String {
        match self {
            Condition::Custom => "custom".into(),
            Condition::Group(g) => format!("group:{}", g.name()),
            Condition::Unigram => "unigram".into(),
            Condition::Bigram => "1,2-gram".into(),
            Condition::CustomBigram => "custom+1,2-gram".into(),
            Condition::Baseline => "baseline".into(),
            Condition::Majority => "majority".into(),
            Condition::LengthOnly => "length-only".into(),
            Condition::ShareRequestOnly => "share-request-only".into(),
            Condition::BcCustom => "bc-custom".into(),
        }
    }

    /// Fixed custom columns, `None` for conditions without a fixed set.
    pub fn custom_columns(self) -> Option<Vec<usize>> {
        match self {
            Condition::Custom | Condition::CustomBigram => Some((0..N_CUSTOM).collect()),
            Condition::Group(g) => Some(group_members(g)),
            Condition::Unigram | Condition::Bigram => Some(Vec::new()),
            Condition::LengthOnly => Some(vec![feature_index("length_chars").expect("registry has length_chars")]),
            Condition::ShareRequestOnly => Some(
                REQUEST_FEATURES
                    .iter()
                    .map(|f| feature_index(f).expect("registry has request features"))
                    .collect(),
            ),
            Condition::Baseline | Condition::Majority | Condition::BcCustom => None,
        }
    }

    /// Bag-of-words section: `None`, or `Some(with_bigrams)`.
    pub fn bow(self) -> Option<bool> {
        match self {
            Condition::Unigram => Some(false),
            Condition::Bigram | Condition::CustomBigram => Some(true),
            _ => None,
        }
    }

    /// Conditions that fit a pair classifier.
    pub fn is_learned(self) -> bool {
        !matches!(self, Condition::Baseline | Condition::Majority)
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for Condition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Condition> {
        if let Some(g) = s.strip_prefix("group:") {
            return Group::from_name(g)
                .map(Condition::Group)
                .ok_or_else(|| Error::UnknownCondition(s.to_string()));
        }
        Ok(match s {
            "custom" => Condition::Custom,
            "unigram" => Condition::Unigram,
            "1,2-gram" => Condition::Bigram,
            "custom+1,2-gram" => Condition::CustomBigram,
            "baseline" => Condition::Baseline,
            "majority" => Condition::Majority,
            "length-only" => Condition::LengthOnly,
            "share-request-only" => Condition::ShareRequestOnly,
            "bc-custom" => Condition::BcCustom,
            _ => return Err(Error::UnknownCondition(s.to_string())),
        })
    }
}

impl Serialize for Condition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.name())
    }
}

impl<'de> Deserialize<'de> for Condition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Condition, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
