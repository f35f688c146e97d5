//! The 25-symbol Twitter part-of-speech tagset.
//!
//! Feature code consumes coarse categories (noun, verb, ...) through
//! [`Tag::category`]. The mapping from fine tags to categories is fixed:
//!
//! | category    | tags            |
//! |-------------|-----------------|
//! | noun        | `N` `S` `L`     |
//! | proper noun | `^` `Z` `M`     |
//! | verb        | `V`             |
//! | adjective   | `A`             |
//! | adverb      | `R`             |
//! | pronoun     | `O`             |
//! | number      | `$`             |
//! | hashtag     | `#`             |
//! | @-mention   | `@`             |
//! | URL         | `U`             |
//!
//! Compound tags (`L` nominal+verbal, `M` proper+verbal, `S`/`Z` possessives)
//! count toward their nominal head only. Every other tag maps to
//! [`Category::Other`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Tag {
    CommonNoun,
    Pronoun,
    ProperNoun,
    NominalPossessive,
    ProperPossessive,
    Verb,
    Adjective,
    Adverb,
    Interjection,
    Determiner,
    Preposition,
    Conjunction,
    Particle,
    Existential,
    Hashtag,
    Mention,
    Discourse,
    Url,
    Emoticon,
    Numeral,
    Punctuation,
    Other,
    NominalVerbal,
    ProperVerbal,
    ExistentialVerbal,
}

impl Tag {
    pub const COUNT: usize = 25;

    pub const ALL: [Tag; Tag::COUNT] = [
        Tag::CommonNoun,
        Tag::Pronoun,
        Tag::ProperNoun,
        Tag::NominalPossessive,
        Tag::ProperPossessive,
        Tag::Verb,
        Tag::Adjective,
        Tag::Adverb,
        Tag::Interjection,
        Tag::Determiner,
        Tag::Preposition,
        Tag::Conjunction,
        Tag::Particle,
        Tag::Existential,
        Tag::Hashtag,
        Tag::Mention,
        Tag::Discourse,
        Tag::Url,
        Tag::Emoticon,
        Tag::Numeral,
        Tag::Punctuation,
        Tag::Other,
        Tag::NominalVerbal,
        Tag::ProperVerbal,
        Tag::ExistentialVerbal,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            Tag::CommonNoun => "N",
            Tag::Pronoun => "O",
            Tag::ProperNoun => "^",
            Tag::NominalPossessive => "S",
            Tag::ProperPossessive => "Z",
            Tag::Verb => "V",
            Tag::Adjective => "A",
            Tag::Adverb => "R",
            Tag::Interjection => "!",
            Tag::Determiner => "D",
            Tag::Preposition => "P",
            Tag::Conjunction => "&",
            Tag::Particle => "T",
            Tag::Existential => "X",
            Tag::Hashtag => "#",
            Tag::Mention => "@",
            Tag::Discourse => "~",
            Tag::Url => "U",
            Tag::Emoticon => "E",
            Tag::Numeral => "$",
            Tag::Punctuation => ",",
            Tag::Other => "G",
            Tag::NominalVerbal => "L",
            Tag::ProperVerbal => "M",
            Tag::ExistentialVerbal => "Y",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Tag> {
        Tag::ALL.get(i).copied()
    }

    pub fn category(self) -> Category {
        match self {
            Tag::CommonNoun | Tag::NominalPossessive | Tag::NominalVerbal => Category::Noun,
            Tag::ProperNoun | Tag::ProperPossessive | Tag::ProperVerbal => Category::ProperNoun,
            Tag::Verb => Category::Verb,
            Tag::Adjective => Category::Adjective,
            Tag::Adverb => Category::Adverb,
            Tag::Pronoun => Category::Pronoun,
            Tag::Numeral => Category::Number,
            Tag::Hashtag => Category::Hashtag,
            Tag::Mention => Category::Mention,
            Tag::Url => Category::Url,
            _ => Category::Other,
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for Tag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Tag::ALL
            .iter()
            .copied()
            .find(|t| t.symbol() == s)
            .ok_or_else(|| Error::UnknownTag(s.to_string()))
    }
}

impl From<Tag> for String {
    fn from(t: Tag) -> String {
        t.symbol().to_string()
    }
}

impl TryFrom<String> for Tag {
    type Error = Error;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

/// Coarse word classes used by the informativeness and retweet-score features.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Category {
    Noun,
    ProperNoun,
    Verb,
    Adjective,
    Adverb,
    Pronoun,
    Number,
    Hashtag,
    Mention,
    Url,
    Other,
}
