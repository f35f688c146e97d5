//! Flesch reading ease and negated Flesch-Kincaid grade level.
//!
//! Words are tokens containing a letter, excluding URLs, mentions, hashtags
//! and numbers. Sentences are the stretches between tokens made only of
//! `.`, `!` and `?` that contain at least one word; a text with words has
//! at least one sentence. With no words both scores are 0.

use crate::textproc::{count_syllables, Token, TokenKind};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TextCounts {
    pub words: usize,
    pub sentences: usize,
    pub syllables: usize,
}

fn is_word(t: &Token) -> bool {
    matches!(t.kind, TokenKind::Word) && t.surface.chars().any(char::is_alphabetic)
}

fn is_terminator(t: &Token) -> bool {
    t.kind == TokenKind::Punctuation && t.surface.chars().all(|c| matches!(c, '.' | '!' | '?'))
}

pub fn text_counts(tokens: &[Token]) -> TextCounts {
    let mut words = 0;
    let mut syllables = 0;
    let mut sentences = 0;
    let mut open = false;
    for t in tokens {
        if is_word(t) {
            words += 1;
            syllables += count_syllables(&t.surface);
            open = true;
        } else if is_terminator(t) && open {
            sentences += 1;
            open = false;
        }
    }
    if open {
        sentences += 1;
    }
    TextCounts {
        words,
        sentences,
        syllables,
    }
}

pub fn flesch_reading_ease(c: TextCounts) -> f64 {
    if c.words == 0 {
        return 0.0;
    }
    let w = c.words as f64;
    206.835 - 1.015 * (w / c.sentences as f64) - 84.6 * (c.syllables as f64 / w)
}

/// Negated grade level, so larger means easier as with reading ease.
pub fn negative_grade_level(c: TextCounts) -> f64 {
    if c.words == 0 {
        return 0.0;
    }
    let w = c.words as f64;
    -(0.39 * (w / c.sentences as f64) + 11.8 * (c.syllables as f64 / w) - 15.59)
}
