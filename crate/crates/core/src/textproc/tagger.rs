//! Averaged-perceptron POS tagger over the Twitter tagset.
//!
//! Greedy left-to-right decoding with hashed context features (current,
//! previous and next words, affixes, word shape, the two previous tags).
//! Frequent unambiguous words are resolved from a tag dictionary, and URL,
//! hashtag and @-mention tokens always receive their own tags.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::tokenize::{tokenize, Token, TokenKind};
use super::Tag;
use crate::error::{Error, Result};

pub const TAGGER_FORMAT_VERSION: &str = "tagger-v1";

/// One annotated training sequence.
pub type TaggedSentence = Vec<(String, Tag)>;

const DICT_MIN_FREQ: usize = 5;
const DICT_MIN_RATIO: f64 = 0.97;

type Weights = [f32; Tag::COUNT];

#[derive(Debug, Clone, Default)]
pub struct TaggerModel {
    version: String,
    tagdict: BTreeMap<String, Tag>,
    weights: HashMap<u64, Weights>,
}

#[derive(Serialize, Deserialize)]
struct TaggerDocument {
    format: String,
    version: String,
    tagdict: BTreeMap<String, Tag>,
    weights: BTreeMap<u64, Vec<(u8, f32)>>,
}

impl Serialize for TaggerModel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let weights = self
            .weights
            .iter()
            .map(|(&k, w)| {
                let sparse = w
                    .iter()
                    .enumerate()
                    .filter(|(_, &v)| v != 0.0)
                    .map(|(i, &v)| (i as u8, v))
                    .collect();
                (k, sparse)
            })
            .collect();
        TaggerDocument {
            format: TAGGER_FORMAT_VERSION.to_string(),
            version: self.version.clone(),
            tagdict: self.tagdict.clone(),
            weights,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TaggerModel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let doc = TaggerDocument::deserialize(d)?;
        if doc.format != TAGGER_FORMAT_VERSION {
            return Err(D::Error::custom(format!(
                "unsupported tagger format {:?}",
                doc.format
            )));
        }
        let mut weights = HashMap::with_capacity(doc.weights.len());
        for (k, sparse) in doc.weights {
            let mut w = [0f32; Tag::COUNT];
            for (i, v) in sparse {
                let slot = w
                    .get_mut(i as usize)
                    .ok_or_else(|| D::Error::custom(format!("tag index {i} out of range")))?;
                if !v.is_finite() {
                    return Err(D::Error::custom("non-finite tagger weight"));
                }
                *slot = v;
            }
            weights.insert(k, w);
        }
        Ok(TaggerModel {
            version: doc.version,
            tagdict: doc.tagdict,
            weights,
        })
    }
}

impl PartialEq for TaggerModel {
    fn eq(&self, other: &Self) -> bool {
        self.version == other.version
            && self.tagdict == other.tagdict
            && self.weights == other.weights
    }
}

impl TaggerModel {
    pub fn version(&self) -> &str {
        &self.version
    }

    pub fn is_trained(&self) -> bool {
        !self.weights.is_empty() || !self.tagdict.is_empty()
    }

    /// Tagger trained from the bundled annotated tweets (5 epochs, seed 0).
    pub fn builtin() -> Arc<TaggerModel> {
        static MODEL: OnceLock<Arc<TaggerModel>> = OnceLock::new();
        MODEL
            .get_or_init(|| {
                let data = read_annotated(BUILTIN_FIXTURE).expect("bundled tagger fixture parses");
                let mut m = train_tagger(&data, 5, 0).expect("bundled tagger fixture trains");
                m.version = "builtin-1".to_string();
                Arc::new(m)
            })
            .clone()
    }

    fn score(&self, feats: &[u64]) -> Tag {
        let mut scores = [0f32; Tag::COUNT];
        for f in feats {
            if let Some(w) = self.weights.get(f) {
                for (s, v) in scores.iter_mut().zip(w) {
                    *s += v;
                }
            }
        }
        let mut best = 0;
        for i in 1..Tag::COUNT {
            if scores[i] > scores[best] {
                best = i;
            }
        }
        Tag::ALL[best]
    }

    /// Tag `tokens` in place. Every token receives exactly one tag.
    pub fn tag_in_place(&self, tokens: &mut [Token]) -> Result<()> {
        if tokens.is_empty() {
            return Ok(());
        }
        if !self.is_trained() {
            return Err(Error::UntrainedTagger);
        }
        let ctx = Context::new(tokens);
        let mut feats = Vec::with_capacity(24);
        let (mut p1, mut p2) = (START, START);
        for i in 0..tokens.len() {
            let tag = match self.fixed_tag(&tokens[i]) {
                Some(t) => t,
                None => {
                    ctx.features(i, p1, p2, &mut feats);
                    self.score(&feats)
                }
            };
            tokens[i].tag = Some(tag);
            p2 = p1;
            p1 = tag.index() as u8;
        }
        Ok(())
    }

    fn fixed_tag(&self, token: &Token) -> Option<Tag> {
        token
            .forced_tag()
            .or_else(|| self.tagdict.get(&token.norm).copied())
    }
}

/// Tag a token list, returning a tagged copy.
pub fn tag(tokens: &[Token], model: &TaggerModel) -> Result<Vec<Token>> {
    let mut out = tokens.to_vec();
    model.tag_in_place(&mut out)?;
    Ok(out)
}

/// Tokenize then tag.
pub fn analyze(text: &str, model: &TaggerModel) -> Result<Vec<Token>> {
    let mut toks = tokenize(text);
    model.tag_in_place(&mut toks)?;
    Ok(toks)
}

const START: u8 = 254;

struct Context {
    words: Vec<String>,
    shapes: Vec<u8>,
}

impl Context {
    fn new(tokens: &[Token]) -> Context {
        Context {
            words: tokens.iter().map(|t| t.norm.clone()).collect(),
            shapes: tokens.iter().map(shape).collect(),
        }
    }

    fn word(&self, i: isize) -> &str {
        if i < 0 {
            "<s>"
        } else {
            self.words.get(i as usize).map(String::as_str).unwrap_or("</s>")
        }
    }

    fn features(&self, i: usize, p1: u8, p2: u8, out: &mut Vec<u64>) {
        out.clear();
        let i = i as isize;
        let w = self.word(i);
        out.push(fhash(0, &[]));
        out.push(fhash(1, &[w.as_bytes()]));
        out.push(fhash(2, &[suffix(w, 3).as_bytes()]));
        out.push(fhash(3, &[suffix(w, 2).as_bytes()]));
        out.push(fhash(4, &[prefix(w, 1).as_bytes()]));
        out.push(fhash(5, &[&[self.shapes[i as usize]]]));
        out.push(fhash(6, &[&[p1]]));
        out.push(fhash(7, &[&[p2]]));
        out.push(fhash(8, &[&[p1, p2]]));
        out.push(fhash(9, &[&[p1], w.as_bytes()]));
        out.push(fhash(10, &[self.word(i - 1).as_bytes()]));
        out.push(fhash(11, &[suffix(self.word(i - 1), 3).as_bytes()]));
        out.push(fhash(12, &[self.word(i - 2).as_bytes()]));
        out.push(fhash(13, &[self.word(i + 1).as_bytes()]));
        out.push(fhash(14, &[suffix(self.word(i + 1), 3).as_bytes()]));
        out.push(fhash(15, &[self.word(i + 2).as_bytes()]));
        out.push(fhash(16, &[self.word(i - 1).as_bytes(), w.as_bytes()]));
        out.push(fhash(17, &[w.as_bytes(), self.word(i + 1).as_bytes()]));
    }
}

fn shape(t: &Token) -> u8 {
    let s = &t.surface;
    let mut bits = 0u8;
    if s.chars().next().is_some_and(char::is_uppercase) {
        bits |= 1;
    }
    if s.chars().any(char::is_alphabetic) && !s.chars().any(char::is_lowercase) {
        bits |= 2;
    }
    if s.chars().any(|c| c.is_ascii_digit()) {
        bits |= 4;
    }
    if s.contains('-') {
        bits |= 8;
    }
    if s.contains('\'') || s.contains('’') {
        bits |= 16;
    }
    bits | ((t.kind as u8) << 5)
}

fn suffix(w: &str, n: usize) -> &str {
    let start = w.char_indices().rev().nth(n.saturating_sub(1)).map(|(i, _)| i).unwrap_or(0);
    &w[start..]
}

fn prefix(w: &str, n: usize) -> &str {
    let end = w.char_indices().nth(n).map(|(i, _)| i).unwrap_or(w.len());
    &w[..end]
}

fn fhash(template: u8, parts: &[&[u8]]) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0100_0000_01b3;
    let mut h = OFFSET ^ template as u64;
    h = h.wrapping_mul(PRIME);
    for p in parts {
        for &b in *p {
            h ^= b as u64;
            h = h.wrapping_mul(PRIME);
        }
        h ^= 0xff;
        h = h.wrapping_mul(PRIME);
    }
    h
}

struct Slot {
    w: [f64; Tag::COUNT],
    total: [f64; Tag::COUNT],
    stamp: [u64; Tag::COUNT],
}

impl Default for Slot {
    fn default() -> Self {
        Slot {
            w: [0.0; Tag::COUNT],
            total: [0.0; Tag::COUNT],
            stamp: [0; Tag::COUNT],
        }
    }
}

/// Make a training token from an annotated surface string.
fn training_token(surface: &str) -> Token {
    let mut toks = tokenize(surface);
    if toks.len() == 1 {
        toks.pop().unwrap()
    } else {
        Token {
            surface: surface.to_string(),
            norm: surface.to_lowercase(),
            kind: TokenKind::Word,
            tag: None,
        }
    }
}

/// Train an averaged perceptron. Sentence order is shuffled each epoch with
/// a generator seeded from `seed`, so the result is a pure function of the
/// inputs.
pub fn train_tagger(data: &[TaggedSentence], epochs: usize, seed: u64) -> Result<TaggerModel> {
    if data.iter().all(|s| s.is_empty()) {
        return Err(Error::EmptyInput("tagger training data"));
    }
    if epochs == 0 {
        return Err(Error::Config("epochs must be at least 1".into()));
    }

    let sentences: Vec<(Vec<Token>, Vec<Tag>)> = data
        .iter()
        .filter(|s| !s.is_empty())
        .map(|s| {
            let toks = s.iter().map(|(w, _)| training_token(w)).collect();
            let tags = s.iter().map(|(_, t)| *t).collect();
            (toks, tags)
        })
        .collect();

    let tagdict = build_tagdict(&sentences);
    let mut model = TaggerModel {
        version: String::new(),
        tagdict,
        weights: HashMap::new(),
    };

    let mut slots: HashMap<u64, Slot> = HashMap::new();
    let mut instances: u64 = 0;
    let mut order: Vec<usize> = (0..sentences.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut feats = Vec::with_capacity(24);

    for _ in 0..epochs {
        order.shuffle(&mut rng);
        for &si in &order {
            let (toks, gold) = &sentences[si];
            let ctx = Context::new(toks);
            let (mut p1, mut p2) = (START, START);
            for i in 0..toks.len() {
                let guess = match model.fixed_tag(&toks[i]) {
                    Some(t) => t,
                    None => {
                        ctx.features(i, p1, p2, &mut feats);
                        let guess = predict_slots(&slots, &feats);
                        instances += 1;
                        if guess != gold[i] {
                            for &f in &feats {
                                let slot = slots.entry(f).or_default();
                                bump(slot, gold[i].index(), 1.0, instances);
                                bump(slot, guess.index(), -1.0, instances);
                            }
                        }
                        guess
                    }
                };
                p2 = p1;
                p1 = guess.index() as u8;
            }
        }
    }

    let n = instances.max(1) as f64;
    for (f, slot) in slots {
        let mut w = [0f32; Tag::COUNT];
        for c in 0..Tag::COUNT {
            let total = slot.total[c] + (instances - slot.stamp[c]) as f64 * slot.w[c];
            w[c] = (total / n) as f32;
        }
        if w.iter().any(|&v| v != 0.0) {
            model.weights.insert(f, w);
        }
    }
    model.version = format!("perceptron-e{epochs}-s{seed}");
    Ok(model)
}

fn bump(slot: &mut Slot, class: usize, delta: f64, now: u64) {
    slot.total[class] += (now - slot.stamp[class]) as f64 * slot.w[class];
    slot.stamp[class] = now;
    slot.w[class] += delta;
}

fn predict_slots(slots: &HashMap<u64, Slot>, feats: &[u64]) -> Tag {
    let mut scores = [0f64; Tag::COUNT];
    for f in feats {
        if let Some(s) = slots.get(f) {
            for (acc, v) in scores.iter_mut().zip(&s.w) {
                *acc += v;
            }
        }
    }
    let mut best = 0;
    for i in 1..Tag::COUNT {
        if scores[i] > scores[best] {
            best = i;
        }
    }
    Tag::ALL[best]
}

fn build_tagdict(sentences: &[(Vec<Token>, Vec<Tag>)]) -> BTreeMap<String, Tag> {
    let mut counts: HashMap<&str, [usize; Tag::COUNT]> = HashMap::new();
    for (toks, tags) in sentences {
        for (t, g) in toks.iter().zip(tags) {
            counts.entry(t.norm.as_str()).or_insert([0; Tag::COUNT])[g.index()] += 1;
        }
    }
    let mut dict = BTreeMap::new();
    for (w, c) in counts {
        let total: usize = c.iter().sum();
        let (best, &n) = c
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
            .unwrap();
        if total >= DICT_MIN_FREQ && n as f64 / total as f64 >= DICT_MIN_RATIO {
            dict.insert(w.to_string(), Tag::ALL[best]);
        }
    }
    dict
}

/// Parse the annotated format: one `token<TAB>tag` per line, blank line
/// between sequences.
pub fn read_annotated(text: &str) -> Result<Vec<TaggedSentence>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            if !cur.is_empty() {
                out.push(std::mem::take(&mut cur));
            }
            continue;
        }
        let (tok, tag) = line
            .split_once('\t')
            .ok_or_else(|| Error::Parse(format!("line {}: expected token<TAB>tag", lineno + 1)))?;
        cur.push((tok.to_string(), tag.trim().parse::<Tag>()?));
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    Ok(out)
}

/// Serialize sequences in the annotated format.
pub fn write_annotated(data: &[TaggedSentence]) -> String {
    let mut s = String::new();
    for sent in data {
        for (w, t) in sent {
            s.push_str(w);
            s.push('\t');
            s.push_str(t.symbol());
            s.push('\n');
        }
        s.push('\n');
    }
    s
}

/// Token-level accuracy of `model` on annotated sequences.
pub fn accuracy(model: &TaggerModel, data: &[TaggedSentence]) -> Result<f64> {
    let mut correct = 0usize;
    let mut total = 0usize;
    for sent in data {
        let mut toks: Vec<Token> = sent.iter().map(|(w, _)| training_token(w)).collect();
        model.tag_in_place(&mut toks)?;
        for (t, (_, gold)) in toks.iter().zip(sent) {
            total += 1;
            if t.tag == Some(*gold) {
                correct += 1;
            }
        }
    }
    Ok(if total == 0 { 0.0 } else { correct as f64 / total as f64 })
}

pub(crate) const BUILTIN_FIXTURE: &str = include_str!("../../data/tagged_tweets.tsv");

#[cfg(test)]
mod tests {
    use super::*;

    fn sent(pairs: &[(&str, Tag)]) -> TaggedSentence {
        pairs.iter().map(|(w, t)| (w.to_string(), *t)).collect()
    }

    #[test]
    fn untrained_model_errors() {
        let m = TaggerModel::default();
        assert!(matches!(
            tag(&tokenize("hello there"), &m),
            Err(Error::UntrainedTagger)
        ));
    }

    #[test]
    fn empty_input_yields_empty_output() {
        let m = TaggerModel::default();
        assert!(tag(&[], &m).unwrap().is_empty());
    }

    #[test]
    fn memorizes_a_repeated_sentence() {
        let s = sent(&[
            ("dogs", Tag::CommonNoun),
            ("chase", Tag::Verb),
            ("red", Tag::Adjective),
            ("balls", Tag::CommonNoun),
            ("!", Tag::Punctuation),
        ]);
        let data = vec![s.clone(); 3];
        let m = train_tagger(&data, 5, 1).unwrap();
        assert_eq!(accuracy(&m, &[s]).unwrap(), 1.0);
    }

    #[test]
    fn forced_tags_hold_without_model_support() {
        let s = sent(&[("thanks", Tag::Interjection), ("friend", Tag::CommonNoun)]);
        let m = train_tagger(&[s], 1, 0).unwrap();
        let toks = analyze("@bob thanks #yay http://x.co", &m).unwrap();
        assert_eq!(toks[0].tag, Some(Tag::Mention));
        assert_eq!(toks[2].tag, Some(Tag::Hashtag));
        assert_eq!(toks[3].tag, Some(Tag::Url));
    }

    #[test]
    fn rejects_zero_epochs_and_empty_data() {
        let s = sent(&[("a", Tag::Determiner)]);
        assert!(train_tagger(&[s], 0, 0).is_err());
        assert!(train_tagger(&[], 3, 0).is_err());
    }

    #[test]
    fn annotated_format_round_trip() {
        let text = "Please\tV\nRT\tV\n\nnews\tN\n";
        let data = read_annotated(text).unwrap();
        assert_eq!(data.len(), 2);
        assert_eq!(read_annotated(&write_annotated(&data)).unwrap(), data);
        assert!(read_annotated("word\tQQ\n").is_err());
        assert!(read_annotated("no-tab-here\n").is_err());
    }

    #[test]
    fn persisted_model_round_trips() {
        let s = sent(&[("go", Tag::Verb), ("team", Tag::CommonNoun)]);
        let m = train_tagger(&[s], 2, 0).unwrap();
        let json = serde_json::to_string(&m).unwrap();
        let back: TaggerModel = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn affixes_are_char_safe() {
        assert_eq!(suffix("café", 3), "afé");
        assert_eq!(suffix("ab", 3), "ab");
        assert_eq!(prefix("élan", 1), "é");
    }
}
