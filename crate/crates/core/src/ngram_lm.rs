//! Add-k smoothed unigram and bigram language models over token norms.
//!
//! With vocabulary size `V` (distinct observed tokens), one extra cell for
//! unseen tokens, and smoothing constant `k`:
//!
//! * unigram: `p(x) = (c(x) + k) / (N + k(V + 1))`, `N` the token total;
//! * bigram: `p(y | x) = (c(x, y) + k) / (c(x, ·) + k(V + 1))`.
//!
//! Every text is prefixed with the start marker `<s>`, which conditions the
//! first bigram but is never predicted. Unigram models drop the `[at]`,
//! `[hashtag]` and `[url]` placeholders both when training and when scoring;
//! `[num]` is kept. Bigram models keep every token.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::textproc::{HASHTAG_NORM, MENTION_NORM, URL_NORM};

pub const START: &str = "<s>";
pub const LM_FORMAT_VERSION: &str = "ngram-v1";

const DROPPED: [&str; 3] = [MENTION_NORM, HASHTAG_NORM, URL_NORM];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Smoothing {
    AddK { k: f64 },
}

impl Default for Smoothing {
    fn default() -> Self {
        Smoothing::AddK { k: 1.0 }
    }
}

impl Smoothing {
    fn k(self) -> f64 {
        match self {
            Smoothing::AddK { k } => k,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Order {
    #[serde(rename = "1")]
    Unigram,
    #[serde(rename = "2")]
    Bigram,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NgramModel {
    format: String,
    order: Order,
    smoothing: Smoothing,
    drop_placeholders: bool,
    /// Token counts; their keys are the vocabulary.
    #[serde(serialize_with = "sorted")]
    unigrams: HashMap<String, u64>,
    total: u64,
    /// Context → successor → count (bigram models only).
    #[serde(serialize_with = "sorted_nested")]
    bigrams: HashMap<String, HashMap<String, u64>>,
    #[serde(serialize_with = "sorted")]
    context_totals: HashMap<String, u64>,
}

/// Mean natural-log probability over the scored tokens or bigrams.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LmScore {
    pub value: f64,
    pub token_count: usize,
}

impl LmScore {
    /// Nothing was scored.
    pub fn is_empty(&self) -> bool {
        self.token_count == 0
    }
}

impl NgramModel {
    pub fn new(order: Order, smoothing: Smoothing) -> Result<NgramModel> {
        let k = smoothing.k();
        if !(k.is_finite() && k > 0.0) {
            return Err(Error::Config(format!("smoothing constant must be positive, got {k}")));
        }
        Ok(NgramModel {
            format: LM_FORMAT_VERSION.to_string(),
            order,
            smoothing,
            drop_placeholders: order == Order::Unigram,
            unigrams: HashMap::new(),
            total: 0,
            bigrams: HashMap::new(),
            context_totals: HashMap::new(),
        })
    }

    pub fn order(&self) -> Order {
        self.order
    }

    pub fn smoothing(&self) -> Smoothing {
        self.smoothing
    }

    pub fn vocab_size(&self) -> usize {
        self.unigrams.len()
    }

    /// The vocabulary in sorted order.
    pub fn vocab(&self) -> impl Iterator<Item = &str> {
        sorted_keys(&self.unigrams)
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Observed bigram contexts, start marker included.
    pub fn contexts(&self) -> impl Iterator<Item = &str> {
        sorted_keys(&self.context_totals)
    }

    fn kept<'a, S: AsRef<str> + 'a>(&self, tokens: &'a [S]) -> impl Iterator<Item = &'a str> + 'a {
        let drop = self.drop_placeholders;
        tokens
            .iter()
            .map(AsRef::as_ref)
            .filter(move |t| !(drop && DROPPED.contains(t)))
    }

    /// Add one text's counts.
    pub fn add<S: AsRef<str>>(&mut self, tokens: &[S]) {
        fn bump(map: &mut HashMap<String, u64>, key: &str) {
            match map.get_mut(key) {
                Some(c) => *c += 1,
                None => {
                    map.insert(key.to_string(), 1);
                }
            }
        }
        let mut prev = START;
        for t in self.kept(tokens).collect::<Vec<_>>() {
            bump(&mut self.unigrams, t);
            self.total += 1;
            if self.order == Order::Bigram {
                match self.bigrams.get_mut(prev) {
                    Some(row) => bump(row, t),
                    None => {
                        self.bigrams.insert(prev.to_string(), HashMap::from([(t.to_string(), 1)]));
                    }
                }
                bump(&mut self.context_totals, prev);
            }
            prev = t;
        }
    }

    /// Add the counts of `other`, which must share order and smoothing.
    pub fn merge(&mut self, other: &NgramModel) -> Result<()> {
        if self.order != other.order || self.smoothing != other.smoothing {
            return Err(Error::Config("cannot merge models with different settings".into()));
        }
        for (w, c) in &other.unigrams {
            *self.unigrams.entry(w.clone()).or_insert(0) += c;
        }
        self.total += other.total;
        for (x, row) in &other.bigrams {
            let mine = self.bigrams.entry(x.clone()).or_default();
            for (y, c) in row {
                *mine.entry(y.clone()).or_insert(0) += c;
            }
        }
        for (x, c) in &other.context_totals {
            *self.context_totals.entry(x.clone()).or_insert(0) += c;
        }
        Ok(())
    }

    /// Smoothed probability; `context` is ignored by unigram models and
    /// `None` means the start marker for bigram models.
    pub fn prob(&self, context: Option<&str>, token: &str) -> f64 {
        self.prob_with(&CountDelta::default(), context.unwrap_or(START), token)
    }

    fn prob_with(&self, delta: &CountDelta, context: &str, token: &str) -> f64 {
        let k = self.smoothing.k();
        let v = (self.unigrams.len() - delta.vanished) as f64;
        match self.order {
            Order::Unigram => {
                let c = self.unigrams.get(token).copied().unwrap_or(0) - delta.unigram(token);
                (c as f64 + k) / ((self.total - delta.total) as f64 + k * (v + 1.0))
            }
            Order::Bigram => {
                let ctx_total =
                    self.context_totals.get(context).copied().unwrap_or(0) - delta.context(context);
                let c = self
                    .bigrams
                    .get(context)
                    .and_then(|row| row.get(token))
                    .copied()
                    .unwrap_or(0)
                    - delta.bigram(context, token);
                (c as f64 + k) / (ctx_total as f64 + k * (v + 1.0))
            }
        }
    }

    /// Probability mass assigned to the unseen-token cell in `context`.
    pub fn unk_prob(&self, context: Option<&str>) -> f64 {
        self.prob_with(&CountDelta::default(), context.unwrap_or(START), "\u{0}<unk>")
    }

    /// Sum of the conditional distribution over the vocabulary plus the
    /// unseen cell.
    pub fn distribution_sum(&self, context: Option<&str>) -> f64 {
        let ctx = context.unwrap_or(START);
        let d = CountDelta::default();
        self.vocab().map(|w| self.prob_with(&d, ctx, w)).sum::<f64>()
            + self.prob_with(&d, ctx, "\u{0}<unk>")
    }

    pub fn score<S: AsRef<str>>(&self, tokens: &[S]) -> LmScore {
        self.score_with(&CountDelta::default(), tokens)
    }

    fn score_with<S: AsRef<str>>(&self, delta: &CountDelta, tokens: &[S]) -> LmScore {
        let mut sum = 0.0;
        let mut n = 0usize;
        let mut prev = START;
        for t in self.kept(tokens) {
            let ctx = if self.order == Order::Bigram { prev } else { START };
            sum += self.prob_with(delta, ctx, t).ln();
            n += 1;
            prev = t;
        }
        LmScore {
            value: if n == 0 { 0.0 } else { sum / n as f64 },
            token_count: n,
        }
    }

    /// Score as if the `excluded` texts had never been added. Each excluded
    /// text must have been added to this model. Returns `None` when no
    /// training tokens would remain.
    pub fn score_excluding<S: AsRef<str>, E: AsRef<str>>(
        &self,
        tokens: &[S],
        excluded: &[&[E]],
    ) -> Option<LmScore> {
        let delta = self.delta(excluded);
        if delta.total >= self.total {
            return None;
        }
        Some(self.score_with(&delta, tokens))
    }

    fn delta<'e, E: AsRef<str>>(&self, excluded: &[&'e [E]]) -> CountDelta<'e> {
        let mut d = CountDelta::default();
        for text in excluded {
            let mut prev = START;
            for t in self.kept(text) {
                *d.unigrams.entry(t).or_insert(0) += 1;
                d.total += 1;
                if self.order == Order::Bigram {
                    *d.bigrams.entry((prev, t)).or_insert(0) += 1;
                    *d.contexts.entry(prev).or_insert(0) += 1;
                }
                prev = t;
            }
        }
        for (w, c) in &d.unigrams {
            let have = self.unigrams.get(*w).copied().unwrap_or(0);
            assert!(*c <= have, "excluded text was never added to the model");
            if *c == have {
                d.vanished += 1;
            }
        }
        d
    }
}

fn sorted_keys<V>(map: &HashMap<String, V>) -> impl Iterator<Item = &str> {
    let mut keys: Vec<&str> = map.keys().map(String::as_str).collect();
    keys.sort_unstable();
    keys.into_iter()
}

fn sorted<S: Serializer>(map: &HashMap<String, u64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    map.iter().collect::<BTreeMap<_, _>>().serialize(s)
}

fn sorted_nested<S: Serializer>(
    map: &HashMap<String, HashMap<String, u64>>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    map.iter()
        .map(|(k, row)| (k, row.iter().collect::<BTreeMap<_, _>>()))
        .collect::<BTreeMap<_, _>>()
        .serialize(s)
}

/// Counts temporarily subtracted from a model.
#[derive(Debug, Default)]
struct CountDelta<'a> {
    unigrams: HashMap<&'a str, u64>,
    bigrams: HashMap<(&'a str, &'a str), u64>,
    contexts: HashMap<&'a str, u64>,
    total: u64,
    vanished: usize,
}

impl CountDelta<'_> {
    fn unigram(&self, w: &str) -> u64 {
        self.unigrams.get(w).copied().unwrap_or(0)
    }

    fn context(&self, x: &str) -> u64 {
        self.contexts.get(x).copied().unwrap_or(0)
    }

    fn bigram(&self, x: &str, y: &str) -> u64 {
        if self.bigrams.is_empty() {
            return 0;
        }
        self.bigrams.get(&(x, y)).copied().unwrap_or(0)
    }
}

pub fn train_lm<I, T, S>(texts: I, order: Order, smoothing: Smoothing) -> Result<NgramModel>
where
    I: IntoIterator<Item = T>,
    T: AsRef<[S]>,
    S: AsRef<str>,
{
    let mut m = NgramModel::new(order, smoothing)?;
    let mut any = false;
    for t in texts {
        m.add(t.as_ref());
        any = true;
    }
    if !any {
        return Err(Error::EmptyInput("language model training stream"));
    }
    Ok(m)
}

/// Unigram and bigram models trained on the same texts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LmPair {
    pub unigram: NgramModel,
    pub bigram: NgramModel,
}

impl LmPair {
    pub fn new(smoothing: Smoothing) -> Result<LmPair> {
        Ok(LmPair {
            unigram: NgramModel::new(Order::Unigram, smoothing)?,
            bigram: NgramModel::new(Order::Bigram, smoothing)?,
        })
    }

    pub fn train<I, T, S>(texts: I, smoothing: Smoothing) -> Result<LmPair>
    where
        I: IntoIterator<Item = T>,
        T: AsRef<[S]>,
        S: AsRef<str>,
    {
        let mut p = LmPair::new(smoothing)?;
        let mut any = false;
        for t in texts {
            p.add(t.as_ref());
            any = true;
        }
        if !any {
            return Err(Error::EmptyInput("language model training stream"));
        }
        Ok(p)
    }

    pub fn add<S: AsRef<str>>(&mut self, tokens: &[S]) {
        self.unigram.add(tokens);
        self.bigram.add(tokens);
    }

    pub fn score<S: AsRef<str>>(&self, tokens: &[S]) -> (LmScore, LmScore) {
        (self.unigram.score(tokens), self.bigram.score(tokens))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    fn add1() -> Smoothing {
        Smoothing::AddK { k: 1.0 }
    }

    #[test]
    fn single_symbol_corpus_near_certain() {
        let m = train_lm([toks("a a a")], Order::Unigram, Smoothing::AddK { k: 1e-9 }).unwrap();
        assert!((m.prob(None, "a") - 1.0).abs() < 1e-8);
    }

    #[test]
    fn hand_counted_unigram() {
        let m = train_lm([toks("a b"), toks("a c")], Order::Unigram, add1()).unwrap();
        assert!((m.prob(None, "a") - 0.375).abs() < 1e-15);
        assert!((m.prob(None, "b") - 0.25).abs() < 1e-15);
        let s = m.score(&toks("a b"));
        assert!((s.value - (0.375f64.ln() + 0.25f64.ln()) / 2.0).abs() < 1e-15);
        assert_eq!(s.token_count, 2);
    }

    #[test]
    fn unigram_drops_placeholders_but_keeps_numbers() {
        let m = train_lm([toks("a b"), toks("a c")], Order::Unigram, add1()).unwrap();
        let s = m.score(&toks("[at] a"));
        assert_eq!(s.token_count, 1);
        assert!((s.value - 0.375f64.ln()).abs() < 1e-15);
        assert_eq!(m.score(&toks("[num]")).token_count, 1);
        assert_eq!(m.score(&toks("[url] [hashtag]")).token_count, 0);
        assert_eq!(m.score(&toks("[url] [hashtag]")).value, 0.0);
    }

    #[test]
    fn bigram_includes_start_and_placeholders() {
        let m = train_lm([toks("a [url]"), toks("a b")], Order::Bigram, add1()).unwrap();
        // V = {a, [url], b} = 3; c(<s>, a) = 2, c(<s>, ·) = 2.
        assert!((m.prob(None, "a") - 3.0 / 6.0).abs() < 1e-15);
        assert!((m.prob(Some("a"), "[url]") - 2.0 / 6.0).abs() < 1e-15);
        assert_eq!(m.score(&toks("a [url]")).token_count, 2);
    }

    #[test]
    fn distributions_normalize() {
        let m = train_lm([toks("x y z y"), toks("z z q")], Order::Bigram, add1()).unwrap();
        for ctx in ["x", "y", "z", "q", START, "never-seen"] {
            assert!((m.distribution_sum(Some(ctx)) - 1.0).abs() < 1e-12);
        }
        assert!((m.prob(Some("never-seen"), "x") - 1.0 / 5.0).abs() < 1e-15);
    }

    #[test]
    fn exclusion_equals_retraining_without_texts() {
        let texts = [toks("a b c"), toks("a a d"), toks("b c e"), toks("f")];
        for order in [Order::Unigram, Order::Bigram] {
            let full = train_lm(&texts, order, add1()).unwrap();
            let rest = train_lm(&texts[..2], order, add1()).unwrap();
            let probe = toks("a b c d e f g");
            let got = full
                .score_excluding(&probe, &[texts[2].as_slice(), texts[3].as_slice()])
                .unwrap();
            let want = rest.score(&probe);
            assert!((got.value - want.value).abs() < 1e-12, "{order:?}");
            assert_eq!(got.token_count, want.token_count);
        }
    }

    #[test]
    fn excluding_everything_yields_none() {
        let texts = [toks("a b")];
        let m = train_lm(&texts, Order::Bigram, add1()).unwrap();
        assert!(m.score_excluding(&toks("a"), &[texts[0].as_slice()]).is_none());
    }

    #[test]
    fn merge_is_additive() {
        let a = train_lm([toks("a b")], Order::Bigram, add1()).unwrap();
        let b = train_lm([toks("b c a")], Order::Bigram, add1()).unwrap();
        let both = train_lm([toks("a b"), toks("b c a")], Order::Bigram, add1()).unwrap();
        let mut merged = a.clone();
        merged.merge(&b).unwrap();
        assert_eq!(merged, both);
    }

    #[test]
    fn empty_stream_and_bad_k_rejected() {
        let none: Vec<Vec<String>> = vec![];
        assert!(train_lm(none, Order::Unigram, add1()).is_err());
        assert!(NgramModel::new(Order::Unigram, Smoothing::AddK { k: 0.0 }).is_err());
    }

    #[test]
    fn persisted_model_round_trips() {
        let m = train_lm([toks("a b c"), toks("c b")], Order::Bigram, add1()).unwrap();
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(serde_json::from_str::<NgramModel>(&json).unwrap(), m);
        let texts: Vec<Vec<String>> = (0..40).map(|i| toks(&format!("w{i} x{} y", i % 7))).collect();
        let fwd = train_lm(texts.iter(), Order::Bigram, add1()).unwrap();
        let rev = train_lm(texts.iter().rev(), Order::Bigram, add1()).unwrap();
        assert_eq!(serde_json::to_string(&fwd).unwrap(), serde_json::to_string(&rev).unwrap());
    }
}
