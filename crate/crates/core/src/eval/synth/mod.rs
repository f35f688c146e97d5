//! Seeded synthetic corpora with planted signal.
//!
//! Each kept pair shares one sentence body. The two members differ in the
//! adjective at one slot, which is a made-up word that the synthetic
//! lexicon marks positive, negative or neither, and in trailing whitespace
//! that sets the message length. Everything else the feature extractor
//! sees is identical between members, apart from an optional hashtag whose
//! placement is balanced across labels. Shared bodies contain no lexicon
//! words, so sentiment differences come from the slot alone. Latent quality
//! is the weighted sum of the planted feature values (length in units of 10
//! characters) plus Gaussian noise, and the member with higher quality gets
//! more retweets.
//! Per author, the better member is posted second in half of the pairs.
//!
//! Near-duplicate decoy pairs (one extra token) match the kept pairs in
//! number, so the median similarity filter removes exactly the decoys.
//! Identical pairs (whitespace changes only) carry retweet drift that grows
//! with lag and audience for the confound analysis.

mod grammar;

use std::collections::{BTreeMap, HashSet};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::pipeline::{build_context, prepare, ContextConfig, Prepared};
use crate::corpus::{format_corpus, stopword_fraction, Corpus, Label, Message, PairFilterConfig};
use crate::error::{Error, Result};
use crate::features::{FeatureContext, Polarity, RequestWords, SentimentLexicon};
use crate::io::{write_atomic, write_json};
use crate::textproc::{write_annotated, Tag, TaggedSentence};

/// Features the generator can plant, with the scale dividing each value.
pub const PLANTABLE: [(&str, f64); 3] = [("length_chars", 10.0), ("positive", 1.0), ("negative", 1.0)];

/// Words that raise retweet counts in the unpaired corpus.
pub const POPULARITY_WORDS: [&str; 6] = ["breaking", "exclusive", "giveaway", "leaked", "premiere", "contest"];

const START: i64 = 1_356_998_400;
const MAX_EXTRA_CHARS: usize = 40;
const MIN_STOPWORD_FRACTION: f64 = 0.1;
const MAX_BODY_TOKENS: usize = 13;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SyntheticSpec {
    pub authors: usize,
    pub pairs_per_author: usize,
    /// Planted weight per feature name; see [`PLANTABLE`].
    pub weights: BTreeMap<String, f64>,
    /// Standard deviation of the per-message quality noise.
    pub noise: f64,
    pub seed: u64,
    /// Added to author numbers so separately generated corpora can have
    /// disjoint authors.
    pub author_offset: usize,
    pub identical_per_author: usize,
    pub history_per_author: usize,
    pub unpaired_messages: usize,
    pub headlines: usize,
    pub followers: (u64, u64),
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            authors: 200,
            pairs_per_author: 50,
            weights: [("length_chars", 1.0), ("positive", 1.0), ("negative", -1.0)]
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
            noise: 1.0,
            seed: 0,
            author_offset: 0,
            identical_per_author: 4,
            history_per_author: 10,
            unpaired_messages: 6000,
            headlines: 1500,
            followers: (6_000, 200_000),
        }
    }
}

impl SyntheticSpec {
    pub fn validate(&self, filter: &PairFilterConfig) -> Result<()> {
        let bad = |m: String| Err(Error::Synthetic(m));
        if self.authors == 0 || self.pairs_per_author == 0 {
            return bad("need at least one author and one pair per author".into());
        }
        if self.pairs_per_author > filter.author_cap {
            return bad(format!(
                "{} pairs per author exceeds the author cap of {}",
                self.pairs_per_author, filter.author_cap
            ));
        }
        if self.followers.0 <= filter.min_followers || self.followers.1 < self.followers.0 {
            return bad(format!(
                "follower range {:?} must lie above the minimum of {}",
                self.followers, filter.min_followers
            ));
        }
        if filter.max_lag_hours < 11.0 {
            return bad(format!("lags reach 11 h but the filter allows {} h", filter.max_lag_hours));
        }
        if !(self.noise >= 0.0 && self.noise.is_finite()) {
            return bad(format!("noise must be finite and non-negative, got {}", self.noise));
        }
        for (name, w) in &self.weights {
            if !PLANTABLE.iter().any(|(p, _)| p == name) {
                return bad(format!(
                    "cannot plant {name:?}; plantable features are length_chars, positive, negative"
                ));
            }
            if !w.is_finite() {
                return bad(format!("weight for {name} is not finite"));
            }
        }
        if self.unpaired_messages < 20 {
            return bad("need at least 20 unpaired messages".into());
        }
        if self.headlines == 0 {
            return bad("need at least one headline".into());
        }
        Ok(())
    }

    fn weight(&self, name: &str) -> f64 {
        self.weights.get(name).copied().unwrap_or(0.0)
    }
}

/// Ground truth for one kept pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedPair {
    pub t1: String,
    pub t2: String,
    pub author: String,
    pub label: Label,
    pub quality: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticCorpus {
    pub spec: SyntheticSpec,
    pub paired: Vec<Message>,
    pub unpaired: Vec<Message>,
    pub headlines: Vec<String>,
    pub lexicon: SentimentLexicon,
    pub truth: Vec<PlantedPair>,
}

impl SyntheticCorpus {
    /// Feature context over this corpus with the bundled request words and
    /// no tagger.
    pub fn context(&self, cfg: &ContextConfig) -> Result<FeatureContext> {
        build_context(
            &self.paired,
            &self.unpaired,
            &self.headlines,
            self.lexicon.clone(),
            RequestWords::default(),
            None,
            cfg,
        )
    }

    pub fn prepare(&self, ctx: &FeatureContext) -> Result<Prepared> {
        prepare(&Corpus::from_messages(self.paired.clone()), &PairFilterConfig::paper(), ctx)
    }
}

#[derive(Debug, Clone, Copy)]
struct Variant {
    sentiment: u8,
    extra: usize,
    quality: f64,
}

struct Pending {
    author: String,
    followers: u64,
    ts: (i64, i64),
    body: grammar::Tagged,
    slot: usize,
    members: [Variant; 2],
    counts: (u64, u64),
    label: Label,
    url: String,
}

struct Gen {
    rng: ChaCha8Rng,
    next_id: u64,
    urls: HashSet<String>,
    nonces: HashSet<String>,
    lexicon: SentimentLexicon,
}

impl Gen {
    fn id(&mut self) -> String {
        self.next_id += 1;
        format!("{:08}", self.next_id)
    }

    fn url(&mut self) -> String {
        loop {
            let u = grammar::url(&mut self.rng);
            if self.urls.insert(u.clone()) {
                return u;
            }
        }
    }

    fn nonce(&mut self, sentiment: u8) -> String {
        loop {
            let w = grammar::nonce(&mut self.rng);
            if grammar::is_lexicon_word(&w) || self.lexicon.polarity(&w).is_some() || !self.nonces.insert(w.clone()) {
                continue;
            }
            match sentiment {
                1 => self.lexicon.insert(&w, Polarity::Positive),
                2 => self.lexicon.insert(&w, Polarity::Negative),
                _ => {}
            }
            return w;
        }
    }

    fn keeper_body(&mut self) -> (grammar::Tagged, usize) {
        loop {
            let (mut body, slot) = grammar::sentence_with_adjective(&mut self.rng);
            if body.len() > MAX_BODY_TOKENS {
                continue;
            }
            let lexicon = &self.lexicon;
            if body.iter().any(|(w, _)| lexicon.polarity(&w.to_lowercase()).is_some()) {
                continue;
            }
            body[slot].0 = "bakotic".to_string();
            if stopword_fraction(&grammar::render(&body)) >= MIN_STOPWORD_FRACTION {
                return (body, slot);
            }
        }
    }

    fn plain_sentence(&mut self) -> String {
        loop {
            let s = grammar::render(&grammar::sentence(&mut self.rng));
            if stopword_fraction(&s) >= MIN_STOPWORD_FRACTION {
                return s;
            }
        }
    }
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

#[derive(Clone, Copy)]
enum Event {
    Keeper(bool),
    Decoy,
    Identical,
    History,
}

/// Build every corpus described by `spec`. Same spec, same output.
pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<SyntheticCorpus> {
    spec.validate(&PairFilterConfig::paper())?;
    let mut g = Gen {
        rng: ChaCha8Rng::seed_from_u64(spec.seed),
        next_id: 0,
        urls: HashSet::new(),
        nonces: HashSet::new(),
        lexicon: SentimentLexicon::bundled(),
    };
    let scale: BTreeMap<&str, f64> = PLANTABLE.into_iter().collect();
    let (w_len, w_pos, w_neg) = (
        spec.weight("length_chars") / scale["length_chars"],
        spec.weight("positive") / scale["positive"],
        spec.weight("negative") / scale["negative"],
    );

    let mut paired = Vec::new();
    let mut pending: Vec<Pending> = Vec::new();
    for a in 0..spec.authors {
        let author = format!("u{:04}", a + spec.author_offset);
        let followers = g.rng.random_range(spec.followers.0..=spec.followers.1);
        let p = spec.pairs_per_author;
        let mut second = vec![false; p];
        for s in second.iter_mut().take(p / 2) {
            *s = true;
        }
        if p % 2 == 1 {
            second[p - 1] = g.rng.random_bool(0.5);
        }
        second.shuffle(&mut g.rng);
        let mut events: Vec<Event> = second.into_iter().map(Event::Keeper).collect();
        events.extend(std::iter::repeat_n(Event::Decoy, p));
        events.extend(std::iter::repeat_n(Event::Identical, spec.identical_per_author));
        events.extend(std::iter::repeat_n(Event::History, spec.history_per_author));
        events.shuffle(&mut g.rng);

        let mut t = START + g.rng.random_range(0..30 * 86_400);
        for ev in events {
            t += g.rng.random_range(1_800..=30 * 3_600);
            let lag = g.rng.random_range(600..=11 * 3_600);
            match ev {
                Event::Keeper(better_second) => {
                    let (body, slot) = g.keeper_body();
                    let mut members = [Variant { sentiment: 0, extra: 0, quality: 0.0 }; 2];
                    for m in members.iter_mut() {
                        m.sentiment = g.rng.random_range(0..3);
                        m.extra = g.rng.random_range(0..=MAX_EXTRA_CHARS);
                        m.quality = w_len * m.extra as f64
                            + w_pos * (m.sentiment == 1) as u8 as f64
                            + w_neg * (m.sentiment == 2) as u8 as f64
                            + spec.noise * normal(&mut g.rng);
                    }
                    let (better, worse) = if members[0].quality >= members[1].quality {
                        (members[0], members[1])
                    } else {
                        (members[1], members[0])
                    };
                    let base = g.rng.random_range(0..=40u64);
                    let margin = g.rng.random_range(0..=30u64);
                    let (members, counts, label) = if better_second {
                        ([worse, better], (base, base + 10 + margin), Label::T2Wins)
                    } else {
                        ([better, worse], (base + 15 + margin, base), Label::T1Wins)
                    };
                    let url = g.url();
                    pending.push(Pending {
                        author: author.clone(),
                        followers,
                        ts: (t, t + lag),
                        body,
                        slot,
                        members,
                        counts,
                        label,
                        url,
                    });
                }
                Event::Decoy => {
                    let body = loop {
                        let b = (0..3).map(|_| g.plain_sentence()).collect::<Vec<_>>().join(" ");
                        if !b.starts_with('@') {
                            break b;
                        }
                    };
                    let url = g.url();
                    let (n1, n2) = (g.rng.random_range(0..60), g.rng.random_range(0..60));
                    let (i1, i2) = (g.id(), g.id());
                    paired.push(Message::new(i1, &author, t, format!("{body} {url}"), n1, followers, false));
                    paired.push(Message::new(i2, &author, t + lag, format!("{body} wow {url}"), n2, followers, false));
                }
                Event::Identical => {
                    let body = g.plain_sentence();
                    let url = g.url();
                    let n1: u64 = g.rng.random_range(0..=14);
                    let sd = 0.3 + 0.4 * lag as f64 / 3_600.0 + followers as f64 / 100_000.0;
                    let n2 = (n1 as f64 + sd * normal(&mut g.rng)).round().max(0.0) as u64;
                    let (i1, i2) = (g.id(), g.id());
                    paired.push(Message::new(i1, &author, t, format!("{body} {url}"), n1, followers, false));
                    paired.push(Message::new(i2, &author, t + lag, format!("{body}  {url}"), n2, followers, false));
                }
                Event::History => {
                    let mut text = g.plain_sentence();
                    if g.rng.random_bool(0.5) {
                        text = format!("{text} {}", g.url());
                    }
                    let n = g.rng.random_range(0..60);
                    let id = g.id();
                    paired.push(Message::new(id, &author, t, text, n, followers, false));
                }
            }
        }
    }

    // Hashtag placement patterns cycle evenly within each label class.
    let patterns = [(false, false), (true, false), (false, true), (true, true)];
    let mut truth = Vec::with_capacity(pending.len());
    let mut assignment = vec![(false, false); pending.len()];
    for class in [Label::T1Wins, Label::T2Wins] {
        let mut idx: Vec<usize> = (0..pending.len()).filter(|&i| pending[i].label == class).collect();
        idx.shuffle(&mut g.rng);
        for (k, i) in idx.into_iter().enumerate() {
            assignment[i] = patterns[k % 4];
        }
    }
    for (pp, tags) in pending.into_iter().zip(assignment) {
        let mut texts = Vec::with_capacity(2);
        for (m, with_tag) in pp.members.iter().zip([tags.0, tags.1]) {
            let mut words = pp.body.clone();
            words[pp.slot].0 = g.nonce(m.sentiment);
            if with_tag {
                words.push((grammar::hashtag(&mut g.rng), Tag::Hashtag));
            }
            texts.push(grammar::render(&words));
        }
        let base = texts.iter().map(|t| t.chars().count()).max().unwrap_or(0);
        let (i1, i2) = (g.id(), g.id());
        let ids = [i1.clone(), i2.clone()];
        for (k, text) in texts.iter().enumerate() {
            let pad = base - text.chars().count() + pp.members[k].extra + 1;
            let full = format!("{text}{}{}", " ".repeat(pad), pp.url);
            let (ts, n) = if k == 0 { (pp.ts.0, pp.counts.0) } else { (pp.ts.1, pp.counts.1) };
            paired.push(Message::new(ids[k].clone(), &pp.author, ts, full, n, pp.followers, false));
        }
        truth.push(PlantedPair {
            t1: i1,
            t2: i2,
            author: pp.author,
            label: pp.label,
            quality: [pp.members[0].quality, pp.members[1].quality],
        });
    }

    let unpaired = unpaired_corpus(&mut g, spec.unpaired_messages);
    let headlines = (0..spec.headlines).map(|_| grammar::render(&grammar::headline(&mut g.rng))).collect();
    Ok(SyntheticCorpus {
        spec: spec.clone(),
        paired,
        unpaired,
        headlines,
        lexicon: g.lexicon,
        truth,
    })
}

/// Unrelated messages whose retweet counts follow audience size, boosted
/// when a popularity word appears. About a tenth are retweets or replies.
fn unpaired_corpus(g: &mut Gen, n: usize) -> Vec<Message> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let author = format!("p{:04}", i % 500);
        let followers = 10f64.powf(g.rng.random_range(2.0..6.0)).round() as u64;
        let mut text = grammar::render(&grammar::sentence(&mut g.rng));
        let popular = g.rng.random_bool(0.3);
        if popular {
            let w = POPULARITY_WORDS[g.rng.random_range(0..POPULARITY_WORDS.len())];
            text = format!("{w} : {text}");
        }
        if g.rng.random_bool(0.4) {
            text = format!("{text} {}", g.url());
        }
        let kind = g.rng.random_range(0..20);
        let is_rt = kind == 0;
        if kind == 1 {
            text = format!("RT @user{} : {text}", g.rng.random_range(0..50));
        } else if kind == 2 {
            text = format!("@user{} {text}", g.rng.random_range(0..50));
        }
        let boost = if popular { 8.0 } else { 1.0 };
        let mean = followers as f64 / 2_000.0 * boost * (0.5 * normal(&mut g.rng)).exp();
        let rt = mean.round() as u64;
        let ts = START + g.rng.random_range(0..365 * 86_400);
        let id = format!("x{:08}", i + 1);
        out.push(Message::new(id, &author, ts, text, rt, followers, is_rt));
    }
    out
}

/// Paths written by [`write_synthetic`], relative to the output directory.
pub const SYNTH_FILES: [&str; 7] = [
    "paired.tsv",
    "unpaired.tsv",
    "headlines.txt",
    "lexicon.tsv",
    "tagged.tsv",
    "truth.json",
    "spec.json",
];

/// Write every synthetic artifact into `dir`.
pub fn write_synthetic(corpus: &SyntheticCorpus, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    write_atomic(dir.join("paired.tsv"), format_corpus(&corpus.paired).as_bytes())?;
    write_atomic(dir.join("unpaired.tsv"), format_corpus(&corpus.unpaired).as_bytes())?;
    let mut h = corpus.headlines.join("\n");
    h.push('\n');
    write_atomic(dir.join("headlines.txt"), h.as_bytes())?;
    write_atomic(dir.join("lexicon.tsv"), corpus.lexicon.to_tsv().as_bytes())?;
    let tagged = tagger_fixture(580, corpus.spec.seed);
    write_atomic(dir.join("tagged.tsv"), write_annotated(&tagged).as_bytes())?;
    write_json(dir.join("truth.json"), &corpus.truth)?;
    write_json(dir.join("spec.json"), &corpus.spec)?;
    Ok(())
}

/// Annotated sentences for tagger training, drawn from the generator grammar.
pub fn tagger_fixture(sentences: usize, seed: u64) -> Vec<TaggedSentence> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..sentences)
        .map(|_| {
            let mut s = if rng.random_bool(0.1) {
                grammar::headline(&mut rng)
            } else if rng.random_bool(0.25) {
                let (mut s, slot) = grammar::sentence_with_adjective(&mut rng);
                s[slot].0 = grammar::nonce(&mut rng);
                s
            } else {
                grammar::sentence(&mut rng)
            };
            if rng.random_bool(0.3) {
                s.push((grammar::url(&mut rng), Tag::Url));
            }
            s
        })
        .collect()
}
