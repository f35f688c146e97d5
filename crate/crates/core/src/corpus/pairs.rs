//! Topic- and author-controlled pair mining.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::message::{Corpus, Message};
use super::similarity::tf_cosine;
use crate::error::{Error, Result};
use crate::textproc::{tokenize, TokenKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    #[serde(rename = "T1_WINS")]
    T1Wins,
    #[serde(rename = "T2_WINS")]
    T2Wins,
}

impl Label {
    pub fn from_counts(n1: u64, n2: u64) -> Option<Label> {
        match n2.cmp(&n1) {
            std::cmp::Ordering::Greater => Some(Label::T2Wins),
            std::cmp::Ordering::Less => Some(Label::T1Wins),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::T1Wins => "T1_WINS",
            Label::T2Wins => "T2_WINS",
        }
    }

    /// 1 when the later message won.
    pub fn as_target(self) -> u8 {
        (self == Label::T2Wins) as u8
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TacPair {
    pub t1: Message,
    pub t2: Message,
    pub n1: u64,
    pub n2: u64,
    pub lag_seconds: i64,
    pub similarity: f64,
    pub label: Option<Label>,
}

impl TacPair {
    fn new(t1: &Message, t2: &Message) -> TacPair {
        TacPair {
            t1: t1.clone(),
            t2: t2.clone(),
            n1: t1.retweet_count,
            n2: t2.retweet_count,
            lag_seconds: t2.timestamp - t1.timestamp,
            similarity: tf_cosine(&norm_tokens(&t1.text), &norm_tokens(&t2.text)),
            label: None,
        }
    }

    pub fn author_id(&self) -> &str {
        &self.t1.author_id
    }

    pub fn diff(&self) -> i64 {
        self.n2 as i64 - self.n1 as i64
    }

    /// Stable identifier built from the member ids.
    pub fn key(&self) -> String {
        format!("{}|{}", self.t1.id, self.t2.id)
    }
}

fn norm_tokens(text: &str) -> Vec<String> {
    tokenize(text).into_iter().map(|t| t.norm).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum DiffMode {
    /// Keep the `p` most extreme pairs on each tail of n2 − n1.
    Percentile { p: f64 },
    /// Keep pairs with n2 − n1 ≥ hi or ≤ lo.
    Absolute { hi: i64, lo: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LanguageFilter {
    Off,
    /// Keep messages whose word tokens include at least `min_fraction`
    /// English stopwords.
    Stopwords { min_fraction: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PairFilterConfig {
    pub max_lag_hours: f64,
    pub min_followers: u64,
    pub similarity_keep_quantile: f64,
    pub diff_mode: DiffMode,
    pub author_cap: usize,
    pub max_same_url_posts: usize,
    pub language: LanguageFilter,
}

impl Default for PairFilterConfig {
    fn default() -> Self {
        PairFilterConfig {
            max_lag_hours: 12.0,
            min_followers: 5000,
            similarity_keep_quantile: 0.5,
            diff_mode: DiffMode::Percentile { p: 0.05 },
            author_cap: 50,
            max_same_url_posts: 5,
            language: LanguageFilter::Stopwords { min_fraction: 0.08 },
        }
    }
}

impl PairFilterConfig {
    /// Thresholds of the original study: absolute count differences
    /// (+10 / −15) instead of percentiles.
    pub fn paper() -> Self {
        PairFilterConfig {
            diff_mode: DiffMode::Absolute { hi: 10, lo: -15 },
            ..PairFilterConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if !(self.max_lag_hours.is_finite() && self.max_lag_hours > 0.0) {
            return bad("max_lag_hours must be positive");
        }
        if self.min_followers == 0 {
            return bad("min_followers must be positive");
        }
        if !(self.similarity_keep_quantile > 0.0 && self.similarity_keep_quantile <= 1.0) {
            return bad("similarity_keep_quantile must lie in (0, 1]");
        }
        if self.author_cap == 0 {
            return bad("author_cap must be positive");
        }
        if self.max_same_url_posts == 0 {
            return bad("max_same_url_posts must be positive");
        }
        match self.diff_mode {
            DiffMode::Percentile { p } if !(p > 0.0 && p <= 0.5) => {
                return bad("percentile p must lie in (0, 0.5]")
            }
            DiffMode::Absolute { hi, lo } if hi <= 0 || lo >= 0 => {
                return bad("absolute thresholds need hi > 0 and lo < 0")
            }
            _ => {}
        }
        if let LanguageFilter::Stopwords { min_fraction } = self.language {
            if !(0.0..=1.0).contains(&min_fraction) {
                return bad("stopword fraction must lie in [0, 1]");
            }
        }
        Ok(())
    }
}

fn stopwords() -> &'static HashSet<&'static str> {
    static S: OnceLock<HashSet<&'static str>> = OnceLock::new();
    S.get_or_init(|| {
        include_str!("../../data/stopwords_en.txt")
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .collect()
    })
}

/// Fraction of word tokens found in the bundled stopword list; 0 when the
/// text has no word tokens.
pub fn stopword_fraction(text: &str) -> f64 {
    let words: Vec<_> = tokenize(text)
        .into_iter()
        .filter(|t| t.kind == TokenKind::Word)
        .collect();
    if words.is_empty() {
        return 0.0;
    }
    let hits = words.iter().filter(|t| stopwords().contains(t.norm.as_str())).count();
    hits as f64 / words.len() as f64
}

impl LanguageFilter {
    pub fn accepts(&self, m: &Message) -> bool {
        match *self {
            LanguageFilter::Off => true,
            LanguageFilter::Stopwords { min_fraction } => stopword_fraction(&m.text) >= min_fraction,
        }
    }
}

/// Output of pair mining.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MinedPairs {
    /// Pairs surviving every step, each with a label.
    pub labeled: Vec<TacPair>,
    /// Pairs surviving steps 1–8 (before the count-difference filter),
    /// labeled where n1 ≠ n2. A superset of `labeled`.
    pub preference: Vec<TacPair>,
}

/// Candidate pairs after steps 1–4: the two earliest messages of every
/// (author, URL) group of acceptable size.
fn candidate_pairs<'a>(
    messages: &'a [Message],
    max_same_url_posts: usize,
    keep: &dyn Fn(&Message) -> bool,
) -> Vec<(&'a Message, &'a Message)> {
    let mut groups: BTreeMap<(&str, &str), Vec<&Message>> = BTreeMap::new();
    for m in messages {
        if m.is_retweet_like() || m.urls.len() != 1 || !keep(m) {
            continue;
        }
        groups
            .entry((m.author_id.as_str(), m.urls[0].as_str()))
            .or_default()
            .push(m);
    }
    let mut out = Vec::new();
    for (_, mut g) in groups {
        if g.len() < 2 || g.len() > max_same_url_posts {
            continue;
        }
        g.sort_by(|a, b| a.timestamp.cmp(&b.timestamp).then_with(|| a.id.cmp(&b.id)));
        out.push((g[0], g[1]));
    }
    out
}

fn strip_whitespace(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).collect()
}

fn sort_by_t1(pairs: &mut [TacPair]) {
    pairs.sort_by(|a, b| {
        a.t1.timestamp
            .cmp(&b.t1.timestamp)
            .then_with(|| a.t1.id.cmp(&b.t1.id))
    });
}

/// Similarity threshold for the keep quantile `q` over `sims`: the
/// (⌈q·n⌉ + 1)-th smallest value. `None` means nothing is dropped.
pub fn similarity_threshold(sims: &[f64], q: f64) -> Option<f64> {
    if q >= 1.0 || sims.is_empty() {
        return None;
    }
    let mut sorted = sims.to_vec();
    sorted.sort_by(f64::total_cmp);
    let k = (q * sorted.len() as f64).ceil() as usize;
    sorted.get(k).copied()
}

/// Inclusive tail thresholds (lo, hi) keeping the `p` most extreme count
/// differences on each side; `None` when fewer than one pair per tail.
pub fn percentile_bounds(diffs: &[i64], p: f64) -> Option<(i64, i64)> {
    let n = diffs.len();
    let m = (p * n as f64).floor() as usize;
    if m == 0 {
        return None;
    }
    let mut sorted = diffs.to_vec();
    sorted.sort_unstable();
    Some((sorted[m - 1], sorted[n - m]))
}

/// Mine TAC pairs with the language filter named in `cfg`.
pub fn mine_pairs(corpus: &Corpus, cfg: &PairFilterConfig) -> Result<MinedPairs> {
    let lang = cfg.language;
    mine_pairs_with(corpus, cfg, &move |m| lang.accepts(m))
}

/// Mine TAC pairs with a caller-supplied language predicate (the
/// `language` field of `cfg` is ignored).
pub fn mine_pairs_with(
    corpus: &Corpus,
    cfg: &PairFilterConfig,
    language: &dyn Fn(&Message) -> bool,
) -> Result<MinedPairs> {
    cfg.validate()?;
    if corpus.is_empty() {
        return Err(Error::EmptyInput("corpus"));
    }
    let max_lag = cfg.max_lag_hours * 3600.0;

    let mut pairs: Vec<TacPair> = candidate_pairs(&corpus.messages, cfg.max_same_url_posts, language)
        .into_iter()
        .filter(|(a, b)| strip_whitespace(&a.text) != strip_whitespace(&b.text))
        .filter(|(a, b)| {
            (b.timestamp - a.timestamp) as f64 <= max_lag
                && a.follower_count > cfg.min_followers
                && b.follower_count > cfg.min_followers
        })
        .map(|(a, b)| TacPair::new(a, b))
        .collect();

    let sims: Vec<f64> = pairs.iter().map(|p| p.similarity).collect();
    if let Some(thr) = similarity_threshold(&sims, cfg.similarity_keep_quantile) {
        pairs.retain(|p| p.similarity < thr);
    }

    sort_by_t1(&mut pairs);
    let mut per_author: HashMap<String, usize> = HashMap::new();
    pairs.retain(|p| {
        let c = per_author.entry(p.author_id().to_string()).or_insert(0);
        *c += 1;
        *c <= cfg.author_cap
    });

    for p in &mut pairs {
        p.label = Label::from_counts(p.n1, p.n2);
    }
    let preference = pairs.clone();

    let keep_diff: Box<dyn Fn(i64) -> bool> = match cfg.diff_mode {
        DiffMode::Absolute { hi, lo } => Box::new(move |d| d >= hi || d <= lo),
        DiffMode::Percentile { p } => {
            let diffs: Vec<i64> = pairs.iter().map(TacPair::diff).collect();
            match percentile_bounds(&diffs, p) {
                Some((lo, hi)) => Box::new(move |d| d <= lo || d >= hi),
                None => Box::new(|_| false),
            }
        }
    };
    pairs.retain(|p| p.diff() != 0 && keep_diff(p.diff()));

    Ok(MinedPairs {
        labeled: pairs,
        preference,
    })
}

/// Labeled TAC pairs, sorted by t1 timestamp.
pub fn build_tac_pairs(corpus: &Corpus, cfg: &PairFilterConfig) -> Result<Vec<TacPair>> {
    Ok(mine_pairs(corpus, cfg)?.labeled)
}

/// Pairs whose texts are identical once whitespace is removed, after the
/// retweet, URL, language and grouping steps of pair mining. No lag,
/// follower, similarity or count filtering is applied.
pub fn build_identical_pairs(corpus: &Corpus, language: LanguageFilter) -> Result<Vec<TacPair>> {
    if corpus.is_empty() {
        return Err(Error::EmptyInput("corpus"));
    }
    build_identical_pairs_with(corpus, PairFilterConfig::default().max_same_url_posts, &move |m| {
        language.accepts(m)
    })
}

pub fn build_identical_pairs_with(
    corpus: &Corpus,
    max_same_url_posts: usize,
    language: &dyn Fn(&Message) -> bool,
) -> Result<Vec<TacPair>> {
    let mut pairs: Vec<TacPair> = candidate_pairs(&corpus.messages, max_same_url_posts, language)
        .into_iter()
        .filter(|(a, b)| strip_whitespace(&a.text) == strip_whitespace(&b.text))
        .map(|(a, b)| {
            let mut p = TacPair::new(a, b);
            p.label = Label::from_counts(p.n1, p.n2);
            p
        })
        .collect();
    sort_by_t1(&mut pairs);
    Ok(pairs)
}

pub const PAIR_EXPORT_HEADER: &str = "t1_id\tt2_id\tauthor_id\tn1\tn2\tlag_seconds\tsimilarity\tlabel";

/// Line-delimited pair export: member ids, counts, lag, similarity, label
/// (`-` when unlabeled).
pub fn format_pairs(pairs: &[TacPair]) -> String {
    let mut s = String::from(PAIR_EXPORT_HEADER);
    s.push('\n');
    for p in pairs {
        s.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{:.6}\t{}\n",
            p.t1.id,
            p.t2.id,
            p.author_id(),
            p.n1,
            p.n2,
            p.lag_seconds,
            p.similarity,
            p.label.map_or("-", Label::as_str)
        ));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn msg(id: &str, author: &str, ts: i64, text: &str, rt: u64) -> Message {
        Message::new(id, author, ts, text, rt, 6000, false)
    }

    fn loose() -> PairFilterConfig {
        PairFilterConfig {
            similarity_keep_quantile: 1.0,
            diff_mode: DiffMode::Absolute { hi: 1, lo: -1 },
            language: LanguageFilter::Off,
            ..PairFilterConfig::default()
        }
    }

    #[test]
    fn spacing_identical_pair_is_dropped() {
        let c = Corpus::from_messages(vec![
            msg("1", "a", 0, "A b c http://x.co/1", 1),
            msg("2", "a", 3600, "A  b c http://x.co/1", 30),
        ]);
        assert!(build_tac_pairs(&c, &PairFilterConfig::paper()).unwrap().is_empty());
        assert!(build_tac_pairs(&c, &loose()).unwrap().is_empty());
    }

    #[test]
    fn simple_pair_is_labeled() {
        let c = Corpus::from_messages(vec![
            msg("1", "a", 0, "good news http://x.co/1", 1),
            msg("2", "a", 60, "great news everyone http://x.co/1", 30),
            msg("3", "a", 120, "third take http://x.co/1", 0),
        ]);
        let pairs = build_tac_pairs(&c, &loose()).unwrap();
        assert_eq!(pairs.len(), 1);
        assert_eq!(pairs[0].t1.id, "1");
        assert_eq!(pairs[0].t2.id, "2");
        assert_eq!(pairs[0].label, Some(Label::T2Wins));
        assert_eq!(pairs[0].lag_seconds, 60);
    }

    #[test]
    fn follower_and_lag_rules() {
        let mut a = msg("1", "a", 0, "one http://x.co/1", 1);
        let b = msg("2", "a", 60, "two http://x.co/1", 30);
        a.follower_count = 5000;
        let c = Corpus::from_messages(vec![a, b]);
        assert!(build_tac_pairs(&c, &loose()).unwrap().is_empty());

        let c = Corpus::from_messages(vec![
            msg("1", "a", 0, "one http://x.co/1", 1),
            msg("2", "a", 12 * 3600 + 1, "two http://x.co/1", 30),
        ]);
        assert!(build_tac_pairs(&c, &loose()).unwrap().is_empty());
    }

    #[test]
    fn identical_pairs_need_exact_case() {
        let c = Corpus::from_messages(vec![
            msg("1", "a", 0, "four more years http://x.co/1", 1),
            msg("2", "a", 10, "four  more years http://x.co/1", 2),
            msg("3", "b", 0, "four more years http://x.co/2", 1),
            msg("4", "b", 10, "Four more years http://x.co/2", 2),
        ]);
        let p = build_identical_pairs(&c, LanguageFilter::Off).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p[0].t1.id, "1");
    }

    #[test]
    fn similarity_threshold_index() {
        assert_eq!(similarity_threshold(&[0.1, 0.2, 0.3, 0.4], 0.5), Some(0.3));
        assert_eq!(similarity_threshold(&[0.1, 0.2, 0.3, 0.4, 0.5], 0.5), Some(0.4));
        assert_eq!(similarity_threshold(&[0.1], 0.5), None);
        assert_eq!(similarity_threshold(&[0.1, 0.2], 1.0), None);
    }

    #[test]
    fn percentile_bounds_per_tail() {
        let d: Vec<i64> = (1..=20).collect();
        assert_eq!(percentile_bounds(&d, 0.05), Some((1, 20)));
        assert_eq!(percentile_bounds(&d, 0.1), Some((2, 19)));
        assert_eq!(percentile_bounds(&d[..19], 0.05), None);
    }

    #[test]
    fn config_validation() {
        assert!(PairFilterConfig::default().validate().is_ok());
        assert!(PairFilterConfig::paper().validate().is_ok());
        let bad = PairFilterConfig {
            diff_mode: DiffMode::Percentile { p: 0.7 },
            ..PairFilterConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = PairFilterConfig {
            similarity_keep_quantile: 0.0,
            ..PairFilterConfig::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn stopword_heuristic() {
        assert!(stopword_fraction("this is the news") > 0.5);
        assert_eq!(stopword_fraction("NASA lanza sonda"), 0.0);
        assert_eq!(stopword_fraction("http://x.co #tag"), 0.0);
    }
}
