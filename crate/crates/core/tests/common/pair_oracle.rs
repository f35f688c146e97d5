//! O(N²) pair-mining oracle that tests every rule on every ordered message
//! pair.

use std::collections::BTreeMap;

use wording::corpus::{DiffMode, Label, LanguageFilter, Message, PairFilterConfig, TacPair};

pub fn no_ws(s: &str) -> String {
    s.chars().filter(|c| !c.is_whitespace()).collect()
}

pub fn oracle_cosine(a: &str, b: &str) -> f64 {
    let norms = |t: &str| {
        let mut m = BTreeMap::new();
        for tok in wording::textproc::tokenize(t) {
            *m.entry(tok.norm).or_insert(0u32) += 1;
        }
        m
    };
    let (x, y) = (norms(a), norms(b));
    if x.is_empty() || y.is_empty() {
        return 0.0;
    }
    let mut dot = 0.0;
    for (k, v) in &x {
        if let Some(w) = y.get(k) {
            dot += (*v as f64) * (*w as f64);
        }
    }
    let nx = x.values().map(|v| (*v as f64).powi(2)).sum::<f64>().sqrt();
    let ny = y.values().map(|v| (*v as f64).powi(2)).sum::<f64>().sqrt();
    (dot / (nx * ny)).min(1.0)
}

pub fn eligible(m: &Message) -> bool {
    !m.is_retweet && !m.text.starts_with("RT @") && m.urls.len() == 1
}

/// Pairs (i, j) passing steps 1–4: i, j are the two earliest of an
/// acceptable (author, url) group.
pub fn oracle_groups(ms: &[Message], max_posts: usize) -> Vec<(usize, usize)> {
    let before = |a: &Message, b: &Message| (a.timestamp, &a.id) < (b.timestamp, &b.id);
    let mut out = Vec::new();
    for i in 0..ms.len() {
        for j in 0..ms.len() {
            let (a, b) = (&ms[i], &ms[j]);
            if i == j || !eligible(a) || !eligible(b) {
                continue;
            }
            if a.author_id != b.author_id || a.urls != b.urls {
                continue;
            }
            let group: Vec<&Message> = ms
                .iter()
                .filter(|m| eligible(m) && m.author_id == a.author_id && m.urls == a.urls)
                .collect();
            if group.len() > max_posts {
                continue;
            }
            let rank = |x: &Message| group.iter().filter(|g| before(g, x)).count();
            if rank(a) == 0 && rank(b) == 1 {
                out.push((i, j));
            }
        }
    }
    out
}

pub fn oracle_pairs(ms: &[Message], cfg: &PairFilterConfig) -> (Vec<TacPair>, Vec<TacPair>) {
    let mut stage: Vec<TacPair> = oracle_groups(ms, cfg.max_same_url_posts)
        .into_iter()
        .filter_map(|(i, j)| {
            let (a, b) = (&ms[i], &ms[j]);
            let lag = b.timestamp - a.timestamp;
            let ok = no_ws(&a.text) != no_ws(&b.text)
                && lag as f64 <= cfg.max_lag_hours * 3600.0
                && a.follower_count > cfg.min_followers
                && b.follower_count > cfg.min_followers;
            ok.then(|| TacPair {
                t1: a.clone(),
                t2: b.clone(),
                n1: a.retweet_count,
                n2: b.retweet_count,
                lag_seconds: lag,
                similarity: oracle_cosine(&a.text, &b.text),
                label: None,
            })
        })
        .collect();

    if cfg.similarity_keep_quantile < 1.0 {
        let k = (cfg.similarity_keep_quantile * stage.len() as f64).ceil() as usize;
        let sims: Vec<f64> = stage.iter().map(|p| p.similarity).collect();
        stage.retain(|p| sims.iter().filter(|&&s| s <= p.similarity).count() <= k);
    }

    let snapshot = stage.clone();
    stage.retain(|p| {
        let earlier = snapshot
            .iter()
            .filter(|q| {
                q.t1.author_id == p.t1.author_id
                    && (q.t1.timestamp, &q.t1.id) < (p.t1.timestamp, &p.t1.id)
            })
            .count();
        earlier < cfg.author_cap
    });
    for p in &mut stage {
        p.label = match p.n2.cmp(&p.n1) {
            std::cmp::Ordering::Greater => Some(Label::T2Wins),
            std::cmp::Ordering::Less => Some(Label::T1Wins),
            std::cmp::Ordering::Equal => None,
        };
    }
    stage.sort_by(|a, b| (a.t1.timestamp, &a.t1.id).cmp(&(b.t1.timestamp, &b.t1.id)));
    let preference = stage.clone();

    let diffs: Vec<i64> = stage.iter().map(|p| p.n2 as i64 - p.n1 as i64).collect();
    let labeled = stage
        .into_iter()
        .filter(|p| {
            let d = p.n2 as i64 - p.n1 as i64;
            let tail = match cfg.diff_mode {
                DiffMode::Absolute { hi, lo } => d >= hi || d <= lo,
                DiffMode::Percentile { p } => {
                    let m = (p * diffs.len() as f64).floor() as usize;
                    let below = diffs.iter().filter(|&&x| x < d).count();
                    let above = diffs.iter().filter(|&&x| x > d).count();
                    m > 0 && (below < m || above < m)
                }
            };
            d != 0 && tail
        })
        .collect();
    (labeled, preference)
}

/// Same pairs in the same order with the same labels and statistics.
pub fn same(a: &[TacPair], b: &[TacPair]) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(x, y)| {
            (&x.t1.id, &x.t2.id, x.label, x.n1, x.n2, x.lag_seconds) == (&y.t1.id, &y.t2.id, y.label, y.n1, y.n2, y.lag_seconds)
                && (x.similarity - y.similarity).abs() < 1e-12
        })
}

pub fn assert_same(a: &[TacPair], b: &[TacPair]) {
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(b) {
        assert_eq!((&x.t1.id, &x.t2.id, x.label), (&y.t1.id, &y.t2.id, y.label));
        assert_eq!((x.n1, x.n2, x.lag_seconds), (y.n1, y.n2, y.lag_seconds));
        assert!((x.similarity - y.similarity).abs() < 1e-12);
    }
}

pub fn configs() -> Vec<PairFilterConfig> {
    vec![
        PairFilterConfig {
            language: LanguageFilter::Off,
            ..PairFilterConfig::default()
        },
        PairFilterConfig {
            language: LanguageFilter::Off,
            author_cap: 2,
            max_lag_hours: 6.0,
            ..PairFilterConfig::paper()
        },
        PairFilterConfig {
            language: LanguageFilter::Off,
            similarity_keep_quantile: 1.0,
            diff_mode: DiffMode::Percentile { p: 0.25 },
            max_same_url_posts: 3,
            ..PairFilterConfig::default()
        },
    ]
}
