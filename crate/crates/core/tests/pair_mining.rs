//! Pair mining checked against an O(N²) oracle that tests every rule on
//! every ordered message pair.

mod common;

use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wording::corpus::{
    build_identical_pairs_with, mine_pairs_with, parse_corpus, format_corpus, Corpus, DiffMode,
    Label, LanguageFilter, PairFilterConfig,
};

use common::pair_oracle::{assert_same, configs, no_ws, oracle_groups, oracle_pairs};
use common::random_corpus;

#[test]
fn mining_matches_brute_force_oracle() {
    let start = std::time::Instant::now();
    let mut nonempty = 0;
    for seed in 0..20u64 {
        let ms = random_corpus(&mut ChaCha8Rng::seed_from_u64(seed), 500);
        let corpus = Corpus::from_messages(ms.clone());
        for cfg in configs() {
            let got = mine_pairs_with(&corpus, &cfg, &|_| true).unwrap();
            let (labeled, preference) = oracle_pairs(&ms, &cfg);
            assert_same(&got.labeled, &labeled);
            assert_same(&got.preference, &preference);
            nonempty += (!labeled.is_empty()) as usize;
        }
    }
    assert!(nonempty >= 40, "oracle comparisons were mostly vacuous");
    assert!(start.elapsed().as_secs_f64() < 10.0);
}

#[test]
fn identical_pairs_match_oracle() {
    for seed in 0..10u64 {
        let ms = random_corpus(&mut ChaCha8Rng::seed_from_u64(100 + seed), 400);
        let corpus = Corpus::from_messages(ms.clone());
        let got = build_identical_pairs_with(&corpus, 5, &|_| true).unwrap();
        let mut want: Vec<(String, String)> = oracle_groups(&ms, 5)
            .into_iter()
            .filter(|&(i, j)| no_ws(&ms[i].text) == no_ws(&ms[j].text))
            .map(|(i, j)| (ms[i].id.clone(), ms[j].id.clone()))
            .collect();
        let mut have: Vec<(String, String)> =
            got.iter().map(|p| (p.t1.id.clone(), p.t2.id.clone())).collect();
        want.sort();
        have.sort();
        assert_eq!(have, want);
        assert!(!want.is_empty());
    }
}

#[test]
fn paper_thresholds_round_trip_through_serialization() {
    let cfg = PairFilterConfig::paper();
    assert_eq!(cfg.max_lag_hours, 12.0);
    assert_eq!(cfg.min_followers, 5000);
    assert_eq!(cfg.author_cap, 50);
    assert_eq!(cfg.diff_mode, DiffMode::Absolute { hi: 10, lo: -15 });
    let json = serde_json::to_string(&cfg).unwrap();
    assert_eq!(serde_json::from_str::<PairFilterConfig>(&json).unwrap(), cfg);
}

#[test]
fn corpus_file_round_trip_preserves_mining() {
    let ms = random_corpus(&mut ChaCha8Rng::seed_from_u64(77), 300);
    let corpus = Corpus::from_messages(ms.clone());
    let back = parse_corpus(&format_corpus(&ms)).unwrap();
    assert_eq!(back.messages, corpus.messages);
    let cfg = &configs()[0];
    let a = mine_pairs_with(&corpus, cfg, &|_| true).unwrap();
    let b = mine_pairs_with(&back, cfg, &|_| true).unwrap();
    assert_eq!(a, b);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn emitted_pairs_satisfy_invariants(seed in any::<u64>(), n in 20usize..200, cap in 1usize..4, absolute in any::<bool>()) {
        let ms = random_corpus(&mut ChaCha8Rng::seed_from_u64(seed), n);
        let corpus = Corpus::from_messages(ms);
        let cfg = PairFilterConfig {
            language: LanguageFilter::Off,
            author_cap: cap,
            diff_mode: if absolute { DiffMode::Absolute { hi: 10, lo: -15 } } else { DiffMode::Percentile { p: 0.2 } },
            ..PairFilterConfig::default()
        };
        let mined = mine_pairs_with(&corpus, &cfg, &|_| true).unwrap();
        let again = mine_pairs_with(&corpus, &cfg, &|_| true).unwrap();
        prop_assert_eq!(serde_json::to_string(&mined).unwrap(), serde_json::to_string(&again).unwrap());

        let mut per_author: BTreeMap<&str, usize> = BTreeMap::new();
        for p in &mined.labeled {
            prop_assert!(p.t1.timestamp <= p.t2.timestamp);
            prop_assert_eq!(p.lag_seconds, p.t2.timestamp - p.t1.timestamp);
            prop_assert_eq!(&p.t1.author_id, &p.t2.author_id);
            prop_assert_eq!(p.t1.urls.len(), 1);
            prop_assert_eq!(&p.t1.urls, &p.t2.urls);
            prop_assert!((0.0..=1.0).contains(&p.similarity));
            prop_assert!(p.n1 != p.n2);
            prop_assert_eq!(p.label == Some(Label::T2Wins), p.n2 > p.n1);
            if absolute {
                prop_assert!(p.diff() >= 10 || p.diff() <= -15);
            }
            *per_author.entry(p.author_id()).or_default() += 1;
        }
        prop_assert!(per_author.values().all(|&c| c <= cap));
        for w in mined.labeled.windows(2) {
            prop_assert!(w[0].t1.timestamp <= w[1].t1.timestamp);
        }
        for p in &mined.labeled {
            prop_assert!(mined.preference.iter().any(|q| q.key() == p.key()));
        }
    }
}
