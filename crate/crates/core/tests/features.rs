mod common;

use std::collections::BTreeMap;

use wording::corpus::Message;
use wording::eval::synth::{generate_synthetic, SyntheticSpec};
use wording::features::{build_rs_table, flesch_reading_ease, negative_grade_level, text_counts, BowVocabulary};
use wording::textproc::{analyze, tokenize, TaggerModel, Token};

use common::oracles::READABILITY;

#[test]
fn readability_matches_hand_computation() {
    for &(text, w, s, syl, fre, ngl) in READABILITY {
        let c = text_counts(&tokenize(text));
        assert_eq!((c.words, c.sentences, c.syllables), (w, s, syl), "{text}");
        assert!((flesch_reading_ease(c) - fre).abs() < 1e-9, "{text}: {}", flesch_reading_ease(c));
        assert!((negative_grade_level(c) - ngl).abs() < 1e-9, "{text}: {}", negative_grade_level(c));
    }
}

#[test]
fn retweet_scores_on_hand_counted_fixture() {
    let rows: [(&str, u64); 12] = [
        ("good morning all", 3),
        ("good night", 0),
        ("morning news", 2),
        ("RT @x good stuff", 7),
        ("@bob good point", 8),
        ("good good good", 5),
        ("news today", 1),
        ("morning run", 0),
        ("big news", 4),
        ("night news", 2),
        ("Good luck", 0),
        ("today is good", 9),
    ];
    let ms: Vec<Message> = rows
        .iter()
        .enumerate()
        .map(|(i, (t, rt))| Message::new(format!("{i}"), "a", 0, *t, *rt, 100, false))
        .collect();
    let table = build_rs_table(&ms, 2).unwrap();
    assert_eq!(table.source_messages, 10);
    let got: Vec<(&str, f64)> = table.rs.iter().map(|(k, v)| (k.as_str(), *v)).collect();
    assert_eq!(got, vec![("good", 3.0 / 5.0), ("morning", 2.0 / 3.0), ("news", 3.0 / 4.0)]);
}

fn key(t: &Token) -> String {
    format!("{}/{}", t.norm, t.tag.expect("tagged"))
}

#[test]
fn bag_of_words_matches_recount() {
    let spec = SyntheticSpec {
        authors: 10,
        pairs_per_author: 5,
        unpaired_messages: 100,
        headlines: 20,
        seed: 4,
        ..SyntheticSpec::default()
    };
    let corpus = generate_synthetic(&spec).unwrap();
    let tagger = TaggerModel::builtin();
    let docs: Vec<Vec<Token>> = corpus.paired.iter().take(100).map(|m| analyze(&m.text, &tagger).unwrap()).collect();
    let min = 2;
    let vocab = BowVocabulary::build(docs.iter().map(|d| d.as_slice()), min, true).unwrap();

    let mut totals: BTreeMap<String, usize> = BTreeMap::new();
    for d in &docs {
        for (i, t) in d.iter().enumerate() {
            *totals.entry(key(t)).or_default() += 1;
            if i > 0 {
                *totals.entry(format!("{} {}", key(&d[i - 1]), key(t))).or_default() += 1;
            }
        }
    }
    let kept: Vec<&String> = totals.iter().filter(|(_, &c)| c > min).map(|(k, _)| k).collect();
    let mut names: Vec<String> = (0..vocab.len()).map(|i| vocab.feature_name(i)).collect();
    names.sort();
    assert_eq!(names.iter().collect::<Vec<_>>(), kept);

    for d in &docs {
        let mut expect: BTreeMap<String, f64> = BTreeMap::new();
        for (i, t) in d.iter().enumerate() {
            let mut keys = vec![key(t)];
            if i > 0 {
                keys.push(format!("{} {}", key(&d[i - 1]), key(t)));
            }
            for k in keys {
                if totals[&k] > min {
                    *expect.entry(k).or_default() += 1.0;
                }
            }
        }
        let got: BTreeMap<String, f64> = vocab.extract(d).into_iter().map(|(i, v)| (vocab.feature_name(i), v)).collect();
        assert_eq!(got, expect);
    }
}
