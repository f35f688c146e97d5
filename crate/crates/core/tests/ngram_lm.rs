use proptest::prelude::*;
use wording::ngram_lm::{train_lm, Order, Smoothing};

fn corpus() -> impl Strategy<Value = Vec<Vec<String>>> {
    let tok = prop::sample::select(vec!["a", "b", "c", "d", "[num]", "[url]", "[at]", "e", "f"]);
    prop::collection::vec(prop::collection::vec(tok.prop_map(String::from), 0..8), 1..12)
}

proptest! {
    #[test]
    fn conditionals_sum_to_one(texts in corpus(), k in 0.01f64..3.0, bigram in any::<bool>()) {
        let order = if bigram { Order::Bigram } else { Order::Unigram };
        let m = train_lm(&texts, order, Smoothing::AddK { k }).unwrap();
        let mut contexts: Vec<Option<&str>> = vec![None, Some("zzz")];
        contexts.extend(m.vocab().map(Some));
        for c in contexts {
            prop_assert!((m.distribution_sum(c) - 1.0).abs() < 1e-9);
            for w in m.vocab() {
                let p = m.prob(c, w);
                prop_assert!(p > 0.0 && p <= 1.0);
            }
        }
    }

    #[test]
    fn unigram_score_is_permutation_invariant(texts in corpus(), probe in prop::collection::vec("[a-f]", 1..8)) {
        let m = train_lm(&texts, Order::Unigram, Smoothing::default()).unwrap();
        let mut rev = probe.clone();
        rev.reverse();
        prop_assert!((m.score(&probe).value - m.score(&rev).value).abs() < 1e-12);
        prop_assert!(m.score(&probe).value <= 0.0);
    }

    #[test]
    fn adding_an_occurrence_never_lowers_its_probability(texts in corpus(), x in "[a-d]") {
        let mut with_x = texts.clone();
        with_x.push(vec!["a".into(), "b".into(), "c".into(), "d".into()]);
        let base = train_lm(&with_x, Order::Unigram, Smoothing::default()).unwrap();
        let mut more = with_x.clone();
        more.push(vec![x.clone()]);
        let grown = train_lm(&more, Order::Unigram, Smoothing::default()).unwrap();
        prop_assert!(grown.prob(None, &x) >= base.prob(None, &x));
    }
}
