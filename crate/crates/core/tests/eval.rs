use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use proptest::prelude::*;
use wording::corpus::Label;
use wording::error::Error;
use wording::eval::synth::{generate_synthetic, SyntheticSpec};
use wording::eval::*;
use wording::features::{feature_names, RequestWords};
use wording::model::{
    grouped_folds, FeatureSpace, LambdaSelection, LogRegModel, Normalizer, PairEncoder, PairPredictor, Predictor,
    TrainerReport,
};
use wording::stats::{run_battery, DEFAULT_ALPHA};

fn small_spec(seed: u64) -> SyntheticSpec {
    SyntheticSpec {
        seed,
        authors: 20,
        unpaired_messages: 1500,
        headlines: 400,
        ..SyntheticSpec::default()
    }
}

fn prepared(spec: &SyntheticSpec) -> Prepared {
    let c = generate_synthetic(spec).unwrap();
    let ctx = c.context(&ContextConfig::default()).unwrap();
    c.prepare(&ctx).unwrap()
}

fn small() -> &'static Prepared {
    static DATA: OnceLock<Prepared> = OnceLock::new();
    DATA.get_or_init(|| prepared(&small_spec(11)))
}

fn cfg(seed: u64) -> EvalConfig {
    EvalConfig { seed, ..EvalConfig::default() }
}

#[test]
fn majority_scores_half_on_author_balanced_pairs() {
    let data = &small().labeled;
    assert_eq!(data.len(), 1000);
    let r = cross_validate(data, Condition::Majority, &cfg(0), None).unwrap();
    assert!((r.accuracy - 0.5).abs() < 1e-12, "{}", r.accuracy);
    assert!(r.lambdas.is_empty());
}

#[test]
fn noise_free_labels_are_learned_almost_perfectly() {
    // Separable data needs weaker regularization than the default grid offers.
    let spec = SyntheticSpec { noise: 0.0, ..small_spec(21) };
    let mut c = cfg(0);
    c.train.lambda_grid = vec![1e-4, 1e-3, 0.01, 0.1, 1.0, 10.0];
    let r = cross_validate(&prepared(&spec).labeled, Condition::Custom, &c, None).unwrap();
    assert!(r.accuracy >= 0.98, "{}", r.accuracy);
}

#[test]
fn overwhelming_noise_gives_chance_accuracy() {
    let spec = SyntheticSpec { noise: 1e6, ..small_spec(22) };
    let r = cross_validate(&prepared(&spec).labeled, Condition::Custom, &cfg(0), None).unwrap();
    assert!((r.accuracy - 0.5).abs() <= 0.04, "{}", r.accuracy);
}

#[test]
fn reports_are_deterministic_and_round_trip() {
    let data = &small().labeled;
    let a = cross_validate(data, Condition::Custom, &cfg(5), None).unwrap();
    let b = cross_validate(data, Condition::Custom, &cfg(5), None).unwrap();
    let ja = serde_json::to_vec(&a).unwrap();
    assert_eq!(ja, serde_json::to_vec(&b).unwrap());
    assert_eq!(serde_json::from_slice::<ExperimentReport>(&ja).unwrap(), a);
    assert_eq!(a.fold_accuracies.len(), 5);
    assert_eq!(a.lambdas.len(), 5);
    let mean = a.fold_accuracies.iter().sum::<f64>() / 5.0;
    assert!((a.accuracy - mean).abs() < 1e-15);
    let keys: Vec<String> = data.pairs.iter().map(|p| p.key()).collect();
    let predicted: Vec<String> = a.predictions.iter().map(|p| p.key.clone()).collect();
    assert_eq!(keys, predicted);

    let c = EvalConfig { seed: 9, folds: 4, ..EvalConfig::default() };
    let json = serde_json::to_string(&c).unwrap();
    assert_eq!(serde_json::from_str::<EvalConfig>(&json).unwrap(), c);
    assert!(serde_json::from_str::<EvalConfig>(r#"{"fold": 3}"#).is_err());
}

#[test]
fn fold_models_never_see_their_test_fold() {
    let data = &small().labeled;
    let c = cfg(2);
    let (_, before) = cross_validate_with_models(data, Condition::CustomBigram, &c, None).unwrap();
    let fold_of = grouped_folds(&data.authors(), c.folds, c.seed).unwrap();
    let mut tampered = data.clone();
    for (i, f) in fold_of.iter().enumerate() {
        if *f != 0 {
            continue;
        }
        let p = &mut tampered.features[i];
        p.custom1.iter_mut().for_each(|v| *v = *v * 3.0 + 7.0);
        p.tokens1 = p.tokens2.clone();
        let pair = &mut tampered.pairs[i];
        pair.label = pair.label.map(|l| match l {
            Label::T1Wins => Label::T2Wins,
            Label::T2Wins => Label::T1Wins,
        });
    }
    let (_, after) = cross_validate_with_models(&tampered, Condition::CustomBigram, &c, None).unwrap();
    assert_eq!(before[0], after[0]);
    assert!((1..c.folds).any(|f| before[f] != after[f]));
}

#[test]
fn heldout_needs_disjoint_authors_and_tracks_cross_validation() {
    let train = prepared(&SyntheticSpec { authors: 40, ..small_spec(31) }).labeled;
    let heldout = prepared(&SyntheticSpec { authors: 40, author_offset: 1000, ..small_spec(32) }).labeled;
    assert!(shared_authors(&train, &heldout).is_empty());
    assert!(matches!(
        evaluate_heldout(&train, &train, Condition::Custom, &cfg(0), None),
        Err(Error::AuthorOverlap(40))
    ));
    let h = evaluate_heldout(&train, &heldout, Condition::Custom, &cfg(0), None).unwrap();
    let cv = cross_validate(&train, Condition::Custom, &cfg(0), None).unwrap();
    assert_eq!(h.protocol, Protocol::Heldout);
    assert_eq!(h.n, heldout.len());
    assert!((h.accuracy - cv.accuracy).abs() <= 0.03, "heldout {} cv {}", h.accuracy, cv.accuracy);
}

#[test]
fn full_size_curve_point_is_plain_cross_validation() {
    let data = &small().labeled;
    let c = cfg(4);
    let curve = learning_curve(data, Condition::Custom, &[data.len()], 1, &c, None).unwrap();
    let cv = cross_validate(data, Condition::Custom, &c, None).unwrap();
    assert_eq!(curve.points[0].mean, cv.accuracy);

    let curve = learning_curve(data, Condition::LengthOnly, &[200, 500], 2, &c, None).unwrap();
    assert_eq!(curve.points.iter().map(|p| p.n).collect::<Vec<_>>(), vec![200, 500]);
    assert!(curve.points.iter().all(|p| p.accuracies.len() == 2));
    let json = serde_json::to_string(&curve).unwrap();
    assert_eq!(serde_json::from_str::<CurveReport>(&json).unwrap(), curve);
    assert!(learning_curve(data, Condition::Custom, &[data.len() + 1], 1, &c, None).is_err());
    assert!(learning_curve(data, Condition::Custom, &[100], 0, &c, None).is_err());
}

fn binomial_upper_tail(k: u64, n: u64) -> f64 {
    let mut c: u128 = 1;
    let mut total: u128 = 0;
    for i in 0..=n {
        if i >= k {
            total += c;
        }
        c = c * (n - i) as u128 / (i + 1) as u128;
    }
    total as f64 / 2f64.powi(n as i32)
}

#[test]
fn sign_test_is_the_exact_binomial_tail() {
    for (a, b) in [(90, 10), (5, 5), (0, 7), (12, 3), (60, 40)] {
        let want = binomial_upper_tail(a, a + b);
        let got = sign_test(a, b);
        assert!((got - want).abs() <= 1e-12 * want.max(1e-300), "{a}/{b}: {got} vs {want}");
    }
    assert_eq!(sign_test(0, 0), 1.0);
    assert!(sign_test(90, 10) < 1e-15);
}

fn report(condition: Condition, preds: &[(&str, Label, Label)]) -> ExperimentReport {
    let predictions: Vec<PairPrediction> = preds
        .iter()
        .map(|(k, g, p)| PairPrediction {
            key: k.to_string(),
            gold: *g,
            predicted: *p,
            p_t2: if *p == Label::T2Wins { 0.7 } else { 0.3 },
        })
        .collect();
    let acc = predictions.iter().filter(|p| p.correct()).count() as f64 / predictions.len() as f64;
    ExperimentReport {
        condition,
        protocol: Protocol::Heldout,
        accuracy: acc,
        fold_accuracies: vec![acc],
        n: predictions.len(),
        seed: 0,
        lambdas: vec![],
        selected: vec![],
        significance: vec![],
        predictions,
    }
}

#[test]
fn comparisons_count_discordant_pairs() {
    use Label::{T1Wins as A, T2Wins as B};
    let x = report(Condition::Custom, &[("p1", A, A), ("p2", B, B), ("p3", A, A), ("p4", B, A)]);
    let y = report(Condition::Unigram, &[("p1", A, B), ("p2", B, B), ("p3", A, B), ("p4", B, B)]);
    let c = compare_classifiers(&x, &y).unwrap();
    assert_eq!((c.a_only, c.b_only), (2, 1));
    assert!((c.p_value - 0.5).abs() < 1e-15);

    let mut x2 = x.clone();
    x2.add_significance(&y).unwrap();
    assert_eq!(x2.significance[0].competitor, "unigram");
    assert_eq!((x2.significance[0].wins, x2.significance[0].losses), (2, 1));
    assert!(format_reports(&[x2]).contains("vs unigram: 2 wins, 1 losses"));

    let short = report(Condition::Unigram, &[("p1", A, B)]);
    assert!(matches!(compare_classifiers(&x, &short), Err(Error::MismatchedPairs(_))));
    let other = report(Condition::Unigram, &[("p1", A, B), ("p2", B, B), ("p3", A, B), ("q4", B, B)]);
    assert!(matches!(compare_classifiers(&x, &other), Err(Error::MismatchedPairs(_))));
}

fn fixed_predictor(weights: Vec<f64>) -> PairPredictor {
    let dim = weights.len();
    PairPredictor {
        encoder: PairEncoder {
            space: FeatureSpace::custom_only((0..dim).collect()),
            normalizer: Normalizer { min: vec![0.0; dim], max: vec![1.0; dim] },
        },
        model: LogRegModel {
            weights,
            intercept: None,
            lambda: 1.0,
            report: TrainerReport { iterations: 0, objective: 0.0, grad_norm: 0.0, converged: true, monotone: true },
        },
        selection: LambdaSelection { chosen: 1.0, scores: vec![(1.0, 1.0)] },
    }
}

#[test]
fn top_features_rank_signed_weights() {
    let names = feature_names();
    let t = top_features(&fixed_predictor(vec![2.0, -1.0, 0.0]), 2);
    let custom_best: Vec<&str> = t.custom_best.iter().map(|(n, _)| n.as_str()).collect();
    let custom_worst: Vec<&str> = t.custom_worst.iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(custom_best, vec![names[0], names[2]]);
    assert_eq!(custom_worst, vec![names[1], names[2]]);
    assert!(t.bow_best.is_empty() && t.bow_worst.is_empty());
    assert_eq!(t.custom_best[0].1, 2.0);
    let text = format_top_features(&t);
    assert!(text.contains(names[0]) && !text.contains("bag-of-words"));
    let json = serde_json::to_string(&t).unwrap();
    assert_eq!(serde_json::from_str::<TopFeatures>(&json).unwrap(), t);
}

#[test]
fn planted_features_lead_the_coefficient_listing() {
    let seeds: Vec<u64> = (100..150).collect();
    let hits = par_map(&seeds, |&seed| {
        let data = prepared(&SyntheticSpec { pairs_per_author: 30, ..small_spec(seed) }).labeled;
        let fitted = fit_condition(&data, Condition::Custom, &cfg(seed), None).unwrap();
        let Predictor::Pair(p) = &fitted.predictor else { panic!("custom fits a pair model") };
        let t = top_features(p, 3);
        let best: BTreeSet<&str> = t.custom_best.iter().map(|(n, _)| n.as_str()).collect();
        let worst: BTreeSet<&str> = t.custom_worst.iter().map(|(n, _)| n.as_str()).collect();
        best.contains("length_chars") && best.contains("positive") && worst.contains("negative")
    });
    let n = hits.iter().filter(|h| **h).count();
    assert!(n >= 45, "{n} of 50");
}

#[test]
fn noise_free_single_planted_feature_is_the_only_bc_flag() {
    let seeds: Vec<u64> = (200..300).collect();
    // Sentiment slots are exclusive, so planting one polarity also moves the
    // other; length varies independently of everything else.
    let weights: BTreeMap<String, f64> = [("length_chars".to_string(), 1.0)].into_iter().collect();
    let exact = par_map(&seeds, |&seed| {
        let spec = SyntheticSpec { noise: 0.0, weights: weights.clone(), ..small_spec(seed) };
        let p = prepared(&spec);
        let b = run_battery(&p.labeled.observed(), &p.preference.observed(), &feature_names(), DEFAULT_ALPHA).unwrap();
        let flagged: Vec<&str> = b.reports.iter().filter(|r| r.passes_bc).map(|r| r.feature.as_str()).collect();
        flagged == ["length_chars"]
    });
    let n = exact.iter().filter(|e| **e).count();
    assert!(n >= 95, "{n} of 100");
}

#[test]
fn permutation_keeps_each_authors_label_mix() {
    let data = &small().labeled;
    let shuffled = permute_within_authors(data, 3).unwrap();
    let mix = |d: &Dataset| {
        let mut m: BTreeMap<String, usize> = BTreeMap::new();
        for p in &d.pairs {
            *m.entry(p.author_id().to_string()).or_default() += (p.label == Some(Label::T2Wins)) as usize;
        }
        m
    };
    assert_eq!(mix(data), mix(&shuffled));
    assert_ne!(data.labels().unwrap(), shuffled.labels().unwrap());
    assert_eq!(shuffled.features, data.features);
    assert_eq!(permute_within_authors(data, 3).unwrap(), shuffled);
}

#[test]
fn baseline_condition_needs_a_model() {
    let data = &small().labeled;
    assert!(matches!(
        cross_validate(data, Condition::Baseline, &cfg(0), None),
        Err(Error::MissingContext(_))
    ));
}

#[test]
fn bonferroni_condition_records_its_selection() {
    let data = &small().labeled;
    let r = cross_validate(data, Condition::BcCustom, &cfg(0), None).unwrap();
    assert_eq!(r.selected.len(), 5);
    for s in &r.selected {
        assert!(s.iter().any(|f| f == "positive"), "{s:?}");
    }
}

#[test]
fn extreme_sets_split_popular_from_unpopular() {
    let c = generate_synthetic(&small_spec(41)).unwrap();
    let ctx = build_context(
        &c.paired,
        &c.unpaired,
        &c.headlines,
        c.lexicon.clone(),
        RequestWords::default(),
        None,
        &ContextConfig::default(),
    )
    .unwrap();
    let ex = ExtremeSet::select(&ctx, &c.unpaired, 300).unwrap();
    assert_eq!(ex.len(), 600);
    assert_eq!(ex.popular.iter().filter(|p| **p).count(), 300);
    let least_top = ex.messages[..300].iter().map(|m| m.retweet_count).min().unwrap();
    let most_bottom = ex.messages[300..].iter().map(|m| m.retweet_count).max().unwrap();
    assert!(least_top >= most_bottom);
    assert!(ExtremeSet::select(&ctx, &c.unpaired, 10_000).is_err());
}

#[test]
fn charts_are_well_formed() {
    let data = &small().labeled;
    let reports: Vec<ExperimentReport> = [Condition::LengthOnly, Condition::Majority]
        .into_iter()
        .map(|cnd| cross_validate(data, cnd, &cfg(0), None).unwrap())
        .collect();
    let svg = reports_svg(&reports);
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    assert_eq!(svg.matches("<rect").count(), 2);
    assert_eq!(svg.matches("stroke-dasharray").count(), 1);
    let table = format_reports(&reports);
    assert!(table.contains("length-only") && table.contains("majority"));

    let curve = learning_curve(data, Condition::LengthOnly, &[300, 600], 1, &cfg(0), None).unwrap();
    let svg = curves_svg(std::slice::from_ref(&curve));
    assert_eq!(svg.matches("<polyline").count(), 1);
    assert!(format_curves(&[curve]).lines().count() == 3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn grouped_folds_keep_authors_together(
        keys in proptest::collection::vec(0u8..30, 1..200),
        k in 2usize..8,
        seed in any::<u64>(),
    ) {
        let keys: Vec<String> = keys.iter().map(|x| format!("a{x}")).collect();
        let distinct: BTreeSet<&String> = keys.iter().collect();
        match grouped_folds(&keys, k, seed) {
            Ok(folds) => {
                prop_assert!(distinct.len() >= k);
                let mut owner: BTreeMap<&String, usize> = BTreeMap::new();
                for (key, f) in keys.iter().zip(&folds) {
                    prop_assert!(*f < k);
                    prop_assert_eq!(*owner.entry(key).or_insert(*f), *f);
                }
                let used: BTreeSet<usize> = folds.iter().copied().collect();
                prop_assert_eq!(used.len(), k);
                prop_assert_eq!(folds, grouped_folds(&keys, k, seed).unwrap());
            }
            Err(_) => prop_assert!(distinct.len() < k),
        }
    }
}
