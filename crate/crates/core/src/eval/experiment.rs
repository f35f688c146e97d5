//! Cross-validation, held-out evaluation, learning curves, classifier
//! comparison and coefficient listings.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::condition::Condition;
use super::pipeline::Dataset;
use crate::corpus::{Label, TacPair};
use crate::error::{Error, Result};
use crate::features::{build_bow_vocab, feature_names, PairFeatures};
use crate::model::{
    grouped_folds, train_with_cv, BaselineModel, FeatureSpace, PairEncoder, PairPredictor, Predictor,
    TrainConfig,
};
use crate::stats::{binomial_test_one_sided, run_battery, ObservedPair, Tail, DEFAULT_ALPHA};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvalConfig {
    pub folds: usize,
    pub seed: u64,
    /// Bag-of-words items must occur more than this many times.
    pub bow_min_count: usize,
    /// Family-wise level for the Bonferroni-restricted condition.
    pub alpha: f64,
    pub train: TrainConfig,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            folds: 5,
            seed: 0,
            bow_min_count: 10,
            alpha: DEFAULT_ALPHA,
            train: TrainConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Protocol {
    CrossValidation { folds: usize },
    Heldout,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairPrediction {
    pub key: String,
    pub gold: Label,
    pub predicted: Label,
    /// Probability that t2 wins.
    pub p_t2: f64,
}

impl PairPrediction {
    pub fn correct(&self) -> bool {
        self.gold == self.predicted
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Significance {
    pub competitor: String,
    /// One-sided sign-test p-value that this condition beats the competitor.
    pub p_value: f64,
    /// Pairs only this condition got right.
    pub wins: u64,
    /// Pairs only the competitor got right.
    pub losses: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub condition: Condition,
    pub protocol: Protocol,
    /// Mean of `fold_accuracies`.
    pub accuracy: f64,
    pub fold_accuracies: Vec<f64>,
    pub n: usize,
    pub seed: u64,
    /// λ chosen in each fold; empty for fixed rules.
    pub lambdas: Vec<f64>,
    /// Custom features used per fold by the Bonferroni-restricted condition.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub selected: Vec<Vec<String>>,
    pub significance: Vec<Significance>,
    /// In dataset order.
    pub predictions: Vec<PairPrediction>,
}

impl ExperimentReport {
    /// Sample standard deviation of the fold accuracies.
    pub fn fold_sd(&self) -> f64 {
        let k = self.fold_accuracies.len();
        if k < 2 {
            return 0.0;
        }
        let ss: f64 = self.fold_accuracies.iter().map(|a| (a - self.accuracy).powi(2)).sum();
        (ss / (k - 1) as f64).sqrt()
    }

    /// Record a sign test against `other` over the same pairs.
    pub fn add_significance(&mut self, other: &ExperimentReport) -> Result<()> {
        let c = compare_classifiers(self, other)?;
        self.significance.push(Significance {
            competitor: other.condition.name(),
            p_value: c.p_value,
            wins: c.a_only,
            losses: c.b_only,
        });
        Ok(())
    }
}

/// Borrowed training rows.
struct View<'a> {
    pairs: Vec<&'a TacPair>,
    features: Vec<&'a PairFeatures>,
}

impl<'a> View<'a> {
    fn all(d: &'a Dataset) -> View<'a> {
        View { pairs: d.pairs.iter().collect(), features: d.features.iter().collect() }
    }

    fn pick(d: &'a Dataset, idx: &[usize]) -> View<'a> {
        View {
            pairs: idx.iter().map(|&i| &d.pairs[i]).collect(),
            features: idx.iter().map(|&i| &d.features[i]).collect(),
        }
    }

    fn labels(&self) -> Result<Vec<Label>> {
        self.pairs
            .iter()
            .map(|p| p.label.ok_or_else(|| Error::Invalid(format!("pair {} has no label", p.key()))))
            .collect()
    }
}

/// A fitted condition plus what was chosen while fitting it.
#[derive(Debug, Clone, PartialEq)]
pub struct Fitted {
    pub predictor: Predictor,
    pub lambda: Option<f64>,
    pub selected: Option<Vec<String>>,
}

fn majority(labels: &[Label]) -> Label {
    let t2 = labels.iter().filter(|l| **l == Label::T2Wins).count();
    if 2 * t2 >= labels.len() {
        Label::T2Wins
    } else {
        Label::T1Wins
    }
}

fn fit_pair(
    view: &View<'_>,
    labels: &[Label],
    custom: Vec<usize>,
    bow: Option<bool>,
    cfg: &EvalConfig,
) -> Result<PairPredictor> {
    let bow = match bow {
        Some(bigrams) => Some(build_bow_vocab(&view.features, cfg.bow_min_count, bigrams)?),
        None => None,
    };
    let encoder = PairEncoder::fit(FeatureSpace { custom, bow }, &view.features)?;
    let examples = view
        .features
        .iter()
        .zip(labels)
        .map(|(f, l)| encoder.example(f, *l))
        .collect::<Result<Vec<_>>>()?;
    let groups: Vec<&str> = view.pairs.iter().map(|p| p.author_id()).collect();
    let (model, selection) = train_with_cv(&examples, encoder.space.dim(), &groups, &cfg.train)?;
    Ok(PairPredictor { encoder, model, selection })
}

fn fit_view(view: &View<'_>, condition: Condition, cfg: &EvalConfig, baseline: Option<&BaselineModel>) -> Result<Fitted> {
    let labels = view.labels()?;
    if labels.is_empty() {
        return Err(Error::EmptyInput("training pairs"));
    }
    let fixed = |predictor| Fitted { predictor, lambda: None, selected: None };
    let custom = match condition {
        Condition::Majority => return Ok(fixed(Predictor::Majority { label: majority(&labels) })),
        Condition::Baseline => {
            let b = baseline.ok_or(Error::MissingContext("baseline model"))?;
            return Ok(fixed(Predictor::Baseline(b.clone())));
        }
        Condition::BcCustom => {
            let observed: Vec<ObservedPair<'_>> = view
                .features
                .iter()
                .zip(&labels)
                .map(|(f, l)| ObservedPair { v1: &f.custom1, v2: &f.custom2, label: Some(*l) })
                .collect();
            let names = feature_names();
            let battery = run_battery(&observed, &observed, &names, cfg.alpha)?;
            let passing: Vec<usize> = battery
                .reports
                .iter()
                .enumerate()
                .filter(|(_, r)| r.passes_bc)
                .map(|(i, _)| i)
                .collect();
            if passing.is_empty() {
                return Ok(Fitted {
                    predictor: Predictor::Majority { label: majority(&labels) },
                    lambda: None,
                    selected: Some(Vec::new()),
                });
            }
            let selected = passing.iter().map(|&i| names[i].to_string()).collect();
            let p = fit_pair(view, &labels, passing, None, cfg)?;
            return Ok(Fitted {
                lambda: Some(p.selection.chosen),
                predictor: Predictor::Pair(p),
                selected: Some(selected),
            });
        }
        c => c.custom_columns().expect("learned conditions have fixed columns"),
    };
    let p = fit_pair(view, &labels, custom, condition.bow(), cfg)?;
    Ok(Fitted { lambda: Some(p.selection.chosen), predictor: Predictor::Pair(p), selected: None })
}

/// Fit `condition` on all of `train`. `baseline` is required for the
/// baseline condition and ignored otherwise.
pub fn fit_condition(
    train: &Dataset,
    condition: Condition,
    cfg: &EvalConfig,
    baseline: Option<&BaselineModel>,
) -> Result<Fitted> {
    fit_view(&View::all(train), condition, cfg, baseline)
}

fn predict_rows(fitted: &Fitted, data: &Dataset, idx: &[usize]) -> Result<Vec<PairPrediction>> {
    idx.iter()
        .map(|&i| {
            let pair = &data.pairs[i];
            let gold = pair.label.ok_or_else(|| Error::Invalid(format!("pair {} has no label", pair.key())))?;
            let p_t2 = fitted.predictor.predict_pair(pair, &data.features[i])?;
            let predicted = if p_t2 >= 0.5 { Label::T2Wins } else { Label::T1Wins };
            Ok(PairPrediction { key: pair.key(), gold, predicted, p_t2 })
        })
        .collect()
}

fn accuracy_of(preds: &[PairPrediction]) -> f64 {
    preds.iter().filter(|p| p.correct()).count() as f64 / preds.len().max(1) as f64
}

fn fold_config(cfg: &EvalConfig, fold: usize) -> EvalConfig {
    let mut c = cfg.clone();
    c.train.seed = cfg.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(fold as u64);
    c
}

/// Map over items on scoped threads; results keep input order.
pub fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(items.len());
    if workers <= 1 {
        return items.iter().map(f).collect();
    }
    let chunk = items.len().div_ceil(workers);
    std::thread::scope(|s| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|part| {
                let f = &f;
                s.spawn(move || part.iter().map(f).collect::<Vec<R>>())
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    })
}

/// Grouped k-fold cross-validation; also returns the model fitted in each fold.
pub fn cross_validate_with_models(
    data: &Dataset,
    condition: Condition,
    cfg: &EvalConfig,
    baseline: Option<&BaselineModel>,
) -> Result<(ExperimentReport, Vec<Fitted>)> {
    if cfg.folds < 2 {
        return Err(Error::Config(format!("need at least 2 folds, got {}", cfg.folds)));
    }
    if data.len() < cfg.folds {
        return Err(Error::Invalid(format!("{} pairs cannot fill {} folds", data.len(), cfg.folds)));
    }
    let fold_of = grouped_folds(&data.authors(), cfg.folds, cfg.seed)?;
    let folds: Vec<usize> = (0..cfg.folds).collect();
    let outcomes = par_map(&folds, |&f| -> Result<(Fitted, Vec<usize>, Vec<PairPrediction>)> {
        let (train, test): (Vec<usize>, Vec<usize>) = (0..data.len()).partition(|&i| fold_of[i] != f);
        let fitted = fit_view(&View::pick(data, &train), condition, &fold_config(cfg, f), baseline)?;
        let preds = predict_rows(&fitted, data, &test)?;
        Ok((fitted, test, preds))
    });
    let mut fold_accuracies = Vec::with_capacity(cfg.folds);
    let mut lambdas = Vec::new();
    let mut selected = Vec::new();
    let mut models = Vec::with_capacity(cfg.folds);
    let mut slots: Vec<Option<PairPrediction>> = vec![None; data.len()];
    for outcome in outcomes {
        let (fitted, test, preds) = outcome?;
        fold_accuracies.push(accuracy_of(&preds));
        lambdas.extend(fitted.lambda);
        selected.extend(fitted.selected.clone());
        for (i, p) in test.into_iter().zip(preds) {
            slots[i] = Some(p);
        }
        models.push(fitted);
    }
    let report = ExperimentReport {
        condition,
        protocol: Protocol::CrossValidation { folds: cfg.folds },
        accuracy: fold_accuracies.iter().sum::<f64>() / fold_accuracies.len() as f64,
        fold_accuracies,
        n: data.len(),
        seed: cfg.seed,
        lambdas,
        selected,
        significance: Vec::new(),
        predictions: slots.into_iter().map(|p| p.expect("every pair is in one test fold")).collect(),
    };
    Ok((report, models))
}

pub fn cross_validate(
    data: &Dataset,
    condition: Condition,
    cfg: &EvalConfig,
    baseline: Option<&BaselineModel>,
) -> Result<ExperimentReport> {
    cross_validate_with_models(data, condition, cfg, baseline).map(|(r, _)| r)
}

/// Fit once on `train`, measure once on `heldout`; the two must not share
/// an author.
pub fn evaluate_heldout(
    train: &Dataset,
    heldout: &Dataset,
    condition: Condition,
    cfg: &EvalConfig,
    baseline: Option<&BaselineModel>,
) -> Result<ExperimentReport> {
    let shared = shared_authors(train, heldout).len();
    if shared > 0 {
        return Err(Error::AuthorOverlap(shared));
    }
    if heldout.is_empty() {
        return Err(Error::EmptyInput("heldout pairs"));
    }
    let fitted = fit_condition(train, condition, &fold_config(cfg, 0), baseline)?;
    let all: Vec<usize> = (0..heldout.len()).collect();
    let predictions = predict_rows(&fitted, heldout, &all)?;
    let acc = accuracy_of(&predictions);
    Ok(ExperimentReport {
        condition,
        protocol: Protocol::Heldout,
        accuracy: acc,
        fold_accuracies: vec![acc],
        n: heldout.len(),
        seed: cfg.seed,
        lambdas: fitted.lambda.into_iter().collect(),
        selected: fitted.selected.into_iter().collect(),
        significance: Vec::new(),
        predictions,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub n: usize,
    pub mean: f64,
    /// Cross-validated accuracy of each run.
    pub accuracies: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveReport {
    pub condition: Condition,
    pub seed: u64,
    pub runs: usize,
    pub points: Vec<CurvePoint>,
}

/// 1000, 2000, …, 10000.
pub fn default_curve_sizes() -> Vec<usize> {
    (1..=10).map(|i| i * 1000).collect()
}

fn subsample_seed(seed: u64, n: usize, run: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((n as u64) << 20) ^ run as u64);
    rand::Rng::random(&mut rng)
}

/// Mean cross-validated accuracy over `runs` random subsamples of each
/// size. A size equal to the data set uses every pair in order, so run 0
/// of that size reproduces [`cross_validate`].
pub fn learning_curve(
    data: &Dataset,
    condition: Condition,
    sizes: &[usize],
    runs: usize,
    cfg: &EvalConfig,
    baseline: Option<&BaselineModel>,
) -> Result<CurveReport> {
    if runs == 0 {
        return Err(Error::Config("learning curve needs at least one run".into()));
    }
    if let Some(&n) = sizes.iter().find(|&&n| n > data.len()) {
        return Err(Error::Invalid(format!("curve size {n} exceeds the {} available pairs", data.len())));
    }
    let mut points = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let mut accuracies = Vec::with_capacity(runs);
        for run in 0..runs {
            let run_cfg = EvalConfig { seed: cfg.seed.wrapping_add(run as u64), ..cfg.clone() };
            let acc = if n == data.len() {
                cross_validate(data, condition, &run_cfg, baseline)?.accuracy
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(subsample_seed(cfg.seed, n, run));
                let mut idx: Vec<usize> = (0..data.len()).collect();
                idx.shuffle(&mut rng);
                idx.truncate(n);
                idx.sort_unstable();
                cross_validate(&data.subset(&idx), condition, &run_cfg, baseline)?.accuracy
            };
            accuracies.push(acc);
        }
        let mean = accuracies.iter().sum::<f64>() / runs as f64;
        points.push(CurvePoint { n, mean, accuracies });
    }
    Ok(CurveReport { condition, seed: cfg.seed, runs, points })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub p_value: f64,
    pub a_only: u64,
    pub b_only: u64,
}

/// Exact one-sided sign test on discordant pairs: the probability of `a`
/// winning at least `a_only` of them by chance. No discordant pairs gives 1.
pub fn sign_test(a_only: u64, b_only: u64) -> f64 {
    let n = a_only + b_only;
    if n == 0 {
        return 1.0;
    }
    binomial_test_one_sided(a_only, n, Tail::High)
}

/// Sign test of `a` against `b`; both must predict the same pairs in the
/// same order.
pub fn compare_classifiers(a: &ExperimentReport, b: &ExperimentReport) -> Result<Comparison> {
    if a.predictions.len() != b.predictions.len() {
        return Err(Error::MismatchedPairs(format!(
            "{} versus {} predictions",
            a.predictions.len(),
            b.predictions.len()
        )));
    }
    let (mut a_only, mut b_only) = (0u64, 0u64);
    for (x, y) in a.predictions.iter().zip(&b.predictions) {
        if x.key != y.key || x.gold != y.gold {
            return Err(Error::MismatchedPairs(format!("pair {} against {}", x.key, y.key)));
        }
        match (x.correct(), y.correct()) {
            (true, false) => a_only += 1,
            (false, true) => b_only += 1,
            _ => {}
        }
    }
    Ok(Comparison { p_value: sign_test(a_only, b_only), a_only, b_only })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopFeatures {
    pub custom_best: Vec<(String, f64)>,
    pub custom_worst: Vec<(String, f64)>,
    pub bow_best: Vec<(String, f64)>,
    pub bow_worst: Vec<(String, f64)>,
}

fn ranked(mut items: Vec<(String, f64)>, k: usize) -> (Vec<(String, f64)>, Vec<(String, f64)>) {
    items.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    let best = items.iter().take(k).cloned().collect();
    items.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
    let worst = items.into_iter().take(k).collect();
    (best, worst)
}

/// The `k` largest and `k` smallest signed weights of each section.
pub fn top_features(p: &PairPredictor, k: usize) -> TopFeatures {
    let space = &p.encoder.space;
    let split = space.custom.len();
    let named: Vec<(String, f64)> = p
        .model
        .weights
        .iter()
        .enumerate()
        .map(|(j, w)| (space.name(j), *w))
        .collect();
    let (custom, bow) = named.split_at(split);
    let (custom_best, custom_worst) = ranked(custom.to_vec(), k);
    let (bow_best, bow_worst) = ranked(bow.to_vec(), k);
    TopFeatures { custom_best, custom_worst, bow_best, bow_worst }
}

/// Shuffle labels among each author's pairs. Per-author label balance is
/// preserved, so grouped folds see the same class mix as before.
pub fn permute_within_authors(data: &Dataset, seed: u64) -> Result<Dataset> {
    let labels = data.labels()?;
    let mut by_author: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, p) in data.pairs.iter().enumerate() {
        by_author.entry(p.author_id()).or_default().push(i);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = labels.clone();
    for idx in by_author.values() {
        let mut ls: Vec<Label> = idx.iter().map(|&i| labels[i]).collect();
        ls.shuffle(&mut rng);
        for (&i, l) in idx.iter().zip(ls) {
            out[i] = l;
        }
    }
    Ok(data.with_labels(&out))
}

/// Authors present in both sets.
pub fn shared_authors<'a>(a: &'a Dataset, b: &'a Dataset) -> BTreeSet<&'a str> {
    a.author_set().intersection(&b.author_set()).copied().collect()
}
