//! λ selection by inner grouped cross-validation, then a full refit.

use serde::{Deserialize, Serialize};

use super::folds::grouped_folds;
use super::logreg::{check_examples, fit, Example, LogRegModel, OptimizerConfig};
use crate::error::Result;

pub const DEFAULT_LAMBDA_GRID: [f64; 4] = [0.01, 0.1, 1.0, 10.0];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub lambda_grid: Vec<f64>,
    pub inner_folds: usize,
    pub seed: u64,
    pub intercept: bool,
    pub optimizer: OptimizerConfig,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            lambda_grid: DEFAULT_LAMBDA_GRID.to_vec(),
            inner_folds: 5,
            seed: 0,
            intercept: false,
            optimizer: OptimizerConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaSelection {
    pub chosen: f64,
    /// (λ, mean inner accuracy) in grid order.
    pub scores: Vec<(f64, f64)>,
}

/// Predicted class 1 at probability ≥ 0.5.
pub fn accuracy(model: &LogRegModel, data: &[Example]) -> Result<f64> {
    let mut correct = 0usize;
    for e in data {
        let p = model.predict_proba(&e.x)?;
        correct += ((p >= 0.5) == (e.y > 0.5)) as usize;
    }
    Ok(correct as f64 / data.len().max(1) as f64)
}

/// Pick λ by mean accuracy over inner folds grouped by `groups` (ties go
/// to the larger λ), then refit on everything. When there are fewer
/// distinct groups than folds each example is its own group.
pub fn train_with_cv(data: &[Example], dim: usize, groups: &[&str], cfg: &TrainConfig) -> Result<(LogRegModel, LambdaSelection)> {
    check_examples(data, dim)?;
    let mut grid = cfg.lambda_grid.clone();
    grid.sort_by(|a, b| a.total_cmp(b));
    grid.dedup();
    if grid.is_empty() {
        return Err(crate::Error::Config("empty lambda grid".into()));
    }
    let mut scores = Vec::with_capacity(grid.len());
    if grid.len() == 1 {
        scores.push((grid[0], f64::NAN));
    } else {
        let folds = match grouped_folds(groups, cfg.inner_folds, cfg.seed) {
            Ok(f) if groups.len() == data.len() => f,
            _ => {
                let own: Vec<String> = (0..data.len()).map(|i| i.to_string()).collect();
                grouped_folds(&own, cfg.inner_folds.min(data.len()).max(2), cfg.seed)?
            }
        };
        for &lambda in &grid {
            let mut total = 0.0;
            let mut used = 0usize;
            for f in 0..cfg.inner_folds {
                let (mut train, mut test) = (Vec::new(), Vec::new());
                for (e, &k) in data.iter().zip(&folds) {
                    if k == f {
                        test.push(e.clone());
                    } else {
                        train.push(e.clone());
                    }
                }
                if test.is_empty() {
                    continue;
                }
                let m = match fit(&train, dim, lambda, cfg.intercept, cfg.optimizer) {
                    Ok(m) => m,
                    Err(crate::Error::SingleClass) => continue,
                    Err(e) => return Err(e),
                };
                total += accuracy(&m, &test)?;
                used += 1;
            }
            scores.push((lambda, if used == 0 { f64::NAN } else { total / used as f64 }));
        }
    }
    let mut chosen = grid[grid.len() - 1];
    let mut best = f64::NEG_INFINITY;
    for &(lambda, acc) in &scores {
        if acc.is_nan() {
            continue;
        }
        if acc >= best {
            best = acc;
            chosen = lambda;
        }
    }
    let model = fit(data, dim, chosen, cfg.intercept, cfg.optimizer)?;
    Ok((model, LambdaSelection { chosen, scores }))
}
