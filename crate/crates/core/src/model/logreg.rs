//! L2-regularized logistic regression on sparse rows, trained by full-batch
//! gradient descent with Barzilai-Borwein steps and Armijo backtracking.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::Sparse;

/// One training row: sparse features and a 0/1 target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Example {
    pub x: Sparse,
    pub y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig { tol: 1e-8, max_iter: 10_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainerReport {
    pub iterations: usize,
    pub objective: f64,
    pub grad_norm: f64,
    pub converged: bool,
    /// Every accepted step lowered the objective.
    pub monotone: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogRegModel {
    pub weights: Vec<f64>,
    pub intercept: Option<f64>,
    pub lambda: f64,
    pub report: TrainerReport,
}

pub fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// ln(1 + e^a) without overflow.
fn softplus(a: f64) -> f64 {
    a.max(0.0) + (-a.abs()).exp().ln_1p()
}

pub fn dot(w: &[f64], x: &Sparse) -> f64 {
    x.iter().map(|&(j, v)| w[j] * v).sum()
}

/// Mean log-loss plus (λ/2)‖w‖². The intercept, when present, sits in the
/// last slot of `params` and is not penalized.
pub fn objective(data: &[Example], params: &[f64], dim: usize, lambda: f64) -> f64 {
    let (w, b) = params.split_at(dim);
    let b = b.first().copied().unwrap_or(0.0);
    let loss: f64 = data
        .iter()
        .map(|e| {
            let z = dot(w, &e.x) + b;
            if e.y > 0.5 {
                softplus(-z)
            } else {
                softplus(z)
            }
        })
        .sum::<f64>()
        / data.len() as f64;
    loss + 0.5 * lambda * w.iter().map(|v| v * v).sum::<f64>()
}

/// Objective and its gradient in one pass.
pub fn objective_and_gradient(data: &[Example], params: &[f64], dim: usize, lambda: f64) -> (f64, Vec<f64>) {
    let (w, b) = params.split_at(dim);
    let has_b = !b.is_empty();
    let b = b.first().copied().unwrap_or(0.0);
    let n = data.len() as f64;
    let mut g = vec![0.0; params.len()];
    let mut loss = 0.0;
    for e in data {
        let z = dot(w, &e.x) + b;
        loss += if e.y > 0.5 { softplus(-z) } else { softplus(z) };
        let r = (sigmoid(z) - e.y) / n;
        for &(j, v) in &e.x {
            g[j] += r * v;
        }
        if has_b {
            g[dim] += r;
        }
    }
    let mut reg = 0.0;
    for j in 0..dim {
        g[j] += lambda * w[j];
        reg += w[j] * w[j];
    }
    (loss / n + 0.5 * lambda * reg, g)
}

/// Margin of every row under `params` (weights then optional intercept).
fn margins(data: &[Example], params: &[f64], dim: usize) -> Vec<f64> {
    let (w, b) = params.split_at(dim);
    let b = b.first().copied().unwrap_or(0.0);
    data.iter().map(|e| dot(w, &e.x) + b).collect()
}

/// Objective change for the step `params − t·g`, given current margins
/// `z`, margin slopes `gz`, w·g and ‖g_w‖². Computed term by term so that
/// decreases far below the objective's own rounding stay visible.
fn objective_change(data: &[Example], z: &[f64], gz: &[f64], t: f64, lambda: f64, wg: f64, gg_w: f64) -> f64 {
    let mut loss = 0.0;
    for ((e, &zi), &si) in data.iter().zip(z).zip(gz) {
        let d = -t * si;
        // softplus(a + δ) − softplus(a) = ln(1 + σ(a)·(e^δ − 1))
        loss += if e.y > 0.5 {
            (sigmoid(-zi) * (-d).exp_m1()).ln_1p()
        } else {
            (sigmoid(zi) * d.exp_m1()).ln_1p()
        };
    }
    loss / data.len() as f64 - t * lambda * wg + 0.5 * t * t * lambda * gg_w
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn check_examples(data: &[Example], dim: usize) -> Result<()> {
    if data.is_empty() {
        return Err(Error::EmptyInput("training examples"));
    }
    let pos = data.iter().filter(|e| e.y > 0.5).count();
    if pos == 0 || pos == data.len() {
        return Err(Error::SingleClass);
    }
    for (r, e) in data.iter().enumerate() {
        for &(j, v) in &e.x {
            if j >= dim {
                return Err(Error::Dimension { expected: dim, actual: j + 1 });
            }
            if !v.is_finite() {
                return Err(Error::NonFinite { row: r, column: j });
            }
        }
    }
    Ok(())
}

/// Fit at a fixed λ.
pub fn fit(data: &[Example], dim: usize, lambda: f64, intercept: bool, opt: OptimizerConfig) -> Result<LogRegModel> {
    check_examples(data, dim)?;
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Config(format!("lambda must be positive, got {lambda}")));
    }
    const ARMIJO: f64 = 1e-4;
    let p = dim + intercept as usize;
    let mut x = vec![0.0; p];
    let (mut f, mut g) = objective_and_gradient(data, &x, dim, lambda);
    let mut z = margins(data, &x, dim);
    let mut step = 1.0 / max_abs(&g).max(1.0);
    let mut iterations = 0;
    let mut monotone = true;
    while max_abs(&g) >= opt.tol && iterations < opt.max_iter {
        iterations += 1;
        let gg: f64 = g.iter().map(|v| v * v).sum();
        // Margin change per unit step, and the penalty's first and second order terms.
        let gz = margins(data, &g, dim);
        let wg: f64 = x[..dim].iter().zip(&g[..dim]).map(|(a, b)| a * b).sum();
        let gg_w: f64 = g[..dim].iter().map(|v| v * v).sum();
        let mut t = step;
        let accepted = loop {
            let change = objective_change(data, &z, &gz, t, lambda, wg, gg_w);
            if change <= -ARMIJO * t * gg {
                break Some(change);
            }
            if t < 1e-20 {
                break None;
            }
            t *= 0.5;
        };
        let Some(change) = accepted else { break };
        if change > 0.0 {
            monotone = false;
        }
        let x_new: Vec<f64> = x.iter().zip(&g).map(|(a, d)| a - t * d).collect();
        let (f_new, g_new) = objective_and_gradient(data, &x_new, dim, lambda);
        // Barzilai-Borwein step for the next iteration.
        let mut sy = 0.0;
        let mut ss = 0.0;
        for i in 0..p {
            let s = x_new[i] - x[i];
            sy += s * (g_new[i] - g[i]);
            ss += s * s;
        }
        step = if sy > 0.0 { (ss / sy).clamp(1e-10, 1e10) } else { t * 2.0 };
        z = margins(data, &x_new, dim);
        x = x_new;
        f = f_new;
        g = g_new;
    }
    let grad_norm = max_abs(&g);
    let intercept_value = intercept.then(|| x[dim]);
    x.truncate(dim);
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Invalid("optimizer produced non-finite weights".into()));
    }
    Ok(LogRegModel {
        weights: x,
        intercept: intercept_value,
        lambda,
        report: TrainerReport {
            iterations,
            objective: f,
            grad_norm,
            converged: grad_norm < opt.tol,
            monotone,
        },
    })
}

impl LogRegModel {
    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn margin(&self, x: &Sparse) -> Result<f64> {
        if let Some(&(j, _)) = x.iter().find(|(j, _)| *j >= self.weights.len()) {
            return Err(Error::Dimension { expected: self.weights.len(), actual: j + 1 });
        }
        Ok(dot(&self.weights, x) + self.intercept.unwrap_or(0.0))
    }

    pub fn predict_proba(&self, x: &Sparse) -> Result<f64> {
        Ok(sigmoid(self.margin(x)?))
    }

    pub fn params(&self) -> Vec<f64> {
        let mut p = self.weights.clone();
        p.extend(self.intercept);
        p
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture() -> Vec<Example> {
        let mut d = Vec::new();
        for _ in 0..100 {
            d.push(Example { x: vec![(0, 1.0)], y: 1.0 });
            d.push(Example { x: vec![(0, -1.0)], y: 0.0 });
        }
        d
    }

    #[test]
    fn one_dimensional_stationary_point() {
        let m = fit(&fixture(), 1, 1.0, false, OptimizerConfig::default()).unwrap();
        let w = m.weights[0];
        assert!((sigmoid(-w) - w).abs() < 1e-8);
        assert!(m.report.converged && m.report.monotone);
    }

    #[test]
    fn single_class_is_rejected() {
        let d = vec![Example { x: vec![(0, 1.0)], y: 1.0 }; 3];
        assert!(matches!(fit(&d, 1, 1.0, false, OptimizerConfig::default()), Err(Error::SingleClass)));
    }

    #[test]
    fn sigmoid_is_stable() {
        assert_eq!(sigmoid(0.0), 0.5);
        assert!(sigmoid(-800.0) >= 0.0 && sigmoid(800.0) == 1.0);
        assert!((softplus(-800.0)).abs() < 1e-300 && (softplus(800.0) - 800.0).abs() < 1e-9);
    }
}
