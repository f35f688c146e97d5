//! Confound analysis on identical pairs: how far the later copy's retweet
//! count drifts from the earlier one's.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::corpus::TacPair;

/// Number of n1 values (0..LOW_COUNTS) summed into D.
pub const LOW_COUNTS: u64 = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviationReport {
    /// Lag window in seconds, [lo, hi).
    pub lag_window: (i64, i64),
    /// Band on the smaller follower count of the two members, [lo, hi).
    pub follower_band: (u64, u64),
    pub n_pairs: usize,
    /// Ê(n2 | n1) for each n1 < 10 with support.
    pub cond_mean: BTreeMap<u64, f64>,
    pub support: [usize; LOW_COUNTS as usize],
    pub empty_cells: Vec<u64>,
    pub d: f64,
    pub pearson: Option<f64>,
}

/// Product-moment correlation. None when either side has zero variance or
/// fewer than two points.
pub fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return None;
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (da, db) = (a - mx, b - my);
        sxy += da * db;
        sxx += da * da;
        syy += db * db;
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

fn cell(pairs: &[&TacPair], lag_window: (i64, i64), follower_band: (u64, u64)) -> DeviationReport {
    let mut sums = [0.0f64; LOW_COUNTS as usize];
    let mut support = [0usize; LOW_COUNTS as usize];
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for p in pairs {
        xs.push(p.n1 as f64);
        ys.push(p.n2 as f64);
        if p.n1 < LOW_COUNTS {
            sums[p.n1 as usize] += p.n2 as f64;
            support[p.n1 as usize] += 1;
        }
    }
    let mut cond_mean = BTreeMap::new();
    let mut empty_cells = Vec::new();
    let mut d = 0.0;
    for n1 in 0..LOW_COUNTS {
        let k = support[n1 as usize];
        if k == 0 {
            empty_cells.push(n1);
            continue;
        }
        let e = sums[n1 as usize] / k as f64;
        d += (e - n1 as f64).abs();
        cond_mean.insert(n1, e);
    }
    DeviationReport {
        lag_window,
        follower_band,
        n_pairs: pairs.len(),
        cond_mean,
        support,
        empty_cells,
        d,
        pearson: pearson(&xs, &ys),
    }
}

/// One report per (lag window, follower band) cell, windows outermost.
pub fn deviation_analysis(
    identical: &[TacPair],
    lag_windows: &[(i64, i64)],
    follower_bands: &[(u64, u64)],
) -> Vec<DeviationReport> {
    let mut out = Vec::with_capacity(lag_windows.len() * follower_bands.len());
    for &w in lag_windows {
        for &b in follower_bands {
            let members: Vec<&TacPair> = identical
                .iter()
                .filter(|p| {
                    let f = p.t1.follower_count.min(p.t2.follower_count);
                    p.lag_seconds >= w.0 && p.lag_seconds < w.1 && f >= b.0 && f < b.1
                })
                .collect();
            out.push(cell(&members, w, b));
        }
    }
    out
}
