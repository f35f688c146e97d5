//! One-sided paired t-test.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::special::{t_cdf, t_sf};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TTest {
    pub t: f64,
    pub df: usize,
    /// P(T ≥ t): evidence that `better` exceeds `worse`.
    pub p_upper: f64,
    /// P(T ≤ t): evidence for the opposite direction.
    pub p_lower: f64,
    pub mean_diff: f64,
}

/// Paired test on d = better − worse.
///
/// With zero spread in d the statistic is undefined; the p-values then are
/// (0, 1) for a positive mean, (1, 0) for a negative mean and (0.5, 0.5) when
/// every difference is zero.
pub fn paired_t_test_one_sided(better: &[f64], worse: &[f64]) -> Result<TTest> {
    if better.len() != worse.len() {
        return Err(Error::Dimension { expected: better.len(), actual: worse.len() });
    }
    let n = better.len();
    if n < 2 {
        return Err(Error::Invalid(format!("paired t-test needs at least 2 pairs, got {n}")));
    }
    let d: Vec<f64> = better.iter().zip(worse).map(|(b, w)| b - w).collect();
    let mean = d.iter().sum::<f64>() / n as f64;
    let ss: f64 = d.iter().map(|x| (x - mean).powi(2)).sum();
    let sd = (ss / (n - 1) as f64).sqrt();
    let df = n - 1;
    if sd == 0.0 || !sd.is_finite() {
        let (t, p_upper, p_lower) = if mean > 0.0 {
            (f64::INFINITY, 0.0, 1.0)
        } else if mean < 0.0 {
            (f64::NEG_INFINITY, 1.0, 0.0)
        } else {
            (0.0, 0.5, 0.5)
        };
        return Ok(TTest { t, df, p_upper, p_lower, mean_diff: mean });
    }
    let t = mean / (sd / (n as f64).sqrt());
    Ok(TTest {
        t,
        df,
        p_upper: t_sf(t, df as f64),
        p_lower: t_cdf(t, df as f64),
        mean_diff: mean,
    })
}
