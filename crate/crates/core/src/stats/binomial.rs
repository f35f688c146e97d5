//! Exact one-sided binomial tails under p = 1/2.

use serde::{Deserialize, Serialize};

use crate::stats::special::ln_gamma;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tail {
    /// P(X ≥ k)
    High,
    /// P(X ≤ k)
    Low,
}

/// Below this n every coefficient sum fits in a u64 and 2^n is exact.
const EXACT_LIMIT: u64 = 62;

/// Tail probability of Binomial(n, 1/2). `k > n` gives 0 for High.
pub fn binomial_test_one_sided(k: u64, n: u64, tail: Tail) -> f64 {
    match tail {
        Tail::High => upper_tail(k, n),
        Tail::Low => {
            if k >= n {
                1.0
            } else {
                // P(X ≤ k) = P(X ≥ n − k) by symmetry.
                upper_tail(n - k, n)
            }
        }
    }
}

fn upper_tail(k: u64, n: u64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    if k > n {
        return 0.0;
    }
    if n <= EXACT_LIMIT {
        let mut c: u64 = 1;
        let mut sum: u64 = 0;
        for i in 0..=n {
            if i >= k {
                sum += c;
            }
            if i < n {
                // C(n, i+1) = C(n, i)·(n−i)/(i+1), exact in u128.
                c = (c as u128 * (n - i) as u128 / (i + 1) as u128) as u64;
            }
        }
        return sum as f64 / 2f64.powi(n as i32);
    }
    if 2 * k <= n {
        // Upper tail holds at least half the mass; sum the small side.
        return 1.0 - upper_tail(n - k + 1, n);
    }
    // Terms shrink from i = k upward.
    let ln_c = ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0);
    let mut term = 1.0;
    let mut rel_sum = 0.0;
    for i in k..=n {
        rel_sum += term;
        term *= (n - i) as f64 / (i + 1) as f64;
        if term < rel_sum * 1e-18 {
            break;
        }
    }
    (ln_c - n as f64 * std::f64::consts::LN_2 + rel_sum.ln()).exp()
}
