//! Independent reference computations shared by the integration tests.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use wording::model::{sigmoid, Example};

/// (text, words, sentences, syllables, reading ease, negated grade level),
/// counted and computed by hand.
pub const READABILITY: &[(&str, usize, usize, usize, f64, f64)] = &[
    ("The cat sat.", 3, 1, 3, 119.19, 2.62),
    ("I like the table.", 4, 1, 5, 97.025, -0.72),
    ("Go now! Run fast.", 4, 2, 4, 120.205, 3.01),
    ("Beautiful science video", 3, 1, 8, -21.81, -17.046666666666667),
    ("Check http://t.co/x today @bob #win 42.", 2, 1, 3, 77.905, -2.89),
    ("Wow!!! Really?", 2, 2, 3, 78.92, -2.5),
    ("!!! ...", 0, 0, 0, 0.0, 0.0),
    ("The little candle burned.", 4, 1, 7, 54.725, -6.62),
    ("Everyone wants a quiet morning. We agree.", 7, 2, 12, 58.253928571428571, -6.003571428571429),
    ("Don't stop-believing, friends.", 3, 1, 6, 34.59, -9.18),
    ("Wait... what?", 2, 2, 2, 121.22, 3.4),
];

/// (t, df, cdf, sf) reference values.
pub fn reference_table() -> Vec<(f64, f64, f64, f64)> {
    include_str!("../data/t_cdf_reference.tsv")
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| {
            let v: Vec<f64> = l.split('\t').map(|x| x.parse().unwrap()).collect();
            (v[0], v[1], v[2], v[3])
        })
        .collect()
}

pub fn random_data(rng: &mut ChaCha8Rng, n: usize, dim: usize) -> Vec<Example> {
    let w: Vec<f64> = (0..dim).map(|_| rng.random_range(-2.0..2.0)).collect();
    (0..n)
        .map(|_| {
            let mut x = Vec::new();
            for j in 0..dim {
                if rng.random::<f64>() < 0.7 {
                    x.push((j, rng.random_range(-1.0..1.0)));
                }
            }
            let z: f64 = x.iter().map(|&(j, v)| w[j] * v).sum();
            let y = (rng.random::<f64>() < sigmoid(z)) as u8 as f64;
            Example { x, y }
        })
        .collect()
}

/// Root of σ(−w) = λw by bisection.
pub fn bisect(lambda: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0 / lambda);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if sigmoid(-mid) - lambda * mid > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
