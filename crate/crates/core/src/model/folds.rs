//! Grouped fold assignment.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Fold index for each item such that items sharing a key share a fold.
///
/// Distinct keys are sorted, shuffled with the seed, and each key goes to
/// the fold currently holding the fewest items (lowest index on ties).
pub fn grouped_folds<S: AsRef<str>>(keys: &[S], k: usize, seed: u64) -> Result<Vec<usize>> {
    if k < 2 {
        return Err(Error::Config(format!("need at least 2 folds, got {k}")));
    }
    let mut sizes: BTreeMap<&str, usize> = BTreeMap::new();
    for key in keys {
        *sizes.entry(key.as_ref()).or_insert(0) += 1;
    }
    if sizes.len() < k {
        return Err(Error::TooFewAuthors { needed: k, found: sizes.len() });
    }
    let mut order: Vec<(&str, usize)> = sizes.into_iter().collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut load = vec![0usize; k];
    let mut fold_of: BTreeMap<&str, usize> = BTreeMap::new();
    for (key, n) in order {
        let f = (0..k).min_by_key(|&f| (load[f], f)).unwrap_or(0);
        load[f] += n;
        fold_of.insert(key, f);
    }
    Ok(keys.iter().map(|key| fold_of[key.as_ref()]).collect())
}
