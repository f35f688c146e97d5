//! Feature spaces and pair difference vectors.

use serde::{Deserialize, Serialize};

use super::logreg::Example;
use super::normalize::Normalizer;
use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::features::{feature_names, BowVocabulary, PairFeatures, Sparse, N_CUSTOM};
use crate::textproc::Token;

/// Which columns a model sees: a subset of custom features (by registry
/// index) followed by an optional bag-of-words section.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSpace {
    pub custom: Vec<usize>,
    pub bow: Option<BowVocabulary>,
}

impl FeatureSpace {
    pub fn custom_only(custom: Vec<usize>) -> FeatureSpace {
        FeatureSpace { custom, bow: None }
    }

    /// Rebuild lookup tables after deserializing.
    pub fn ready(mut self) -> Self {
        self.bow = self.bow.map(BowVocabulary::ready);
        self
    }

    pub fn dim(&self) -> usize {
        self.custom.len() + self.bow.as_ref().map_or(0, |b| b.len())
    }

    pub fn name(&self, j: usize) -> String {
        if j < self.custom.len() {
            feature_names()[self.custom[j]].to_string()
        } else {
            let b = self.bow.as_ref().expect("column beyond custom section implies a vocabulary");
            b.feature_name(j - self.custom.len())
        }
    }

    /// Raw sparse row of one message.
    pub fn row(&self, custom: &[f64], tokens: &[Token]) -> Result<Sparse> {
        if custom.len() != N_CUSTOM {
            return Err(Error::Dimension { expected: N_CUSTOM, actual: custom.len() });
        }
        let mut row: Sparse = self.custom.iter().enumerate().map(|(j, &f)| (j, custom[f])).collect();
        if let Some(b) = &self.bow {
            let off = self.custom.len();
            row.extend(b.extract(tokens).into_iter().map(|(j, v)| (off + j, v)));
        }
        Ok(row)
    }

    pub fn pair_rows(&self, p: &PairFeatures) -> Result<(Sparse, Sparse)> {
        Ok((self.row(&p.custom1, &p.tokens1)?, self.row(&p.custom2, &p.tokens2)?))
    }
}

/// Normalized t2 − t1 over the union of both rows' columns. Both rows must
/// have strictly increasing indices.
pub fn difference(norm: &Normalizer, r1: &Sparse, r2: &Sparse) -> Sparse {
    let mut out = Vec::with_capacity(r1.len().max(r2.len()));
    let (mut i, mut k) = (0, 0);
    while i < r1.len() || k < r2.len() {
        let j1 = r1.get(i).map_or(usize::MAX, |e| e.0);
        let j2 = r2.get(k).map_or(usize::MAX, |e| e.0);
        let j = j1.min(j2);
        let v1 = if j1 == j { i += 1; r1[i - 1].1 } else { 0.0 };
        let v2 = if j2 == j { k += 1; r2[k - 1].1 } else { 0.0 };
        let d = norm.apply(j, v2) - norm.apply(j, v1);
        if d != 0.0 {
            out.push((j, d));
        }
    }
    out
}

/// A fitted feature space: columns plus normalization bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairEncoder {
    pub space: FeatureSpace,
    pub normalizer: Normalizer,
}

impl PairEncoder {
    /// Bounds over both members of every training pair.
    pub fn fit(space: FeatureSpace, training: &[&PairFeatures]) -> Result<PairEncoder> {
        let mut rows = Vec::with_capacity(training.len() * 2);
        for p in training {
            let (a, b) = space.pair_rows(p)?;
            rows.push(a);
            rows.push(b);
        }
        let normalizer = Normalizer::fit(&rows, space.dim())?;
        Ok(PairEncoder { space, normalizer })
    }

    pub fn ready(self) -> Self {
        PairEncoder { space: self.space.ready(), ..self }
    }

    pub fn encode(&self, p: &PairFeatures) -> Result<Sparse> {
        let (a, b) = self.space.pair_rows(p)?;
        Ok(difference(&self.normalizer, &a, &b))
    }

    pub fn example(&self, p: &PairFeatures, label: Label) -> Result<Example> {
        Ok(Example { x: self.encode(p)?, y: label.as_target() as f64 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn difference_merges_and_is_antisymmetric() {
        let n = Normalizer { min: vec![0.0, 0.0, 0.0], max: vec![2.0, 4.0, 1.0] };
        let a = vec![(0, 1.0), (2, 1.0)];
        let b = vec![(0, 2.0), (1, 2.0)];
        let d = difference(&n, &a, &b);
        assert_eq!(d, vec![(0, 0.5), (1, 0.5), (2, -1.0)]);
        let back = difference(&n, &b, &a);
        assert!(d.iter().zip(&back).all(|(x, y)| x.0 == y.0 && x.1 == -y.1));
    }
}
