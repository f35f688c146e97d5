//! Min-max scaling fitted on training rows.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::Sparse;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Normalizer {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

impl Normalizer {
    /// Bounds over sparse rows of width `dim`; a feature missing from some
    /// row has the implicit value 0 there.
    pub fn fit<'a>(rows: impl IntoIterator<Item = &'a Sparse>, dim: usize) -> Result<Normalizer> {
        let mut min = vec![f64::INFINITY; dim];
        let mut max = vec![f64::NEG_INFINITY; dim];
        let mut present = vec![0usize; dim];
        let mut n = 0usize;
        for (r, row) in rows.into_iter().enumerate() {
            n += 1;
            for &(j, v) in row {
                if j >= dim {
                    return Err(Error::Dimension { expected: dim, actual: j + 1 });
                }
                if !v.is_finite() {
                    return Err(Error::NonFinite { row: r, column: j });
                }
                min[j] = min[j].min(v);
                max[j] = max[j].max(v);
                present[j] += 1;
            }
        }
        if n == 0 {
            return Err(Error::EmptyInput("normalizer training rows"));
        }
        for j in 0..dim {
            if present[j] < n {
                min[j] = min[j].min(0.0);
                max[j] = max[j].max(0.0);
            }
        }
        Ok(Normalizer { min, max })
    }

    pub fn dim(&self) -> usize {
        self.min.len()
    }

    /// Scaled value clamped to [0, 1]; a constant feature maps to 0.5.
    pub fn apply(&self, j: usize, v: f64) -> f64 {
        let (lo, hi) = (self.min[j], self.max[j]);
        if hi <= lo {
            return 0.5;
        }
        ((v - lo) / (hi - lo)).clamp(0.0, 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let n = Normalizer { min: vec![2.0, 7.0], max: vec![10.0, 7.0] };
        assert_eq!(n.apply(0, 6.0), 0.5);
        assert_eq!(n.apply(0, 12.0), 1.0);
        assert_eq!(n.apply(0, -1.0), 0.0);
        assert_eq!(n.apply(1, 123.0), 0.5);
    }

    #[test]
    fn implicit_zeros_widen_bounds() {
        let rows = vec![vec![(0, 3.0), (1, 5.0)], vec![(0, 4.0)]];
        let n = Normalizer::fit(&rows, 3).unwrap();
        assert_eq!(n.min, vec![3.0, 0.0, 0.0]);
        assert_eq!(n.max, vec![4.0, 5.0, 0.0]);
        assert!(Normalizer::fit(&vec![vec![(0, f64::NAN)]], 1).is_err());
        assert!(Normalizer::fit(&Vec::<Sparse>::new(), 1).is_err());
    }
}
