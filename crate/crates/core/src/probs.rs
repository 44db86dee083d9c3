//! Probability vectors passed between the threshold classifiers and the
//! inference rules.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Entry `i` is threshold classifier `i`'s output for one sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ThresholdProbs(Vec<f64>);

impl ThresholdProbs {
    /// Rejects entries outside `[0, 1]` (including NaN).
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("empty threshold vector".into()));
        }
        for (row, &value) in values.iter().enumerate() {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::InvalidProbability { row, value });
            }
        }
        Ok(ThresholdProbs(values))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub(crate) fn from_vec_unchecked(values: Vec<f64>) -> Self {
        ThresholdProbs(values)
    }
}

/// One probability per class, aligned with the class index map.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClassProbs(Vec<f64>);

impl ClassProbs {
    /// Clamps each entry into `[0, 1]`; rounding can push telescoped
    /// differences a hair below zero.
    pub(crate) fn clamped(values: Vec<f64>) -> Self {
        ClassProbs(values.into_iter().map(|v| v.clamp(0.0, 1.0)).collect())
    }

    pub fn one_hot(n: usize, index: usize) -> Self {
        let mut v = vec![0.0; n];
        v[index] = 1.0;
        ClassProbs(v)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// Index of the largest entry, lowest index on ties.
    pub fn argmax(&self) -> usize {
        argmax(&self.0)
    }
}

/// First index of the maximum.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn argmax_breaks_ties_low() {
        assert_eq!(argmax(&[0.2, 0.4, 0.4]), 1);
        assert_eq!(argmax(&[0.5, 0.5]), 0);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(ThresholdProbs::new(vec![0.2, 1.2]).is_err());
        assert!(ThresholdProbs::new(vec![f64::NAN]).is_err());
        assert!(ThresholdProbs::new(vec![0.0, 1.0]).is_ok());
    }
}
