//! Turning per-threshold probabilities into class probabilities.
//!
//! Threshold `i` separates class `i` from class `i + 1`; with `n` classes
//! there are `n - 1` thresholds. `split` is the anchor threshold.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::probs::{ClassProbs, ThresholdProbs};

/// How a fitted ordinal model turns threshold outputs into a prediction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InferenceMethod {
    /// Cumulative: adjacent differences of monotonised exceedance probabilities.
    Difference,
    /// Hierarchical: conditional chain outward from the split threshold.
    Tree,
    /// Count of thresholds voting "above"; needs hard predictions only.
    Votes,
}

impl InferenceMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            InferenceMethod::Difference => "difference",
            InferenceMethod::Tree => "tree",
            InferenceMethod::Votes => "votes",
        }
    }
}

impl fmt::Display for InferenceMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InferenceMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "difference" => Ok(InferenceMethod::Difference),
            "tree" => Ok(InferenceMethod::Tree),
            "votes" => Ok(InferenceMethod::Votes),
            other => Err(Error::InvalidArgument(format!("unknown inference method `{other}`"))),
        }
    }
}

fn check_split(p: &ThresholdProbs, split: usize) -> Result<()> {
    if split >= p.len() {
        return Err(Error::InvalidArgument(format!(
            "split index {split} out of range for {} thresholds",
            p.len()
        )));
    }
    Ok(())
}

/// Projects `p` onto a non-increasing sequence anchored at `split`: a running
/// minimum to the right of the anchor and a running maximum to its left. The
/// anchor entry is never changed.
pub fn monotone_adjust(p: &ThresholdProbs, split: usize) -> Result<ThresholdProbs> {
    check_split(p, split)?;
    let mut q = p.as_slice().to_vec();
    for i in split..q.len() - 1 {
        q[i + 1] = q[i].min(q[i + 1]);
    }
    for i in (1..=split).rev() {
        q[i - 1] = q[i - 1].max(q[i]);
    }
    Ok(ThresholdProbs::from_vec_unchecked(q))
}

/// Class probabilities from a non-increasing exceedance vector `q`:
/// `[1 - q0, q0 - q1, ..., q_{m-2} - q_{m-1}, q_{m-1}]`.
pub fn difference_class_probs(q: &ThresholdProbs) -> ClassProbs {
    let q = q.as_slice();
    let m = q.len();
    let mut out = Vec::with_capacity(m + 1);
    out.push(1.0 - q[0]);
    for k in 1..m {
        out.push(q[k - 1] - q[k]);
    }
    out.push(q[m - 1]);
    ClassProbs::clamped(out)
}

/// Difference inference: monotone adjustment around `split`, then adjacent
/// differences.
pub fn difference_from_thresholds(p: &ThresholdProbs, split: usize) -> Result<ClassProbs> {
    Ok(difference_class_probs(&monotone_adjust(p, split)?))
}

/// Tree inference. `p[split]` is read as `P(Y > c_split)`; entries below the
/// split as `P(Y > c_i | Y <= c_{i+1})`; entries above as
/// `P(Y > c_i | Y > c_{i-1})`. Mass below the anchor flows down through the
/// lower conditionals, mass above flows up through the upper ones.
pub fn eq1_class_probs(p: &ThresholdProbs, split: usize) -> Result<ClassProbs> {
    check_split(p, split)?;
    let p = p.as_slice();
    let n = p.len() + 1;
    let mut out = vec![0.0; n];

    // P(Y <= c_k), walking down from the anchor
    let mut at_most = 1.0 - p[split];
    for k in (1..=split).rev() {
        out[k] = at_most * p[k - 1];
        at_most *= 1.0 - p[k - 1];
    }
    out[0] = at_most;

    // P(Y > c_{k-1}), walking up from the anchor
    let mut above = p[split];
    for k in split + 1..n - 1 {
        out[k] = above * (1.0 - p[k]);
        above *= p[k];
    }
    out[n - 1] = above;

    Ok(ClassProbs::clamped(out))
}

/// Class index from hard threshold votes: the number of "above" votes.
pub fn vote_class(votes: &[bool]) -> usize {
    votes.iter().filter(|&&v| v).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tp(v: &[f64]) -> ThresholdProbs {
        ThresholdProbs::new(v.to_vec()).unwrap()
    }

    fn close(a: &[f64], b: &[f64]) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() < 1e-12, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn monotone_examples() {
        close(monotone_adjust(&tp(&[0.3, 0.6]), 0).unwrap().as_slice(), &[0.3, 0.3]);
        close(monotone_adjust(&tp(&[0.9, 0.5, 0.2]), 1).unwrap().as_slice(), &[0.9, 0.5, 0.2]);
        close(monotone_adjust(&tp(&[0.2, 0.8, 0.5]), 2).unwrap().as_slice(), &[0.8, 0.8, 0.5]);
        assert!(monotone_adjust(&tp(&[0.2, 0.8]), 2).is_err());
    }

    #[test]
    fn difference_examples() {
        close(difference_class_probs(&tp(&[0.8, 0.3])).as_slice(), &[0.2, 0.5, 0.3]);
        close(difference_class_probs(&tp(&[1.0, 1.0])).as_slice(), &[0.0, 0.0, 1.0]);
        let two = difference_from_thresholds(&tp(&[0.6]), 0).unwrap();
        close(two.as_slice(), &[0.4, 0.6]);
        assert_eq!(two.argmax(), 1);
    }

    #[test]
    fn eq1_examples() {
        close(eq1_class_probs(&tp(&[0.8, 0.5]), 0).unwrap().as_slice(), &[0.2, 0.4, 0.4]);
        close(eq1_class_probs(&tp(&[0.5, 0.3]), 1).unwrap().as_slice(), &[0.35, 0.35, 0.3]);
        close(eq1_class_probs(&tp(&[0.6]), 0).unwrap().as_slice(), &[0.4, 0.6]);
        for split in 0..5 {
            let out = eq1_class_probs(&tp(&[0.0; 5]), split).unwrap();
            close(out.as_slice(), &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        }
    }

    #[test]
    fn vote_examples() {
        assert_eq!(vote_class(&[true, true, false, false]), 2);
        assert_eq!(vote_class(&[false; 4]), 0);
        assert_eq!(vote_class(&[true; 4]), 4);
    }

    #[test]
    fn method_parse() {
        assert_eq!("tree".parse::<InferenceMethod>().unwrap(), InferenceMethod::Tree);
        assert!("ovr".parse::<InferenceMethod>().is_err());
    }
}
