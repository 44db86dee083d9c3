//! Two-class Gaussian naive Bayes evaluated in log space.

use std::f64::consts::PI;

use ndarray::{ArrayView1, ArrayView2, Axis};
use serde::{Deserialize, Serialize};

use crate::classifier::{check_fit_shape, require_both_classes, BinaryClassifier};
use crate::error::{Error, Result};
use crate::learners::logistic::sigmoid;

/// Relative variance floor: `floor = ratio * max feature variance`.
pub const DEFAULT_VAR_FLOOR_RATIO: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianNbState {
    /// `means[c][j]` for class `c` (0 = negative, 1 = positive), feature `j`.
    pub means: [Vec<f64>; 2],
    pub variances: [Vec<f64>; 2],
    pub priors: [f64; 2],
    pub variance_floor: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianNbBinary {
    pub var_floor_ratio: f64,
    pub state: Option<GaussianNbState>,
}

impl Default for GaussianNbBinary {
    fn default() -> Self {
        GaussianNbBinary {
            var_floor_ratio: DEFAULT_VAR_FLOOR_RATIO,
            state: None,
        }
    }
}

impl GaussianNbBinary {
    /// A fitted model from explicit statistics.
    pub fn from_parts(means: [Vec<f64>; 2], variances: [Vec<f64>; 2], priors: [f64; 2]) -> Result<Self> {
        let d = means[0].len();
        if means[1].len() != d || variances[0].len() != d || variances[1].len() != d {
            return Err(Error::InvalidArgument("inconsistent naive Bayes dimensions".into()));
        }
        if variances.iter().flatten().any(|&v| v.is_nan() || v <= 0.0) {
            return Err(Error::InvalidArgument("variances must be positive".into()));
        }
        let total = priors[0] + priors[1];
        if !(priors[0] > 0.0 && priors[1] > 0.0 && (total - 1.0).abs() < 1e-12) {
            return Err(Error::InvalidArgument("priors must be positive and sum to 1".into()));
        }
        let floor = variances.iter().flatten().copied().fold(f64::INFINITY, f64::min);
        Ok(GaussianNbBinary {
            var_floor_ratio: DEFAULT_VAR_FLOOR_RATIO,
            state: Some(GaussianNbState {
                means,
                variances,
                priors,
                variance_floor: floor,
            }),
        })
    }

    pub fn state(&self) -> Option<&GaussianNbState> {
        self.state.as_ref()
    }

    fn log_joint(state: &GaussianNbState, class: usize, x: ArrayView1<'_, f64>) -> f64 {
        let mut acc = state.priors[class].ln();
        for ((v, m), var) in x.iter().zip(&state.means[class]).zip(&state.variances[class]) {
            let d = v - m;
            acc -= 0.5 * ((2.0 * PI * var).ln() + d * d / var);
        }
        acc
    }
}

impl BinaryClassifier for GaussianNbBinary {
    fn fit(&mut self, features: ArrayView2<'_, f64>, targets: &[bool]) -> Result<()> {
        check_fit_shape(features, targets)?;
        require_both_classes(targets)?;
        let max_var = features
            .var_axis(Axis(0), 0.0)
            .iter()
            .copied()
            .fold(0.0, f64::max);
        let floor = if max_var > 0.0 {
            self.var_floor_ratio * max_var
        } else {
            self.var_floor_ratio
        };

        let mut means: [Vec<f64>; 2] = Default::default();
        let mut variances: [Vec<f64>; 2] = Default::default();
        let mut priors = [0.0; 2];
        for class in 0..2 {
            let rows: Vec<usize> = targets
                .iter()
                .enumerate()
                .filter(|(_, &t)| t == (class == 1))
                .map(|(i, _)| i)
                .collect();
            let sub = features.select(Axis(0), &rows);
            means[class] = sub.mean_axis(Axis(0)).expect("non-empty").to_vec();
            variances[class] = sub.var_axis(Axis(0), 0.0).mapv(|v| v.max(floor)).to_vec();
            priors[class] = rows.len() as f64 / targets.len() as f64;
        }
        self.state = Some(GaussianNbState {
            means,
            variances,
            priors,
            variance_floor: floor,
        });
        Ok(())
    }

    fn predict_proba_positive(&self, features: ArrayView2<'_, f64>) -> Result<Vec<f64>> {
        let state = self
            .state
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("naive Bayes model is not fitted".into()))?;
        let d = state.means[0].len();
        if features.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: features.ncols(),
            });
        }
        Ok(features
            .rows()
            .into_iter()
            .map(|x| {
                let l0 = Self::log_joint(state, 0, x);
                let l1 = Self::log_joint(state, 1, x);
                sigmoid(l1 - l0)
            })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn symmetric_classes_half_at_origin() {
        let m = GaussianNbBinary::from_parts([vec![-1.0], vec![1.0]], [vec![1.0], vec![1.0]], [0.5, 0.5]).unwrap();
        assert_eq!(m.predict_proba_positive(array![[0.0]].view()).unwrap(), vec![0.5]);
        let m = GaussianNbBinary::from_parts([vec![0.0], vec![2.0]], [vec![1.0], vec![1.0]], [0.5, 0.5]).unwrap();
        assert_eq!(m.predict_proba_positive(array![[1.0]].view()).unwrap(), vec![0.5]);
    }

    #[test]
    fn hand_computed_posterior() {
        // densities at x=1: N(1;0,1) = e^{-1/2}/√(2π), N(1;3,4) = e^{-1/2}/√(8π)
        // ratio 1:1/2 under equal priors gives P(positive) = (1/2)/(3/2) = 1/3
        let m = GaussianNbBinary::from_parts([vec![0.0], vec![3.0]], [vec![1.0], vec![4.0]], [0.5, 0.5]).unwrap();
        let p = m.predict_proba_positive(array![[1.0]].view()).unwrap()[0];
        assert!((p - 1.0 / 3.0).abs() < 1e-12, "{p}");
    }

    #[test]
    fn fitted_statistics() {
        let x = array![[0.0], [2.0], [4.0], [10.0]];
        let mut m = GaussianNbBinary::default();
        m.fit(x.view(), &[false, false, true, true]).unwrap();
        let s = m.state().unwrap();
        assert_eq!(s.means, [vec![1.0], vec![7.0]]);
        assert_eq!(s.variances, [vec![1.0], vec![9.0]]);
        assert_eq!(s.priors, [0.5, 0.5]);
        assert!(s.variance_floor > 0.0);
    }

    #[test]
    fn constant_feature_is_floored() {
        let x = array![[1.0, 0.0], [1.0, 1.0], [1.0, 5.0]];
        let mut m = GaussianNbBinary::default();
        m.fit(x.view(), &[false, true, true]).unwrap();
        let s = m.state().unwrap();
        assert!(s.variances.iter().flatten().all(|&v| v >= s.variance_floor));
        for p in m.predict_proba_positive(array![[1e6, -1e6], [-1e6, 1e6]].view()).unwrap() {
            assert!((0.0..=1.0).contains(&p));
        }
    }
}
