//! One-vs-rest over the same binary learners: the order-blind baseline.

use ndarray::{Array2, ArrayView2};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classifier::{BinaryClassifier, ClassifierFactory};
use crate::dataset::{validate_dataset, ClassIndexMap, Dataset};
use crate::error::{Error, Result};
use crate::ordinal::{fit_threshold, ThresholdModel};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OneVsRestModel<C> {
    classes: ClassIndexMap,
    classifiers: Vec<ThresholdModel<C>>,
    n_features: usize,
    #[serde(default)]
    feature_names: Option<Vec<String>>,
}

/// One classifier per class, each trained on "this class" versus the rest.
pub fn fit_one_vs_rest<F: ClassifierFactory>(factory: &F, ds: &Dataset) -> Result<OneVsRestModel<F::Classifier>> {
    validate_dataset(ds)?;
    let labels = ds.label_indices();
    let classifiers = (0..ds.n_classes())
        .into_par_iter()
        .map(|k| {
            let targets: Vec<bool> = labels.iter().map(|&c| c == k).collect();
            fit_threshold(factory, ds.features(), &targets)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OneVsRestModel {
        classes: ds.class_map().clone(),
        classifiers,
        n_features: ds.n_features(),
        feature_names: ds.feature_names().map(<[String]>::to_vec),
    })
}

impl<C: BinaryClassifier> OneVsRestModel<C> {
    pub fn check(&self) -> Result<()> {
        if self.classifiers.len() != self.classes.len() {
            return Err(Error::Format(format!(
                "{} classifiers for {} classes",
                self.classifiers.len(),
                self.classes.len()
            )));
        }
        Ok(())
    }

    pub fn classes(&self) -> &ClassIndexMap {
        &self.classes
    }

    pub fn classifiers(&self) -> &[ThresholdModel<C>] {
        &self.classifiers
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn feature_names(&self) -> Option<&[String]> {
        self.feature_names.as_deref()
    }

    /// Per-class scores normalised to sum to one (uniform if all are zero).
    pub fn predict_proba(&self, x: ArrayView2<'_, f64>) -> Result<Array2<f64>> {
        if x.ncols() != self.n_features {
            return Err(Error::DimensionMismatch {
                expected: self.n_features,
                got: x.ncols(),
            });
        }
        let n = self.classes.len();
        let mut out = Array2::zeros((x.nrows(), n));
        for (k, clf) in self.classifiers.iter().enumerate() {
            for (r, p) in clf.predict_proba_positive(x)?.into_iter().enumerate() {
                out[[r, k]] = p;
            }
        }
        for mut row in out.rows_mut() {
            let total: f64 = row.sum();
            if total > 0.0 {
                row /= total;
            } else {
                row.fill(1.0 / n as f64);
            }
        }
        Ok(out)
    }

    pub fn predict(&self, x: ArrayView2<'_, f64>) -> Result<Vec<usize>> {
        Ok(self
            .predict_proba(x)?
            .rows()
            .into_iter()
            .map(|r| crate::probs::argmax(r.as_slice().expect("standard layout")))
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::ClassId;
    use crate::learners::LearnerKind;

    #[test]
    fn rows_normalised() {
        let x = Array2::from_shape_fn((30, 1), |(r, _)| (r / 10) as f64 + 0.01 * r as f64);
        let labels = (0..30).map(|r| ClassId::new((r / 10).to_string())).collect();
        let ds = Dataset::new(x, labels, None, None).unwrap();
        let m = fit_one_vs_rest(&LearnerKind::Gnb, &ds).unwrap();
        let p = m.predict_proba(ds.features()).unwrap();
        for row in p.rows() {
            assert!((row.sum() - 1.0).abs() < 1e-12);
        }
        let acc = m.predict(ds.features()).unwrap().iter().zip(ds.label_indices()).filter(|(a, b)| a == b).count();
        assert!(acc >= 27);
    }
}
