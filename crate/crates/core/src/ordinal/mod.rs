//! Ordinal classification by pooling one binary classifier per threshold.
//!
//! With ordered classes `c_0 < ... < c_{n-1}`, threshold classifier `i`
//! estimates `P(Y > c_i)`. A fitted [`OrdinalModel`] holds the `n - 1`
//! classifiers together with the anchor threshold (`best_split_idx`) that the
//! difference and tree inference rules spread out from.

mod inference;
mod ovr;
mod split;

use std::fmt;
use std::str::FromStr;

use log::warn;
use ndarray::{Array2, ArrayView1, ArrayView2, Axis};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use inference::{
    difference_class_probs, difference_from_thresholds, eq1_class_probs, monotone_adjust,
    vote_class, InferenceMethod,
};
pub use ovr::{fit_one_vs_rest, OneVsRestModel};
pub use split::{
    choose_split, split_best_classifier, split_even, split_fixed, threshold_f1_scores, FixedSplit,
    SplitStrategy, DEFAULT_FOLDS,
};

use crate::classifier::{BinaryClassifier, ClassifierFactory};
use crate::dataset::{validate_dataset, ClassIndexMap, Dataset};
use crate::error::{Error, Result};
use crate::learners::ConstantBinary;
use crate::probs::{ClassProbs, ThresholdProbs};

/// Which rows each threshold classifier is trained on.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FittingMode {
    /// Every classifier sees every training row.
    #[default]
    Full,
    /// Below the anchor, classifier `i` sees rows with class `<= i + 1`;
    /// above it, rows with class `>= i`. The tree rule's conditional reading
    /// of each output then matches what the classifier was trained on.
    ConditionalSubset,
}

impl FittingMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            FittingMode::Full => "full",
            FittingMode::ConditionalSubset => "conditional_subset",
        }
    }
}

impl fmt::Display for FittingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FittingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(FittingMode::Full),
            "conditional_subset" | "conditional" => Ok(FittingMode::ConditionalSubset),
            other => Err(Error::InvalidArgument(format!("unknown fitting mode `{other}`"))),
        }
    }
}

/// A trained threshold slot: the base learner, or a constant when its
/// training rows held only one binary class.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdModel<C> {
    Fitted(C),
    ConstantFallback(ConstantBinary),
}

impl<C> ThresholdModel<C> {
    pub fn is_fallback(&self) -> bool {
        matches!(self, ThresholdModel::ConstantFallback(_))
    }

    pub fn fitted(&self) -> Option<&C> {
        match self {
            ThresholdModel::Fitted(c) => Some(c),
            ThresholdModel::ConstantFallback(_) => None,
        }
    }
}

impl<C: BinaryClassifier> BinaryClassifier for ThresholdModel<C> {
    fn fit(&mut self, features: ArrayView2<'_, f64>, targets: &[bool]) -> Result<()> {
        match self {
            ThresholdModel::Fitted(c) => c.fit(features, targets),
            ThresholdModel::ConstantFallback(c) => c.fit(features, targets),
        }
    }

    fn predict_proba_positive(&self, features: ArrayView2<'_, f64>) -> Result<Vec<f64>> {
        match self {
            ThresholdModel::Fitted(c) => c.predict_proba_positive(features),
            ThresholdModel::ConstantFallback(c) => c.predict_proba_positive(features),
        }
    }

    fn predict(&self, features: ArrayView2<'_, f64>) -> Result<Vec<bool>> {
        match self {
            ThresholdModel::Fitted(c) => c.predict(features),
            ThresholdModel::ConstantFallback(c) => c.predict(features),
        }
    }
}

/// Fits one classifier on `targets`, or a constant fallback when `targets`
/// contains a single class.
pub(crate) fn fit_threshold<F: ClassifierFactory>(
    factory: &F,
    features: ArrayView2<'_, f64>,
    targets: &[bool],
) -> Result<ThresholdModel<F::Classifier>> {
    let positives = targets.iter().filter(|&&t| t).count();
    if positives == 0 || positives == targets.len() {
        warn!(
            "threshold subset of {} rows has a single binary class; using a constant classifier",
            targets.len()
        );
        return Ok(ThresholdModel::ConstantFallback(ConstantBinary::positive_rate(targets)));
    }
    let mut clf = factory.build();
    clf.fit(features, targets)?;
    Ok(ThresholdModel::Fitted(clf))
}

/// Training rows used by threshold `t` under `mode` with anchor `split`.
fn threshold_rows(label_idx: &[usize], t: usize, split: usize, mode: FittingMode) -> Option<Vec<usize>> {
    match mode {
        FittingMode::Full => None,
        FittingMode::ConditionalSubset => {
            let keep = |c: usize| {
                if t < split {
                    c <= t + 1
                } else if t > split {
                    c + 1 > t
                } else {
                    true
                }
            };
            Some(
                label_idx
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| keep(c))
                    .map(|(r, _)| r)
                    .collect(),
            )
        }
    }
}

/// Per-threshold training summary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdSummary {
    pub threshold: usize,
    pub rows: usize,
    pub positives: usize,
    pub fallback: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrdinalModel<C> {
    classes: ClassIndexMap,
    classifiers: Vec<ThresholdModel<C>>,
    best_split_idx: usize,
    fitting_mode: FittingMode,
    split_strategy: SplitStrategy,
    n_features: usize,
    #[serde(default)]
    feature_names: Option<Vec<String>>,
    #[serde(default)]
    summaries: Vec<ThresholdSummary>,
}

/// Fits `n - 1` threshold classifiers on `ds` and picks the anchor threshold
/// with `strategy`.
pub fn fit_ordinal<F: ClassifierFactory>(
    factory: &F,
    ds: &Dataset,
    strategy: SplitStrategy,
    mode: FittingMode,
) -> Result<OrdinalModel<F::Classifier>> {
    validate_dataset(ds)?;
    let n = ds.n_classes();
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "ordinal fitting needs at least 2 classes, got {n}"
        )));
    }
    if let SplitStrategy::BestClassifier { folds, .. } = strategy {
        if folds < 2 || folds > ds.n_samples() {
            return Err(Error::InvalidArgument(format!(
                "fold count {folds} must lie in [2, {}]",
                ds.n_samples()
            )));
        }
    }
    let split = choose_split(&strategy, factory, ds)?;
    let labels = ds.label_indices();

    let fitted = (0..n - 1)
        .into_par_iter()
        .map(|t| {
            let (x, targets) = match threshold_rows(labels, t, split, mode) {
                None => (ds.features().to_owned(), labels.iter().map(|&c| c > t).collect::<Vec<_>>()),
                Some(rows) => (
                    ds.features().select(Axis(0), &rows),
                    rows.iter().map(|&r| labels[r] > t).collect(),
                ),
            };
            let model = fit_threshold(factory, x.view(), &targets)?;
            let summary = ThresholdSummary {
                threshold: t,
                rows: targets.len(),
                positives: targets.iter().filter(|&&b| b).count(),
                fallback: model.is_fallback(),
            };
            Ok((model, summary))
        })
        .collect::<Result<Vec<_>>>()?;
    let (classifiers, summaries) = fitted.into_iter().unzip();

    Ok(OrdinalModel {
        classes: ds.class_map().clone(),
        classifiers,
        best_split_idx: split,
        fitting_mode: mode,
        split_strategy: strategy,
        n_features: ds.n_features(),
        feature_names: ds.feature_names().map(<[String]>::to_vec),
        summaries,
    })
}

impl<C: BinaryClassifier> OrdinalModel<C> {
    /// Assembles a model from already-trained threshold classifiers.
    pub fn from_parts(
        classes: ClassIndexMap,
        classifiers: Vec<ThresholdModel<C>>,
        best_split_idx: usize,
        fitting_mode: FittingMode,
        split_strategy: SplitStrategy,
        n_features: usize,
    ) -> Result<Self> {
        let model = OrdinalModel {
            classes,
            classifiers,
            best_split_idx,
            fitting_mode,
            split_strategy,
            n_features,
            feature_names: None,
            summaries: Vec::new(),
        };
        model.check()?;
        Ok(model)
    }

    /// Names the feature columns, which CSV prediction matches by header.
    pub fn with_feature_names(mut self, names: Vec<String>) -> Result<Self> {
        self.feature_names = Some(names);
        self.check()?;
        Ok(self)
    }

    /// Structural invariants; also run after deserialisation.
    pub fn check(&self) -> Result<()> {
        let n = self.classes.len();
        if n < 2 {
            return Err(Error::Format(format!("model has {n} classes, need at least 2")));
        }
        if self.classifiers.len() != n - 1 {
            return Err(Error::Format(format!(
                "{} classifiers for {n} classes",
                self.classifiers.len()
            )));
        }
        if self.best_split_idx > n - 2 {
            return Err(Error::Format(format!(
                "best split index {} out of range for {n} classes",
                self.best_split_idx
            )));
        }
        if let Some(names) = &self.feature_names {
            if names.len() != self.n_features {
                return Err(Error::Format("feature name count disagrees with n_features".into()));
            }
        }
        Ok(())
    }

    pub fn classes(&self) -> &ClassIndexMap {
        &self.classes
    }

    pub fn n_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn feature_names(&self) -> Option<&[String]> {
        self.feature_names.as_deref()
    }

    pub fn classifiers(&self) -> &[ThresholdModel<C>] {
        &self.classifiers
    }

    pub fn best_split_idx(&self) -> usize {
        self.best_split_idx
    }

    pub fn fitting_mode(&self) -> FittingMode {
        self.fitting_mode
    }

    pub fn split_strategy(&self) -> SplitStrategy {
        self.split_strategy
    }

    pub fn summaries(&self) -> &[ThresholdSummary] {
        &self.summaries
    }

    fn check_dim(&self, got: usize) -> Result<()> {
        if got != self.n_features {
            return Err(Error::DimensionMismatch {
                expected: self.n_features,
                got,
            });
        }
        Ok(())
    }

    /// Threshold probabilities for every row: `out[row][i]`.
    pub fn threshold_probs_batch(&self, x: ArrayView2<'_, f64>) -> Result<Vec<ThresholdProbs>> {
        self.check_dim(x.ncols())?;
        let columns = self
            .classifiers
            .iter()
            .map(|c| c.predict_proba_positive(x))
            .collect::<Result<Vec<_>>>()?;
        (0..x.nrows())
            .map(|r| {
                let row: Vec<f64> = columns.iter().map(|col| col[r]).collect();
                ThresholdProbs::new(row).map_err(|e| match e {
                    Error::InvalidProbability { value, .. } => Error::InvalidProbability { row: r, value },
                    other => other,
                })
            })
            .collect()
    }

    pub fn threshold_probs(&self, x: ArrayView1<'_, f64>) -> Result<ThresholdProbs> {
        let row = x.insert_axis(Axis(0));
        Ok(self.threshold_probs_batch(row)?.remove(0))
    }

    pub fn infer_difference(&self, x: ArrayView1<'_, f64>) -> Result<ClassProbs> {
        difference_from_thresholds(&self.threshold_probs(x)?, self.best_split_idx)
    }

    pub fn infer_tree(&self, x: ArrayView1<'_, f64>) -> Result<ClassProbs> {
        eq1_class_probs(&self.threshold_probs(x)?, self.best_split_idx)
    }

    /// Class index from hard threshold predictions.
    pub fn infer_votes(&self, x: ArrayView1<'_, f64>) -> Result<usize> {
        Ok(self.votes_batch(x.insert_axis(Axis(0)))?[0])
    }

    fn votes_batch(&self, x: ArrayView2<'_, f64>) -> Result<Vec<usize>> {
        self.check_dim(x.ncols())?;
        let mut counts = vec![0usize; x.nrows()];
        for c in &self.classifiers {
            for (n, v) in counts.iter_mut().zip(c.predict(x)?) {
                *n += v as usize;
            }
        }
        Ok(counts)
    }

    /// Class probability matrix `[rows × classes]`. Votes yield one-hot rows.
    pub fn predict_proba(&self, x: ArrayView2<'_, f64>, method: InferenceMethod) -> Result<Array2<f64>> {
        let n = self.n_classes();
        let mut out = Array2::zeros((x.nrows(), n));
        match method {
            InferenceMethod::Votes => {
                for (r, c) in self.votes_batch(x)?.into_iter().enumerate() {
                    out[[r, c]] = 1.0;
                }
            }
            InferenceMethod::Difference | InferenceMethod::Tree => {
                for (r, tp) in self.threshold_probs_batch(x)?.iter().enumerate() {
                    let probs = match method {
                        InferenceMethod::Difference => difference_from_thresholds(tp, self.best_split_idx)?,
                        _ => eq1_class_probs(tp, self.best_split_idx)?,
                    };
                    out.row_mut(r).assign(&ArrayView1::from(probs.as_slice()));
                }
            }
        }
        Ok(out)
    }

    /// Predicted class indices (argmax, lowest index on ties).
    pub fn predict(&self, x: ArrayView2<'_, f64>, method: InferenceMethod) -> Result<Vec<usize>> {
        match method {
            InferenceMethod::Votes => self.votes_batch(x),
            _ => Ok(self
                .predict_proba(x, method)?
                .rows()
                .into_iter()
                .map(|r| crate::probs::argmax(r.as_slice().expect("standard layout")))
                .collect()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::ClassId;
    use crate::learners::LearnerKind;
    use ndarray::array;

    fn constant_model(ps: &[f64], split: usize) -> OrdinalModel<ConstantBinary> {
        let classes = ClassIndexMap::new((0..=ps.len()).map(|i| ClassId::new(i.to_string())).collect()).unwrap();
        let clfs = ps.iter().map(|&p| ThresholdModel::Fitted(ConstantBinary { p })).collect();
        OrdinalModel::from_parts(classes, clfs, split, FittingMode::Full, SplitStrategy::First, 1).unwrap()
    }

    #[test]
    fn threshold_probs_pass_through() {
        let m = constant_model(&[0.8, 0.3], 0);
        let x = array![0.0];
        assert_eq!(m.threshold_probs(x.view()).unwrap().as_slice(), &[0.8, 0.3]);
        let m2 = constant_model(&[0.6], 0);
        assert_eq!(m2.threshold_probs(x.view()).unwrap().as_slice(), &[0.6]);
        let p = m.infer_difference(x.view()).unwrap();
        assert!((p.as_slice()[1] - 0.5).abs() < 1e-12);
        assert!(matches!(
            m.threshold_probs(array![0.0, 1.0].view()),
            Err(Error::DimensionMismatch { expected: 1, got: 2 })
        ));
    }

    #[test]
    fn structure_checks() {
        let classes = ClassIndexMap::new(vec!["a".into(), "b".into(), "c".into()]).unwrap();
        let one = vec![ThresholdModel::Fitted(ConstantBinary { p: 0.5 })];
        assert!(OrdinalModel::from_parts(classes.clone(), one, 0, FittingMode::Full, SplitStrategy::First, 1).is_err());
        let two = vec![ThresholdModel::Fitted(ConstantBinary { p: 0.5 }); 2];
        assert!(OrdinalModel::from_parts(classes, two, 2, FittingMode::Full, SplitStrategy::First, 1).is_err());
    }

    fn toy(n_classes: usize, per_class: usize) -> Dataset {
        let rows = n_classes * per_class;
        let x = Array2::from_shape_fn((rows, 2), |(r, j)| {
            let c = (r / per_class) as f64;
            c + 0.3 * (((r * 7 + j * 3) % 11) as f64 / 11.0 - 0.5)
        });
        let labels = (0..rows).map(|r| ClassId::new((r / per_class).to_string())).collect();
        Dataset::new(x, labels, None, None).unwrap()
    }

    #[test]
    fn fit_produces_n_minus_one() {
        let ds = toy(3, 10);
        let m = fit_ordinal(&LearnerKind::Logistic, &ds, SplitStrategy::EvenSplit, FittingMode::Full).unwrap();
        assert_eq!(m.classifiers().len(), 2);
        assert_eq!(m.summaries().len(), 2);
        assert!(m.summaries().iter().all(|s| s.rows == 30));
    }

    #[test]
    fn two_classes_always_split_zero() {
        let ds = toy(2, 8);
        for s in ["even_split", "best_classifier", "first", "last", "middle"] {
            let strategy = SplitStrategy::parse_with_seed(s, 1).unwrap();
            let m = fit_ordinal(&LearnerKind::Gnb, &ds, strategy, FittingMode::Full).unwrap();
            assert_eq!(m.best_split_idx(), 0, "{s}");
        }
    }

    #[test]
    fn conditional_subsets() {
        let ds = toy(4, 5);
        let m = fit_ordinal(&LearnerKind::Gnb, &ds, SplitStrategy::Middle, FittingMode::ConditionalSubset).unwrap();
        assert_eq!(m.best_split_idx(), 1);
        let rows: Vec<usize> = m.summaries().iter().map(|s| s.rows).collect();
        // t=0: classes {0,1}; t=1: all; t=2: classes {2,3}
        assert_eq!(rows, vec![10, 20, 10]);
        let pos: Vec<usize> = m.summaries().iter().map(|s| s.positives).collect();
        assert_eq!(pos, vec![5, 10, 5]);
    }

    #[test]
    fn missing_class_rejected() {
        let x = array![[0.0], [1.0]];
        let ds = Dataset::new(x, vec!["a".into(), "c".into()], Some(vec!["a".into(), "b".into(), "c".into()]), None).unwrap();
        assert!(matches!(
            fit_ordinal(&LearnerKind::Gnb, &ds, SplitStrategy::First, FittingMode::Full),
            Err(Error::MissingClasses(_))
        ));
    }

    #[test]
    fn predictions_separate_classes() {
        let ds = toy(4, 12);
        let m = fit_ordinal(&LearnerKind::Logistic, &ds, SplitStrategy::EvenSplit, FittingMode::Full).unwrap();
        for method in [InferenceMethod::Difference, InferenceMethod::Tree, InferenceMethod::Votes] {
            let pred = m.predict(ds.features(), method).unwrap();
            let acc = pred.iter().zip(ds.label_indices()).filter(|(a, b)| a == b).count();
            assert!(acc as f64 / 48.0 > 0.9, "{method}: {acc}");
        }
    }
}
