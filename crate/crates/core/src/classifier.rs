//! The binary classifier contract every base learner satisfies.

use ndarray::ArrayView2;

use crate::error::{Error, Result};

/// Anything fittable on binary targets. Probabilities are for the positive
/// (`true`) class.
///
/// A learner that only produces hard labels can override [`predict`] and
/// leave [`predict_proba_positive`] at its default; it then works with vote
/// inference only.
///
/// [`predict`]: BinaryClassifier::predict
/// [`predict_proba_positive`]: BinaryClassifier::predict_proba_positive
pub trait BinaryClassifier: Send + Sync {
    fn fit(&mut self, features: ArrayView2<'_, f64>, targets: &[bool]) -> Result<()>;

    fn predict_proba_positive(&self, _features: ArrayView2<'_, f64>) -> Result<Vec<f64>> {
        Err(Error::ProbabilitiesUnavailable)
    }

    /// Positive exactly when the probability exceeds 0.5; a tie is negative.
    fn predict(&self, features: ArrayView2<'_, f64>) -> Result<Vec<bool>> {
        Ok(self
            .predict_proba_positive(features)?
            .into_iter()
            .map(|p| p > 0.5)
            .collect())
    }
}

/// Produces fresh, unfitted classifiers.
pub trait ClassifierFactory: Sync {
    type Classifier: BinaryClassifier;

    fn build(&self) -> Self::Classifier;
}

impl<C, F> ClassifierFactory for F
where
    C: BinaryClassifier,
    F: Fn() -> C + Sync,
{
    type Classifier = C;

    fn build(&self) -> C {
        self()
    }
}

/// Rejects targets that do not contain both classes.
pub(crate) fn require_both_classes(targets: &[bool]) -> Result<()> {
    let positives = targets.iter().filter(|&&t| t).count();
    if targets.is_empty() {
        Err(Error::DegenerateTarget("no training rows".into()))
    } else if positives == 0 {
        Err(Error::DegenerateTarget("no positive rows".into()))
    } else if positives == targets.len() {
        Err(Error::DegenerateTarget("no negative rows".into()))
    } else {
        Ok(())
    }
}

pub(crate) fn check_fit_shape(features: ArrayView2<'_, f64>, targets: &[bool]) -> Result<()> {
    if features.nrows() != targets.len() {
        return Err(Error::InvalidArgument(format!(
            "{} feature rows for {} targets",
            features.nrows(),
            targets.len()
        )));
    }
    Ok(())
}
