//! Built-in binary learners.

mod gnb;
mod logistic;

use std::fmt;
use std::str::FromStr;

use ndarray::ArrayView2;
use serde::{Deserialize, Serialize};

pub use gnb::{GaussianNbBinary, GaussianNbState, DEFAULT_VAR_FLOOR_RATIO};
pub use logistic::{objective_and_gradient, sigmoid, LogisticBinary, LogisticParams, LogisticState};

use crate::classifier::{check_fit_shape, BinaryClassifier, ClassifierFactory};
use crate::error::{Error, Result};

/// Emits the same probability for every input.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantBinary {
    pub p: f64,
}

impl ConstantBinary {
    pub fn new(p: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&p) {
            Ok(ConstantBinary { p })
        } else {
            Err(Error::InvalidArgument(format!("constant probability {p} outside [0, 1]")))
        }
    }

    /// Empirical positive rate of `targets` (0.5 when empty).
    pub fn positive_rate(targets: &[bool]) -> Self {
        let p = if targets.is_empty() {
            0.5
        } else {
            targets.iter().filter(|&&t| t).count() as f64 / targets.len() as f64
        };
        ConstantBinary { p }
    }
}

impl BinaryClassifier for ConstantBinary {
    /// Refits to the positive rate; never fails on degenerate targets.
    fn fit(&mut self, features: ArrayView2<'_, f64>, targets: &[bool]) -> Result<()> {
        check_fit_shape(features, targets)?;
        *self = ConstantBinary::positive_rate(targets);
        Ok(())
    }

    fn predict_proba_positive(&self, features: ArrayView2<'_, f64>) -> Result<Vec<f64>> {
        Ok(vec![self.p; features.nrows()])
    }
}

/// Selector for the built-in learners (CLI / config spelling).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LearnerKind {
    Logistic,
    Gnb,
}

impl LearnerKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            LearnerKind::Logistic => "logistic",
            LearnerKind::Gnb => "gnb",
        }
    }
}

impl fmt::Display for LearnerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LearnerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "logistic" => Ok(LearnerKind::Logistic),
            "gnb" | "gaussian_nb" => Ok(LearnerKind::Gnb),
            other => Err(Error::InvalidArgument(format!("unknown learner `{other}`"))),
        }
    }
}

impl ClassifierFactory for LearnerKind {
    type Classifier = Learner;

    fn build(&self) -> Learner {
        match self {
            LearnerKind::Logistic => Learner::Logistic(LogisticBinary::default()),
            LearnerKind::Gnb => Learner::GaussianNb(GaussianNbBinary::default()),
        }
    }
}

/// Any built-in learner; this is what model documents persist.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Learner {
    Logistic(LogisticBinary),
    GaussianNb(GaussianNbBinary),
    Constant(ConstantBinary),
}

impl Learner {
    /// Whether optimisation reached its tolerance; `None` for closed-form learners.
    pub fn converged(&self) -> Option<bool> {
        match self {
            Learner::Logistic(m) => m.state().map(|s| s.converged),
            _ => None,
        }
    }
}

impl BinaryClassifier for Learner {
    fn fit(&mut self, features: ArrayView2<'_, f64>, targets: &[bool]) -> Result<()> {
        match self {
            Learner::Logistic(m) => m.fit(features, targets),
            Learner::GaussianNb(m) => m.fit(features, targets),
            Learner::Constant(m) => m.fit(features, targets),
        }
    }

    fn predict_proba_positive(&self, features: ArrayView2<'_, f64>) -> Result<Vec<f64>> {
        match self {
            Learner::Logistic(m) => m.predict_proba_positive(features),
            Learner::GaussianNb(m) => m.predict_proba_positive(features),
            Learner::Constant(m) => m.predict_proba_positive(features),
        }
    }
}
