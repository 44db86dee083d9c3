//! Ordinal classification by pooling binary classifiers over class thresholds.
//!
//! A model with `n` ordered classes trains `n - 1` binary classifiers, one per
//! threshold `P(Y > c_i)`, and turns their outputs into class probabilities
//! either by differencing adjacent cumulative estimates or by walking a
//! binary tree of conditional estimates rooted at an anchor threshold.

pub mod classifier;
pub mod data;
pub mod dataset;
pub mod error;
pub mod harness;
pub mod learners;
pub mod metrics;
pub mod ordinal;
pub mod persist;
pub mod probs;

pub use classifier::{BinaryClassifier, ClassifierFactory};
pub use dataset::{ClassId, ClassIndexMap, Dataset};
pub use error::{Error, Result};
pub use learners::{Learner, LearnerKind};
pub use metrics::{ContingencyTable, MetricReport};
pub use ordinal::{fit_ordinal, FittingMode, InferenceMethod, OrdinalModel, SplitStrategy};
pub use probs::{ClassProbs, ThresholdProbs};
