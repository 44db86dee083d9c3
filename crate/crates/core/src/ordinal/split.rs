//! Choosing the anchor ("best split") threshold.

use std::fmt;
use std::str::FromStr;

use ndarray::Axis;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classifier::ClassifierFactory;
use crate::data::kfold_dataset;
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::metrics::binary_f1;
use crate::ordinal::fit_threshold;

pub const DEFAULT_FOLDS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SplitStrategy {
    /// Threshold that most evenly balances rows above and below.
    EvenSplit,
    /// Threshold whose classifier has the best mean validation F1.
    BestClassifier { folds: usize, seed: u64 },
    First,
    Last,
    Middle,
}

impl SplitStrategy {
    pub fn best_classifier(seed: u64) -> Self {
        SplitStrategy::BestClassifier {
            folds: DEFAULT_FOLDS,
            seed,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            SplitStrategy::EvenSplit => "even_split",
            SplitStrategy::BestClassifier { .. } => "best_classifier",
            SplitStrategy::First => "first",
            SplitStrategy::Last => "last",
            SplitStrategy::Middle => "middle",
        }
    }

    /// Parses a strategy name; `best_classifier` gets default folds and `seed`.
    pub fn parse_with_seed(s: &str, seed: u64) -> Result<Self> {
        match s {
            "even_split" | "even" => Ok(SplitStrategy::EvenSplit),
            "best_classifier" | "best_clf" => Ok(SplitStrategy::best_classifier(seed)),
            "first" => Ok(SplitStrategy::First),
            "last" => Ok(SplitStrategy::Last),
            "middle" => Ok(SplitStrategy::Middle),
            other => Err(Error::InvalidArgument(format!("unknown split strategy `{other}`"))),
        }
    }
}

impl fmt::Display for SplitStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SplitStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SplitStrategy::parse_with_seed(s, 0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FixedSplit {
    First,
    Last,
    Middle,
}

/// First → 0, last → n-2, middle → ⌊(n-2)/2⌋.
pub fn split_fixed(kind: FixedSplit, n_classes: usize) -> Result<usize> {
    if n_classes < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 classes, got {n_classes}")));
    }
    let last = n_classes - 2;
    Ok(match kind {
        FixedSplit::First => 0,
        FixedSplit::Last => last,
        FixedSplit::Middle => last / 2,
    })
}

/// `argmin_i |#{y > c_i} - #{y <= c_i}|`, lowest index on ties.
pub fn split_even(label_idx: &[usize], n_classes: usize) -> Result<usize> {
    if n_classes < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 classes, got {n_classes}")));
    }
    let mut counts = vec![0i64; n_classes];
    for &c in label_idx {
        counts[c] += 1;
    }
    let total: i64 = counts.iter().sum();
    let mut at_most = 0i64;
    let mut best = (i64::MAX, 0);
    for (i, &c) in counts.iter().enumerate().take(n_classes - 1) {
        at_most += c;
        let gap = ((total - at_most) - at_most).abs();
        if gap < best.0 {
            best = (gap, i);
        }
    }
    Ok(best.1)
}

/// Mean validation F1 per threshold over a stratified k-fold partition.
///
/// Each threshold classifier is trained on the full training fold. A fold
/// whose validation side lacks positives or negatives at a threshold scores 0
/// there.
pub fn threshold_f1_scores<F: ClassifierFactory>(
    factory: &F,
    ds: &Dataset,
    folds: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    let n_thresholds = ds.n_classes() - 1;
    let parts = kfold_dataset(ds, folds, seed, true)?;
    let jobs: Vec<(usize, usize)> = (0..parts.len())
        .flat_map(|f| (0..n_thresholds).map(move |t| (f, t)))
        .collect();
    let scores = jobs
        .par_iter()
        .map(|&(f, t)| {
            let (train, valid) = &parts[f];
            let y = ds.label_indices();
            let train_targets: Vec<bool> = train.iter().map(|&r| y[r] > t).collect();
            let valid_targets: Vec<bool> = valid.iter().map(|&r| y[r] > t).collect();
            if valid_targets.iter().all(|&v| v) || !valid_targets.iter().any(|&v| v) {
                return Ok(0.0);
            }
            let x_train = ds.features().select(Axis(0), train);
            let x_valid = ds.features().select(Axis(0), valid);
            let clf = fit_threshold(factory, x_train.view(), &train_targets)?;
            let pred = crate::classifier::BinaryClassifier::predict(&clf, x_valid.view())?;
            Ok(binary_f1(&valid_targets, &pred))
        })
        .collect::<Result<Vec<f64>>>()?;

    let mut mean = vec![0.0; n_thresholds];
    for (&(_, t), s) in jobs.iter().zip(&scores) {
        mean[t] += s;
    }
    for m in &mut mean {
        *m /= parts.len() as f64;
    }
    Ok(mean)
}

/// Threshold with the highest mean validation F1, lowest index on ties.
pub fn split_best_classifier<F: ClassifierFactory>(
    factory: &F,
    ds: &Dataset,
    folds: usize,
    seed: u64,
) -> Result<usize> {
    if ds.n_classes() < 2 {
        return Err(Error::InvalidArgument("need at least 2 classes".into()));
    }
    if ds.n_classes() == 2 {
        return Ok(0);
    }
    let scores = threshold_f1_scores(factory, ds, folds, seed)?;
    Ok(crate::probs::argmax(&scores))
}

/// Resolves `strategy` to a threshold index on `ds`.
pub fn choose_split<F: ClassifierFactory>(
    strategy: &SplitStrategy,
    factory: &F,
    ds: &Dataset,
) -> Result<usize> {
    let n = ds.n_classes();
    match *strategy {
        SplitStrategy::EvenSplit => split_even(ds.label_indices(), n),
        SplitStrategy::BestClassifier { folds, seed } => split_best_classifier(factory, ds, folds, seed),
        SplitStrategy::First => split_fixed(FixedSplit::First, n),
        SplitStrategy::Last => split_fixed(FixedSplit::Last, n),
        SplitStrategy::Middle => split_fixed(FixedSplit::Middle, n),
    }
}
