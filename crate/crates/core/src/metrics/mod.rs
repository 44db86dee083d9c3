//! Evaluation metrics for ordinal predictions.
//!
//! Polychoric correlation is computed on the (true, predicted) label table.
//! A score-based alternative (e.g. expected class under the predicted
//! distribution) is not provided.

pub mod bvn;
mod polychoric;

use log::warn;
use ndarray::{Array2, ArrayView2};
use serde::{Deserialize, Serialize};

pub use polychoric::{polychoric, polychoric_log_likelihood, RHO_BOUND};

use crate::error::{Error, Result};

/// Cross-tabulation of true (rows) against predicted (columns) categories.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContingencyTable {
    counts: Array2<u64>,
}

impl ContingencyTable {
    pub fn new(counts: Array2<u64>) -> Result<Self> {
        if counts.sum() == 0 {
            return Err(Error::InvalidArgument("contingency table is empty".into()));
        }
        Ok(ContingencyTable { counts })
    }

    pub fn from_rows(rows: Vec<Vec<u64>>) -> Result<Self> {
        let r = rows.len();
        let s = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != s) {
            return Err(Error::InvalidArgument("ragged contingency table".into()));
        }
        let flat = rows.into_iter().flatten().collect();
        let counts = Array2::from_shape_vec((r, s), flat).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        ContingencyTable::new(counts)
    }

    pub fn counts(&self) -> &Array2<u64> {
        &self.counts
    }

    pub fn shape(&self) -> (usize, usize) {
        self.counts.dim()
    }

    pub fn get(&self, row: usize, col: usize) -> u64 {
        self.counts[[row, col]]
    }

    pub fn total(&self) -> u64 {
        self.counts.sum()
    }

    pub fn row_sums(&self) -> Vec<u64> {
        self.counts.rows().into_iter().map(|r| r.sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<u64> {
        self.counts.columns().into_iter().map(|c| c.sum()).collect()
    }

    pub fn transpose(&self) -> Self {
        ContingencyTable {
            counts: self.counts.t().to_owned(),
        }
    }

    pub fn reverse_columns(&self) -> Self {
        ContingencyTable {
            counts: self.counts.slice(ndarray::s![.., ..;-1]).to_owned(),
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        self.counts.rows().into_iter().map(|r| r.to_vec()).collect()
    }
}

fn check_labels(truth: &[usize], pred: &[usize], n_classes: usize) -> Result<()> {
    if truth.len() != pred.len() {
        return Err(Error::DimensionMismatch {
            expected: truth.len(),
            got: pred.len(),
        });
    }
    if truth.is_empty() {
        return Err(Error::DegenerateEvaluation("no samples to evaluate".into()));
    }
    if let Some(&bad) = truth.iter().chain(pred).find(|&&c| c >= n_classes) {
        return Err(Error::InvalidArgument(format!(
            "class index {bad} out of range for {n_classes} classes"
        )));
    }
    Ok(())
}

/// `[true × predicted]` counts over `n_classes` categories.
pub fn confusion(truth: &[usize], pred: &[usize], n_classes: usize) -> Result<ContingencyTable> {
    check_labels(truth, pred, n_classes)?;
    let mut counts = Array2::zeros((n_classes, n_classes));
    for (&t, &p) in truth.iter().zip(pred) {
        counts[[t, p]] += 1;
    }
    ContingencyTable::new(counts)
}

/// Recall of each class; `None` for classes absent from `truth`.
pub fn per_class_recall(truth: &[usize], pred: &[usize], n_classes: usize) -> Result<Vec<Option<f64>>> {
    check_labels(truth, pred, n_classes)?;
    let mut hits = vec![0usize; n_classes];
    let mut support = vec![0usize; n_classes];
    for (&t, &p) in truth.iter().zip(pred) {
        support[t] += 1;
        hits[t] += (t == p) as usize;
    }
    Ok(hits
        .iter()
        .zip(&support)
        .map(|(&h, &n)| (n > 0).then(|| h as f64 / n as f64))
        .collect())
}

/// Accuracy weighted by inverse class size: the mean recall over classes
/// present in `truth`.
pub fn weighted_accuracy(truth: &[usize], pred: &[usize], n_classes: usize) -> Result<f64> {
    let recalls: Vec<f64> = per_class_recall(truth, pred, n_classes)?.into_iter().flatten().collect();
    Ok(recalls.iter().sum::<f64>() / recalls.len() as f64)
}

/// F1 of the positive class; 0 when precision + recall is 0.
pub fn binary_f1(truth: &[bool], pred: &[bool]) -> f64 {
    let (mut tp, mut fp, mut fn_) = (0usize, 0usize, 0usize);
    for (&t, &p) in truth.iter().zip(pred) {
        match (t, p) {
            (true, true) => tp += 1,
            (false, true) => fp += 1,
            (true, false) => fn_ += 1,
            (false, false) => {}
        }
    }
    let denom = 2 * tp + fp + fn_;
    if tp == 0 || denom == 0 {
        0.0
    } else {
        2.0 * tp as f64 / denom as f64
    }
}

/// Midranks (1-based) of `scores`, ties sharing their average rank.
fn midranks(scores: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    let mut ranks = vec![0.0; scores.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &o in &order[i..=j] {
            ranks[o] = avg;
        }
        i = j + 1;
    }
    ranks
}

/// Mann–Whitney AUC of `scores` for the positive set; `None` without both
/// positives and negatives.
pub fn binary_auc(positive: &[bool], scores: &[f64]) -> Option<f64> {
    let n_pos = positive.iter().filter(|&&p| p).count();
    let n_neg = positive.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return None;
    }
    let ranks = midranks(scores);
    let rank_sum: f64 = ranks.iter().zip(positive).filter(|(_, &p)| p).map(|(r, _)| r).sum();
    let u = rank_sum - (n_pos * (n_pos + 1)) as f64 / 2.0;
    Some(u / (n_pos * n_neg) as f64)
}

/// Macro-averaged one-vs-rest AUC over classes present in `truth`.
pub fn auc_ovr(truth: &[usize], probs: ArrayView2<'_, f64>) -> Result<f64> {
    if probs.nrows() != truth.len() {
        return Err(Error::DimensionMismatch {
            expected: truth.len(),
            got: probs.nrows(),
        });
    }
    let n_classes = probs.ncols();
    if let Some(&bad) = truth.iter().find(|&&c| c >= n_classes) {
        return Err(Error::InvalidArgument(format!(
            "class index {bad} out of range for {n_classes} classes"
        )));
    }
    let mut aucs = Vec::new();
    for c in 0..n_classes {
        let positive: Vec<bool> = truth.iter().map(|&t| t == c).collect();
        let scores = probs.column(c).to_vec();
        match binary_auc(&positive, &scores) {
            Some(a) => aucs.push(a),
            None if positive.iter().any(|&p| p) => {
                return Err(Error::DegenerateEvaluation("all samples belong to one class".into()));
            }
            None => warn!("auc_ovr: class {c} absent from the evaluation labels; skipped"),
        }
    }
    if aucs.is_empty() {
        return Err(Error::DegenerateEvaluation("no class has both positives and negatives".into()));
    }
    Ok(aucs.iter().sum::<f64>() / aucs.len() as f64)
}

/// AW, PC and AUC-OVR for one set of predictions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub aw: f64,
    /// `None` when the confusion table has fewer than two non-empty rows or
    /// columns (e.g. a constant predictor).
    pub pc: Option<f64>,
    pub auc_ovr: f64,
    pub per_class_recall: Vec<Option<f64>>,
}

impl MetricReport {
    pub fn compute(truth: &[usize], pred: &[usize], probs: ArrayView2<'_, f64>) -> Result<Self> {
        let n = probs.ncols();
        let table = confusion(truth, pred, n)?;
        let pc = match polychoric(&table) {
            Ok(r) => Some(r),
            Err(Error::UndefinedCorrelation(msg)) => {
                warn!("polychoric correlation undefined: {msg}");
                None
            }
            Err(e) => return Err(e),
        };
        Ok(MetricReport {
            aw: weighted_accuracy(truth, pred, n)?,
            pc,
            auc_ovr: auc_ovr(truth, probs)?,
            per_class_recall: per_class_recall(truth, pred, n)?,
        })
    }

    /// Whether AW is below chance (`1 / n_classes`).
    pub fn below_chance(&self, n_classes: usize) -> bool {
        self.aw < 1.0 / n_classes as f64
    }

    /// AW equal to chance up to rounding, as a constant predictor scores.
    pub fn at_chance(&self, n_classes: usize) -> bool {
        (self.aw - 1.0 / n_classes as f64).abs() <= 1e-9
    }
}
