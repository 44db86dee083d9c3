//! Train/test splitting and k-fold partitioning.

use log::warn;
use serde::{Deserialize, Serialize};

use crate::data::rng::{seeded, shuffle};
use crate::dataset::Dataset;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub train_fraction: f64,
    pub seed: u64,
    #[serde(default = "default_true")]
    pub stratified: bool,
}

fn default_true() -> bool {
    true
}

impl SplitSpec {
    pub fn new(train_fraction: f64, seed: u64) -> Self {
        SplitSpec {
            train_fraction,
            seed,
            stratified: true,
        }
    }
}

/// Row indices of the two sides of a split, each in ascending order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitIndices {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Splits `label_idx` rows into train/test.
///
/// Stratified mode allocates `round(f * n)` training rows across classes by
/// largest remainder, so each class is within one sample of its exact share.
/// A class with a single sample always goes to train.
pub fn split_indices(label_idx: &[usize], n_classes: usize, spec: &SplitSpec) -> Result<SplitIndices> {
    let n = label_idx.len();
    if !(spec.train_fraction > 0.0 && spec.train_fraction < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "train fraction {} must lie strictly between 0 and 1",
            spec.train_fraction
        )));
    }
    let n_train = (spec.train_fraction * n as f64).round() as usize;
    if n_train == 0 || n_train >= n {
        return Err(Error::InvalidArgument(format!(
            "a {} split of {n} rows leaves one side empty",
            spec.train_fraction
        )));
    }
    let mut rng = seeded(spec.seed);
    let mut train = Vec::with_capacity(n_train);
    let mut test = Vec::with_capacity(n - n_train);

    if spec.stratified {
        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); n_classes];
        for (row, &c) in label_idx.iter().enumerate() {
            groups[c].push(row);
        }
        let quotas = allocate(&groups.iter().map(Vec::len).collect::<Vec<_>>(), spec.train_fraction, n_train);
        for (class, (mut rows, mut quota)) in groups.into_iter().zip(quotas).enumerate() {
            if rows.len() == 1 && quota == 0 {
                warn!("class index {class} has a single sample; assigning it to train");
                quota = 1;
            }
            shuffle(&mut rows, &mut rng);
            train.extend_from_slice(&rows[..quota]);
            test.extend_from_slice(&rows[quota..]);
        }
    } else {
        let mut rows: Vec<usize> = (0..n).collect();
        shuffle(&mut rows, &mut rng);
        train.extend_from_slice(&rows[..n_train]);
        test.extend_from_slice(&rows[n_train..]);
    }
    if test.is_empty() {
        return Err(Error::InvalidArgument("split leaves the test side empty".into()));
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok(SplitIndices { train, test })
}

/// Largest-remainder apportionment of `total` across groups proportional to
/// `sizes`; ties go to the lower group index.
fn allocate(sizes: &[usize], fraction: f64, total: usize) -> Vec<usize> {
    let exact: Vec<f64> = sizes.iter().map(|&s| s as f64 * fraction).collect();
    let mut quota: Vec<usize> = exact.iter().map(|e| e.floor() as usize).collect();
    let assigned: usize = quota.iter().sum();
    let mut order: Vec<usize> = (0..sizes.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = exact[a] - exact[a].floor();
        let rb = exact[b] - exact[b].floor();
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    let mut remaining = total.saturating_sub(assigned);
    for &g in order.iter().cycle().take(order.len() * 2) {
        if remaining == 0 {
            break;
        }
        if quota[g] < sizes[g] {
            quota[g] += 1;
            remaining -= 1;
        }
    }
    quota
}

pub fn train_test_split(ds: &Dataset, spec: &SplitSpec) -> Result<(Dataset, Dataset)> {
    let idx = split_indices(ds.label_indices(), ds.n_classes(), spec)?;
    Ok((ds.select(&idx.train), ds.select(&idx.test)))
}

/// One `(train, validation)` pair of row indices.
pub type Fold = (Vec<usize>, Vec<usize>);

/// `k` folds whose validation sets partition `0..n`, sizes within one of each
/// other. Stratified mode deals each class's shuffled rows round-robin across
/// folds, continuing the rotation from class to class.
pub fn kfold(label_idx: &[usize], n_classes: usize, k: usize, seed: u64, stratified: bool) -> Result<Vec<Fold>> {
    let n = label_idx.len();
    if k < 2 {
        return Err(Error::InvalidArgument(format!("k-fold needs k >= 2, got {k}")));
    }
    if k > n {
        return Err(Error::InvalidArgument(format!("k = {k} exceeds {n} samples")));
    }
    let mut rng = seeded(seed);
    let mut order: Vec<usize> = Vec::with_capacity(n);
    if stratified {
        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); n_classes];
        for (row, &c) in label_idx.iter().enumerate() {
            groups[c].push(row);
        }
        for mut g in groups {
            shuffle(&mut g, &mut rng);
            order.extend(g);
        }
    } else {
        order.extend(0..n);
        shuffle(&mut order, &mut rng);
    }
    let mut valid: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (pos, row) in order.into_iter().enumerate() {
        valid[pos % k].push(row);
    }
    Ok(valid
        .into_iter()
        .map(|mut v| {
            v.sort_unstable();
            let mut in_valid = vec![false; n];
            for &r in &v {
                in_valid[r] = true;
            }
            let train = (0..n).filter(|&r| !in_valid[r]).collect();
            (train, v)
        })
        .collect())
}

/// Dataset-level wrapper around [`kfold`].
pub fn kfold_dataset(ds: &Dataset, k: usize, seed: u64, stratified: bool) -> Result<Vec<Fold>> {
    kfold(ds.label_indices(), ds.n_classes(), k, seed, stratified)
}
