//! Ingestion, label regrouping, and seeded splitting.

mod binning;
mod csv;
pub mod rng;
mod split;

pub use self::binning::{apply_binning, BinningSpec, PRESETS};
pub use self::csv::{load_csv, read_csv, read_features_csv, CsvOptions};
pub use self::split::{
    kfold, kfold_dataset, split_indices, train_test_split, Fold, SplitIndices, SplitSpec,
};
