//! Run configuration for `compare`.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::data::{apply_binning, load_csv, BinningSpec, CsvOptions, PRESETS};
use crate::dataset::{ClassId, Dataset};
use crate::error::{Error, Result};
use crate::learners::LearnerKind;
use crate::ordinal::{FittingMode, InferenceMethod, SplitStrategy, DEFAULT_FOLDS};

pub const SEED_ENV: &str = "ORDISTACK_SEED";

/// A prediction rule: one of the ordinal inference methods, or the
/// one-vs-rest baseline over the same learners.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Difference,
    Tree,
    Votes,
    Ovr,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Difference => "difference",
            Method::Tree => "tree",
            Method::Votes => "votes",
            Method::Ovr => "ovr",
        }
    }

    pub fn inference(&self) -> Option<InferenceMethod> {
        match self {
            Method::Difference => Some(InferenceMethod::Difference),
            Method::Tree => Some(InferenceMethod::Tree),
            Method::Votes => Some(InferenceMethod::Votes),
            Method::Ovr => None,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ovr" | "one_vs_rest" => Ok(Method::Ovr),
            other => other.parse::<InferenceMethod>().map(|m| match m {
                InferenceMethod::Difference => Method::Difference,
                InferenceMethod::Tree => Method::Tree,
                InferenceMethod::Votes => Method::Votes,
            }),
        }
    }
}

/// A preset name, a path to a binning JSON file, or an inline spec.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BinningRef {
    Named(String),
    Inline(BinningSpec),
}

impl BinningRef {
    /// Presets win over file names; relative paths resolve against `base`.
    pub fn resolve(&self, base: &Path) -> Result<BinningSpec> {
        match self {
            BinningRef::Inline(spec) => Ok(spec.clone()),
            BinningRef::Named(name) if PRESETS.iter().any(|(n, _)| n == name) => BinningSpec::preset(name),
            BinningRef::Named(path) => {
                let p = base.join(path);
                if !p.is_file() {
                    return Err(Error::Config(format!(
                        "binning `{path}` is neither a preset nor a readable file"
                    )));
                }
                BinningSpec::from_json_file(&p)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitConfig {
    #[serde(default = "default_train_fraction")]
    pub train_fraction: f64,
    #[serde(default = "default_true")]
    pub stratified: bool,
}

impl Default for SplitConfig {
    fn default() -> Self {
        SplitConfig {
            train_fraction: default_train_fraction(),
            stratified: true,
        }
    }
}

fn default_train_fraction() -> f64 {
    0.7
}

fn default_true() -> bool {
    true
}

fn default_strategies() -> Vec<String> {
    vec!["even_split".into()]
}

fn default_modes() -> Vec<FittingMode> {
    vec![FittingMode::Full]
}

fn default_folds() -> usize {
    DEFAULT_FOLDS
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub data: PathBuf,
    pub label_col: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class_order: Option<Vec<ClassId>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub ignore_columns: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub binning: Option<BinningRef>,
    #[serde(default)]
    pub split: SplitConfig,
    /// Keep only this stratified fraction of the training split.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub train_subsample: Option<f64>,
    pub learners: Vec<LearnerKind>,
    pub methods: Vec<Method>,
    #[serde(default = "default_strategies")]
    pub strategies: Vec<String>,
    #[serde(default = "default_modes")]
    pub modes: Vec<FittingMode>,
    #[serde(default = "default_folds")]
    pub folds: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<PathBuf>,
}

/// Seed from `ORDISTACK_SEED`, or 0 when unset.
pub fn env_seed() -> Result<u64> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("{SEED_ENV}=`{v}` is not an unsigned integer"))),
        Err(_) => Ok(0),
    }
}

impl RunConfig {
    /// Reads a config; relative paths inside it resolve against its directory.
    pub fn load(path: &Path) -> Result<(RunConfig, PathBuf)> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let cfg: RunConfig =
            serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        cfg.validate(&base)?;
        Ok((cfg, base))
    }

    pub fn validate(&self, base: &Path) -> Result<()> {
        if self.learners.is_empty() || self.methods.is_empty() {
            return Err(Error::Config("need at least one learner and one method".into()));
        }
        if self.methods.iter().any(|m| m.inference().is_some()) && (self.strategies.is_empty() || self.modes.is_empty())
        {
            return Err(Error::Config("ordinal methods need at least one strategy and mode".into()));
        }
        let f = self.split.train_fraction;
        if !(f > 0.0 && f < 1.0) {
            return Err(Error::Config(format!("train_fraction {f} must lie in (0, 1)")));
        }
        if let Some(s) = self.train_subsample {
            if !(s > 0.0 && s <= 1.0) {
                return Err(Error::Config(format!("train_subsample {s} must lie in (0, 1]")));
            }
        }
        for s in &self.strategies {
            SplitStrategy::parse_with_seed(s, 0).map_err(|e| Error::Config(e.to_string()))?;
        }
        if self.folds < 2 {
            return Err(Error::Config("folds must be at least 2".into()));
        }
        if !self.data_path(base).is_file() {
            return Err(Error::Config(format!("data file {} not found", self.data_path(base).display())));
        }
        if let Some(b) = &self.binning {
            b.resolve(base)?;
        }
        Ok(())
    }

    pub fn data_path(&self, base: &Path) -> PathBuf {
        base.join(&self.data)
    }

    /// Config seed, else the environment default.
    pub fn resolved_seed(&self) -> Result<u64> {
        match self.seed {
            Some(s) => Ok(s),
            None => env_seed(),
        }
    }

    pub fn split_strategies(&self, seed: u64) -> Result<Vec<SplitStrategy>> {
        self.strategies
            .iter()
            .map(|s| {
                Ok(match SplitStrategy::parse_with_seed(s, seed)? {
                    SplitStrategy::BestClassifier { seed, .. } => SplitStrategy::BestClassifier {
                        folds: self.folds,
                        seed,
                    },
                    other => other,
                })
            })
            .collect()
    }

    /// SHA-256 over the canonical JSON of the config with its seed resolved
    /// and the output location removed.
    pub fn hash(&self, seed: u64) -> Result<String> {
        let mut canonical = self.clone();
        canonical.seed = Some(seed);
        canonical.out_dir = None;
        let bytes = serde_json::to_vec(&canonical)?;
        Ok(hex(&Sha256::digest(bytes)))
    }

    /// Loads the CSV and applies the configured regrouping.
    pub fn load_dataset(&self, base: &Path) -> Result<Dataset> {
        let opts = CsvOptions {
            label_column: self.label_col.clone(),
            class_order: if self.binning.is_some() { None } else { self.class_order.clone() },
            ignore_columns: self.ignore_columns.clone(),
        };
        let ds = load_csv(&self.data_path(base), &opts)?;
        match &self.binning {
            Some(b) => apply_binning(&ds, &b.resolve(base)?),
            None => Ok(ds),
        }
    }
}

pub(crate) fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_defaults() {
        let cfg: RunConfig = serde_json::from_str(
            r#"{"data": "x.csv", "label_col": "y", "learners": ["logistic"], "methods": ["difference", "ovr"]}"#,
        )
        .unwrap();
        assert_eq!(cfg.split.train_fraction, 0.7);
        assert!(cfg.split.stratified);
        assert_eq!(cfg.strategies, vec!["even_split"]);
        assert_eq!(cfg.modes, vec![FittingMode::Full]);
        assert_eq!(cfg.folds, 4);
    }

    #[test]
    fn unknown_field_rejected() {
        let r: std::result::Result<RunConfig, _> = serde_json::from_str(
            r#"{"data": "x.csv", "label_col": "y", "learners": [], "methods": [], "bogus": 1}"#,
        );
        assert!(r.is_err());
    }

    #[test]
    fn hash_ignores_output_location() {
        let mut cfg: RunConfig = serde_json::from_str(
            r#"{"data": "x.csv", "label_col": "y", "learners": ["gnb"], "methods": ["tree"]}"#,
        )
        .unwrap();
        let h = cfg.hash(5).unwrap();
        cfg.out_dir = Some("elsewhere".into());
        assert_eq!(cfg.hash(5).unwrap(), h);
        assert_ne!(cfg.hash(6).unwrap(), h);
        assert_eq!(h.len(), 64);
    }

    #[test]
    fn method_names() {
        for m in ["difference", "tree", "votes", "ovr"] {
            assert_eq!(m.parse::<Method>().unwrap().as_str(), m);
        }
        assert!("bogus".parse::<Method>().is_err());
    }

    #[test]
    fn binning_refs() {
        let dir = tempfile::tempdir().unwrap();
        assert_eq!(
            BinningRef::Named("exp2_3class".into()).resolve(dir.path()).unwrap().n_bins(),
            3
        );
        std::fs::write(dir.path().join("b.json"), r#"{"edges": [0, 1, 2]}"#).unwrap();
        assert_eq!(BinningRef::Named("b.json".into()).resolve(dir.path()).unwrap().n_bins(), 2);
        assert!(matches!(
            BinningRef::Named("nope".into()).resolve(dir.path()),
            Err(Error::Config(_))
        ));
    }
}
