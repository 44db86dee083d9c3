//! Versioned JSON model documents.
//!
//! Floats are written with shortest round-trip formatting and parsed with
//! correct rounding, so a loaded model predicts bit-identically to the one
//! that was saved.

use std::path::Path;

use ndarray::{Array2, ArrayView2};
use serde::{Deserialize, Serialize};

use crate::data::BinningSpec;
use crate::dataset::{ClassId, ClassIndexMap};
use crate::error::{Error, Result};
use crate::learners::Learner;
use crate::ordinal::{InferenceMethod, OneVsRestModel, OrdinalModel};

pub const FORMAT: &str = "ordistack-model";
pub const VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "paradigm", rename_all = "snake_case")]
pub enum PersistedModel {
    Ordinal {
        inference: InferenceMethod,
        model: OrdinalModel<Learner>,
    },
    OneVsRest {
        model: OneVsRestModel<Learner>,
    },
}

impl PersistedModel {
    pub fn classes(&self) -> &ClassIndexMap {
        match self {
            PersistedModel::Ordinal { model, .. } => model.classes(),
            PersistedModel::OneVsRest { model } => model.classes(),
        }
    }

    pub fn n_classes(&self) -> usize {
        self.classes().len()
    }

    pub fn n_features(&self) -> usize {
        match self {
            PersistedModel::Ordinal { model, .. } => model.n_features(),
            PersistedModel::OneVsRest { model } => model.n_features(),
        }
    }

    pub fn feature_names(&self) -> Option<&[String]> {
        match self {
            PersistedModel::Ordinal { model, .. } => model.feature_names(),
            PersistedModel::OneVsRest { model } => model.feature_names(),
        }
    }

    /// Name of the prediction rule: an inference method or `ovr`.
    pub fn method_name(&self) -> &'static str {
        match self {
            PersistedModel::Ordinal { inference, .. } => inference.as_str(),
            PersistedModel::OneVsRest { .. } => "ovr",
        }
    }

    pub fn predict_proba(&self, x: ArrayView2<'_, f64>) -> Result<Array2<f64>> {
        match self {
            PersistedModel::Ordinal { inference, model } => model.predict_proba(x, *inference),
            PersistedModel::OneVsRest { model } => model.predict_proba(x),
        }
    }

    pub fn predict(&self, x: ArrayView2<'_, f64>) -> Result<Vec<usize>> {
        match self {
            PersistedModel::Ordinal { inference, model } => model.predict(x, *inference),
            PersistedModel::OneVsRest { model } => model.predict(x),
        }
    }

    fn check(&self) -> Result<()> {
        match self {
            PersistedModel::Ordinal { model, .. } => model.check(),
            PersistedModel::OneVsRest { model } => model.check(),
        }
    }
}

/// How raw labels were turned into classes at training time.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LabelInfo {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label_column: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub binning: Option<BinningSpec>,
}

impl LabelInfo {
    /// Applies the training-time regrouping (if any) to raw labels.
    pub fn regroup(&self, raw: &[ClassId]) -> Result<Vec<ClassId>> {
        match &self.binning {
            Some(b) => b.regroup(raw),
            None => Ok(raw.to_vec()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelDocument {
    pub format: String,
    pub version: u32,
    #[serde(default)]
    pub labels: LabelInfo,
    pub model: PersistedModel,
}

impl ModelDocument {
    pub fn new(model: PersistedModel, labels: LabelInfo) -> Self {
        ModelDocument {
            format: FORMAT.to_owned(),
            version: VERSION,
            labels,
            model,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ModelDocument = serde_json::from_str(text)?;
        if doc.format != FORMAT {
            return Err(Error::Format(format!("unexpected format tag `{}`", doc.format)));
        }
        if doc.version != VERSION {
            return Err(Error::Format(format!(
                "unsupported version {} (this build reads {VERSION})",
                doc.version
            )));
        }
        doc.model.check()?;
        Ok(doc)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        ModelDocument::from_json(&std::fs::read_to_string(path)?)
    }
}
