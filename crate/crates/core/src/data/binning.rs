//! Regrouping numeric labels into ordered bins.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::dataset::{ClassId, Dataset};
use crate::error::{Error, Result};

/// Contiguous bins given by their edges: `[e0, e1), [e1, e2), ..., [e_{k-1}, e_k]`.
/// The last bin is closed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBinning", into = "RawBinning")]
pub struct BinningSpec {
    edges: Vec<f64>,
    names: Option<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct RawBinning {
    edges: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    names: Option<Vec<String>>,
}

impl TryFrom<RawBinning> for BinningSpec {
    type Error = Error;

    fn try_from(raw: RawBinning) -> Result<Self> {
        BinningSpec::new(raw.edges, raw.names)
    }
}

impl From<BinningSpec> for RawBinning {
    fn from(b: BinningSpec) -> Self {
        RawBinning {
            edges: b.edges,
            names: b.names,
        }
    }
}

/// Named presets for the abalone ring-count regroupings.
pub const PRESETS: [(&str, &[f64]); 3] = [
    // <10, 10-11, >=12 rings
    ("exp2_3class", &[1.0, 10.0, 12.0, 29.0]),
    // [1,5) [5,8) [8,11) [11,13) [13,15) [15,18) [18,29]
    ("exp2_7class", &[1.0, 5.0, 8.0, 11.0, 13.0, 15.0, 18.0, 29.0]),
    // [1,5) [5,7) [7,8) [8,9) [9,10) [10,12) [12,15) [15,29]
    ("exp3_8class", &[1.0, 5.0, 7.0, 8.0, 9.0, 10.0, 12.0, 15.0, 29.0]),
];

impl BinningSpec {
    pub fn new(edges: Vec<f64>, names: Option<Vec<String>>) -> Result<Self> {
        if edges.len() < 2 {
            return Err(Error::InvalidArgument("binning needs at least two edges".into()));
        }
        if edges.iter().any(|e| !e.is_finite()) || edges.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(
                "bin edges must be finite and strictly increasing".into(),
            ));
        }
        if let Some(n) = &names {
            if n.len() != edges.len() - 1 {
                return Err(Error::InvalidArgument(format!(
                    "{} bin names for {} bins",
                    n.len(),
                    edges.len() - 1
                )));
            }
        }
        Ok(BinningSpec { edges, names })
    }

    pub fn preset(name: &str) -> Result<Self> {
        PRESETS
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, e)| BinningSpec::new(e.to_vec(), None).expect("valid preset"))
            .ok_or_else(|| Error::Config(format!("unknown binning preset `{name}`")))
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn n_bins(&self) -> usize {
        self.edges.len() - 1
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    /// Bin index for `value`, or `None` outside the covered range.
    pub fn bin_of(&self, value: f64) -> Option<usize> {
        let k = self.n_bins();
        if value < self.edges[0] || value > self.edges[k] || value.is_nan() {
            return None;
        }
        // first edge strictly greater than value, minus one
        let upper = self.edges.partition_point(|&e| e <= value);
        Some(upper.saturating_sub(1).min(k - 1))
    }

    /// Class list after regrouping: bin names, or `"0"`, `"1"`, ... without names.
    pub fn classes(&self) -> Vec<ClassId> {
        (0..self.n_bins()).map(|i| self.bin_label(i)).collect()
    }

    /// Maps numeric labels to their bin classes.
    pub fn regroup(&self, labels: &[ClassId]) -> Result<Vec<ClassId>> {
        labels
            .iter()
            .map(|l| {
                let v: f64 = l.as_str().trim().parse().map_err(|_| Error::Uncovered(l.to_string()))?;
                self.bin_of(v)
                    .map(|b| self.bin_label(b))
                    .ok_or_else(|| Error::Uncovered(l.to_string()))
            })
            .collect()
    }

    fn bin_label(&self, i: usize) -> ClassId {
        match &self.names {
            Some(n) => ClassId::new(n[i].clone()),
            None => ClassId::new(i.to_string()),
        }
    }
}

/// Replaces every (numeric) label by its bin; the class list becomes the bins
/// in order.
pub fn apply_binning(ds: &Dataset, spec: &BinningSpec) -> Result<Dataset> {
    ds.relabel(spec.regroup(ds.labels())?, spec.classes())
}
