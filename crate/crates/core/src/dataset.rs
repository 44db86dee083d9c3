//! Datasets, ordered class labels, and threshold target encoding.
//!
//! Class identifiers are opaque tokens. Their order is whatever the
//! [`ClassIndexMap`] says it is; every computation downstream works on the
//! contiguous indices `0..n_classes` and only maps back to tokens for output.

use std::collections::HashMap;
use std::fmt;

use ndarray::{Array2, ArrayView1, ArrayView2, Axis};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An ordinal class token, e.g. `"3"` or `"very good"`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClassId(String);

impl ClassId {
    pub fn new(s: impl Into<String>) -> Self {
        ClassId(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for ClassId {
    fn from(s: &str) -> Self {
        ClassId(s.to_owned())
    }
}

impl From<String> for ClassId {
    fn from(s: String) -> Self {
        ClassId(s)
    }
}

impl From<i64> for ClassId {
    fn from(v: i64) -> Self {
        ClassId(v.to_string())
    }
}

/// Bijection between ordered class tokens and contiguous indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<ClassId>", into = "Vec<ClassId>")]
pub struct ClassIndexMap {
    classes: Vec<ClassId>,
    lookup: HashMap<ClassId, usize>,
}

impl ClassIndexMap {
    /// Builds a map whose order is exactly the order of `classes`.
    pub fn new(classes: Vec<ClassId>) -> Result<Self> {
        let mut lookup = HashMap::with_capacity(classes.len());
        for (i, c) in classes.iter().enumerate() {
            if lookup.insert(c.clone(), i).is_some() {
                return Err(Error::DuplicateClass(c.to_string()));
            }
        }
        Ok(ClassIndexMap { classes, lookup })
    }

    /// Ascending unique labels. Tokens that all parse as numbers are ordered
    /// numerically, otherwise lexicographically.
    pub fn infer<'a>(labels: impl IntoIterator<Item = &'a ClassId>) -> Self {
        let mut uniq: Vec<ClassId> = labels.into_iter().cloned().collect();
        uniq.sort();
        uniq.dedup();
        let numeric: Option<Vec<f64>> = uniq
            .iter()
            .map(|c| c.as_str().trim().parse::<f64>().ok().filter(|v| v.is_finite()))
            .collect();
        if let Some(values) = numeric {
            let mut keyed: Vec<(f64, ClassId)> = values.into_iter().zip(uniq).collect();
            keyed.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
            uniq = keyed.into_iter().map(|(_, c)| c).collect();
        }
        // dedup above guarantees distinct tokens
        ClassIndexMap::new(uniq).expect("distinct classes")
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[ClassId] {
        &self.classes
    }

    pub fn index_of(&self, class: &ClassId) -> Result<usize> {
        self.lookup
            .get(class)
            .copied()
            .ok_or_else(|| Error::UnknownClass(class.to_string()))
    }

    pub fn class_at(&self, index: usize) -> Option<&ClassId> {
        self.classes.get(index)
    }
}

impl TryFrom<Vec<ClassId>> for ClassIndexMap {
    type Error = Error;

    fn try_from(v: Vec<ClassId>) -> Result<Self> {
        ClassIndexMap::new(v)
    }
}

impl From<ClassIndexMap> for Vec<ClassId> {
    fn from(m: ClassIndexMap) -> Self {
        m.classes
    }
}

/// Feature matrix plus ordinal labels.
#[derive(Clone, Debug)]
pub struct Dataset {
    features: Array2<f64>,
    labels: Vec<ClassId>,
    label_idx: Vec<usize>,
    classes: ClassIndexMap,
    feature_names: Option<Vec<String>>,
}

impl Dataset {
    /// Checks the structural invariants: shapes agree, at least one row and
    /// column, finite features, every label known to the class list. The class
    /// list is inferred from the labels when not given.
    pub fn new(
        features: Array2<f64>,
        labels: Vec<ClassId>,
        class_list: Option<Vec<ClassId>>,
        feature_names: Option<Vec<String>>,
    ) -> Result<Self> {
        let (rows, cols) = features.dim();
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidArgument(format!(
                "dataset needs at least one row and one feature column, got {rows}x{cols}"
            )));
        }
        if labels.len() != rows {
            return Err(Error::InvalidArgument(format!(
                "{} labels for {rows} feature rows",
                labels.len()
            )));
        }
        if let Some(names) = &feature_names {
            if names.len() != cols {
                return Err(Error::InvalidArgument(format!(
                    "{} feature names for {cols} columns",
                    names.len()
                )));
            }
        }
        check_finite(features.view())?;
        let classes = match class_list {
            Some(list) => ClassIndexMap::new(list)?,
            None => ClassIndexMap::infer(&labels),
        };
        let label_idx = labels
            .iter()
            .map(|l| classes.index_of(l))
            .collect::<Result<Vec<_>>>()?;
        Ok(Dataset {
            features,
            labels,
            label_idx,
            classes,
            feature_names,
        })
    }

    /// Convenience constructor from class indices into an existing map.
    pub fn from_indices(
        features: Array2<f64>,
        label_idx: &[usize],
        classes: ClassIndexMap,
    ) -> Result<Self> {
        let labels = label_idx
            .iter()
            .map(|&i| {
                classes
                    .class_at(i)
                    .cloned()
                    .ok_or_else(|| Error::InvalidArgument(format!("class index {i} out of range")))
            })
            .collect::<Result<Vec<_>>>()?;
        Dataset::new(features, labels, Some(classes.classes().to_vec()), None)
    }

    pub fn features(&self) -> ArrayView2<'_, f64> {
        self.features.view()
    }

    pub fn row(&self, i: usize) -> ArrayView1<'_, f64> {
        self.features.row(i)
    }

    pub fn labels(&self) -> &[ClassId] {
        &self.labels
    }

    /// Labels as contiguous class indices.
    pub fn label_indices(&self) -> &[usize] {
        &self.label_idx
    }

    pub fn class_map(&self) -> &ClassIndexMap {
        &self.classes
    }

    pub fn n_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn n_samples(&self) -> usize {
        self.features.nrows()
    }

    pub fn n_features(&self) -> usize {
        self.features.ncols()
    }

    pub fn feature_names(&self) -> Option<&[String]> {
        self.feature_names.as_deref()
    }

    /// Per-class sample counts, aligned with the class map.
    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.n_classes()];
        for &i in &self.label_idx {
            counts[i] += 1;
        }
        counts
    }

    /// Rows `rows` (in that order), keeping the class list.
    pub fn select(&self, rows: &[usize]) -> Dataset {
        Dataset {
            features: self.features.select(Axis(0), rows),
            labels: rows.iter().map(|&r| self.labels[r].clone()).collect(),
            label_idx: rows.iter().map(|&r| self.label_idx[r]).collect(),
            classes: self.classes.clone(),
            feature_names: self.feature_names.clone(),
        }
    }

    /// Replaces labels and class list, keeping features.
    pub fn relabel(&self, labels: Vec<ClassId>, class_list: Vec<ClassId>) -> Result<Dataset> {
        Dataset::new(
            self.features.clone(),
            labels,
            Some(class_list),
            self.feature_names.clone(),
        )
    }
}

fn check_finite(features: ArrayView2<'_, f64>) -> Result<()> {
    for ((row, col), v) in features.indexed_iter() {
        if !v.is_finite() {
            return Err(Error::NonFinite { row, col });
        }
    }
    Ok(())
}

/// Fitting precondition: structural invariants hold and every declared class
/// has at least one sample.
pub fn validate_dataset(ds: &Dataset) -> Result<()> {
    check_finite(ds.features())?;
    let missing: Vec<String> = ds
        .class_counts()
        .iter()
        .enumerate()
        .filter(|(_, &n)| n == 0)
        .map(|(i, _)| ds.classes.classes[i].to_string())
        .collect();
    if missing.is_empty() {
        Ok(())
    } else {
        Err(Error::MissingClasses(missing))
    }
}

/// `true` where the label sits strictly above `threshold_class`.
pub fn encode_binary_above(
    labels: &[ClassId],
    threshold_class: &ClassId,
    map: &ClassIndexMap,
) -> Result<Vec<bool>> {
    let t = map.index_of(threshold_class)?;
    if t + 1 >= map.len() {
        return Err(Error::InvalidArgument(format!(
            "`{threshold_class}` is the top class and has no threshold above it"
        )));
    }
    labels
        .iter()
        .map(|l| map.index_of(l).map(|i| i > t))
        .collect()
}

/// Index-space form of [`encode_binary_above`].
pub fn binary_above(label_idx: &[usize], threshold: usize) -> Vec<bool> {
    label_idx.iter().map(|&i| i > threshold).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn ids(v: &[i64]) -> Vec<ClassId> {
        v.iter().map(|&x| ClassId::from(x)).collect()
    }

    #[test]
    fn encode_examples() {
        let map = ClassIndexMap::new(ids(&[1, 2, 3])).unwrap();
        let one = ClassId::from(1);
        let two = ClassId::from(2);
        assert_eq!(
            encode_binary_above(&ids(&[1, 2, 3]), &one, &map).unwrap(),
            vec![false, true, true]
        );
        assert_eq!(
            encode_binary_above(&ids(&[3, 3, 3]), &one, &map).unwrap(),
            vec![true, true, true]
        );
        assert_eq!(
            encode_binary_above(&ids(&[1, 1, 2, 2, 3]), &two, &map).unwrap(),
            vec![false, false, false, false, true]
        );
    }

    #[test]
    fn encode_rejects_unknown_and_top() {
        let map = ClassIndexMap::new(ids(&[1, 2, 3])).unwrap();
        let err = encode_binary_above(&ids(&[1, 7]), &ClassId::from(1), &map).unwrap_err();
        assert!(err.to_string().contains('7'));
        assert!(encode_binary_above(&ids(&[1]), &ClassId::from(3), &map).is_err());
    }

    #[test]
    fn threshold_sum_recovers_index() {
        let labels = [0usize, 3, 1, 2, 2, 0, 3];
        let n = 4;
        let mut sums = vec![0usize; labels.len()];
        for t in 0..n - 1 {
            for (s, b) in sums.iter_mut().zip(binary_above(&labels, t)) {
                *s += b as usize;
            }
        }
        assert_eq!(sums, labels.to_vec());
    }

    #[test]
    fn infer_orders_numerically() {
        let map = ClassIndexMap::infer(&ids(&[10, 9, 2, 10]));
        let got: Vec<&str> = map.classes().iter().map(|c| c.as_str()).collect();
        assert_eq!(got, ["2", "9", "10"]);
        let map = ClassIndexMap::infer(&[ClassId::from("b"), ClassId::from("a")]);
        assert_eq!(map.classes()[0].as_str(), "a");
    }

    #[test]
    fn validate_examples() {
        let x = array![[0.0], [1.0], [2.0]];
        let ok = Dataset::new(x.clone(), ids(&[1, 2, 3]), Some(ids(&[1, 2, 3])), None).unwrap();
        validate_dataset(&ok).unwrap();

        let missing = Dataset::new(x, ids(&[1, 3, 3]), Some(ids(&[1, 2, 3])), None).unwrap();
        match validate_dataset(&missing) {
            Err(Error::MissingClasses(m)) => assert_eq!(m, vec!["2".to_string()]),
            other => panic!("expected missing-class error, got {other:?}"),
        }

        let nan = array![[0.0, 1.0, f64::NAN], [0.0, 1.0, 2.0]];
        match Dataset::new(nan, ids(&[1, 2]), None, None) {
            Err(Error::NonFinite { row: 0, col: 2 }) => {}
            other => panic!("expected non-finite error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_label_rejected() {
        let x = array![[0.0], [1.0]];
        assert!(matches!(
            Dataset::new(x, ids(&[1, 5]), Some(ids(&[1, 2])), None),
            Err(Error::UnknownClass(_))
        ));
    }

    #[test]
    fn map_serde_roundtrip() {
        let map = ClassIndexMap::new(ids(&[3, 1, 2])).unwrap();
        let json = serde_json::to_string(&map).unwrap();
        assert_eq!(json, r#"["3","1","2"]"#);
        let back: ClassIndexMap = serde_json::from_str(&json).unwrap();
        assert_eq!(back, map);
        assert!(serde_json::from_str::<ClassIndexMap>(r#"["a","a"]"#).is_err());
    }

    proptest::proptest! {
        #[test]
        fn encoding_is_monotone(a in 0usize..6, b in 0usize..6, t in 0usize..5) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let enc = binary_above(&[lo, hi], t);
            proptest::prop_assert!(enc[0] <= enc[1]);
        }
    }
}
