//! CSV ingestion: header row, comma-delimited, numeric feature columns.

use std::io::Read;
use std::path::Path;

use ndarray::Array2;

use crate::dataset::{ClassId, Dataset};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Default)]
pub struct CsvOptions {
    pub label_column: String,
    /// Explicit class order; inferred ascending when `None`.
    pub class_order: Option<Vec<ClassId>>,
    /// Columns to skip entirely (e.g. identifiers or categorical fields).
    pub ignore_columns: Vec<String>,
}

impl CsvOptions {
    pub fn new(label_column: impl Into<String>) -> Self {
        CsvOptions {
            label_column: label_column.into(),
            ..Default::default()
        }
    }
}

pub fn load_csv(path: &Path, opts: &CsvOptions) -> Result<Dataset> {
    let file = std::fs::File::open(path)?;
    read_csv(file, opts)
}

pub fn read_csv<R: Read>(reader: R, opts: &CsvOptions) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let headers: Vec<String> = rdr.headers()?.iter().map(|h| h.trim().to_owned()).collect();
    let label_pos = headers
        .iter()
        .position(|h| *h == opts.label_column)
        .ok_or_else(|| Error::MissingColumn(opts.label_column.clone()))?;
    for ignored in &opts.ignore_columns {
        if !headers.contains(ignored) {
            return Err(Error::MissingColumn(ignored.clone()));
        }
    }
    let feature_cols: Vec<usize> = (0..headers.len())
        .filter(|&c| c != label_pos && !opts.ignore_columns.contains(&headers[c]))
        .collect();

    let mut values = Vec::new();
    let mut labels = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record?;
        // header is line 1
        let line = i + 2;
        let label = record.get(label_pos).ok_or_else(|| Error::Parse {
            line,
            column: opts.label_column.clone(),
            message: "missing field".into(),
        })?;
        labels.push(ClassId::new(label.trim()));
        for &c in &feature_cols {
            let cell = record.get(c).unwrap_or("").trim();
            let v: f64 = cell.parse().map_err(|_| Error::Parse {
                line,
                column: headers[c].clone(),
                message: format!("`{cell}` is not a number"),
            })?;
            if !v.is_finite() {
                return Err(Error::NonFinite { row: i, col: c });
            }
            values.push(v);
        }
    }
    let rows = labels.len();
    let features = Array2::from_shape_vec((rows, feature_cols.len()), values)
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let names = feature_cols.iter().map(|&c| headers[c].clone()).collect();
    Dataset::new(features, labels, opts.class_order.clone(), Some(names))
}

/// Reads feature columns by name, for prediction with a model trained on
/// `expected` columns. The label column, if present, is returned too.
pub fn read_features_csv<R: Read>(
    reader: R,
    expected: &[String],
    label_column: Option<&str>,
) -> Result<(Array2<f64>, Option<Vec<ClassId>>)> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let headers: Vec<String> = rdr.headers()?.iter().map(|h| h.trim().to_owned()).collect();
    let cols = expected
        .iter()
        .map(|name| {
            headers
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::MissingColumn(name.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    let label_pos = label_column.and_then(|l| headers.iter().position(|h| h == l));

    let mut values = Vec::new();
    let mut labels = label_pos.map(|_| Vec::new());
    for (i, record) in rdr.records().enumerate() {
        let record = record?;
        let line = i + 2;
        for (&c, name) in cols.iter().zip(expected) {
            let cell = record.get(c).unwrap_or("").trim();
            let v: f64 = cell.parse().map_err(|_| Error::Parse {
                line,
                column: name.clone(),
                message: format!("`{cell}` is not a number"),
            })?;
            if !v.is_finite() {
                return Err(Error::NonFinite { row: i, col: c });
            }
            values.push(v);
        }
        if let (Some(p), Some(l)) = (label_pos, labels.as_mut()) {
            l.push(ClassId::new(record.get(p).unwrap_or("").trim()));
        }
    }
    let rows = values.len() / cols.len().max(1);
    let features = Array2::from_shape_vec((rows, cols.len()), values)
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    Ok((features, labels))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn declared_order() {
        let text = "x1,grade,x2\n1.0,b,2\n0.5,a,1\n3,b,0\n";
        let opts = CsvOptions {
            label_column: "grade".into(),
            class_order: Some(vec!["b".into(), "a".into()]),
            ignore_columns: vec![],
        };
        let ds = read_csv(text.as_bytes(), &opts).unwrap();
        assert_eq!(ds.n_samples(), 3);
        assert_eq!(ds.n_features(), 2);
        assert_eq!(ds.label_indices(), &[0, 1, 0]);
        assert_eq!(ds.feature_names().unwrap(), ["x1", "x2"]);
        assert_eq!(ds.class_map().classes()[0].as_str(), "b");
    }

    #[test]
    fn nan_cell_reports_coordinates() {
        let text = "a,b,y\n1,2,0\n3,NaN,1\n";
        match read_csv(text.as_bytes(), &CsvOptions::new("y")) {
            Err(Error::NonFinite { row: 1, col: 1 }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn missing_label_column() {
        let text = "a,b\n1,2\n";
        match read_csv(text.as_bytes(), &CsvOptions::new("rings")) {
            Err(e @ Error::MissingColumn(_)) => {
                assert!(e.to_string().contains("rings"));
                assert_eq!(e.exit_code(), 2);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bad_number() {
        let text = "a,y\nfoo,1\n";
        match read_csv(text.as_bytes(), &CsvOptions::new("y")) {
            Err(Error::Parse { line: 2, column, .. }) => assert_eq!(column, "a"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn ignored_columns() {
        let text = "sex,len,rings\nM,0.4,7\nF,0.5,9\n";
        let opts = CsvOptions {
            label_column: "rings".into(),
            class_order: None,
            ignore_columns: vec!["sex".into()],
        };
        let ds = read_csv(text.as_bytes(), &opts).unwrap();
        assert_eq!(ds.n_features(), 1);
    }

    #[test]
    fn features_by_name() {
        let text = "b,a,y\n2,1,0\n4,3,1\n";
        let (x, y) = read_features_csv(text.as_bytes(), &["a".into(), "b".into()], Some("y")).unwrap();
        assert_eq!(x.row(1).to_vec(), vec![3.0, 4.0]);
        assert_eq!(y.unwrap()[1].as_str(), "1");
        assert!(read_features_csv(text.as_bytes(), &["c".into()], None).is_err());
    }
}
