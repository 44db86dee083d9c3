//! Evaluation reports: JSON for machines, aligned text for people.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::dataset::ClassId;
use crate::error::Result;
use crate::metrics::MetricReport;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellStatus {
    Ok,
    /// AW below chance (`1 / n_classes`).
    FailedToTrain,
    /// AW equal to chance: no better than a constant prediction.
    AtChance,
    Error,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub method: String,
    pub learner: String,
    pub strategy: Option<String>,
    pub mode: Option<String>,
    pub best_split_idx: Option<usize>,
    /// Thresholds whose training subset had a single class.
    #[serde(default)]
    pub fallback_thresholds: Vec<usize>,
    pub status: CellStatus,
    pub metrics: Option<MetricReport>,
    pub error: Option<String>,
}

impl CellResult {
    pub fn key(&self) -> (&str, &str, Option<&str>, Option<&str>) {
        (&self.method, &self.learner, self.strategy.as_deref(), self.mode.as_deref())
    }

    fn label(&self) -> String {
        let mut s = format!("{}/{}", self.method, self.learner);
        if let Some(st) = &self.strategy {
            let _ = write!(s, "/{st}");
        }
        if let Some(m) = &self.mode {
            let _ = write!(s, "/{m}");
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub source: String,
    pub n_rows: usize,
    pub n_features: usize,
    pub classes: Vec<ClassId>,
    pub train_counts: Vec<usize>,
    pub test_counts: Vec<usize>,
}

/// Wall-clock seconds from a monotonic clock; never part of determinism checks.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub total_seconds: f64,
    pub cell_seconds: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub schema_version: u32,
    #[serde(default)]
    pub name: Option<String>,
    /// SHA-256 of the run config (compare) or of the model document (evaluate).
    pub config_hash: String,
    pub seed: Option<u64>,
    pub dataset: DatasetSummary,
    pub cells: Vec<CellResult>,
    pub timings: Timings,
}

impl EvalReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// JSON with the `timings` field removed, for byte comparisons.
    pub fn deterministic_json(&self) -> Result<String> {
        let mut v = serde_json::to_value(self)?;
        if let Some(obj) = v.as_object_mut() {
            obj.remove("timings");
        }
        Ok(serde_json::to_string_pretty(&v)?)
    }

    /// Rows of method/learner/strategy/mode against AW, PC and AUC-OVR.
    /// Cells that failed to train carry an asterisk; errors are listed below.
    pub fn to_text(&self) -> String {
        let header = ["cell", "split", "AW", "PC", "AUC-OVR"];
        let mut rows: Vec<[String; 5]> = Vec::new();
        let mut notes = Vec::new();
        for c in &self.cells {
            let split = c.best_split_idx.map_or("-".into(), |s| s.to_string());
            let mark = match c.status {
                CellStatus::FailedToTrain => "*",
                CellStatus::AtChance => "~",
                _ => "",
            };
            let cols = match &c.metrics {
                Some(m) => [
                    format!("{:.3}{mark}", m.aw),
                    m.pc.map_or("n/a".into(), |p| format!("{p:.3}{mark}")),
                    format!("{:.3}{mark}", m.auc_ovr),
                ],
                None => ["error*".into(), "error*".into(), "error*".into()],
            };
            if let Some(e) = &c.error {
                notes.push(format!("  {}: {e}", c.label()));
            }
            let [aw, pc, auc] = cols;
            rows.push([c.label(), split, aw, pc, auc]);
        }
        let mut out = String::new();
        if let Some(n) = &self.name {
            let _ = writeln!(out, "{n}");
        }
        out.push_str(&aligned(&header, &rows));
        if self.cells.iter().any(|c| c.status == CellStatus::FailedToTrain) {
            out.push_str("* failed to train (AW below chance)\n");
        }
        if self.cells.iter().any(|c| c.status == CellStatus::AtChance) {
            out.push_str("~ at chance (AW equals 1 / number of classes)\n");
        }
        if !notes.is_empty() {
            out.push_str("errors:\n");
            for n in notes {
                out.push_str(&n);
                out.push('\n');
            }
        }
        out
    }
}

/// Signed change `b - a` for a row present in both reports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaRow {
    pub method: String,
    pub learner: String,
    pub strategy: Option<String>,
    pub mode: Option<String>,
    pub d_aw: Option<f64>,
    pub d_pc: Option<f64>,
    pub d_auc_ovr: Option<f64>,
    /// Why a delta is missing, if it is.
    pub note: Option<String>,
}

pub fn delta(a: &EvalReport, b: &EvalReport) -> Vec<DeltaRow> {
    let mut rows = Vec::new();
    for ca in &a.cells {
        let cb = b.cells.iter().find(|c| c.key() == ca.key());
        let mut row = DeltaRow {
            method: ca.method.clone(),
            learner: ca.learner.clone(),
            strategy: ca.strategy.clone(),
            mode: ca.mode.clone(),
            d_aw: None,
            d_pc: None,
            d_auc_ovr: None,
            note: None,
        };
        match cb {
            None => row.note = Some("absent from second report".into()),
            Some(cb) => match (&ca.metrics, &cb.metrics) {
                (Some(ma), Some(mb)) => {
                    row.d_aw = Some(mb.aw - ma.aw);
                    row.d_pc = ma.pc.zip(mb.pc).map(|(x, y)| y - x);
                    row.d_auc_ovr = Some(mb.auc_ovr - ma.auc_ovr);
                    if ca.status != CellStatus::Ok || cb.status != CellStatus::Ok {
                        row.note = Some("failed to train or at chance in at least one report".into());
                    } else if row.d_pc.is_none() {
                        row.note = Some("PC undefined in at least one report".into());
                    }
                }
                _ => row.note = Some("error in at least one report".into()),
            },
        }
        rows.push(row);
    }
    for cb in &b.cells {
        if !a.cells.iter().any(|c| c.key() == cb.key()) {
            rows.push(DeltaRow {
                method: cb.method.clone(),
                learner: cb.learner.clone(),
                strategy: cb.strategy.clone(),
                mode: cb.mode.clone(),
                d_aw: None,
                d_pc: None,
                d_auc_ovr: None,
                note: Some("absent from first report".into()),
            });
        }
    }
    rows
}

pub fn delta_text(rows: &[DeltaRow]) -> String {
    let fmt = |d: Option<f64>, marked: bool| match d {
        Some(v) => format!("{v:+.3}{}", if marked { "*" } else { "" }),
        None => "n/a*".into(),
    };
    let body: Vec<[String; 4]> = rows
        .iter()
        .map(|r| {
            let marked = r.note.is_some();
            let mut label = format!("{}/{}", r.method, r.learner);
            for part in [&r.strategy, &r.mode].into_iter().flatten() {
                label.push('/');
                label.push_str(part);
            }
            [label, fmt(r.d_aw, marked), fmt(r.d_pc, marked), fmt(r.d_auc_ovr, marked)]
        })
        .collect();
    let mut out = aligned(&["cell", "dAW", "dPC", "dAUC-OVR"], &body);
    if rows.iter().any(|r| r.note.is_some()) {
        out.push_str("* see notes in the JSON delta\n");
    }
    out
}

fn aligned<const N: usize>(header: &[&str; N], rows: &[[String; N]]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, cell) in widths.iter_mut().zip(r) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let line = |cells: Vec<&str>, out: &mut String| {
        let parts: Vec<String> = cells
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(i, (c, &w))| if i == 0 { format!("{c:<w$}") } else { format!("{c:>w$}") })
            .collect();
        out.push_str(parts.join("  ").trim_end());
        out.push('\n');
    };
    line(header.to_vec(), &mut out);
    let total: usize = widths.iter().sum::<usize>() + 2 * (N - 1);
    out.push_str(&"-".repeat(total));
    out.push('\n');
    for r in rows {
        line(r.iter().map(String::as_str).collect(), &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cell(method: &str, aw: f64, status: CellStatus) -> CellResult {
        CellResult {
            method: method.into(),
            learner: "gnb".into(),
            strategy: Some("first".into()),
            mode: Some("full".into()),
            best_split_idx: Some(0),
            fallback_thresholds: vec![],
            status,
            metrics: Some(MetricReport {
                aw,
                pc: Some(0.5),
                auc_ovr: 0.7,
                per_class_recall: vec![],
            }),
            error: None,
        }
    }

    fn report(cells: Vec<CellResult>) -> EvalReport {
        EvalReport {
            schema_version: SCHEMA_VERSION,
            name: None,
            config_hash: "x".into(),
            seed: Some(1),
            dataset: DatasetSummary {
                source: "d.csv".into(),
                n_rows: 3,
                n_features: 1,
                classes: vec![],
                train_counts: vec![],
                test_counts: vec![],
            },
            cells,
            timings: Timings {
                total_seconds: 1.5,
                cell_seconds: vec![0.1],
            },
        }
    }

    #[test]
    fn text_marks_failures() {
        let r = report(vec![cell("tree", 0.8, CellStatus::Ok), cell("votes", 0.2, CellStatus::FailedToTrain)]);
        let t = r.to_text();
        assert!(t.contains("0.800 "));
        assert!(t.contains("0.200*"));
        assert!(t.contains("failed to train"));
        assert!(!r.deterministic_json().unwrap().contains("timings"));
        assert!(r.to_json().unwrap().contains("timings"));
    }

    #[test]
    fn delta_is_b_minus_a() {
        let a = report(vec![cell("tree", 0.6, CellStatus::Ok)]);
        let b = report(vec![cell("tree", 0.5, CellStatus::Ok), cell("ovr", 0.5, CellStatus::Ok)]);
        let d = delta(&a, &b);
        assert_eq!(d.len(), 2);
        assert!((d[0].d_aw.unwrap() + 0.1).abs() < 1e-12);
        assert_eq!(d[0].d_pc, Some(0.0));
        assert!(d[1].note.is_some());
        assert!(delta_text(&d).contains("-0.100"));
    }
}
