//! Experiment harness behind the `ordistack` binary.

mod config;
mod report;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use log::info;
use ndarray::ArrayView2;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

pub use config::{env_seed, BinningRef, Method, RunConfig, SplitConfig, SEED_ENV};
pub use report::{
    delta, delta_text, CellResult, CellStatus, DatasetSummary, DeltaRow, EvalReport, Timings, SCHEMA_VERSION,
};

use crate::data::{load_csv, read_features_csv, split_indices, BinningSpec, CsvOptions, SplitSpec};
use crate::dataset::{ClassId, Dataset};
use crate::error::{Error, Result};
use crate::learners::{Learner, LearnerKind};
use crate::metrics::MetricReport;
use crate::ordinal::{fit_one_vs_rest, fit_ordinal, FittingMode, SplitStrategy};
use crate::persist::{LabelInfo, ModelDocument, PersistedModel};

/// Metrics and status for one set of predictions.
fn score(truth: &[usize], pred: &[usize], probs: ArrayView2<'_, f64>) -> (CellStatus, Option<MetricReport>, Option<String>) {
    match MetricReport::compute(truth, pred, probs) {
        Ok(m) => {
            let status = if m.at_chance(probs.ncols()) {
                CellStatus::AtChance
            } else if m.below_chance(probs.ncols()) {
                CellStatus::FailedToTrain
            } else {
                CellStatus::Ok
            };
            (status, Some(m), None)
        }
        Err(e) => (CellStatus::Error, None, Some(e.to_string())),
    }
}

fn scored_cell(doc: &PersistedModel, test: &Dataset) -> (CellStatus, Option<MetricReport>, Option<String>) {
    let run = || -> Result<_> { Ok((doc.predict(test.features())?, doc.predict_proba(test.features())?)) };
    match run() {
        Ok((pred, probs)) => score(test.label_indices(), &pred, probs.view()),
        Err(e) => (CellStatus::Error, None, Some(e.to_string())),
    }
}

#[derive(Clone, Copy, Debug)]
enum FitJob {
    Ordinal {
        learner: LearnerKind,
        strategy: SplitStrategy,
        mode: FittingMode,
    },
    Ovr {
        learner: LearnerKind,
    },
}

/// Fits one job and scores every method that shares it.
fn run_job(job: FitJob, methods: &[Method], train: &Dataset, test: &Dataset) -> Vec<CellResult> {
    match job {
        FitJob::Ovr { learner } => {
            let mut cell = CellResult {
                method: Method::Ovr.as_str().into(),
                learner: learner.as_str().into(),
                strategy: None,
                mode: None,
                best_split_idx: None,
                fallback_thresholds: vec![],
                status: CellStatus::Error,
                metrics: None,
                error: None,
            };
            match fit_one_vs_rest(&learner, train) {
                Ok(model) => {
                    let doc = PersistedModel::OneVsRest { model };
                    (cell.status, cell.metrics, cell.error) = scored_cell(&doc, test);
                }
                Err(e) => cell.error = Some(e.to_string()),
            }
            vec![cell]
        }
        FitJob::Ordinal { learner, strategy, mode } => {
            let fitted = fit_ordinal(&learner, train, strategy, mode);
            methods
                .iter()
                .filter_map(|m| m.inference().map(|inf| (m, inf)))
                .map(|(m, inference)| {
                    let mut cell = CellResult {
                        method: m.as_str().into(),
                        learner: learner.as_str().into(),
                        strategy: Some(strategy.name().into()),
                        mode: Some(mode.as_str().into()),
                        best_split_idx: None,
                        fallback_thresholds: vec![],
                        status: CellStatus::Error,
                        metrics: None,
                        error: None,
                    };
                    match &fitted {
                        Ok(model) => {
                            cell.best_split_idx = Some(model.best_split_idx());
                            cell.fallback_thresholds =
                                model.summaries().iter().filter(|s| s.fallback).map(|s| s.threshold).collect();
                            let doc = PersistedModel::Ordinal {
                                inference,
                                model: model.clone(),
                            };
                            (cell.status, cell.metrics, cell.error) = scored_cell(&doc, test);
                        }
                        Err(e) => cell.error = Some(e.to_string()),
                    }
                    cell
                })
                .collect()
        }
    }
}

fn thread_pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Config(format!("cannot start {jobs} worker threads: {e}")))
}

/// Runs every method × learner × strategy × mode cell of `cfg` on one shared
/// split. Cell failures are recorded, not raised.
pub fn run_compare(cfg: &RunConfig, base: &Path, jobs: usize) -> Result<EvalReport> {
    let started = Instant::now();
    let seed = cfg.resolved_seed()?;
    let ds = cfg.load_dataset(base)?;
    let split = SplitSpec {
        train_fraction: cfg.split.train_fraction,
        seed,
        stratified: cfg.split.stratified,
    };
    let idx = split_indices(ds.label_indices(), ds.n_classes(), &split)?;
    let mut train = ds.select(&idx.train);
    if let Some(frac) = cfg.train_subsample.filter(|&f| f < 1.0) {
        let sub = SplitSpec {
            train_fraction: frac,
            seed,
            stratified: cfg.split.stratified,
        };
        let keep = split_indices(train.label_indices(), train.n_classes(), &sub)?;
        train = train.select(&keep.train);
    }
    let test = ds.select(&idx.test);
    info!(
        "{} rows: {} train, {} test, {} classes",
        ds.n_samples(),
        train.n_samples(),
        test.n_samples(),
        ds.n_classes()
    );

    // Ordinal methods share one fit per learner/strategy/mode.
    let mut fit_jobs = Vec::new();
    let has_ordinal = cfg.methods.iter().any(|m| m.inference().is_some());
    for &learner in &cfg.learners {
        if has_ordinal {
            for strategy in cfg.split_strategies(seed)? {
                for &mode in &cfg.modes {
                    fit_jobs.push(FitJob::Ordinal { learner, strategy, mode });
                }
            }
        }
        if cfg.methods.contains(&Method::Ovr) {
            fit_jobs.push(FitJob::Ovr { learner });
        }
    }

    let pool = thread_pool(jobs)?;
    let outcomes: Vec<(Vec<CellResult>, f64)> = pool.install(|| {
        fit_jobs
            .par_iter()
            .map(|&job| {
                let t = Instant::now();
                let cells = run_job(job, &cfg.methods, &train, &test);
                (cells, t.elapsed().as_secs_f64())
            })
            .collect()
    });

    // Table order: method, then learner, strategy and mode as configured.
    let mut cells = Vec::new();
    let mut cell_seconds = Vec::new();
    for &method in &cfg.methods {
        for (job_cells, secs) in &outcomes {
            for c in job_cells.iter().filter(|c| c.method == method.as_str()) {
                cells.push(c.clone());
                cell_seconds.push(*secs);
            }
        }
    }

    Ok(EvalReport {
        schema_version: SCHEMA_VERSION,
        name: cfg.name.clone(),
        config_hash: cfg.hash(seed)?,
        seed: Some(seed),
        dataset: DatasetSummary {
            source: cfg.data.display().to_string(),
            n_rows: ds.n_samples(),
            n_features: ds.n_features(),
            classes: ds.class_map().classes().to_vec(),
            train_counts: train.class_counts(),
            test_counts: test.class_counts(),
        },
        cells,
        timings: Timings {
            total_seconds: started.elapsed().as_secs_f64(),
            cell_seconds,
        },
    })
}

/// Output of `compare`: one report per config, and deltas for two configs.
#[derive(Clone, Debug)]
pub struct Comparison {
    pub reports: Vec<EvalReport>,
    pub delta: Option<Vec<DeltaRow>>,
    pub written: Vec<PathBuf>,
}

impl Comparison {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.reports {
            out.push_str(&r.to_text());
            out.push('\n');
        }
        if let Some(d) = &self.delta {
            out.push_str("change (second minus first)\n");
            out.push_str(&delta_text(d));
        }
        out
    }
}

/// Runs one or two configs and writes `report*.json`/`.txt` (and
/// `delta.json`) to `out_dir`, or to the first config's `out_dir`.
pub fn cmd_compare(configs: &[PathBuf], jobs: usize, out_dir: Option<&Path>) -> Result<Comparison> {
    if configs.is_empty() || configs.len() > 2 {
        return Err(Error::InvalidArgument("compare takes one or two --config files".into()));
    }
    let loaded = configs.iter().map(|p| RunConfig::load(p)).collect::<Result<Vec<_>>>()?;
    let reports = loaded
        .iter()
        .map(|(cfg, base)| run_compare(cfg, base, jobs))
        .collect::<Result<Vec<_>>>()?;
    let delta = (reports.len() == 2).then(|| delta(&reports[0], &reports[1]));

    let dir = out_dir
        .map(Path::to_path_buf)
        .or_else(|| loaded[0].0.out_dir.as_ref().map(|d| loaded[0].1.join(d)));
    let mut written = Vec::new();
    if let Some(dir) = dir {
        std::fs::create_dir_all(&dir)?;
        for (i, r) in reports.iter().enumerate() {
            let stem = if reports.len() == 1 { "report".to_owned() } else { format!("report_{}", i + 1) };
            let json = dir.join(format!("{stem}.json"));
            std::fs::write(&json, r.to_json()?)?;
            std::fs::write(dir.join(format!("{stem}.txt")), r.to_text())?;
            written.push(json);
        }
        if let Some(d) = &delta {
            let path = dir.join("delta.json");
            std::fs::write(&path, serde_json::to_string_pretty(d)?)?;
            std::fs::write(dir.join("delta.txt"), delta_text(d))?;
            written.push(path);
        }
    }
    Ok(Comparison {
        reports,
        delta,
        written,
    })
}

/// Options for fitting a single model from a CSV.
#[derive(Clone, Debug)]
pub struct FitOptions {
    pub data: PathBuf,
    pub label_col: String,
    pub method: Method,
    pub learner: LearnerKind,
    pub strategy: String,
    pub mode: FittingMode,
    pub seed: u64,
    pub folds: usize,
    pub binning: Option<BinningSpec>,
    pub class_order: Option<Vec<ClassId>>,
    pub ignore_columns: Vec<String>,
}

/// Fits on the whole CSV; returns the document and a printable summary.
pub fn fit_document(opts: &FitOptions) -> Result<(ModelDocument, String)> {
    let csv = CsvOptions {
        label_column: opts.label_col.clone(),
        class_order: if opts.binning.is_some() { None } else { opts.class_order.clone() },
        ignore_columns: opts.ignore_columns.clone(),
    };
    let mut ds = load_csv(&opts.data, &csv)?;
    if let Some(b) = &opts.binning {
        ds = crate::data::apply_binning(&ds, b)?;
    }
    let labels = LabelInfo {
        label_column: Some(opts.label_col.clone()),
        binning: opts.binning.clone(),
    };
    let mut summary = String::new();
    let model = match opts.method.inference() {
        None => PersistedModel::OneVsRest {
            model: fit_one_vs_rest(&opts.learner, &ds)?,
        },
        Some(inference) => {
            let strategy = match SplitStrategy::parse_with_seed(&opts.strategy, opts.seed)? {
                SplitStrategy::BestClassifier { seed, .. } => SplitStrategy::BestClassifier {
                    folds: opts.folds,
                    seed,
                },
                s => s,
            };
            let model = fit_ordinal(&opts.learner, &ds, strategy, opts.mode)?;
            summary.push_str(&format!("best_split_idx: {}\n", model.best_split_idx()));
            for (s, clf) in model.summaries().iter().zip(model.classifiers()) {
                let conv = match clf.fitted().and_then(Learner::converged) {
                    Some(false) => " (not converged)",
                    _ => "",
                };
                summary.push_str(&format!(
                    "threshold {}: {} rows, {} above{}{}\n",
                    s.threshold,
                    s.rows,
                    s.positives,
                    if s.fallback { ", constant fallback" } else { "" },
                    conv
                ));
            }
            PersistedModel::Ordinal { inference, model }
        }
    };
    summary.insert_str(
        0,
        &format!(
            "{} rows, {} features, {} classes; method {}\n",
            ds.n_samples(),
            ds.n_features(),
            ds.n_classes(),
            model.method_name()
        ),
    );
    Ok((ModelDocument::new(model, labels), summary))
}

pub fn cmd_fit(opts: &FitOptions, out: &Path) -> Result<String> {
    let (doc, summary) = fit_document(opts)?;
    doc.save(out)?;
    Ok(summary)
}

fn feature_names(doc: &ModelDocument) -> Result<&[String]> {
    doc.model
        .feature_names()
        .ok_or_else(|| Error::Format("model has no feature names; cannot match CSV columns".into()))
}

/// Writes `predicted,p_<class>...` rows for every row of the CSV at `data`.
pub fn cmd_predict<W: Write>(model: &Path, data: &Path, out: W) -> Result<usize> {
    let doc = ModelDocument::load(model)?;
    let (x, _) = read_features_csv(std::fs::File::open(data)?, feature_names(&doc)?, None)?;
    let probs = doc.model.predict_proba(x.view())?;
    let pred = doc.model.predict(x.view())?;
    let classes = doc.model.classes();
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["predicted".to_owned()];
    header.extend(classes.classes().iter().map(|c| format!("p_{c}")));
    w.write_record(&header)?;
    for (row, &p) in probs.rows().into_iter().zip(&pred) {
        let mut rec = vec![classes.class_at(p).expect("valid class index").to_string()];
        rec.extend(row.iter().map(|v| v.to_string()));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(pred.len())
}

/// Scores a saved model on a labelled CSV.
pub fn cmd_evaluate(model: &Path, data: &Path) -> Result<EvalReport> {
    let started = Instant::now();
    let bytes = std::fs::read(model)?;
    let doc = ModelDocument::from_json(std::str::from_utf8(&bytes).map_err(|e| Error::Format(e.to_string()))?)?;
    let label_col = doc
        .labels
        .label_column
        .clone()
        .ok_or_else(|| Error::Format("model does not record its label column".into()))?;
    let (x, raw) = read_features_csv(std::fs::File::open(data)?, feature_names(&doc)?, Some(&label_col))?;
    let raw = raw.ok_or_else(|| Error::MissingColumn(label_col.clone()))?;
    let labels = doc.labels.regroup(&raw)?;
    let classes = doc.model.classes();
    let ds = Dataset::new(x, labels, Some(classes.classes().to_vec()), None)?;
    let (status, metrics, error) = scored_cell(&doc.model, &ds);
    let (strategy, mode, split) = match &doc.model {
        PersistedModel::Ordinal { model, .. } => (
            Some(model.split_strategy().name().to_owned()),
            Some(model.fitting_mode().as_str().to_owned()),
            Some(model.best_split_idx()),
        ),
        PersistedModel::OneVsRest { .. } => (None, None, None),
    };
    let learner = learner_name(&doc.model);
    Ok(EvalReport {
        schema_version: SCHEMA_VERSION,
        name: None,
        config_hash: config::hex(&Sha256::digest(&bytes)),
        seed: None,
        dataset: DatasetSummary {
            source: data.display().to_string(),
            n_rows: ds.n_samples(),
            n_features: ds.n_features(),
            classes: classes.classes().to_vec(),
            train_counts: vec![],
            test_counts: ds.class_counts(),
        },
        cells: vec![CellResult {
            method: doc.model.method_name().into(),
            learner,
            strategy,
            mode,
            best_split_idx: split,
            fallback_thresholds: vec![],
            status,
            metrics,
            error,
        }],
        timings: Timings {
            total_seconds: started.elapsed().as_secs_f64(),
            cell_seconds: vec![],
        },
    })
}

fn learner_name(model: &PersistedModel) -> String {
    let first = match model {
        PersistedModel::Ordinal { model, .. } => model.classifiers().iter().find_map(|c| c.fitted()),
        PersistedModel::OneVsRest { model } => model.classifiers().iter().find_map(|c| c.fitted()),
    };
    match first {
        Some(Learner::Logistic(_)) => "logistic".into(),
        Some(Learner::GaussianNb(_)) => "gnb".into(),
        Some(Learner::Constant(_)) => "constant".into(),
        None => "unknown".into(),
    }
}
