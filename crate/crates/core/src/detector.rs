//! The anomaly detector: model fitting, thresholding and prediction.
//!
//! A model is fitted on a training series in one pass: discretize, slice
//! into epochs of `n_obs_per_period` observations, build one graph per
//! epoch, fold them into the global graph, and record each epoch's
//! dissimilarity to the global graph — the *baseline* distribution of
//! normal behaviour. Prediction discretizes a test series with the fitted
//! discretizer and flags every epoch whose dissimilarity exceeds the
//! `(100 - alpha)`-th percentile of the baseline (strictly — ties stay
//! normal).

use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::data::{DataError, Discretizer, TimeSeries};
use crate::metrics::{self, MetricError, MetricId};
use crate::teg::{self, Graph, TegError};

/// The one model-file layout this build writes and reads.
pub const MODEL_FORMAT_VERSION: u32 = 1;

/// Errors raised while fitting, predicting, scoring or persisting.
#[derive(Debug, thiserror::Error)]
pub enum DetectorError {
    #[error("invalid detector parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Teg(#[from] TegError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("threshold needs a non-empty baseline")]
    EmptyBaseline,
    #[error("ground truth has {ground} entries but prediction has {predicted}")]
    LengthMismatch { ground: usize, predicted: usize },
    #[error("accuracy is undefined on an empty confusion matrix")]
    EmptyMatrix,
    #[error("cannot access model file {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("model file {path}: format version {found} not supported (expected {expected})")]
    VersionMismatch {
        path: String,
        found: String,
        expected: u32,
    },
    #[error("model file {path} is corrupted: {reason}")]
    Corrupted { path: String, reason: String },
}

/// Detector configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectorParams {
    /// Which dissimilarity metric drives the detector.
    pub metric: MetricId,
    /// Number of equal-width discretization bins.
    pub n_bins: u32,
    /// Observations per epoch (one graph is built per epoch).
    pub n_obs_per_period: usize,
    /// Percentile margin: epochs above the `(100 - alpha)`-th percentile of
    /// the baseline are flagged. Must lie strictly between 0 and 100.
    pub alpha: u8,
}

impl DetectorParams {
    pub const DEFAULT_N_BINS: u32 = 30;
    pub const DEFAULT_N_OBS_PER_PERIOD: usize = 336;
    pub const DEFAULT_ALPHA: u8 = 5;

    /// Parameters for `metric` with the default binning (30), epoch length
    /// (336 observations) and percentile margin (5).
    pub fn new(metric: MetricId) -> Self {
        Self {
            metric,
            n_bins: Self::DEFAULT_N_BINS,
            n_obs_per_period: Self::DEFAULT_N_OBS_PER_PERIOD,
            alpha: Self::DEFAULT_ALPHA,
        }
    }

    pub fn validate(&self) -> Result<(), DetectorError> {
        if self.n_bins == 0 {
            return Err(DetectorError::InvalidParams(
                "n_bins must be at least 1".into(),
            ));
        }
        if self.n_obs_per_period == 0 {
            return Err(DetectorError::InvalidParams(
                "n_obs_per_period must be at least 1".into(),
            ));
        }
        if !(1..=99).contains(&self.alpha) {
            return Err(DetectorError::InvalidParams(format!(
                "alpha must lie strictly between 0 and 100, got {}",
                self.alpha
            )));
        }
        Ok(())
    }
}

/// A fitted detector: parameters, discretizer, global graph and baseline
/// dissimilarities, plus the (informational) time the fit took.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    params: DetectorParams,
    discretizer: Discretizer,
    global_graph: Graph,
    baseline: Vec<f64>,
    build_time_seconds: f64,
}

impl Model {
    pub fn params(&self) -> &DetectorParams {
        &self.params
    }

    pub fn discretizer(&self) -> &Discretizer {
        &self.discretizer
    }

    /// The wildcard-free sum of all training epoch graphs.
    pub fn global_graph(&self) -> &Graph {
        &self.global_graph
    }

    /// Dissimilarity of each training epoch to the global graph.
    pub fn baseline(&self) -> &[f64] {
        &self.baseline
    }

    /// Seconds the fit took. Informational only — never part of
    /// correctness, zeroed freely by reporting tools.
    pub fn build_time_seconds(&self) -> f64 {
        self.build_time_seconds
    }

    /// Overwrites the stored build time. Tools zero it to keep saved
    /// models and result files byte-reproducible across runs.
    pub fn set_build_time_seconds(&mut self, seconds: f64) {
        self.build_time_seconds = seconds;
    }
}

/// Prediction result for one test series.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectionOutcome {
    /// One flag per test epoch; `true` means anomalous.
    pub outliers: Vec<bool>,
    /// Number of test epochs evaluated (trailing partial epochs dropped).
    pub n_periods: usize,
    /// Copied from the model; seconds.
    pub time_to_build: f64,
    /// Seconds the prediction took.
    pub time_to_predict: f64,
}

impl DetectionOutcome {
    /// Number of epochs flagged anomalous.
    pub fn n_outliers(&self) -> usize {
        self.outliers.iter().filter(|&&o| o).count()
    }
}

/// Fits a model on a training series and returns it with the elapsed build
/// time in seconds (also stored in the model).
pub fn build_model(
    train: &TimeSeries,
    params: &DetectorParams,
) -> Result<(Model, f64), DetectorError> {
    params.validate()?;
    let start = Instant::now();

    let discretizer = Discretizer::fit(train, params.n_bins)?;
    let levels = discretizer.discretize(train);
    let graphs = teg::discover_tegs(&levels, params.n_obs_per_period)?;
    let global_graph = teg::global_graph(&graphs)?;
    let mut baseline = Vec::with_capacity(graphs.len());
    for g in &graphs {
        baseline.push(aligned_dissimilarity(g, &global_graph, params.metric)?);
    }

    let build_time_seconds = start.elapsed().as_secs_f64();
    let model = Model {
        params: params.clone(),
        discretizer,
        global_graph,
        baseline,
        build_time_seconds,
    };
    Ok((model, build_time_seconds))
}

/// The `q`-th percentile of the baseline with `q = 100 - alpha`, using
/// linear interpolation between closest ranks (`rank = q/100 * (k - 1)`
/// over the sorted values).
pub fn threshold(baseline: &[f64], alpha: u8) -> Result<f64, DetectorError> {
    if !(1..=99).contains(&alpha) {
        return Err(DetectorError::InvalidParams(format!(
            "alpha must lie strictly between 0 and 100, got {alpha}"
        )));
    }
    if baseline.is_empty() {
        return Err(DetectorError::EmptyBaseline);
    }
    let mut sorted = baseline.to_vec();
    sorted.sort_by(f64::total_cmp);
    let q = f64::from(100 - alpha) / 100.0;
    let rank = q * (sorted.len() - 1) as f64;
    let lo = rank.floor() as usize;
    let hi = rank.ceil() as usize;
    let frac = rank - lo as f64;
    Ok(sorted[lo] + frac * (sorted[hi] - sorted[lo]))
}

/// Flags every test epoch whose dissimilarity to the global graph strictly
/// exceeds the model's baseline threshold.
pub fn predict(model: &Model, test: &TimeSeries) -> Result<DetectionOutcome, DetectorError> {
    let start = Instant::now();

    let limit = threshold(&model.baseline, model.params.alpha)?;
    let levels = model.discretizer.discretize(test);
    let graphs = teg::discover_tegs(&levels, model.params.n_obs_per_period)?;
    let mut outliers = Vec::with_capacity(graphs.len());
    for g in &graphs {
        let d = aligned_dissimilarity(g, &model.global_graph, model.params.metric)?;
        outliers.push(d > limit);
    }

    Ok(DetectionOutcome {
        n_periods: outliers.len(),
        outliers,
        time_to_build: model.build_time_seconds,
        time_to_predict: start.elapsed().as_secs_f64(),
    })
}

/// Dissimilarity between an epoch graph and the global graph, aligning
/// level sets first. Test epochs can contain levels the global graph never
/// saw (the underflow level, say), so both sides are resized onto the union
/// of their level sets; whichever side lacks a level gets wildcards there.
fn aligned_dissimilarity(
    epoch: &Graph,
    global: &Graph,
    metric: MetricId,
) -> Result<f64, DetectorError> {
    if epoch.levels() == global.levels() {
        return Ok(metrics::graph_dissimilarity(epoch, global, metric)?);
    }
    let union = teg::merge_levels(epoch.levels(), global.levels());
    let epoch = epoch.resize(&union)?;
    if union.as_slice() == global.levels() {
        Ok(metrics::graph_dissimilarity(&epoch, global, metric)?)
    } else {
        let global = global.resize(&union)?;
        Ok(metrics::graph_dissimilarity(&epoch, &global, metric)?)
    }
}

/// Confusion counts of a prediction against ground truth
/// (`true` = anomalous).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ConfusionMatrix {
    pub true_positives: usize,
    pub true_negatives: usize,
    pub false_positives: usize,
    pub false_negatives: usize,
}

impl ConfusionMatrix {
    pub fn total(&self) -> usize {
        self.true_positives + self.true_negatives + self.false_positives + self.false_negatives
    }

    /// Fraction of correct predictions, `(tp + tn) / total`.
    pub fn accuracy(&self) -> Result<f64, DetectorError> {
        if self.total() == 0 {
            return Err(DetectorError::EmptyMatrix);
        }
        Ok((self.true_positives + self.true_negatives) as f64 / self.total() as f64)
    }
}

impl std::ops::Add for ConfusionMatrix {
    type Output = ConfusionMatrix;

    fn add(self, other: ConfusionMatrix) -> ConfusionMatrix {
        ConfusionMatrix {
            true_positives: self.true_positives + other.true_positives,
            true_negatives: self.true_negatives + other.true_negatives,
            false_positives: self.false_positives + other.false_positives,
            false_negatives: self.false_negatives + other.false_negatives,
        }
    }
}

impl std::fmt::Display for ConfusionMatrix {
    /// Prints in the classic dict layout:
    /// `{'tp': 0, 'tn': 14, 'fp': 1, 'fn': 0}`.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{{'tp': {}, 'tn': {}, 'fp': {}, 'fn': {}}}",
            self.true_positives, self.true_negatives, self.false_positives, self.false_negatives
        )
    }
}

/// Compares a prediction against ground truth (`true` = anomalous in both).
pub fn compute_confusion_matrix(
    ground_truth: &[bool],
    predicted: &[bool],
) -> Result<ConfusionMatrix, DetectorError> {
    if ground_truth.len() != predicted.len() {
        return Err(DetectorError::LengthMismatch {
            ground: ground_truth.len(),
            predicted: predicted.len(),
        });
    }
    let mut cm = ConfusionMatrix::default();
    for (&g, &p) in ground_truth.iter().zip(predicted) {
        match (g, p) {
            (true, true) => cm.true_positives += 1,
            (false, false) => cm.true_negatives += 1,
            (false, true) => cm.false_positives += 1,
            (true, false) => cm.false_negatives += 1,
        }
    }
    Ok(cm)
}

/// On-disk model layout: a single self-describing JSON document.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    format_version: u32,
    params: DetectorParams,
    discretizer: Discretizer,
    global_graph: Graph,
    baseline: Vec<f64>,
    build_time_seconds: f64,
}

/// Writes the model to `path` as a versioned JSON document. Numbers are
/// written with full round-trip precision, so load(save(m)) == m.
pub fn save_model<P: AsRef<Path>>(model: &Model, path: P) -> Result<(), DetectorError> {
    let path = path.as_ref();
    let file = ModelFile {
        format_version: MODEL_FORMAT_VERSION,
        params: model.params.clone(),
        discretizer: model.discretizer.clone(),
        global_graph: model.global_graph.clone(),
        baseline: model.baseline.clone(),
        build_time_seconds: model.build_time_seconds,
    };
    let json = serde_json::to_string_pretty(&file).map_err(|e| DetectorError::Corrupted {
        path: path.display().to_string(),
        reason: e.to_string(),
    })?;
    std::fs::write(path, json).map_err(|source| DetectorError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Reads a model written by [`save_model`], rejecting unknown format
/// versions and structurally invalid payloads.
pub fn load_model<P: AsRef<Path>>(path: P) -> Result<Model, DetectorError> {
    let path = path.as_ref();
    let display = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|source| DetectorError::Io {
        path: display.clone(),
        source,
    })?;

    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| DetectorError::Corrupted {
            path: display.clone(),
            reason: e.to_string(),
        })?;
    // Check the version before insisting on the full layout, so a newer
    // file fails with "unsupported version" rather than a shape error.
    match value.get("format_version") {
        Some(v) if v.as_u64() == Some(u64::from(MODEL_FORMAT_VERSION)) => {}
        Some(v) => {
            return Err(DetectorError::VersionMismatch {
                path: display,
                found: v.to_string(),
                expected: MODEL_FORMAT_VERSION,
            })
        }
        None => {
            return Err(DetectorError::Corrupted {
                path: display,
                reason: "missing format_version field".into(),
            })
        }
    }

    let file: ModelFile =
        serde_json::from_value(value).map_err(|e| DetectorError::Corrupted {
            path: display.clone(),
            reason: e.to_string(),
        })?;
    let model = Model {
        params: file.params,
        discretizer: file.discretizer,
        global_graph: file.global_graph,
        baseline: file.baseline,
        build_time_seconds: file.build_time_seconds,
    };
    model
        .params
        .validate()
        .map_err(|e| DetectorError::Corrupted {
            path: display.clone(),
            reason: e.to_string(),
        })?;
    if model.baseline.is_empty() {
        return Err(DetectorError::Corrupted {
            path: display,
            reason: "empty baseline".into(),
        });
    }
    Ok(model)
}
