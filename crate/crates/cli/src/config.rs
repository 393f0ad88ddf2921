//! Sweep planning: merging the optional TOML config file with CLI flags.
//!
//! Flags override the file wholesale, field by field. A sweep needs a
//! training file, at least one metric, at least one value per parameter
//! axis and at least one testing set; anything missing is a usage error.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use tegad_core::{DetectorParams, MetricId};

use crate::error::CliError;

/// Ground truth for a whole testing set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum GroundTruth {
    /// Every epoch is normal.
    Normal,
    /// Every epoch is anomalous.
    Anomalous,
    /// Unknown: no confusion matrix is computed.
    None,
}

impl GroundTruth {
    pub fn label(self) -> &'static str {
        match self {
            GroundTruth::Normal => "normal",
            GroundTruth::Anomalous => "anomalous",
            GroundTruth::None => "none",
        }
    }

    /// Expected flags for `n` epochs; `None` when the truth is unknown.
    pub fn expected_flags(self, n: usize) -> Option<Vec<bool>> {
        match self {
            GroundTruth::Normal => Some(vec![false; n]),
            GroundTruth::Anomalous => Some(vec![true; n]),
            GroundTruth::None => None,
        }
    }
}

/// One testing set of a sweep: where it lives and what it contains.
#[derive(Debug, Clone, PartialEq)]
pub struct TestingSet {
    pub path: PathBuf,
    pub ground_truth: GroundTruth,
}

/// The file half of the sweep configuration.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepFile {
    train: Option<PathBuf>,
    metrics: Option<Vec<String>>,
    n_bins: Option<Vec<u32>>,
    n_obs_per_period: Option<Vec<usize>>,
    alpha: Option<Vec<u8>>,
    testing: Option<Vec<TestingFileEntry>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TestingFileEntry {
    path: PathBuf,
    ground_truth: String,
}

/// A fully resolved sweep: every combination of the four axes is run
/// against every testing set, in exactly this nesting order: metrics,
/// n_obs_per_period, n_bins, alpha, testing sets.
#[derive(Debug, PartialEq)]
pub struct SweepPlan {
    pub train: PathBuf,
    pub metrics: Vec<MetricId>,
    pub n_obs_per_period: Vec<usize>,
    pub n_bins: Vec<u32>,
    pub alpha: Vec<u8>,
    pub testing: Vec<TestingSet>,
}

/// Flag-side inputs for assembling a sweep plan (mirrors the `sweep`
/// subcommand's arguments).
#[derive(Debug, Default)]
pub struct SweepFlags {
    pub config: Option<PathBuf>,
    pub train: Option<PathBuf>,
    pub metric: Vec<String>,
    pub n_bins: Vec<u32>,
    pub n_obs_per_period: Vec<usize>,
    pub alpha: Vec<u8>,
    pub test: Vec<PathBuf>,
    pub ground_truth: Vec<GroundTruth>,
}

impl SweepPlan {
    pub fn assemble(flags: SweepFlags) -> Result<SweepPlan, CliError> {
        let file = match &flags.config {
            Some(path) => load_file(path)?,
            None => SweepFile::default(),
        };

        let train = flags
            .train
            .or(file.train)
            .ok_or_else(|| CliError::usage("sweep needs a training file (--train or config)"))?;

        let metric_names = if !flags.metric.is_empty() {
            flags.metric
        } else {
            file.metrics.unwrap_or_default()
        };
        let metrics = resolve_metrics(&metric_names)?;

        let n_obs_per_period = pick_axis(
            "n_obs_per_period",
            flags.n_obs_per_period,
            file.n_obs_per_period,
            DetectorParams::DEFAULT_N_OBS_PER_PERIOD,
        )?;
        let n_bins = pick_axis(
            "n_bins",
            flags.n_bins,
            file.n_bins,
            DetectorParams::DEFAULT_N_BINS,
        )?;
        let alpha = pick_axis("alpha", flags.alpha, file.alpha, DetectorParams::DEFAULT_ALPHA)?;

        // Validate each axis value with the same rules the detector applies.
        for &s in &n_obs_per_period {
            for &bins in &n_bins {
                for &a in &alpha {
                    DetectorParams {
                        metric: metrics[0],
                        n_bins: bins,
                        n_obs_per_period: s,
                        alpha: a,
                    }
                    .validate()
                    .map_err(CliError::usage)?;
                }
            }
        }

        let testing = if !flags.test.is_empty() {
            if flags.test.len() != flags.ground_truth.len() {
                return Err(CliError::usage(format!(
                    "{} --test flags but {} --ground-truth flags; give one per testing set",
                    flags.test.len(),
                    flags.ground_truth.len()
                )));
            }
            flags
                .test
                .into_iter()
                .zip(flags.ground_truth)
                .map(|(path, ground_truth)| {
                    if ground_truth == GroundTruth::None {
                        return Err(CliError::usage(
                            "sweep testing sets need ground truth (normal or anomalous)",
                        ));
                    }
                    Ok(TestingSet { path, ground_truth })
                })
                .collect::<Result<Vec<_>, _>>()?
        } else {
            file.testing
                .unwrap_or_default()
                .into_iter()
                .map(|entry| {
                    let ground_truth = match entry.ground_truth.as_str() {
                        "normal" => GroundTruth::Normal,
                        "anomalous" => GroundTruth::Anomalous,
                        other => {
                            return Err(CliError::usage(format!(
                                "testing set {}: ground_truth must be \"normal\" or \
                                 \"anomalous\", got {other:?}",
                                entry.path.display()
                            )))
                        }
                    };
                    Ok(TestingSet {
                        path: entry.path,
                        ground_truth,
                    })
                })
                .collect::<Result<Vec<_>, _>>()?
        };
        if testing.is_empty() {
            return Err(CliError::usage(
                "sweep needs at least one testing set (--test or config [[testing]])",
            ));
        }

        Ok(SweepPlan {
            train,
            metrics,
            n_obs_per_period,
            n_bins,
            alpha,
            testing,
        })
    }
}

fn load_file(path: &Path) -> Result<SweepFile, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::data(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text)
        .map_err(|e| CliError::usage(format!("config {}: {e}", path.display())))
}

/// Expands metric names ("all" stands for the whole registry) and rejects
/// unknown names and empty lists.
fn resolve_metrics(names: &[String]) -> Result<Vec<MetricId>, CliError> {
    if names.is_empty() {
        return Err(CliError::usage(
            "sweep needs at least one metric (--metric or config metrics)",
        ));
    }
    let mut metrics = Vec::new();
    for name in names {
        if name == "all" {
            metrics.extend(MetricId::ALL);
        } else {
            metrics.push(name.parse::<MetricId>().map_err(CliError::usage)?);
        }
    }
    Ok(metrics)
}

fn pick_axis<T: Copy>(
    name: &str,
    from_flags: Vec<T>,
    from_file: Option<Vec<T>>,
    default: T,
) -> Result<Vec<T>, CliError> {
    let axis = if !from_flags.is_empty() {
        from_flags
    } else {
        match from_file {
            Some(v) => v,
            None => vec![default],
        }
    };
    if axis.is_empty() {
        return Err(CliError::usage(format!("{name} list must not be empty")));
    }
    Ok(axis)
}
