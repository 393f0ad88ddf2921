//! The four subcommands: `build`, `detect`, `sweep`, `report`.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use clap::Args;
use tegad_core::{
    build_model, compute_confusion_matrix, load_dataset, load_model, predict, save_model,
    ConfusionMatrix, DetectorParams, MetricId, TimeSeries,
};

use crate::config::{GroundTruth, SweepFlags, SweepPlan};
use crate::error::CliError;
use crate::results::{read_results, ResultsRow, ResultsWriter};

fn parse_metric(s: &str) -> Result<MetricId, String> {
    s.parse::<MetricId>().map_err(|_| {
        format!(
            "unknown metric {s:?} (names are case-sensitive); valid names: {}",
            tegad_core::list_metrics().join(", ")
        )
    })
}

/// One `key: value` line of the detection report, keys padded to a column.
fn print_kv(key: &str, value: impl std::fmt::Display) {
    println!("{key:<26}{value}");
}

/// Column label for a testing set: its ground truth when known, otherwise
/// the file stem.
fn testing_label(path: &Path, ground_truth: GroundTruth) -> String {
    match ground_truth {
        GroundTruth::None => path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string()),
        known => known.label().to_string(),
    }
}

/// Fit a detector on a training series and save the model.
#[derive(Debug, Args)]
pub struct BuildArgs {
    /// Training CSV (two columns: timestamp, value).
    #[arg(long, value_name = "FILE")]
    pub train: PathBuf,

    /// Where to write the fitted model.
    #[arg(long, value_name = "FILE")]
    pub model: PathBuf,

    /// Dissimilarity metric, e.g. Hamming, Cosine, Clark.
    #[arg(long, value_parser = parse_metric)]
    pub metric: MetricId,

    /// Number of equal-width discretization bins.
    #[arg(long, default_value_t = DetectorParams::DEFAULT_N_BINS)]
    pub n_bins: u32,

    /// Observations per period (epoch length).
    #[arg(long = "obs-per-epoch", default_value_t = DetectorParams::DEFAULT_N_OBS_PER_PERIOD)]
    pub obs_per_epoch: usize,

    /// Percentage of the baseline treated as outliers (1-99).
    #[arg(long, default_value_t = DetectorParams::DEFAULT_ALPHA)]
    pub alpha: u8,

    /// Zero all reported timings, for byte-reproducible outputs.
    #[arg(long)]
    pub no_timings: bool,
}

pub fn cmd_build(args: BuildArgs) -> Result<(), CliError> {
    let params = DetectorParams {
        metric: args.metric,
        n_bins: args.n_bins,
        n_obs_per_period: args.obs_per_epoch,
        alpha: args.alpha,
    };
    let train = load_dataset(&args.train)?;
    let (mut model, _) = build_model(&train, &params)?;
    if args.no_timings {
        model.set_build_time_seconds(0.0);
    }
    save_model(&model, &args.model).map_err(CliError::internal)?;

    print_kv(
        "Time to build the model:",
        format_args!("{} seconds", model.build_time_seconds()),
    );
    println!("Model written to {}", args.model.display());
    Ok(())
}

/// Run a saved model over a testing series and record the outcome.
#[derive(Debug, Args)]
pub struct DetectArgs {
    /// Model file produced by `build`.
    #[arg(long, value_name = "FILE")]
    pub model: PathBuf,

    /// Testing CSV (two columns: timestamp, value).
    #[arg(long, value_name = "FILE")]
    pub test: PathBuf,

    /// Ground truth for the whole testing set.
    #[arg(long, value_enum, default_value_t = GroundTruth::None)]
    pub ground_truth: GroundTruth,

    /// Results CSV to append to (created with a header when absent).
    #[arg(long, value_name = "FILE")]
    pub out: PathBuf,

    /// Zero all reported timings, for byte-reproducible outputs.
    #[arg(long)]
    pub no_timings: bool,
}

pub fn cmd_detect(args: DetectArgs) -> Result<(), CliError> {
    let model = load_model(&args.model)?;
    let test = load_dataset(&args.test)?;
    let outcome = predict(&model, &test)?;

    let (time2build, time2predict) = if args.no_timings {
        (0.0, 0.0)
    } else {
        (outcome.time_to_build, outcome.time_to_predict)
    };
    let label = testing_label(&args.test, args.ground_truth);
    let confusion = match args.ground_truth.expected_flags(outcome.n_periods) {
        Some(expected) => Some(compute_confusion_matrix(&expected, &outcome.outliers)?),
        None => None,
    };

    let params = model.params();
    print_kv("Detector:", params.metric);
    print_kv("N_bins:", params.n_bins);
    print_kv("N_obs_per_period:", params.n_obs_per_period);
    print_kv("Alpha:", params.alpha);
    print_kv("Testing set:", &label);
    print_kv("Time to build the model:", format_args!("{time2build} seconds"));
    print_kv("Time to make prediction:", format_args!("{time2predict} seconds"));
    if let Some(cm) = &confusion {
        println!("Confusion matrix:");
        println!(" {cm}");
    }
    let flags: Vec<String> = outcome
        .outliers
        .iter()
        .map(|&o| u8::from(o).to_string())
        .collect();
    println!("Outliers:");
    println!(" [{}]", flags.join(", "));

    ResultsWriter::open(&args.out)?.append(&ResultsRow {
        detector: params.metric.to_string(),
        n_bins: params.n_bins,
        n_obs_per_period: params.n_obs_per_period,
        alpha: params.alpha,
        testing_set: label,
        time2build,
        time2predict,
        confusion,
    })
}

/// Evaluate every combination of metrics and parameters over every testing
/// set, appending one results row per (combination, testing set).
#[derive(Debug, Args)]
pub struct SweepArgs {
    /// TOML sweep configuration; the flags below override its fields.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Training CSV.
    #[arg(long, value_name = "FILE")]
    pub train: Option<PathBuf>,

    /// Metrics to sweep, comma-separated; "all" expands to every metric.
    #[arg(long, value_delimiter = ',')]
    pub metric: Vec<String>,

    /// n_bins values to sweep, comma-separated.
    #[arg(long, value_delimiter = ',')]
    pub n_bins: Vec<u32>,

    /// Epoch lengths to sweep, comma-separated.
    #[arg(long = "obs-per-epoch", value_delimiter = ',')]
    pub obs_per_epoch: Vec<usize>,

    /// Alpha values to sweep, comma-separated.
    #[arg(long, value_delimiter = ',')]
    pub alpha: Vec<u8>,

    /// Testing CSV; repeat for several sets, paired with --ground-truth.
    #[arg(long, value_name = "FILE")]
    pub test: Vec<PathBuf>,

    /// Ground truth per testing set, in --test order (normal or anomalous).
    #[arg(long, value_enum)]
    pub ground_truth: Vec<GroundTruth>,

    /// Results CSV to append to (created with a header when absent).
    #[arg(long, value_name = "FILE")]
    pub out: PathBuf,

    /// Zero all reported timings, for byte-reproducible outputs.
    #[arg(long)]
    pub no_timings: bool,
}

pub fn cmd_sweep(args: SweepArgs) -> Result<(), CliError> {
    let plan = SweepPlan::assemble(SweepFlags {
        config: args.config,
        train: args.train,
        metric: args.metric,
        n_bins: args.n_bins,
        n_obs_per_period: args.obs_per_epoch,
        alpha: args.alpha,
        test: args.test,
        ground_truth: args.ground_truth,
    })?;

    let train = load_dataset(&plan.train)?;
    let mut testing: Vec<(String, GroundTruth, TimeSeries)> = Vec::new();
    for set in &plan.testing {
        testing.push((
            testing_label(&set.path, set.ground_truth),
            set.ground_truth,
            load_dataset(&set.path)?,
        ));
    }

    let mut writer = ResultsWriter::open(&args.out)?;
    let total =
        plan.metrics.len() * plan.n_obs_per_period.len() * plan.n_bins.len() * plan.alpha.len();
    let mut done = 0usize;
    let mut failures = 0usize;

    // Fixed nesting order = deterministic row order in the results file.
    for &metric in &plan.metrics {
        for &n_obs_per_period in &plan.n_obs_per_period {
            for &n_bins in &plan.n_bins {
                for &alpha in &plan.alpha {
                    done += 1;
                    let params = DetectorParams {
                        metric,
                        n_bins,
                        n_obs_per_period,
                        alpha,
                    };
                    eprintln!(
                        "[{done}/{total}] {metric} n_bins={n_bins} \
                         n_obs_per_period={n_obs_per_period} alpha={alpha}"
                    );
                    match run_combination(&train, &params, &testing, args.no_timings, &mut writer)
                    {
                        Ok(()) => {}
                        // A broken output file will break every remaining
                        // combination too; stop instead of spamming.
                        Err(e @ CliError::Internal(_)) => return Err(e),
                        Err(e) => {
                            eprintln!("  failed: {e}");
                            failures += 1;
                        }
                    }
                }
            }
        }
    }

    if failures > 0 {
        return Err(CliError::data(format!(
            "{failures} of {total} combinations failed"
        )));
    }
    Ok(())
}

/// Builds a fresh model for one parameter combination (so every row gets
/// its own honest build time) and evaluates each testing set with it.
fn run_combination(
    train: &TimeSeries,
    params: &DetectorParams,
    testing: &[(String, GroundTruth, TimeSeries)],
    no_timings: bool,
    writer: &mut ResultsWriter,
) -> Result<(), CliError> {
    let (model, build_time) = build_model(train, params)?;
    for (label, ground_truth, series) in testing {
        let outcome = predict(&model, series)?;
        let confusion = match ground_truth.expected_flags(outcome.n_periods) {
            Some(expected) => Some(compute_confusion_matrix(&expected, &outcome.outliers)?),
            None => None,
        };
        let (time2build, time2predict) = if no_timings {
            (0.0, 0.0)
        } else {
            (build_time, outcome.time_to_predict)
        };
        writer.append(&ResultsRow {
            detector: params.metric.to_string(),
            n_bins: params.n_bins,
            n_obs_per_period: params.n_obs_per_period,
            alpha: params.alpha,
            testing_set: label.clone(),
            time2build,
            time2predict,
            confusion,
        })?;
    }
    Ok(())
}

/// Summarize a results file: timing statistics, per-detector accuracy, and
/// plot-ready CSV tables.
#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Results CSV produced by `detect` or `sweep`.
    #[arg(value_name = "RESULTS")]
    pub results: PathBuf,

    /// Directory for the report tables (default: next to RESULTS).
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

pub fn cmd_report(args: ReportArgs) -> Result<(), CliError> {
    let rows = read_results(&args.results)?;
    if rows.is_empty() {
        return Err(CliError::data(format!(
            "{}: no data rows to report on",
            args.results.display()
        )));
    }

    let builds: Vec<f64> = rows.iter().map(|r| r.time2build).collect();
    let predicts: Vec<f64> = rows.iter().map(|r| r.time2predict).collect();
    println!("Timing statistics over {} runs (seconds):", rows.len());
    print_stats("time2build:", &builds);
    print_stats("time2predict:", &predicts);

    let accuracy = accuracy_per_detector(&rows)?;
    if accuracy.is_empty() {
        println!("\nNo rows carry ground truth; skipping accuracy.");
    } else {
        println!("\nAccuracy per detector (confusion matrices summed):");
        for (name, acc) in &accuracy {
            println!("  {name:<20}{acc:.4}");
        }
    }

    let out_dir = match &args.out {
        Some(dir) => dir.clone(),
        None => args
            .results
            .parent()
            .filter(|p| !p.as_os_str().is_empty())
            .map(Path::to_path_buf)
            .unwrap_or_else(|| PathBuf::from(".")),
    };
    std::fs::create_dir_all(&out_dir)
        .map_err(|e| CliError::internal(format!("cannot create {}: {e}", out_dir.display())))?;
    let stem = args
        .results
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "results".to_string());

    let accuracy_path = out_dir.join(format!("{stem}_accuracy.csv"));
    write_table(
        &accuracy_path,
        &["detector", "accuracy"],
        accuracy
            .iter()
            .map(|(name, acc)| vec![name.clone(), acc.to_string()]),
    )?;

    let by_params_path = out_dir.join(format!("{stem}_by_params.csv"));
    write_table(
        &by_params_path,
        &[
            "detector",
            "n_bins",
            "n_obs_per_period",
            "alpha",
            "mean_time2build",
            "mean_time2predict",
            "accuracy",
        ],
        group_by_params(&rows)?.into_iter().map(|g| {
            vec![
                g.detector,
                g.n_bins.to_string(),
                g.n_obs_per_period.to_string(),
                g.alpha.to_string(),
                g.mean_time2build.to_string(),
                g.mean_time2predict.to_string(),
                g.accuracy.map(|a| a.to_string()).unwrap_or_default(),
            ]
        }),
    )?;

    println!(
        "\nReport tables written to {} and {}",
        accuracy_path.display(),
        by_params_path.display()
    );
    Ok(())
}

/// Mean, sample standard deviation, min, max. One value → std 0.
fn stats(xs: &[f64]) -> (f64, f64, f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let std = if xs.len() < 2 {
        0.0
    } else {
        (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    };
    let min = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (mean, std, min, max)
}

fn print_stats(name: &str, xs: &[f64]) {
    let (mean, std, min, max) = stats(xs);
    println!("  {name:<14}mean={mean} std={std} min={min} max={max}");
}

/// Sums confusion matrices per detector (rows without ground truth are
/// skipped) and sorts by accuracy descending, name ascending on ties.
fn accuracy_per_detector(rows: &[ResultsRow]) -> Result<Vec<(String, f64)>, CliError> {
    let mut order: Vec<String> = Vec::new();
    let mut summed: HashMap<String, ConfusionMatrix> = HashMap::new();
    for row in rows {
        if let Some(cm) = row.confusion {
            let entry = summed.entry(row.detector.clone()).or_insert_with(|| {
                order.push(row.detector.clone());
                ConfusionMatrix::default()
            });
            *entry = *entry + cm;
        }
    }
    let mut accuracy = Vec::with_capacity(order.len());
    for name in order {
        let acc = summed[&name]
            .accuracy()
            .map_err(|e| CliError::data(format!("detector {name}: {e}")))?;
        accuracy.push((name, acc));
    }
    accuracy.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    Ok(accuracy)
}

struct ParamGroup {
    detector: String,
    n_bins: u32,
    n_obs_per_period: usize,
    alpha: u8,
    mean_time2build: f64,
    mean_time2predict: f64,
    /// Absent when no row of the group carried ground truth.
    accuracy: Option<f64>,
}

/// Groups rows by (detector, n_bins, n_obs_per_period, alpha) in first-
/// appearance order, averaging timings and summing confusion matrices.
fn group_by_params(rows: &[ResultsRow]) -> Result<Vec<ParamGroup>, CliError> {
    type Key = (String, u32, usize, u8);
    struct Acc {
        n: usize,
        sum_build: f64,
        sum_predict: f64,
        cm: Option<ConfusionMatrix>,
    }

    let mut order: Vec<Key> = Vec::new();
    let mut acc: HashMap<Key, Acc> = HashMap::new();
    for row in rows {
        let key = (
            row.detector.clone(),
            row.n_bins,
            row.n_obs_per_period,
            row.alpha,
        );
        let entry = acc.entry(key.clone()).or_insert_with(|| {
            order.push(key);
            Acc {
                n: 0,
                sum_build: 0.0,
                sum_predict: 0.0,
                cm: None,
            }
        });
        entry.n += 1;
        entry.sum_build += row.time2build;
        entry.sum_predict += row.time2predict;
        if let Some(cm) = row.confusion {
            entry.cm = Some(entry.cm.unwrap_or_default() + cm);
        }
    }

    let mut groups = Vec::with_capacity(order.len());
    for key in order {
        let a = &acc[&key];
        let accuracy = match a.cm {
            Some(cm) => Some(cm.accuracy().map_err(|e| {
                CliError::data(format!("detector {}: {e}", key.0))
            })?),
            None => None,
        };
        let n = a.n as f64;
        groups.push(ParamGroup {
            detector: key.0,
            n_bins: key.1,
            n_obs_per_period: key.2,
            alpha: key.3,
            mean_time2build: a.sum_build / n,
            mean_time2predict: a.sum_predict / n,
            accuracy,
        });
    }
    Ok(groups)
}

fn write_table<I>(path: &Path, header: &[&str], rows: I) -> Result<(), CliError>
where
    I: Iterator<Item = Vec<String>>,
{
    let mut writer = csv::Writer::from_path(path)
        .map_err(|e| CliError::internal(format!("cannot write {}: {e}", path.display())))?;
    let fail = |e: csv::Error| CliError::internal(format!("cannot write {}: {e}", path.display()));
    writer.write_record(header).map_err(fail)?;
    for row in rows {
        writer.write_record(&row).map_err(fail)?;
    }
    writer.flush().map_err(|e| {
        CliError::internal(format!("cannot write {}: {e}", path.display()))
    })
}
