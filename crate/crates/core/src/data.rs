//! Dataset loading and observation discretization.
//!
//! Input files are plain CSV with a header row and exactly two columns:
//! a timestamp (kept as an opaque label) and a numeric observation. The
//! [`Discretizer`] maps raw observations onto integer levels `0..=n+1` using
//! `n` equal-width bins fitted on the training range `[min, max]`; values
//! below the training minimum get the dedicated underflow level `n`, values
//! at or above the training maximum get the overflow level `n + 1`.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

/// Errors raised while reading datasets or discretizing observations.
#[derive(Debug, thiserror::Error)]
pub enum DataError {
    #[error("cannot read dataset {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("dataset {path}: expected 2 columns in header, found {found}")]
    BadHeader { path: String, found: usize },
    #[error("dataset {path}, line {line}: {problem}")]
    BadRow {
        path: String,
        line: u64,
        problem: String,
    },
    #[error("dataset {path} contains no data rows")]
    Empty { path: String },
    #[error("discretizer needs at least one bin")]
    ZeroBins,
    #[error("discretizer bounds must be finite, got [{min}, {max}]")]
    BadBounds { min: f64, max: f64 },
    #[error("discretizer bounds inverted: min {min} > max {max}")]
    InvertedBounds { min: f64, max: f64 },
}

/// An ordered univariate series: timestamps (opaque labels) plus values.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    timestamps: Vec<String>,
    values: Vec<f64>,
}

impl TimeSeries {
    /// Builds a series from parallel timestamp/value vectors.
    ///
    /// Rejects empty input, mismatched lengths and non-finite values so the
    /// rest of the pipeline can assume well-formed data.
    pub fn new(timestamps: Vec<String>, values: Vec<f64>) -> Result<Self, DataError> {
        if timestamps.len() != values.len() {
            return Err(DataError::BadRow {
                path: "<memory>".into(),
                line: 0,
                problem: format!(
                    "{} timestamps but {} values",
                    timestamps.len(),
                    values.len()
                ),
            });
        }
        if values.is_empty() {
            return Err(DataError::Empty {
                path: "<memory>".into(),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(DataError::BadRow {
                path: "<memory>".into(),
                line: i as u64 + 1,
                problem: format!("non-finite value {}", values[i]),
            });
        }
        Ok(Self { timestamps, values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn timestamps(&self) -> &[String] {
        &self.timestamps
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Smallest observation in the series.
    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Largest observation in the series.
    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Loads a two-column (timestamp, value) CSV with a header row.
///
/// Column names are ignored; order is preserved. Malformed rows — wrong
/// column count, non-numeric or non-finite values — are reported with their
/// 1-based file line number (the header is line 1).
pub fn load_dataset<P: AsRef<Path>>(path: P) -> Result<TimeSeries, DataError> {
    let path = path.as_ref();
    let display = path.display().to_string();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(source) => DataError::Io {
                path: display.clone(),
                source,
            },
            other => DataError::BadRow {
                path: display.clone(),
                line: 1,
                problem: format!("{other:?}"),
            },
        })?;

    let header_len = reader
        .headers()
        .map_err(|e| csv_row_error(&display, e))?
        .len();
    if header_len != 2 {
        return Err(DataError::BadHeader {
            path: display,
            found: header_len,
        });
    }

    let mut timestamps = Vec::new();
    let mut values = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_row_error(&display, e))?;
        let line = record
            .position()
            .map(|p| p.line())
            .unwrap_or(timestamps.len() as u64 + 2);
        if record.len() != 2 {
            return Err(DataError::BadRow {
                path: display,
                line,
                problem: format!("expected 2 columns, found {}", record.len()),
            });
        }
        let raw = record[1].trim();
        let value: f64 = raw.parse().map_err(|_| DataError::BadRow {
            path: display.clone(),
            line,
            problem: format!("cannot parse {raw:?} as a number"),
        })?;
        if !value.is_finite() {
            return Err(DataError::BadRow {
                path: display,
                line,
                problem: format!("non-finite value {raw:?}"),
            });
        }
        timestamps.push(record[0].to_string());
        values.push(value);
    }

    if values.is_empty() {
        return Err(DataError::Empty { path: display });
    }
    Ok(TimeSeries { timestamps, values })
}

fn csv_row_error(path: &str, e: csv::Error) -> DataError {
    let line = e.position().map(|p| p.line()).unwrap_or(0);
    match e.into_kind() {
        csv::ErrorKind::Io(source) => DataError::Io {
            path: path.to_string(),
            source,
        },
        other => DataError::BadRow {
            path: path.to_string(),
            line,
            problem: format!("{other:?}"),
        },
    }
}

/// Equal-width binning over a fitted training range.
///
/// With `bins = n` over `[min, max]`, the bin edges sit at
/// `min + i * (max - min) / n`. An observation `x` maps to:
///
/// * level `i` when `x` falls in the half-open bin `[edge_i, edge_{i+1})`,
/// * level `n` when `x < min` (underflow),
/// * level `n + 1` when `x >= max` (overflow).
///
/// Note the literal one-sided intervals: the training maximum itself maps to
/// the overflow level `n + 1`, so level `n` never occurs when a training
/// series is discretized against its own fit.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Discretizer {
    min: f64,
    max: f64,
    bins: u32,
}

// Deserializing goes through `with_bounds` so invalid bounds or a zero bin
// count in a model file are rejected at load time.
impl<'de> Deserialize<'de> for Discretizer {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Parts {
            min: f64,
            max: f64,
            bins: u32,
        }
        let parts = Parts::deserialize(deserializer)?;
        Discretizer::with_bounds(parts.min, parts.max, parts.bins)
            .map_err(serde::de::Error::custom)
    }
}

impl Discretizer {
    /// Fits bin edges on a training series: `n_bins` equal-width bins over
    /// the observed `[min, max]`.
    pub fn fit(train: &TimeSeries, n_bins: u32) -> Result<Self, DataError> {
        Self::with_bounds(train.min(), train.max(), n_bins)
    }

    /// Builds a discretizer from explicit bounds (mostly useful in tests).
    pub fn with_bounds(min: f64, max: f64, bins: u32) -> Result<Self, DataError> {
        if bins == 0 {
            return Err(DataError::ZeroBins);
        }
        if !min.is_finite() || !max.is_finite() {
            return Err(DataError::BadBounds { min, max });
        }
        if min > max {
            return Err(DataError::InvertedBounds { min, max });
        }
        Ok(Self { min, max, bins })
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn bins(&self) -> u32 {
        self.bins
    }

    /// Total number of distinct levels this discretizer can emit
    /// (`bins` regular + underflow + overflow).
    pub fn level_count(&self) -> u32 {
        self.bins + 2
    }

    /// Maps one observation to its level. Total over all finite inputs.
    pub fn level_of(&self, x: f64) -> u32 {
        if x < self.min {
            return self.bins; // underflow
        }
        if x >= self.max {
            return self.bins + 1; // overflow
        }
        // In-range: locate the equal-width bin directly. Floating-point
        // rounding can push the quotient to `bins` for x just below max;
        // clamp back into the regular range.
        let width = (self.max - self.min) / self.bins as f64;
        let i = ((x - self.min) / width) as u32;
        i.min(self.bins - 1)
    }

    /// Discretizes a whole series, preserving length and order.
    pub fn discretize(&self, series: &TimeSeries) -> DiscreteSeries {
        DiscreteSeries {
            timestamps: series.timestamps.clone(),
            levels: series.values.iter().map(|&v| self.level_of(v)).collect(),
        }
    }
}

/// A discretized series: the original timestamps plus one level per value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscreteSeries {
    timestamps: Vec<String>,
    levels: Vec<u32>,
}

impl DiscreteSeries {
    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn timestamps(&self) -> &[String] {
        &self.timestamps
    }

    pub fn levels(&self) -> &[u32] {
        &self.levels
    }
}

impl fmt::Display for Discretizer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} bins over [{}, {}]", self.bins, self.min, self.max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(values: &[f64]) -> TimeSeries {
        let ts = (0..values.len()).map(|i| format!("t{i}")).collect();
        TimeSeries::new(ts, values.to_vec()).unwrap()
    }

    #[test]
    fn five_bins_over_unit_range() {
        // n = 5 over [0, 10]: edges every 2 units, underflow level 5,
        // overflow level 6.
        let d = Discretizer::with_bounds(0.0, 10.0, 5).unwrap();
        assert_eq!(d.level_of(-1.0), 5);
        assert_eq!(d.level_of(0.0), 0);
        assert_eq!(d.level_of(3.9), 1);
        assert_eq!(d.level_of(10.0), 6);
        assert_eq!(d.level_of(10.0001), 6);
    }

    #[test]
    fn training_max_gets_overflow_level() {
        let train = series(&[1.0, 2.0, 3.0, 4.0]);
        let d = Discretizer::fit(&train, 3).unwrap();
        let ds = d.discretize(&train);
        // max (4.0) sits on the closing edge -> overflow level n + 1 = 4,
        // and the regular top bin (level n = 3) never fires on training data.
        assert_eq!(ds.levels(), &[0, 1, 2, 4]);
        assert!(ds.levels().iter().all(|&l| l != 3));
    }

    #[test]
    fn degenerate_constant_series() {
        let train = series(&[7.0, 7.0, 7.0]);
        let d = Discretizer::fit(&train, 4).unwrap();
        // min == max: everything at the bound is overflow, below is underflow.
        assert_eq!(d.level_of(7.0), 5);
        assert_eq!(d.level_of(6.9), 4);
        assert_eq!(d.discretize(&train).levels(), &[5, 5, 5]);
    }

    #[test]
    fn discretize_preserves_length_and_order() {
        let train = series(&[0.0, 5.0, 10.0]);
        let d = Discretizer::fit(&train, 10).unwrap();
        let probe = series(&[9.9, 0.1, 5.0, -3.0, 42.0]);
        let ds = d.discretize(&probe);
        assert_eq!(ds.len(), probe.len());
        assert_eq!(ds.timestamps(), probe.timestamps());
        assert_eq!(ds.levels(), &[9, 0, 5, 10, 11]);
    }

    #[test]
    fn zero_bins_rejected() {
        assert!(matches!(
            Discretizer::with_bounds(0.0, 1.0, 0),
            Err(DataError::ZeroBins)
        ));
    }

    #[test]
    fn non_finite_values_rejected() {
        let err = TimeSeries::new(vec!["a".into()], vec![f64::NAN]);
        assert!(matches!(err, Err(DataError::BadRow { .. })));
    }

    #[test]
    fn load_happy_path_and_errors() {
        use std::io::Write as _;
        let dir = tempfile::tempdir().unwrap();

        let good = dir.path().join("good.csv");
        std::fs::write(&good, "DT,Usage\n2014-01-01 00:00:00,0.52\nx,1.5\n").unwrap();
        let ts = load_dataset(&good).unwrap();
        assert_eq!(ts.len(), 2);
        assert_eq!(ts.values(), &[0.52, 1.5]);
        assert_eq!(ts.timestamps()[0], "2014-01-01 00:00:00");

        let empty = dir.path().join("empty.csv");
        std::fs::write(&empty, "DT,Usage\n").unwrap();
        assert!(matches!(load_dataset(&empty), Err(DataError::Empty { .. })));

        let bad = dir.path().join("bad.csv");
        let mut f = std::fs::File::create(&bad).unwrap();
        writeln!(f, "DT,Usage").unwrap();
        writeln!(f, "t0,1.0").unwrap();
        writeln!(f, "t1,not-a-number").unwrap();
        drop(f);
        match load_dataset(&bad) {
            Err(DataError::BadRow { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected BadRow, got {other:?}"),
        }

        let nan = dir.path().join("nan.csv");
        std::fs::write(&nan, "DT,Usage\nt0,nan\n").unwrap();
        assert!(matches!(load_dataset(&nan), Err(DataError::BadRow { .. })));

        let wide = dir.path().join("wide.csv");
        std::fs::write(&wide, "DT,Usage,Extra\nt0,1.0,2.0\n").unwrap();
        assert!(matches!(
            load_dataset(&wide),
            Err(DataError::BadHeader { found: 3, .. })
        ));

        let ragged = dir.path().join("ragged.csv");
        std::fs::write(&ragged, "DT,Usage\nt0,1.0\nt1,2.0,3.0\n").unwrap();
        match load_dataset(&ragged) {
            Err(DataError::BadRow { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected BadRow, got {other:?}"),
        }

        assert!(matches!(
            load_dataset(dir.path().join("missing.csv")),
            Err(DataError::Io { .. })
        ));
    }
}
