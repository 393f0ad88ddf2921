//! Graph-based anomaly detection for univariate time series.
//!
//! The pipeline turns a series of raw observations into a sequence of
//! *time-evolving graphs* and flags the periods whose graph drifts too far
//! from normal behaviour:
//!
//! 1. [`data`] — load a two-column CSV and discretize observations into
//!    integer levels over equal-width bins fitted on the training range.
//! 2. [`teg`] — slice the level sequence into fixed-length epochs, build one
//!    transition graph per epoch, and combine them with a graph-sum algebra.
//! 3. [`metrics`] — turn an (epoch graph, global graph) pair into comparison
//!    vectors and measure their dissimilarity with one of 28 metrics.
//! 4. [`detector`] — fit a model (discretizer + global graph + baseline
//!    dissimilarity distribution) on training data, derive a percentile
//!    threshold, and flag test epochs that exceed it.
//!
//! Everything deterministic: identical inputs and parameters produce
//! identical graphs, dissimilarities and flags.

pub mod data;
pub mod detector;
pub mod metrics;
pub mod teg;

pub use data::{load_dataset, DataError, DiscreteSeries, Discretizer, TimeSeries};
pub use detector::{
    build_model, compute_confusion_matrix, load_model, predict, save_model, threshold,
    ConfusionMatrix, DetectionOutcome, DetectorError, DetectorParams, Model,
};
pub use metrics::{
    dissimilarity, graph_dissimilarity, list_metrics, vectorize, ComparisonVectors, MetricError,
    MetricId, VectorForm,
};
pub use teg::{discover_tegs, generate_graph, global_graph, sum_graphs, Graph, TegError, WILDCARD};
