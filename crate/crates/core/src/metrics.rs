//! Dissimilarity metrics between an epoch graph and a global graph.
//!
//! Comparing two graphs means flattening them into a pair of equal-length
//! vectors and applying one of 28 scalar kernels. How the vectors are built
//! depends on the metric family:
//!
//! * **Hamming** compares raw structure: the flattened adjacency matrices,
//!   wildcard entries kept as `-1` so they never match anything.
//! * **Cosine** compares raw counts: node weights concatenated with the
//!   flattened adjacency, wildcards zeroed.
//! * **Everything else** compares transition distributions: the flattened
//!   adjacency with wildcards zeroed, each vector divided by its own sum.
//!
//! Division/log conventions for sparse vectors: a summand whose denominator
//! is exactly zero contributes nothing, `0 * log(0/q)` is zero, and a
//! `p * log(p/0)` term is dropped as well. One consequence worth knowing:
//! with dropped terms, KL can dip below zero when the supports differ.

use std::fmt;
use std::str::FromStr;

use crate::teg::Graph;

/// Errors raised while preparing or naming metrics.
#[derive(Debug, thiserror::Error)]
pub enum MetricError {
    #[error("unknown metric {0:?} (names are case-sensitive; see list_metrics())")]
    UnknownMetric(String),
    #[error("graphs must share one level set before comparison (resize them first)")]
    LevelMismatch,
    #[error("the {0} has no transitions; relative frequencies are undefined")]
    ZeroVector(&'static str),
}

/// How a metric wants its comparison vectors prepared.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VectorForm {
    /// Flattened adjacency, wildcards kept as `-1`.
    RawAdjacency,
    /// Node weights + flattened adjacency, raw counts, wildcards zeroed.
    WeightsAndAdjacency,
    /// Flattened adjacency normalized to relative frequencies.
    RelativeFrequency,
}

/// Identifier of one of the 28 supported dissimilarity metrics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum MetricId {
    Hamming,
    Cosine,
    Jaccard,
    Dice,
    Kl,
    Jeffreys,
    Js,
    Euclidean,
    Cityblock,
    Chebyshev,
    Minkowski,
    Braycurtis,
    Gower,
    Soergel,
    Kulczynski,
    Canberra,
    Lorentzian,
    Bhattacharyya,
    Hellinger,
    Matusita,
    Squaredchord,
    Pearson,
    Neyman,
    Squared,
    Probsymmetric,
    Divergence,
    Clark,
    Additivesymmetric,
}

type Kernel = fn(&[f64], &[f64]) -> f64;

/// One registry row; adding a metric means adding a [`MetricId`] variant,
/// one row here and one kernel function.
struct MetricDef {
    id: MetricId,
    name: &'static str,
    form: VectorForm,
    kernel: Kernel,
}

use VectorForm::{RawAdjacency, RelativeFrequency, WeightsAndAdjacency};

macro_rules! def {
    ($id:ident, $name:literal, $form:expr, $kernel:expr) => {
        MetricDef {
            id: MetricId::$id,
            name: $name,
            form: $form,
            kernel: $kernel,
        }
    };
}

static REGISTRY: [MetricDef; 28] = [
    // Graph edit distance family
    def!(Hamming, "Hamming", RawAdjacency, hamming),
    // Inner product family
    def!(Cosine, "Cosine", WeightsAndAdjacency, cosine),
    def!(Jaccard, "Jaccard", RelativeFrequency, jaccard),
    def!(Dice, "Dice", RelativeFrequency, dice),
    // Shannon entropy family
    def!(Kl, "KL", RelativeFrequency, kullback_leibler),
    def!(Jeffreys, "Jeffreys", RelativeFrequency, jeffreys),
    def!(Js, "JS", RelativeFrequency, jensen_shannon),
    // Minkowski family
    def!(Euclidean, "Euclidean", RelativeFrequency, euclidean),
    def!(Cityblock, "Cityblock", RelativeFrequency, cityblock),
    def!(Chebyshev, "Chebyshev", RelativeFrequency, chebyshev),
    def!(Minkowski, "Minkowski", RelativeFrequency, minkowski_p3),
    // L1 family
    def!(Braycurtis, "Braycurtis", RelativeFrequency, braycurtis),
    def!(Gower, "Gower", RelativeFrequency, gower),
    def!(Soergel, "Soergel", RelativeFrequency, soergel),
    def!(Kulczynski, "Kulczynski", RelativeFrequency, kulczynski),
    def!(Canberra, "Canberra", RelativeFrequency, canberra),
    def!(Lorentzian, "Lorentzian", RelativeFrequency, lorentzian),
    // Fidelity / squared-chord family
    def!(Bhattacharyya, "Bhattacharyya", RelativeFrequency, bhattacharyya),
    def!(Hellinger, "Hellinger", RelativeFrequency, hellinger),
    def!(Matusita, "Matusita", RelativeFrequency, matusita),
    def!(Squaredchord, "Squaredchord", RelativeFrequency, squared_chord),
    // Chi-squared family
    def!(Pearson, "Pearson", RelativeFrequency, pearson_chi2),
    def!(Neyman, "Neyman", RelativeFrequency, neyman_chi2),
    def!(Squared, "Squared", RelativeFrequency, squared_chi2),
    def!(Probsymmetric, "Probsymmetric", RelativeFrequency, prob_symmetric_chi2),
    def!(Divergence, "Divergence", RelativeFrequency, divergence),
    def!(Clark, "Clark", RelativeFrequency, clark),
    def!(Additivesymmetric, "Additivesymmetric", RelativeFrequency, additive_symmetric_chi2),
];

impl MetricId {
    /// Every metric, in the canonical listing order.
    pub const ALL: [MetricId; 28] = [
        MetricId::Hamming,
        MetricId::Cosine,
        MetricId::Jaccard,
        MetricId::Dice,
        MetricId::Kl,
        MetricId::Jeffreys,
        MetricId::Js,
        MetricId::Euclidean,
        MetricId::Cityblock,
        MetricId::Chebyshev,
        MetricId::Minkowski,
        MetricId::Braycurtis,
        MetricId::Gower,
        MetricId::Soergel,
        MetricId::Kulczynski,
        MetricId::Canberra,
        MetricId::Lorentzian,
        MetricId::Bhattacharyya,
        MetricId::Hellinger,
        MetricId::Matusita,
        MetricId::Squaredchord,
        MetricId::Pearson,
        MetricId::Neyman,
        MetricId::Squared,
        MetricId::Probsymmetric,
        MetricId::Divergence,
        MetricId::Clark,
        MetricId::Additivesymmetric,
    ];

    /// Canonical (case-sensitive) name.
    pub fn name(self) -> &'static str {
        REGISTRY[self as usize].name
    }

    /// How comparison vectors are prepared for this metric.
    pub fn vector_form(self) -> VectorForm {
        REGISTRY[self as usize].form
    }
}

impl fmt::Display for MetricId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MetricId {
    type Err = MetricError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        REGISTRY
            .iter()
            .find(|def| def.name == s)
            .map(|def| def.id)
            .ok_or_else(|| MetricError::UnknownMetric(s.to_string()))
    }
}

impl serde::Serialize for MetricId {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

impl<'de> serde::Deserialize<'de> for MetricId {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let name = String::deserialize(deserializer)?;
        name.parse().map_err(serde::de::Error::custom)
    }
}

/// Canonical metric names in listing order.
pub fn list_metrics() -> Vec<&'static str> {
    REGISTRY.iter().map(|def| def.name).collect()
}

/// A pair of equal-length vectors ready for a specific metric's kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonVectors {
    pub p: Vec<f64>,
    pub q: Vec<f64>,
}

/// Flattens an (epoch, global) graph pair into comparison vectors for
/// `metric`. Both graphs must already share one level set (resize first);
/// metrics that normalize to relative frequencies reject graphs without a
/// single transition (e.g. built from one-observation epochs).
pub fn vectorize(
    epoch: &Graph,
    global: &Graph,
    metric: MetricId,
) -> Result<ComparisonVectors, MetricError> {
    if epoch.levels() != global.levels() {
        return Err(MetricError::LevelMismatch);
    }
    let (p, q) = match metric.vector_form() {
        RawAdjacency => (
            epoch.adjacency().iter().map(|&e| e as f64).collect(),
            global.adjacency().iter().map(|&e| e as f64).collect(),
        ),
        WeightsAndAdjacency => (counts_vector(epoch), counts_vector(global)),
        RelativeFrequency => (
            relative_frequencies(epoch, "epoch graph")?,
            relative_frequencies(global, "global graph")?,
        ),
    };
    Ok(ComparisonVectors { p, q })
}

/// Node weights followed by adjacency entries, wildcards zeroed.
fn counts_vector(g: &Graph) -> Vec<f64> {
    g.node_weights()
        .iter()
        .chain(g.adjacency().iter())
        .map(|&e| e.max(0) as f64)
        .collect()
}

/// Adjacency entries as relative frequencies, wildcards zeroed.
fn relative_frequencies(g: &Graph, side: &'static str) -> Result<Vec<f64>, MetricError> {
    let mut v: Vec<f64> = g.adjacency().iter().map(|&e| e.max(0) as f64).collect();
    let total: f64 = v.iter().sum();
    if total == 0.0 {
        return Err(MetricError::ZeroVector(side));
    }
    for e in &mut v {
        *e /= total;
    }
    Ok(v)
}

/// Applies `metric`'s kernel to vectors prepared by [`vectorize`].
pub fn dissimilarity(metric: MetricId, vectors: &ComparisonVectors) -> f64 {
    debug_assert_eq!(vectors.p.len(), vectors.q.len());
    (REGISTRY[metric as usize].kernel)(&vectors.p, &vectors.q)
}

/// Convenience: [`vectorize`] + [`dissimilarity`] in one call.
pub fn graph_dissimilarity(
    epoch: &Graph,
    global: &Graph,
    metric: MetricId,
) -> Result<f64, MetricError> {
    Ok(dissimilarity(metric, &vectorize(epoch, global, metric)?))
}

// --- kernels ---------------------------------------------------------------
//
// All kernels take two equal-length vectors. `zip` keeps them in lockstep.

fn zip<'a>(p: &'a [f64], q: &'a [f64]) -> impl Iterator<Item = (f64, f64)> + 'a {
    p.iter().copied().zip(q.iter().copied())
}

/// Structural mismatch rate: positions agree when both entries are positive
/// or both are exactly zero. Wildcards (`-1`) agree with nothing, not even
/// each other.
fn hamming(p: &[f64], q: &[f64]) -> f64 {
    let agreements = zip(p, q)
        .filter(|&(x, y)| (x > 0.0 && y > 0.0) || (x == 0.0 && y == 0.0))
        .count();
    1.0 - agreements as f64 / p.len() as f64
}

fn cosine(p: &[f64], q: &[f64]) -> f64 {
    let (mut dot, mut pp, mut qq) = (0.0, 0.0, 0.0);
    for (x, y) in zip(p, q) {
        dot += x * y;
        pp += x * x;
        qq += y * y;
    }
    let denom = pp.sqrt() * qq.sqrt();
    if denom == 0.0 {
        return 1.0;
    }
    1.0 - dot / denom
}

fn jaccard(p: &[f64], q: &[f64]) -> f64 {
    let (mut diff2, mut pp, mut qq, mut dot) = (0.0, 0.0, 0.0, 0.0);
    for (x, y) in zip(p, q) {
        diff2 += (x - y) * (x - y);
        pp += x * x;
        qq += y * y;
        dot += x * y;
    }
    let denom = pp + qq - dot;
    if denom == 0.0 {
        return 0.0;
    }
    diff2 / denom
}

fn dice(p: &[f64], q: &[f64]) -> f64 {
    let (mut diff2, mut pp, mut qq) = (0.0, 0.0, 0.0);
    for (x, y) in zip(p, q) {
        diff2 += (x - y) * (x - y);
        pp += x * x;
        qq += y * y;
    }
    if pp + qq == 0.0 {
        return 0.0;
    }
    diff2 / (pp + qq)
}

fn kullback_leibler(p: &[f64], q: &[f64]) -> f64 {
    zip(p, q)
        .filter(|&(x, y)| x > 0.0 && y > 0.0)
        .map(|(x, y)| x * (x / y).log2())
        .sum()
}

fn jeffreys(p: &[f64], q: &[f64]) -> f64 {
    zip(p, q)
        .filter(|&(x, y)| x > 0.0 && y > 0.0)
        .map(|(x, y)| (x - y) * (x / y).ln())
        .sum()
}

/// Square root of the mean of the two KL divergences against the pointwise
/// mean vector. The inner sum is clamped at zero before the root: it is
/// non-negative mathematically but can round below zero on near-identical
/// inputs.
fn jensen_shannon(p: &[f64], q: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (x, y) in zip(p, q) {
        let m = 0.5 * (x + y);
        if x > 0.0 && m > 0.0 {
            acc += x * (x / m).log2();
        }
        if y > 0.0 && m > 0.0 {
            acc += y * (y / m).log2();
        }
    }
    (acc / 2.0).max(0.0).sqrt()
}

fn euclidean(p: &[f64], q: &[f64]) -> f64 {
    zip(p, q)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn cityblock(p: &[f64], q: &[f64]) -> f64 {
    zip(p, q).map(|(x, y)| (x - y).abs()).sum()
}

fn chebyshev(p: &[f64], q: &[f64]) -> f64 {
    zip(p, q).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn minkowski_p3(p: &[f64], q: &[f64]) -> f64 {
    zip(p, q)
        .map(|(x, y)| (x - y).abs().powi(3))
        .sum::<f64>()
        .cbrt()
}

fn braycurtis(p: &[f64], q: &[f64]) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for (x, y) in zip(p, q) {
        num += (x - y).abs();
        den += x + y;
    }
    if den == 0.0 {
        return 0.0;
    }
    num / den
}

fn gower(p: &[f64], q: &[f64]) -> f64 {
    cityblock(p, q) / p.len() as f64
}

fn soergel(p: &[f64], q: &[f64]) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for (x, y) in zip(p, q) {
        num += (x - y).abs();
        den += x.max(y);
    }
    if den == 0.0 {
        return 0.0;
    }
    num / den
}

/// Like Soergel but normalized by the *smaller* coordinates; when the
/// supports are disjoint that sum is zero and the distance saturates to the
/// largest finite value instead of overflowing to infinity.
fn kulczynski(p: &[f64], q: &[f64]) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for (x, y) in zip(p, q) {
        num += (x - y).abs();
        den += x.min(y);
    }
    if den == 0.0 {
        return f64::MAX;
    }
    num / den
}

fn canberra(p: &[f64], q: &[f64]) -> f64 {
    zip(p, q)
        .filter(|&(x, y)| x + y > 0.0)
        .map(|(x, y)| (x - y).abs() / (x + y))
        .sum()
}

fn lorentzian(p: &[f64], q: &[f64]) -> f64 {
    zip(p, q).map(|(x, y)| (x - y).abs().ln_1p()).sum()
}

/// `-ln` of the Bhattacharyya coefficient; disjoint supports give an
/// infinite distance, fidelity slightly above 1 from rounding clamps to 0.
fn bhattacharyya(p: &[f64], q: &[f64]) -> f64 {
    let fidelity: f64 = zip(p, q).map(|(x, y)| (x * y).sqrt()).sum();
    if fidelity == 0.0 {
        return f64::INFINITY;
    }
    (-fidelity.ln()).max(0.0)
}

fn hellinger(p: &[f64], q: &[f64]) -> f64 {
    let fidelity: f64 = zip(p, q).map(|(x, y)| (x * y).sqrt()).sum();
    2.0 * (1.0 - fidelity).max(0.0).sqrt()
}

fn matusita(p: &[f64], q: &[f64]) -> f64 {
    let fidelity: f64 = zip(p, q).map(|(x, y)| (x * y).sqrt()).sum();
    (2.0 - 2.0 * fidelity).max(0.0).sqrt()
}

fn squared_chord(p: &[f64], q: &[f64]) -> f64 {
    zip(p, q)
        .map(|(x, y)| {
            let d = x.sqrt() - y.sqrt();
            d * d
        })
        .sum()
}

fn pearson_chi2(p: &[f64], q: &[f64]) -> f64 {
    zip(p, q)
        .filter(|&(_, y)| y > 0.0)
        .map(|(x, y)| (x - y) * (x - y) / y)
        .sum()
}

fn neyman_chi2(p: &[f64], q: &[f64]) -> f64 {
    zip(p, q)
        .filter(|&(x, _)| x > 0.0)
        .map(|(x, y)| (x - y) * (x - y) / x)
        .sum()
}

fn squared_chi2(p: &[f64], q: &[f64]) -> f64 {
    zip(p, q)
        .filter(|&(x, y)| x + y > 0.0)
        .map(|(x, y)| (x - y) * (x - y) / (x + y))
        .sum()
}

fn prob_symmetric_chi2(p: &[f64], q: &[f64]) -> f64 {
    2.0 * squared_chi2(p, q)
}

fn divergence(p: &[f64], q: &[f64]) -> f64 {
    2.0 * zip(p, q)
        .filter(|&(x, y)| x + y > 0.0)
        .map(|(x, y)| (x - y) * (x - y) / ((x + y) * (x + y)))
        .sum::<f64>()
}

fn clark(p: &[f64], q: &[f64]) -> f64 {
    zip(p, q)
        .filter(|&(x, y)| x + y > 0.0)
        .map(|(x, y)| {
            let r = (x - y).abs() / (x + y);
            r * r
        })
        .sum::<f64>()
        .sqrt()
}

fn additive_symmetric_chi2(p: &[f64], q: &[f64]) -> f64 {
    zip(p, q)
        .filter(|&(x, y)| x * y > 0.0)
        .map(|(x, y)| (x - y) * (x - y) * (x + y) / (x * y))
        .sum()
}
