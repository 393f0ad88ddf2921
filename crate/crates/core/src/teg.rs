//! Time-evolving graphs: per-epoch transition graphs and their algebra.
//!
//! An epoch's graph has one node per distinct level observed in that epoch;
//! node weights count occurrences and the dense adjacency matrix counts
//! consecutive transitions (`0` means "no such transition"). Graphs over
//! different level sets are combined with [`sum_graphs`] (union of levels,
//! entrywise addition) and aligned with [`Graph::resize`], which inserts
//! missing levels with the wildcard value [`WILDCARD`] (`-1`) so the result
//! keeps the positions of a larger graph while marking what was never seen.

use serde::{Deserialize, Serialize};

use crate::data::DiscreteSeries;

/// Marker for "this node/edge does not exist in the original graph",
/// introduced by [`Graph::resize`]. Distinct from `0`, which means the
/// node/edge exists with count zero.
pub const WILDCARD: i64 = -1;

/// Errors raised by graph construction and algebra.
#[derive(Debug, thiserror::Error)]
pub enum TegError {
    #[error("cannot build a graph from an empty epoch")]
    EmptyEpoch,
    #[error("epoch length must be at least 1, got {0}")]
    BadEpochLength(usize),
    #[error("series has {len} observations, shorter than one epoch of {epoch}")]
    SeriesTooShort { len: usize, epoch: usize },
    #[error("graph sum requires wildcard-free inputs")]
    WildcardInSum,
    #[error("cannot resize: level {0} is not in the target level set")]
    LevelNotInTarget(u32),
    #[error("target level set must be strictly increasing")]
    UnsortedTarget,
    #[error("cannot combine an empty graph sequence")]
    EmptySequence,
    #[error("malformed graph: {0}")]
    Malformed(String),
}

/// A weighted directed graph over a strictly increasing set of levels.
///
/// `node_weights[i]` counts occurrences of `levels[i]`; the row-major
/// `adjacency` matrix counts transitions `levels[r] -> levels[c]`. Entries
/// are non-negative counts except for [`WILDCARD`] markers introduced by
/// [`Graph::resize`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Graph {
    levels: Vec<u32>,
    node_weights: Vec<i64>,
    /// Row-major, `levels.len() * levels.len()` entries.
    adjacency: Vec<i64>,
}

// Deserializing goes through `Graph::new` so a hand-edited or corrupted
// model file cannot smuggle in a structurally invalid graph.
impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Parts {
            levels: Vec<u32>,
            node_weights: Vec<i64>,
            adjacency: Vec<i64>,
        }
        let parts = Parts::deserialize(deserializer)?;
        Graph::new(parts.levels, parts.node_weights, parts.adjacency)
            .map_err(serde::de::Error::custom)
    }
}

impl Graph {
    /// Builds a graph from explicit parts, validating the structural
    /// invariants (strictly increasing levels, matching lengths, entries
    /// that are either counts or wildcards).
    pub fn new(
        levels: Vec<u32>,
        node_weights: Vec<i64>,
        adjacency: Vec<i64>,
    ) -> Result<Self, TegError> {
        if levels.is_empty() {
            return Err(TegError::Malformed("empty level set".into()));
        }
        if !levels.windows(2).all(|w| w[0] < w[1]) {
            return Err(TegError::Malformed(
                "levels must be strictly increasing".into(),
            ));
        }
        if node_weights.len() != levels.len() {
            return Err(TegError::Malformed(format!(
                "{} levels but {} node weights",
                levels.len(),
                node_weights.len()
            )));
        }
        if adjacency.len() != levels.len() * levels.len() {
            return Err(TegError::Malformed(format!(
                "adjacency has {} entries, expected {}",
                adjacency.len(),
                levels.len() * levels.len()
            )));
        }
        if node_weights
            .iter()
            .chain(adjacency.iter())
            .any(|&v| v < WILDCARD)
        {
            return Err(TegError::Malformed(
                "entries must be counts (>= 0) or the wildcard -1".into(),
            ));
        }
        Ok(Self {
            levels,
            node_weights,
            adjacency,
        })
    }

    pub fn levels(&self) -> &[u32] {
        &self.levels
    }

    pub fn node_weights(&self) -> &[i64] {
        &self.node_weights
    }

    /// Row-major adjacency entries, `order() * order()` of them.
    pub fn adjacency(&self) -> &[i64] {
        &self.adjacency
    }

    /// Number of nodes.
    pub fn order(&self) -> usize {
        self.levels.len()
    }

    /// Transition count from `levels()[row]` to `levels()[col]`.
    pub fn edge(&self, row: usize, col: usize) -> i64 {
        self.adjacency[row * self.levels.len() + col]
    }

    /// True if any node weight or adjacency entry is a [`WILDCARD`].
    pub fn has_wildcards(&self) -> bool {
        self.node_weights
            .iter()
            .chain(self.adjacency.iter())
            .any(|&v| v == WILDCARD)
    }

    /// Sum of node weights (callers on wildcard-free graphs get the number
    /// of observations behind the graph).
    pub fn total_weight(&self) -> i64 {
        self.node_weights.iter().sum()
    }

    /// Sum of adjacency entries (on a wildcard-free epoch graph: number of
    /// transitions, i.e. epoch length minus one).
    pub fn total_edges(&self) -> i64 {
        self.adjacency.iter().sum()
    }

    /// Re-indexes this graph onto a larger level set.
    ///
    /// `target` must be strictly increasing and contain every level of this
    /// graph. Existing weights and transition counts keep their values at
    /// the new positions; rows, columns and weights for inserted levels are
    /// filled with [`WILDCARD`]. Resizing onto the graph's own level set is
    /// the identity.
    pub fn resize(&self, target: &[u32]) -> Result<Graph, TegError> {
        if !target.windows(2).all(|w| w[0] < w[1]) || target.is_empty() {
            return Err(TegError::UnsortedTarget);
        }
        let n = target.len();
        // Position of each of our levels inside `target`.
        let mut slot = Vec::with_capacity(self.levels.len());
        for &level in &self.levels {
            match target.binary_search(&level) {
                Ok(pos) => slot.push(pos),
                Err(_) => return Err(TegError::LevelNotInTarget(level)),
            }
        }

        let mut node_weights = vec![WILDCARD; n];
        let mut adjacency = vec![WILDCARD; n * n];
        for (i, &pos) in slot.iter().enumerate() {
            node_weights[pos] = self.node_weights[i];
        }
        let old = self.levels.len();
        for r in 0..old {
            let dst_row = slot[r] * n;
            let src_row = r * old;
            for c in 0..old {
                adjacency[dst_row + slot[c]] = self.adjacency[src_row + c];
            }
        }
        Ok(Graph {
            levels: target.to_vec(),
            node_weights,
            adjacency,
        })
    }
}

/// Builds the transition graph of one epoch of levels.
///
/// Nodes are the distinct levels (ascending), weighted by occurrence count;
/// `adjacency[i][j]` counts the consecutive pairs `(levels[i], levels[j])`.
/// A fresh epoch graph therefore has total weight `s` and total edge count
/// `s - 1` for an epoch of `s` observations.
pub fn generate_graph(epoch: &[u32]) -> Result<Graph, TegError> {
    if epoch.is_empty() {
        return Err(TegError::EmptyEpoch);
    }
    let mut levels = epoch.to_vec();
    levels.sort_unstable();
    levels.dedup();
    let n = levels.len();

    // Levels are small integers (bounded by the discretizer's bin count),
    // so a direct lookup table beats hashing.
    let max = *levels.last().unwrap() as usize;
    let mut index = vec![usize::MAX; max + 1];
    for (i, &level) in levels.iter().enumerate() {
        index[level as usize] = i;
    }

    let mut node_weights = vec![0i64; n];
    let mut adjacency = vec![0i64; n * n];
    for &obs in epoch {
        node_weights[index[obs as usize]] += 1;
    }
    for pair in epoch.windows(2) {
        adjacency[index[pair[0] as usize] * n + index[pair[1] as usize]] += 1;
    }
    Ok(Graph {
        levels,
        node_weights,
        adjacency,
    })
}

/// Slices a discrete series into consecutive epochs of `epoch_len` levels
/// and builds one graph per epoch. A trailing remainder shorter than
/// `epoch_len` is dropped; the series must cover at least one full epoch.
pub fn discover_tegs(series: &DiscreteSeries, epoch_len: usize) -> Result<Vec<Graph>, TegError> {
    if epoch_len == 0 {
        return Err(TegError::BadEpochLength(epoch_len));
    }
    if series.len() < epoch_len {
        return Err(TegError::SeriesTooShort {
            len: series.len(),
            epoch: epoch_len,
        });
    }
    series
        .levels()
        .chunks_exact(epoch_len)
        .map(generate_graph)
        .collect()
}

/// Merges two strictly increasing level sets into their sorted union.
pub(crate) fn merge_levels(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut levels = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                levels.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                levels.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                levels.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    levels.extend_from_slice(&a[i..]);
    levels.extend_from_slice(&b[j..]);
    levels
}

/// Entrywise sum of two wildcard-free graphs over the union of their levels.
///
/// Where both graphs know a node/edge the counts add; where only one does,
/// its count is copied; where neither does, the entry is `0` (node weights
/// only arise from at least one side, but edges between levels contributed
/// by different operands genuinely start at zero).
pub fn sum_graphs(a: &Graph, b: &Graph) -> Result<Graph, TegError> {
    if a.has_wildcards() || b.has_wildcards() {
        return Err(TegError::WildcardInSum);
    }
    let levels = merge_levels(&a.levels, &b.levels);
    let n = levels.len();
    // For each union position, where (if anywhere) the level sits in a and b.
    let in_a: Vec<Option<usize>> = levels
        .iter()
        .map(|l| a.levels.binary_search(l).ok())
        .collect();
    let in_b: Vec<Option<usize>> = levels
        .iter()
        .map(|l| b.levels.binary_search(l).ok())
        .collect();

    let mut node_weights = vec![0i64; n];
    for (pos, weight) in node_weights.iter_mut().enumerate() {
        if let Some(ia) = in_a[pos] {
            *weight += a.node_weights[ia];
        }
        if let Some(ib) = in_b[pos] {
            *weight += b.node_weights[ib];
        }
    }

    let mut adjacency = vec![0i64; n * n];
    let na = a.levels.len();
    let nb = b.levels.len();
    for r in 0..n {
        for c in 0..n {
            let mut e = 0i64;
            if let (Some(ra), Some(ca)) = (in_a[r], in_a[c]) {
                e += a.adjacency[ra * na + ca];
            }
            if let (Some(rb), Some(cb)) = (in_b[r], in_b[c]) {
                e += b.adjacency[rb * nb + cb];
            }
            adjacency[r * n + c] = e;
        }
    }
    Ok(Graph {
        levels,
        node_weights,
        adjacency,
    })
}

/// Folds a graph sequence into its global graph with [`sum_graphs`].
///
/// For `k` fresh epoch graphs of `s` observations each, the result carries
/// total weight `k * s` and `k * (s - 1)` transitions.
pub fn global_graph(graphs: &[Graph]) -> Result<Graph, TegError> {
    let (first, rest) = graphs.split_first().ok_or(TegError::EmptySequence)?;
    let mut acc = first.clone();
    for g in rest {
        acc = sum_graphs(&acc, g)?;
    }
    Ok(acc)
}
