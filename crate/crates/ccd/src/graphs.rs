//! Window and summary graph types, aggregation between them, and
//! precision/recall/F1 scoring of predicted against true graphs.

use serde::{Deserialize, Serialize};

use crate::error::{CcdError, Result};

/// Lag-resolved directed graph: entry (i, j, q) says series i at lag q
/// influences series j now. An optional instantaneous slice holds lag-0
/// edges, which must stay acyclic and self-loop free; lagged self-edges are
/// ordinary autoregression and are legal.
///
/// The JSON form is an explicit edge list:
/// `{"d": 2, "q_max": 50, "lagged": [{"from": 0, "to": 1, "lag": 50}],
///   "instantaneous": []}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "WindowGraphDto", into = "WindowGraphDto")]
pub struct WindowGraph {
    d: usize,
    q_max: usize,
    /// Flattened d*d*q_max, indexed by ((i*d)+j)*q_max + (q-1).
    lagged: Vec<bool>,
    instantaneous: Option<Vec<bool>>,
}

#[derive(Serialize, Deserialize)]
struct LaggedEdgeDto {
    from: usize,
    to: usize,
    lag: usize,
}

#[derive(Serialize, Deserialize)]
struct InstantEdgeDto {
    from: usize,
    to: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WindowGraphDto {
    d: usize,
    q_max: usize,
    #[serde(default)]
    lagged: Vec<LaggedEdgeDto>,
    #[serde(default)]
    instantaneous: Vec<InstantEdgeDto>,
}

impl From<WindowGraph> for WindowGraphDto {
    fn from(g: WindowGraph) -> Self {
        WindowGraphDto {
            d: g.d,
            q_max: g.q_max,
            lagged: g
                .lagged_edges()
                .into_iter()
                .map(|(from, to, lag)| LaggedEdgeDto { from, to, lag })
                .collect(),
            instantaneous: (0..g.d)
                .flat_map(|from| (0..g.d).map(move |to| (from, to)))
                .filter(|&(from, to)| g.instantaneous(from, to))
                .map(|(from, to)| InstantEdgeDto { from, to })
                .collect(),
        }
    }
}

impl TryFrom<WindowGraphDto> for WindowGraph {
    type Error = CcdError;
    fn try_from(dto: WindowGraphDto) -> Result<Self> {
        let mut g = WindowGraph::new(dto.d, dto.q_max);
        for e in dto.lagged {
            if e.from >= dto.d || e.to >= dto.d || e.lag == 0 || e.lag > dto.q_max {
                return Err(CcdError::InvalidArgument(format!(
                    "lagged edge {} -> {} at lag {} outside d={}, q_max={}",
                    e.from, e.to, e.lag, dto.d, dto.q_max
                )));
            }
            g.set_lagged(e.from, e.to, e.lag, true);
        }
        for e in dto.instantaneous {
            if e.from >= dto.d || e.to >= dto.d {
                return Err(CcdError::InvalidArgument(format!(
                    "instantaneous edge {} -> {} outside d={}",
                    e.from, e.to, dto.d
                )));
            }
            g.set_instantaneous(e.from, e.to, true);
        }
        g.validate()?;
        Ok(g)
    }
}

impl WindowGraph {
    pub fn new(d: usize, q_max: usize) -> Self {
        Self {
            d,
            q_max,
            lagged: vec![false; d * d * q_max],
            instantaneous: None,
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn q_max(&self) -> usize {
        self.q_max
    }

    fn idx(&self, from: usize, to: usize, lag: usize) -> usize {
        assert!(from < self.d && to < self.d, "series index out of range");
        assert!(
            lag >= 1 && lag <= self.q_max,
            "lag {lag} outside 1..={}",
            self.q_max
        );
        (from * self.d + to) * self.q_max + (lag - 1)
    }

    pub fn set_lagged(&mut self, from: usize, to: usize, lag: usize, present: bool) {
        let i = self.idx(from, to, lag);
        self.lagged[i] = present;
    }

    pub fn lagged(&self, from: usize, to: usize, lag: usize) -> bool {
        self.lagged[self.idx(from, to, lag)]
    }

    pub fn set_instantaneous(&mut self, from: usize, to: usize, present: bool) {
        let d = self.d;
        let slice = self.instantaneous.get_or_insert_with(|| vec![false; d * d]);
        slice[from * d + to] = present;
    }

    pub fn instantaneous(&self, from: usize, to: usize) -> bool {
        self.instantaneous
            .as_ref()
            .map(|s| s[from * self.d + to])
            .unwrap_or(false)
    }

    /// All lagged edges as (from, to, lag) triples, lag ascending within pair.
    pub fn lagged_edges(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for from in 0..self.d {
            for to in 0..self.d {
                for lag in 1..=self.q_max {
                    if self.lagged(from, to, lag) {
                        out.push((from, to, lag));
                    }
                }
            }
        }
        out
    }

    /// Checks the instantaneous-slice invariants: no self-loops, acyclic.
    pub fn validate(&self) -> Result<()> {
        let Some(inst) = &self.instantaneous else {
            return Ok(());
        };
        for i in 0..self.d {
            if inst[i * self.d + i] {
                return Err(CcdError::InvalidArgument(format!(
                    "instantaneous self-loop on series {i}"
                )));
            }
        }
        // Kahn's algorithm on the instantaneous slice.
        let mut indeg = vec![0usize; self.d];
        for from in 0..self.d {
            for to in 0..self.d {
                if inst[from * self.d + to] {
                    indeg[to] += 1;
                }
            }
        }
        let mut queue: Vec<usize> = (0..self.d).filter(|&i| indeg[i] == 0).collect();
        let mut seen = 0;
        while let Some(node) = queue.pop() {
            seen += 1;
            for to in 0..self.d {
                if inst[node * self.d + to] {
                    indeg[to] -= 1;
                    if indeg[to] == 0 {
                        queue.push(to);
                    }
                }
            }
        }
        if seen != self.d {
            return Err(CcdError::InvalidArgument(
                "instantaneous slice contains a cycle".into(),
            ));
        }
        Ok(())
    }

    /// Plain-text edge list, one `i -> j [lag q]` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (from, to, lag) in self.lagged_edges() {
            out.push_str(&format!("{from} -> {to} [lag {lag}]\n"));
        }
        if let Some(inst) = &self.instantaneous {
            for from in 0..self.d {
                for to in 0..self.d {
                    if inst[from * self.d + to] {
                        out.push_str(&format!("{from} -> {to} [lag 0]\n"));
                    }
                }
            }
        }
        out
    }
}

/// Series-level directed graph: an edge states that some lagged causal
/// relationship exists between the two series.
///
/// The JSON form is a nested boolean adjacency matrix, row = source:
/// `{"d": 2, "adjacency": [[false, true], [false, false]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SummaryGraphDto", into = "SummaryGraphDto")]
pub struct SummaryGraph {
    d: usize,
    /// Flattened d*d, row = source, column = target.
    adjacency: Vec<bool>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SummaryGraphDto {
    d: usize,
    adjacency: Vec<Vec<bool>>,
}

impl From<SummaryGraph> for SummaryGraphDto {
    fn from(g: SummaryGraph) -> Self {
        SummaryGraphDto {
            d: g.d,
            adjacency: (0..g.d)
                .map(|from| (0..g.d).map(|to| g.has(from, to)).collect())
                .collect(),
        }
    }
}

impl TryFrom<SummaryGraphDto> for SummaryGraph {
    type Error = CcdError;
    fn try_from(dto: SummaryGraphDto) -> Result<Self> {
        if dto.adjacency.len() != dto.d || dto.adjacency.iter().any(|row| row.len() != dto.d) {
            return Err(CcdError::DimensionMismatch(format!(
                "adjacency matrix is not {d} x {d}",
                d = dto.d
            )));
        }
        let mut g = SummaryGraph::new(dto.d);
        for (from, row) in dto.adjacency.iter().enumerate() {
            for (to, &present) in row.iter().enumerate() {
                g.set(from, to, present);
            }
        }
        Ok(g)
    }
}

impl SummaryGraph {
    pub fn new(d: usize) -> Self {
        Self {
            d,
            adjacency: vec![false; d * d],
        }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn set(&mut self, from: usize, to: usize, present: bool) {
        assert!(from < self.d && to < self.d, "series index out of range");
        self.adjacency[from * self.d + to] = present;
    }

    pub fn has(&self, from: usize, to: usize) -> bool {
        self.adjacency[from * self.d + to]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for from in 0..self.d {
            for to in 0..self.d {
                if self.has(from, to) {
                    out.push((from, to));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().filter(|&&b| b).count()
    }

    pub fn to_edge_list(&self) -> String {
        self.edges()
            .iter()
            .map(|(f, t)| format!("{f} -> {t}\n"))
            .collect()
    }
}

/// Collapses a window graph onto series level: edge (i, j) iff any lagged or
/// instantaneous entry connects i to j. Diagonal entries are dropped.
pub fn summarize(w: &WindowGraph) -> SummaryGraph {
    let mut s = SummaryGraph::new(w.d);
    for from in 0..w.d {
        for to in 0..w.d {
            if from == to {
                continue;
            }
            let any_lag = (1..=w.q_max).any(|q| w.lagged(from, to, q));
            if any_lag || w.instantaneous(from, to) {
                s.set(from, to, true);
            }
        }
    }
    s
}

/// Confusion counts and derived metrics over off-diagonal ordered pairs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GraphMetrics {
    pub true_positives: usize,
    pub false_positives: usize,
    pub false_negatives: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl GraphMetrics {
    /// Applies the fixed zero-denominator conventions to raw counts:
    /// no predictions and nothing to find counts as perfect, missing true
    /// edges with no predictions counts as zero precision, and an empty truth
    /// gives recall 1 only when nothing was falsely predicted.
    pub fn from_counts(tp: usize, fp: usize, fn_count: usize) -> Self {
        let precision = if tp + fp > 0 {
            tp as f64 / (tp + fp) as f64
        } else if fn_count > 0 {
            0.0
        } else {
            1.0
        };
        let recall = if tp + fn_count > 0 {
            tp as f64 / (tp + fn_count) as f64
        } else if fp == 0 {
            1.0
        } else {
            0.0
        };
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        Self {
            true_positives: tp,
            false_positives: fp,
            false_negatives: fn_count,
            precision,
            recall,
            f1,
        }
    }
}

/// Scores a predicted summary graph against the truth over off-diagonal
/// ordered pairs. Self-loops never count: every simulated series is
/// autocorrelated and every detector conditions on self-history.
pub fn score(predicted: &SummaryGraph, truth: &SummaryGraph) -> Result<GraphMetrics> {
    if predicted.d != truth.d {
        return Err(CcdError::DimensionMismatch(format!(
            "predicted graph has {} series, truth has {}",
            predicted.d, truth.d
        )));
    }
    let mut tp = 0;
    let mut fp = 0;
    let mut fn_count = 0;
    for from in 0..truth.d {
        for to in 0..truth.d {
            if from == to {
                continue;
            }
            match (predicted.has(from, to), truth.has(from, to)) {
                (true, true) => tp += 1,
                (true, false) => fp += 1,
                (false, true) => fn_count += 1,
                (false, false) => {}
            }
        }
    }
    Ok(GraphMetrics::from_counts(tp, fp, fn_count))
}

/// The range of downsampling factors k for which a delayed influence lands
/// between lag 1 and lag Q after decimation: delay/Q <= k <= delay.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionWindow {
    pub k_min: f64,
    pub k_max: f64,
}

impl DetectionWindow {
    pub fn contains(&self, k: f64) -> bool {
        self.k_min <= k && k <= self.k_max
    }
}

/// Detection-window heuristic for a known propagation delay and window
/// length Q.
pub fn detection_window(delay: f64, q: usize) -> DetectionWindow {
    assert!(delay > 0.0, "delay must be positive");
    assert!(q >= 1, "window length must be at least 1");
    DetectionWindow {
        k_min: delay / q as f64,
        k_max: delay,
    }
}
