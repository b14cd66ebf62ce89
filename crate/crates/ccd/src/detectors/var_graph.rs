//! Lagged VAR window-graph learner: per-equation ridge-stabilized least
//! squares over all series' lags, thresholded into a window graph. Only the
//! lagged subproblem is learned; instantaneous edges are out of scope.

use crate::error::{CcdError, Result};
use crate::graphs::WindowGraph;
use crate::numerics::{ols_fit, DesignMatrix, Regressor};
use crate::sampling::lag_embed;
use crate::signals::SignalSet;

/// Default ridge used purely for numerical stability, not as a sparsity
/// prior.
pub const DEFAULT_VAR_RIDGE: f64 = 1e-6;
/// Default absolute coefficient threshold for declaring an edge.
pub const DEFAULT_VAR_EDGE_THRESHOLD: f64 = 0.1;

/// Per-equation lag coefficients before thresholding.
#[derive(Debug, Clone)]
pub struct VarWindowFit {
    d: usize,
    q: usize,
    /// One (coefficients, labels) pair per target series.
    equations: Vec<(Vec<f64>, Vec<Regressor>)>,
}

impl VarWindowFit {
    /// Thresholds coefficient magnitudes into a window graph.
    pub fn graph(&self, edge_threshold: f64) -> Result<WindowGraph> {
        if edge_threshold.is_nan() || edge_threshold <= 0.0 {
            return Err(CcdError::InvalidArgument(format!(
                "edge threshold must be positive, got {edge_threshold}"
            )));
        }
        let mut graph = WindowGraph::new(self.d, self.q);
        for (target, (coefs, labels)) in self.equations.iter().enumerate() {
            for (coef, label) in coefs.iter().zip(labels) {
                if let Regressor::Lag { series, lag } = label {
                    if coef.abs() > edge_threshold {
                        graph.set_lagged(*series, target, *lag, true);
                    }
                }
            }
        }
        Ok(graph)
    }

    /// Largest |coefficient| across the lags of one directed pair.
    pub fn max_abs_coefficient(&self, from: usize, to: usize) -> f64 {
        let (coefs, labels) = &self.equations[to];
        coefs
            .iter()
            .zip(labels)
            .filter(|(_, l)| matches!(l, Regressor::Lag { series, .. } if *series == from))
            .map(|(c, _)| c.abs())
            .fold(0.0, f64::max)
    }
}

/// Fits each series on lags 1..=Q of every series (ridge-stabilized when
/// ridge > 0) and returns the raw coefficients.
pub fn var_window_fit(s: &SignalSet, q: usize, ridge: f64) -> Result<VarWindowFit> {
    if !(ridge >= 0.0 && ridge.is_finite()) {
        return Err(CcdError::InvalidArgument(format!(
            "ridge must be a finite nonnegative real, got {ridge}"
        )));
    }
    let d = s.d();
    let t_len = s.len();
    if q == 0 {
        return Err(CcdError::InvalidArgument(
            "window length Q must be >= 1".into(),
        ));
    }
    if t_len < d * q + q + 2 {
        return Err(CcdError::SeriesTooShort(format!(
            "VAR graph with D={d}, Q={q} needs at least {} samples, got {t_len}",
            d * q + q + 2
        )));
    }

    let regressors: Vec<usize> = (0..d).collect();
    let mut equations = Vec::with_capacity(d);
    for target in 0..d {
        let emb = lag_embed(s, target, q, &regressors, false)?;
        let (matrix, y) = if ridge > 0.0 {
            ridge_augment(&emb.matrix, &emb.target, ridge)?
        } else {
            (emb.matrix, emb.target)
        };
        let fit = ols_fit(&matrix, &y)?;
        equations.push((fit.coefficients, matrix.labels().to_vec()));
    }
    Ok(VarWindowFit { d, q, equations })
}

/// Fits each series on lags 1..=Q of every series and keeps window-graph
/// edges whose coefficient magnitude exceeds `edge_threshold`.
pub fn var_window_graph(
    s: &SignalSet,
    q: usize,
    ridge: f64,
    edge_threshold: f64,
) -> Result<WindowGraph> {
    var_window_fit(s, q, ridge)?.graph(edge_threshold)
}

/// Appends sqrt(ridge) unit rows for every non-intercept column (and zeros to
/// the target), turning ridge regression into an ordinary least-squares
/// problem on the augmented system.
fn ridge_augment(
    matrix: &DesignMatrix,
    target: &[f64],
    ridge: f64,
) -> Result<(DesignMatrix, Vec<f64>)> {
    let n = matrix.n();
    let p = matrix.p();
    let penalized: Vec<usize> = (0..p)
        .filter(|&j| matrix.labels()[j] != Regressor::Intercept)
        .collect();
    let extra = penalized.len();
    let sqrt_ridge = ridge.sqrt();

    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(p);
    for j in 0..p {
        let mut col = Vec::with_capacity(n + extra);
        col.extend_from_slice(matrix.column(j));
        col.extend(std::iter::repeat_n(0.0, extra));
        cols.push(col);
    }
    for (row, &j) in penalized.iter().enumerate() {
        cols[j][n + row] = sqrt_ridge;
    }
    let mut y = Vec::with_capacity(n + extra);
    y.extend_from_slice(target);
    y.extend(std::iter::repeat_n(0.0, extra));
    let augmented = DesignMatrix::from_columns(cols, matrix.labels().to_vec())?;
    Ok((augmented, y))
}
