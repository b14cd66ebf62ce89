//! Order-selection helpers: information criteria for the lag window and the
//! false-nearest-neighbors test for an embedding dimension.

use serde::{Deserialize, Serialize};

use crate::error::{CcdError, Result};
use crate::numerics::{ols_fit, DesignMatrix};
use crate::sampling::lag_embed;
use crate::signals::SignalSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum OrderCriterion {
    Aic,
    Bic,
}

impl OrderCriterion {
    fn penalty(&self, n: usize) -> f64 {
        match self {
            OrderCriterion::Aic => 2.0,
            OrderCriterion::Bic => (n as f64).ln(),
        }
    }
}

/// Selected window length plus the full criterion curve (index 0 is Q = 1).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrderSelection {
    pub selected: usize,
    pub scores: Vec<f64>,
}

/// Picks the window length in 1..=q_max minimizing
/// n*ln(RSS/n) + penalty * #params for the self-plus-cross lag model of
/// `target`, with every candidate fitted on the common sample window the
/// largest model leaves available.
pub fn select_order_ic(
    s: &SignalSet,
    target: usize,
    q_max: usize,
    criterion: OrderCriterion,
) -> Result<OrderSelection> {
    let t_len = s.len();
    if q_max == 0 {
        return Err(CcdError::InvalidArgument("q_max must be >= 1".into()));
    }
    if q_max * 4 >= t_len {
        return Err(CcdError::SeriesTooShort(format!(
            "q_max={q_max} too large for {t_len} samples (need q_max < T/4)"
        )));
    }
    if target >= s.d() {
        return Err(CcdError::InvalidArgument(
            "target series out of range".into(),
        ));
    }
    let regressors: Vec<usize> = (0..s.d()).collect();
    let n_common = t_len - q_max;

    let mut best_q = 1;
    let mut best_ic = f64::INFINITY;
    let mut scores = Vec::with_capacity(q_max);
    for q in 1..=q_max {
        let emb = lag_embed(s, target, q, &regressors, false)?;
        // Drop the leading rows so every candidate predicts the same targets.
        let skip = emb.matrix.n() - n_common;
        let cols: Vec<Vec<f64>> = (0..emb.matrix.p())
            .map(|j| emb.matrix.column(j)[skip..].to_vec())
            .collect();
        let matrix = DesignMatrix::from_columns(cols, emb.matrix.labels().to_vec())?;
        let y = &emb.target[skip..];
        let fit = ols_fit(&matrix, y)?;
        let p = matrix.p();
        let rss = fit.rss.max(f64::MIN_POSITIVE);
        let ic =
            n_common as f64 * (rss / n_common as f64).ln() + criterion.penalty(n_common) * p as f64;
        scores.push(ic);
        if ic < best_ic {
            best_ic = ic;
            best_q = q;
        }
    }
    Ok(OrderSelection {
        selected: best_q,
        scores,
    })
}

/// False-nearest-neighbors curve and the selected embedding dimension.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FnnResult {
    pub selected: usize,
    /// FNN fraction for E = 1..=E_max.
    pub fractions: Vec<f64>,
    /// False when no dimension got the fraction below the cutoff and
    /// `selected` is just E_max.
    pub resolved: bool,
}

/// Fraction cutoff below which an embedding dimension counts as sufficient.
pub const FNN_CUTOFF: f64 = 0.01;

/// False nearest neighbors with delay 1: for each E, the fraction of
/// nearest-neighbor pairs whose extra coordinate at E + 1 separates them by
/// more than `rtol` relative to their E-dimensional distance or by more than
/// `atol` standard deviations absolutely.
pub fn false_nearest_neighbors(x: &[f64], e_max: usize, rtol: f64, atol: f64) -> Result<FnnResult> {
    if e_max == 0 {
        return Err(CcdError::InvalidArgument("E_max must be >= 1".into()));
    }
    if x.len() < e_max + 2 {
        return Err(CcdError::SeriesTooShort(format!(
            "series of length {} too short for E_max={e_max}",
            x.len()
        )));
    }
    let sigma = crate::numerics::variance(x).sqrt();
    if sigma == 0.0 {
        return Err(CcdError::Degenerate(
            "constant series has no neighbor structure".into(),
        ));
    }

    let mut fractions = Vec::with_capacity(e_max);
    let mut selected = None;
    for e in 1..=e_max {
        // Points t = e..T-1 embed as (x[t], x[t-1], .., x[t-e+1]) and expose
        // x[t-e] as the next coordinate.
        let times: Vec<usize> = (e..x.len()).collect();
        let mut false_count = 0usize;
        let mut total = 0usize;
        for (a_pos, &t) in times.iter().enumerate() {
            let mut best_d2 = f64::INFINITY;
            let mut best: Option<usize> = None;
            for (b_pos, &u) in times.iter().enumerate() {
                if b_pos == a_pos {
                    continue;
                }
                let mut d2 = 0.0;
                for j in 0..e {
                    let diff = x[t - j] - x[u - j];
                    d2 += diff * diff;
                }
                if d2 < best_d2 {
                    best_d2 = d2;
                    best = Some(u);
                }
            }
            let Some(u) = best else { continue };
            let r = best_d2.sqrt();
            let delta = (x[t - e] - x[u - e]).abs();
            let relative_blowup = if r > 0.0 {
                delta / r > rtol
            } else {
                delta > 0.0
            };
            if relative_blowup || delta > atol * sigma {
                false_count += 1;
            }
            total += 1;
        }
        let fraction = false_count as f64 / total.max(1) as f64;
        fractions.push(fraction);
        if selected.is_none() && fraction < FNN_CUTOFF {
            selected = Some(e);
        }
    }
    Ok(FnnResult {
        selected: selected.unwrap_or(e_max),
        resolved: selected.is_some(),
        fractions,
    })
}
