//! Sampling-rate manipulation (decimation with an optional anti-alias
//! pre-filter) and the lag embedding used by every detector.

use crate::error::{CcdError, Result};
use crate::numerics::{DesignMatrix, Regressor};
use crate::signals::SignalSet;

/// Decimation settings: keep every k-th sample starting at `phase`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecimationConfig {
    pub k: usize,
    /// Apply a zero-phase low-pass with cutoff pi/k before decimating.
    pub anti_alias: bool,
    pub phase: usize,
}

impl DecimationConfig {
    pub fn new(k: usize, anti_alias: bool, phase: usize) -> Result<Self> {
        if k == 0 {
            return Err(CcdError::InvalidArgument("k must be at least 1".into()));
        }
        if phase >= k {
            return Err(CcdError::InvalidArgument(format!(
                "phase must lie in [0, k), got phase={phase}, k={k}"
            )));
        }
        Ok(Self {
            k,
            anti_alias,
            phase,
        })
    }

    pub fn plain(k: usize) -> Result<Self> {
        Self::new(k, false, 0)
    }
}

/// Windowed-sinc low-pass with cutoff pi/k (Hamming window, odd length
/// 8k + 1, unit DC gain). The half-length shrinks when the signal is shorter
/// than the nominal design.
fn design_anti_alias(k: usize, max_half: usize) -> Vec<f64> {
    let half = (4 * k).min(max_half).max(1);
    let len = 2 * half + 1;
    let cutoff = std::f64::consts::PI / k as f64;
    let mut taps = vec![0.0_f64; len];
    let mut sum = 0.0;
    for (m, tap) in taps.iter_mut().enumerate() {
        let n = m as f64 - half as f64;
        let ideal = if n == 0.0 {
            cutoff / std::f64::consts::PI
        } else {
            (cutoff * n).sin() / (std::f64::consts::PI * n)
        };
        let window = 0.54 - 0.46 * (2.0 * std::f64::consts::PI * m as f64 / (len - 1) as f64).cos();
        *tap = ideal * window;
        sum += *tap;
    }
    for tap in &mut taps {
        *tap /= sum;
    }
    taps
}

/// Forward-backward FIR filtering with reflect padding: zero phase, so the
/// delay structure the detectors probe is not shifted.
fn filtfilt(taps: &[f64], x: &[f64]) -> Vec<f64> {
    let half = taps.len() / 2;
    let n = x.len();
    let pad = half.min(n - 1);

    // Reflect-pad: x[pad], .., x[1] | x[0..n] | x[n-2], .., x[n-1-pad]
    let mut padded = Vec::with_capacity(n + 2 * pad);
    for i in (1..=pad).rev() {
        padded.push(x[i]);
    }
    padded.extend_from_slice(x);
    for i in 2..=pad + 1 {
        padded.push(x[n - i]);
    }

    let forward = convolve_causal(taps, &padded);
    let mut reversed: Vec<f64> = forward.into_iter().rev().collect();
    reversed = convolve_causal(taps, &reversed);
    reversed.reverse();

    // Each causal pass delays by `half`; one forward and one backward pass
    // cancel, leaving the original alignment inside the padding.
    reversed[pad..pad + n].to_vec()
}

fn convolve_causal(taps: &[f64], x: &[f64]) -> Vec<f64> {
    let mut y = vec![0.0_f64; x.len()];
    for (t, out) in y.iter_mut().enumerate() {
        let m_max = taps.len().min(t + 1);
        let mut acc = 0.0;
        for m in 0..m_max {
            acc += taps[m] * x[t - m];
        }
        *out = acc;
    }
    y
}

/// Keeps samples at indices phase, phase + k, phase + 2k, ... and scales the
/// sampling period by k. With `anti_alias` set, a zero-phase low-pass with
/// cutoff pi/k runs first; k = 1 always returns the input bit-identically.
pub fn downsample(s: &SignalSet, cfg: &DecimationConfig) -> Result<SignalSet> {
    if cfg.k == 0 || cfg.phase >= cfg.k {
        return Err(CcdError::InvalidArgument(format!(
            "bad decimation config: k={}, phase={}",
            cfg.k, cfg.phase
        )));
    }
    if cfg.k > s.len() {
        return Err(CcdError::SeriesTooShort(format!(
            "k={} exceeds series length {}",
            cfg.k,
            s.len()
        )));
    }
    if cfg.k == 1 {
        return Ok(s.clone());
    }
    let taps = if cfg.anti_alias {
        Some(design_anti_alias(cfg.k, s.len().saturating_sub(1)))
    } else {
        None
    };
    let data: Vec<Vec<f64>> = s
        .data
        .iter()
        .map(|series| {
            let filtered;
            let src: &[f64] = match &taps {
                Some(t) => {
                    filtered = filtfilt(t, series);
                    &filtered
                }
                None => series,
            };
            src.iter().skip(cfg.phase).step_by(cfg.k).copied().collect()
        })
        .collect();
    SignalSet::new(data, s.sampling_period * cfg.k as f64, s.labels.clone())
}

/// A lag embedding: design matrix of past values plus the contemporaneous
/// target vector.
#[derive(Debug, Clone)]
pub struct Embedding {
    pub matrix: DesignMatrix,
    pub target: Vec<f64>,
    pub q: usize,
}

/// Builds the regression problem "target series now, explained by lags
/// 1..=Q of the regressor series" over rows t = 0..T-Q-1 (target time t+Q).
///
/// Columns are intercept first, then per regressor series its lags in
/// ascending order (lag 0 only when `include_contemporaneous` is set). No
/// column ever references a value at or after the target's time.
pub fn lag_embed(
    s: &SignalSet,
    target_series: usize,
    q: usize,
    regressor_series: &[usize],
    include_contemporaneous: bool,
) -> Result<Embedding> {
    let t_len = s.len();
    if q == 0 {
        return Err(CcdError::InvalidArgument(
            "window length Q must be >= 1".into(),
        ));
    }
    if q >= t_len {
        return Err(CcdError::SeriesTooShort(format!(
            "window Q={q} needs more than {t_len} samples"
        )));
    }
    if target_series >= s.d() || regressor_series.iter().any(|&i| i >= s.d()) {
        return Err(CcdError::InvalidArgument(
            "series index out of range".into(),
        ));
    }
    let rows = t_len - q;
    let target: Vec<f64> = (0..rows).map(|t| s.series(target_series)[t + q]).collect();

    let mut cols: Vec<Vec<f64>> = Vec::new();
    let mut labels: Vec<Regressor> = Vec::new();
    cols.push(vec![1.0; rows]);
    labels.push(Regressor::Intercept);
    for &series in regressor_series {
        let data = s.series(series);
        let first_lag = if include_contemporaneous { 0 } else { 1 };
        for lag in first_lag..=q {
            cols.push((0..rows).map(|t| data[t + q - lag]).collect());
            labels.push(Regressor::Lag { series, lag });
        }
    }
    let matrix = DesignMatrix::from_columns(cols, labels)?;
    Ok(Embedding { matrix, target, q })
}
