//! Simulation of the benchmark's bivariate data-generating process: a smooth
//! stochastic source `x`, a delayed FIR coupling into `y`, and additive
//! autoregressive noise mixed at a fixed variance ratio, with full ground
//! truth attached.

mod rng;

pub use rng::{substream, SplitMix64};

use serde::{Deserialize, Serialize};

use crate::error::{CcdError, Result};
use crate::graphs::{summarize, SummaryGraph, WindowGraph};
use crate::numerics::variance;

/// Tap magnitudes below this never count as ground-truth lags.
pub const TAP_EPSILON: f64 = 1e-12;

/// D time series of common length at a common sampling period.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignalSet {
    /// One vector per series.
    pub data: Vec<Vec<f64>>,
    /// Sampling period tau; the base processes use 1.
    pub sampling_period: f64,
    pub labels: Vec<String>,
}

impl SignalSet {
    pub fn new(data: Vec<Vec<f64>>, sampling_period: f64, labels: Vec<String>) -> Result<Self> {
        if data.is_empty() {
            return Err(CcdError::InvalidArgument("need at least one series".into()));
        }
        let t = data[0].len();
        if t == 0 {
            return Err(CcdError::InvalidArgument("series are empty".into()));
        }
        if labels.len() != data.len() {
            return Err(CcdError::DimensionMismatch(format!(
                "{} series but {} labels",
                data.len(),
                labels.len()
            )));
        }
        for (i, s) in data.iter().enumerate() {
            if s.len() != t {
                return Err(CcdError::DimensionMismatch(format!(
                    "series {i} has length {}, expected {t}",
                    s.len()
                )));
            }
            if s.iter().any(|v| !v.is_finite()) {
                return Err(CcdError::InvalidArgument(format!(
                    "series {i} contains a non-finite value"
                )));
            }
        }
        if !(sampling_period > 0.0 && sampling_period.is_finite()) {
            return Err(CcdError::InvalidArgument(format!(
                "sampling period must be positive, got {sampling_period}"
            )));
        }
        Ok(Self {
            data,
            sampling_period,
            labels,
        })
    }

    pub fn d(&self) -> usize {
        self.data.len()
    }

    pub fn len(&self) -> usize {
        self.data[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn series(&self, i: usize) -> &[f64] {
        &self.data[i]
    }
}

/// Full recipe for one simulated pair.
///
/// The default coupled recipe uses a stable AR(2) source with a repeated
/// characteristic root at 0.8 (a smooth low-pass process), a 5-tap symmetric
/// coupling filter with group delay 50, AR(1) noise with coefficient 0.9 on
/// the output, and an 80/20 signal-to-noise variance split.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DgpSpec {
    /// AR coefficients of the source process x.
    #[serde(default = "default_source_ar")]
    pub source_ar: Vec<f64>,
    #[serde(default = "default_innovation_std")]
    pub innovation_std: f64,
    /// FIR taps coupling x into y; empty means the independent scenario.
    #[serde(default = "default_coupling_taps")]
    pub coupling_taps: Vec<f64>,
    /// AR coefficients of the noise added to y.
    #[serde(default = "default_noise_ar")]
    pub noise_ar: Vec<f64>,
    /// Fraction of Var(y) attributable to the filtered-x component.
    #[serde(default = "default_snr_ratio")]
    pub snr_ratio: f64,
    #[serde(default = "default_n_samples")]
    pub n_samples: usize,
    #[serde(default = "default_burn_in")]
    pub burn_in: usize,
    #[serde(default)]
    pub seed: u64,
}

fn default_source_ar() -> Vec<f64> {
    vec![1.6, -0.64]
}
fn default_innovation_std() -> f64 {
    1.0
}
fn default_coupling_taps() -> Vec<f64> {
    design_delay_fir(50, 2).expect("default coupling filter")
}
fn default_noise_ar() -> Vec<f64> {
    vec![0.9]
}
fn default_snr_ratio() -> f64 {
    0.8
}
fn default_n_samples() -> usize {
    20_000
}
fn default_burn_in() -> usize {
    1_000
}

impl DgpSpec {
    /// The coupled benchmark recipe (x drives y through a delay-50 filter).
    pub fn default_coupled(seed: u64) -> Self {
        Self {
            source_ar: default_source_ar(),
            innovation_std: default_innovation_std(),
            coupling_taps: default_coupling_taps(),
            noise_ar: default_noise_ar(),
            snr_ratio: default_snr_ratio(),
            n_samples: default_n_samples(),
            burn_in: default_burn_in(),
            seed,
        }
    }

    /// The independent benchmark recipe (no coupling; y is pure AR noise).
    pub fn default_independent(seed: u64) -> Self {
        Self {
            coupling_taps: Vec::new(),
            ..Self::default_coupled(seed)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.snr_ratio > 0.0 && self.snr_ratio <= 1.0) {
            return Err(CcdError::InvalidArgument(format!(
                "snr_ratio must lie in (0,1], got {}",
                self.snr_ratio
            )));
        }
        if !(self.innovation_std > 0.0 && self.innovation_std.is_finite()) {
            return Err(CcdError::InvalidArgument(format!(
                "innovation_std must be positive, got {}",
                self.innovation_std
            )));
        }
        if self.n_samples == 0 {
            return Err(CcdError::InvalidArgument(
                "n_samples must be positive".into(),
            ));
        }
        if !ar_is_stable(&self.source_ar) {
            return Err(CcdError::UnstableAr(format!(
                "source_ar {:?}",
                self.source_ar
            )));
        }
        if !ar_is_stable(&self.noise_ar) {
            return Err(CcdError::UnstableAr(format!(
                "noise_ar {:?}",
                self.noise_ar
            )));
        }
        if self.coupling_taps.iter().any(|v| !v.is_finite()) {
            return Err(CcdError::InvalidArgument(
                "coupling_taps contain a non-finite value".into(),
            ));
        }
        Ok(())
    }
}

/// True graphs and delay for a simulated pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub summary: SummaryGraph,
    pub window: WindowGraph,
    /// Group delay of the coupling taps, in base samples.
    pub effective_delay: f64,
}

/// Stability test for an AR polynomial via the Schur-Cohn reduction: all
/// characteristic roots strictly inside the unit circle.
pub fn ar_is_stable(coeffs: &[f64]) -> bool {
    if coeffs.iter().any(|v| !v.is_finite()) {
        return false;
    }
    // Characteristic polynomial z^p - a1 z^(p-1) - ... - ap, descending powers.
    let mut c: Vec<f64> = std::iter::once(1.0)
        .chain(coeffs.iter().map(|a| -a))
        .collect();
    while c.len() > 1 {
        let n = c.len() - 1;
        if c[n].abs() >= c[0].abs() {
            return false;
        }
        let mut next = vec![0.0; n];
        for i in 0..n {
            next[i] = c[0] * c[i] - c[n] * c[n - i];
        }
        // Rescale to keep the reduction away from overflow/underflow.
        let scale = next.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if scale == 0.0 {
            return false;
        }
        for v in &mut next {
            *v /= scale;
        }
        c = next;
    }
    true
}

/// Simulates an AR process driven by Gaussian innovations, discarding
/// `burn_in` samples. Empty coefficients give white noise.
pub fn gen_ar(
    coeffs: &[f64],
    innovation_std: f64,
    t: usize,
    burn_in: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    if !ar_is_stable(coeffs) {
        return Err(CcdError::UnstableAr(format!("{coeffs:?}")));
    }
    if !(innovation_std > 0.0 && innovation_std.is_finite()) {
        return Err(CcdError::InvalidArgument(format!(
            "innovation_std must be positive, got {innovation_std}"
        )));
    }
    let mut rng = SplitMix64::new(seed);
    let total = burn_in + t;
    let mut x = vec![0.0_f64; total];
    for i in 0..total {
        let mut v = innovation_std * rng.next_gaussian();
        for (j, &a) in coeffs.iter().enumerate() {
            if i > j {
                v += a * x[i - 1 - j];
            }
        }
        x[i] = v;
    }
    x.drain(..burn_in);
    Ok(x)
}

/// Unit-DC-gain FIR whose group delay at DC equals `delay`: a symmetric
/// raised-cosine bump of half-width `half_width` centered on tap `delay`.
pub fn design_delay_fir(delay: usize, half_width: usize) -> Result<Vec<f64>> {
    if delay == 0 || delay <= half_width {
        return Err(CcdError::InvalidArgument(format!(
            "need delay > half_width >= 0, got delay={delay}, half_width={half_width}"
        )));
    }
    let mut taps = vec![0.0_f64; delay + half_width + 1];
    if half_width == 0 {
        taps[delay] = 1.0;
        return Ok(taps);
    }
    let width = 2 * half_width;
    let mut sum = 0.0;
    for j in 0..=width {
        let w = 0.54 - 0.46 * (2.0 * std::f64::consts::PI * j as f64 / width as f64).cos();
        taps[delay - half_width + j] = w;
        sum += w;
    }
    for v in &mut taps {
        *v /= sum;
    }
    Ok(taps)
}

/// Group delay at DC: sum(m * h[m]) / sum(h[m]).
pub fn group_delay(taps: &[f64]) -> f64 {
    let total: f64 = taps.iter().sum();
    if total.abs() < TAP_EPSILON {
        return 0.0;
    }
    taps.iter()
        .enumerate()
        .map(|(m, &h)| m as f64 * h)
        .sum::<f64>()
        / total
}

/// Causal FIR filter with zero-padded history: y[t] = sum_m taps[m] x[t-m].
pub fn fir_filter(taps: &[f64], x: &[f64]) -> Result<Vec<f64>> {
    if taps.is_empty() {
        return Err(CcdError::InvalidArgument("empty filter taps".into()));
    }
    let mut y = vec![0.0_f64; x.len()];
    for (t, out) in y.iter_mut().enumerate() {
        let m_max = taps.len().min(t + 1);
        let mut acc = 0.0;
        for m in 0..m_max {
            acc += taps[m] * x[t - m];
        }
        *out = acc;
    }
    Ok(y)
}

/// Power-preserving mix of a signal and a noise component.
#[derive(Debug, Clone)]
pub struct MixResult {
    pub output: Vec<f64>,
    pub signal_scale: f64,
    pub noise_scale: f64,
}

/// Scales and sums the two components so the signal part contributes the
/// `ratio` fraction of the output variance while the output keeps the
/// signal's variance. The scales are chosen from the realized sample
/// variances, so the split holds empirically rather than nominally.
pub fn mix_snr(signal_part: &[f64], noise_part: &[f64], ratio: f64) -> Result<MixResult> {
    if signal_part.len() != noise_part.len() {
        return Err(CcdError::DimensionMismatch(format!(
            "signal has {} samples, noise has {}",
            signal_part.len(),
            noise_part.len()
        )));
    }
    if !(ratio > 0.0 && ratio <= 1.0) {
        return Err(CcdError::InvalidArgument(format!(
            "snr ratio must lie in (0,1], got {ratio}"
        )));
    }
    let signal_scale = ratio.sqrt();
    let noise_scale = if ratio == 1.0 {
        0.0
    } else {
        let v_s = variance(signal_part);
        let v_n = variance(noise_part);
        if v_n <= 0.0 {
            return Err(CcdError::Degenerate(
                "noise component has zero variance but ratio < 1".into(),
            ));
        }
        ((1.0 - ratio) * v_s / v_n).sqrt()
    };
    let output = signal_part
        .iter()
        .zip(noise_part.iter())
        .map(|(&s, &n)| signal_scale * s + noise_scale * n)
        .collect();
    Ok(MixResult {
        output,
        signal_scale,
        noise_scale,
    })
}

/// Simulates the bivariate pair described by `spec` and returns it together
/// with its ground truth. Ground truth depends only on the recipe, never on
/// the seed.
pub fn generate_pair(spec: &DgpSpec) -> Result<(SignalSet, GroundTruth)> {
    spec.validate()?;
    let t = spec.n_samples;
    let x = gen_ar(
        &spec.source_ar,
        spec.innovation_std,
        t,
        spec.burn_in,
        substream(spec.seed, 0),
    )?;
    let noise = gen_ar(
        &spec.noise_ar,
        spec.innovation_std,
        t,
        spec.burn_in,
        substream(spec.seed, 1),
    )?;

    let active_taps: Vec<usize> = spec
        .coupling_taps
        .iter()
        .enumerate()
        .filter(|(_, &h)| h.abs() > TAP_EPSILON)
        .map(|(m, _)| m)
        .collect();

    let (y, effective_delay) = if active_taps.is_empty() {
        (noise, 0.0)
    } else {
        let filtered = fir_filter(&spec.coupling_taps, &x)?;
        let mixed = mix_snr(&filtered, &noise, spec.snr_ratio)?;
        (mixed.output, group_delay(&spec.coupling_taps))
    };

    let q_max = active_taps.iter().copied().max().unwrap_or(0);
    let mut window = WindowGraph::new(2, q_max);
    for &m in &active_taps {
        if m == 0 {
            window.set_instantaneous(0, 1, true);
        } else {
            window.set_lagged(0, 1, m, true);
        }
    }
    let summary = summarize(&window);

    let signals = SignalSet::new(vec![x, y], 1.0, vec!["x".into(), "y".into()])?;
    Ok((
        signals,
        GroundTruth {
            summary,
            window,
            effective_delay,
        },
    ))
}

/// Sample cross-correlation r[l] = corr(x[t-l], y[t]) for l = 0..=max_lag.
pub fn cross_correlation(x: &[f64], y: &[f64], max_lag: usize) -> Vec<f64> {
    assert_eq!(x.len(), y.len(), "series must have equal length");
    let n = x.len();
    let mut out = Vec::with_capacity(max_lag + 1);
    for lag in 0..=max_lag {
        if lag >= n {
            out.push(0.0);
            continue;
        }
        let xs = &x[..n - lag];
        let ys = &y[lag..];
        out.push(crate::numerics::pearson(xs, ys));
    }
    out
}
