//! Binned transfer entropy with a circular-shift surrogate threshold.
//!
//! Both series are discretized by equal-count (quantile) binning, so the
//! estimate depends only on ranks and survives any strictly monotone
//! rescaling. The conditioning set is one self-lag plus one cross-lag at the
//! probe delay Q: TE = H(y_t | y_{t-1}) - H(y_t | y_{t-1}, x_{t-Q}). Full
//! Q-lag histograms would need 2^(2Q+1) cells and are infeasible at the
//! window lengths this benchmark sweeps.

use super::DetectorResult;
use crate::error::{CcdError, Result};
use crate::numerics::shannon_entropy;
use crate::signals::{substream, SplitMix64};

pub const DEFAULT_TE_BINS: usize = 2;
pub const DEFAULT_TE_SURROGATES: usize = 19;

/// Equal-count (quantile) binning into `bins` symbols. Ties are broken by
/// original position, so the symbols are a pure function of the ranks.
pub fn quantile_bins(series: &[f64], bins: usize) -> Result<Vec<u16>> {
    if !(2..=64).contains(&bins) {
        return Err(CcdError::InvalidArgument(format!(
            "bins must lie in 2..=64, got {bins}"
        )));
    }
    let n = series.len();
    if n < bins {
        return Err(CcdError::SeriesTooShort(format!(
            "{n} samples cannot fill {bins} bins"
        )));
    }
    if series.iter().any(|v| !v.is_finite()) {
        return Err(CcdError::InvalidArgument(
            "series contains a non-finite value".into(),
        ));
    }
    let first = series[0];
    if series.iter().all(|&v| v == first) {
        return Err(CcdError::Degenerate(
            "constant series cannot be quantile-binned".into(),
        ));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| series[a].partial_cmp(&series[b]).unwrap().then(a.cmp(&b)));
    let mut symbols = vec![0u16; n];
    for (rank, &idx) in order.iter().enumerate() {
        symbols[idx] = ((rank * bins) / n) as u16;
    }
    Ok(symbols)
}

/// Plug-in conditional mutual information I(y_t ; x_{t-q} | y_{t-1}) in bits
/// from pre-binned symbol streams.
fn te_from_symbols(bx: &[u16], by: &[u16], q: usize, bins: usize) -> Result<f64> {
    let t_len = bx.len();
    let b = bins;
    let mut joint = vec![0u64; b * b * b]; // (y_t, y_{t-1}, x_{t-q})
    for t in q..t_len {
        let yt = by[t] as usize;
        let y1 = by[t - 1] as usize;
        let xq = bx[t - q] as usize;
        joint[(yt * b + y1) * b + xq] += 1;
    }
    let mut h_y1 = vec![0u64; b];
    let mut h_yt_y1 = vec![0u64; b * b];
    let mut h_y1_xq = vec![0u64; b * b];
    for yt in 0..b {
        for y1 in 0..b {
            for xq in 0..b {
                let c = joint[(yt * b + y1) * b + xq];
                h_y1[y1] += c;
                h_yt_y1[yt * b + y1] += c;
                h_y1_xq[y1 * b + xq] += c;
            }
        }
    }
    let te = shannon_entropy(&h_yt_y1)? + shannon_entropy(&h_y1_xq)?
        - shannon_entropy(&h_y1)?
        - shannon_entropy(&joint)?;
    Ok(te.max(0.0))
}

/// Transfer entropy detector. The threshold is the maximum TE over
/// `n_surrogates` circular shifts of x (shifts preserve autocorrelation), an
/// exact-level one-sided test at 1/(n_surrogates + 1).
pub fn transfer_entropy(
    x: &[f64],
    y: &[f64],
    q: usize,
    bins: usize,
    n_surrogates: usize,
    seed: u64,
) -> Result<DetectorResult> {
    if x.len() != y.len() {
        return Err(CcdError::DimensionMismatch(format!(
            "x has {} samples, y has {}",
            x.len(),
            y.len()
        )));
    }
    if q == 0 {
        return Err(CcdError::InvalidArgument(
            "probe delay Q must be >= 1".into(),
        ));
    }
    let t_len = x.len();
    if t_len <= q + 2 {
        return Err(CcdError::SeriesTooShort(format!(
            "transfer entropy with Q={q} needs more than {} samples, got {t_len}",
            q + 2
        )));
    }
    let bx = quantile_bins(x, bins)?;
    let by = quantile_bins(y, bins)?;
    let te = te_from_symbols(&bx, &by, q, bins)?;

    let mut rng = SplitMix64::new(substream(seed, 0x7e));
    let mut surrogate_max = 0.0_f64;
    let mut shifted = vec![0u16; t_len];
    for _ in 0..n_surrogates {
        let shift = 1 + rng.next_below((t_len - 1) as u64) as usize;
        for (t, slot) in shifted.iter_mut().enumerate() {
            *slot = bx[(t + shift) % t_len];
        }
        surrogate_max = surrogate_max.max(te_from_symbols(&shifted, &by, q, bins)?);
    }

    // H(y_t | y_{t-1}), the ceiling TE can reach; exposed for diagnostics.
    let h_cond = {
        let b = bins;
        let mut h_y1 = vec![0u64; b];
        let mut h_yt_y1 = vec![0u64; b * b];
        for t in q..t_len {
            h_y1[by[t - 1] as usize] += 1;
            h_yt_y1[by[t] as usize * b + by[t - 1] as usize] += 1;
        }
        shannon_entropy(&h_yt_y1)? - shannon_entropy(&h_y1)?
    };

    Ok(DetectorResult::new(te, surrogate_max)
        .with("n_effective", (t_len - q) as f64)
        .with("bins", bins as f64)
        .with("n_surrogates", n_surrogates as f64)
        .with("surrogate_quantile", surrogate_max)
        .with("h_target_given_past", h_cond))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signals::{gen_ar, SplitMix64};

    #[test]
    fn binning_balances_counts() {
        let xs: Vec<f64> = (0..10).map(|i| (i * 7 % 10) as f64).collect();
        let b = quantile_bins(&xs, 2).unwrap();
        assert_eq!(b.iter().filter(|&&v| v == 0).count(), 5);
        assert_eq!(b.iter().filter(|&&v| v == 1).count(), 5);
    }

    #[test]
    fn binning_is_rank_based() {
        let xs: Vec<f64> = vec![0.1, 5.0, -2.0, 3.3, 0.2, 9.0];
        let exp: Vec<f64> = xs.iter().map(|v| v.exp()).collect();
        assert_eq!(
            quantile_bins(&xs, 3).unwrap(),
            quantile_bins(&exp, 3).unwrap()
        );
    }

    #[test]
    fn binning_rejects_constant() {
        assert!(quantile_bins(&[2.0; 50], 2).is_err());
    }

    #[test]
    fn te_nonnegative_on_noise() {
        let x = gen_ar(&[], 1.0, 2000, 0, 1).unwrap();
        let y = gen_ar(&[], 1.0, 2000, 0, 2).unwrap();
        let r = transfer_entropy(&x, &y, 3, 2, 19, 7).unwrap();
        assert!(r.statistic >= 0.0);
    }

    #[test]
    fn independent_series_usually_not_detected() {
        let mut hits = 0;
        for seed in 0..40 {
            let x = gen_ar(&[], 1.0, 3000, 0, 100 + seed).unwrap();
            let y = gen_ar(&[], 1.0, 3000, 0, 200 + seed).unwrap();
            let r = transfer_entropy(&x, &y, 5, 2, 19, seed).unwrap();
            if r.decision {
                hits += 1;
            }
        }
        // Expected hit rate 1/20; allow a generous margin.
        assert!(hits <= 6, "false alarms: {hits}/40");
    }

    #[test]
    fn deterministic_copy_reaches_one_bit() {
        // y_t = x_{t-Q} exactly, x white noise: the conditioning variable
        // fully determines y_t, so TE approaches H(y_t | y_{t-1}) ~ 1 bit.
        let q = 7;
        let t = 4000;
        let mut rng = SplitMix64::new(5);
        let base: Vec<f64> = (0..t + q).map(|_| rng.next_gaussian()).collect();
        let x = base[q..].to_vec();
        let y = base[..t].to_vec();
        let r = transfer_entropy(&x, &y, q, 2, 19, 3).unwrap();
        assert!(r.decision, "TE {} threshold {}", r.statistic, r.threshold);
        assert!(
            (r.statistic - r.diagnostics["h_target_given_past"]).abs() < 0.05,
            "TE {} vs ceiling {}",
            r.statistic,
            r.diagnostics["h_target_given_past"]
        );
        assert!(r.statistic > 0.9, "TE {}", r.statistic);
    }

    #[test]
    fn monotone_transform_leaves_te_unchanged() {
        let x = gen_ar(&[0.6], 1.0, 3000, 100, 8).unwrap();
        let y = gen_ar(&[0.4], 1.0, 3000, 100, 9).unwrap();
        let xe: Vec<f64> = x.iter().map(|v| v.exp()).collect();
        let a = transfer_entropy(&x, &y, 4, 2, 19, 11).unwrap();
        let b = transfer_entropy(&xe, &y, 4, 2, 19, 11).unwrap();
        assert!((a.statistic - b.statistic).abs() < 1e-12);
        assert_eq!(a.decision, b.decision);
    }

    #[test]
    fn constant_series_rejected() {
        let x = vec![1.0; 100];
        let y = gen_ar(&[], 1.0, 100, 0, 1).unwrap();
        assert!(transfer_entropy(&x, &y, 2, 2, 19, 1).is_err());
    }
}
