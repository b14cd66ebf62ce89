//! Granger causality in two flavors sharing the same pair of nested linear
//! models: the full model regresses y_t on Q lags of both series plus an
//! intercept, the restricted model drops the x lags.

use super::DetectorResult;
use crate::error::{CcdError, Result};
use crate::numerics::{f_quantile, ols_fit};
use crate::sampling::lag_embed;
use crate::signals::SignalSet;

/// Default decision threshold for the variance-reduction statistic.
pub const DEFAULT_GC_THETA: f64 = 0.05;
/// Default significance level for the F test.
pub const DEFAULT_GC_ALPHA: f64 = 0.001;

struct NestedFits {
    rss_full: f64,
    rss_restricted: f64,
    rows: usize,
    target_scale: f64,
}

impl NestedFits {
    /// A restricted RSS at rounding-noise level means y is perfectly
    /// self-predictable and the variance ratio is meaningless.
    fn restricted_is_degenerate(&self) -> bool {
        self.rss_restricted <= 1e-24 * self.target_scale
    }
}

fn nested_fits(x: &[f64], y: &[f64], q: usize) -> Result<NestedFits> {
    if x.len() != y.len() {
        return Err(CcdError::DimensionMismatch(format!(
            "x has {} samples, y has {}",
            x.len(),
            y.len()
        )));
    }
    let t = x.len();
    // Full model has 2Q + 1 columns and T - Q rows; demand a strict surplus.
    if t < 3 * q + 2 {
        return Err(CcdError::SeriesTooShort(format!(
            "Granger with Q={q} needs at least {} samples, got {t}",
            3 * q + 2
        )));
    }
    let s = SignalSet::new(
        vec![x.to_vec(), y.to_vec()],
        1.0,
        vec!["x".into(), "y".into()],
    )?;
    let full = lag_embed(&s, 1, q, &[0, 1], false)?;
    let restricted = lag_embed(&s, 1, q, &[1], false)?;
    let fit_full = ols_fit(&full.matrix, &full.target)?;
    let fit_restricted = ols_fit(&restricted.matrix, &restricted.target)?;
    Ok(NestedFits {
        rss_full: fit_full.rss,
        rss_restricted: fit_restricted.rss,
        rows: full.matrix.n(),
        target_scale: full.target.iter().map(|v| v * v).sum(),
    })
}

/// Variance-reduction Granger test: statistic = 1 - RSS_full/RSS_restricted,
/// detected when it exceeds the user threshold `theta`.
pub fn gc_variance_reduction(x: &[f64], y: &[f64], q: usize, theta: f64) -> Result<DetectorResult> {
    let fits = nested_fits(x, y, q)?;
    let degenerate = fits.restricted_is_degenerate();
    let statistic = if degenerate {
        0.0
    } else {
        (1.0 - fits.rss_full / fits.rss_restricted).clamp(0.0, 1.0)
    };
    let mut result = DetectorResult::new(statistic, theta)
        .with("rss_full", fits.rss_full)
        .with("rss_restricted", fits.rss_restricted)
        .with("n_effective", fits.rows as f64);
    if degenerate {
        result = result.with("degenerate_restricted_rss", 1.0);
        result.decision = false;
    }
    Ok(result)
}

/// F-statistic Granger test at significance level `alpha`: the ratio of
/// variance estimators is compared against the F quantile with
/// (Q, n - 2Q - 1) degrees of freedom.
pub fn gc_f_test(x: &[f64], y: &[f64], q: usize, alpha: f64) -> Result<DetectorResult> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(CcdError::InvalidArgument(format!(
            "alpha must lie strictly in (0,1), got {alpha}"
        )));
    }
    let fits = nested_fits(x, y, q)?;
    let n = fits.rows;
    if n <= 2 * q + 1 {
        return Err(CcdError::SeriesTooShort(format!(
            "nonpositive denominator degrees of freedom: n={n}, Q={q}"
        )));
    }
    let dof1 = q;
    let dof2 = n - 2 * q - 1;
    let threshold = f_quantile(1.0 - alpha, dof1, dof2)?;

    let degenerate = fits.restricted_is_degenerate();
    let statistic = if degenerate {
        0.0
    } else if fits.rss_full <= 0.0 {
        f64::INFINITY
    } else {
        let num = (fits.rss_restricted - fits.rss_full).max(0.0) / dof1 as f64;
        let den = fits.rss_full / dof2 as f64;
        num / den
    };

    let mut result = DetectorResult::new(statistic, threshold)
        .with("rss_full", fits.rss_full)
        .with("rss_restricted", fits.rss_restricted)
        .with("n_effective", n as f64)
        .with("dof1", dof1 as f64)
        .with("dof2", dof2 as f64)
        .with("alpha", alpha);
    if degenerate {
        result = result.with("degenerate_restricted_rss", 1.0);
        result.decision = false;
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signals::{gen_ar, SplitMix64};

    fn shifted_copy(t: usize, shift: usize, seed: u64) -> (Vec<f64>, Vec<f64>) {
        let mut rng = SplitMix64::new(seed);
        let base: Vec<f64> = (0..t + shift).map(|_| rng.next_gaussian()).collect();
        let x = base[shift..].to_vec();
        let y = base[..t].to_vec();
        (x, y)
    }

    #[test]
    fn exact_lagged_copy_saturates_statistic() {
        let (x, y) = shifted_copy(1000, 1, 3);
        let r = gc_variance_reduction(&x, &y, 1, 0.05).unwrap();
        assert!(r.statistic > 0.999, "statistic {}", r.statistic);
        assert!(r.decision);
    }

    #[test]
    fn exact_lagged_copy_triggers_f_test() {
        let (x, y) = shifted_copy(1000, 1, 4);
        let r = gc_f_test(&x, &y, 1, 0.001).unwrap();
        assert!(
            r.statistic > 100.0 * r.threshold,
            "statistic {} vs threshold {}",
            r.statistic,
            r.threshold
        );
        assert!(r.decision);
    }

    #[test]
    fn independent_noise_stays_below_theta() {
        // Finite-sample bias of the variance-reduction statistic is ~Q/T.
        let mut mean = 0.0;
        let seeds = 20;
        for seed in 0..seeds {
            let x = gen_ar(&[], 1.0, 10_000, 0, 11 + seed).unwrap();
            let y = gen_ar(&[], 1.0, 10_000, 0, 1100 + seed).unwrap();
            let r = gc_variance_reduction(&x, &y, 5, 0.05).unwrap();
            assert!(!r.decision);
            mean += r.statistic;
        }
        mean /= seeds as f64;
        assert!(mean < 0.01, "mean statistic {mean}");
    }

    #[test]
    fn statistic_lies_in_unit_interval() {
        let mut rng = SplitMix64::new(9);
        for trial in 0..20 {
            let x: Vec<f64> = (0..200).map(|_| rng.next_gaussian()).collect();
            let y: Vec<f64> = (0..200).map(|_| rng.next_gaussian()).collect();
            let r = gc_variance_reduction(&x, &y, 1 + trial % 5, 0.05).unwrap();
            assert!((0.0..=1.0).contains(&r.statistic));
        }
    }

    #[test]
    fn f_statistic_is_monotone_transform_of_variance_reduction() {
        let mut rng = SplitMix64::new(17);
        for trial in 0..10 {
            let x: Vec<f64> = (0..500).map(|_| rng.next_gaussian()).collect();
            let y: Vec<f64> = (0..500).map(|_| rng.next_gaussian()).collect();
            let q = 1 + trial % 4;
            let s = gc_variance_reduction(&x, &y, q, 0.05).unwrap();
            let f = gc_f_test(&x, &y, q, 0.001).unwrap();
            let n = s.diagnostics["n_effective"];
            let expect =
                (s.statistic / (1.0 - s.statistic)) * ((n - 2.0 * q as f64 - 1.0) / q as f64);
            assert!(
                (f.statistic - expect).abs() <= 1e-9 * expect.max(1.0),
                "F {} vs transform {expect}",
                f.statistic
            );
        }
    }

    #[test]
    fn affine_rescaling_leaves_decisions_unchanged() {
        let x = gen_ar(&[0.5], 1.0, 4000, 100, 31).unwrap();
        let y = gen_ar(&[0.3], 1.0, 4000, 100, 32).unwrap();
        let xs: Vec<f64> = x.iter().map(|v| 250.0 * v - 3.0).collect();
        let ys: Vec<f64> = y.iter().map(|v| -0.004 * v + 17.0).collect();
        let a = gc_variance_reduction(&x, &y, 3, 0.05).unwrap();
        let b = gc_variance_reduction(&xs, &ys, 3, 0.05).unwrap();
        assert!((a.statistic - b.statistic).abs() < 1e-9);
        let fa = gc_f_test(&x, &y, 3, 0.001).unwrap();
        let fb = gc_f_test(&xs, &ys, 3, 0.001).unwrap();
        assert!((fa.statistic - fb.statistic).abs() < 1e-6 * fa.statistic.max(1.0));
    }

    #[test]
    fn too_short_series_rejected() {
        let x = vec![1.0; 10];
        let y = vec![2.0; 10];
        assert!(gc_variance_reduction(&x, &y, 3, 0.05).is_err());
    }

    #[test]
    fn constant_target_reports_degenerate_not_panic() {
        let x = gen_ar(&[], 1.0, 200, 0, 41).unwrap();
        let y = vec![5.0; 200];
        let r = gc_variance_reduction(&x, &y, 2, 0.05).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert!(!r.decision);
        assert!(r.diagnostics.contains_key("degenerate_restricted_rss"));
    }
}
