//! Shared oracles for the integration suites. Everything here recomputes
//! expected values through an independent route (normal equations, direct
//! quadrature, planted models) rather than through the library's own
//! implementation path.

// Each test binary includes this module but uses only part of it.
#![allow(dead_code)]
#![allow(clippy::too_many_arguments)]

use std::sync::{Mutex, MutexGuard, OnceLock};

/// Serializes the timed heavy tests so wall-clock budgets are honest even
/// though the harness runs test functions on multiple threads.
pub fn serial() -> MutexGuard<'static, ()> {
    static GATE: OnceLock<Mutex<()>> = OnceLock::new();
    GATE.get_or_init(|| Mutex::new(()))
        .lock()
        .unwrap_or_else(|poisoned| poisoned.into_inner())
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Brute-force least squares via the explicit normal equations
/// (XᵀX)β = Xᵀy, solved by Gaussian elimination with partial pivoting.
pub fn normal_equations(cols: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
    let p = cols.len();
    let mut aug = vec![vec![0.0_f64; p + 1]; p];
    for i in 0..p {
        for j in 0..p {
            aug[i][j] = dot(&cols[i], &cols[j]);
        }
        aug[i][p] = dot(&cols[i], y);
    }
    for col in 0..p {
        let pivot = (col..p)
            .max_by(|&a, &b| aug[a][col].abs().partial_cmp(&aug[b][col].abs()).unwrap())
            .unwrap();
        aug.swap(col, pivot);
        let diag = aug[col][col];
        assert!(diag.abs() > 1e-12, "oracle system is singular");
        for row in 0..p {
            if row == col {
                continue;
            }
            let factor = aug[row][col] / diag;
            let pivot_row = aug[col].clone();
            for (slot, pv) in aug[row][col..].iter_mut().zip(&pivot_row[col..]) {
                *slot -= factor * pv;
            }
        }
    }
    (0..p).map(|i| aug[i][p] / aug[i][i]).collect()
}

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    eps: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * eps {
        return left + right + delta / 15.0;
    }
    adaptive(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1)
        + adaptive(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1)
}

/// Adaptive Simpson quadrature with a tolerance relative to a coarse
/// estimate of the integral's magnitude.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_eps: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    // Coarse composite pass to set the absolute tolerance scale.
    let panels = 64;
    let h = (b - a) / panels as f64;
    let mut coarse = 0.0;
    for i in 0..panels {
        let x0 = a + i as f64 * h;
        coarse += simpson(f(x0), f(x0 + 0.5 * h), f(x0 + h), h);
    }
    let eps = rel_eps * coarse.abs().max(1e-300);
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson(fa, fm, fb, b - a);
    adaptive(&f, a, b, fa, fm, fb, whole, eps, 48)
}

/// Regularized incomplete beta by direct quadrature of the unnormalized
/// density, both numerator and normalizer integrated numerically.
pub fn beta_quadrature(x: f64, a: f64, b: f64) -> f64 {
    assert!(
        a >= 1.0 && b >= 1.0,
        "quadrature oracle grid keeps a,b >= 1"
    );
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let g = move |t: f64| t.powf(a - 1.0) * (1.0 - t).powf(b - 1.0);
    let num = integrate(g, 0.0, x, 1e-13);
    let den = num + integrate(g, x, 1.0, 1e-13);
    num / den
}

/// F CDF through the quadrature oracle.
pub fn f_cdf_quadrature(x: f64, d1: usize, d2: usize) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let (d1f, d2f) = (d1 as f64, d2 as f64);
    let t = d1f * x / (d1f * x + d2f);
    beta_quadrature(t, d1f / 2.0, d2f / 2.0)
}

/// F quantile by bisection on the quadrature CDF.
pub fn f_quantile_bisection(p: f64, d1: usize, d2: usize) -> f64 {
    let mut lo = 0.0_f64;
    let mut hi = 1.0_f64;
    while f_cdf_quadrature(hi, d1, d2) < p {
        lo = hi;
        hi *= 2.0;
        assert!(hi < 1e12, "no bracket");
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if f_cdf_quadrature(mid, d1, d2) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Planted bivariate VAR(1) with transition a[from][to]; innovations are
/// unit Gaussians from the crate's pinned generator.
pub fn simulate_var1(a: [[f64; 2]; 2], t: usize, seed: u64) -> ccd::signals::SignalSet {
    use ccd::signals::{substream, SplitMix64};
    let mut rng0 = SplitMix64::new(substream(seed, 0));
    let mut rng1 = SplitMix64::new(substream(seed, 1));
    let burn = 200;
    let (mut x0, mut x1) = (0.0_f64, 0.0_f64);
    let mut s0 = Vec::with_capacity(t);
    let mut s1 = Vec::with_capacity(t);
    for i in 0..t + burn {
        let n0 = rng0.next_gaussian();
        let n1 = rng1.next_gaussian();
        let new0 = a[0][0] * x0 + a[1][0] * x1 + n0;
        let new1 = a[0][1] * x0 + a[1][1] * x1 + n1;
        x0 = new0;
        x1 = new1;
        if i >= burn {
            s0.push(x0);
            s1.push(x1);
        }
    }
    ccd::signals::SignalSet::new(vec![s0, s1], 1.0, vec!["x0".into(), "x1".into()]).unwrap()
}
