//! Shared numerical kernels: least-squares fitting, the F distribution and
//! its quantile via the regularized incomplete beta function, and plug-in
//! Shannon entropy.

mod special;

pub use special::{f_cdf, f_quantile, ln_gamma, regularized_incomplete_beta};

use crate::error::{CcdError, Result};

/// Relative tolerance below which a pivoted column is considered redundant.
///
/// Columns whose remaining norm falls below this fraction of the leading
/// pivot magnitude get a zero coefficient; the residual stays well defined.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// Identity of one regressor column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regressor {
    /// Constant column of ones.
    Intercept,
    /// Series `series` delayed by `lag` samples (`lag = 0` is contemporaneous).
    Lag { series: usize, lag: usize },
}

impl std::fmt::Display for Regressor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Regressor::Intercept => write!(f, "1"),
            Regressor::Lag { series, lag } => write!(f, "s{series}[t-{lag}]"),
        }
    }
}

/// A dense column-major regression design: `n` usable time points by `p`
/// labeled regressor columns.
#[derive(Debug, Clone)]
pub struct DesignMatrix {
    cols: Vec<Vec<f64>>,
    n: usize,
    labels: Vec<Regressor>,
}

impl DesignMatrix {
    /// Builds a design from equal-length finite columns. Requires strictly
    /// more rows than columns and one label per column.
    pub fn from_columns(cols: Vec<Vec<f64>>, labels: Vec<Regressor>) -> Result<Self> {
        if cols.is_empty() {
            return Err(CcdError::InvalidArgument("design has no columns".into()));
        }
        if cols.len() != labels.len() {
            return Err(CcdError::DimensionMismatch(format!(
                "{} columns but {} labels",
                cols.len(),
                labels.len()
            )));
        }
        let n = cols[0].len();
        if n < cols.len() {
            return Err(CcdError::SeriesTooShort(format!(
                "need at least as many rows as columns: n={n}, p={}",
                cols.len()
            )));
        }
        for (j, c) in cols.iter().enumerate() {
            if c.len() != n {
                return Err(CcdError::DimensionMismatch(format!(
                    "column {j} has {} rows, expected {n}",
                    c.len()
                )));
            }
            if c.iter().any(|v| !v.is_finite()) {
                return Err(CcdError::InvalidArgument(format!(
                    "column {j} contains a non-finite value"
                )));
            }
        }
        Ok(Self { cols, n, labels })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.cols.len()
    }

    pub fn labels(&self) -> &[Regressor] {
        &self.labels
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.cols[j]
    }

    pub fn value(&self, row: usize, col: usize) -> f64 {
        self.cols[col][row]
    }
}

/// Output of a least-squares fit.
#[derive(Debug, Clone)]
pub struct FitResult {
    /// One coefficient per design column (zero for columns judged redundant).
    pub coefficients: Vec<f64>,
    /// Residual sum of squares.
    pub rss: f64,
    /// Rows used.
    pub n: usize,
    /// Columns in the design.
    pub p: usize,
    /// Numerical rank detected by the pivoted decomposition.
    pub rank: usize,
}

/// Least-squares fit of `y` on the columns of `x` via Householder QR with
/// column pivoting.
///
/// Redundant columns (relative pivot below [`RANK_TOLERANCE`]) receive a zero
/// coefficient rather than failing; collinear lags from downsampled constant
/// segments land here.
pub fn ols_fit(x: &DesignMatrix, y: &[f64]) -> Result<FitResult> {
    let n = x.n();
    let p = x.p();
    if n <= p {
        return Err(CcdError::SeriesTooShort(format!(
            "least squares needs more rows than columns: n={n}, p={p}"
        )));
    }
    if y.len() != n {
        return Err(CcdError::DimensionMismatch(format!(
            "y has {} rows, design has {n}",
            y.len()
        )));
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(CcdError::InvalidArgument(
            "y contains a non-finite value".into(),
        ));
    }

    let mut a: Vec<Vec<f64>> = x.cols.clone();
    let mut qty = y.to_vec();
    let mut perm: Vec<usize> = (0..p).collect();
    let mut rdiag = vec![0.0_f64; p];
    let mut norms2: Vec<f64> = a.iter().map(|c| c.iter().map(|v| v * v).sum()).collect();
    let norms2_init = norms2.clone();

    let mut rank = p;
    let mut leading = 0.0_f64;

    for j in 0..p {
        // Column pivot: largest remaining norm.
        let mut best = j;
        for m in j + 1..p {
            if norms2[m] > norms2[best] {
                best = m;
            }
        }
        if best != j {
            a.swap(j, best);
            perm.swap(j, best);
            norms2.swap(j, best);
        }

        // Exact norm of the pivot column's active rows.
        let normx = a[j][j..].iter().map(|v| v * v).sum::<f64>().sqrt();
        if j == 0 {
            leading = normx;
        }
        if normx == 0.0 || normx <= RANK_TOLERANCE * leading {
            rank = j;
            break;
        }

        // Householder reflection zeroing rows j+1.. of column j.
        let alpha = if a[j][j] >= 0.0 { -normx } else { normx };
        a[j][j] -= alpha;
        let vtv = a[j][j..].iter().map(|v| v * v).sum::<f64>();
        rdiag[j] = alpha;

        // Split so the reflector column can be borrowed alongside the rest.
        let (lead, rest) = a.split_at_mut(j + 1);
        let v = &lead[j][j..];
        for col in rest.iter_mut() {
            let tail = &mut col[j..];
            let w: f64 = v.iter().zip(tail.iter()).map(|(a, b)| a * b).sum();
            let c = 2.0 * w / vtv;
            for (t, vi) in tail.iter_mut().zip(v.iter()) {
                *t -= c * vi;
            }
        }
        {
            let tail = &mut qty[j..];
            let w: f64 = v.iter().zip(tail.iter()).map(|(a, b)| a * b).sum();
            let c = 2.0 * w / vtv;
            for (t, vi) in tail.iter_mut().zip(v.iter()) {
                *t -= c * vi;
            }
        }

        // Downdate remaining column norms; recompute when cancellation bites.
        for m in j + 1..p {
            let d = a[m][j] * a[m][j];
            norms2[m] -= d;
            if norms2[m] < 1e-12 * norms2_init[perm[m]].max(1.0) {
                norms2[m] = a[m][j + 1..].iter().map(|v| v * v).sum();
            }
        }
    }

    // Back-substitution on the rank x rank leading block. R[j][m] (m > j)
    // lives in a[m][j]; the diagonal is rdiag.
    let mut beta_p = vec![0.0_f64; p];
    for j in (0..rank).rev() {
        let mut s = qty[j];
        for m in j + 1..rank {
            s -= a[m][j] * beta_p[m];
        }
        beta_p[j] = s / rdiag[j];
    }

    let mut coefficients = vec![0.0_f64; p];
    for (j, &orig) in perm.iter().enumerate().take(rank) {
        coefficients[orig] = beta_p[j];
    }

    let rss: f64 = qty[rank..].iter().map(|v| v * v).sum();

    Ok(FitResult {
        coefficients,
        rss,
        n,
        p,
        rank,
    })
}

/// Plug-in Shannon entropy of a histogram, in bits.
///
/// No small-sample bias correction is applied; the plug-in estimate is
/// biased low for sparse histograms and that bias is accepted as-is.
pub fn shannon_entropy(counts: &[u64]) -> Result<f64> {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(CcdError::Degenerate("all-zero histogram".into()));
    }
    let total_f = total as f64;
    let mut acc = 0.0_f64;
    for &c in counts.iter().filter(|&&c| c > 0) {
        let cf = c as f64;
        acc += cf * cf.log2();
    }
    Ok((total_f.log2() - acc / total_f).max(0.0))
}

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Population variance (divides by n).
pub fn variance(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return 0.0;
    }
    let m = mean(xs);
    xs.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / xs.len() as f64
}

/// Pearson correlation; returns 0 when either side has zero variance.
pub fn pearson(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "pearson requires equal lengths");
    if a.is_empty() {
        return 0.0;
    }
    let (ma, mb) = (mean(a), mean(b));
    let mut sab = 0.0;
    let mut saa = 0.0;
    let mut sbb = 0.0;
    for (&x, &y) in a.iter().zip(b.iter()) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    if saa <= 0.0 || sbb <= 0.0 {
        return 0.0;
    }
    sab / (saa * sbb).sqrt()
}
