//! Convergent cross mapping via simplex projection.
//!
//! For the direction "x causes y" the shadow manifold is built from y (the
//! driven series carries an imprint of its driver), and x is estimated by
//! exponentially weighted neighbor averages at growing library sizes. Rising
//! cross-map skill that converges above a floor is read as causal influence.

use serde::{Deserialize, Serialize};

use crate::error::{CcdError, Result};
use crate::numerics::pearson;
use crate::signals::SplitMix64;

/// Final skill must clear this floor for convergence.
pub const CCM_SKILL_THRESHOLD: f64 = 0.5;
/// Final skill must beat the smallest-library skill by this margin.
pub const CCM_CONVERGENCE_MARGIN: f64 = 0.1;
/// Prediction targets are strided down to at most this many manifold points;
/// libraries still sample from the full manifold.
const CCM_MAX_TARGETS: usize = 2000;

/// Cross-map skill per library size for one direction.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CcmResult {
    pub library_sizes: Vec<usize>,
    /// Pearson correlation between cross-mapped and true driver values.
    pub skills: Vec<f64>,
    pub converged: bool,
    pub embedding_dim: usize,
    pub tau_embed: usize,
}

impl CcmResult {
    pub fn final_skill(&self) -> f64 {
        *self.skills.last().unwrap_or(&0.0)
    }
}

/// Cross mapping for the direction "x causes y": embed y, predict x.
///
/// `n_neighbors` defaults to E + 1 (the simplex convention). Distance ties
/// break toward the lower point index; a zero nearest-neighbor distance
/// falls back to uniform weights for that target.
pub fn ccm(
    x: &[f64],
    y: &[f64],
    embedding_dim: usize,
    tau_embed: usize,
    library_sizes: &[usize],
    n_neighbors: Option<usize>,
    seed: u64,
) -> Result<CcmResult> {
    if x.len() != y.len() {
        return Err(CcdError::DimensionMismatch(format!(
            "x has {} samples, y has {}",
            x.len(),
            y.len()
        )));
    }
    if embedding_dim == 0 || tau_embed == 0 {
        return Err(CcdError::InvalidArgument(
            "embedding dimension and delay must be >= 1".into(),
        ));
    }
    if library_sizes.is_empty() {
        return Err(CcdError::InvalidArgument("no library sizes given".into()));
    }
    if library_sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CcdError::InvalidArgument(
            "library sizes must be strictly increasing".into(),
        ));
    }
    let nn = n_neighbors.unwrap_or(embedding_dim + 1);
    if nn == 0 {
        return Err(CcdError::InvalidArgument(
            "need at least one neighbor".into(),
        ));
    }

    let offset = (embedding_dim - 1) * tau_embed;
    if x.len() <= offset + 1 {
        return Err(CcdError::SeriesTooShort(format!(
            "embedding needs more than {} samples, got {}",
            offset + 1,
            x.len()
        )));
    }
    let n_points = x.len() - offset;
    let max_lib = *library_sizes.last().unwrap();
    if max_lib > n_points {
        return Err(CcdError::InvalidArgument(format!(
            "largest library {max_lib} exceeds {n_points} embedded points"
        )));
    }
    if *library_sizes.first().unwrap() <= nn {
        return Err(CcdError::InvalidArgument(format!(
            "smallest library must exceed n_neighbors={nn}"
        )));
    }

    // Shadow manifold of y: point i covers times offset+i, offset+i-tau, ...
    let coords: Vec<f64> = (0..n_points)
        .flat_map(|i| (0..embedding_dim).map(move |j| y[offset + i - j * tau_embed]))
        .collect();
    let point = |i: usize| &coords[i * embedding_dim..(i + 1) * embedding_dim];

    let target_stride = n_points.div_ceil(CCM_MAX_TARGETS).max(1);
    let targets: Vec<usize> = (0..n_points).step_by(target_stride).collect();
    let truth: Vec<f64> = targets.iter().map(|&i| x[offset + i]).collect();

    let mut rng = SplitMix64::new(seed);
    let mut skills = Vec::with_capacity(library_sizes.len());
    let mut neighbors: Vec<(f64, usize)> = Vec::with_capacity(nn + 1);

    for &lib_size in library_sizes {
        let library = rng.sample_indices(n_points, lib_size);
        let mut estimates = Vec::with_capacity(targets.len());
        for &t in &targets {
            neighbors.clear();
            let pt = point(t);
            for &l in &library {
                if l == t {
                    continue;
                }
                let d2: f64 = pt
                    .iter()
                    .zip(point(l))
                    .map(|(a, b)| (a - b) * (a - b))
                    .sum();
                let cand = (d2, l);
                let pos =
                    neighbors.partition_point(|&(d, i)| d < cand.0 || (d == cand.0 && i < cand.1));
                if pos < nn {
                    neighbors.insert(pos, cand);
                    neighbors.truncate(nn);
                }
            }
            let d_min = neighbors[0].0.sqrt();
            let mut weight_sum = 0.0;
            let mut est = 0.0;
            for &(d2, l) in &neighbors {
                let w = if d_min == 0.0 {
                    1.0
                } else {
                    (-(d2.sqrt()) / d_min).exp()
                };
                weight_sum += w;
                est += w * x[offset + l];
            }
            estimates.push(est / weight_sum);
        }
        skills.push(pearson(&estimates, &truth));
    }

    let converged = skills.last().unwrap() > &CCM_SKILL_THRESHOLD
        && skills.last().unwrap() - skills.first().unwrap() > CCM_CONVERGENCE_MARGIN;

    Ok(CcmResult {
        library_sizes: library_sizes.to_vec(),
        skills,
        converged,
        embedding_dim,
        tau_embed,
    })
}

/// Unidirectionally coupled logistic maps: x is autonomous (r = 3.8) and
/// drives y through the coupling term. A standard sanity system for cross
/// mapping; both orbits stay inside (0, 1).
pub fn coupled_logistic_maps(
    t: usize,
    coupling: f64,
    transient: usize,
    seed: u64,
) -> (Vec<f64>, Vec<f64>) {
    let mut rng = SplitMix64::new(seed);
    let mut xv = 0.2 + 0.6 * rng.next_f64();
    let mut yv = 0.2 + 0.6 * rng.next_f64();
    let total = t + transient;
    let mut xs = Vec::with_capacity(t);
    let mut ys = Vec::with_capacity(t);
    for i in 0..total {
        let x_next = 3.8 * xv * (1.0 - xv);
        let y_next = yv * (3.5 - 3.5 * yv - coupling * xv);
        xv = x_next;
        yv = y_next;
        if i >= transient {
            xs.push(xv);
            ys.push(yv);
        }
    }
    (xs, ys)
}
