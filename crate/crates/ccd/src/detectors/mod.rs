//! The causal-discovery detectors: variance-reduction and F-test Granger
//! causality, binned transfer entropy, convergent cross mapping, a lagged
//! VAR window-graph learner, and order-selection helpers.

mod ccm;
mod granger;
mod order;
mod te;
mod var_graph;

pub use ccm::{ccm, coupled_logistic_maps, CcmResult, CCM_CONVERGENCE_MARGIN, CCM_SKILL_THRESHOLD};
pub use granger::{gc_f_test, gc_variance_reduction, DEFAULT_GC_ALPHA, DEFAULT_GC_THETA};
pub use order::{
    false_nearest_neighbors, select_order_ic, FnnResult, OrderCriterion, OrderSelection,
};
pub use te::{quantile_bins, transfer_entropy, DEFAULT_TE_BINS, DEFAULT_TE_SURROGATES};
pub use var_graph::{
    var_window_fit, var_window_graph, VarWindowFit, DEFAULT_VAR_EDGE_THRESHOLD, DEFAULT_VAR_RIDGE,
};

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Statistic, threshold, and decision for one ordered pair, with
/// per-detector diagnostics keyed by name.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DetectorResult {
    pub source: usize,
    pub target: usize,
    pub statistic: f64,
    pub threshold: f64,
    pub decision: bool,
    pub diagnostics: BTreeMap<String, f64>,
}

impl DetectorResult {
    /// A result for the conventional (0 -> 1) pair with the decision derived
    /// from statistic > threshold; callers adjust fields where a detector's
    /// rule differs.
    pub fn new(statistic: f64, threshold: f64) -> Self {
        Self {
            source: 0,
            target: 1,
            statistic,
            threshold,
            decision: statistic > threshold,
            diagnostics: BTreeMap::new(),
        }
    }

    pub(crate) fn with(mut self, key: &str, value: f64) -> Self {
        self.diagnostics.insert(key.to_string(), value);
        self
    }
}
