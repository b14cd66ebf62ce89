//! Window-graph recovery with the lagged VAR learner on a planted VAR(1):
//! the thresholded coefficients reproduce the exact edge set, including the
//! absence of the reverse edge.
//!
//!     cargo run --release --example var_graph_recovery

use ccd::detectors::var_window_graph;
use ccd::graphs::summarize;
use ccd::signals::{substream, SignalSet, SplitMix64};

/// Planted system: x0 -> x0, x0 -> x1, x1 -> x1 at lag 1; no x1 -> x0.
fn simulate(t: usize, seed: u64) -> SignalSet {
    let mut rng0 = SplitMix64::new(substream(seed, 0));
    let mut rng1 = SplitMix64::new(substream(seed, 1));
    let (mut x0, mut x1) = (0.0, 0.0);
    let mut s0 = Vec::with_capacity(t);
    let mut s1 = Vec::with_capacity(t);
    for i in 0..t + 200 {
        let new0 = 0.5 * x0 + rng0.next_gaussian();
        let new1 = 0.4 * x0 + 0.5 * x1 + rng1.next_gaussian();
        x0 = new0;
        x1 = new1;
        if i >= 200 {
            s0.push(x0);
            s1.push(x1);
        }
    }
    SignalSet::new(vec![s0, s1], 1.0, vec!["x0".into(), "x1".into()]).unwrap()
}

fn main() {
    let s = simulate(50_000, 3);
    let graph = var_window_graph(&s, 1, 1e-6, 0.1).unwrap();

    println!("planted coefficients: x0 ->(0.5) x0, x0 ->(0.4) x1, x1 ->(0.5) x1");
    println!("recovered window graph (|coef| > 0.1):");
    print!("{}", graph.to_edge_list());
    println!("summary graph:");
    print!("{}", summarize(&graph).to_edge_list());

    // A longer window only adds noise coefficients, all below threshold.
    let wide = var_window_graph(&s, 4, 1e-6, 0.1).unwrap();
    println!(
        "same system fit with Q = 4: {} edges",
        wide.lagged_edges().len()
    );
    for (from, to, lag) in wide.lagged_edges() {
        println!("  {from} -> {to} at lag {lag}");
    }
}
