//! Choosing the window length before running a detector: information
//! criteria for lag models and false nearest neighbors for an embedding
//! dimension.
//!
//!     cargo run --release --example order_selection

use ccd::detectors::{false_nearest_neighbors, select_order_ic, OrderCriterion};
use ccd::signals::{gen_ar, SignalSet};

fn main() {
    // AIC/BIC on an AR(2) series: both should land at Q = 2, BIC never above AIC.
    let x = gen_ar(&[1.2, -0.4], 1.0, 20_000, 1_000, 5).unwrap();
    let s = SignalSet::new(vec![x], 1.0, vec!["x".into()]).unwrap();
    let aic = select_order_ic(&s, 0, 12, OrderCriterion::Aic).unwrap();
    let bic = select_order_ic(&s, 0, 12, OrderCriterion::Bic).unwrap();
    println!("AR(2) data, Q_max = 12:");
    println!("  AIC selects Q = {}", aic.selected);
    println!("  BIC selects Q = {}", bic.selected);

    // False nearest neighbors: a sine lives on a circle, two dimensions.
    let sine: Vec<f64> = (0..1_500).map(|i| (0.73 * i as f64).sin()).collect();
    let fnn = false_nearest_neighbors(&sine, 5, 15.0, 2.0).unwrap();
    println!("sine wave, E_max = 5:");
    println!("  FNN fractions: {:?}", round3(&fnn.fractions));
    println!(
        "  selected E = {} (resolved: {})",
        fnn.selected, fnn.resolved
    );

    // White noise never de-aliases: the fraction stays high at every E.
    let noise = gen_ar(&[], 1.0, 1_200, 0, 9).unwrap();
    let fnn_noise = false_nearest_neighbors(&noise, 5, 15.0, 2.0).unwrap();
    println!("white noise, E_max = 5:");
    println!("  FNN fractions: {:?}", round3(&fnn_noise.fractions));
    println!(
        "  selected E = {} (resolved: {})",
        fnn_noise.selected, fnn_noise.resolved
    );
}

fn round3(xs: &[f64]) -> Vec<f64> {
    xs.iter().map(|v| (v * 1000.0).round() / 1000.0).collect()
}
