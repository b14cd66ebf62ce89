//! The detection-window heuristic: at a fixed window length Q = 5, the
//! variance-reduction Granger test succeeds only for downsampling factors k
//! that squeeze the 50-sample delay into lags 1..Q, i.e. k in [10, 50].
//!
//!     cargo run --release --example downsampling_window

use ccd::detectors::gc_variance_reduction;
use ccd::graphs::{detection_window, score, SummaryGraph};
use ccd::sampling::{downsample, DecimationConfig};
use ccd::signals::{generate_pair, DgpSpec};

fn main() {
    let q = 5;
    let k_values = [1usize, 2, 5, 10, 15, 20, 30, 40, 50, 60, 80];
    let seeds = 0..5u64;

    let window = detection_window(50.0, q);
    println!(
        "detection window for delay 50 at Q={q}: k in [{}, {}]",
        window.k_min, window.k_max
    );
    println!();
    println!("k    inside?  mean F1");

    for k in k_values {
        let mut f1_sum = 0.0;
        let mut n = 0u32;
        for seed in seeds.clone() {
            let (signals, truth) = generate_pair(&DgpSpec::default_coupled(7_000 + seed)).unwrap();
            let decimated = downsample(&signals, &DecimationConfig::plain(k).unwrap()).unwrap();
            let (x, y) = (decimated.series(0), decimated.series(1));

            let xy = gc_variance_reduction(x, y, q, 0.05).unwrap();
            let yx = gc_variance_reduction(y, x, q, 0.05).unwrap();
            let mut predicted = SummaryGraph::new(2);
            predicted.set(0, 1, xy.decision);
            predicted.set(1, 0, yx.decision);

            f1_sum += score(&predicted, &truth.summary).unwrap().f1;
            n += 1;
        }
        println!(
            "{k:<4} {:<8} {:.2}",
            if window.contains(k as f64) {
                "yes"
            } else {
                "no"
            },
            f1_sum / n as f64
        );
    }
    println!();
    println!("`ccd replicate fig_varyK` runs this with 20 replicates and");
    println!("renders the window band onto an SVG line plot.");
}
