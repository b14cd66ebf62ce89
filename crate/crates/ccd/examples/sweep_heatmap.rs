//! A small (Q, k) sweep through the library API: build a config, run the
//! grid on a worker pool, and emit the records CSV plus an F1 heatmap SVG.
//! The full-size presets live behind `ccd replicate`.
//!
//!     cargo run --release --example sweep_heatmap

use ccd::bench::{
    records_to_csv_string, render_heatmap, run_sweep, DetectorSpec, PlotMetric, Scenario,
    SweepConfig, CONFIG_VERSION,
};
use ccd::signals::DgpSpec;

fn main() {
    let mut dgp = DgpSpec::default_coupled(0);
    dgp.n_samples = 8_000;
    let config = SweepConfig {
        version: CONFIG_VERSION,
        dgp,
        scenario: Scenario::Coupled,
        detectors: vec![
            DetectorSpec::from_name("gc_var").unwrap(),
            DetectorSpec::from_name("te").unwrap(),
        ],
        q_values: vec![1, 5, 25, 50],
        k_values: vec![1, 5, 10, 25, 50],
        seeds: (0..5).collect(),
        anti_alias: false,
        output_dir: std::env::temp_dir().join("ccd-sweep-example"),
    };

    let records = run_sweep(&config, 0).expect("sweep runs");
    let skipped = records.iter().filter(|r| r.skipped).count();
    println!(
        "{} records ({} skipped as infeasible)",
        records.len(),
        skipped
    );

    println!("mean F1 per detector and Q (k = 10):");
    for det in ["gc_var", "te"] {
        for &q in &config.q_values {
            let cell: Vec<&_> = records
                .iter()
                .filter(|r| r.detector == det && r.q == q && r.k == 10 && !r.skipped)
                .collect();
            let mean: f64 = cell.iter().map(|r| r.f1).sum::<f64>() / cell.len().max(1) as f64;
            println!("  {det:<7} Q={q:<3} {mean:.2}");
        }
    }

    std::fs::create_dir_all(&config.output_dir).unwrap();
    let csv_path = config.output_dir.join("records.csv");
    std::fs::write(&csv_path, records_to_csv_string(&records)).unwrap();
    let svg_path = config.output_dir.join("grid_f1.svg");
    std::fs::write(&svg_path, render_heatmap(&records, PlotMetric::F1).unwrap()).unwrap();
    println!("wrote {}", csv_path.display());
    println!("wrote {}", svg_path.display());
}
