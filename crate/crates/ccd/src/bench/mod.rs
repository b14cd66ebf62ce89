//! Benchmark harness: configuration, the (Q, k, seed, detector) sweep
//! engine, CSV/JSON emission, SVG rendering, and figure-style presets.

mod config;
mod presets;
mod records;
mod runner;
mod signal_io;
mod svg;

pub use config::{
    CcmParams, DetectorSpec, GcFParams, GcVarParams, Scenario, SweepConfig, TeParams,
    VarGraphParams, CONFIG_VERSION,
};
pub use presets::{preset_config, replicate, Preset};
pub use records::{
    format_sig, read_records_csv, records_to_csv_string, write_records_csv, SweepRecord, CSV_HEADER,
};
pub use runner::{cell_is_feasible, cell_seed, decimated_len, run_sweep};
pub use signal_io::{read_signals_csv, signals_to_csv_string, write_signals_csv};
pub use svg::{render_heatmap, render_lines, LineAxis, PlotMetric};
