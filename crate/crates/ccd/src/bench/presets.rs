//! Figure-style replication presets: canned sweeps over Q, over k, and over
//! the full (Q, k) grid in both scenarios, each emitting the config used, a
//! records CSV, and SVG plots.

use std::path::{Path, PathBuf};

use super::config::{DetectorSpec, Scenario, SweepConfig, CONFIG_VERSION};
use super::records::{records_to_csv_string, SweepRecord};
use super::runner::run_sweep;
use super::svg::{render_heatmap, render_lines, LineAxis, PlotMetric};
use crate::error::{CcdError, Result};
use crate::graphs::detection_window;
use crate::signals::{group_delay, substream, DgpSpec};

/// Named experiment presets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Decision rate vs window length at the base rate (gc_var, gc_f, te).
    VaryQ,
    /// F1 vs downsampling factor at Q = 5 (gc_var) with the detection-window
    /// band overlaid.
    VaryK,
    /// Full (Q, k) grid, independent scenario, all registered detectors.
    IndependentGrid,
    /// Full (Q, k) grid, coupled scenario, all registered detectors.
    CoupledGrid,
}

impl Preset {
    pub const ALL: [Preset; 4] = [
        Preset::VaryQ,
        Preset::VaryK,
        Preset::IndependentGrid,
        Preset::CoupledGrid,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Preset::VaryQ => "fig_varyQ",
            Preset::VaryK => "fig_varyK",
            Preset::IndependentGrid => "fig_indep_grid",
            Preset::CoupledGrid => "fig_coupled_grid",
        }
    }
}

impl std::str::FromStr for Preset {
    type Err = CcdError;
    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .iter()
            .find(|p| p.name() == s)
            .copied()
            .ok_or_else(|| {
                CcdError::Config(format!(
                    "unknown preset '{s}' (expected one of {})",
                    Preset::ALL.map(|p| p.name()).join(", ")
                ))
            })
    }
}

const GRID_Q: [usize; 11] = [1, 2, 5, 10, 20, 30, 40, 50, 60, 80, 100];
const GRID_K: [usize; 11] = [1, 2, 5, 10, 15, 20, 30, 40, 50, 60, 80];

fn derived_seeds(base_seed: u64, count: usize) -> Vec<u64> {
    (0..count).map(|i| substream(base_seed, i as u64)).collect()
}

/// The sweep configuration a preset runs, with replicate seeds derived from
/// `base_seed`.
pub fn preset_config(preset: Preset, base_seed: u64, out_dir: &Path) -> SweepConfig {
    let (scenario, detectors, q_values, k_values, n_seeds) = match preset {
        Preset::VaryQ => (
            Scenario::Coupled,
            vec![
                DetectorSpec::from_name("gc_var").expect("registered"),
                DetectorSpec::from_name("gc_f").expect("registered"),
                DetectorSpec::from_name("te").expect("registered"),
            ],
            GRID_Q.to_vec(),
            vec![1],
            20,
        ),
        Preset::VaryK => (
            Scenario::Coupled,
            vec![DetectorSpec::from_name("gc_var").expect("registered")],
            vec![5],
            GRID_K.to_vec(),
            20,
        ),
        Preset::IndependentGrid => (
            Scenario::Independent,
            DetectorSpec::all_default(),
            GRID_Q.to_vec(),
            GRID_K.to_vec(),
            10,
        ),
        Preset::CoupledGrid => (
            Scenario::Coupled,
            DetectorSpec::all_default(),
            GRID_Q.to_vec(),
            GRID_K.to_vec(),
            10,
        ),
    };
    SweepConfig {
        version: CONFIG_VERSION,
        dgp: DgpSpec::default_coupled(0),
        scenario,
        detectors,
        q_values,
        k_values,
        seeds: derived_seeds(base_seed, n_seeds),
        anti_alias: false,
        output_dir: out_dir.to_path_buf(),
    }
}

fn preset_plots(
    preset: Preset,
    config: &SweepConfig,
    records: &[SweepRecord],
) -> Result<Vec<(String, String)>> {
    let mut plots = Vec::new();
    match preset {
        Preset::VaryQ => {
            plots.push((
                "varyQ_decision_rate.svg".to_string(),
                render_lines(records, PlotMetric::DecisionRate, LineAxis::Q, None)?,
            ));
            plots.push((
                "varyQ_statistic.svg".to_string(),
                render_lines(records, PlotMetric::Statistic, LineAxis::Q, None)?,
            ));
        }
        Preset::VaryK => {
            let q = config.q_values[0];
            let delay = group_delay(&config.dgp.coupling_taps);
            let window = (delay > 0.0).then(|| detection_window(delay, q));
            plots.push((
                "varyK_f1.svg".to_string(),
                render_lines(records, PlotMetric::F1, LineAxis::K, window)?,
            ));
        }
        Preset::IndependentGrid | Preset::CoupledGrid => {
            plots.push((
                "grid_f1.svg".to_string(),
                render_heatmap(records, PlotMetric::F1)?,
            ));
        }
    }
    Ok(plots)
}

/// Runs a preset end to end, writing `config.json`, `records.csv`, and the
/// preset's SVG plots into `out_dir`. Returns the paths written.
pub fn replicate(
    preset: Preset,
    out_dir: &Path,
    base_seed: u64,
    workers: usize,
) -> Result<Vec<PathBuf>> {
    let config = preset_config(preset, base_seed, out_dir);
    let records = run_sweep(&config, workers)?;

    std::fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();

    let config_path = out_dir.join("config.json");
    std::fs::write(&config_path, config.to_json_pretty())?;
    written.push(config_path);

    let records_path = out_dir.join("records.csv");
    std::fs::write(&records_path, records_to_csv_string(&records))?;
    written.push(records_path);

    for (file, svg) in preset_plots(preset, &config, &records)? {
        let path = out_dir.join(file);
        std::fs::write(&path, svg)?;
        written.push(path);
    }
    Ok(written)
}
