//! Thin command-line front end over the library: simulate data, run one
//! detector on a file, execute sweeps, render reports, and replicate the
//! canned benchmark figures.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ccd::bench::{
    read_records_csv, read_signals_csv, records_to_csv_string, render_heatmap, render_lines,
    replicate, run_sweep, signals_to_csv_string, DetectorSpec, LineAxis, PlotMetric, Preset,
    SweepConfig,
};
use ccd::detectors::{
    ccm, gc_f_test, gc_variance_reduction, transfer_entropy, var_window_fit, DetectorResult,
    CCM_CONVERGENCE_MARGIN, CCM_SKILL_THRESHOLD,
};
use ccd::error::{CcdError, Result};
use ccd::graphs::summarize;
use ccd::signals::{generate_pair, substream, DgpSpec};

/// Environment variable overriding the default worker count.
const WORKERS_ENV: &str = "CCD_WORKERS";

#[derive(Parser)]
#[command(
    name = "ccd",
    version,
    about = "Chronological causal discovery benchmark"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a signal pair and emit it as CSV.
    Simulate(SimulateArgs),
    /// Run one detector on a data file and print its result as JSON.
    Detect(DetectArgs),
    /// Run a configured (detector, Q, k, seed) sweep.
    Sweep(SweepArgs),
    /// Render plots from a records CSV.
    Report(ReportArgs),
    /// Run a canned benchmark preset end to end.
    Replicate(ReplicateArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// DgpSpec JSON file; defaults to the built-in coupled recipe.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Force the coupled or independent variant of the recipe.
    #[arg(long, value_enum)]
    scenario: Option<ScenarioArg>,
    /// Override the recipe seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScenarioArg {
    Coupled,
    Independent,
}

#[derive(Args)]
struct DetectArgs {
    /// Input CSV: `# tau=<real>` comment, header of labels, one row per step.
    data: PathBuf,
    /// Detector name: gc_var, gc_f, te, ccm, or var_graph.
    #[arg(long)]
    detector: String,
    /// Window length (probe delay for te, embedding budget for ccm).
    #[arg(long, default_value_t = 5)]
    q: usize,
    /// Hyperparameter overrides as inline JSON, e.g. '{"theta": 0.1}'.
    #[arg(long)]
    params: Option<String>,
    /// Source series index for pairwise detectors.
    #[arg(long, default_value_t = 0)]
    source: usize,
    /// Target series index for pairwise detectors.
    #[arg(long, default_value_t = 1)]
    target: usize,
    /// Seed for surrogate/library sampling.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SweepArgs {
    /// Sweep configuration JSON.
    #[arg(long)]
    config: PathBuf,
    /// Output directory; defaults to the config's output_dir.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: CCD_WORKERS or one per core).
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct ReportArgs {
    /// Records CSV produced by `sweep` or `replicate`.
    records: PathBuf,
    /// Metric to plot: f1, statistic, or decision_rate.
    #[arg(long, default_value = "f1")]
    metric: String,
    /// Output directory for the SVG files.
    #[arg(long, default_value = "ccd-report")]
    out: PathBuf,
}

#[derive(Args)]
struct ReplicateArgs {
    /// Preset name: fig_varyQ, fig_varyK, fig_indep_grid, fig_coupled_grid.
    preset: String,
    /// Output directory; defaults to the preset name.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: CCD_WORKERS or one per core).
    #[arg(long)]
    workers: Option<usize>,
    /// Base seed the per-replicate seeds derive from.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn resolve_workers(flag: Option<usize>) -> usize {
    if let Some(w) = flag {
        return w;
    }
    if let Ok(v) = std::env::var(WORKERS_ENV) {
        if let Ok(w) = v.parse() {
            return w;
        }
        eprintln!("warning: ignoring unparseable {WORKERS_ENV}={v}");
    }
    0 // rayon default: one thread per core
}

fn write_output(path: Option<&PathBuf>, content: &str) -> Result<()> {
    match path {
        Some(p) => {
            if let Some(parent) = p.parent() {
                if !parent.as_os_str().is_empty() {
                    std::fs::create_dir_all(parent)?;
                }
            }
            std::fs::write(p, content)?;
            eprintln!("wrote {}", p.display());
        }
        None => {
            std::io::stdout().write_all(content.as_bytes())?;
        }
    }
    Ok(())
}

fn cmd_simulate(args: SimulateArgs) -> Result<()> {
    let mut spec: DgpSpec = match &args.config {
        Some(path) => serde_json::from_str(&std::fs::read_to_string(path)?)?,
        None => DgpSpec::default_coupled(0),
    };
    match args.scenario {
        Some(ScenarioArg::Independent) => spec.coupling_taps = Vec::new(),
        Some(ScenarioArg::Coupled) if spec.coupling_taps.is_empty() => {
            spec.coupling_taps = DgpSpec::default_coupled(0).coupling_taps;
        }
        Some(ScenarioArg::Coupled) => {}
        None => {}
    }
    if let Some(seed) = args.seed {
        spec.seed = seed;
    }
    let (signals, truth) = generate_pair(&spec)?;
    write_output(args.out.as_ref(), &signals_to_csv_string(&signals))?;
    eprintln!(
        "simulated {} series x {} samples; true summary edges: {}",
        signals.d(),
        signals.len(),
        if truth.summary.edge_count() == 0 {
            "(none)".to_string()
        } else {
            truth.summary.to_edge_list().trim().replace('\n', "; ")
        }
    );
    Ok(())
}

fn cmd_detect(args: DetectArgs) -> Result<()> {
    let signals = read_signals_csv(&std::fs::read_to_string(&args.data)?)?;
    if args.source >= signals.d() || args.target >= signals.d() || args.source == args.target {
        return Err(CcdError::InvalidArgument(format!(
            "need distinct source/target below {}, got {} and {}",
            signals.d(),
            args.source,
            args.target
        )));
    }
    let params = match &args.params {
        Some(text) => serde_json::from_str(text)?,
        None => serde_json::Value::Null,
    };
    let spec = DetectorSpec::from_name_and_params(&args.detector, params)?;
    spec.validate()?;
    let x = signals.series(args.source);
    let y = signals.series(args.target);
    let q = args.q;

    let mut result: DetectorResult = match &spec {
        DetectorSpec::GcVar(p) => gc_variance_reduction(x, y, q, p.theta)?,
        DetectorSpec::GcF(p) => gc_f_test(x, y, q, p.alpha)?,
        DetectorSpec::Te(p) => {
            transfer_entropy(x, y, q, p.bins, p.n_surrogates, substream(args.seed, 10))?
        }
        DetectorSpec::Ccm(p) => {
            let e = p.embedding_dim.unwrap_or_else(|| q.clamp(1, 10));
            let nn = p.n_neighbors.unwrap_or(e + 1);
            let points = signals.len().saturating_sub((e - 1) * p.tau_embed);
            let libs = match &p.library_sizes {
                Some(l) => l.clone(),
                None => {
                    let max_l = points.min(500);
                    [max_l / 8, max_l / 4, max_l / 2, max_l]
                        .into_iter()
                        .filter(|&l| l > nn)
                        .collect()
                }
            };
            let out = ccm(
                x,
                y,
                e,
                p.tau_embed,
                &libs,
                Some(nn),
                substream(args.seed, 12),
            )?;
            let first = *out.skills.first().unwrap_or(&0.0);
            let threshold = CCM_SKILL_THRESHOLD.max(first + CCM_CONVERGENCE_MARGIN);
            let mut r = DetectorResult::new(out.final_skill(), threshold);
            r.decision = out.converged;
            for (l, s) in out.library_sizes.iter().zip(&out.skills) {
                r.diagnostics.insert(format!("skill_L{l}"), *s);
            }
            r.diagnostics.insert("embedding_dim".into(), e as f64);
            r
        }
        DetectorSpec::VarGraph(p) => {
            let fit = var_window_fit(&signals, q, p.ridge)?;
            let graph = fit.graph(p.edge_threshold)?;
            let summary = summarize(&graph);
            eprint!("{}", graph.to_edge_list());
            let mut r = DetectorResult::new(
                fit.max_abs_coefficient(args.source, args.target),
                p.edge_threshold,
            );
            r.diagnostics
                .insert("window_edges".into(), graph.lagged_edges().len() as f64);
            r.diagnostics
                .insert("summary_edges".into(), summary.edge_count() as f64);
            r
        }
    };
    result.source = args.source;
    result.target = args.target;
    println!("{}", serde_json::to_string_pretty(&result)?);
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> Result<()> {
    let config = SweepConfig::load(&args.config)?;
    let workers = resolve_workers(args.workers);
    let records = run_sweep(&config, workers)?;
    let out_dir = args
        .out
        .clone()
        .unwrap_or_else(|| config.output_dir.clone());
    std::fs::create_dir_all(&out_dir)?;
    let path = match args.format {
        FormatArg::Csv => {
            let p = out_dir.join("records.csv");
            std::fs::write(&p, records_to_csv_string(&records))?;
            p
        }
        FormatArg::Json => {
            let p = out_dir.join("records.json");
            std::fs::write(&p, serde_json::to_string_pretty(&records)?)?;
            p
        }
    };
    let skipped = records.iter().filter(|r| r.skipped).count();
    let total_ms: f64 = records.iter().map(|r| r.wall_time_ms).sum();
    eprintln!(
        "wrote {} ({} records, {} skipped, {:.1}s detector time)",
        path.display(),
        records.len(),
        skipped,
        total_ms / 1e3
    );
    Ok(())
}

fn cmd_report(args: ReportArgs) -> Result<()> {
    let records = read_records_csv(&std::fs::read_to_string(&args.records)?)?;
    if records.is_empty() {
        return Err(CcdError::Parse("records file has no rows".into()));
    }
    let metric = PlotMetric::from_str(&args.metric)?;
    let q_count = {
        let mut qs: Vec<usize> = records.iter().map(|r| r.q).collect();
        qs.sort_unstable();
        qs.dedup();
        qs.len()
    };
    let k_count = {
        let mut ks: Vec<usize> = records.iter().map(|r| r.k).collect();
        ks.sort_unstable();
        ks.dedup();
        ks.len()
    };
    std::fs::create_dir_all(&args.out)?;
    let path = args.out.join(format!("report_{}.svg", metric.label()));
    let svg = if q_count > 1 && k_count > 1 {
        render_heatmap(&records, metric)?
    } else {
        let axis = if k_count > 1 {
            LineAxis::K
        } else {
            LineAxis::Q
        };
        render_lines(&records, metric, axis, None)?
    };
    std::fs::write(&path, svg)?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn cmd_replicate(args: ReplicateArgs) -> Result<()> {
    let preset = Preset::from_str(&args.preset)?;
    let out_dir = args
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(preset.name()));
    let workers = resolve_workers(args.workers);
    let written = replicate(preset, &out_dir, args.seed, workers)?;
    for path in written {
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(args) => cmd_simulate(args),
        Command::Detect(args) => cmd_detect(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Report(args) => cmd_report(args),
        Command::Replicate(args) => cmd_replicate(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
