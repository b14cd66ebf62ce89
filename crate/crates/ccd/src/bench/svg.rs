//! Static SVG rendering of sweep results: (Q, k) heatmaps and per-detector
//! line plots. Output bytes are a pure function of the input records.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::records::SweepRecord;
use crate::error::{CcdError, Result};
use crate::graphs::DetectionWindow;

/// Which per-record quantity a plot aggregates (seed-averaged per cell).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotMetric {
    F1,
    Statistic,
    DecisionRate,
}

impl PlotMetric {
    pub fn label(&self) -> &'static str {
        match self {
            PlotMetric::F1 => "f1",
            PlotMetric::Statistic => "statistic",
            PlotMetric::DecisionRate => "decision_rate",
        }
    }

    fn extract(&self, r: &SweepRecord) -> f64 {
        match self {
            PlotMetric::F1 => r.f1,
            PlotMetric::Statistic => r.statistic,
            PlotMetric::DecisionRate => {
                if r.decision {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }
}

impl std::str::FromStr for PlotMetric {
    type Err = CcdError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "f1" => Ok(PlotMetric::F1),
            "statistic" => Ok(PlotMetric::Statistic),
            "decision_rate" => Ok(PlotMetric::DecisionRate),
            other => Err(CcdError::Parse(format!(
                "unknown metric '{other}' (expected f1, statistic, or decision_rate)"
            ))),
        }
    }
}

/// Seed-averaged metric per (Q, k) cell; None when every seed was skipped.
fn cell_mean(records: &[&SweepRecord], metric: PlotMetric) -> Option<f64> {
    let live: Vec<f64> = records
        .iter()
        .filter(|r| !r.skipped)
        .map(|r| metric.extract(r))
        .collect();
    if live.is_empty() {
        None
    } else {
        Some(live.iter().sum::<f64>() / live.len() as f64)
    }
}

/// Fixed [0,1] color scale (dark blue -> pale yellow -> dark red); values
/// are clamped, never auto-scaled, so plots stay comparable across runs.
fn color_for(value: f64) -> String {
    let t = value.clamp(0.0, 1.0);
    let stops: [(f64, [u8; 3]); 3] = [
        (0.0, [0x31, 0x36, 0x95]),
        (0.5, [0xff, 0xff, 0xbf]),
        (1.0, [0xa5, 0x00, 0x26]),
    ];
    let (lo, hi) = if t <= 0.5 {
        (stops[0], stops[1])
    } else {
        (stops[1], stops[2])
    };
    let f = if hi.0 > lo.0 {
        (t - lo.0) / (hi.0 - lo.0)
    } else {
        0.0
    };
    let mix = |a: u8, b: u8| -> u8 { (a as f64 + f * (b as f64 - a as f64)).round() as u8 };
    format!(
        "#{:02x}{:02x}{:02x}",
        mix(lo.1[0], hi.1[0]),
        mix(lo.1[1], hi.1[1]),
        mix(lo.1[2], hi.1[2])
    )
}

const LINE_COLORS: [&str; 5] = ["#1b6ca8", "#c0392b", "#2d7a3a", "#8e44ad", "#b8860b"];

fn sorted_detectors(records: &[SweepRecord]) -> Vec<String> {
    records
        .iter()
        .map(|r| r.detector.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

/// One heatmap panel per detector (stacked vertically in one document),
/// x axis = k, y axis = Q, cell color = seed-averaged metric on the fixed
/// [0,1] scale. Cells whose every seed was skipped render gray.
pub fn render_heatmap(records: &[SweepRecord], metric: PlotMetric) -> Result<String> {
    if records.is_empty() {
        return Err(CcdError::InvalidArgument("no records to plot".into()));
    }
    let detectors = sorted_detectors(records);
    let q_values: Vec<usize> = records
        .iter()
        .map(|r| r.q)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let k_values: Vec<usize> = records
        .iter()
        .map(|r| r.k)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();

    // Rectangularity: every detector must cover the full (Q, k) product.
    for det in &detectors {
        for &q in &q_values {
            for &k in &k_values {
                let any = records
                    .iter()
                    .any(|r| r.detector == *det && r.q == q && r.k == k);
                if !any {
                    return Err(CcdError::InvalidArgument(format!(
                        "ragged grid: detector {det} missing cell Q={q}, k={k}"
                    )));
                }
            }
        }
    }

    let cell = 26.0;
    let left = 64.0;
    let top_per_panel = 40.0;
    let bottom_per_panel = 34.0;
    let grid_w = cell * k_values.len() as f64;
    let grid_h = cell * q_values.len() as f64;
    let panel_h = top_per_panel + grid_h + bottom_per_panel;
    let colorbar_w = 70.0;
    let width = left + grid_w + colorbar_w + 30.0;
    let height = panel_h * detectors.len() as f64 + 10.0;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" \
         viewBox=\"0 0 {width:.0} {height:.0}\" font-family=\"monospace\" font-size=\"11\">"
    );
    let _ = writeln!(
        svg,
        "<rect width=\"{width:.0}\" height=\"{height:.0}\" fill=\"white\"/>"
    );

    for (panel, det) in detectors.iter().enumerate() {
        let oy = panel as f64 * panel_h + top_per_panel;
        let _ = writeln!(
            svg,
            "<text x=\"{left}\" y=\"{:.1}\" font-size=\"13\">{det} — mean {} over seeds</text>",
            oy - 14.0,
            metric.label()
        );
        for (qi, &q) in q_values.iter().enumerate() {
            // Highest Q at the top row.
            let row = q_values.len() - 1 - qi;
            let y = oy + row as f64 * cell;
            let _ = writeln!(
                svg,
                "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\">{q}</text>",
                left - 6.0,
                y + cell * 0.65
            );
            for (ki, &k) in k_values.iter().enumerate() {
                let x = left + ki as f64 * cell;
                let cell_records: Vec<&SweepRecord> = records
                    .iter()
                    .filter(|r| r.detector == *det && r.q == q && r.k == k)
                    .collect();
                match cell_mean(&cell_records, metric) {
                    Some(v) => {
                        let _ = writeln!(
                            svg,
                            "<rect class=\"cell\" x=\"{x:.1}\" y=\"{y:.1}\" width=\"{cell:.1}\" \
                             height=\"{cell:.1}\" fill=\"{}\" stroke=\"#888\" stroke-width=\"0.5\">\
                             <title>{det} Q={q} k={k}: {v:.4}</title></rect>",
                            color_for(v)
                        );
                    }
                    None => {
                        let _ = writeln!(
                            svg,
                            "<rect class=\"cell skipped\" x=\"{x:.1}\" y=\"{y:.1}\" width=\"{cell:.1}\" \
                             height=\"{cell:.1}\" fill=\"#d0d0d0\" stroke=\"#888\" stroke-width=\"0.5\">\
                             <title>{det} Q={q} k={k}: skipped</title></rect>"
                        );
                    }
                }
            }
        }
        for (ki, &k) in k_values.iter().enumerate() {
            let x = left + ki as f64 * cell + cell / 2.0;
            let _ = writeln!(
                svg,
                "<text x=\"{x:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{k}</text>",
                oy + grid_h + 14.0
            );
        }
        let _ = writeln!(
            svg,
            "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">k</text>",
            left + grid_w / 2.0,
            oy + grid_h + 28.0
        );
        let _ = writeln!(
            svg,
            "<text x=\"12\" y=\"{:.1}\">Q</text>",
            oy + grid_h / 2.0
        );

        // Colorbar, 20 bands.
        let cb_x = left + grid_w + 24.0;
        let band_h = grid_h / 20.0;
        for band in 0..20 {
            let v = 1.0 - (band as f64 + 0.5) / 20.0;
            let _ = writeln!(
                svg,
                "<rect x=\"{cb_x:.1}\" y=\"{:.1}\" width=\"14\" height=\"{band_h:.2}\" fill=\"{}\"/>",
                oy + band as f64 * band_h,
                color_for(v)
            );
        }
        let _ = write!(
            svg,
            "<text x=\"{:.1}\" y=\"{:.1}\">1.0</text>\n<text x=\"{:.1}\" y=\"{:.1}\">0.0</text>\n",
            cb_x + 18.0,
            oy + 8.0,
            cb_x + 18.0,
            oy + grid_h
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Which grid dimension a line plot puts on the x axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LineAxis {
    Q,
    K,
}

/// Seed-averaged metric against Q or k, one polyline per detector, with an
/// optional shaded detection-window band on a k axis.
pub fn render_lines(
    records: &[SweepRecord],
    metric: PlotMetric,
    axis: LineAxis,
    window: Option<DetectionWindow>,
) -> Result<String> {
    if records.is_empty() {
        return Err(CcdError::InvalidArgument("no records to plot".into()));
    }
    let detectors = sorted_detectors(records);
    let xs: Vec<usize> = match axis {
        LineAxis::Q => records
            .iter()
            .map(|r| r.q)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect(),
        LineAxis::K => records
            .iter()
            .map(|r| r.k)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect(),
    };
    let axis_name = match axis {
        LineAxis::Q => "Q",
        LineAxis::K => "k",
    };

    let left = 56.0;
    let top = 34.0;
    let plot_w = (xs.len() as f64 * 46.0).max(240.0);
    let plot_h = 220.0;
    let width = left + plot_w + 130.0;
    let height = top + plot_h + 60.0;
    let x_pos = |i: usize| left + (i as f64 + 0.5) / xs.len() as f64 * plot_w;
    let y_pos = |v: f64| top + (1.0 - v.clamp(0.0, 1.0)) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" \
         viewBox=\"0 0 {width:.0} {height:.0}\" font-family=\"monospace\" font-size=\"11\">"
    );
    let _ = writeln!(
        svg,
        "<rect width=\"{width:.0}\" height=\"{height:.0}\" fill=\"white\"/>"
    );
    let _ = writeln!(
        svg,
        "<text x=\"{left}\" y=\"18\" font-size=\"13\">mean {} vs {axis_name}</text>",
        metric.label()
    );

    // Detection-window band spans the x positions whose value lies inside.
    if let Some(w) = window {
        let inside: Vec<usize> = xs
            .iter()
            .enumerate()
            .filter(|(_, &v)| w.contains(v as f64))
            .map(|(i, _)| i)
            .collect();
        if let (Some(&first), Some(&last)) = (inside.first(), inside.last()) {
            let x0 = x_pos(first) - 10.0;
            let x1 = x_pos(last) + 10.0;
            let _ = writeln!(
                svg,
                "<rect class=\"detection-window\" x=\"{x0:.1}\" y=\"{top}\" width=\"{:.1}\" \
                 height=\"{plot_h}\" fill=\"#2d7a3a\" opacity=\"0.15\"/>",
                x1 - x0
            );
            let _ = writeln!(
                svg,
                "<text x=\"{:.1}\" y=\"{:.1}\" fill=\"#2d7a3a\">detection window [{}, {}]</text>",
                x0,
                top - 4.0,
                super::records::format_sig(w.k_min),
                super::records::format_sig(w.k_max)
            );
        }
    }

    // Axes and gridlines.
    let _ = writeln!(
        svg,
        "<rect x=\"{left}\" y=\"{top}\" width=\"{plot_w:.1}\" height=\"{plot_h}\" fill=\"none\" stroke=\"#444\"/>"
    );
    for tick in 0..=4 {
        let v = tick as f64 / 4.0;
        let y = y_pos(v);
        let _ = write!(
            svg,
            "<line x1=\"{left}\" y1=\"{y:.1}\" x2=\"{:.1}\" y2=\"{y:.1}\" stroke=\"#ddd\"/>\n\
             <text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\">{v:.2}</text>\n",
            left + plot_w,
            left - 6.0,
            y + 4.0
        );
    }
    for (i, &x) in xs.iter().enumerate() {
        let _ = writeln!(
            svg,
            "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{x}</text>",
            x_pos(i),
            top + plot_h + 16.0
        );
    }
    let _ = writeln!(
        svg,
        "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{axis_name}</text>",
        left + plot_w / 2.0,
        top + plot_h + 34.0
    );

    for (di, det) in detectors.iter().enumerate() {
        let color = LINE_COLORS[di % LINE_COLORS.len()];
        let mut points = Vec::new();
        for (i, &x) in xs.iter().enumerate() {
            let cell_records: Vec<&SweepRecord> = records
                .iter()
                .filter(|r| {
                    r.detector == *det
                        && match axis {
                            LineAxis::Q => r.q == x,
                            LineAxis::K => r.k == x,
                        }
                })
                .collect();
            if let Some(v) = cell_mean(&cell_records, metric) {
                points.push((x_pos(i), y_pos(v)));
            }
        }
        if points.is_empty() {
            continue;
        }
        let path: Vec<String> = points
            .iter()
            .map(|(x, y)| format!("{x:.1},{y:.1}"))
            .collect();
        let _ = writeln!(
            svg,
            "<polyline class=\"series\" points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.6\"/>",
            path.join(" ")
        );
        for (x, y) in &points {
            let _ = writeln!(
                svg,
                "<circle cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"2.4\" fill=\"{color}\"/>"
            );
        }
        let ly = top + 14.0 * di as f64 + 8.0;
        let lx = left + plot_w + 16.0;
        let _ = write!(
            svg,
            "<line x1=\"{lx}\" y1=\"{ly:.1}\" x2=\"{:.1}\" y2=\"{ly:.1}\" stroke=\"{color}\" stroke-width=\"2\"/>\n\
             <text x=\"{:.1}\" y=\"{:.1}\">{det}</text>\n",
            lx + 18.0,
            lx + 24.0,
            ly + 4.0
        );
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}
