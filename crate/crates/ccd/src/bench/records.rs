//! Sweep records and their CSV representation.
//!
//! The CSV schema is fixed:
//! `detector,Q,k,seed,statistic,threshold,decision,tp,fp,fn,precision,recall,f1,wall_time_ms,skipped`
//! with floats rendered to 9 significant digits. The wall_time_ms column is
//! always written as 0 so that identical configs produce byte-identical
//! files regardless of worker count; measured timings stay on the in-memory
//! records (and in JSON output) only.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{CcdError, Result};

pub const CSV_HEADER: &str =
    "detector,Q,k,seed,statistic,threshold,decision,tp,fp,fn,precision,recall,f1,wall_time_ms,skipped";

/// One (detector, Q, k, seed) grid cell, scored at summary level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub detector: String,
    pub q: usize,
    pub k: usize,
    pub seed: u64,
    /// Probe statistic for the causal direction (series 0 -> series 1).
    pub statistic: f64,
    pub threshold: f64,
    pub decision: bool,
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_count: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub wall_time_ms: f64,
    pub skipped: bool,
}

impl SweepRecord {
    pub fn skipped_cell(detector: &str, q: usize, k: usize, seed: u64) -> Self {
        Self {
            detector: detector.to_string(),
            q,
            k,
            seed,
            statistic: f64::NAN,
            threshold: f64::NAN,
            decision: false,
            tp: 0,
            fp: 0,
            fn_count: 0,
            precision: f64::NAN,
            recall: f64::NAN,
            f1: f64::NAN,
            wall_time_ms: 0.0,
            skipped: true,
        }
    }
}

/// Renders a float with up to 9 significant digits, printf %g style:
/// decimal notation in a comfortable range, scientific outside it, trailing
/// zeros trimmed.
pub fn format_sig(x: f64) -> String {
    const DIGITS: i32 = 9;
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    // Exact decimal exponent from the scientific rendering.
    let sci = format!("{x:e}");
    let epos = sci.find('e').expect("scientific format");
    let exp: i32 = sci[epos + 1..].parse().expect("exponent parses");
    if !(-4..DIGITS).contains(&exp) {
        let formatted = format!("{:.*e}", (DIGITS - 1) as usize, x);
        let epos = formatted.find('e').expect("scientific format");
        let (mantissa, exponent) = formatted.split_at(epos);
        let mantissa = trim_zeros(mantissa);
        format!("{mantissa}{exponent}")
    } else {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn write_records_csv<W: Write>(records: &[SweepRecord], mut w: W) -> Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in records {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},0,{}",
            r.detector,
            r.q,
            r.k,
            r.seed,
            format_sig(r.statistic),
            format_sig(r.threshold),
            r.decision,
            r.tp,
            r.fp,
            r.fn_count,
            format_sig(r.precision),
            format_sig(r.recall),
            format_sig(r.f1),
            r.skipped,
        )?;
    }
    Ok(())
}

pub fn records_to_csv_string(records: &[SweepRecord]) -> String {
    let mut buf = Vec::new();
    write_records_csv(records, &mut buf).expect("write to memory");
    String::from_utf8(buf).expect("csv is utf8")
}

fn parse_float(field: &str, line_no: usize) -> Result<f64> {
    match field {
        "NaN" => Ok(f64::NAN),
        "inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        other => other
            .parse()
            .map_err(|_| CcdError::Parse(format!("bad float '{other}' on line {line_no}"))),
    }
}

pub fn read_records_csv(text: &str) -> Result<Vec<SweepRecord>> {
    let mut lines = text.lines().enumerate();
    let Some((_, header)) = lines.next() else {
        return Err(CcdError::Parse("empty records file".into()));
    };
    if header.trim() != CSV_HEADER {
        return Err(CcdError::Parse(format!(
            "unexpected header '{}', expected '{CSV_HEADER}'",
            header.trim()
        )));
    }
    let mut out = Vec::new();
    for (i, line) in lines {
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 15 {
            return Err(CcdError::Parse(format!(
                "line {} has {} fields, expected 15",
                i + 1,
                f.len()
            )));
        }
        let usize_at = |j: usize| -> Result<usize> {
            f[j].parse()
                .map_err(|_| CcdError::Parse(format!("bad count '{}' on line {}", f[j], i + 1)))
        };
        let bool_at = |j: usize| -> Result<bool> {
            f[j].parse()
                .map_err(|_| CcdError::Parse(format!("bad bool '{}' on line {}", f[j], i + 1)))
        };
        out.push(SweepRecord {
            detector: f[0].to_string(),
            q: usize_at(1)?,
            k: usize_at(2)?,
            seed: f[3]
                .parse()
                .map_err(|_| CcdError::Parse(format!("bad seed '{}' on line {}", f[3], i + 1)))?,
            statistic: parse_float(f[4], i + 1)?,
            threshold: parse_float(f[5], i + 1)?,
            decision: bool_at(6)?,
            tp: usize_at(7)?,
            fp: usize_at(8)?,
            fn_count: usize_at(9)?,
            precision: parse_float(f[10], i + 1)?,
            recall: parse_float(f[11], i + 1)?,
            f1: parse_float(f[12], i + 1)?,
            wall_time_ms: parse_float(f[13], i + 1)?,
            skipped: bool_at(14)?,
        });
    }
    Ok(out)
}
