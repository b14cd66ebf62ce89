//! Signal CSV format: a `# tau=<real>` comment line, a header of series
//! labels, then one row per time step with one column per series.

use std::io::Write;

use crate::error::{CcdError, Result};
use crate::signals::SignalSet;

pub fn write_signals_csv<W: Write>(s: &SignalSet, mut w: W) -> Result<()> {
    writeln!(w, "# tau={}", s.sampling_period)?;
    writeln!(w, "{}", s.labels.join(","))?;
    for t in 0..s.len() {
        let row: Vec<String> = (0..s.d()).map(|i| format!("{}", s.series(i)[t])).collect();
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

pub fn signals_to_csv_string(s: &SignalSet) -> String {
    let mut buf = Vec::new();
    write_signals_csv(s, &mut buf).expect("write to memory");
    String::from_utf8(buf).expect("csv is utf8")
}

pub fn read_signals_csv(text: &str) -> Result<SignalSet> {
    let mut tau = 1.0_f64;
    let mut labels: Option<Vec<String>> = None;
    let mut columns: Vec<Vec<f64>> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(value) = comment.trim().strip_prefix("tau=") {
                tau = value.trim().parse().map_err(|_| {
                    CcdError::Parse(format!("bad tau '{}' on line {}", value, i + 1))
                })?;
            }
            continue;
        }
        match &labels {
            None => {
                let names: Vec<String> = line.split(',').map(|s| s.trim().to_string()).collect();
                columns = vec![Vec::new(); names.len()];
                labels = Some(names);
            }
            Some(names) => {
                let fields: Vec<&str> = line.split(',').collect();
                if fields.len() != names.len() {
                    return Err(CcdError::Parse(format!(
                        "line {} has {} fields, expected {}",
                        i + 1,
                        fields.len(),
                        names.len()
                    )));
                }
                for (col, field) in columns.iter_mut().zip(fields) {
                    col.push(field.trim().parse().map_err(|_| {
                        CcdError::Parse(format!("bad value '{}' on line {}", field, i + 1))
                    })?);
                }
            }
        }
    }
    let labels = labels.ok_or_else(|| CcdError::Parse("no header line found".into()))?;
    SignalSet::new(columns, tau, labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signals::{generate_pair, DgpSpec};

    #[test]
    fn signals_round_trip_through_csv() {
        let mut spec = DgpSpec::default_coupled(6);
        spec.n_samples = 200;
        let (signals, _) = generate_pair(&spec).unwrap();
        let text = signals_to_csv_string(&signals);
        assert!(text.starts_with("# tau=1\nx,y\n"));
        let back = read_signals_csv(&text).unwrap();
        assert_eq!(back.labels, signals.labels);
        assert_eq!(back.sampling_period, 1.0);
        assert_eq!(back.len(), 200);
        // Values round-trip through the shortest-float rendering.
        for i in 0..2 {
            for t in 0..200 {
                let a = signals.series(i)[t];
                let b = back.series(i)[t];
                assert!((a - b).abs() <= 1e-15 * a.abs().max(1.0), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn tau_comment_is_parsed() {
        let text = "# tau=2.5\na,b\n1,2\n3,4\n";
        let s = read_signals_csv(text).unwrap();
        assert_eq!(s.sampling_period, 2.5);
        assert_eq!(s.series(1), &[2.0, 4.0]);
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(read_signals_csv("a,b\n1,2\n3\n").is_err());
        assert!(read_signals_csv("").is_err());
        assert!(read_signals_csv("a,b\n1,zap\n").is_err());
    }
}
