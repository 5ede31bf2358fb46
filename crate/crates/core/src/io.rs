//! File formats shared by the library and the CLI.
//!
//! Series CSV: one real value per line, an optional single header line
//! starting with a non-numeric token, blank lines ignored, `.` as the
//! decimal point. Basis CSV: one vector per column, M rows. Values are
//! written with Rust's shortest round-trip formatting, so written files
//! parse back to identical bits.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use nalgebra::DVector;

use crate::bench::{parse_config, ExperimentConfig, ExperimentResult};
use crate::decomposition::Decomposition;
use crate::error::SsaError;
use crate::projection::{orthonormalize, ProjectionBasis};
use crate::series::TimeSeries;
use crate::Result;

/// Reads a one-column series CSV.
pub fn read_series_csv(path: &Path) -> Result<TimeSeries> {
    let text = fs::read_to_string(path)?;
    let mut values = Vec::new();
    let mut first_content_line = true;
    for (line_no, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        match line.parse::<f64>() {
            Ok(v) => values.push(v),
            Err(_) if first_content_line => {} // header
            Err(_) => {
                return Err(SsaError::Parse(format!(
                    "{}:{}: expected a number, got `{line}`",
                    path.display(),
                    line_no + 1
                )));
            }
        }
        first_content_line = false;
    }
    TimeSeries::new(values)
}

/// Writes a series as one value per line, no header.
pub fn write_series_csv(path: &Path, series: &TimeSeries) -> Result<()> {
    let mut out = String::new();
    for v in series.values() {
        writeln!(out, "{v}").expect("string write");
    }
    fs::write(path, out)?;
    Ok(())
}

/// Reads basis vectors stored one per column (M rows) and orthonormalizes
/// them. Returns the basis and the number of dropped dependent vectors.
pub fn read_basis_csv(path: &Path, ambient_dim: usize) -> Result<(ProjectionBasis, usize)> {
    let text = fs::read_to_string(path)?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (line_no, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let row: std::result::Result<Vec<f64>, _> = line
            .split(',')
            .map(|cell| cell.trim().parse::<f64>())
            .collect();
        match row {
            Ok(row) => rows.push(row),
            Err(_) if rows.is_empty() => {} // header
            Err(_) => {
                return Err(SsaError::Parse(format!(
                    "{}:{}: expected comma-separated numbers",
                    path.display(),
                    line_no + 1
                )));
            }
        }
    }
    if rows.is_empty() {
        return Err(SsaError::EmptyBasis);
    }
    let width = rows[0].len();
    if rows.iter().any(|r| r.len() != width) {
        return Err(SsaError::Parse(format!(
            "{}: ragged rows in basis file",
            path.display()
        )));
    }
    if rows.len() != ambient_dim {
        return Err(SsaError::DimensionMismatch {
            context: "basis file rows",
            expected: ambient_dim,
            found: rows.len(),
        });
    }
    let raw: Vec<DVector<f64>> = (0..width)
        .map(|j| DVector::from_iterator(ambient_dim, rows.iter().map(|r| r[j])))
        .collect();
    let basis = orthonormalize(&raw)?;
    let dropped = width - basis.count();
    Ok((basis, dropped))
}

/// Writes named reconstruction components: an `index` column plus one
/// column per component.
pub fn write_reconstruction_csv(path: &Path, components: &[(String, TimeSeries)]) -> Result<()> {
    if components.is_empty() {
        return Err(SsaError::ConfigInvalid("nothing to write".into()));
    }
    let n = components[0].1.len();
    let mut out = String::from("index");
    for (name, series) in components {
        if series.len() != n {
            return Err(SsaError::LengthMismatch {
                expected: n,
                found: series.len(),
            });
        }
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    for i in 0..n {
        write!(out, "{}", i + 1).expect("string write");
        for (_, series) in components {
            write!(out, ",{}", series.values()[i]).expect("string write");
        }
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

/// Writes the triples summary of a decomposition:
/// `index,kind,magnitude,contribution`.
pub fn write_triples_csv(path: &Path, decomposition: &Decomposition) -> Result<()> {
    let contributions = crate::decomposition::contributions(decomposition)
        .unwrap_or_else(|_| vec![0.0; decomposition.len()]);
    let mut out = String::from("index,kind,magnitude,contribution\n");
    for (i, (triple, contribution)) in decomposition.triples.iter().zip(contributions).enumerate() {
        writeln!(
            out,
            "{},{},{},{}",
            i + 1,
            triple.kind,
            triple.magnitude,
            contribution
        )
        .expect("string write");
    }
    fs::write(path, out)?;
    Ok(())
}

/// Writes left (or right) triple vectors, one column per triple, with an
/// `et<i>` header row.
pub fn write_vectors_csv(path: &Path, decomposition: &Decomposition, left: bool) -> Result<()> {
    if decomposition.is_empty() {
        fs::write(path, "")?;
        return Ok(());
    }
    let rows = if left {
        decomposition.window
    } else {
        decomposition.lag_count()
    };
    let mut out = String::new();
    for i in 0..decomposition.len() {
        if i > 0 {
            out.push(',');
        }
        write!(out, "et{}", i + 1).expect("string write");
    }
    out.push('\n');
    for row in 0..rows {
        for (i, triple) in decomposition.triples.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let vector = if left { &triple.left } else { &triple.right };
            write!(out, "{}", vector[row]).expect("string write");
        }
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

/// Writes an experiment result table (see [`ExperimentResult::to_csv`]).
pub fn write_result_csv(path: &Path, result: &ExperimentResult) -> Result<()> {
    fs::write(path, result.to_csv())?;
    Ok(())
}

/// Reads and validates a flat key-value experiment config file.
pub fn read_config_file(path: &Path) -> Result<ExperimentConfig> {
    let text = fs::read_to_string(path)?;
    parse_config(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    #[test]
    fn series_csv_round_trip() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("x.csv");
        let x = TimeSeries::new(vec![1.5, -2.25, 1e-17, 3.0, 0.1 + 0.2]).unwrap();
        write_series_csv(&path, &x).unwrap();
        let back = read_series_csv(&path).unwrap();
        for (a, b) in back.values().iter().zip(x.values()) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn series_csv_header_and_blanks() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("x.csv");
        fs::write(&path, "value\n\n1.0\n2.0\n\n3.5\n").unwrap();
        let x = read_series_csv(&path).unwrap();
        assert_eq!(x.values(), &[1.0, 2.0, 3.5]);
    }

    #[test]
    fn series_csv_rejects_mid_file_junk() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("x.csv");
        fs::write(&path, "1.0\n2.0\noops\n").unwrap();
        assert!(matches!(read_series_csv(&path), Err(SsaError::Parse(_))));
    }

    #[test]
    fn basis_csv_reads_columns_and_reports_drops() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("b.csv");
        // second column is twice the first: dependent, dropped
        fs::write(&path, "1.0,2.0,0.0\n0.0,0.0,1.0\n1.0,2.0,0.0\n").unwrap();
        let (basis, dropped) = read_basis_csv(&path, 3).unwrap();
        assert_eq!(basis.count(), 2);
        assert_eq!(dropped, 1);

        assert!(matches!(
            read_basis_csv(&path, 4),
            Err(SsaError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn reconstruction_csv_layout() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("r.csv");
        let trend = TimeSeries::new(vec![1.0, 2.0, 3.0]).unwrap();
        let rest = TimeSeries::new(vec![0.5, 0.25, 0.125]).unwrap();
        write_reconstruction_csv(&path, &[("trend".into(), trend), ("residual".into(), rest)])
            .unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "index,trend,residual");
        assert_eq!(lines[1], "1,1,0.5");
        assert_eq!(lines.len(), 4);
    }
}
