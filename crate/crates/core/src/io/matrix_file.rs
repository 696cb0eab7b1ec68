//! Delimited matrix files. Row 1 holds sample (column) names after a corner
//! cell, column 1 holds feature (row) names. Internally matrices are always
//! features x samples; the orientation flag says how the file is laid out.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixFormat {
    Tsv,
    Csv,
}

impl MatrixFormat {
    fn delimiter(&self) -> char {
        match self {
            MatrixFormat::Tsv => '\t',
            MatrixFormat::Csv => ',',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// Rows are features, columns are samples (the internal layout).
    FeaturesBySamples,
    /// Rows are samples; the parsed table is transposed on load.
    SamplesByFeatures,
}

/// A dense matrix with unique row and column names.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledMatrix {
    pub matrix: DenseMatrix,
    pub row_names: Vec<String>,
    pub col_names: Vec<String>,
}

impl LabeledMatrix {
    pub fn new(
        matrix: DenseMatrix,
        row_names: Vec<String>,
        col_names: Vec<String>,
    ) -> Result<Self> {
        if row_names.len() != matrix.rows() {
            return Err(Error::DimensionMismatch {
                what: "row names",
                expected: matrix.rows(),
                got: row_names.len(),
            });
        }
        if col_names.len() != matrix.cols() {
            return Err(Error::DimensionMismatch {
                what: "column names",
                expected: matrix.cols(),
                got: col_names.len(),
            });
        }
        check_unique(&row_names, "row")?;
        check_unique(&col_names, "column")?;
        Ok(LabeledMatrix {
            matrix,
            row_names,
            col_names,
        })
    }
}

fn check_unique(names: &[String], axis: &str) -> Result<()> {
    let mut seen = std::collections::HashSet::with_capacity(names.len());
    for name in names {
        if !seen.insert(name.as_str()) {
            return Err(Error::invalid(format!("duplicate {axis} name '{name}'")));
        }
    }
    Ok(())
}

/// Parses a delimited table into a features-by-samples matrix.
pub fn read_matrix(
    path: impl AsRef<Path>,
    format: MatrixFormat,
    orientation: Orientation,
) -> Result<LabeledMatrix> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let loc = |line: usize, msg: String| Error::Parse {
        path: path.display().to_string(),
        line,
        msg,
    };
    let delim = format.delimiter();

    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines
        .next()
        .ok_or_else(|| loc(1, "empty matrix file".to_string()))?;
    let mut header_cells = header.split(delim);
    header_cells.next(); // corner cell, content ignored
    let col_names: Vec<String> = header_cells.map(|c| c.trim().to_string()).collect();
    if col_names.is_empty() {
        return Err(loc(1, "header has no column names".to_string()));
    }

    let mut row_names = Vec::new();
    let mut data = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        let mut cells = line.split(delim);
        let name = cells
            .next()
            .ok_or_else(|| loc(line_no, "missing row name".to_string()))?
            .trim()
            .to_string();
        if name.is_empty() {
            return Err(loc(line_no, "empty row name".to_string()));
        }
        let mut count = 0usize;
        for cell in cells {
            let cell = cell.trim();
            if cell.is_empty() {
                return Err(loc(
                    line_no,
                    format!("missing value in column {}", count + 2),
                ));
            }
            let value: f64 = cell.parse().map_err(|_| {
                loc(line_no, format!("cannot parse '{cell}' as a number"))
            })?;
            if !value.is_finite() {
                return Err(loc(line_no, format!("non-finite value '{cell}'")));
            }
            data.push(value);
            count += 1;
        }
        if count != col_names.len() {
            return Err(loc(
                line_no,
                format!("expected {} values, found {count}", col_names.len()),
            ));
        }
        row_names.push(name);
    }
    if row_names.is_empty() {
        return Err(loc(1, "matrix has no data rows".to_string()));
    }

    let matrix = DenseMatrix::from_vec(row_names.len(), col_names.len(), data)?;
    let labeled = LabeledMatrix::new(matrix, row_names, col_names)?;
    Ok(match orientation {
        Orientation::FeaturesBySamples => labeled,
        Orientation::SamplesByFeatures => LabeledMatrix {
            matrix: labeled.matrix.transposed(),
            row_names: labeled.col_names,
            col_names: labeled.row_names,
        },
    })
}

/// Writes the matrix in the internal features-by-samples orientation with
/// 17 significant digits, enough for an exact f64 round-trip.
pub fn write_matrix(
    path: impl AsRef<Path>,
    m: &LabeledMatrix,
    format: MatrixFormat,
) -> Result<()> {
    let delim = format.delimiter();
    let mut out = String::new();
    for name in &m.col_names {
        out.push(delim);
        out.push_str(name);
    }
    out.push('\n');
    for (i, name) in m.row_names.iter().enumerate() {
        out.push_str(name);
        for j in 0..m.matrix.cols() {
            let _ = write!(out, "{}{:.16e}", delim, m.matrix.get(i, j));
        }
        out.push('\n');
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Centers and scales each column (sample) to mean 0 and sample standard
/// deviation 1 (divisor n-1). A constant column is an error.
pub fn normalize_columns(m: &LabeledMatrix) -> Result<LabeledMatrix> {
    let p = m.matrix.rows();
    let n = m.matrix.cols();
    if p < 2 {
        return Err(Error::invalid(
            "column normalization needs at least 2 rows per column",
        ));
    }
    let mut out = m.matrix.clone();
    for j in 0..n {
        let mut mean = 0.0;
        for i in 0..p {
            mean += m.matrix.get(i, j);
        }
        mean /= p as f64;
        let mut var = 0.0;
        for i in 0..p {
            let d = m.matrix.get(i, j) - mean;
            var += d * d;
        }
        let sd = (var / (p as f64 - 1.0)).sqrt();
        if sd == 0.0 {
            return Err(Error::invalid(format!(
                "column '{}' is constant and cannot be scaled",
                m.col_names[j]
            )));
        }
        for i in 0..p {
            out.set(i, j, (m.matrix.get(i, j) - mean) / sd);
        }
    }
    LabeledMatrix::new(out, m.row_names.clone(), m.col_names.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    fn write_tmp(contents: &str) -> (tempfile::TempDir, std::path::PathBuf) {
        let dir = tempdir().unwrap();
        let path = dir.path().join("m.tsv");
        std::fs::write(&path, contents).unwrap();
        (dir, path)
    }

    #[test]
    fn parses_a_small_table() {
        let (_d, path) = write_tmp("id\ts1\ts2\ng1\t1.5\t2\ng2\t-3\t0.25\n");
        let m = read_matrix(&path, MatrixFormat::Tsv, Orientation::FeaturesBySamples).unwrap();
        assert_eq!(m.row_names, vec!["g1", "g2"]);
        assert_eq!(m.col_names, vec!["s1", "s2"]);
        assert_eq!(m.matrix.get(1, 1), 0.25);
    }

    #[test]
    fn transposes_sample_major_files() {
        let (_d, path) = write_tmp("\tg1\tg2\tg3\ns1\t1\t2\t3\ns2\t4\t5\t6\n");
        let m = read_matrix(&path, MatrixFormat::Tsv, Orientation::SamplesByFeatures).unwrap();
        assert_eq!(m.row_names, vec!["g1", "g2", "g3"]);
        assert_eq!(m.col_names, vec!["s1", "s2"]);
        assert_eq!(m.matrix.get(2, 0), 3.0);
        assert_eq!(m.matrix.get(0, 1), 4.0);
    }

    #[test]
    fn reports_errors_with_line_numbers() {
        let (_d, path) = write_tmp("id\ts1\ts2\ng1\t1\t2\ng2\t3\n");
        let err =
            read_matrix(&path, MatrixFormat::Tsv, Orientation::FeaturesBySamples).unwrap_err();
        assert!(err.to_string().contains(":3:"), "{err}");

        let (_d, path) = write_tmp("id\ts1\ng1\tx\n");
        let err =
            read_matrix(&path, MatrixFormat::Tsv, Orientation::FeaturesBySamples).unwrap_err();
        assert!(err.to_string().contains("cannot parse 'x'"));

        let (_d, path) = write_tmp("id\ts1\ng1\t1\ng1\t2\n");
        let err =
            read_matrix(&path, MatrixFormat::Tsv, Orientation::FeaturesBySamples).unwrap_err();
        assert!(err.to_string().contains("duplicate row name 'g1'"));

        let (_d, path) = write_tmp("id\ts1\ng1\t1\ng2\t\n");
        let err =
            read_matrix(&path, MatrixFormat::Tsv, Orientation::FeaturesBySamples).unwrap_err();
        assert!(err.to_string().contains("missing value"));
    }

    #[test]
    fn round_trips_exactly() {
        let dir = tempdir().unwrap();
        let path = dir.path().join("roundtrip.csv");
        let matrix = DenseMatrix::from_fn(3, 2, |i, j| {
            (1.0 + i as f64 * 717.0).sin() * (j as f64 + 0.12345678901234567)
        });
        let m = LabeledMatrix::new(
            matrix,
            vec!["a".into(), "b".into(), "c".into()],
            vec!["x".into(), "y".into()],
        )
        .unwrap();
        write_matrix(&path, &m, MatrixFormat::Csv).unwrap();
        let back = read_matrix(&path, MatrixFormat::Csv, Orientation::FeaturesBySamples).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn normalizes_columns() {
        let m = LabeledMatrix::new(
            DenseMatrix::from_vec(3, 1, vec![1.0, 2.0, 3.0]).unwrap(),
            vec!["a".into(), "b".into(), "c".into()],
            vec!["s".into()],
        )
        .unwrap();
        let z = normalize_columns(&m).unwrap();
        assert_eq!(z.matrix.data(), &[-1.0, 0.0, 1.0]);
        // already-scaled column is a fixed point
        let z2 = normalize_columns(&z).unwrap();
        for (a, b) in z.matrix.data().iter().zip(z2.matrix.data()) {
            assert!((a - b).abs() < 1e-12);
        }

        let constant = LabeledMatrix::new(
            DenseMatrix::from_vec(3, 1, vec![2.0, 2.0, 2.0]).unwrap(),
            vec!["a".into(), "b".into(), "c".into()],
            vec!["flat".into()],
        )
        .unwrap();
        let err = normalize_columns(&constant).unwrap_err();
        assert!(err.to_string().contains("flat"));
    }
}
