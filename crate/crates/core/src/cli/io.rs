use std::fs;
use std::path::Path;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::model::DataMatrix;

fn reader(path: &Path) -> Result<csv::Reader<fs::File>> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(file))
}

fn record_error(path: &Path, row: usize, e: csv::Error) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        row,
        column: 0,
        detail: e.to_string(),
    }
}

fn headers(path: &Path, r: &mut csv::Reader<fs::File>) -> Result<Vec<String>> {
    Ok(r.headers()
        .map_err(|e| record_error(path, 0, e))?
        .iter()
        .map(|h| h.trim().to_string())
        .collect())
}

/// Reads a numeric table whose header is `f1,…,fp`. Rows and columns in
/// errors count from 1, excluding the header.
pub fn read_data(path: &Path) -> Result<DataMatrix> {
    let mut r = reader(path)?;
    let head = headers(path, &mut r)?;
    if head.is_empty() {
        return Err(Error::Schema {
            path: path.to_path_buf(),
            detail: "no columns".into(),
        });
    }
    for (j, h) in head.iter().enumerate() {
        if *h != format!("f{}", j + 1) {
            return Err(Error::Schema {
                path: path.to_path_buf(),
                detail: format!("column {} is named '{h}', expected 'f{}'", j + 1, j + 1),
            });
        }
    }
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| record_error(path, i + 1, e))?;
        let mut row = Vec::with_capacity(head.len());
        for (j, cell) in rec.iter().enumerate() {
            let v: f64 = cell.trim().parse().map_err(|_| Error::Parse {
                path: path.to_path_buf(),
                row: i + 1,
                column: j + 1,
                detail: format!("cannot parse '{cell}' as a number"),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    row: i + 1,
                    column: j + 1,
                    detail: format!("value '{cell}' is not finite"),
                });
            }
            row.push(v);
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::Schema {
            path: path.to_path_buf(),
            detail: "no data rows".into(),
        });
    }
    DataMatrix::from_rows(&rows)
}

/// Reads the first column named one of `names`.
pub fn read_column(path: &Path, names: &[&str]) -> Result<Vec<String>> {
    let mut r = reader(path)?;
    let head = headers(path, &mut r)?;
    let col = head
        .iter()
        .position(|h| names.contains(&h.as_str()))
        .ok_or_else(|| Error::Schema {
            path: path.to_path_buf(),
            detail: format!(
                "no column named {} (found: {})",
                names.join(" or "),
                head.join(",")
            ),
        })?;
    let mut out = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| record_error(path, i + 1, e))?;
        out.push(rec.get(col).unwrap_or_default().trim().to_string());
    }
    Ok(out)
}

/// Reads 0/1 (or true/false) flags from column `selected`.
pub fn read_flags(path: &Path) -> Result<Vec<bool>> {
    let cells = read_column(path, &["selected"])?;
    let mut r = reader(path)?;
    let col = headers(path, &mut r)?
        .iter()
        .position(|h| h == "selected")
        .unwrap_or(0)
        + 1;
    cells
        .iter()
        .enumerate()
        .map(|(i, c)| match c.as_str() {
            "1" | "true" => Ok(true),
            "0" | "false" => Ok(false),
            _ => Err(Error::Parse {
                path: path.to_path_buf(),
                row: i + 1,
                column: col,
                detail: format!("expected 0 or 1, got '{c}'"),
            }),
        })
        .collect()
}

pub fn write_text(path: &Path, body: &str) -> Result<()> {
    fs::write(path, body).map_err(|e| Error::io(path, e))
}

fn csv_string(header: &[String], rows: impl Iterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

pub fn matrix_csv(m: &DMatrix<f64>) -> String {
    let header: Vec<String> = (1..=m.ncols()).map(|j| format!("f{j}")).collect();
    csv_string(
        &header,
        m.row_iter()
            .map(|r| r.iter().map(|v| v.to_string()).collect()),
    )
}

pub fn labels_csv(labels: &[usize]) -> String {
    csv_string(
        &["label".to_string()],
        labels.iter().map(|l| vec![(l + 1).to_string()]),
    )
}

pub fn clusters_csv(labels: &[usize]) -> String {
    csv_string(
        &["obs_id".to_string(), "cluster".to_string()],
        labels
            .iter()
            .enumerate()
            .map(|(i, l)| vec![(i + 1).to_string(), (l + 1).to_string()]),
    )
}

pub fn flags_csv(flags: &[bool]) -> String {
    csv_string(
        &["feature".to_string(), "selected".to_string()],
        flags
            .iter()
            .enumerate()
            .map(|(j, &f)| vec![(j + 1).to_string(), u8::from(f).to_string()]),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tmp(body: &str) -> (tempfile::TempDir, std::path::PathBuf) {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x.csv");
        fs::write(&p, body).unwrap();
        (dir, p)
    }

    #[test]
    fn round_trips_a_matrix() {
        let m = DMatrix::from_row_slice(2, 2, &[1.5, -2.0, 0.1, 3.0]);
        let (_d, p) = tmp(&matrix_csv(&m));
        assert_eq!(read_data(&p).unwrap().as_matrix(), &m);
    }

    #[test]
    fn bad_cell_reports_row_and_column() {
        let (_d, p) = tmp("f1,f2\n1,2\n3,abc\n");
        match read_data(&p) {
            Err(Error::Parse { row, column, .. }) => assert_eq!((row, column), (2, 2)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bad_header_names_the_column() {
        let (_d, p) = tmp("f1,x\n1,2\n");
        let e = read_data(&p).unwrap_err().to_string();
        assert!(e.contains("column 2") && e.contains("'x'"), "{e}");
    }

    #[test]
    fn missing_file_names_the_path() {
        let e = read_data(Path::new("/nonexistent/data.csv")).unwrap_err();
        assert!(e.to_string().contains("/nonexistent/data.csv"));
    }

    #[test]
    fn flags_and_labels() {
        let (_d, p) = tmp(&flags_csv(&[true, false]));
        assert_eq!(read_flags(&p).unwrap(), vec![true, false]);
        let (_e, q) = tmp(&clusters_csv(&[0, 0, 1]));
        assert_eq!(
            read_column(&q, &["label", "cluster"]).unwrap(),
            vec!["1", "1", "2"]
        );
        assert!(read_column(&q, &["label"]).is_err());
    }
}
