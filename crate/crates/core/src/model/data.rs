use nalgebra::{DMatrix, DVectorView};

use crate::error::{Error, Result};

/// The `n×p` observation matrix: one row per observation, one column per feature.
#[derive(Clone, Debug, PartialEq)]
pub struct DataMatrix {
    values: DMatrix<f64>,
}

impl DataMatrix {
    pub fn new(values: DMatrix<f64>) -> Result<Self> {
        let (n, p) = values.shape();
        if n < 2 || p < 1 {
            return Err(Error::EmptyGraph(format!(
                "data must have at least 2 rows and 1 column, got {n}x{p}"
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            // column-major storage
            return Err(Error::domain(
                "data matrix",
                format!("non-finite entry at row {}, column {}", pos % n, pos / n),
            ));
        }
        Ok(Self { values })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let p = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|r| r.len() != p) {
            return Err(Error::Dimension(format!(
                "row {bad} has {} values, expected {p}",
                rows[bad].len()
            )));
        }
        Self::new(DMatrix::from_fn(n, p, |i, j| rows[i][j]))
    }

    pub fn n(&self) -> usize {
        self.values.nrows()
    }

    pub fn p(&self) -> usize {
        self.values.ncols()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[(i, j)]
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        self.values.row(i).iter().cloned().collect()
    }

    pub fn column(&self, j: usize) -> DVectorView<'_, f64> {
        self.values.column(j)
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.values
    }

    /// Row-major `n×n` table of squared Euclidean distances.
    pub fn pairwise_sq_distances(&self) -> Vec<f64> {
        pairwise_sq_distances(&self.values)
    }

    /// Median Euclidean distance over all row pairs.
    pub fn median_pairwise_distance(&self) -> f64 {
        median_pairwise_distance(&self.values)
    }

    /// `‖x_·j‖₂ / √n` for every column.
    pub fn column_rms(&self) -> Vec<f64> {
        column_rms(&self.values)
    }
}

pub(crate) fn pairwise_sq_distances(m: &DMatrix<f64>) -> Vec<f64> {
    let n = m.nrows();
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for k in (i + 1)..n {
            let d: f64 = (0..m.ncols())
                .map(|j| (m[(i, j)] - m[(k, j)]).powi(2))
                .sum();
            out[i * n + k] = d;
            out[k * n + i] = d;
        }
    }
    out
}

pub(crate) fn median_pairwise_distance(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    let d2 = pairwise_sq_distances(m);
    let mut d: Vec<f64> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |k| (i, k)))
        .map(|(i, k)| d2[i * n + k].sqrt())
        .collect();
    median(&mut d)
}

pub(crate) fn column_rms(m: &DMatrix<f64>) -> Vec<f64> {
    let n = m.nrows() as f64;
    m.column_iter().map(|c| c.norm() / n.sqrt()).collect()
}

pub(crate) fn median(values: &mut [f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid]
    } else {
        0.5 * (values[mid - 1] + values[mid])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_degenerate_shapes() {
        assert!(DataMatrix::from_rows(&[vec![1.0, 2.0]]).is_err());
        assert!(DataMatrix::from_rows(&[vec![], vec![]]).is_err());
        assert!(DataMatrix::from_rows(&[vec![1.0], vec![2.0, 3.0]]).is_err());
        assert!(DataMatrix::from_rows(&[vec![1.0], vec![f64::NAN]]).is_err());
    }

    #[test]
    fn accessors() {
        let x = DataMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0], vec![5.0, 6.0]]).unwrap();
        assert_eq!((x.n(), x.p()), (3, 2));
        assert_eq!(x.row(1), vec![3.0, 4.0]);
        assert_eq!(
            x.column(1).iter().cloned().collect::<Vec<_>>(),
            vec![2.0, 4.0, 6.0]
        );
        assert_eq!(x.get(2, 0), 5.0);
    }

    #[test]
    fn median_distance() {
        let x = DataMatrix::from_rows(&[vec![0.0], vec![1.0], vec![3.0]]).unwrap();
        // distances 1, 3, 2
        assert_eq!(x.median_pairwise_distance(), 2.0);
    }
}
