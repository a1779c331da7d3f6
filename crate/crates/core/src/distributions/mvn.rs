use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use rand_distr::{Distribution, StandardNormal};

use super::RngStream;
use crate::error::{Error, Result};

const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// Gaussian `N(P⁻¹h, scale · P⁻¹)` parameterized by its precision factor.
/// The covariance is never formed; draws and densities go through the
/// Cholesky factor of `P`.
#[derive(Clone, Debug)]
pub struct MvnPrecision {
    mean: DVector<f64>,
    chol: Cholesky<f64, Dyn>,
    scale: f64,
}

impl MvnPrecision {
    /// `block` names the parameter block in error messages.
    pub fn new(h: &DVector<f64>, precision: DMatrix<f64>, scale: f64, block: &str) -> Result<Self> {
        if precision.nrows() != h.len() || !precision.is_square() {
            return Err(Error::Dimension(format!(
                "{block}: precision is {}x{}, linear term has length {}",
                precision.nrows(),
                precision.ncols(),
                h.len()
            )));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::domain(
                block,
                format!("scale must be finite and > 0, got {scale}"),
            ));
        }
        if precision.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain(
                block,
                "precision matrix has non-finite entries",
            ));
        }
        let chol = Cholesky::new(precision)
            .ok_or_else(|| Error::domain(block, "precision matrix is not positive definite"))?;
        let mean = chol.solve(h);
        Ok(Self { mean, chol, scale })
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn sample(&self, rng: &mut RngStream) -> DVector<f64> {
        let z = DVector::from_iterator(
            self.dim(),
            (0..self.dim()).map(|_| StandardNormal.sample(rng)),
        );
        // Lᵀ x = z gives x ~ N(0, P⁻¹)
        let x = self
            .chol
            .l_dirty()
            .tr_solve_lower_triangular(&z)
            .expect("cholesky factor has a positive diagonal");
        &self.mean + x * self.scale.sqrt()
    }

    pub fn ln_pdf(&self, x: &DVector<f64>) -> f64 {
        let n = self.dim() as f64;
        let d = x - &self.mean;
        let l = self.chol.l();
        let ltd = l.transpose() * d;
        let ln_det_p: f64 = 2.0 * l.diagonal().iter().map(|v| v.ln()).sum::<f64>();
        -0.5 * n * (LN_2PI + self.scale.ln()) + 0.5 * ln_det_p
            - 0.5 * ltd.norm_squared() / self.scale
    }
}

pub fn sample_mvn_precision(
    h: &DVector<f64>,
    precision: DMatrix<f64>,
    scale: f64,
    rng: &mut RngStream,
) -> Result<DVector<f64>> {
    Ok(MvnPrecision::new(h, precision, scale, "mvn")?.sample(rng))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_precision_moments() {
        let n = 3;
        let h = DVector::from_element(n, 8.0);
        let p = DMatrix::from_diagonal_element(n, n, 4.0);
        let mvn = MvnPrecision::new(&h, p, 1.0, "test").unwrap();
        let mut rng = RngStream::new(4, 0);
        let draws = 100_000;
        let mut sum = DVector::zeros(n);
        let mut sq = DVector::zeros(n);
        for _ in 0..draws {
            let x = mvn.sample(&mut rng);
            sum += &x;
            sq += x.component_mul(&x);
        }
        for k in 0..n {
            let mean = sum[k] / draws as f64;
            let var = sq[k] / draws as f64 - mean * mean;
            assert!(
                (mean - 2.0).abs() < 3.0 * (0.25f64 / draws as f64).sqrt(),
                "{mean}"
            );
            assert!((var - 0.25).abs() < 0.0125, "{var}");
        }
    }

    #[test]
    fn indefinite_precision_names_block() {
        let p = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        let err = MvnPrecision::new(&DVector::zeros(2), p, 1.0, "column 3").unwrap_err();
        assert!(err.to_string().contains("column 3"));
    }

    #[test]
    fn density_matches_explicit_formula() {
        let p = DMatrix::from_row_slice(2, 2, &[2.0, -0.5, -0.5, 1.0]);
        let h = DVector::from_vec(vec![0.3, -1.0]);
        let mvn = MvnPrecision::new(&h, p.clone(), 0.7, "t").unwrap();
        let x = DVector::from_vec(vec![0.1, 0.2]);
        let cov = p.clone().try_inverse().unwrap() * 0.7;
        let d = &x - p.clone().try_inverse().unwrap() * &h;
        let q = (d.transpose() * cov.clone().try_inverse().unwrap() * &d)[0];
        let expected = -LN_2PI - 0.5 * cov.determinant().ln() - 0.5 * q;
        assert!((mvn.ln_pdf(&x) - expected).abs() < 1e-12);
    }
}
