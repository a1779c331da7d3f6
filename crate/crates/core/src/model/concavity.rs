//! Midpoint-concavity probe for the Laplace-model posterior after the
//! substitution `Φ = A/σ`, `ρ = 1/σ`, where the log posterior is jointly
//! concave in `(Φ, ρ)` whenever `log π(σ²)` is.

use nalgebra::DMatrix;

use super::{DataMatrix, NoisePrior, PriorSpec, Shrinkage};
use crate::distributions::RngStream;
use crate::error::{Error, Result};
use crate::graph::EdgeSet;

/// A point `(Φ, ρ)` in transformed coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct TransformedPoint {
    pub phi: DMatrix<f64>,
    pub rho: f64,
}

impl TransformedPoint {
    /// Maps `(A, σ²)` to `(A/σ, 1/σ)`.
    pub fn from_natural(a: &DMatrix<f64>, sigma2: f64) -> Self {
        let rho = 1.0 / sigma2.sqrt();
        Self { phi: a * rho, rho }
    }

    fn midpoint(&self, other: &Self) -> Self {
        Self {
            phi: (&self.phi + &other.phi) * 0.5,
            rho: 0.5 * (self.rho + other.rho),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConcavityReport {
    pub value_a: f64,
    pub value_b: f64,
    pub value_mid: f64,
    /// `f(mid) - (f(a) + f(b))/2`; nonnegative for a concave `f`.
    pub margin: f64,
}

/// Laplace-model log posterior (ψ-free, τ-free form) in transformed coordinates:
/// `log π(1/ρ²) + (np + #ℰ + p) log ρ - ½ Σ‖ρ x_i - φ_i‖² - λ₁ Σ w ‖φ_i1 - φ_i2‖ - λ₂ Σ u_j ‖φ_·j‖`.
pub fn transformed_log_posterior(
    point: &TransformedPoint,
    x: &DataMatrix,
    prior: &PriorSpec,
    edges: &EdgeSet,
) -> Result<f64> {
    let Shrinkage::Laplace { lambda1, lambda2 } = prior.shrinkage else {
        return Err(Error::InvalidArgument(
            "the concavity probe applies to the Laplace model".into(),
        ));
    };
    let rho = point.rho;
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "rho must be > 0, got {rho}"
        )));
    }
    let phi = &point.phi;
    if phi.shape() != (x.n(), x.p()) {
        return Err(Error::Dimension(
            "transformed point does not match the data shape".into(),
        ));
    }
    let (n, p) = (x.n() as f64, x.p() as f64);
    let ne = edges.len() as f64;
    let ln_prior = match prior.noise {
        NoisePrior::ScaleInvariant => 2.0 * rho.ln(),
        noise @ NoisePrior::InverseGamma { .. } => noise.ln_density(1.0 / (rho * rho)),
    };
    let fit = (x.as_matrix() * rho - phi).norm_squared();
    let fusion: f64 = edges
        .edges()
        .iter()
        .zip(edges.weights())
        .map(|(&(i1, i2), w)| w * (phi.row(i1) - phi.row(i2)).norm())
        .sum();
    let u = super::feature_weights_for(edges, x.p());
    let sparsity: f64 = phi.column_iter().zip(&u).map(|(c, uj)| uj * c.norm()).sum();
    Ok(ln_prior + (n * p + ne + p) * rho.ln() - 0.5 * fit - lambda1 * fusion - lambda2 * sparsity)
}

/// Evaluates the transformed log posterior at `a`, `b` and their midpoint.
pub fn log_posterior_unimodality_probe(
    x: &DataMatrix,
    prior: &PriorSpec,
    edges: &EdgeSet,
    a: &TransformedPoint,
    b: &TransformedPoint,
) -> Result<ConcavityReport> {
    let value_a = transformed_log_posterior(a, x, prior, edges)?;
    let value_b = transformed_log_posterior(b, x, prior, edges)?;
    let value_mid = transformed_log_posterior(&a.midpoint(b), x, prior, edges)?;
    Ok(ConcavityReport {
        value_a,
        value_b,
        value_mid,
        margin: value_mid - 0.5 * (value_a + value_b),
    })
}

/// Probe at a random pair: `Φ` entries uniform within `±2·max|x|` scaled by `ρ`,
/// `ρ` log-uniform on `[0.1, 10]`.
pub fn random_unimodality_probe(
    x: &DataMatrix,
    prior: &PriorSpec,
    edges: &EdgeSet,
    rng: &mut RngStream,
) -> Result<ConcavityReport> {
    let span = 2.0 * x.as_matrix().amax().max(1.0);
    let draw = |rng: &mut RngStream| {
        let rho = (10f64.ln() * (2.0 * rng.open01() - 1.0)).exp();
        let phi = DMatrix::from_fn(x.n(), x.p(), |_, _| rho * span * (2.0 * rng.open01() - 1.0));
        TransformedPoint { phi, rho }
    };
    let a = draw(rng);
    let b = draw(rng);
    log_posterior_unimodality_probe(x, prior, edges, &a, &b)
}
