use rand_distr::{Distribution, StandardNormal};

use super::RngStream;
use crate::error::{Error, Result};

const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// Inverse-Gaussian distribution `IGauss(μ, λ)` with density
/// `sqrt(λ/(2π)) · x^(-3/2) · exp(-λ(x-μ)² / (2μ²x))` on `x > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InverseGaussian {
    mu: f64,
    lambda: f64,
}

impl InverseGaussian {
    /// `mu` may be `+inf`, in which case the law is the Lévy limit
    /// `IG(1/2, λ/2)` reached as the fused difference vanishes.
    pub fn new(mu: f64, lambda: f64) -> Result<Self> {
        if !(mu > 0.0) {
            return Err(Error::domain(
                "inverse gaussian",
                format!("mean must be > 0, got {mu}"),
            ));
        }
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::domain(
                "inverse gaussian",
                format!("shape must be finite and > 0, got {lambda}"),
            ));
        }
        Ok(Self { mu, lambda })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn variance(&self) -> f64 {
        self.mu.powi(3) / self.lambda
    }

    pub fn ln_pdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return f64::NEG_INFINITY;
        }
        let quad = if self.mu.is_infinite() {
            self.lambda / (2.0 * x)
        } else {
            self.lambda * (x - self.mu).powi(2) / (2.0 * self.mu * self.mu * x)
        };
        0.5 * (self.lambda.ln() - LN_2PI) - 1.5 * x.ln() - quad
    }

    /// Michael–Schucany–Haas transform method.
    pub fn sample(&self, rng: &mut RngStream) -> f64 {
        let z: f64 = StandardNormal.sample(rng);
        let y = z * z;
        if y == 0.0 {
            return self.mu.min(f64::MAX);
        }
        if self.mu.is_infinite() {
            return self.lambda / y;
        }
        let (mu, lambda) = (self.mu, self.lambda);
        let my = mu * y;
        // smaller root of the quadratic, written without cancellation:
        // x1 = mu + mu(my - s)/(2λ) = 4 mu² λ y / (s + my)²
        let s = (my * my + 4.0 * mu * lambda * y).sqrt();
        let x1 = 4.0 * mu * lambda * my / ((s + my) * (s + my));
        let x1 = if x1 > 0.0 && x1.is_finite() {
            x1
        } else {
            lambda / y
        };
        if rng.open01() * (mu + x1) <= mu {
            x1
        } else {
            mu / x1 * mu
        }
    }
}

pub fn sample_inverse_gaussian(mu: f64, lambda: f64, rng: &mut RngStream) -> Result<f64> {
    Ok(InverseGaussian::new(mu, lambda)?.sample(rng))
}
