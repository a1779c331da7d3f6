use rand_distr::Distribution;
use statrs::function::gamma::ln_gamma;

use super::RngStream;
use crate::error::{Error, Result};

fn check_positive(context: &str, name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(
            context,
            format!("{name} must be finite and > 0, got {value}"),
        ))
    }
}

/// Gamma distribution with density `rate^shape / Γ(shape) · x^(shape-1) · exp(-rate·x)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Gamma {
    shape: f64,
    rate: f64,
}

impl Gamma {
    pub fn new(shape: f64, rate: f64) -> Result<Self> {
        check_positive("gamma", "shape", shape)?;
        check_positive("gamma", "rate", rate)?;
        Ok(Self { shape, rate })
    }

    pub fn shape(&self) -> f64 {
        self.shape
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    pub fn mean(&self) -> f64 {
        self.shape / self.rate
    }

    pub fn ln_pdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return f64::NEG_INFINITY;
        }
        self.shape * self.rate.ln() - ln_gamma(self.shape) + (self.shape - 1.0) * x.ln()
            - self.rate * x
    }

    pub fn sample(&self, rng: &mut RngStream) -> f64 {
        // shape/scale were validated in `new`, so construction cannot fail
        let g = rand_distr::Gamma::new(self.shape, 1.0 / self.rate).expect("validated gamma");
        // Marsaglia-Tsang can return exactly 0 for tiny shapes; keep the support open
        g.sample(rng).max(f64::MIN_POSITIVE)
    }
}

/// Inverse-gamma distribution `IG(x | shape, scale)` with density
/// `scale^shape / Γ(shape) · x^-(shape+1) · exp(-scale/x)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InverseGamma {
    shape: f64,
    scale: f64,
}

impl InverseGamma {
    pub fn new(shape: f64, scale: f64) -> Result<Self> {
        check_positive("inverse gamma", "shape", shape)?;
        check_positive("inverse gamma", "scale", scale)?;
        Ok(Self { shape, scale })
    }

    pub fn shape(&self) -> f64 {
        self.shape
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Defined for `shape > 1`; infinite otherwise.
    pub fn mean(&self) -> f64 {
        if self.shape > 1.0 {
            self.scale / (self.shape - 1.0)
        } else {
            f64::INFINITY
        }
    }

    pub fn mode(&self) -> f64 {
        self.scale / (self.shape + 1.0)
    }

    pub fn ln_pdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return f64::NEG_INFINITY;
        }
        self.shape * self.scale.ln()
            - ln_gamma(self.shape)
            - (self.shape + 1.0) * x.ln()
            - self.scale / x
    }

    pub fn sample(&self, rng: &mut RngStream) -> f64 {
        let g = Gamma {
            shape: self.shape,
            rate: 1.0,
        }
        .sample(rng);
        self.scale / g
    }
}

pub fn sample_gamma(shape: f64, rate: f64, rng: &mut RngStream) -> Result<f64> {
    Ok(Gamma::new(shape, rate)?.sample(rng))
}

pub fn sample_inverse_gamma(shape: f64, scale: f64, rng: &mut RngStream) -> Result<f64> {
    Ok(InverseGamma::new(shape, scale)?.sample(rng))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_nonpositive_parameters() {
        assert!(Gamma::new(0.0, 1.0).is_err());
        assert!(Gamma::new(1.0, -1.0).is_err());
        assert!(InverseGamma::new(1.0, f64::NAN).is_err());
        assert!(InverseGamma::new(-2.0, 1.0).is_err());
    }

    #[test]
    fn exponential_tail_probability() {
        // Ga(1, λ) is Exp(λ): P(x > 1/λ) = e^-1
        let g = Gamma::new(1.0, 2.5).unwrap();
        let mut rng = RngStream::new(5, 0);
        let n = 100_000;
        let hits = (0..n).filter(|_| g.sample(&mut rng) > 1.0 / 2.5).count();
        let p = hits as f64 / n as f64;
        let e = (-1.0f64).exp();
        let se = (e * (1.0 - e) / n as f64).sqrt();
        assert!((p - e).abs() < 4.0 * se, "p = {p}");
    }

    #[test]
    fn inverse_gamma_mode_is_a_stationary_point() {
        let ig = InverseGamma::new(3.0, 4.0).unwrap();
        let m = ig.mode();
        let h = 1e-5;
        assert!(ig.ln_pdf(m - h) < ig.ln_pdf(m));
        assert!(ig.ln_pdf(m + h) < ig.ln_pdf(m));
        let left = (ig.ln_pdf(m) - ig.ln_pdf(m - h)) / h;
        let right = (ig.ln_pdf(m + h) - ig.ln_pdf(m)) / h;
        assert!(left > 0.0 && right < 0.0);
    }

    #[test]
    fn inverse_gamma_mean() {
        let ig = InverseGamma::new(3.0, 4.0).unwrap();
        let mut rng = RngStream::new(9, 1);
        let n = 100_000;
        let draws: Vec<f64> = (0..n).map(|_| ig.sample(&mut rng)).collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let var = draws.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let se = (var / n as f64).sqrt();
        assert!((mean - 2.0).abs() < 3.0 * se, "mean = {mean}, se = {se}");
    }

    #[test]
    fn densities_integrate_to_one() {
        let g = Gamma::new(2.5, 1.5).unwrap();
        let ig = InverseGamma::new(2.5, 1.5).unwrap();
        let (mut sg, mut sig) = (0.0, 0.0);
        let du = 1e-3;
        let mut u = -15.0;
        while u < 6.0 {
            let x = f64::exp(u);
            sg += g.ln_pdf(x).exp() * x * du;
            sig += ig.ln_pdf(x).exp() * x * du;
            u += du;
        }
        assert!((sg - 1.0).abs() < 1e-6, "{sg}");
        assert!((sig - 1.0).abs() < 1e-6, "{sig}");
    }
}
