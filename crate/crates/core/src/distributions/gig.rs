//! Generalized inverse Gaussian variates.
//!
//! Density: `π(z) ∝ z^(λ-1) · exp(-(ρ z + χ / z) / 2)` on `z > 0`, written
//! `giG(χ, ρ, λ)`. Sampling follows Hörmann & Leydold (2014): the two-parameter
//! form `y^(λ-1) exp(-ω(y + 1/y)/2)` with `ω = sqrt(χρ)` is drawn by one of three
//! rejection schemes and rescaled by `sqrt(χ/ρ)`; negative `λ` uses the
//! reciprocal symmetry.

use super::special::ln_bessel_k;
use super::{Gamma, InverseGamma, RngStream};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
enum Form {
    General,
    /// χ = 0: Ga(λ, rate ρ/2)
    Gamma,
    /// ρ = 0: IG(-λ, scale χ/2)
    InverseGamma,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Gig {
    chi: f64,
    rho: f64,
    lambda: f64,
    form: Form,
}

impl Gig {
    pub fn new(chi: f64, rho: f64, lambda: f64) -> Result<Self> {
        let bad = |why: &str| {
            Err(Error::domain(
                "generalized inverse gaussian",
                format!("chi = {chi}, rho = {rho}, lambda = {lambda}: {why}"),
            ))
        };
        if !(chi >= 0.0 && rho >= 0.0 && chi.is_finite() && rho.is_finite() && lambda.is_finite()) {
            return bad("parameters must be finite with chi, rho >= 0");
        }
        let form = match (chi > 0.0, rho > 0.0) {
            (true, true) => Form::General,
            (false, true) if lambda > 0.0 => Form::Gamma,
            (true, false) if lambda < 0.0 => Form::InverseGamma,
            _ => return bad("density is not normalizable"),
        };
        Ok(Self {
            chi,
            rho,
            lambda,
            form,
        })
    }

    pub fn chi(&self) -> f64 {
        self.chi
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Log of the unnormalized density `z^(λ-1) exp(-(ρz + χ/z)/2)`.
    pub fn ln_kernel(&self, z: f64) -> f64 {
        if z <= 0.0 {
            return f64::NEG_INFINITY;
        }
        (self.lambda - 1.0) * z.ln() - 0.5 * (self.rho * z + self.chi / z)
    }

    /// Log normalizing constant, so that `ln_pdf = ln_kernel + ln_norm`.
    pub fn ln_norm(&self) -> f64 {
        match self.form {
            Form::General => {
                let omega = (self.chi * self.rho).sqrt();
                0.5 * self.lambda * (self.rho / self.chi).ln()
                    - std::f64::consts::LN_2
                    - ln_bessel_k(self.lambda, omega)
            }
            Form::Gamma => {
                let rate = 0.5 * self.rho;
                self.lambda * rate.ln() - statrs::function::gamma::ln_gamma(self.lambda)
            }
            Form::InverseGamma => {
                let shape = -self.lambda;
                let scale = 0.5 * self.chi;
                shape * scale.ln() - statrs::function::gamma::ln_gamma(shape)
            }
        }
    }

    pub fn ln_pdf(&self, z: f64) -> f64 {
        self.ln_kernel(z) + self.ln_norm()
    }

    /// `E[z] = sqrt(χ/ρ) K_{λ+1}(ω) / K_λ(ω)` in the general case.
    pub fn mean(&self) -> f64 {
        match self.form {
            Form::General => {
                let omega = (self.chi * self.rho).sqrt();
                (self.chi / self.rho).sqrt()
                    * (ln_bessel_k(self.lambda + 1.0, omega) - ln_bessel_k(self.lambda, omega))
                        .exp()
            }
            Form::Gamma => 2.0 * self.lambda / self.rho,
            Form::InverseGamma => {
                if -self.lambda > 1.0 {
                    0.5 * self.chi / (-self.lambda - 1.0)
                } else {
                    f64::INFINITY
                }
            }
        }
    }

    pub fn sample(&self, rng: &mut RngStream) -> f64 {
        match self.form {
            Form::Gamma => Gamma::new(self.lambda, 0.5 * self.rho)
                .expect("validated")
                .sample(rng),
            Form::InverseGamma => InverseGamma::new(-self.lambda, 0.5 * self.chi)
                .expect("validated")
                .sample(rng),
            Form::General => {
                let omega = (self.chi * self.rho).sqrt();
                let alpha = (self.chi / self.rho).sqrt();
                let lam = self.lambda.abs();
                let y = standard_gig(lam, omega, rng);
                let y = if self.lambda < 0.0 { 1.0 / y } else { y };
                (alpha * y).clamp(f64::MIN_POSITIVE, f64::MAX)
            }
        }
    }
}

pub fn sample_gig(chi: f64, rho: f64, lambda: f64, rng: &mut RngStream) -> Result<f64> {
    Ok(Gig::new(chi, rho, lambda)?.sample(rng))
}

/// Mode of `y^(λ-1) exp(-ω(y+1/y)/2)`.
fn mode(lambda: f64, omega: f64) -> f64 {
    if lambda >= 1.0 {
        ((lambda - 1.0) + ((lambda - 1.0).powi(2) + omega * omega).sqrt()) / omega
    } else {
        omega / (((1.0 - lambda).powi(2) + omega * omega).sqrt() + (1.0 - lambda))
    }
}

/// Draw from `y^(λ-1) exp(-ω(y+1/y)/2)` for `λ >= 0`, `ω > 0`.
fn standard_gig(lambda: f64, omega: f64, rng: &mut RngStream) -> f64 {
    if lambda > 2.0 || omega > 3.0 {
        rou_shifted(lambda, omega, rng)
    } else if lambda >= 1.0 - 2.25 * omega * omega || omega > 0.2 {
        rou_unshifted(lambda, omega, rng)
    } else {
        concave_hat(lambda, omega, rng)
    }
}

/// Ratio of uniforms around the mode; bounding box from the cubic's roots.
fn rou_shifted(lambda: f64, omega: f64, rng: &mut RngStream) -> f64 {
    let t = 0.5 * (lambda - 1.0);
    let s = 0.25 * omega;
    let xm = mode(lambda, omega);
    let nc = t * xm.ln() - s * (xm + 1.0 / xm);

    let a = -(2.0 * (lambda + 1.0) / omega + xm);
    let b = 2.0 * (lambda - 1.0) * xm / omega - 1.0;
    let c = xm;
    let p = b - a * a / 3.0;
    let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    let fi = (-q / (2.0 * (-p * p * p / 27.0).sqrt()))
        .clamp(-1.0, 1.0)
        .acos();
    let fak = 2.0 * (-p / 3.0).sqrt();
    let y1 = fak * (fi / 3.0).cos() - a / 3.0;
    let y2 = fak * (fi / 3.0 + 4.0 / 3.0 * std::f64::consts::PI).cos() - a / 3.0;

    let half_ln_f = |x: f64| t * x.ln() - s * (x + 1.0 / x) - nc;
    let uplus = (y1 - xm) * half_ln_f(y1).exp();
    let uminus = (y2 - xm) * half_ln_f(y2).exp();

    loop {
        let u = uminus + rng.open01() * (uplus - uminus);
        let v = rng.open01();
        let x = u / v + xm;
        if x <= 0.0 {
            continue;
        }
        if v.ln() <= half_ln_f(x) {
            return x;
        }
    }
}

/// Plain ratio of uniforms, used for moderate parameters.
fn rou_unshifted(lambda: f64, omega: f64, rng: &mut RngStream) -> f64 {
    let t = 0.5 * (lambda - 1.0);
    let s = 0.25 * omega;
    let xm = mode(lambda, omega);
    let nc = t * xm.ln() - s * (xm + 1.0 / xm);
    let ym = ((lambda + 1.0) + ((lambda + 1.0).powi(2) + omega * omega).sqrt()) / omega;
    let um = (0.5 * (lambda + 1.0) * ym.ln() - s * (ym + 1.0 / ym) - nc).exp();
    loop {
        let u = um * rng.open01();
        let v = rng.open01();
        let x = u / v;
        if v.ln() <= t * x.ln() - s * (x + 1.0 / x) - nc {
            return x;
        }
    }
}

/// Rejection from a three-piece hat for `λ < 1` and small `ω`, where the
/// density is not T-concave.
fn concave_hat(lambda: f64, omega: f64, rng: &mut RngStream) -> f64 {
    let xm = mode(lambda, omega);
    let x0 = omega / (1.0 - lambda);
    let k0 = ((lambda - 1.0) * xm.ln() - 0.5 * omega * (xm + 1.0 / xm)).exp();
    let a0 = k0 * x0;
    let (k1, a1, k2, a2);
    if x0 >= 2.0 / omega {
        k1 = 0.0;
        a1 = 0.0;
        k2 = x0.powf(lambda - 1.0);
        a2 = k2 * 2.0 * (-omega * x0 / 2.0).exp() / omega;
    } else {
        k1 = (-omega).exp();
        a1 = if lambda == 0.0 {
            k1 * (2.0 / (omega * omega)).ln()
        } else {
            k1 / lambda * ((2.0 / omega).powf(lambda) - x0.powf(lambda))
        };
        k2 = (2.0 / omega).powf(lambda - 1.0);
        a2 = k2 * 2.0 * (-1.0f64).exp() / omega;
    }
    let total = a0 + a1 + a2;
    loop {
        let mut v = total * rng.open01();
        let (x, hx);
        if v <= a0 {
            x = x0 * v / a0;
            hx = k0;
        } else {
            v -= a0;
            if v <= a1 {
                if lambda == 0.0 {
                    x = omega * (omega.exp() * v).exp();
                    hx = k1 / x;
                } else {
                    x = (x0.powf(lambda) + lambda / k1 * v).powf(1.0 / lambda);
                    hx = k1 * x.powf(lambda - 1.0);
                }
            } else {
                v -= a1;
                let a = x0.max(2.0 / omega);
                x = -2.0 / omega * ((-omega / 2.0 * a).exp() - omega / (2.0 * k2) * v).ln();
                hx = k2 * (-omega / 2.0 * x).exp();
            }
        }
        if !(x > 0.0 && x.is_finite()) {
            continue;
        }
        let u = rng.open01() * hx;
        if u.ln() <= (lambda - 1.0) * x.ln() - omega / 2.0 * (x + 1.0 / x) {
            return x;
        }
    }
}
