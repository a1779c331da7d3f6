//! KS and moment checks of the scalar samplers against quadrature-normalized densities.

use super::{ks_critical, ks_statistic, QuadratureCdf};
use bayes_cvxclust::distributions::{Gamma, Gig, InverseGamma, InverseGaussian, RngStream};

pub const DRAWS: usize = 100_000;
pub const ALPHA: f64 = 0.001;

fn check(label: &str, draws: &mut [f64], ln_pdf: impl Fn(f64) -> f64, lo: f64, hi: f64) {
    let q = QuadratureCdf::new(ln_pdf, lo, hi, 200_000);
    let d = ks_statistic(draws, |z| q.cdf(z));
    let crit = ks_critical(draws.len(), ALPHA);
    assert!(d < crit, "{label}: KS statistic {d:.5} exceeds {crit:.5}");
}

fn mean_sd(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    (
        m,
        (v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0)).sqrt(),
    )
}

/// Sample mean within 3 standard errors of `mean`, using the closed-form
/// variance when there is one.
fn check_mean(label: &str, v: &[f64], mean: f64, variance: Option<f64>) {
    let (m, sd) = mean_sd(v);
    let se = variance.map_or(sd, f64::sqrt) / (v.len() as f64).sqrt();
    assert!(
        (m - mean).abs() < 3.0 * se,
        "{label}: sample mean {m} vs {mean} (se {se})"
    );
}

fn draw(n: usize, seed: u64, mut f: impl FnMut(&mut RngStream) -> f64) -> Vec<f64> {
    let mut rng = RngStream::new(seed, 1);
    (0..n).map(|_| f(&mut rng)).collect()
}

pub fn inverse_gaussian_matches_its_density() {
    for (i, &(mu, lambda)) in [(1.0, 1.0), (0.1, 5.0), (3.0, 0.2), (0.02, 0.003)]
        .iter()
        .enumerate()
    {
        let d = InverseGaussian::new(mu, lambda).unwrap();
        let mut v = draw(DRAWS, 10 + i as u64, |r| d.sample(r));
        let label = format!("IGauss({mu}, {lambda})");
        check_mean(&label, &v, mu, Some(mu.powi(3) / lambda));
        check(&label, &mut v, |z| d.ln_pdf(z), mu * 1e-9, mu * 1e7);
    }
}

pub fn gig_matches_its_density() {
    for (i, &(chi, rho, lambda)) in [
        (1.0, 1.0, 0.5),
        (0.2, 3.0, -1.5),
        (5.0, 0.5, 2.0),
        (0.7, 1.0, -0.9),
        (1e-3, 1.0, 0.2),
    ]
    .iter()
    .enumerate()
    {
        let d = Gig::new(chi, rho, lambda).unwrap();
        let mut v = draw(DRAWS, 20 + i as u64, |r| d.sample(r));
        let label = format!("giG({chi}, {rho}, {lambda})");
        check_mean(&label, &v, d.mean(), None);
        let m = d.mean();
        check(&label, &mut v, |z| d.ln_pdf(z), m * 1e-12, m * 1e5);
    }
}

pub fn gamma_matches_its_density() {
    for (i, &(shape, rate)) in [(0.5, 2.0), (3.0, 1.0), (20.0, 0.1), (1.0, 7.0)]
        .iter()
        .enumerate()
    {
        let d = Gamma::new(shape, rate).unwrap();
        let mut v = draw(DRAWS, 30 + i as u64, |r| d.sample(r));
        let label = format!("Ga({shape}, {rate})");
        check_mean(&label, &v, shape / rate, Some(shape / (rate * rate)));
        let m = shape / rate;
        check(&label, &mut v, |z| d.ln_pdf(z), m * 1e-14, m * 1e3);
    }
}

pub fn inverse_gamma_matches_its_density() {
    for (i, &(shape, scale)) in [(3.0, 2.0), (1.5, 0.1), (0.5, 1.0), (12.0, 30.0)]
        .iter()
        .enumerate()
    {
        let d = InverseGamma::new(shape, scale).unwrap();
        let mut v = draw(DRAWS, 40 + i as u64, |r| d.sample(r));
        let label = format!("IG({shape}, {scale})");
        if shape > 2.0 {
            let mean = scale / (shape - 1.0);
            check_mean(&label, &v, mean, Some(mean * mean / (shape - 2.0)));
        }
        let m = scale / shape;
        check(&label, &mut v, |z| d.ln_pdf(z), m * 1e-3, m * 1e14);
    }
}

pub fn horseshoe_augmentation_gives_a_half_cauchy_scale() {
    // τ² | ψ ~ IG(1/2, 1/ψ) and ψ | τ² ~ IG(1, 1/τ² + 1) target τ ~ C⁺(0, 1).
    let chains = 20_000;
    let mut rng = RngStream::new(5, 5);
    let mut v: Vec<f64> = (0..chains)
        .map(|_| {
            let mut tau2 = 1.0;
            for _ in 0..200 {
                let psi = InverseGamma::new(1.0, 1.0 / tau2 + 1.0)
                    .unwrap()
                    .sample(&mut rng);
                tau2 = InverseGamma::new(0.5, 1.0 / psi).unwrap().sample(&mut rng);
            }
            tau2.sqrt()
        })
        .collect();
    let d = ks_statistic(&mut v, |t| 2.0 / std::f64::consts::PI * t.atan());
    assert!(d < ks_critical(chains, ALPHA), "KS {d}");
}
