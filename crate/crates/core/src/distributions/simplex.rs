use super::{Gig, RngStream};
use crate::error::{Error, Result};

/// Normalizes positive weights onto the probability simplex. Scaling by the
/// largest entry first keeps tiny or huge weights from under/overflowing.
pub fn normalize_to_simplex(weights: &[f64]) -> Result<Vec<f64>> {
    if weights.is_empty() {
        return Err(Error::InvalidArgument(
            "cannot normalize an empty vector".into(),
        ));
    }
    if let Some(bad) = weights.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
        return Err(Error::domain(
            "simplex",
            format!("weights must be finite and > 0, got {bad}"),
        ));
    }
    let max = weights.iter().cloned().fold(f64::MIN, f64::max);
    let scaled: Vec<f64> = weights.iter().map(|w| w / max).collect();
    let total: f64 = scaled.iter().sum();
    let mut tau: Vec<f64> = scaled.iter().map(|w| w / total).collect();
    if tau.iter().any(|t| *t <= 0.0) {
        return Err(Error::domain("simplex", "a component underflowed to zero"));
    }
    // put the rounding residue on the largest component
    let (imax, _) =
        tau.iter().enumerate().fold(
            (0, f64::MIN),
            |acc, (i, &t)| if t > acc.1 { (i, t) } else { acc },
        );
    let rest: f64 = tau
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != imax)
        .map(|(_, t)| t)
        .sum();
    tau[imax] = 1.0 - rest;
    Ok(tau)
}

/// Draws `T_e ~ giG(χ_e, 1, λ)` independently and returns `(T / ΣT, ΣT)`.
pub fn sample_dirichlet_via_gig(
    chis: &[f64],
    lambda: f64,
    rng: &mut RngStream,
) -> Result<(Vec<f64>, f64)> {
    let draws = chis
        .iter()
        .map(|&chi| Ok(Gig::new(chi, 1.0, lambda)?.sample(rng)))
        .collect::<Result<Vec<f64>>>()?;
    let total: f64 = draws.iter().sum();
    Ok((normalize_to_simplex(&draws)?, total))
}
