//! Midpoint-concavity probes of the transformed Laplace-model posterior.

use bayes_cvxclust::datagen::half_moons;
use bayes_cvxclust::distributions::RngStream;
use bayes_cvxclust::graph::build_full_edgeset;
use bayes_cvxclust::model::{random_unimodality_probe, PriorSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = RngStream::new(3, 0);
    let (x, _) = half_moons(20, 0.1, &mut rng)?;
    let edges = build_full_edgeset(x.n())?.for_features(x.p());
    let prior = PriorSpec::laplace(1.0, 1.0)?;
    let margins: Vec<f64> = (0..200)
        .map(|_| random_unimodality_probe(&x, &prior, &edges, &mut rng).map(|r| r.margin))
        .collect::<Result<_, _>>()?;
    let worst = margins.iter().cloned().fold(f64::INFINITY, f64::min);
    println!(
        "{} probes, smallest margin {worst:.3e} (negative would break concavity)",
        margins.len()
    );
    Ok(())
}
