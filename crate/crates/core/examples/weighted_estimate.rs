//! The log-joint-weighted posterior mean against the plain posterior mean.

use bayes_cvxclust::datagen::two_clusters_1d;
use bayes_cvxclust::distributions::RngStream;
use bayes_cvxclust::estimators::{posterior_mean, weighted_posterior_mean};
use bayes_cvxclust::graph::build_full_edgeset;
use bayes_cvxclust::model::{log_joint, PriorSpec};
use bayes_cvxclust::samplers::{run_chain, ChainConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (x, _) = two_clusters_1d(5, 10.0, 0.5, &mut RngStream::new(2, 0))?;
    let edges = build_full_edgeset(x.n())?;
    let prior = PriorSpec::laplace(1.0, 1.0)?;
    let out = run_chain(
        &x,
        &prior,
        &edges,
        &ChainConfig::new(2000, 5).with_burn_in(500),
    )?;

    let plain = posterior_mean(&out)?;
    let weighted = weighted_posterior_mean(&out, &x, &prior, &edges)?;
    for (name, est) in [("mean", &plain), ("weighted", &weighted)] {
        println!(
            "{name:<8} log joint {:>10.3}  a_hat {:.2?}",
            log_joint(&est.state, &x, &prior, &edges)?,
            est.a_hat().column(0).as_slice()
        );
    }
    for w in weighted.weights.iter().take(3) {
        let effective = 1.0 / w.weights.iter().map(|v| v * v).sum::<f64>();
        println!(
            "block {:<6} effective draws {effective:.1} of {}",
            w.block,
            w.weights.len()
        );
    }
    Ok(())
}
