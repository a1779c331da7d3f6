//! Sparse k-nearest-neighbour fusion weights as an alternative to all pairs.

use bayes_cvxclust::datagen::half_moons;
use bayes_cvxclust::distributions::RngStream;
use bayes_cvxclust::estimators::{extract_clusters, posterior_mean, Thresholds};
use bayes_cvxclust::graph::build_knn_weights;
use bayes_cvxclust::metrics::rand_index;
use bayes_cvxclust::model::PriorSpec;
use bayes_cvxclust::samplers::{run_chain, ChainConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (x, truth) = half_moons(30, 0.1, &mut RngStream::new(8, 0))?;
    let edges = build_knn_weights(&x, 5, 0.5)?.for_features(x.p());
    let w = edges.weights();
    println!(
        "{} edges, weights in [{:.3}, {:.3}]",
        edges.len(),
        w.iter().cloned().fold(f64::INFINITY, f64::min),
        w.iter().cloned().fold(0.0, f64::max)
    );
    let prior = PriorSpec::laplace(5.0, 1.0)?;
    let out = run_chain(&x, &prior, &edges, &ChainConfig::new(2000, 1))?;
    let clusters = extract_clusters(
        posterior_mean(&out)?.a_hat(),
        &edges,
        Thresholds::from_data(&x).cluster,
    );
    println!(
        "k = {}, RAND = {:.3}",
        clusters.k(),
        rand_index(&truth, &clusters)?
    );
    Ok(())
}
