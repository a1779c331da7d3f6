//! Fit all four shrinkage models to the same data and compare the partitions.
//! One informative feature, three noise features.

use bayes_cvxclust::datagen::{add_irrelevant_features, two_clusters_1d};
use bayes_cvxclust::distributions::RngStream;
use bayes_cvxclust::estimators::{
    extract_clusters, select_features, weighted_posterior_mean, Thresholds,
};
use bayes_cvxclust::graph::build_full_edgeset;
use bayes_cvxclust::metrics::rand_index;
use bayes_cvxclust::model::PriorSpec;
use bayes_cvxclust::samplers::{run_chain, ChainConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = RngStream::new(4, 0);
    let (signal, truth) = two_clusters_1d(6, 6.0, 0.5, &mut rng)?;
    let x = add_irrelevant_features(&signal, 4, 0.5, &mut rng)?;
    let edges = build_full_edgeset(x.n())?.for_features(x.p());
    let eps = Thresholds::from_data(&x);

    let priors = [
        PriorSpec::laplace(1.0, 1.0)?,
        PriorSpec::neg(0.2, 0.5, 1.0, 1.0)?,
        PriorSpec::horseshoe(1.0, 1.0, 1.0)?,
        PriorSpec::dirichlet_laplace(1.0, 1.0, 1.0)?,
    ];
    for prior in priors {
        let out = run_chain(&x, &prior, &edges, &ChainConfig::new(3000, 11))?;
        let est = weighted_posterior_mean(&out, &x, &prior, &edges)?;
        let clusters = extract_clusters(est.a_hat(), &edges, eps.cluster);
        let features = select_features(est.a_hat(), eps.feature);
        println!(
            "{:<9} k={:<3} RAND={:.3} features={:?} sigma2={:.3}",
            prior.kind(),
            clusters.k(),
            rand_index(&truth, &clusters)?,
            features,
            est.sigma2_hat()
        );
    }
    Ok(())
}
