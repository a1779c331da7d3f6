//! Cluster count along a grid of fusion strengths, warm-started point to point.

use bayes_cvxclust::datagen::half_moons;
use bayes_cvxclust::distributions::RngStream;
use bayes_cvxclust::experiment::{cluster_path, geometric_grid, path_csv, PathConfig};
use bayes_cvxclust::graph::build_full_edgeset;
use bayes_cvxclust::model::PriorSpec;
use bayes_cvxclust::samplers::ChainConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (x, _) = half_moons(30, 0.1, &mut RngStream::new(7, 0))?;
    let edges = build_full_edgeset(x.n())?.for_features(x.p());
    let values = geometric_grid(1e-3, 100.0, 10)?;
    let prior = PriorSpec::laplace(1.0, 1.0)?;
    let path = cluster_path(
        &x,
        &prior,
        &edges,
        &values,
        &PathConfig::new(ChainConfig::new(1500, 3)),
    )?;
    for e in &path.entries {
        println!(
            "{} = {:>9.4}  k = {}",
            path.parameter,
            e.value,
            e.clusters.k()
        );
    }
    let csv = path_csv(&path)?;
    println!("path.csv would hold {} rows", csv.lines().count() - 1);
    Ok(())
}
