//! Half-moons with padded noise features and a 1-D two-cluster toy.

use bayes_cvxclust::datagen::{add_irrelevant_features, half_moons, two_clusters_1d};
use bayes_cvxclust::distributions::RngStream;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = RngStream::new(1, 0);
    let (moons, truth) = half_moons(20, 0.1, &mut rng)?;
    let x = add_irrelevant_features(&moons, 20, 1.0, &mut rng)?;
    println!("half-moons: n={} p={} clusters={}", x.n(), x.p(), truth.k());
    println!(
        "median pairwise distance {:.3}",
        x.median_pairwise_distance()
    );
    println!("first row {:.3?}", &x.row(0)[..4]);

    let (toy, labels) = two_clusters_1d(5, 10.0, 0.5, &mut rng)?;
    println!(
        "two-cluster toy: {:.2?} labels {:?}",
        toy.as_matrix().column(0).as_slice(),
        labels.labels()
    );
    Ok(())
}
