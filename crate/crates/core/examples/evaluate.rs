//! RAND index and feature-selection rates for hand-made estimates.

use bayes_cvxclust::estimators::{feature_flags, ClusterAssignment};
use bayes_cvxclust::metrics::{rand_index, tnr_tpr};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let truth = ClusterAssignment::from_labels(&[1, 1, 1, 2, 2, 2]);
    for est in [
        [1, 1, 1, 2, 2, 2],
        [7, 7, 7, 3, 3, 3],
        [1, 1, 2, 2, 3, 3],
        [1, 1, 1, 1, 1, 1],
    ] {
        let est = ClusterAssignment::from_labels(&est);
        println!("{:?} RAND {:.3}", est.labels(), rand_index(&truth, &est)?);
    }
    let relevant = feature_flags(&[0, 1], 5);
    let selected = feature_flags(&[0, 1, 3], 5);
    let r = tnr_tpr(&relevant, &selected)?;
    println!("TNR {:?} TPR {:?}", r.tnr, r.tpr);
    Ok(())
}
