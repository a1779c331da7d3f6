//! Data, prior settings, chain state and the exact log joint densities.

mod concavity;
mod data;
mod joint;
mod prior;
mod state;

pub use concavity::{
    log_posterior_unimodality_probe, random_unimodality_probe, transformed_log_posterior,
    ConcavityReport, TransformedPoint,
};
pub use data::DataMatrix;
#[allow(unused_imports)]
pub(crate) use data::{column_rms, median, median_pairwise_distance};
pub use joint::{
    column_sq_norms, edge_sq_differences, feature_weights_for, log_joint, log_joint_dl_collapsed,
    residual_sum_of_squares,
};
pub(crate) use joint::{edge_term, feature_term, global_term};
pub use prior::{ModelKind, NoisePrior, PriorSpec, Shrinkage};
pub use state::{ChainState, InitMode};
