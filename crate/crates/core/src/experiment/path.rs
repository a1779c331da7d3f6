use nalgebra::DMatrix;
use serde::Serialize;

use super::setup::EstimatorKind;
use crate::error::Result;
use crate::estimators::{extract_clusters, ClusterAssignment, ThresholdRule};
use crate::graph::{build_full_edgeset, EdgeSet};
use crate::model::{DataMatrix, InitMode, ModelKind, PriorSpec};
use crate::samplers::{run_chain, ChainConfig};

#[derive(Clone, Debug, PartialEq)]
pub struct PathConfig {
    /// Template chain; each grid point runs on stream `chain.stream + grid index`.
    pub chain: ChainConfig,
    /// Start each grid point from the previous point's final state.
    pub warm_start: bool,
    pub estimator: EstimatorKind,
    pub thresholds: ThresholdRule,
}

impl PathConfig {
    pub fn new(chain: ChainConfig) -> Self {
        Self {
            chain,
            warm_start: true,
            estimator: EstimatorKind::Mean,
            thresholds: ThresholdRule::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PathEntry {
    pub grid_index: usize,
    pub value: f64,
    pub hyperparameters: Vec<(&'static str, f64)>,
    pub a_hat: DMatrix<f64>,
    pub sigma2_hat: f64,
    pub clusters: ClusterAssignment,
    pub seed: u64,
    pub stream: u64,
}

/// Estimates along a 1-D grid of the fusion hyperparameter, in grid order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClusterPath {
    pub model: ModelKind,
    pub parameter: &'static str,
    pub entries: Vec<PathEntry>,
}

impl ClusterPath {
    pub fn cluster_counts(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.clusters.k()).collect()
    }
}

/// Fits `base` with its fusion hyperparameter set to each of `values` in turn.
pub fn cluster_path(
    x: &DataMatrix,
    base: &PriorSpec,
    edges: &EdgeSet,
    values: &[f64],
    config: &PathConfig,
) -> Result<ClusterPath> {
    config.chain.validate()?;
    let full = build_full_edgeset(x.n())?;
    let eps = config.thresholds.apply(x).cluster;
    let mut init = config.chain.init.clone();
    let mut entries = Vec::with_capacity(values.len());
    for (gi, &value) in values.iter().enumerate() {
        let prior = base.with_fusion_parameter(value)?;
        let chain = config
            .chain
            .clone()
            .with_stream(config.chain.stream.wrapping_add(gi as u64))
            .with_init(init.clone());
        let output = run_chain(x, &prior, edges, &chain)?;
        let estimate = config.estimator.estimate(&output, x, &prior, edges)?;
        if config.warm_start {
            init = InitMode::Custom(Box::new(output.final_state.clone()));
        }
        entries.push(PathEntry {
            grid_index: gi,
            value,
            hyperparameters: prior.hyperparameters(),
            clusters: extract_clusters(estimate.a_hat(), &full, eps),
            sigma2_hat: estimate.sigma2_hat(),
            a_hat: estimate.state.a,
            seed: chain.seed,
            stream: chain.stream,
        });
    }
    Ok(ClusterPath {
        model: base.kind(),
        parameter: base.hyperparameters()[0].0,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_entry_per_grid_value() {
        let x = DataMatrix::from_rows(&[vec![0.0], vec![0.1], vec![3.0], vec![3.2]]).unwrap();
        let edges = build_full_edgeset(4).unwrap().for_features(1);
        let prior = PriorSpec::laplace(1.0, 0.01).unwrap();
        let cfg = PathConfig::new(ChainConfig::new(60, 2).with_stream(10));
        let path = cluster_path(&x, &prior, &edges, &[0.01, 1.0, 100.0], &cfg).unwrap();
        assert_eq!(path.entries.len(), 3);
        assert_eq!(path.parameter, "lambda1");
        assert_eq!(path.entries[2].stream, 12);
        assert_eq!(path.entries[1].hyperparameters[0], ("lambda1", 1.0));
        assert!(path.entries.iter().all(|e| e.a_hat.shape() == (4, 1)));
    }
}
