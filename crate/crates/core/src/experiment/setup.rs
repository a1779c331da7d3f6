use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::grid::{GridAxis, GridPoint, GridSpec};
use crate::error::{Error, Result};
use crate::estimators::{posterior_mean, weighted_posterior_mean, PointEstimate};
use crate::graph::{
    build_full_edgeset, build_knn_weights, EdgeSet, DEFAULT_NEIGHBORS, DEFAULT_PHI,
};
use crate::model::{DataMatrix, ModelKind, PriorSpec};
use crate::samplers::ChainOutput;

/// Which pair graph a fit runs on.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum GraphChoice {
    #[default]
    Full,
    Knn {
        neighbors: usize,
        phi: f64,
    },
}

impl GraphChoice {
    /// kNN weights with the default neighbor count and bandwidth.
    pub fn knn() -> Self {
        GraphChoice::Knn {
            neighbors: DEFAULT_NEIGHBORS,
            phi: DEFAULT_PHI,
        }
    }

    pub fn build(&self, x: &DataMatrix) -> Result<EdgeSet> {
        let edges = match *self {
            GraphChoice::Full => build_full_edgeset(x.n())?,
            GraphChoice::Knn { neighbors, phi } => {
                build_knn_weights(x, neighbors.min(x.n() - 1).max(1), phi)?
            }
        };
        Ok(edges.for_features(x.p()))
    }
}

impl fmt::Display for GraphChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphChoice::Full => f.write_str("full"),
            GraphChoice::Knn { neighbors, phi } => write!(f, "knn(m={neighbors},phi={phi})"),
        }
    }
}

/// Point estimator applied to a chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EstimatorKind {
    Mean,
    Weighted,
}

impl EstimatorKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            EstimatorKind::Mean => "mean",
            EstimatorKind::Weighted => "weighted",
        }
    }

    pub fn estimate(
        &self,
        output: &ChainOutput,
        x: &DataMatrix,
        prior: &PriorSpec,
        edges: &EdgeSet,
    ) -> Result<PointEstimate> {
        match self {
            EstimatorKind::Mean => posterior_mean(output),
            EstimatorKind::Weighted => weighted_posterior_mean(output, x, prior, edges),
        }
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EstimatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mean" => Ok(EstimatorKind::Mean),
            "weighted" => Ok(EstimatorKind::Weighted),
            _ => Err(Error::InvalidArgument(format!(
                "unknown estimator '{s}' (expected mean or weighted)"
            ))),
        }
    }
}

/// Everything needed to fit one model across a hyperparameter grid: the
/// prior whose grid coordinates get overwritten, the grid, the graph and
/// the estimator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelSetup {
    pub base: PriorSpec,
    pub grid: GridSpec,
    pub graph: GraphChoice,
    pub estimator: EstimatorKind,
}

impl ModelSetup {
    pub fn new(
        base: PriorSpec,
        grid: GridSpec,
        graph: GraphChoice,
        estimator: EstimatorKind,
    ) -> Result<Self> {
        let setup = Self {
            base,
            grid,
            graph,
            estimator,
        };
        for point in setup.grid.expand()? {
            setup.prior_at(&point)?;
        }
        Ok(setup)
    }

    pub fn kind(&self) -> ModelKind {
        self.base.kind()
    }

    /// Defaults used by the simulation study.
    pub fn default_for(kind: ModelKind) -> Self {
        let (base, axes, graph, estimator) = match kind {
            ModelKind::Bscvc => (
                PriorSpec::laplace(1.0, DEFAULT_LAPLACE_LAMBDA2),
                vec![GridAxis::new("lambda1", 0.05, 90.0, 50)],
                GraphChoice::Full,
                EstimatorKind::Weighted,
            ),
            ModelKind::Bnegscvc => (
                PriorSpec::neg(1.0, 0.5, DEFAULT_GL_LAMBDA2, DEFAULT_GL_GAMMA2),
                vec![
                    GridAxis::new("lambda1", 1e-4, 2.75, 30),
                    GridAxis::new("gamma1", 0.4, 0.5, 2),
                ],
                GraphChoice::Full,
                EstimatorKind::Weighted,
            ),
            ModelKind::Bhorscvc => (
                PriorSpec::horseshoe(1.0, DEFAULT_GL_LAMBDA2, DEFAULT_GL_GAMMA2),
                vec![GridAxis::new("nu1", 1e-3, 10.0, 10)],
                GraphChoice::Full,
                EstimatorKind::Mean,
            ),
            ModelKind::Bdlscvc => (
                PriorSpec::dirichlet_laplace(0.5, DEFAULT_GL_LAMBDA2, DEFAULT_GL_GAMMA2),
                vec![GridAxis::new("alpha1", 0.05, 1.0, 10)],
                GraphChoice::Full,
                EstimatorKind::Mean,
            ),
        };
        let axes = axes
            .into_iter()
            .collect::<Result<Vec<_>>>()
            .expect("default grid is valid");
        Self {
            base: base.expect("default prior is valid"),
            grid: GridSpec::new(axes),
            graph,
            estimator,
        }
    }

    /// The prior at one grid point.
    pub fn prior_at(&self, point: &GridPoint) -> Result<PriorSpec> {
        point
            .iter()
            .try_fold(self.base, |p, (name, v)| p.with_hyperparameter(name, *v))
    }
}

/// Feature-sparsity rate of the Laplace model in the default setup.
pub const DEFAULT_LAPLACE_LAMBDA2: f64 = 1.0;
/// Feature-side NEG shape of the default setups.
pub const DEFAULT_GL_LAMBDA2: f64 = 1.0;
/// Feature-side NEG scale of the default setups.
pub const DEFAULT_GL_GAMMA2: f64 = 1.0;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grids() {
        assert_eq!(ModelSetup::default_for(ModelKind::Bscvc).grid.len(), 50);
        assert_eq!(ModelSetup::default_for(ModelKind::Bnegscvc).grid.len(), 60);
        assert_eq!(ModelSetup::default_for(ModelKind::Bhorscvc).grid.len(), 10);
        assert_eq!(ModelSetup::default_for(ModelKind::Bdlscvc).grid.len(), 10);
    }

    #[test]
    fn grid_points_overwrite_the_base_prior() {
        let s = ModelSetup::default_for(ModelKind::Bnegscvc);
        let pts = s.grid.expand().unwrap();
        let p = s.prior_at(&pts[1]).unwrap();
        assert_eq!(p.hyperparameters()[1], ("gamma1", 0.5));
        assert!((p.fusion_parameter() - pts[1][0].1).abs() == 0.0);
    }

    #[test]
    fn rejects_foreign_axis() {
        let grid = GridSpec::new(vec![GridAxis::new("nu1", 1.0, 2.0, 2).unwrap()]);
        let r = ModelSetup::new(
            PriorSpec::laplace(1.0, 1.0).unwrap(),
            grid,
            GraphChoice::Full,
            EstimatorKind::Mean,
        );
        assert!(r.is_err());
    }

    #[test]
    fn graph_builds_feature_weights() {
        let x = DataMatrix::from_rows(&[
            vec![0.0, 1.0, 2.0],
            vec![1.0, 0.0, 0.0],
            vec![3.0, 3.0, 3.0],
        ])
        .unwrap();
        let e = GraphChoice::knn().build(&x).unwrap();
        assert_eq!(e.feature_weights().len(), 3);
        assert_eq!(GraphChoice::Full.build(&x).unwrap().len(), 3);
    }
}
