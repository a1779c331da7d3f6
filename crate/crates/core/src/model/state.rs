use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{DataMatrix, ModelKind};
use crate::error::{Error, Result};

/// One full parameter block of a chain.
///
/// `edge_scale` holds `τ²_e` for the Laplace, NEG and horseshoe models and the
/// simplex weight `τ_e` (not squared) for the Dirichlet–Laplace model. Fields a
/// model does not use are empty (`edge_aux`, `feature_aux`) or `None` (`global`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainState {
    pub a: DMatrix<f64>,
    pub edge_scale: Vec<f64>,
    pub edge_aux: Vec<f64>,
    /// Dirichlet–Laplace global scale ν.
    pub global: Option<f64>,
    /// `τ̃²_j`
    pub feature_scale: Vec<f64>,
    /// `ψ̃_j`
    pub feature_aux: Vec<f64>,
    pub sigma2: f64,
}

/// Starting point of a chain.
#[derive(Clone, Debug, PartialEq, Default)]
pub enum InitMode {
    /// `A = X`, all scales 1, σ² = 1.
    #[default]
    Data,
    /// `A = 0`, all scales 1, σ² = 1.
    Zero,
    Custom(Box<ChainState>),
}

impl ChainState {
    /// Unit scales around the given feature matrix. For the Dirichlet–Laplace
    /// model the simplex starts uniform and ν = #ℰ, so each edge's effective
    /// scale `τ_e ν` is 1 like the other models.
    pub fn with_unit_scales(a: DMatrix<f64>, kind: ModelKind, n_edges: usize) -> Self {
        let p = a.ncols();
        let (edge_scale, global) = if kind == ModelKind::Bdlscvc {
            (vec![1.0 / n_edges as f64; n_edges], Some(n_edges as f64))
        } else {
            (vec![1.0; n_edges], None)
        };
        Self {
            a,
            edge_scale,
            edge_aux: if kind.has_edge_aux() {
                vec![1.0; n_edges]
            } else {
                Vec::new()
            },
            global,
            feature_scale: vec![1.0; p],
            feature_aux: if kind.has_feature_aux() {
                vec![1.0; p]
            } else {
                Vec::new()
            },
            sigma2: 1.0,
        }
    }

    pub fn initial(
        x: &DataMatrix,
        kind: ModelKind,
        n_edges: usize,
        mode: &InitMode,
    ) -> Result<Self> {
        let state = match mode {
            InitMode::Data => Self::with_unit_scales(x.as_matrix().clone(), kind, n_edges),
            InitMode::Zero => Self::with_unit_scales(DMatrix::zeros(x.n(), x.p()), kind, n_edges),
            InitMode::Custom(s) => (**s).clone(),
        };
        state.validate(kind, x.n(), x.p(), n_edges)?;
        Ok(state)
    }

    /// Checks shapes and strict positivity of every scale for the given model.
    pub fn validate(&self, kind: ModelKind, n: usize, p: usize, n_edges: usize) -> Result<()> {
        if self.a.shape() != (n, p) {
            return Err(Error::Dimension(format!(
                "A is {}x{}, expected {n}x{p}",
                self.a.nrows(),
                self.a.ncols()
            )));
        }
        if self.a.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("state", "A has non-finite entries"));
        }
        let expect = |name: &str, v: &[f64], len: usize| -> Result<()> {
            if v.len() != len {
                return Err(Error::Dimension(format!(
                    "{name} has length {}, expected {len}",
                    v.len()
                )));
            }
            if let Some((k, bad)) = v
                .iter()
                .enumerate()
                .find(|(_, x)| !(**x > 0.0 && x.is_finite()))
            {
                return Err(Error::domain(
                    "state",
                    format!("{name}[{k}] = {bad} is not a positive scale"),
                ));
            }
            Ok(())
        };
        expect("edge scale", &self.edge_scale, n_edges)?;
        expect(
            "edge auxiliary",
            &self.edge_aux,
            if kind.has_edge_aux() { n_edges } else { 0 },
        )?;
        expect("feature scale", &self.feature_scale, p)?;
        expect(
            "feature auxiliary",
            &self.feature_aux,
            if kind.has_feature_aux() { p } else { 0 },
        )?;
        match (kind.has_global(), self.global) {
            (true, Some(g)) if g > 0.0 && g.is_finite() => {}
            (true, g) => {
                return Err(Error::domain(
                    "state",
                    format!("global scale {g:?} is not positive"),
                ))
            }
            (false, Some(_)) => {
                return Err(Error::Dimension(
                    "global scale set for a model without one".into(),
                ))
            }
            (false, None) => {}
        }
        if kind == ModelKind::Bdlscvc {
            let total: f64 = self.edge_scale.iter().sum();
            if (total - 1.0).abs() > 1e-9 {
                return Err(Error::domain(
                    "state",
                    format!("simplex weights sum to {total}"),
                ));
            }
        }
        if !(self.sigma2 > 0.0 && self.sigma2.is_finite()) {
            return Err(Error::domain(
                "state",
                format!("sigma2 = {} is not positive", self.sigma2),
            ));
        }
        Ok(())
    }
}
