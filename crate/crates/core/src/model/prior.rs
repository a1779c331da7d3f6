use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The four hierarchical models.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    /// Laplace fusion and Laplace feature priors.
    Bscvc,
    /// Normal–exponential–gamma fusion and feature priors.
    Bnegscvc,
    /// Horseshoe fusion prior, NEG feature prior.
    Bhorscvc,
    /// Dirichlet–Laplace fusion prior, NEG feature prior.
    Bdlscvc,
}

impl ModelKind {
    pub const ALL: [ModelKind; 4] = [
        ModelKind::Bscvc,
        ModelKind::Bnegscvc,
        ModelKind::Bhorscvc,
        ModelKind::Bdlscvc,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ModelKind::Bscvc => "bscvc",
            ModelKind::Bnegscvc => "bnegscvc",
            ModelKind::Bhorscvc => "bhorscvc",
            ModelKind::Bdlscvc => "bdlscvc",
        }
    }

    /// Whether each edge carries an auxiliary ψ in addition to its scale.
    pub fn has_edge_aux(&self) -> bool {
        !matches!(self, ModelKind::Bscvc)
    }

    /// Whether each feature carries an auxiliary ψ̃ (NEG feature prior).
    pub fn has_feature_aux(&self) -> bool {
        !matches!(self, ModelKind::Bscvc)
    }

    pub fn has_global(&self) -> bool {
        matches!(self, ModelKind::Bdlscvc)
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "bscvc" | "laplace" => Ok(ModelKind::Bscvc),
            "bnegscvc" | "neg" => Ok(ModelKind::Bnegscvc),
            "bhorscvc" | "horseshoe" => Ok(ModelKind::Bhorscvc),
            "bdlscvc" | "dl" | "dirichlet-laplace" => Ok(ModelKind::Bdlscvc),
            other => Err(Error::InvalidArgument(format!(
                "unknown model '{other}' (expected bscvc, bnegscvc, bhorscvc or bdlscvc)"
            ))),
        }
    }
}

/// Fusion and feature-sparsity hyperparameters of one model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum Shrinkage {
    #[serde(rename = "bscvc")]
    Laplace { lambda1: f64, lambda2: f64 },
    #[serde(rename = "bnegscvc")]
    Neg {
        lambda1: f64,
        gamma1: f64,
        lambda2: f64,
        gamma2: f64,
    },
    #[serde(rename = "bhorscvc")]
    Horseshoe { nu1: f64, lambda2: f64, gamma2: f64 },
    #[serde(rename = "bdlscvc")]
    DirichletLaplace {
        alpha1: f64,
        lambda2: f64,
        gamma2: f64,
    },
}

/// Prior on the noise variance σ².
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NoisePrior {
    /// `π(σ²) ∝ 1/σ²`
    ScaleInvariant,
    /// `σ² ~ IG(ν₀/2, η₀/2)`
    InverseGamma { nu0: f64, eta0: f64 },
}

impl NoisePrior {
    /// `(ν₀, η₀)`, zero for the scale-invariant prior.
    pub fn shape_scale(&self) -> (f64, f64) {
        match *self {
            NoisePrior::ScaleInvariant => (0.0, 0.0),
            NoisePrior::InverseGamma { nu0, eta0 } => (nu0, eta0),
        }
    }

    /// `log π(σ²)` up to the same additive constant for every σ².
    pub fn ln_density(&self, sigma2: f64) -> f64 {
        match *self {
            NoisePrior::ScaleInvariant => -sigma2.ln(),
            NoisePrior::InverseGamma { nu0, eta0 } => {
                let (shape, scale) = (0.5 * nu0, 0.5 * eta0);
                shape * scale.ln()
                    - statrs::function::gamma::ln_gamma(shape)
                    - (shape + 1.0) * sigma2.ln()
                    - scale / sigma2
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PriorSpec {
    pub shrinkage: Shrinkage,
    pub noise: NoisePrior,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "{name} must be finite and > 0, got {v}"
        )))
    }
}

impl PriorSpec {
    pub fn new(shrinkage: Shrinkage, noise: NoisePrior) -> Result<Self> {
        match shrinkage {
            Shrinkage::Laplace { lambda1, lambda2 } => {
                positive("lambda1", lambda1)?;
                positive("lambda2", lambda2)?;
            }
            Shrinkage::Neg {
                lambda1,
                gamma1,
                lambda2,
                gamma2,
            } => {
                positive("lambda1", lambda1)?;
                positive("gamma1", gamma1)?;
                positive("lambda2", lambda2)?;
                positive("gamma2", gamma2)?;
            }
            Shrinkage::Horseshoe {
                nu1,
                lambda2,
                gamma2,
            } => {
                positive("nu1", nu1)?;
                positive("lambda2", lambda2)?;
                positive("gamma2", gamma2)?;
            }
            Shrinkage::DirichletLaplace {
                alpha1,
                lambda2,
                gamma2,
            } => {
                positive("alpha1", alpha1)?;
                positive("lambda2", lambda2)?;
                positive("gamma2", gamma2)?;
            }
        }
        if let NoisePrior::InverseGamma { nu0, eta0 } = noise {
            positive("nu0", nu0)?;
            positive("eta0", eta0)?;
        }
        Ok(Self { shrinkage, noise })
    }

    pub fn laplace(lambda1: f64, lambda2: f64) -> Result<Self> {
        Self::new(
            Shrinkage::Laplace { lambda1, lambda2 },
            NoisePrior::ScaleInvariant,
        )
    }

    pub fn neg(lambda1: f64, gamma1: f64, lambda2: f64, gamma2: f64) -> Result<Self> {
        Self::new(
            Shrinkage::Neg {
                lambda1,
                gamma1,
                lambda2,
                gamma2,
            },
            NoisePrior::ScaleInvariant,
        )
    }

    pub fn horseshoe(nu1: f64, lambda2: f64, gamma2: f64) -> Result<Self> {
        Self::new(
            Shrinkage::Horseshoe {
                nu1,
                lambda2,
                gamma2,
            },
            NoisePrior::ScaleInvariant,
        )
    }

    pub fn dirichlet_laplace(alpha1: f64, lambda2: f64, gamma2: f64) -> Result<Self> {
        Self::new(
            Shrinkage::DirichletLaplace {
                alpha1,
                lambda2,
                gamma2,
            },
            NoisePrior::ScaleInvariant,
        )
    }

    pub fn with_noise(self, noise: NoisePrior) -> Result<Self> {
        Self::new(self.shrinkage, noise)
    }

    pub fn kind(&self) -> ModelKind {
        match self.shrinkage {
            Shrinkage::Laplace { .. } => ModelKind::Bscvc,
            Shrinkage::Neg { .. } => ModelKind::Bnegscvc,
            Shrinkage::Horseshoe { .. } => ModelKind::Bhorscvc,
            Shrinkage::DirichletLaplace { .. } => ModelKind::Bdlscvc,
        }
    }

    /// The hyperparameter that controls fusion strength: λ₁, λ₁, ν₁ or α₁.
    /// For the horseshoe and Dirichlet–Laplace priors, *smaller* values fuse harder.
    pub fn fusion_parameter(&self) -> f64 {
        match self.shrinkage {
            Shrinkage::Laplace { lambda1, .. } | Shrinkage::Neg { lambda1, .. } => lambda1,
            Shrinkage::Horseshoe { nu1, .. } => nu1,
            Shrinkage::DirichletLaplace { alpha1, .. } => alpha1,
        }
    }

    pub fn with_fusion_parameter(self, value: f64) -> Result<Self> {
        let shrinkage = match self.shrinkage {
            Shrinkage::Laplace { lambda2, .. } => Shrinkage::Laplace {
                lambda1: value,
                lambda2,
            },
            Shrinkage::Neg {
                gamma1,
                lambda2,
                gamma2,
                ..
            } => Shrinkage::Neg {
                lambda1: value,
                gamma1,
                lambda2,
                gamma2,
            },
            Shrinkage::Horseshoe {
                lambda2, gamma2, ..
            } => Shrinkage::Horseshoe {
                nu1: value,
                lambda2,
                gamma2,
            },
            Shrinkage::DirichletLaplace {
                lambda2, gamma2, ..
            } => Shrinkage::DirichletLaplace {
                alpha1: value,
                lambda2,
                gamma2,
            },
        };
        Self::new(shrinkage, self.noise)
    }

    /// Replaces one named hyperparameter (`lambda1`, `gamma1`, `nu1`, `alpha1`,
    /// `lambda2`, `gamma2`, `nu0`, `eta0`).
    pub fn with_hyperparameter(self, name: &str, value: f64) -> Result<Self> {
        let mut sh = self.shrinkage;
        let mut noise = self.noise;
        let slot: Option<&mut f64> = match (&mut sh, name) {
            (Shrinkage::Laplace { lambda1: v, .. }, "lambda1")
            | (Shrinkage::Neg { lambda1: v, .. }, "lambda1")
            | (Shrinkage::Neg { gamma1: v, .. }, "gamma1")
            | (Shrinkage::Horseshoe { nu1: v, .. }, "nu1")
            | (Shrinkage::DirichletLaplace { alpha1: v, .. }, "alpha1")
            | (Shrinkage::Laplace { lambda2: v, .. }, "lambda2")
            | (Shrinkage::Neg { lambda2: v, .. }, "lambda2")
            | (Shrinkage::Horseshoe { lambda2: v, .. }, "lambda2")
            | (Shrinkage::DirichletLaplace { lambda2: v, .. }, "lambda2")
            | (Shrinkage::Neg { gamma2: v, .. }, "gamma2")
            | (Shrinkage::Horseshoe { gamma2: v, .. }, "gamma2")
            | (Shrinkage::DirichletLaplace { gamma2: v, .. }, "gamma2") => Some(v),
            _ => None,
        };
        match (slot, name) {
            (Some(v), _) => *v = value,
            (None, "nu0" | "eta0") => {
                let (mut nu0, mut eta0) = match noise {
                    NoisePrior::InverseGamma { nu0, eta0 } => (nu0, eta0),
                    NoisePrior::ScaleInvariant => (1.0, 1.0),
                };
                if name == "nu0" {
                    nu0 = value;
                } else {
                    eta0 = value;
                }
                noise = NoisePrior::InverseGamma { nu0, eta0 };
            }
            (None, _) => {
                return Err(Error::InvalidArgument(format!(
                    "{} has no hyperparameter '{name}'",
                    self.kind()
                )))
            }
        }
        Self::new(sh, noise)
    }

    /// Named hyperparameters in a fixed order, for reports.
    pub fn hyperparameters(&self) -> Vec<(&'static str, f64)> {
        match self.shrinkage {
            Shrinkage::Laplace { lambda1, lambda2 } => {
                vec![("lambda1", lambda1), ("lambda2", lambda2)]
            }
            Shrinkage::Neg {
                lambda1,
                gamma1,
                lambda2,
                gamma2,
            } => vec![
                ("lambda1", lambda1),
                ("gamma1", gamma1),
                ("lambda2", lambda2),
                ("gamma2", gamma2),
            ],
            Shrinkage::Horseshoe {
                nu1,
                lambda2,
                gamma2,
            } => {
                vec![("nu1", nu1), ("lambda2", lambda2), ("gamma2", gamma2)]
            }
            Shrinkage::DirichletLaplace {
                alpha1,
                lambda2,
                gamma2,
            } => {
                vec![("alpha1", alpha1), ("lambda2", lambda2), ("gamma2", gamma2)]
            }
        }
    }
}
