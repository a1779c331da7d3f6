//! Full conditional distributions of every parameter block.
//!
//! Each function returns the distribution a block is drawn from given the
//! rest of the state, so tests can evaluate its density as well as sample it.

use nalgebra::{DMatrix, DVector};

use crate::distributions::{Gamma, Gig, InverseGamma, InverseGaussian, MvnPrecision, RngStream};
use crate::error::{Error, Result};
use crate::graph::{assemble_laplacian, EdgeSet, LaplacianSpec};
use crate::model::{
    column_sq_norms, edge_sq_differences, residual_sum_of_squares, ChainState, DataMatrix,
    PriorSpec, Shrinkage,
};

/// Floor applied to difference and column norms before they enter an
/// inverse-Gaussian mean or a giG `χ`.
pub const NORM_FLOOR: f64 = 1e-12;

/// Cap on a single edge's fusion precision inside the `A` and `σ²` blocks.
/// Beyond it the Cholesky factor of the column precision loses the unit
/// ridge to cancellation.
pub const MAX_FUSION_PRECISION: f64 = 1e10;

/// Range every sampled scale is clamped into.
pub const SCALE_RANGE: (f64, f64) = (1e-200, 1e200);

pub(crate) fn clamp_scale(v: f64) -> f64 {
    v.clamp(SCALE_RANGE.0, SCALE_RANGE.1)
}

/// Distribution of one positive scalar block, in the coordinate the state stores.
#[derive(Clone, Copy, Debug)]
pub enum ScalarConditional {
    Gamma(Gamma),
    InverseGamma(InverseGamma),
    /// The reciprocal of the stored value is inverse-Gaussian.
    ReciprocalInverseGaussian(InverseGaussian),
    Gig(Gig),
}

impl ScalarConditional {
    pub fn sample(&self, rng: &mut RngStream) -> f64 {
        let v = match self {
            ScalarConditional::Gamma(d) => d.sample(rng),
            ScalarConditional::InverseGamma(d) => d.sample(rng),
            ScalarConditional::ReciprocalInverseGaussian(d) => 1.0 / d.sample(rng),
            ScalarConditional::Gig(d) => d.sample(rng),
        };
        clamp_scale(v)
    }

    /// Log density of the stored value `v`, including the Jacobian of the reciprocal.
    pub fn ln_pdf(&self, v: f64) -> f64 {
        match self {
            ScalarConditional::Gamma(d) => d.ln_pdf(v),
            ScalarConditional::InverseGamma(d) => d.ln_pdf(v),
            ScalarConditional::ReciprocalInverseGaussian(d) => d.ln_pdf(1.0 / v) - 2.0 * v.ln(),
            ScalarConditional::Gig(d) => d.ln_pdf(v),
        }
    }
}

fn edge_norm(a: &DMatrix<f64>, (i1, i2): (usize, usize)) -> f64 {
    (a.row(i1) - a.row(i2)).norm()
}

/// Fusion precision `1/var_e` of every edge, relative to σ², before capping.
pub fn fusion_precisions(state: &ChainState, prior: &PriorSpec) -> Vec<f64> {
    match prior.shrinkage {
        Shrinkage::Laplace { .. } | Shrinkage::Neg { .. } => {
            state.edge_scale.iter().map(|t| 1.0 / t).collect()
        }
        Shrinkage::Horseshoe { nu1, .. } => state
            .edge_scale
            .iter()
            .map(|t| 1.0 / (nu1 * nu1 * t))
            .collect(),
        Shrinkage::DirichletLaplace { .. } => {
            let nu = state.global.unwrap_or(1.0);
            state
                .edge_scale
                .iter()
                .zip(&state.edge_aux)
                .map(|(tau, psi)| 1.0 / (tau * tau * psi * nu * nu))
                .collect()
        }
    }
}

fn capped(v: Vec<f64>) -> Vec<f64> {
    v.into_iter().map(|c| c.min(MAX_FUSION_PRECISION)).collect()
}

/// Fusion Laplacian `S_τ` shared by every column update of one sweep.
pub fn fusion_laplacian(
    state: &ChainState,
    prior: &PriorSpec,
    edges: &EdgeSet,
) -> Result<DMatrix<f64>> {
    let spec = LaplacianSpec::new(edges.n(), capped(fusion_precisions(state, prior)))?;
    assemble_laplacian(&spec, edges)
}

/// `a_·j ~ N(S⁻¹x_·j, σ²S⁻¹)` with `S = S_τ + (1/τ̃²_j + 1) I`.
pub fn a_column_conditional(
    x: &DataMatrix,
    state: &ChainState,
    laplacian: &DMatrix<f64>,
    j: usize,
) -> Result<MvnPrecision> {
    let ridge = 1.0 / state.feature_scale[j] + 1.0;
    let mut s = laplacian.clone();
    for i in 0..s.nrows() {
        s[(i, i)] += ridge;
    }
    let h: DVector<f64> = x.column(j).into_owned();
    MvnPrecision::new(&h, s, state.sigma2, &format!("A column {j}"))
}

/// Edge scale `τ²_e` for the Laplace, NEG and horseshoe models.
pub fn edge_scale_conditional(
    state: &ChainState,
    prior: &PriorSpec,
    edges: &EdgeSet,
    e: usize,
) -> Result<ScalarConditional> {
    let d = edge_norm(&state.a, edges.edges()[e]).max(NORM_FLOOR);
    let s2 = state.sigma2;
    match prior.shrinkage {
        Shrinkage::Laplace { lambda1, .. } => {
            let c = (lambda1 * edges.weights()[e]).powi(2);
            Ok(ScalarConditional::ReciprocalInverseGaussian(
                InverseGaussian::new((c * s2).sqrt() / d, c)?,
            ))
        }
        Shrinkage::Neg { .. } => {
            let psi = state.edge_aux[e];
            Ok(ScalarConditional::ReciprocalInverseGaussian(
                InverseGaussian::new((2.0 * s2 * psi).sqrt() / d, 2.0 * psi)?,
            ))
        }
        Shrinkage::Horseshoe { nu1, .. } => {
            let scale = d * d / (2.0 * nu1 * nu1 * s2) + 1.0 / state.edge_aux[e];
            Ok(ScalarConditional::InverseGamma(InverseGamma::new(
                1.0, scale,
            )?))
        }
        Shrinkage::DirichletLaplace { .. } => Err(Error::InvalidArgument(
            "Dirichlet–Laplace edge scales are drawn through the simplex block".into(),
        )),
    }
}

/// Edge auxiliary `ψ_e` for the NEG, horseshoe and Dirichlet–Laplace models.
pub fn edge_aux_conditional(
    state: &ChainState,
    prior: &PriorSpec,
    edges: &EdgeSet,
    e: usize,
) -> Result<ScalarConditional> {
    match prior.shrinkage {
        Shrinkage::Laplace { .. } => Err(Error::InvalidArgument(
            "the Laplace model has no edge auxiliaries".into(),
        )),
        Shrinkage::Neg {
            lambda1, gamma1, ..
        } => Ok(ScalarConditional::Gamma(Gamma::new(
            lambda1 + 1.0,
            state.edge_scale[e] + gamma1 * gamma1,
        )?)),
        Shrinkage::Horseshoe { .. } => Ok(ScalarConditional::InverseGamma(InverseGamma::new(
            1.0,
            1.0 / state.edge_scale[e] + 1.0,
        )?)),
        Shrinkage::DirichletLaplace { .. } => {
            let d = edge_norm(&state.a, edges.edges()[e]).max(NORM_FLOOR);
            let nu = state.global.unwrap_or(1.0);
            let mu = nu * state.edge_scale[e] * state.sigma2.sqrt() / d;
            Ok(ScalarConditional::ReciprocalInverseGaussian(
                InverseGaussian::new(mu, 1.0)?,
            ))
        }
    }
}

/// Unnormalized simplex components `T_e ~ giG(2‖a_i1 - a_i2‖/σ, 1, α - 1)`,
/// with the edge auxiliaries and the global scale integrated out.
pub fn dl_simplex_conditionals(
    state: &ChainState,
    prior: &PriorSpec,
    edges: &EdgeSet,
) -> Result<Vec<Gig>> {
    let Shrinkage::DirichletLaplace { alpha1, .. } = prior.shrinkage else {
        return Err(Error::InvalidArgument(
            "simplex block exists only in the Dirichlet–Laplace model".into(),
        ));
    };
    let sigma = state.sigma2.sqrt();
    edges
        .edges()
        .iter()
        .map(|&pair| {
            Gig::new(
                2.0 * edge_norm(&state.a, pair).max(NORM_FLOOR) / sigma,
                1.0,
                alpha1 - 1.0,
            )
        })
        .collect()
}

/// Global scale `ν ~ giG(2 Σ ‖a_i1 - a_i2‖/(τ_e σ), 1, (α - 1)#ℰ)`, edge auxiliaries integrated out.
pub fn dl_global_conditional(
    state: &ChainState,
    prior: &PriorSpec,
    edges: &EdgeSet,
) -> Result<ScalarConditional> {
    let Shrinkage::DirichletLaplace { alpha1, .. } = prior.shrinkage else {
        return Err(Error::InvalidArgument(
            "global scale exists only in the Dirichlet–Laplace model".into(),
        ));
    };
    let sigma = state.sigma2.sqrt();
    let chi: f64 = edges
        .edges()
        .iter()
        .zip(&state.edge_scale)
        .map(|(&pair, tau)| 2.0 * edge_norm(&state.a, pair).max(NORM_FLOOR) / (tau * sigma))
        .sum();
    Ok(ScalarConditional::Gig(Gig::new(
        chi,
        1.0,
        (alpha1 - 1.0) * edges.len() as f64,
    )?))
}

/// Feature scale `τ̃²_j`.
pub fn feature_scale_conditional(
    state: &ChainState,
    prior: &PriorSpec,
    edges: &EdgeSet,
    j: usize,
) -> Result<ScalarConditional> {
    let norm = state.a.column(j).norm().max(NORM_FLOOR);
    let s2 = state.sigma2;
    let ig = match prior.shrinkage {
        Shrinkage::Laplace { lambda2, .. } => {
            let u = crate::model::feature_weights_for(edges, state.a.ncols())[j];
            let c = (lambda2 * u).powi(2);
            InverseGaussian::new((c * s2).sqrt() / norm, c)?
        }
        _ => {
            let psi = state.feature_aux[j];
            InverseGaussian::new((2.0 * s2 * psi).sqrt() / norm, 2.0 * psi)?
        }
    };
    Ok(ScalarConditional::ReciprocalInverseGaussian(ig))
}

/// Feature auxiliary `ψ̃_j ~ Ga(λ₂ + 1, τ̃²_j + γ₂²)` of the NEG feature prior.
pub fn feature_aux_conditional(
    state: &ChainState,
    prior: &PriorSpec,
    j: usize,
) -> Result<ScalarConditional> {
    let (lambda2, gamma2) = match prior.shrinkage {
        Shrinkage::Laplace { .. } => {
            return Err(Error::InvalidArgument(
                "the Laplace model has no feature auxiliaries".into(),
            ))
        }
        Shrinkage::Neg {
            lambda2, gamma2, ..
        }
        | Shrinkage::Horseshoe {
            lambda2, gamma2, ..
        }
        | Shrinkage::DirichletLaplace {
            lambda2, gamma2, ..
        } => (lambda2, gamma2),
    };
    Ok(ScalarConditional::Gamma(Gamma::new(
        lambda2 + 1.0,
        state.feature_scale[j] + gamma2 * gamma2,
    )?))
}

/// `σ² ~ IG((np + #ℰ + p + ν₀)/2, (Q + η₀)/2)` where `Q` is the residual sum of
/// squares plus the prior quadratic forms of the edge differences and columns.
pub fn sigma2_conditional(
    x: &DataMatrix,
    state: &ChainState,
    prior: &PriorSpec,
    edges: &EdgeSet,
) -> Result<InverseGamma> {
    let (nu0, eta0) = prior.noise.shape_scale();
    let fusion = capped(fusion_precisions(state, prior));
    let edge_q: f64 = edge_sq_differences(&state.a, edges)
        .iter()
        .zip(&fusion)
        .map(|(d2, c)| d2 * c)
        .sum();
    let col_q: f64 = column_sq_norms(&state.a)
        .iter()
        .zip(&state.feature_scale)
        .map(|(sq, t)| sq / t)
        .sum();
    let q = residual_sum_of_squares(x, &state.a) + edge_q + col_q;
    let count = (x.n() * x.p() + edges.len() + x.p()) as f64;
    InverseGamma::new(0.5 * (count + nu0), 0.5 * (q + eta0))
}
