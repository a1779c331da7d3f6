//! Log joint densities of the augmented (scale-mixture) models.
//!
//! Each model's density is the product of the Gaussian likelihood, the
//! conditionally Gaussian priors on pairwise row differences and on feature
//! columns, the mixing densities of their scales, and the noise prior. The
//! value is the log of that product, including the constants written in each
//! factor, so differences between states are exact.

use nalgebra::DMatrix;
use statrs::function::gamma::ln_gamma;

use super::{ChainState, DataMatrix, PriorSpec, Shrinkage};
use crate::error::{Error, Result};
use crate::graph::EdgeSet;

const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// `‖a_i1 - a_i2‖²` for every edge.
pub fn edge_sq_differences(a: &DMatrix<f64>, edges: &EdgeSet) -> Vec<f64> {
    edges
        .edges()
        .iter()
        .map(|&(i1, i2)| {
            (0..a.ncols())
                .map(|j| (a[(i1, j)] - a[(i2, j)]).powi(2))
                .sum()
        })
        .collect()
}

/// `‖a_·j‖²` for every column.
pub fn column_sq_norms(a: &DMatrix<f64>) -> Vec<f64> {
    a.column_iter().map(|c| c.norm_squared()).collect()
}

pub fn residual_sum_of_squares(x: &DataMatrix, a: &DMatrix<f64>) -> f64 {
    (x.as_matrix() - a).norm_squared()
}

/// `log N(·)` of a scalar-scale Gaussian factor with squared norm `sq` and
/// variance `var`, raised to the power one (the displays use a single
/// `(variance)^(-1/2)` per edge or feature, whatever the vector length).
fn gaussian_factor(sq: f64, var: f64, with_2pi: bool) -> f64 {
    let c = if with_2pi { LN_2PI } else { 0.0 };
    -0.5 * (c + var.ln()) - sq / (2.0 * var)
}

/// NEG mixing layers `ψ exp(-ψ t) · (γ²)^λ / Γ(λ) ψ^(λ-1) exp(-γ² ψ)`.
fn neg_layers(t: f64, psi: f64, lambda: f64, gamma: f64) -> f64 {
    let g2 = gamma * gamma;
    psi.ln() - psi * t + lambda * g2.ln() - ln_gamma(lambda) + (lambda - 1.0) * psi.ln() - g2 * psi
}

fn likelihood(x: &DataMatrix, state: &ChainState) -> f64 {
    let np = (x.n() * x.p()) as f64;
    let rss = residual_sum_of_squares(x, &state.a);
    -0.5 * np * (LN_2PI + state.sigma2.ln()) - rss / (2.0 * state.sigma2)
}

/// Every factor of the joint that involves edge `e`, given `sq = ‖a_i1 - a_i2‖²`.
/// `scale` is `τ²_e` (`τ_e` for Dirichlet–Laplace), `aux` is `ψ_e` and
/// `global` is the Dirichlet–Laplace ν; unused arguments are ignored.
pub(crate) fn edge_term(
    prior: &PriorSpec,
    weight: f64,
    sq: f64,
    s2: f64,
    scale: f64,
    aux: f64,
    global: f64,
) -> f64 {
    let t = scale;
    match prior.shrinkage {
        Shrinkage::Laplace { lambda1, .. } => {
            let c = (lambda1 * weight).powi(2);
            gaussian_factor(sq, s2 * t, false) + (0.5 * c).ln() - 0.5 * c * t
        }
        Shrinkage::Neg {
            lambda1, gamma1, ..
        } => gaussian_factor(sq, s2 * t, true) + neg_layers(t, aux, lambda1, gamma1),
        Shrinkage::Horseshoe { nu1, .. } => {
            let psi = aux;
            // τ² | ψ ~ IG(1/2, 1/ψ) and ψ ~ IG(1/2, 1), kernels as displayed
            gaussian_factor(sq, s2 * t * nu1 * nu1, true)
                - 0.5 * psi.ln()
                - 1.5 * t.ln()
                - 1.0 / (psi * t)
                - 1.5 * psi.ln()
                - 1.0 / psi
        }
        Shrinkage::DirichletLaplace { alpha1, .. } => {
            let (tau, psi, nu) = (t, aux, global);
            gaussian_factor(sq, s2 * tau * tau * psi * nu * nu, true) + 0.5f64.ln() - 0.5 * psi
                + (alpha1 - 1.0) * tau.ln()
        }
    }
}

/// Every factor of the joint that involves feature `j`, given `sq = ‖a_·j‖²`.
pub(crate) fn feature_term(
    prior: &PriorSpec,
    weight: f64,
    sq: f64,
    s2: f64,
    scale: f64,
    aux: f64,
) -> f64 {
    match prior.shrinkage {
        Shrinkage::Laplace { lambda2, .. } => {
            let c = (lambda2 * weight).powi(2);
            gaussian_factor(sq, s2 * scale, false) + (0.5 * c).ln() - 0.5 * c * scale
        }
        Shrinkage::Neg {
            lambda2, gamma2, ..
        }
        | Shrinkage::Horseshoe {
            lambda2, gamma2, ..
        }
        | Shrinkage::DirichletLaplace {
            lambda2, gamma2, ..
        } => gaussian_factor(sq, s2 * scale, true) + neg_layers(scale, aux, lambda2, gamma2),
    }
}

/// Prior of the Dirichlet–Laplace global scale, `ν^(α#ℰ - 1) exp(-ν/2)`; zero otherwise.
pub(crate) fn global_term(prior: &PriorSpec, n_edges: usize, nu: f64) -> f64 {
    match prior.shrinkage {
        Shrinkage::DirichletLaplace { alpha1, .. } => {
            (alpha1 * n_edges as f64 - 1.0) * nu.ln() - 0.5 * nu
        }
        _ => 0.0,
    }
}

fn aux_or_one(v: &[f64], k: usize) -> f64 {
    v.get(k).copied().unwrap_or(1.0)
}

fn feature_terms(state: &ChainState, prior: &PriorSpec, edges: &EdgeSet, col_sq: &[f64]) -> f64 {
    let u = feature_weights_for(edges, col_sq.len());
    col_sq
        .iter()
        .enumerate()
        .map(|(j, &sq)| {
            feature_term(
                prior,
                u[j],
                sq,
                state.sigma2,
                state.feature_scale[j],
                aux_or_one(&state.feature_aux, j),
            )
        })
        .sum()
}

/// Log of the unnormalized augmented joint density `p(X, A, scales, σ²)`.
pub fn log_joint(
    state: &ChainState,
    x: &DataMatrix,
    prior: &PriorSpec,
    edges: &EdgeSet,
) -> Result<f64> {
    state.validate(prior.kind(), x.n(), x.p(), edges.len())?;
    let s2 = state.sigma2;
    let nu = state.global.unwrap_or(1.0);
    let d2 = edge_sq_differences(&state.a, edges);
    let mut lp = likelihood(x, state);
    for (e, &sq) in d2.iter().enumerate() {
        lp += edge_term(
            prior,
            edges.weights()[e],
            sq,
            s2,
            state.edge_scale[e],
            aux_or_one(&state.edge_aux, e),
            nu,
        );
    }
    lp += global_term(prior, edges.len(), nu);
    lp += feature_terms(state, prior, edges, &column_sq_norms(&state.a));
    lp += prior.noise.ln_density(s2);
    Ok(lp)
}

/// Dirichlet–Laplace joint with every edge auxiliary ψ integrated out, so each
/// edge contributes the Laplace kernel `1/(2στν) exp(-‖a_i1 - a_i2‖/(στν))`.
/// `state.edge_aux` is ignored. This is the density the simplex and global
/// scale blocks are drawn from.
pub fn log_joint_dl_collapsed(
    state: &ChainState,
    x: &DataMatrix,
    prior: &PriorSpec,
    edges: &EdgeSet,
) -> Result<f64> {
    let Shrinkage::DirichletLaplace { alpha1, .. } = prior.shrinkage else {
        return Err(Error::InvalidArgument(
            "collapsed joint is defined for the Dirichlet–Laplace model only".into(),
        ));
    };
    let nu = state
        .global
        .filter(|g| *g > 0.0 && g.is_finite())
        .ok_or_else(|| Error::domain("log joint", "global scale must be positive"))?;
    let sigma = state.sigma2.sqrt();
    let d2 = edge_sq_differences(&state.a, edges);
    let col_sq = column_sq_norms(&state.a);
    let mut lp = likelihood(x, state);
    for (e, &sq) in d2.iter().enumerate() {
        let tau = state.edge_scale[e];
        if !(tau > 0.0) {
            return Err(Error::domain(
                "log joint",
                format!("simplex weight {e} is {tau}"),
            ));
        }
        let s = sigma * tau * nu;
        lp += -(2.0 * s).ln() - sq.sqrt() / s + (alpha1 - 1.0) * tau.ln();
    }
    lp += global_term(prior, edges.len(), nu);
    lp += feature_terms(state, prior, edges, &col_sq);
    lp += prior.noise.ln_density(state.sigma2);
    Ok(lp)
}

/// Feature weights `u_j` carried by the edge set, or all ones when none were attached.
pub fn feature_weights_for(edges: &EdgeSet, p: usize) -> Vec<f64> {
    if edges.feature_weights().len() == p {
        edges.feature_weights().to_vec()
    } else {
        vec![1.0; p]
    }
}
