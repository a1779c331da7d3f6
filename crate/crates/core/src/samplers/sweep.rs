use crate::distributions::{sample_dirichlet_via_gig, RngStream};
use crate::error::{Error, Result};
use crate::graph::EdgeSet;
use crate::model::{ChainState, DataMatrix, ModelKind, PriorSpec};

use super::conditionals::{
    a_column_conditional, clamp_scale, dl_global_conditional, dl_simplex_conditionals,
    edge_aux_conditional, edge_scale_conditional, feature_aux_conditional,
    feature_scale_conditional, fusion_laplacian, sigma2_conditional,
};

/// Order in which the columns of `A` are visited within a sweep.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ColumnOrder {
    #[default]
    Ascending,
    Descending,
}

fn in_block<T>(block: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::NumericDomain { detail, context } => {
            Error::domain(block, format!("{context}: {detail}"))
        }
        other => other,
    })
}

fn update_a(
    x: &DataMatrix,
    s: &mut ChainState,
    prior: &PriorSpec,
    edges: &EdgeSet,
    order: ColumnOrder,
    rng: &mut RngStream,
) -> Result<()> {
    let lap = in_block("A", fusion_laplacian(s, prior, edges))?;
    let p = x.p();
    for k in 0..p {
        let j = match order {
            ColumnOrder::Ascending => k,
            ColumnOrder::Descending => p - 1 - k,
        };
        let col = a_column_conditional(x, s, &lap, j)?.sample(rng);
        s.a.set_column(j, &col);
    }
    Ok(())
}

fn update_edge_scales(
    s: &mut ChainState,
    prior: &PriorSpec,
    edges: &EdgeSet,
    rng: &mut RngStream,
) -> Result<()> {
    for e in 0..edges.len() {
        s.edge_scale[e] =
            in_block("edge scale", edge_scale_conditional(s, prior, edges, e))?.sample(rng);
    }
    Ok(())
}

fn update_edge_aux(
    s: &mut ChainState,
    prior: &PriorSpec,
    edges: &EdgeSet,
    rng: &mut RngStream,
) -> Result<()> {
    for e in 0..edges.len() {
        s.edge_aux[e] =
            in_block("edge auxiliary", edge_aux_conditional(s, prior, edges, e))?.sample(rng);
    }
    Ok(())
}

fn update_features(
    s: &mut ChainState,
    prior: &PriorSpec,
    edges: &EdgeSet,
    rng: &mut RngStream,
) -> Result<()> {
    for j in 0..s.a.ncols() {
        s.feature_scale[j] = in_block(
            "feature scale",
            feature_scale_conditional(s, prior, edges, j),
        )?
        .sample(rng);
    }
    if prior.kind().has_feature_aux() {
        for j in 0..s.a.ncols() {
            s.feature_aux[j] =
                in_block("feature auxiliary", feature_aux_conditional(s, prior, j))?.sample(rng);
        }
    }
    Ok(())
}

fn update_sigma2(
    x: &DataMatrix,
    s: &mut ChainState,
    prior: &PriorSpec,
    edges: &EdgeSet,
    rng: &mut RngStream,
) -> Result<()> {
    s.sigma2 = clamp_scale(in_block("sigma2", sigma2_conditional(x, s, prior, edges))?.sample(rng));
    Ok(())
}

fn update_dl_scales(
    s: &mut ChainState,
    prior: &PriorSpec,
    edges: &EdgeSet,
    rng: &mut RngStream,
) -> Result<()> {
    // (τ, ν) jointly through T = τν with ψ integrated out, then ν | τ, then ψ
    let gigs = in_block("simplex", dl_simplex_conditionals(s, prior, edges))?;
    let (lambda, chis): (f64, Vec<f64>) =
        (gigs[0].lambda(), gigs.iter().map(|g| g.chi()).collect());
    let (tau, total) = in_block("simplex", sample_dirichlet_via_gig(&chis, lambda, rng))?;
    if tau.iter().any(|t| !(*t > 0.0)) {
        return Err(Error::domain(
            "simplex",
            "a simplex weight underflowed to zero",
        ));
    }
    s.edge_scale = tau;
    s.global = Some(clamp_scale(total));
    s.global = Some(in_block("global scale", dl_global_conditional(s, prior, edges))?.sample(rng));
    update_edge_aux(s, prior, edges, rng)
}

/// One full sweep in place, dispatching on the model of `prior`.
pub fn sweep_in_place(
    state: &mut ChainState,
    x: &DataMatrix,
    prior: &PriorSpec,
    edges: &EdgeSet,
    order: ColumnOrder,
    rng: &mut RngStream,
) -> Result<()> {
    update_a(x, state, prior, edges, order, rng)?;
    match prior.kind() {
        ModelKind::Bscvc => update_edge_scales(state, prior, edges, rng)?,
        ModelKind::Bnegscvc | ModelKind::Bhorscvc => {
            update_edge_scales(state, prior, edges, rng)?;
            update_edge_aux(state, prior, edges, rng)?;
        }
        ModelKind::Bdlscvc => update_dl_scales(state, prior, edges, rng)?,
    }
    update_features(state, prior, edges, rng)?;
    update_sigma2(x, state, prior, edges, rng)
}

fn sweep_checked(
    kind: ModelKind,
    state: &ChainState,
    x: &DataMatrix,
    prior: &PriorSpec,
    edges: &EdgeSet,
    rng: &mut RngStream,
) -> Result<ChainState> {
    if prior.kind() != kind {
        return Err(Error::InvalidArgument(format!(
            "{kind} sweep called with a {} prior",
            prior.kind()
        )));
    }
    state.validate(kind, x.n(), x.p(), edges.len())?;
    let mut next = state.clone();
    sweep_in_place(&mut next, x, prior, edges, ColumnOrder::Ascending, rng)?;
    Ok(next)
}

/// Laplace model: `A` columns, edge scales, feature scales, σ².
pub fn sweep_bscvc(
    state: &ChainState,
    x: &DataMatrix,
    prior: &PriorSpec,
    edges: &EdgeSet,
    rng: &mut RngStream,
) -> Result<ChainState> {
    sweep_checked(ModelKind::Bscvc, state, x, prior, edges, rng)
}

/// NEG model: `A` columns, edge scales, edge auxiliaries, feature scales and auxiliaries, σ².
pub fn sweep_bnegscvc(
    state: &ChainState,
    x: &DataMatrix,
    prior: &PriorSpec,
    edges: &EdgeSet,
    rng: &mut RngStream,
) -> Result<ChainState> {
    sweep_checked(ModelKind::Bnegscvc, state, x, prior, edges, rng)
}

/// Horseshoe model, same block order as the NEG model.
pub fn sweep_bhorscvc(
    state: &ChainState,
    x: &DataMatrix,
    prior: &PriorSpec,
    edges: &EdgeSet,
    rng: &mut RngStream,
) -> Result<ChainState> {
    sweep_checked(ModelKind::Bhorscvc, state, x, prior, edges, rng)
}

/// Dirichlet–Laplace model: `A` columns, simplex, global scale, edge
/// auxiliaries, feature blocks, σ².
pub fn sweep_bdlscvc(
    state: &ChainState,
    x: &DataMatrix,
    prior: &PriorSpec,
    edges: &EdgeSet,
    rng: &mut RngStream,
) -> Result<ChainState> {
    sweep_checked(ModelKind::Bdlscvc, state, x, prior, edges, rng)
}
