//! Point estimates from stored draws, cluster extraction and feature selection.

use std::collections::HashMap;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::EdgeSet;
use crate::model::{
    column_sq_norms, edge_sq_differences, edge_term, feature_term, feature_weights_for,
    global_term, log_joint, median_pairwise_distance, ChainState, DataMatrix, ModelKind, PriorSpec,
};
use crate::samplers::ChainOutput;

/// Softmax weights of one block over the stored draws.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlockWeights {
    pub block: String,
    pub weights: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointEstimate {
    /// Every block at its estimate; `state.a` is `Â`.
    pub state: ChainState,
    /// Empty for the plain posterior mean.
    pub weights: Vec<BlockWeights>,
    /// Set when weighting was impossible and the plain mean was returned.
    pub fell_back: bool,
}

impl PointEstimate {
    pub fn a_hat(&self) -> &DMatrix<f64> {
        &self.state.a
    }

    pub fn sigma2_hat(&self) -> f64 {
        self.state.sigma2
    }
}

fn mean_vec(draws: &[ChainState], f: impl Fn(&ChainState) -> &Vec<f64>) -> Vec<f64> {
    let len = f(&draws[0]).len();
    let mut out = vec![0.0; len];
    for d in draws {
        for (o, v) in out.iter_mut().zip(f(d)) {
            *o += v;
        }
    }
    let b = draws.len() as f64;
    out.iter_mut().for_each(|o| *o /= b);
    out
}

fn renormalize_simplex(kind: ModelKind, s: &mut ChainState) {
    if kind == ModelKind::Bdlscvc {
        let total: f64 = s.edge_scale.iter().sum();
        s.edge_scale.iter_mut().for_each(|t| *t /= total);
    }
}

/// Arithmetic mean of every block over the stored draws.
pub fn posterior_mean(output: &ChainOutput) -> Result<PointEstimate> {
    let draws = &output.draws;
    if draws.is_empty() {
        return Err(Error::EmptyChain);
    }
    let b = draws.len() as f64;
    let mut a = DMatrix::zeros(draws[0].a.nrows(), draws[0].a.ncols());
    for d in draws {
        a += &d.a;
    }
    a /= b;
    let global = draws[0]
        .global
        .map(|_| draws.iter().map(|d| d.global.unwrap_or(0.0)).sum::<f64>() / b);
    let mut state = ChainState {
        a,
        edge_scale: mean_vec(draws, |d| &d.edge_scale),
        edge_aux: mean_vec(draws, |d| &d.edge_aux),
        global,
        feature_scale: mean_vec(draws, |d| &d.feature_scale),
        feature_aux: mean_vec(draws, |d| &d.feature_aux),
        sigma2: draws.iter().map(|d| d.sigma2).sum::<f64>() / b,
    };
    renormalize_simplex(output.kind, &mut state);
    Ok(PointEstimate {
        state,
        weights: Vec::new(),
        fell_back: false,
    })
}

/// Numerically stable softmax. `None` when no entry is finite.
pub fn softmax_weights(log_values: &[f64]) -> Option<Vec<f64>> {
    let top = log_values
        .iter()
        .copied()
        .filter(|v| !v.is_nan())
        .fold(f64::NEG_INFINITY, f64::max);
    if !top.is_finite() {
        return None;
    }
    let w: Vec<f64> = log_values
        .iter()
        .map(|v| if v.is_nan() { 0.0 } else { (v - top).exp() })
        .collect();
    let total: f64 = w.iter().sum();
    Some(w.into_iter().map(|v| v / total).collect())
}

struct Weighter<'a> {
    base: &'a ChainState,
    x: &'a DataMatrix,
    prior: &'a PriorSpec,
    edges: &'a EdgeSet,
    d2: Vec<f64>,
    col_sq: Vec<f64>,
    u: Vec<f64>,
    nu: f64,
}

#[derive(Default)]
struct Recorder {
    blocks: Vec<BlockWeights>,
    failed: bool,
}

impl Recorder {
    /// Weights over draws of the block scored by `local`, or `None` after recording a failure.
    fn weigh(
        &mut self,
        name: String,
        draws: &[ChainState],
        local: impl Fn(&ChainState) -> f64,
    ) -> Option<Vec<f64>> {
        let lv: Vec<f64> = draws.iter().map(local).collect();
        match softmax_weights(&lv) {
            Some(w) => {
                self.blocks.push(BlockWeights {
                    block: name,
                    weights: w.clone(),
                });
                Some(w)
            }
            None => {
                self.failed = true;
                None
            }
        }
    }
}

fn aux(v: &[f64], k: usize) -> f64 {
    v.get(k).copied().unwrap_or(1.0)
}

impl Weighter<'_> {
    fn edge(&self, e: usize, sq: f64, scale: f64, aux_v: f64, nu: f64) -> f64 {
        edge_term(
            self.prior,
            self.edges.weights()[e],
            sq,
            self.base.sigma2,
            scale,
            aux_v,
            nu,
        )
    }

    fn base_edge(&self, e: usize) -> (f64, f64) {
        (self.base.edge_scale[e], aux(&self.base.edge_aux, e))
    }

    fn row_local(&self, i: usize, incident: &[usize], draw: &ChainState) -> f64 {
        let s2 = self.base.sigma2;
        let p = self.x.p();
        let row = draw.a.row(i);
        let fit: f64 = (0..p)
            .map(|j| (self.x.get(i, j) - row[j]).powi(2))
            .sum::<f64>()
            / (2.0 * s2);
        let mut lv = -fit;
        for &e in incident {
            let (i1, i2) = self.edges.edges()[e];
            let other = if i1 == i { i2 } else { i1 };
            let sq: f64 = (0..p)
                .map(|j| (row[j] - self.base.a[(other, j)]).powi(2))
                .sum();
            let (t, a) = self.base_edge(e);
            lv += self.edge(e, sq, t, a, self.nu);
        }
        for j in 0..p {
            let sq = self.col_sq[j] - self.base.a[(i, j)].powi(2) + row[j] * row[j];
            lv += feature_term(
                self.prior,
                self.u[j],
                sq.max(0.0),
                s2,
                self.base.feature_scale[j],
                aux(&self.base.feature_aux, j),
            );
        }
        lv
    }
}

fn weighted<T: Copy + Into<f64>>(w: &[f64], vals: impl Iterator<Item = T>) -> f64 {
    w.iter().zip(vals).map(|(w, v)| w * v.into()).sum()
}

/// Posterior-probability-weighted mean, one block at a time.
///
/// All blocks start at the plain posterior mean. Block `l` is then estimated by
/// weighting each draw's value of `l` with the joint density at the mean
/// estimate with block `l` replaced by that draw. Blocks are the rows of `A`,
/// edge scales and edge auxiliaries grouped by first endpoint (the
/// Dirichlet–Laplace simplex is one block), the global scale, the feature
/// scales, the feature auxiliaries and σ². One pass, no iteration.
pub fn weighted_posterior_mean(
    output: &ChainOutput,
    x: &DataMatrix,
    prior: &PriorSpec,
    edges: &EdgeSet,
) -> Result<PointEstimate> {
    let plain = posterior_mean(output)?;
    let kind = output.kind;
    if prior.kind() != kind {
        return Err(Error::InvalidArgument(
            "prior does not match the chain's model".into(),
        ));
    }
    let base = &plain.state;
    base.validate(kind, x.n(), x.p(), edges.len())?;
    let w = Weighter {
        base,
        x,
        prior,
        edges,
        d2: edge_sq_differences(&base.a, edges),
        col_sq: column_sq_norms(&base.a),
        u: feature_weights_for(edges, x.p()),
        nu: base.global.unwrap_or(1.0),
    };
    let mut rec = Recorder::default();
    let draws = &output.draws[..];
    let mut est = base.clone();
    let (n, p) = (x.n(), x.p());

    let mut incident = vec![Vec::new(); n];
    for (e, &(i1, i2)) in edges.edges().iter().enumerate() {
        incident[i1].push(e);
        incident[i2].push(e);
    }
    for (i, inc) in incident.iter().enumerate() {
        if let Some(wt) = rec.weigh(format!("a_{}", i + 1), draws, |d| w.row_local(i, inc, d)) {
            for j in 0..p {
                est.a[(i, j)] = weighted(&wt, output.draws.iter().map(|d| d.a[(i, j)]));
            }
        }
    }

    let groups = edges.edges_by_first();
    if kind == ModelKind::Bdlscvc {
        let m = edges.len();
        let simplex = |d: &ChainState| {
            (0..m)
                .map(|e| w.edge(e, w.d2[e], d.edge_scale[e], aux(&base.edge_aux, e), w.nu))
                .sum::<f64>()
        };
        if let Some(wt) = rec.weigh("tau".into(), draws, simplex) {
            for e in 0..m {
                est.edge_scale[e] = weighted(&wt, output.draws.iter().map(|d| d.edge_scale[e]));
            }
            renormalize_simplex(kind, &mut est);
        }
        let global = |d: &ChainState| {
            let nu = d.global.unwrap_or(1.0);
            (0..m)
                .map(|e| {
                    let (t, a) = w.base_edge(e);
                    w.edge(e, w.d2[e], t, a, nu)
                })
                .sum::<f64>()
                + global_term(prior, m, nu)
        };
        if let Some(wt) = rec.weigh("nu".into(), draws, global) {
            est.global = Some(weighted(
                &wt,
                output.draws.iter().map(|d| d.global.unwrap_or(1.0)),
            ));
        }
    } else {
        for (i, group) in groups.iter().enumerate().filter(|(_, g)| !g.is_empty()) {
            let local = |d: &ChainState| {
                group
                    .iter()
                    .map(|&e| w.edge(e, w.d2[e], d.edge_scale[e], aux(&base.edge_aux, e), w.nu))
                    .sum::<f64>()
            };
            if let Some(wt) = rec.weigh(format!("tau_{}", i + 1), draws, local) {
                for &e in group {
                    est.edge_scale[e] = weighted(&wt, output.draws.iter().map(|d| d.edge_scale[e]));
                }
            }
        }
    }
    if kind.has_edge_aux() {
        for (i, group) in groups.iter().enumerate().filter(|(_, g)| !g.is_empty()) {
            let local = |d: &ChainState| {
                group
                    .iter()
                    .map(|&e| w.edge(e, w.d2[e], base.edge_scale[e], d.edge_aux[e], w.nu))
                    .sum::<f64>()
            };
            if let Some(wt) = rec.weigh(format!("psi_{}", i + 1), draws, local) {
                for &e in group {
                    est.edge_aux[e] = weighted(&wt, output.draws.iter().map(|d| d.edge_aux[e]));
                }
            }
        }
    }

    let s2 = base.sigma2;
    let feat_scale = |d: &ChainState| {
        (0..p)
            .map(|j| {
                feature_term(
                    prior,
                    w.u[j],
                    w.col_sq[j],
                    s2,
                    d.feature_scale[j],
                    aux(&base.feature_aux, j),
                )
            })
            .sum::<f64>()
    };
    if let Some(wt) = rec.weigh("tau_tilde".into(), draws, feat_scale) {
        for j in 0..p {
            est.feature_scale[j] = weighted(&wt, output.draws.iter().map(|d| d.feature_scale[j]));
        }
    }
    if kind.has_feature_aux() {
        let feat_aux = |d: &ChainState| {
            (0..p)
                .map(|j| {
                    feature_term(
                        prior,
                        w.u[j],
                        w.col_sq[j],
                        s2,
                        base.feature_scale[j],
                        d.feature_aux[j],
                    )
                })
                .sum::<f64>()
        };
        if let Some(wt) = rec.weigh("psi_tilde".into(), draws, feat_aux) {
            for j in 0..p {
                est.feature_aux[j] = weighted(&wt, output.draws.iter().map(|d| d.feature_aux[j]));
            }
        }
    }

    let sigma = |d: &ChainState| {
        let mut st = base.clone();
        st.sigma2 = d.sigma2;
        log_joint(&st, x, prior, edges).unwrap_or(f64::NEG_INFINITY)
    };
    if let Some(wt) = rec.weigh("sigma2".into(), draws, sigma) {
        est.sigma2 = weighted(&wt, output.draws.iter().map(|d| d.sigma2));
    }

    if rec.failed {
        return Ok(PointEstimate {
            fell_back: true,
            ..plain
        });
    }
    Ok(PointEstimate {
        state: est,
        weights: rec.blocks,
        fell_back: false,
    })
}

/// Partition of the observations; labels run from 1 to `k` in order of first appearance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClusterAssignment {
    labels: Vec<usize>,
    k: usize,
}

impl ClusterAssignment {
    /// Relabels arbitrary ids to `1..=k`.
    pub fn from_labels<T: Eq + std::hash::Hash>(ids: &[T]) -> Self {
        let mut seen = HashMap::new();
        let labels = ids
            .iter()
            .map(|id| {
                let next = seen.len() + 1;
                *seen.entry(id).or_insert(next)
            })
            .collect();
        Self {
            labels,
            k: seen.len(),
        }
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Connected components of the edges whose estimated rows lie within `eps`.
pub fn extract_clusters(a_hat: &DMatrix<f64>, edges: &EdgeSet, eps: f64) -> ClusterAssignment {
    let n = a_hat.nrows();
    let mut parent: Vec<usize> = (0..n).collect();
    for &(i1, i2) in edges.edges() {
        if (a_hat.row(i1) - a_hat.row(i2)).norm() <= eps {
            let (r1, r2) = (find(&mut parent, i1), find(&mut parent, i2));
            if r1 != r2 {
                parent[r1.max(r2)] = r1.min(r2);
            }
        }
    }
    let roots: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();
    ClusterAssignment::from_labels(&roots)
}

/// Features whose estimated column has root-mean-square above `eps`.
pub fn select_features(a_hat: &DMatrix<f64>, eps: f64) -> Vec<usize> {
    let sqrt_n = (a_hat.nrows() as f64).sqrt();
    a_hat
        .column_iter()
        .enumerate()
        .filter(|(_, c)| c.norm() / sqrt_n > eps)
        .map(|(j, _)| j)
        .collect()
}

/// Zero/nonzero flag per feature.
pub fn feature_flags(selected: &[usize], p: usize) -> Vec<bool> {
    let mut f = vec![false; p];
    for &j in selected {
        f[j] = true;
    }
    f
}

/// Tolerances for calling two rows fused and a column zero.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Thresholds {
    pub cluster: f64,
    pub feature: f64,
}

impl Thresholds {
    pub fn new(cluster: f64, feature: f64) -> Result<Self> {
        if !(cluster >= 0.0 && feature >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "thresholds must be nonnegative, got {cluster} and {feature}"
            )));
        }
        Ok(Self { cluster, feature })
    }

    /// Thresholds from the default [`ThresholdRule`].
    pub fn from_data(x: &DataMatrix) -> Self {
        ThresholdRule::default().apply(x)
    }
}

/// Scale factors turning data summaries into [`Thresholds`]: the cluster
/// tolerance is `cluster_factor ×` the median pairwise row distance, the
/// feature tolerance `feature_factor ×` the median column RMS.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdRule {
    pub cluster_factor: f64,
    pub feature_factor: f64,
}

impl Default for ThresholdRule {
    fn default() -> Self {
        Self {
            cluster_factor: 0.03,
            feature_factor: 0.2,
        }
    }
}

impl ThresholdRule {
    pub fn new(cluster_factor: f64, feature_factor: f64) -> Result<Self> {
        Thresholds::new(cluster_factor, feature_factor)?;
        Ok(Self {
            cluster_factor,
            feature_factor,
        })
    }

    pub fn apply(&self, x: &DataMatrix) -> Thresholds {
        let mut rms = x.column_rms();
        Thresholds {
            cluster: self.cluster_factor * median_pairwise_distance(x.as_matrix()),
            feature: self.feature_factor * crate::model::median(&mut rms),
        }
    }
}
