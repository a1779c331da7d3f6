#![allow(dead_code)]

pub mod consistency;
pub mod sampling;

use bayes_cvxclust::distributions::RngStream;
use bayes_cvxclust::graph::{build_full_edgeset, EdgeSet};
use bayes_cvxclust::model::{ChainState, DataMatrix, ModelKind, PriorSpec};
use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn log_uniform(rng: &mut RngStream, lo: f64, hi: f64) -> f64 {
    (lo.ln() + (hi.ln() - lo.ln()) * rng.random::<f64>()).exp()
}

pub fn normal_matrix(rng: &mut RngStream, n: usize, p: usize, sd: f64) -> DMatrix<f64> {
    DMatrix::from_fn(n, p, |_, _| {
        sd * <StandardNormal as Distribution<f64>>::sample(&StandardNormal, rng)
    })
}

pub struct Instance {
    pub x: DataMatrix,
    pub prior: PriorSpec,
    pub edges: EdgeSet,
    pub state: ChainState,
}

/// Random data, hyperparameters, weights and state for one model.
pub fn random_instance(kind: ModelKind, n: usize, p: usize, seed: u64) -> Instance {
    let mut rng = RngStream::new(seed, 99);
    let x = DataMatrix::new(normal_matrix(&mut rng, n, p, 1.5)).unwrap();
    let full = build_full_edgeset(n).unwrap();
    let m = full.len();
    let mut hp = || log_uniform(&mut rng, 0.2, 3.0);
    let prior = match kind {
        ModelKind::Bscvc => PriorSpec::laplace(hp(), hp()),
        ModelKind::Bnegscvc => PriorSpec::neg(hp(), hp(), hp(), hp()),
        ModelKind::Bhorscvc => PriorSpec::horseshoe(hp(), hp(), hp()),
        ModelKind::Bdlscvc => PriorSpec::dirichlet_laplace(hp(), hp(), hp()),
    }
    .unwrap();
    let edges = if kind == ModelKind::Bscvc {
        let w = (0..m).map(|_| log_uniform(&mut rng, 0.1, 2.0)).collect();
        let u = (0..p).map(|_| log_uniform(&mut rng, 0.1, 2.0)).collect();
        full.with_weights(w)
            .unwrap()
            .with_feature_weights(u)
            .unwrap()
    } else {
        full.for_features(p)
    };
    let mut state = ChainState::with_unit_scales(normal_matrix(&mut rng, n, p, 1.5), kind, m);
    let scales = |k: usize, rng: &mut RngStream| {
        (0..k)
            .map(|_| log_uniform(rng, 0.1, 10.0))
            .collect::<Vec<_>>()
    };
    if kind == ModelKind::Bdlscvc {
        let t = scales(m, &mut rng);
        let s: f64 = t.iter().sum();
        state.edge_scale = t.iter().map(|v| v / s).collect();
        let rest: f64 = state.edge_scale[1..].iter().sum();
        state.edge_scale[0] = 1.0 - rest;
        state.global = Some(log_uniform(&mut rng, 1.0, 30.0));
    } else {
        state.edge_scale = scales(m, &mut rng);
    }
    if kind.has_edge_aux() {
        state.edge_aux = scales(m, &mut rng);
    }
    state.feature_scale = scales(p, &mut rng);
    if kind.has_feature_aux() {
        state.feature_aux = scales(p, &mut rng);
    }
    state.sigma2 = log_uniform(&mut rng, 0.2, 5.0);
    state.validate(kind, n, p, m).unwrap();
    Instance {
        x,
        prior,
        edges,
        state,
    }
}

/// Kolmogorov–Smirnov statistic of `samples` against a continuous CDF.
pub fn ks_statistic(samples: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max((f - (i + 1) as f64 / n).abs())
        })
        .fold(0.0, f64::max)
}

/// Asymptotic two-sided KS critical value at level `alpha`.
pub fn ks_critical(n: usize, alpha: f64) -> f64 {
    (-(alpha / 2.0).ln() / 2.0).sqrt() / (n as f64).sqrt()
}

/// CDF built by trapezoid quadrature of `exp(ln_density)` on a log-spaced grid
/// over `[lo, hi]`, normalized to one over that range.
pub struct QuadratureCdf {
    grid: Vec<f64>,
    cum: Vec<f64>,
}

impl QuadratureCdf {
    pub fn new(ln_density: impl Fn(f64) -> f64, lo: f64, hi: f64, points: usize) -> Self {
        let grid: Vec<f64> = (0..points)
            .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (points - 1) as f64).exp())
            .collect();
        let lv: Vec<f64> = grid.iter().map(|&z| ln_density(z)).collect();
        let top = lv.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let dens: Vec<f64> = lv.iter().map(|v| (v - top).exp()).collect();
        let mut cum = vec![0.0; points];
        for i in 1..points {
            cum[i] = cum[i - 1] + 0.5 * (dens[i] + dens[i - 1]) * (grid[i] - grid[i - 1]);
        }
        let total = cum[points - 1];
        cum.iter_mut().for_each(|c| *c /= total);
        Self { grid, cum }
    }

    pub fn cdf(&self, z: f64) -> f64 {
        if z <= self.grid[0] {
            return 0.0;
        }
        if z >= *self.grid.last().unwrap() {
            return 1.0;
        }
        let k = self.grid.partition_point(|&g| g < z);
        let (g0, g1) = (self.grid[k - 1], self.grid[k]);
        let t = (z - g0) / (g1 - g0);
        self.cum[k - 1] + t * (self.cum[k] - self.cum[k - 1])
    }
}

fn choose2(k: usize) -> usize {
    k * k.saturating_sub(1) / 2
}

/// RAND index from the contingency table of the two labelings.
pub fn rand_by_contingency(a: &[usize], b: &[usize]) -> f64 {
    let n = a.len();
    let mut table = std::collections::HashMap::new();
    let mut rows = std::collections::HashMap::new();
    let mut cols = std::collections::HashMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *table.entry((x, y)).or_insert(0usize) += 1;
        *rows.entry(x).or_insert(0usize) += 1;
        *cols.entry(y).or_insert(0usize) += 1;
    }
    let both: usize = table.values().map(|&c| choose2(c)).sum();
    let same_a: usize = rows.values().map(|&c| choose2(c)).sum();
    let same_b: usize = cols.values().map(|&c| choose2(c)).sum();
    let total = choose2(n);
    let agree = total + 2 * both - same_a - same_b;
    agree as f64 / total as f64
}

/// `(tnr, tpr)` from a confusion-matrix count.
pub fn rates_by_confusion(truth: &[bool], est: &[bool]) -> (Option<f64>, Option<f64>) {
    let mut m = [[0usize; 2]; 2];
    for (&t, &e) in truth.iter().zip(est) {
        m[usize::from(t)][usize::from(e)] += 1;
    }
    let ratio =
        |hit: usize, miss: usize| (hit + miss > 0).then(|| hit as f64 / (hit + miss) as f64);
    (ratio(m[0][0], m[0][1]), ratio(m[1][1], m[1][0]))
}
