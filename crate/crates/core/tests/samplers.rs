mod common;

use bayes_cvxclust::datagen::half_moons;
use bayes_cvxclust::distributions::RngStream;
use bayes_cvxclust::estimators::posterior_mean;
use bayes_cvxclust::graph::build_full_edgeset;
use bayes_cvxclust::model::{DataMatrix, ModelKind, PriorSpec};
use bayes_cvxclust::samplers::conditionals::{edge_aux_conditional, ScalarConditional};
use bayes_cvxclust::samplers::{run_chain, ChainConfig, ChainOutput, ColumnOrder};
use common::random_instance;

fn line(points: &[f64]) -> DataMatrix {
    DataMatrix::from_rows(&points.iter().map(|&v| vec![v]).collect::<Vec<_>>()).unwrap()
}

fn mean_abs_diff(out: &ChainOutput, i: usize, k: usize) -> f64 {
    out.draws
        .iter()
        .map(|d| (d.a.row(i) - d.a.row(k)).norm())
        .sum::<f64>()
        / out.len() as f64
}

/// Batch-means standard error of the mean of `v`.
fn batch_se(v: &[f64], batches: usize) -> f64 {
    let size = v.len() / batches;
    let means: Vec<f64> = (0..batches)
        .map(|b| v[b * size..(b + 1) * size].iter().sum::<f64>() / size as f64)
        .collect();
    let m = means.iter().sum::<f64>() / batches as f64;
    let var = means.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (batches - 1) as f64;
    (var / batches as f64).sqrt()
}

#[test]
fn vanishing_penalties_leave_the_data() {
    let (x, _) = half_moons(10, 0.1, &mut RngStream::new(1, 0)).unwrap();
    let edges = build_full_edgeset(10).unwrap().for_features(2);
    let prior = PriorSpec::laplace(1e-8, 1e-8).unwrap();
    let out = run_chain(&x, &prior, &edges, &ChainConfig::new(4000, 1)).unwrap();
    let est = posterior_mean(&out).unwrap();
    let sigma = est.sigma2_hat().sqrt();
    let mean_gap = (est.a_hat() - x.as_matrix()).abs().mean();
    assert!(
        mean_gap < 0.1 * sigma,
        "mean |A - X| = {mean_gap}, sigma = {sigma}"
    );
}

#[test]
fn fusion_merges_within_pairs_first() {
    let x = line(&[0.0, 0.0, 10.0, 10.0]);
    let edges = build_full_edgeset(4).unwrap().for_features(1);
    let prior = PriorSpec::laplace(0.1, 1e-3).unwrap();
    let out = run_chain(&x, &prior, &edges, &ChainConfig::new(6000, 2)).unwrap();
    let within = 0.5 * (mean_abs_diff(&out, 0, 1) + mean_abs_diff(&out, 2, 3));
    let between = 0.25
        * (mean_abs_diff(&out, 0, 2)
            + mean_abs_diff(&out, 0, 3)
            + mean_abs_diff(&out, 1, 2)
            + mean_abs_diff(&out, 1, 3));
    assert!(
        between > 10.0 * within,
        "within {within}, between {between}"
    );
}

#[test]
fn larger_neg_scale_weakens_fusion() {
    let x = line(&[0.0, 0.0, 10.0, 10.0]);
    let edges = build_full_edgeset(4).unwrap().for_features(1);
    let spread: Vec<f64> = [0.4, 4.0, 40.0]
        .iter()
        .map(|&g1| {
            let prior = PriorSpec::neg(1.0, g1, 1.0, 1.0).unwrap();
            let out = run_chain(&x, &prior, &edges, &ChainConfig::new(6000, 3)).unwrap();
            let a = posterior_mean(&out).unwrap().state.a;
            (0..4)
                .flat_map(|i| (i + 1..4).map(move |k| (i, k)))
                .map(|(i, k)| (a[i] - a[k]).abs())
                .sum::<f64>()
        })
        .collect();
    assert!(spread[0] < spread[1] && spread[1] < spread[2], "{spread:?}");
}

#[test]
fn neg_edge_aux_at_zero_scale_has_the_prior_shape() {
    let mut inst = random_instance(ModelKind::Bnegscvc, 4, 1, 5);
    inst.state.edge_scale[0] = 0.0;
    let ScalarConditional::Gamma(g) =
        edge_aux_conditional(&inst.state, &inst.prior, &inst.edges, 0).unwrap()
    else {
        panic!("NEG edge auxiliary is gamma");
    };
    let (l1, g1) = match inst.prior.hyperparameters()[..] {
        [("lambda1", l1), ("gamma1", g1), ..] => (l1, g1),
        _ => unreachable!(),
    };
    assert!((g.mean() - (l1 + 1.0) / (g1 * g1)).abs() < 1e-12);
}

#[test]
fn horseshoe_edge_aux_at_infinite_scale() {
    let mut inst = random_instance(ModelKind::Bhorscvc, 4, 1, 6);
    inst.state.edge_scale[0] = 1e15;
    let c = edge_aux_conditional(&inst.state, &inst.prior, &inst.edges, 0).unwrap();
    let mut rng = RngStream::new(6, 0);
    let n = 100_000;
    let inv: Vec<f64> = (0..n).map(|_| 1.0 / c.sample(&mut rng)).collect();
    let m = inv.iter().sum::<f64>() / n as f64;
    assert!((m - 1.0).abs() < 3.0 / (n as f64).sqrt(), "E[1/psi] = {m}");
}

#[test]
fn single_edge_simplex_is_one() {
    let x = line(&[0.0, 1.0]);
    let edges = build_full_edgeset(2).unwrap().for_features(1);
    let prior = PriorSpec::dirichlet_laplace(0.5, 1.0, 1.0).unwrap();
    let out = run_chain(&x, &prior, &edges, &ChainConfig::new(300, 7)).unwrap();
    assert!(out.draws.iter().all(|d| d.edge_scale == vec![1.0]));
}

fn gini(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(|a, b| a.total_cmp(b));
    let n = s.len() as f64;
    let total: f64 = s.iter().sum();
    let weighted: f64 = s
        .iter()
        .enumerate()
        .map(|(i, x)| (i as f64 + 1.0) * x)
        .sum();
    2.0 * weighted / (n * total) - (n + 1.0) / n
}

#[test]
fn small_dirichlet_concentration_sparsifies_the_simplex() {
    let x = line(&[0.0, 0.1, 5.0, 5.1, 10.0, 10.1]);
    let edges = build_full_edgeset(6).unwrap().for_features(1);
    let g: Vec<f64> = [0.1, 1.0]
        .iter()
        .map(|&alpha| {
            let prior = PriorSpec::dirichlet_laplace(alpha, 1.0, 1.0).unwrap();
            let out = run_chain(&x, &prior, &edges, &ChainConfig::new(4000, 8)).unwrap();
            out.draws.iter().map(|d| gini(&d.edge_scale)).sum::<f64>() / out.len() as f64
        })
        .collect();
    assert!(
        g[0] > g[1],
        "Gini at alpha 0.1 = {}, at 1.0 = {}",
        g[0],
        g[1]
    );
}

#[test]
fn column_order_does_not_change_the_posterior() {
    let inst = random_instance(ModelKind::Bscvc, 6, 3, 9);
    let run = |order| {
        let cfg = ChainConfig::new(20_000, 9).with_column_order(order);
        run_chain(&inst.x, &inst.prior, &inst.edges, &cfg).unwrap()
    };
    let (up, down) = (run(ColumnOrder::Ascending), run(ColumnOrder::Descending));
    for i in 0..6 {
        for j in 0..3 {
            let a: Vec<f64> = up.draws.iter().map(|d| d.a[(i, j)]).collect();
            let b: Vec<f64> = down.draws.iter().map(|d| d.a[(i, j)]).collect();
            let (ma, mb) = (
                a.iter().sum::<f64>() / a.len() as f64,
                b.iter().sum::<f64>() / b.len() as f64,
            );
            let se = batch_se(&a, 20).hypot(batch_se(&b, 20));
            assert!(
                (ma - mb).abs() < 3.0 * se,
                "a[{i},{j}]: {ma} vs {mb} (se {se})"
            );
        }
    }
}

#[test]
fn log_joint_trace_passes_a_geweke_check() {
    let (x, _) = half_moons(20, 0.1, &mut RngStream::new(10, 0)).unwrap();
    let edges = build_full_edgeset(20).unwrap().for_features(2);
    let prior = PriorSpec::laplace(1.0, 1.0).unwrap();
    let out = run_chain(&x, &prior, &edges, &ChainConfig::new(5000, 10)).unwrap();
    let t = &out.log_joint;
    let (head, tail) = (&t[..t.len() / 10], &t[t.len() / 2..]);
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let z = (mean(head) - mean(tail)) / batch_se(head, 10).hypot(batch_se(tail, 10));
    assert!(z.abs() < 3.0, "Geweke z = {z}");
}
