//! Differences of each full-conditional log density between two block values
//! must equal differences of the log joint.

use super::{log_uniform, random_instance, Instance};
use bayes_cvxclust::distributions::RngStream;
use bayes_cvxclust::model::{log_joint, log_joint_dl_collapsed, ChainState, ModelKind};
use bayes_cvxclust::samplers::conditionals::*;
use nalgebra::DVector;
use rand_distr::{Distribution, StandardNormal};

pub const N: usize = 6;
pub const P: usize = 3;
const TOL: f64 = 1e-8;

fn lj(inst: &Instance, s: &ChainState) -> f64 {
    log_joint(s, &inst.x, &inst.prior, &inst.edges).unwrap()
}

/// Compares `cond.0 - cond.1` with `joint.0 - joint.1` to within `TOL`, widened
/// to a few ulps of the largest operand when `TOL` is below double precision.
fn check(block: &str, cond: (f64, f64), joint: (f64, f64)) {
    let scale = [cond.0, cond.1, joint.0, joint.1]
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let tol = TOL.max(8.0 * f64::EPSILON * scale);
    let (cond, joint) = (cond.0 - cond.1, joint.0 - joint.1);
    assert!(
        (cond - joint).abs() < tol,
        "{block}: conditional {cond} vs joint {joint}"
    );
}

fn check_a_columns(inst: &Instance, rng: &mut RngStream) {
    let lap = fusion_laplacian(&inst.state, &inst.prior, &inst.edges).unwrap();
    for j in 0..P {
        let mvn = a_column_conditional(&inst.x, &inst.state, &lap, j).unwrap();
        let v1 = DVector::from_fn(N, |_, _| {
            2.0 * <StandardNormal as Distribution<f64>>::sample(&StandardNormal, rng)
        });
        let v2 = DVector::from_fn(N, |_, _| {
            2.0 * <StandardNormal as Distribution<f64>>::sample(&StandardNormal, rng)
        });
        let (mut s1, mut s2) = (inst.state.clone(), inst.state.clone());
        s1.a.set_column(j, &v1);
        s2.a.set_column(j, &v2);
        check(
            "A",
            (mvn.ln_pdf(&v1), mvn.ln_pdf(&v2)),
            (lj(inst, &s1), lj(inst, &s2)),
        );
    }
}

fn check_scalar(
    inst: &Instance,
    block: &str,
    cond: &ScalarConditional,
    set: impl Fn(&mut ChainState, f64),
    joint: impl Fn(&ChainState) -> f64,
    rng: &mut RngStream,
) {
    let (v1, v2) = (log_uniform(rng, 0.05, 20.0), log_uniform(rng, 0.05, 20.0));
    let (mut s1, mut s2) = (inst.state.clone(), inst.state.clone());
    set(&mut s1, v1);
    set(&mut s2, v2);
    check(
        block,
        (cond.ln_pdf(v1), cond.ln_pdf(v2)),
        (joint(&s1), joint(&s2)),
    );
}

fn check_common_blocks(inst: &Instance, kind: ModelKind, rng: &mut RngStream) {
    let (s, prior, edges) = (&inst.state, &inst.prior, &inst.edges);
    check_a_columns(inst, rng);
    for j in 0..P {
        let c = feature_scale_conditional(s, prior, edges, j).unwrap();
        check_scalar(
            inst,
            "feature scale",
            &c,
            |st, v| st.feature_scale[j] = v,
            |st| lj(inst, st),
            rng,
        );
        if kind.has_feature_aux() {
            let c = feature_aux_conditional(s, prior, j).unwrap();
            check_scalar(
                inst,
                "feature aux",
                &c,
                |st, v| st.feature_aux[j] = v,
                |st| lj(inst, st),
                rng,
            );
        }
    }
    let c = ScalarConditional::InverseGamma(sigma2_conditional(&inst.x, s, prior, edges).unwrap());
    check_scalar(
        inst,
        "sigma2",
        &c,
        |st, v| st.sigma2 = v,
        |st| lj(inst, st),
        rng,
    );
}

fn check_edge_blocks(inst: &Instance, kind: ModelKind, rng: &mut RngStream) {
    let (s, prior, edges) = (&inst.state, &inst.prior, &inst.edges);
    for e in 0..edges.len() {
        let c = edge_scale_conditional(s, prior, edges, e).unwrap();
        check_scalar(
            inst,
            "edge scale",
            &c,
            |st, v| st.edge_scale[e] = v,
            |st| lj(inst, st),
            rng,
        );
        if kind.has_edge_aux() {
            let c = edge_aux_conditional(s, prior, edges, e).unwrap();
            check_scalar(
                inst,
                "edge aux",
                &c,
                |st, v| st.edge_aux[e] = v,
                |st| lj(inst, st),
                rng,
            );
        }
    }
}

fn check_dl_blocks(inst: &Instance, rng: &mut RngStream) {
    let (s, prior, edges) = (&inst.state, &inst.prior, &inst.edges);
    let m = edges.len();
    let collapsed = |st: &ChainState| log_joint_dl_collapsed(st, &inst.x, prior, edges).unwrap();

    // simplex and global scale drawn jointly as T = τν; density of T picks up ν^-(#ℰ-1)
    let gigs = dl_simplex_conditionals(s, prior, edges).unwrap();
    let draw_t = |rng: &mut RngStream| {
        (0..m)
            .map(|_| log_uniform(rng, 0.05, 5.0))
            .collect::<Vec<f64>>()
    };
    let (t1, t2) = (draw_t(rng), draw_t(rng));
    let in_t = |t: &[f64]| {
        let total: f64 = t.iter().sum();
        let mut st = s.clone();
        st.edge_scale = t.iter().map(|v| v / total).collect();
        st.global = Some(total);
        collapsed(&st) - (m as f64 - 1.0) * total.ln()
    };
    let cond_t = |t: &[f64]| t.iter().zip(&gigs).map(|(v, g)| g.ln_pdf(*v)).sum::<f64>();
    check(
        "simplex",
        (cond_t(&t1), cond_t(&t2)),
        (in_t(&t1), in_t(&t2)),
    );

    let c = dl_global_conditional(s, prior, edges).unwrap();
    check_scalar(
        inst,
        "global scale",
        &c,
        |st, v| st.global = Some(v),
        collapsed,
        rng,
    );

    for e in 0..m {
        let c = edge_aux_conditional(s, prior, edges, e).unwrap();
        check_scalar(
            inst,
            "edge aux",
            &c,
            |st, v| st.edge_aux[e] = v,
            |st| lj(inst, st),
            rng,
        );
    }
}

/// Panics naming the first block whose conditional disagrees with the joint.
pub fn check_model(kind: ModelKind, seed: u64) {
    let inst = random_instance(kind, N, P, seed);
    let mut rng = RngStream::new(seed, 7);
    check_common_blocks(&inst, kind, &mut rng);
    if kind == ModelKind::Bdlscvc {
        check_dl_blocks(&inst, &mut rng);
    } else {
        check_edge_blocks(&inst, kind, &mut rng);
    }
}
