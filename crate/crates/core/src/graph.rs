//! Pair graphs over observations and the weighted Laplacians built on them.
//!
//! Observations are indexed from 0 internally; files written by the CLI use
//! 1-based ids.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::model::DataMatrix;

/// Default neighbor count for kNN fusion weights.
pub const DEFAULT_NEIGHBORS: usize = 5;
/// Default bandwidth for kNN fusion weights.
pub const DEFAULT_PHI: f64 = 0.5;
/// Largest dimension assembled as a dense matrix unless the caller raises it.
pub const DEFAULT_DENSE_LIMIT: usize = 512;

/// Unordered observation pairs `(i1, i2)` with `i1 < i2`, a nonnegative
/// fusion weight per pair and a weight per feature.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeSet {
    n: usize,
    edges: Vec<(usize, usize)>,
    weights: Vec<f64>,
    feature_weights: Vec<f64>,
}

impl EdgeSet {
    /// Builds an edge set from explicit pairs. Pairs are normalized to
    /// `i1 < i2`, sorted, and must be unique.
    pub fn from_pairs(
        n: usize,
        pairs: Vec<(usize, usize)>,
        weights: Vec<f64>,
        p: usize,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::EmptyGraph(format!(
                "need at least 2 observations, got {n}"
            )));
        }
        if pairs.len() != weights.len() {
            return Err(Error::Dimension(format!(
                "{} pairs but {} weights",
                pairs.len(),
                weights.len()
            )));
        }
        let mut tagged: Vec<((usize, usize), f64)> = Vec::with_capacity(pairs.len());
        for ((a, b), w) in pairs.into_iter().zip(weights) {
            if a == b || a >= n || b >= n {
                return Err(Error::InvalidArgument(format!(
                    "invalid pair ({a}, {b}) for n = {n}"
                )));
            }
            if !(w >= 0.0 && w.is_finite()) {
                return Err(Error::domain(
                    "edge weight",
                    format!("pair ({a}, {b}) has weight {w}"),
                ));
            }
            tagged.push(((a.min(b), a.max(b)), w));
        }
        tagged.sort_by_key(|x| x.0);
        if tagged.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidArgument("duplicate pair in edge set".into()));
        }
        let (edges, weights) = tagged.into_iter().unzip();
        Ok(Self {
            n,
            edges,
            weights,
            feature_weights: vec![1.0; p],
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn feature_weights(&self) -> &[f64] {
        &self.feature_weights
    }

    /// Replaces the per-feature weights `u_j` (all 1.0 by default).
    pub fn with_feature_weights(mut self, u: Vec<f64>) -> Result<Self> {
        if let Some(bad) = u.iter().find(|v| !(**v >= 0.0 && v.is_finite())) {
            return Err(Error::domain("feature weight", format!("got {bad}")));
        }
        self.feature_weights = u;
        Ok(self)
    }

    /// Resizes the feature weights to `p` entries of 1.0 when they do not match.
    pub fn for_features(mut self, p: usize) -> Self {
        if self.feature_weights.len() != p {
            self.feature_weights = vec![1.0; p];
        }
        self
    }

    /// Replaces the fusion weights, keeping the pair list.
    pub fn with_weights(mut self, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != self.edges.len() {
            return Err(Error::Dimension(format!(
                "{} edges but {} weights",
                self.edges.len(),
                weights.len()
            )));
        }
        if let Some(bad) = weights.iter().find(|v| !(**v >= 0.0 && v.is_finite())) {
            return Err(Error::domain("edge weight", format!("got {bad}")));
        }
        self.weights = weights;
        Ok(self)
    }

    /// Edge ids grouped by their first endpoint, in edge order.
    pub fn edges_by_first(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n];
        for (e, &(i1, _)) in self.edges.iter().enumerate() {
            out[i1].push(e);
        }
        out
    }
}

/// All `n(n-1)/2` pairs with unit weight.
pub fn build_full_edgeset(n: usize) -> Result<EdgeSet> {
    if n < 2 {
        return Err(Error::EmptyGraph(format!(
            "need at least 2 observations, got {n}"
        )));
    }
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for i1 in 0..n {
        for i2 in (i1 + 1)..n {
            edges.push((i1, i2));
        }
    }
    let weights = vec![1.0; edges.len()];
    Ok(EdgeSet {
        n,
        edges,
        weights,
        feature_weights: Vec::new(),
    })
}

/// Symmetrized kNN graph: `(i1, i2)` is an edge when either point is among the
/// other's `m` nearest neighbors, weighted by `exp(-φ ‖x_i1 - x_i2‖²)`.
/// Distance ties are broken by the lower index. Pairs whose weight underflows
/// to zero are dropped.
pub fn build_knn_weights(x: &DataMatrix, m: usize, phi: f64) -> Result<EdgeSet> {
    let n = x.n();
    if n < 2 {
        return Err(Error::EmptyGraph(format!(
            "need at least 2 observations, got {n}"
        )));
    }
    if m == 0 {
        return Err(Error::InvalidArgument("neighbor count must be >= 1".into()));
    }
    if !(phi >= 0.0 && phi.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "phi must be finite and >= 0, got {phi}"
        )));
    }
    let dist2 = x.pairwise_sq_distances();
    let mut selected = vec![false; n * n];
    for i in 0..n {
        let mut others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
        others.sort_by(|&a, &b| {
            dist2[i * n + a]
                .total_cmp(&dist2[i * n + b])
                .then(a.cmp(&b))
        });
        for &j in others.iter().take(m) {
            selected[i.min(j) * n + i.max(j)] = true;
        }
    }
    let mut pairs = Vec::new();
    let mut weights = Vec::new();
    for i1 in 0..n {
        for i2 in (i1 + 1)..n {
            if selected[i1 * n + i2] {
                let w = (-phi * dist2[i1 * n + i2]).exp();
                if w > 0.0 {
                    pairs.push((i1, i2));
                    weights.push(w);
                }
            }
        }
    }
    Ok(EdgeSet {
        n,
        edges: pairs,
        weights,
        feature_weights: vec![1.0; x.p()],
    })
}

/// Per-edge positive coefficients `c_e` of a weighted graph Laplacian.
#[derive(Clone, Debug, PartialEq)]
pub struct LaplacianSpec {
    n: usize,
    coefficients: Vec<f64>,
}

impl LaplacianSpec {
    pub fn new(n: usize, coefficients: Vec<f64>) -> Result<Self> {
        if let Some((e, c)) = coefficients
            .iter()
            .enumerate()
            .find(|(_, c)| !(c.is_finite() && **c > 0.0))
        {
            return Err(Error::domain(
                "laplacian",
                format!("edge {e} has coefficient {c}"),
            ));
        }
        Ok(Self { n, coefficients })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    /// `vᵀ L v = Σ_e c_e (v_i1 - v_i2)²`, evaluated on the edge list.
    pub fn quadratic_form(&self, edges: &EdgeSet, v: &[f64]) -> f64 {
        edges
            .edges()
            .iter()
            .zip(&self.coefficients)
            .map(|(&(a, b), c)| c * (v[a] - v[b]).powi(2))
            .sum()
    }

    /// Row sums of the off-diagonal magnitudes, i.e. the Laplacian diagonal.
    pub fn degrees(&self, edges: &EdgeSet) -> Vec<f64> {
        let mut deg = vec![0.0; self.n];
        for (&(a, b), c) in edges.edges().iter().zip(&self.coefficients) {
            deg[a] += c;
            deg[b] += c;
        }
        deg
    }
}

/// Dense `n×n` Laplacian: off-diagonal `(i1, i2)` is `-c_e`, diagonal `i` is
/// the sum of `c` over incident edges.
pub fn assemble_laplacian(spec: &LaplacianSpec, edges: &EdgeSet) -> Result<DMatrix<f64>> {
    assemble_laplacian_limited(spec, edges, DEFAULT_DENSE_LIMIT)
}

pub fn assemble_laplacian_limited(
    spec: &LaplacianSpec,
    edges: &EdgeSet,
    max_dense: usize,
) -> Result<DMatrix<f64>> {
    if spec.coefficients.len() != edges.len() || spec.n != edges.n() {
        return Err(Error::Dimension(format!(
            "laplacian spec (n = {}, {} coefficients) does not match edge set (n = {}, {} edges)",
            spec.n,
            spec.coefficients.len(),
            edges.n(),
            edges.len()
        )));
    }
    if spec.n > max_dense {
        return Err(Error::InvalidArgument(format!(
            "n = {} exceeds the dense assembly limit {max_dense}",
            spec.n
        )));
    }
    let mut l = DMatrix::zeros(spec.n, spec.n);
    for (&(a, b), &c) in edges.edges().iter().zip(&spec.coefficients) {
        l[(a, b)] -= c;
        l[(b, a)] -= c;
        l[(a, a)] += c;
        l[(b, b)] += c;
    }
    Ok(l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn line(points: &[f64]) -> DataMatrix {
        DataMatrix::from_rows(&points.iter().map(|&v| vec![v]).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn full_edge_sets() {
        let e3 = build_full_edgeset(3).unwrap();
        assert_eq!(e3.edges(), &[(0, 1), (0, 2), (1, 2)]);
        assert_eq!(build_full_edgeset(10).unwrap().len(), 45);
        assert_eq!(build_full_edgeset(2).unwrap().edges(), &[(0, 1)]);
        assert!(build_full_edgeset(1).is_err());
    }

    #[test]
    fn knn_on_a_line() {
        let g = build_knn_weights(&line(&[0.0, 1.0, 2.0, 10.0]), 1, 0.5).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2), (2, 3)]);
        let h = (-0.5f64).exp();
        assert!((g.weights()[0] - h).abs() < 1e-15);
        assert!((g.weights()[1] - h).abs() < 1e-15);
        assert!((g.weights()[2] - (-32.0f64).exp()).abs() < 1e-28);
    }

    #[test]
    fn knn_duplicate_rows_get_unit_weight() {
        let g = build_knn_weights(&line(&[3.0, 3.0, 7.0]), 1, 0.5).unwrap();
        assert!(g.edges().contains(&(0, 1)));
        assert_eq!(g.weights()[0], 1.0);
    }

    #[test]
    fn knn_phi_zero_gives_unit_weights() {
        let g = build_knn_weights(&line(&[0.0, 4.0, 9.0, 20.0, 21.0]), 2, 0.0).unwrap();
        assert!(g.weights().iter().all(|w| *w == 1.0));
    }

    #[test]
    fn knn_rejects_bad_arguments() {
        assert!(build_knn_weights(&line(&[1.0, 2.0]), 0, 0.5).is_err());
        assert!(build_knn_weights(&line(&[1.0, 2.0]), 1, -0.5).is_err());
    }

    #[test]
    fn two_node_laplacian() {
        let edges = build_full_edgeset(2).unwrap();
        let l = assemble_laplacian(&LaplacianSpec::new(2, vec![4.0]).unwrap(), &edges).unwrap();
        assert_eq!(l, DMatrix::from_row_slice(2, 2, &[4.0, -4.0, -4.0, 4.0]));
    }

    #[test]
    fn complete_graph_spectrum() {
        let edges = build_full_edgeset(3).unwrap();
        let l = assemble_laplacian(&LaplacianSpec::new(3, vec![1.0; 3]).unwrap(), &edges).unwrap();
        let mut ev: Vec<f64> = l.symmetric_eigenvalues().iter().cloned().collect();
        ev.sort_by(f64::total_cmp);
        assert!(ev[0].abs() < 1e-12);
        assert!((ev[1] - 3.0).abs() < 1e-12 && (ev[2] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn nonfinite_coefficient_is_rejected() {
        assert!(LaplacianSpec::new(2, vec![f64::INFINITY]).is_err());
        assert!(LaplacianSpec::new(2, vec![0.0]).is_err());
    }

    #[test]
    fn dense_limit_is_enforced() {
        let edges = build_full_edgeset(4).unwrap();
        let spec = LaplacianSpec::new(4, vec![1.0; 6]).unwrap();
        assert!(assemble_laplacian_limited(&spec, &edges, 3).is_err());
    }

    proptest! {
        #[test]
        fn quadratic_form_and_row_sums(
            n in 2usize..9,
            seed in any::<u64>(),
        ) {
            use crate::distributions::RngStream;
            let mut rng = RngStream::new(seed, 0);
            let edges = build_full_edgeset(n).unwrap();
            let coeffs: Vec<f64> = (0..edges.len()).map(|_| 0.01 + 5.0 * rng.open01()).collect();
            let spec = LaplacianSpec::new(n, coeffs).unwrap();
            let l = assemble_laplacian(&spec, &edges).unwrap();
            prop_assert!((l.clone() - l.transpose()).abs().max() == 0.0);
            for i in 0..n {
                prop_assert!(l.row(i).sum().abs() < 1e-12);
            }
            for _ in 0..100 {
                let v: Vec<f64> = (0..n).map(|_| 4.0 * rng.open01() - 2.0).collect();
                let dv = nalgebra::DVector::from_vec(v.clone());
                let dense = (dv.transpose() * &l * &dv)[0];
                let sparse = spec.quadratic_form(&edges, &v);
                prop_assert!((dense - sparse).abs() <= 1e-10 * sparse.abs().max(1e-300));
            }
            // a ridge lifts the spectrum at least by its size
            let ridge = 0.3;
            let mut lr = l.clone();
            for i in 0..n { lr[(i, i)] += ridge; }
            let min_ev = lr.symmetric_eigenvalues().iter().cloned().fold(f64::MAX, f64::min);
            prop_assert!(min_ev >= ridge - 1e-10);
        }

        #[test]
        fn knn_is_subset_of_full_graph(n in 2usize..12, m in 1usize..6, seed in any::<u64>()) {
            use crate::distributions::RngStream;
            let mut rng = RngStream::new(seed, 0);
            let rows: Vec<Vec<f64>> = (0..n).map(|_| vec![rng.open01() * 3.0, rng.open01()]).collect();
            let x = DataMatrix::from_rows(&rows).unwrap();
            let knn = build_knn_weights(&x, m, 0.5).unwrap();
            let full = build_full_edgeset(n).unwrap();
            for (e, w) in knn.edges().iter().zip(knn.weights()) {
                prop_assert!(full.edges().contains(e));
                prop_assert!(*w > 0.0 && *w <= 1.0);
            }
            // every point has at least min(m, n-1) incident edges
            let mut deg = vec![0usize; n];
            for &(a, b) in knn.edges() { deg[a] += 1; deg[b] += 1; }
            prop_assert!(deg.iter().all(|&d| d >= m.min(n - 1)));
        }
    }
}
