//! Synthetic data: interlocking half-moons, irrelevant noise features and a
//! one-dimensional two-cluster toy.

use nalgebra::DMatrix;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::distributions::RngStream;
use crate::error::{Error, Result};
use crate::estimators::ClusterAssignment;
use crate::model::DataMatrix;

pub const DEFAULT_MOON_NOISE: f64 = 0.1;
pub const DEFAULT_FEATURE_NOISE: f64 = 0.5;

/// Geometry of the two moons. The upper moon is `(r cos t, r sin t)` and the
/// lower one `(offset.0 - r cos t, offset.1 - r sin t)` for `t` evenly spaced on `[0, π]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MoonGeometry {
    pub radius: f64,
    pub offset: (f64, f64),
}

impl Default for MoonGeometry {
    fn default() -> Self {
        Self {
            radius: 1.0,
            offset: (1.0, 0.5),
        }
    }
}

fn normal(sd: f64) -> Result<Normal<f64>> {
    Normal::new(0.0, sd).map_err(|e| Error::InvalidArgument(format!("noise sd {sd}: {e}")))
}

fn arc(k: usize, count: usize) -> f64 {
    if count <= 1 {
        0.0
    } else {
        std::f64::consts::PI * k as f64 / (count - 1) as f64
    }
}

/// `n` points on two moons (the upper one gets the extra point when `n` is
/// odd) with isotropic Gaussian jitter. Labels are 1 (upper) and 2 (lower).
pub fn half_moons_with(
    n: usize,
    noise_sd: f64,
    geometry: MoonGeometry,
    rng: &mut RngStream,
) -> Result<(DataMatrix, ClusterAssignment)> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "half moons need n >= 2, got {n}"
        )));
    }
    if !(noise_sd >= 0.0 && noise_sd.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "noise sd must be >= 0, got {noise_sd}"
        )));
    }
    let jitter = normal(noise_sd.max(f64::MIN_POSITIVE))?;
    let upper = n.div_ceil(2);
    let lower = n - upper;
    let r = geometry.radius;
    let mut m = DMatrix::zeros(n, 2);
    let mut labels = Vec::with_capacity(n);
    for k in 0..upper {
        let t = arc(k, upper);
        m[(k, 0)] = r * t.cos();
        m[(k, 1)] = r * t.sin();
        labels.push(1);
    }
    for k in 0..lower {
        let t = arc(k, lower);
        m[(upper + k, 0)] = geometry.offset.0 - r * t.cos();
        m[(upper + k, 1)] = geometry.offset.1 - r * t.sin();
        labels.push(2);
    }
    if noise_sd > 0.0 {
        m.iter_mut().for_each(|v| *v += jitter.sample(rng));
    }
    Ok((DataMatrix::new(m)?, ClusterAssignment::from_labels(&labels)))
}

pub fn half_moons(
    n: usize,
    noise_sd: f64,
    rng: &mut RngStream,
) -> Result<(DataMatrix, ClusterAssignment)> {
    half_moons_with(n, noise_sd, MoonGeometry::default(), rng)
}

/// Appends `p_total - p` columns of i.i.d. `N(0, noise_sd²)` noise.
pub fn add_irrelevant_features(
    x: &DataMatrix,
    p_total: usize,
    noise_sd: f64,
    rng: &mut RngStream,
) -> Result<DataMatrix> {
    let (n, p) = (x.n(), x.p());
    if p_total < p {
        return Err(Error::InvalidArgument(format!(
            "p_total = {p_total} is below the current p = {p}"
        )));
    }
    if !(noise_sd > 0.0 && noise_sd.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "noise sd must be > 0, got {noise_sd}"
        )));
    }
    let dist = normal(noise_sd)?;
    let mut m = x.as_matrix().clone().resize_horizontally(p_total, 0.0);
    for j in p..p_total {
        for i in 0..n {
            m[(i, j)] = dist.sample(rng);
        }
    }
    DataMatrix::new(m)
}

/// Two groups of `per_cluster` points around `0` and `separation` on a line.
pub fn two_clusters_1d(
    per_cluster: usize,
    separation: f64,
    noise_sd: f64,
    rng: &mut RngStream,
) -> Result<(DataMatrix, ClusterAssignment)> {
    if per_cluster == 0 {
        return Err(Error::InvalidArgument(
            "per_cluster must be at least 1".into(),
        ));
    }
    let jitter = normal(noise_sd.max(f64::MIN_POSITIVE))?;
    let mut values = Vec::with_capacity(2 * per_cluster);
    let mut labels = Vec::with_capacity(2 * per_cluster);
    for (label, centre) in [(1, 0.0), (2, separation)] {
        for _ in 0..per_cluster {
            let noise = if noise_sd > 0.0 {
                jitter.sample(rng)
            } else {
                0.0
            };
            values.push(centre + noise);
            labels.push(label);
        }
    }
    Ok((
        DataMatrix::new(DMatrix::from_vec(values.len(), 1, values))?,
        ClusterAssignment::from_labels(&labels),
    ))
}
