use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Geometric grid `min · exp((ln max − ln min) · i / m)` for `i = 1..=m`.
/// The last point is exactly `max`; `min == max` repeats `min`.
pub fn geometric_grid(min: f64, max: f64, m: usize) -> Result<Vec<f64>> {
    if m == 0 {
        return Err(Error::InvalidArgument("grid size must be >= 1".into()));
    }
    if !(min > 0.0 && max >= min && max.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "grid bounds must satisfy 0 < min <= max < inf, got [{min}, {max}]"
        )));
    }
    let span = max.ln() - min.ln();
    Ok((1..=m)
        .map(|i| {
            if i == m {
                max
            } else {
                min * (span * i as f64 / m as f64).exp()
            }
        })
        .collect())
}

/// One named hyperparameter swept over a geometric grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridAxis {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub m: usize,
}

impl GridAxis {
    pub fn new(name: impl Into<String>, min: f64, max: f64, m: usize) -> Result<Self> {
        let axis = Self {
            name: name.into(),
            min,
            max,
            m,
        };
        axis.values()?;
        Ok(axis)
    }

    pub fn values(&self) -> Result<Vec<f64>> {
        geometric_grid(self.min, self.max, self.m)
    }
}

/// Cartesian product of axes. The first axis varies slowest.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub axes: Vec<GridAxis>,
}

/// One grid point: `(name, value)` in axis order.
pub type GridPoint = Vec<(String, f64)>;

impl GridSpec {
    pub fn new(axes: Vec<GridAxis>) -> Self {
        Self { axes }
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.m).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn expand(&self) -> Result<Vec<GridPoint>> {
        let mut points: Vec<GridPoint> = vec![Vec::new()];
        for axis in &self.axes {
            let values = axis.values()?;
            points = points
                .into_iter()
                .flat_map(|p| {
                    values.iter().map(move |&v| {
                        let mut q = p.clone();
                        q.push((axis.name.clone(), v));
                        q
                    })
                })
                .collect();
        }
        Ok(points)
    }
}
