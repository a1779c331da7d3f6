//! Bayesian sparse convex clustering.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod datagen;
pub mod distributions;
pub mod error;
pub mod estimators;
pub mod experiment;
pub mod graph;
pub mod metrics;
pub mod model;
pub mod samplers;

pub use error::{Error, Result};
