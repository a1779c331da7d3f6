//! Seedable samplers and log densities for every family the Gibbs kernels draw from.

mod gamma;
mod gig;
mod inverse_gaussian;
mod mvn;
mod rng;
mod simplex;
pub mod special;

pub use gamma::{sample_gamma, sample_inverse_gamma, Gamma, InverseGamma};
pub use gig::{sample_gig, Gig};
pub use inverse_gaussian::{sample_inverse_gaussian, InverseGaussian};
pub use mvn::{sample_mvn_precision, MvnPrecision};
pub use rng::RngStream;
pub use simplex::{normalize_to_simplex, sample_dirichlet_via_gig};
