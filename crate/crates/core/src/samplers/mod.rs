//! Blocked Gibbs sweeps for the four models and chain orchestration.

mod chain;
pub mod conditionals;
mod sweep;

pub use chain::{run_chain, ChainConfig, ChainOutput};
pub use sweep::{
    sweep_bdlscvc, sweep_bhorscvc, sweep_bnegscvc, sweep_bscvc, sweep_in_place, ColumnOrder,
};
