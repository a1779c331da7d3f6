use serde::Serialize;

use super::sweep::{sweep_in_place, ColumnOrder};
use crate::distributions::RngStream;
use crate::error::{Error, Result};
use crate::graph::EdgeSet;
use crate::model::{log_joint, ChainState, DataMatrix, InitMode, ModelKind, PriorSpec};

#[derive(Clone, Debug, PartialEq)]
pub struct ChainConfig {
    pub iterations: usize,
    pub burn_in: usize,
    pub thin: usize,
    pub seed: u64,
    /// Stream of the ChaCha generator, so jobs sharing a seed stay independent.
    pub stream: u64,
    pub init: InitMode,
    pub column_order: ColumnOrder,
}

impl ChainConfig {
    /// Burn-in of 20% and no thinning.
    pub fn new(iterations: usize, seed: u64) -> Self {
        Self {
            iterations,
            burn_in: iterations / 5,
            thin: 1,
            seed,
            stream: 0,
            init: InitMode::Data,
            column_order: ColumnOrder::Ascending,
        }
    }

    pub fn with_burn_in(mut self, burn_in: usize) -> Self {
        self.burn_in = burn_in;
        self
    }

    pub fn with_thin(mut self, thin: usize) -> Self {
        self.thin = thin;
        self
    }

    pub fn with_stream(mut self, stream: u64) -> Self {
        self.stream = stream;
        self
    }

    pub fn with_init(mut self, init: InitMode) -> Self {
        self.init = init;
        self
    }

    pub fn with_column_order(mut self, order: ColumnOrder) -> Self {
        self.column_order = order;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.burn_in >= self.iterations {
            return Err(Error::InvalidArgument(format!(
                "burn-in {} must be below the iteration count {}",
                self.burn_in, self.iterations
            )));
        }
        if self.thin == 0 {
            return Err(Error::InvalidArgument("thin must be at least 1".into()));
        }
        Ok(())
    }

    /// `⌊(iterations - burn_in) / thin⌋`
    pub fn stored_draws(&self) -> usize {
        (self.iterations - self.burn_in) / self.thin
    }
}

impl Default for ChainConfig {
    fn default() -> Self {
        Self::new(5000, 0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainOutput {
    pub kind: ModelKind,
    pub draws: Vec<ChainState>,
    pub log_joint: Vec<f64>,
    /// Acceptance rate per block; every move is a Gibbs draw.
    pub acceptance: Vec<(String, f64)>,
    /// State after the last iteration, stored or not.
    pub final_state: ChainState,
}

impl ChainOutput {
    pub fn len(&self) -> usize {
        self.draws.len()
    }

    pub fn is_empty(&self) -> bool {
        self.draws.is_empty()
    }
}

fn block_names(kind: ModelKind) -> &'static [&'static str] {
    match kind {
        ModelKind::Bscvc => &["A", "edge scale", "feature scale", "sigma2"],
        ModelKind::Bnegscvc | ModelKind::Bhorscvc => &[
            "A",
            "edge scale",
            "edge auxiliary",
            "feature scale",
            "feature auxiliary",
            "sigma2",
        ],
        ModelKind::Bdlscvc => &[
            "A",
            "simplex",
            "global scale",
            "edge auxiliary",
            "feature scale",
            "feature auxiliary",
            "sigma2",
        ],
    }
}

/// Runs one Gibbs chain and stores every `thin`-th state after burn-in.
pub fn run_chain(
    x: &DataMatrix,
    prior: &PriorSpec,
    edges: &EdgeSet,
    config: &ChainConfig,
) -> Result<ChainOutput> {
    config.validate()?;
    let kind = prior.kind();
    let mut state = ChainState::initial(x, kind, edges.len(), &config.init)?;
    let mut rng = RngStream::new(config.seed, config.stream);
    let mut draws = Vec::with_capacity(config.stored_draws());
    let mut lj = Vec::with_capacity(config.stored_draws());
    for it in 0..config.iterations {
        sweep_in_place(&mut state, x, prior, edges, config.column_order, &mut rng).map_err(
            |e| Error::Chain {
                iteration: it,
                source: Box::new(e),
            },
        )?;
        let kept = it + 1 - config.burn_in.min(it + 1);
        if it >= config.burn_in
            && kept.is_multiple_of(config.thin)
            && draws.len() < config.stored_draws()
        {
            lj.push(
                log_joint(&state, x, prior, edges).map_err(|e| Error::Chain {
                    iteration: it,
                    source: Box::new(e),
                })?,
            );
            draws.push(state.clone());
        }
    }
    Ok(ChainOutput {
        kind,
        draws,
        log_joint: lj,
        acceptance: block_names(kind)
            .iter()
            .map(|b| (b.to_string(), 1.0))
            .collect(),
        final_state: state,
    })
}
