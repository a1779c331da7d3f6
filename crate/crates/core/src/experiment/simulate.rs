use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::setup::ModelSetup;
use crate::datagen::{
    add_irrelevant_features, half_moons, DEFAULT_FEATURE_NOISE, DEFAULT_MOON_NOISE,
};
use crate::distributions::RngStream;
use crate::error::{Error, Result};
use crate::estimators::{
    extract_clusters, feature_flags, select_features, ClusterAssignment, ThresholdRule,
};
use crate::graph::build_full_edgeset;
use crate::metrics::{rand_index, tnr_tpr};
use crate::model::{DataMatrix, ModelKind};
use crate::samplers::{run_chain, ChainConfig};

/// Iteration count of the reference study the desk-scale defaults shrink.
pub const REFERENCE_ITERATIONS: usize = 50_000;
/// Replicate count of the reference study.
pub const REFERENCE_REPS: usize = 50;

const DATA_TAG: u64 = 0xDA7A;

/// Half-moons in the first two columns plus `p − 2` Gaussian noise columns.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationSetting {
    pub n: usize,
    pub p: usize,
    pub moon_noise: f64,
    pub feature_noise: f64,
}

/// One generated replicate.
#[derive(Clone, Debug)]
pub struct SimulatedData {
    pub x: DataMatrix,
    pub truth: ClusterAssignment,
    pub relevant: Vec<bool>,
}

impl SimulationSetting {
    pub fn new(n: usize, p: usize) -> Result<Self> {
        if n < 2 || p < 2 {
            return Err(Error::InvalidArgument(format!(
                "setting needs n >= 2 and p >= 2, got n={n}, p={p}"
            )));
        }
        Ok(Self {
            n,
            p,
            moon_noise: DEFAULT_MOON_NOISE,
            feature_noise: DEFAULT_FEATURE_NOISE,
        })
    }

    pub fn generate(&self, rng: &mut RngStream) -> Result<SimulatedData> {
        let (moons, truth) = half_moons(self.n, self.moon_noise, rng)?;
        let x = add_irrelevant_features(&moons, self.p, self.feature_noise, rng)?;
        let mut relevant = vec![false; self.p];
        relevant[0] = true;
        relevant[1] = true;
        Ok(SimulatedData { x, truth, relevant })
    }

    /// Data of replicate `rep`; identical for every model and grid point.
    pub fn replicate(&self, seed: u64, rep: usize) -> Result<SimulatedData> {
        self.generate(&mut RngStream::substream(seed, &[DATA_TAG, rep as u64]))
    }
}

impl FromStr for SimulationSetting {
    type Err = Error;

    /// Parses `n<N>p<P>`, e.g. `n20p20`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("setting '{s}' is not of the form n<N>p<P>"));
        let rest = s.trim().strip_prefix('n').ok_or_else(bad)?;
        let (n, p) = rest.split_once('p').ok_or_else(bad)?;
        Self::new(n.parse().map_err(|_| bad())?, p.parse().map_err(|_| bad())?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub setting: SimulationSetting,
    pub reps: usize,
    pub iterations: usize,
    pub burn_in: usize,
    pub thin: usize,
    pub seed: u64,
    pub thresholds: ThresholdRule,
    /// Worker threads; 0 uses rayon's default.
    pub jobs: usize,
}

impl SimulationConfig {
    /// 10 replicates of 5,000 iterations with 1,000 burn-in.
    pub fn desk_scale(setting: SimulationSetting, seed: u64) -> Self {
        Self {
            setting,
            reps: 10,
            iterations: 5_000,
            burn_in: 1_000,
            thin: 1,
            seed,
            thresholds: ThresholdRule::default(),
            jobs: 0,
        }
    }

    fn chain(&self, model_index: usize, rep: usize, grid_index: usize) -> ChainConfig {
        ChainConfig::new(self.iterations, self.seed)
            .with_burn_in(self.burn_in)
            .with_thin(self.thin)
            .with_stream(job_stream(model_index, rep, grid_index))
    }
}

/// Chain stream of one job: model, replicate and grid index packed into
/// disjoint bit ranges.
pub fn job_stream(model_index: usize, rep: usize, grid_index: usize) -> u64 {
    ((model_index as u64) << 48) | ((rep as u64) << 24) | grid_index as u64
}

/// Metrics of one fitted grid point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridScore {
    pub rep: usize,
    pub grid_index: usize,
    pub hyperparameters: Vec<(String, f64)>,
    pub rand: f64,
    pub tnr: Option<f64>,
    pub tpr: Option<f64>,
    pub clusters: usize,
    pub selected: usize,
    pub stream: u64,
    pub fell_back: bool,
}

/// Mean and sample standard deviation over the replicates where a metric is
/// defined. A single value has sd 0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: Option<f64>,
    pub sd: Option<f64>,
    pub count: usize,
}

impl Summary {
    pub fn of(values: impl IntoIterator<Item = Option<f64>>) -> Self {
        let v: Vec<f64> = values.into_iter().flatten().collect();
        let count = v.len();
        if count == 0 {
            return Self {
                mean: None,
                sd: None,
                count,
            };
        }
        let mean = v.iter().sum::<f64>() / count as f64;
        let sd = if count == 1 {
            0.0
        } else {
            (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (count - 1) as f64).sqrt()
        };
        Self {
            mean: Some(mean),
            sd: Some(sd),
            count,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelReport {
    pub model: ModelKind,
    pub graph: String,
    pub estimator: String,
    pub grid_size: usize,
    pub rand: Summary,
    pub tnr: Summary,
    pub tpr: Summary,
    /// The RAND-maximizing grid point of each replicate.
    pub chosen: Vec<GridScore>,
    /// Every grid point of every replicate, ordered by (rep, grid index).
    pub scores: Vec<GridScore>,
}

/// Run parameters echoed at the top of every report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportHeader {
    pub setting: SimulationSetting,
    pub reps: usize,
    pub iterations: usize,
    pub burn_in: usize,
    pub thin: usize,
    pub seed: u64,
    pub thresholds: ThresholdRule,
    pub reference_reps: usize,
    pub reference_iterations: usize,
    pub scaling: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationReport {
    pub header: ReportHeader,
    pub models: Vec<ModelReport>,
}

impl SimulationReport {
    pub fn model(&self, kind: ModelKind) -> Option<&ModelReport> {
        self.models.iter().find(|m| m.model == kind)
    }
}

/// Metrics of one estimate against the truth.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EstimateScore {
    pub rand: f64,
    pub tnr: Option<f64>,
    pub tpr: Option<f64>,
    pub clusters: usize,
    pub selected: usize,
}

/// Scores one estimate against the truth.
pub fn score_estimate(
    a_hat: &nalgebra::DMatrix<f64>,
    data: &SimulatedData,
    rule: &ThresholdRule,
) -> Result<EstimateScore> {
    let t = rule.apply(&data.x);
    let full = build_full_edgeset(data.x.n())?;
    let clusters = extract_clusters(a_hat, &full, t.cluster);
    let selected = select_features(a_hat, t.feature);
    let rates = tnr_tpr(&data.relevant, &feature_flags(&selected, data.x.p()))?;
    Ok(EstimateScore {
        rand: rand_index(&data.truth, &clusters)?,
        tnr: rates.tnr,
        tpr: rates.tpr,
        clusters: clusters.k(),
        selected: selected.len(),
    })
}

fn fit_one(
    setup: &ModelSetup,
    data: &SimulatedData,
    config: &SimulationConfig,
    model_index: usize,
    rep: usize,
    grid_index: usize,
    point: &[(String, f64)],
) -> Result<GridScore> {
    let prior = setup.prior_at(&point.to_vec())?;
    let edges = setup.graph.build(&data.x)?;
    let chain = config.chain(model_index, rep, grid_index);
    let output = run_chain(&data.x, &prior, &edges, &chain)?;
    let estimate = setup.estimator.estimate(&output, &data.x, &prior, &edges)?;
    let EstimateScore {
        rand,
        tnr,
        tpr,
        clusters,
        selected,
    } = score_estimate(estimate.a_hat(), data, &config.thresholds)?;
    Ok(GridScore {
        rep,
        grid_index,
        hyperparameters: point.to_vec(),
        rand,
        tnr,
        tpr,
        clusters,
        selected,
        stream: chain.stream,
        fell_back: estimate.fell_back,
    })
}

/// Fits every model at every grid point of every replicate and scores each
/// replicate at its RAND-maximizing grid point (ties go to the lower index).
/// Jobs run on a pool of `config.jobs` threads; the result does not depend on
/// the thread count.
pub fn run_simulation(
    config: &SimulationConfig,
    setups: &[ModelSetup],
) -> Result<SimulationReport> {
    if config.reps == 0 {
        return Err(Error::InvalidArgument("reps must be >= 1".into()));
    }
    if setups.is_empty() {
        return Err(Error::InvalidArgument("no models to simulate".into()));
    }
    config.chain(0, 0, 0).validate()?;
    let data: Vec<SimulatedData> = (0..config.reps)
        .map(|rep| config.setting.replicate(config.seed, rep))
        .collect::<Result<_>>()?;
    let grids: Vec<Vec<Vec<(String, f64)>>> = setups
        .iter()
        .map(|s| s.grid.expand())
        .collect::<Result<_>>()?;

    let mut jobs = Vec::new();
    for (mi, grid) in grids.iter().enumerate() {
        for rep in 0..config.reps {
            for gi in 0..grid.len() {
                jobs.push((mi, rep, gi));
            }
        }
    }
    let run = || {
        jobs.par_iter()
            .map(|&(mi, rep, gi)| {
                fit_one(&setups[mi], &data[rep], config, mi, rep, gi, &grids[mi][gi]).map_err(|e| {
                    Error::Job {
                        model: setups[mi].kind().to_string(),
                        rep,
                        grid_index: gi,
                        source: Box::new(e),
                    }
                })
            })
            .collect::<Vec<Result<GridScore>>>()
    };
    let results = if config.jobs == 0 {
        run()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(config.jobs)
            .build()
            .map_err(|e| {
                Error::InvalidArgument(format!("cannot start {} workers: {e}", config.jobs))
            })?
            .install(run)
    };

    let mut results = results.into_iter();
    let mut models = Vec::with_capacity(setups.len());
    for (setup, grid) in setups.iter().zip(&grids) {
        let scores: Vec<GridScore> = results
            .by_ref()
            .take(config.reps * grid.len())
            .collect::<Result<_>>()?;
        let chosen: Vec<GridScore> = scores
            .chunks(grid.len())
            .map(|rep_scores| {
                rep_scores
                    .iter()
                    .fold(None::<&GridScore>, |best, s| match best {
                        Some(b) if b.rand >= s.rand => Some(b),
                        _ => Some(s),
                    })
                    .expect("grid is nonempty")
                    .clone()
            })
            .collect();
        models.push(ModelReport {
            model: setup.kind(),
            graph: setup.graph.to_string(),
            estimator: setup.estimator.to_string(),
            grid_size: grid.len(),
            rand: Summary::of(chosen.iter().map(|s| Some(s.rand))),
            tnr: Summary::of(chosen.iter().map(|s| s.tnr)),
            tpr: Summary::of(chosen.iter().map(|s| s.tpr)),
            chosen,
            scores,
        });
    }
    Ok(SimulationReport {
        header: ReportHeader {
            setting: config.setting,
            reps: config.reps,
            iterations: config.iterations,
            burn_in: config.burn_in,
            thin: config.thin,
            seed: config.seed,
            thresholds: config.thresholds,
            reference_reps: REFERENCE_REPS,
            reference_iterations: REFERENCE_ITERATIONS,
            scaling: format!(
                "{} reps x {} iterations (reference {} x {})",
                config.reps, config.iterations, REFERENCE_REPS, REFERENCE_ITERATIONS
            ),
        },
        models,
    })
}
