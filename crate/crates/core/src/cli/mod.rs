//! Command-line interface of the `bcvx` binary.
//!
//! Every subcommand writes plain CSV/JSON files into `--out`. Exit codes:
//! 0 on success, 1 when the numerics fail, 2 for usage and I/O errors.

mod config;
mod io;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{ArgMatches, Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

pub use config::{config_lines, echo, expand_config, parse_config};
pub use io::{clusters_csv, flags_csv, labels_csv, matrix_csv, read_column, read_data, read_flags};

use crate::datagen::{
    add_irrelevant_features, half_moons, two_clusters_1d, DEFAULT_FEATURE_NOISE, DEFAULT_MOON_NOISE,
};
use crate::distributions::RngStream;
use crate::error::{Error, Result};
use crate::estimators::{
    extract_clusters, feature_flags, select_features, ClusterAssignment, ThresholdRule,
};
use crate::experiment::{
    cluster_path, geometric_grid, path_csv, run_simulation, summary_csv, write_report,
    EstimatorKind, GraphChoice, GridAxis, GridSpec, ModelSetup, PathConfig, SimulationConfig,
    SimulationSetting,
};
use crate::graph::{build_full_edgeset, DEFAULT_NEIGHBORS, DEFAULT_PHI};
use crate::metrics::{rand_index, tnr_tpr};
use crate::model::{log_joint, DataMatrix, ModelKind, PriorSpec};
use crate::samplers::{run_chain, ChainConfig};

/// Environment variable supplying the default `--seed`.
pub const SEED_ENV: &str = "BCVX_SEED";

#[derive(Debug, Parser)]
#[command(name = "bcvx", version, about = "Bayesian sparse convex clustering")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Commands,
}

#[derive(Debug, Subcommand)]
pub enum Commands {
    /// Simulate a data set and its ground truth.
    Generate(GenerateArgs),
    /// Fit one model and write the estimate, clusters and selected features.
    Fit(FitArgs),
    /// Fit along a grid of the fusion hyperparameter.
    Path(PathArgs),
    /// Replicated simulation study with grid search per replicate.
    Simulate(SimulateArgs),
    /// Score clusters and feature flags against the truth.
    Evaluate(EvaluateArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,
    /// Output directory, created if missing.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// File of `key=value` lines overriding the flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Two interlocking half-moons in the first two columns (default).
    #[arg(long, conflicts_with = "two_clusters")]
    pub moons: bool,
    /// Two Gaussian clusters on a line in the first column.
    #[arg(long)]
    pub two_clusters: bool,
    #[arg(long, default_value_t = 50)]
    pub n: usize,
    /// Total column count; columns past the structured ones are noise.
    #[arg(long, default_value_t = 2)]
    pub p: usize,
    /// Jitter of the structured columns.
    #[arg(long, default_value_t = DEFAULT_MOON_NOISE)]
    pub noise: f64,
    #[arg(long, default_value_t = DEFAULT_FEATURE_NOISE)]
    pub feature_noise: f64,
    /// Distance between the two cluster centers.
    #[arg(long, default_value_t = 4.0)]
    pub separation: f64,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GraphKind {
    Full,
    Knn,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// bscvc, bnegscvc, bhorscvc or bdlscvc.
    #[arg(long)]
    pub model: ModelKind,
    #[arg(long)]
    pub lambda1: Option<f64>,
    #[arg(long)]
    pub gamma1: Option<f64>,
    #[arg(long)]
    pub nu1: Option<f64>,
    #[arg(long)]
    pub alpha1: Option<f64>,
    #[arg(long)]
    pub lambda2: Option<f64>,
    #[arg(long)]
    pub gamma2: Option<f64>,
    /// Shape of an IG(nu0/2, eta0/2) noise prior; the default is 1/σ².
    #[arg(long, requires = "eta0")]
    pub nu0: Option<f64>,
    #[arg(long, requires = "nu0")]
    pub eta0: Option<f64>,
    #[arg(long, default_value_t = 5000)]
    pub iters: usize,
    /// Defaults to a fifth of `--iters`.
    #[arg(long)]
    pub burn_in: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub thin: usize,
    /// mean or weighted; defaults to weighted for bscvc and bnegscvc.
    #[arg(long)]
    pub estimator: Option<EstimatorKind>,
    #[arg(long, value_enum, default_value_t = GraphKind::Full)]
    pub graph: GraphKind,
    #[arg(long, default_value_t = DEFAULT_NEIGHBORS)]
    pub neighbors: usize,
    #[arg(long, default_value_t = DEFAULT_PHI)]
    pub phi: f64,
    #[arg(long, default_value_t = ThresholdRule::default().cluster_factor)]
    pub cluster_factor: f64,
    #[arg(long, default_value_t = ThresholdRule::default().feature_factor)]
    pub feature_factor: f64,
}

impl ModelArgs {
    fn setup(&self) -> ModelSetup {
        ModelSetup::default_for(self.model)
    }

    pub fn prior(&self) -> Result<PriorSpec> {
        let mut p = self.setup().base;
        for (name, v) in [
            ("lambda1", self.lambda1),
            ("gamma1", self.gamma1),
            ("nu1", self.nu1),
            ("alpha1", self.alpha1),
            ("lambda2", self.lambda2),
            ("gamma2", self.gamma2),
            ("nu0", self.nu0),
            ("eta0", self.eta0),
        ] {
            if let Some(v) = v {
                p = p.with_hyperparameter(name, v)?;
            }
        }
        Ok(p)
    }

    pub fn estimator(&self) -> EstimatorKind {
        self.estimator.unwrap_or(self.setup().estimator)
    }

    pub fn graph(&self) -> GraphChoice {
        match self.graph {
            GraphKind::Full => GraphChoice::Full,
            GraphKind::Knn => GraphChoice::Knn {
                neighbors: self.neighbors,
                phi: self.phi,
            },
        }
    }

    pub fn thresholds(&self) -> Result<ThresholdRule> {
        ThresholdRule::new(self.cluster_factor, self.feature_factor)
    }

    pub fn chain(&self, seed: u64) -> ChainConfig {
        ChainConfig::new(self.iters, seed)
            .with_burn_in(self.burn_in.unwrap_or(self.iters / 5))
            .with_thin(self.thin)
    }
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Data CSV with header f1..fp.
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Args)]
pub struct PathArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Smallest fusion hyperparameter; defaults to the model's study grid.
    #[arg(long)]
    pub min: Option<f64>,
    #[arg(long)]
    pub max: Option<f64>,
    /// Number of grid values.
    #[arg(long)]
    pub m: Option<usize>,
    /// Start every grid value from scratch instead of the previous final state.
    #[arg(long)]
    pub no_warm_start: bool,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// `n<N>p<P>`: N observations, P columns of which 2 carry the moons.
    #[arg(long, default_value = "n20p20")]
    pub setting: SimulationSetting,
    #[arg(long, default_value_t = 10)]
    pub reps: usize,
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "bscvc,bnegscvc,bhorscvc,bdlscvc"
    )]
    pub models: Vec<ModelKind>,
    #[arg(long, default_value_t = 5000)]
    pub iters: usize,
    #[arg(long)]
    pub burn_in: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub thin: usize,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Replace a grid axis: `model.name=min,max,m`, e.g. `bhorscvc.nu1=0.001,10,10`.
    #[arg(long)]
    pub grid: Vec<String>,
    #[arg(long, default_value_t = DEFAULT_MOON_NOISE)]
    pub moon_noise: f64,
    #[arg(long, default_value_t = DEFAULT_FEATURE_NOISE)]
    pub feature_noise: f64,
    #[arg(long, default_value_t = ThresholdRule::default().cluster_factor)]
    pub cluster_factor: f64,
    #[arg(long, default_value_t = ThresholdRule::default().feature_factor)]
    pub feature_factor: f64,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// CSV with a `label` or `cluster` column.
    #[arg(long)]
    pub truth: PathBuf,
    #[arg(long)]
    pub clusters: PathBuf,
    /// CSV with a 0/1 `selected` column marking relevant features.
    #[arg(long, requires = "features")]
    pub truth_features: Option<PathBuf>,
    #[arg(long, requires = "truth_features")]
    pub features: Option<PathBuf>,
    /// Also write `evaluation.json` here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cmd = Cli::command();
    let args = match expand_config(&cmd, args) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let matches = match cmd.try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return 2;
        }
    };
    let sub = matches
        .subcommand()
        .map(|(_, m)| m)
        .expect("subcommand is required");
    match execute(cli.command, sub) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_numeric() {
                1
            } else {
                2
            }
        }
    }
}

pub fn execute(command: Commands, matches: &ArgMatches) -> Result<()> {
    match command {
        Commands::Generate(a) => cmd_generate(&a),
        Commands::Fit(a) => cmd_fit(&a, matches),
        Commands::Path(a) => cmd_path(&a),
        Commands::Simulate(a) => cmd_simulate(&a),
        Commands::Evaluate(a) => cmd_evaluate(&a),
    }
}

fn out_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn write(dir: &Path, name: &str, body: &str) -> Result<PathBuf> {
    let path = dir.join(name);
    io::write_text(&path, body)?;
    Ok(path)
}

fn json_text(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize") + "\n"
}

pub fn cmd_generate(a: &GenerateArgs) -> Result<()> {
    let mut rng = RngStream::new(a.run.seed, 0);
    let (base, truth) = if a.two_clusters {
        if !a.n.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "--two-clusters needs an even --n, got {}",
                a.n
            )));
        }
        two_clusters_1d(a.n / 2, a.separation, a.noise, &mut rng)?
    } else {
        half_moons(a.n, a.noise, &mut rng)?
    };
    let x = if a.p > base.p() {
        add_irrelevant_features(&base, a.p, a.feature_noise, &mut rng)?
    } else if a.p == base.p() {
        base.clone()
    } else {
        return Err(Error::InvalidArgument(format!(
            "--p must be at least {}, got {}",
            base.p(),
            a.p
        )));
    };
    let relevant: Vec<bool> = (0..x.p()).map(|j| j < base.p()).collect();
    out_dir(&a.run.out)?;
    write(&a.run.out, "data.csv", &matrix_csv(x.as_matrix()))?;
    write(&a.run.out, "truth.csv", &labels_csv(truth.labels()))?;
    write(&a.run.out, "truth_features.csv", &flags_csv(&relevant))?;
    println!(
        "wrote {} observations x {} features to {}",
        x.n(),
        x.p(),
        a.run.out.display()
    );
    Ok(())
}

struct Fitted {
    clusters: ClusterAssignment,
    selected: Vec<usize>,
}

fn score(a_hat: &nalgebra::DMatrix<f64>, x: &DataMatrix, rule: &ThresholdRule) -> Result<Fitted> {
    let t = rule.apply(x);
    Ok(Fitted {
        clusters: extract_clusters(a_hat, &build_full_edgeset(x.n())?, t.cluster),
        selected: select_features(a_hat, t.feature),
    })
}

pub fn cmd_fit(a: &FitArgs, matches: &ArgMatches) -> Result<()> {
    let started = Instant::now();
    let x = read_data(&a.input)?;
    let m = &a.model;
    let prior = m.prior()?;
    let edges = m.graph().build(&x)?;
    let chain = m.chain(a.run.seed);
    let output = run_chain(&x, &prior, &edges, &chain)?;
    let estimate = m.estimator().estimate(&output, &x, &prior, &edges)?;
    let fitted = score(estimate.a_hat(), &x, &m.thresholds()?)?;
    let estimate_lj = log_joint(&estimate.state, &x, &prior, &edges)?;

    out_dir(&a.run.out)?;
    write(&a.run.out, "a_hat.csv", &matrix_csv(estimate.a_hat()))?;
    write(
        &a.run.out,
        "clusters.csv",
        &clusters_csv(fitted.clusters.labels()),
    )?;
    write(
        &a.run.out,
        "features.csv",
        &flags_csv(&feature_flags(&fitted.selected, x.p())),
    )?;
    let hyper: BTreeMap<&str, f64> = prior.hyperparameters().into_iter().collect();
    let summary = json!({
        "model": m.model.as_str(),
        "n": x.n(),
        "p": x.p(),
        "k": fitted.clusters.k(),
        "selected": fitted.selected.len(),
        "hyperparameters": hyper,
        "estimator": m.estimator().as_str(),
        "estimator_fell_back": estimate.fell_back,
        "sigma2_hat": estimate.sigma2_hat(),
        "log_joint_final": output.log_joint.last().copied(),
        "log_joint_estimate": estimate_lj,
        "draws": output.len(),
        "runtime_seconds": started.elapsed().as_secs_f64(),
        "config": echo(
            Cli::command().find_subcommand("fit").expect("fit is a subcommand"),
            matches,
            &["config", "out"],
        ),
    });
    write(&a.run.out, "summary.json", &json_text(&summary))?;
    println!(
        "{}: k={} selected={}/{} log_joint={estimate_lj:.4}",
        m.model,
        fitted.clusters.k(),
        fitted.selected.len(),
        x.p()
    );
    Ok(())
}

pub fn cmd_path(a: &PathArgs) -> Result<()> {
    let x = read_data(&a.input)?;
    let m = &a.model;
    let prior = m.prior()?;
    let axis = &m.setup().grid.axes[0];
    let values = geometric_grid(
        a.min.unwrap_or(axis.min),
        a.max.unwrap_or(axis.max),
        a.m.unwrap_or(axis.m),
    )?;
    let edges = m.graph().build(&x)?;
    let config = PathConfig {
        chain: m.chain(a.run.seed),
        warm_start: !a.no_warm_start,
        estimator: m.estimator(),
        thresholds: m.thresholds()?,
    };
    let path = cluster_path(&x, &prior, &edges, &values, &config)?;
    out_dir(&a.run.out)?;
    let file = write(&a.run.out, "path.csv", &path_csv(&path)?)?;
    println!(
        "{}: {} values of {}, cluster counts {:?}; wrote {}",
        m.model,
        values.len(),
        path.parameter,
        path.cluster_counts(),
        file.display()
    );
    Ok(())
}

fn parse_grid_override(spec: &str) -> Result<(ModelKind, GridAxis)> {
    let bad = || {
        Error::InvalidArgument(format!(
            "--grid '{spec}' is not of the form model.name=min,max,m"
        ))
    };
    let (lhs, rhs) = spec.split_once('=').ok_or_else(bad)?;
    let (model, name) = lhs.split_once('.').ok_or_else(bad)?;
    let parts: Vec<&str> = rhs.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let min: f64 = parts[0].parse().map_err(|_| bad())?;
    let max: f64 = parts[1].parse().map_err(|_| bad())?;
    let m: usize = parts[2].parse().map_err(|_| bad())?;
    Ok((model.parse()?, GridAxis::new(name.trim(), min, max, m)?))
}

pub fn simulation_setups(models: &[ModelKind], overrides: &[String]) -> Result<Vec<ModelSetup>> {
    let overrides: Vec<(ModelKind, GridAxis)> = overrides
        .iter()
        .map(|s| parse_grid_override(s))
        .collect::<Result<_>>()?;
    models
        .iter()
        .map(|&kind| {
            let mut setup = ModelSetup::default_for(kind);
            for (k, axis) in &overrides {
                if *k != kind {
                    continue;
                }
                let mut axes = setup.grid.axes.clone();
                match axes.iter_mut().find(|a| a.name == axis.name) {
                    Some(slot) => *slot = axis.clone(),
                    None => axes.push(axis.clone()),
                }
                setup = ModelSetup::new(
                    setup.base,
                    GridSpec::new(axes),
                    setup.graph,
                    setup.estimator,
                )?;
            }
            Ok(setup)
        })
        .collect()
}

pub fn cmd_simulate(a: &SimulateArgs) -> Result<()> {
    let mut setting = a.setting;
    setting.moon_noise = a.moon_noise;
    setting.feature_noise = a.feature_noise;
    let setups = simulation_setups(&a.models, &a.grid)?;
    let config = SimulationConfig {
        setting,
        reps: a.reps,
        iterations: a.iters,
        burn_in: a.burn_in.unwrap_or(a.iters / 5),
        thin: a.thin,
        seed: a.run.seed,
        thresholds: ThresholdRule::new(a.cluster_factor, a.feature_factor)?,
        jobs: a
            .jobs
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get())),
    };
    let report = run_simulation(&config, &setups)?;
    write_report(&report, &a.run.out)?;
    print!("{}", summary_csv(&report)?);
    Ok(())
}

pub fn cmd_evaluate(a: &EvaluateArgs) -> Result<()> {
    let truth = ClusterAssignment::from_labels(&read_column(&a.truth, &["label", "cluster"])?);
    let est = ClusterAssignment::from_labels(&read_column(&a.clusters, &["cluster", "label"])?);
    let rand = rand_index(&truth, &est)?;
    let mut report = json!({
        "n": truth.n(),
        "k_truth": truth.k(),
        "k_estimate": est.k(),
        "rand": rand,
    });
    if let (Some(tf), Some(f)) = (&a.truth_features, &a.features) {
        let rates = tnr_tpr(&read_flags(tf)?, &read_flags(f)?)?;
        report["tnr"] = json!(rates.tnr);
        report["tpr"] = json!(rates.tpr);
    }
    let text = json_text(&report);
    if let Some(dir) = &a.out {
        out_dir(dir)?;
        write(dir, "evaluation.json", &text)?;
    }
    print!("{text}");
    Ok(())
}
