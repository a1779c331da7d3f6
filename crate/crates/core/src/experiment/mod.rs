//! Hyperparameter grids, replicated simulation studies and cluster paths.

mod grid;
mod path;
mod report;
mod setup;
mod simulate;

pub use grid::{geometric_grid, GridAxis, GridPoint, GridSpec};
pub use path::{cluster_path, ClusterPath, PathConfig, PathEntry};
pub use report::{path_csv, report_json, scores_csv, summary_csv, write_report};
pub use setup::{
    EstimatorKind, GraphChoice, ModelSetup, DEFAULT_GL_GAMMA2, DEFAULT_GL_LAMBDA2,
    DEFAULT_LAPLACE_LAMBDA2,
};
pub use simulate::{
    job_stream, run_simulation, score_estimate, EstimateScore, GridScore, ModelReport,
    ReportHeader, SimulatedData, SimulationConfig, SimulationReport, SimulationSetting, Summary,
    REFERENCE_ITERATIONS, REFERENCE_REPS,
};
