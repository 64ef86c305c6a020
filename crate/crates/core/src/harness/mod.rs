//! Monte Carlo experiment runner: mergeable tallies, binomial confidence
//! intervals, checkpointed parallel runs, empirical `χ̃` estimation and the
//! search for smooth rationals inside a confidence interval.

pub mod chifit;
pub mod conjecture;
pub mod runner;
pub mod stats;
pub mod tally;

use thiserror::Error;

pub use chifit::{estimate_chi_empirical, ChiBin, ChiFitConfig, ChiFitTable};
pub use conjecture::{conjecture_search, ConjectureCandidate, CANDIDATE_CAP};
pub use runner::{
    equipartition_from_tally, equipartition_report, run_experiment, BuildInfo, EquipartitionReport,
    ExperimentConfig, ExperimentOutcome, ExperimentReport, RateReport, DEFAULT_CHUNK_SAMPLES,
};
pub use stats::{clopper_pearson, wald_ci, CiMethod, ConfidenceInterval};
pub use tally::TrialTally;

use crate::criteria::CriteriaError;
use crate::exactmath::ExactError;
use crate::linalg::LinalgError;
use crate::quadrature::QuadratureError;
use crate::sampling::SamplingError;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("I/O: {0}")]
    Io(#[from] std::io::Error),
    #[error("JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Sampling(#[from] SamplingError),
    #[error(transparent)]
    Criteria(#[from] CriteriaError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("checkpoint {path}: {reason}")]
    Checkpoint { path: String, reason: String },
    #[error("cannot merge tallies with seeds {0} and {1}")]
    SeedMismatch(u64, u64),
    #[error("{count} candidates exceed the cap of {cap}; narrow the interval or lower max_den")]
    TooManyCandidates { count: usize, cap: usize },
}
