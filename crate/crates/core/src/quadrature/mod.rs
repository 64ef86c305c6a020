//! Deterministic quadrature for the separability-function framework.

mod chi;
mod extended;
mod gl;
mod integrals;
mod ts;

use thiserror::Error;

use crate::exactmath::ExactError;

pub use chi::{
    chi_numeric, chi_numeric_with, chi_xstate, ChiFunction, ChiMethod, CubeRegion, Provenance, DEFAULT_CHI_NODES,
    DEFAULT_QMC_POINTS,
};
pub use extended::{extended_master, extended_master_printed_check, ExtendedMaster, PrintedFormCheck};
pub use gl::GaussLegendre;
pub use integrals::{sep_prob_general, sep_prob_general_with, u_eta, u_eta_with, weighted_ratio, DEFAULT_NODES};

#[derive(Debug, Error)]
pub enum QuadratureError {
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("{0}")]
    OutOfDomain(String),
    #[error("unsupported division-ring parameter d = {0}")]
    Dimension(u32),
    #[error("extended master decomposition needs even d, got {0}")]
    OddDimension(u32),
}
