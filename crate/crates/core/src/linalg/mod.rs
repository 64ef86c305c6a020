//! Small dense Hermitian linear algebra: spectra, determinants, partial
//! transposes and the block singular-value ratio ε.

mod eigen;
mod matrix;
mod ops;

use thiserror::Error;

pub use eigen::{eigenvalues, EigenWorkspace};
pub use matrix::{DensityMatrix, Field, HermitianMatrix, TRACE_TOL};
pub use ops::{
    cholesky_in_place, determinant, epsilon_ratio, partial_transpose, partial_transpose_into, EpsilonRatio,
    EpsilonWorkspace, Side,
};

/// Largest `|m_ij − conj(m_ji)|` accepted as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("matrix is not Hermitian (asymmetry {0:e})")]
    NotHermitian(f64),
    #[error("trace {0} differs from 1")]
    Trace(f64),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("state has no declared bipartition")]
    Unsplit,
    #[error("diagonal block is singular or not positive definite")]
    SingularBlock,
    #[error("unknown field `{0}` (expected R or C)")]
    UnknownField(String),
    #[error("tridiagonal QL iteration did not converge")]
    NoConvergence,
}

/// Eigenvalues sorted descending.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    values: Vec<f64>,
}

impl Spectrum {
    /// Sorts `values` descending.
    pub fn new(mut values: Vec<f64>) -> Self {
        values.sort_unstable_by(|a, b| b.total_cmp(a));
        Spectrum { values }
    }

    pub(crate) fn from_descending(values: Vec<f64>) -> Self {
        Spectrum { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.values.last().copied().unwrap_or(f64::NAN)
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn product(&self) -> f64 {
        self.values.iter().product()
    }
}
