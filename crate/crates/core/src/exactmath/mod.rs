//! Exact and high-precision evaluation of the closed-form volume and
//! separability-probability formulas.

pub mod chi;
pub mod factor;
pub mod formulas;
pub mod gamma;
pub mod highprec;
pub mod hypergeometric;
pub mod tabulated;
pub mod value;

use thiserror::Error;

pub use chi::{chi_catalog, master_chi, master_chi_eval};
pub use factor::{factorize, factorize_integer, factorize_rational, is_prime, PrimeFactorization};
pub use formulas::{
    induced_volume_factor, milz_strunz_profile, milz_strunz_profile_exact, milz_strunz_v0,
    milz_strunz_volume, p_2quaterbits, p_2qubits, p_2rebits, volume_hs, volume_lebesgue,
    DivisionRing,
};
pub use highprec::u_closed;
pub use hypergeometric::{hyper_regularized, SeriesEval};
pub use value::{PiRational, SurdValue};

#[derive(Debug, Error)]
pub enum ExactError {
    #[error("zero coefficient has no factorisation")]
    ZeroCoefficient,
    #[error("could not factor cofactor {0}")]
    Unfactored(String),
    #[error("Gamma pole at argument {0}")]
    GammaPole(f64),
    #[error("invalid dimension {0}")]
    InvalidDimension(i64),
    #[error("{0}")]
    OutOfDomain(String),
    #[error("unsupported field `{0}`")]
    UnsupportedField(String),
    #[error("value is not rational")]
    NotRational,
    #[error("cannot parse `{0}`")]
    Parse(String),
    #[error("no closed form for d={d}, k={k}; use numeric quadrature")]
    CatalogMiss { d: u32, k: f64 },
    #[error("series did not converge: {0}")]
    NonConvergent(String),
}
