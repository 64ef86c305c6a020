//! Closed-form separability functions `χ̃_{d,k}(ε)` and the master formula
//! for the Hilbert-Schmidt family `χ̃_{d,0}`.

use statrs::function::gamma::gamma;

use super::hypergeometric::{hyper_regularized, SeriesEval};
use super::ExactError;

fn check_epsilon(eps: f64) -> Result<(), ExactError> {
    if (0.0..=1.0).contains(&eps) {
        Ok(())
    } else {
        Err(ExactError::OutOfDomain(format!("ε must lie in [0,1], got {eps}")))
    }
}

/// `χ̃_{d,k}(ε)` from the closed-form catalog.
///
/// Covered: `d = 2` with any `k > -3`; `d = 4` with `k ∈ {0, 1}`; and
/// `k = 0` for any `d` through the master formula. Anything else returns
/// [`ExactError::CatalogMiss`].
pub fn chi_catalog(d: u32, k: f64, eps: f64) -> Result<f64, ExactError> {
    check_epsilon(eps)?;
    let e2 = eps * eps;
    match (d, k) {
        (2, k) if k > -3.0 => Ok(((-k + e2 - 3.0) * (1.0 - e2).powf(k + 1.0) + k + 3.0) / (k + 3.0)),
        (4, k) if k == 0.0 => Ok(e2 * e2 * (15.0 * e2 * e2 - 64.0 * e2 + 84.0) / 35.0),
        (4, k) if k == 1.0 => {
            Ok(e2 * e2 * (-9.0 * e2 * e2 * e2 + 55.0 * e2 * e2 - 125.0 * e2 + 100.0) / 21.0)
        }
        (d, k) if k == 0.0 && d >= 1 => master_chi(d, eps),
        (d, k) => Err(ExactError::CatalogMiss { d, k }),
    }
}

/// Master-formula evaluation with series diagnostics.
///
/// `χ̃_d(ε) = ε^d Γ(d+1)³ ₃F̃₂(-d/2, d/2, d; d/2+1, 3d/2+1; ε²) / Γ(d/2+1)²`.
/// The series terminates for even `d`. For odd `d` at `ε = 1` the value is
/// extrapolated and flagged.
pub fn master_chi_eval(d: u32, eps: f64) -> Result<SeriesEval, ExactError> {
    check_epsilon(eps)?;
    if d == 0 {
        return Err(ExactError::InvalidDimension(0));
    }
    let h = d as f64 / 2.0;
    let df = d as f64;
    let series = hyper_regularized(&[-h, h, df], &[h + 1.0, 3.0 * h + 1.0], eps * eps)?;
    let pre = eps.powi(d as i32) * gamma(df + 1.0).powi(3) / gamma(h + 1.0).powi(2);
    Ok(SeriesEval {
        value: pre * series.value,
        tail_bound: pre * series.tail_bound,
        ..series
    })
}

pub fn master_chi(d: u32, eps: f64) -> Result<f64, ExactError> {
    master_chi_eval(d, eps).map(|e| e.value)
}
