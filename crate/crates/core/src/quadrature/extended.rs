//! Induced-measure extension of the master formula for even `d`, as the sum
//! of a closed `₃F̃₂` term and a two-dimensional integral in `(r₁₄, Y)`.
//!
//! With `Y = r₁₄ r₂₃` the closed term is the contribution of
//! `r₂₃ ∈ [0, ε r₁₄]` (where the state constraint binds) and the integral
//! the contribution of `r₂₃ ∈ [ε r₁₄, ε]` (where the partial-transpose
//! constraint binds). In `Y` that range is `[ε r₁₄², ε r₁₄]`, and the
//! integrand needs the factor `4ε Γ(d+k+1)²` on top of
//! `1/(Γ(d/2)² Γ(k+1) Γ(d/2+k+1))`. [`extended_master_printed_check`]
//! evaluates the uncorrected form (`Y` between `ε r₁₄` and `ε² r₁₄`, no extra
//! factor) against the `k = 0` half-master identity.

use serde::Serialize;
use statrs::function::gamma::gamma;

use super::gl::GaussLegendre;
use super::QuadratureError;
use crate::exactmath::{hyper_regularized, master_chi};

const NODES: usize = 48;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ExtendedMaster {
    pub closed_term: f64,
    pub integral_term: f64,
    pub value: f64,
}

fn check(d: u32, eps: f64) -> Result<(), QuadratureError> {
    if d == 0 || d % 2 == 1 {
        return Err(QuadratureError::OddDimension(d));
    }
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(QuadratureError::OutOfDomain(format!("ε must lie in (0,1], got {eps}")));
    }
    Ok(())
}

/// `(1)_d ε^d Γ(d+k+1)² ₃F̃₂(d/2, d, -d/2-k; d/2+1, 3d/2+k+1; ε²) / (d Γ(d/2) Γ(d/2+k+1))`.
pub fn closed_term(d: u32, k: u32, eps: f64) -> Result<f64, QuadratureError> {
    let (df, kf) = (d as f64, k as f64);
    let h = df / 2.0;
    let f = hyper_regularized(&[h, df, -h - kf], &[h + 1.0, 3.0 * h + kf + 1.0], eps * eps)?;
    let pochhammer_one_d = gamma(df + 1.0);
    Ok(pochhammer_one_d * eps.powi(d as i32) * gamma(df + kf + 1.0).powi(2) * f.value
        / (df * gamma(h) * gamma(h + kf + 1.0)))
}

fn prefactor(d: u32, k: u32) -> f64 {
    let h = d as f64 / 2.0;
    1.0 / (gamma(h).powi(2) * gamma(k as f64 + 1.0) * gamma(h + k as f64 + 1.0))
}

/// The three-factor integrand without the prefactor.
fn integrand(d: u32, k: u32, eps: f64, r14: f64, y: f64) -> Result<f64, QuadratureError> {
    let h = d as f64 / 2.0;
    let (r2, e2, y2) = (r14 * r14, eps * eps, y * y);
    let z = (r2 * e2 - 1.0) * (y2 - r2 * e2) / ((r2 - 1.0) * e2 * (y2 - r2));
    let f = hyper_regularized(&[h, -(k as f64)], &[h + 1.0], z)?.value;
    let base = y.powi(d as i32 - 1)
        * (1.0 / (r14 * eps)).powi(d as i32 + 1)
        * (1.0 - r2 * e2).powf(h)
        * ((1.0 - 1.0 / r2) * y2 - r2 + 1.0).powi(k as i32)
        * (r2 * e2 - y2).max(0.0).powf(h);
    Ok(base * f)
}

/// `∫_0^1 dr₁₄ ∫_{lo(r₁₄)}^{hi(r₁₄)} dY integrand`, oriented.
fn integrate_y(
    d: u32,
    k: u32,
    eps: f64,
    lo: impl Fn(f64) -> f64,
    hi: impl Fn(f64) -> f64,
) -> Result<f64, QuadratureError> {
    let gl = GaussLegendre::new(NODES);
    let mut total = 0.0;
    for (r14, w) in gl.on(0.0, 1.0) {
        let (a, b) = (lo(r14), hi(r14));
        let mut inner = 0.0;
        for (y, wy) in gl.on(a, b) {
            inner += wy * integrand(d, k, eps, r14, y)?;
        }
        total += w * inner;
    }
    Ok(total)
}

/// Corrected two-dimensional term.
pub fn integral_term(d: u32, k: u32, eps: f64) -> Result<f64, QuadratureError> {
    let mult = 4.0 * eps * gamma(d as f64 + k as f64 + 1.0).powi(2) * prefactor(d, k);
    Ok(mult * integrate_y(d, k, eps, |r| eps * r * r, |r| eps * r)?)
}

/// `χ̃_{d,k}(ε)` for even `d` from the closed term plus the 2D integral.
pub fn extended_master(d: u32, k: u32, eps: f64) -> Result<ExtendedMaster, QuadratureError> {
    check(d, eps)?;
    let closed_term = closed_term(d, k, eps)?;
    let integral_term = integral_term(d, k, eps)?;
    Ok(ExtendedMaster { closed_term, integral_term, value: closed_term + integral_term })
}

/// The uncorrected two-dimensional term at `k = 0`, in both orientations,
/// against half of the master formula.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct PrintedFormCheck {
    pub eps: f64,
    pub half_master: f64,
    /// `Y` from `ε r₁₄` up to `ε² r₁₄` (negative for `ε < 1`).
    pub as_written: f64,
    /// `Y` from `ε² r₁₄` up to `ε r₁₄`.
    pub reversed: f64,
    /// Corrected domain and factor.
    pub corrected: f64,
    pub as_written_ok: bool,
    pub reversed_ok: bool,
    pub corrected_ok: bool,
}

pub fn extended_master_printed_check(d: u32, eps: f64, tol: f64) -> Result<PrintedFormCheck, QuadratureError> {
    check(d, eps)?;
    let half_master = 0.5 * master_chi(d, eps)?;
    let p = prefactor(d, 0);
    let as_written = p * integrate_y(d, 0, eps, |r| eps * r, |r| eps * eps * r)?;
    let reversed = p * integrate_y(d, 0, eps, |r| eps * eps * r, |r| eps * r)?;
    let corrected = integral_term(d, 0, eps)?;
    Ok(PrintedFormCheck {
        eps,
        half_master,
        as_written,
        reversed,
        corrected,
        as_written_ok: (as_written - half_master).abs() < tol,
        reversed_ok: (reversed - half_master).abs() < tol,
        corrected_ok: (corrected - half_master).abs() < tol,
    })
}
