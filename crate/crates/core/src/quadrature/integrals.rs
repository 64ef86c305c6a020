//! Double integrals over `-1 < y < x < 1` weighted by
//! `(1-x²)^η (1-y²)^η (x-y)^p`, with `χ̃` evaluated at
//! `ε = √((1-x)/(1+x)) √((1+y)/(1-y))`.
//!
//! With `x = cos θ`, `y = cos φ` the domain becomes `0 < θ < φ < π`, the
//! weight `sin^{2η+1}θ sin^{2η+1}φ (cos θ - cos φ)^p` and
//! `ε = tan(θ/2)/tan(φ/2)`. The inner variable is mapped by
//! `φ = θ + (π-θ)v²` so square-root behaviour on the diagonal `φ = θ`
//! (where `ε = 1`) is integrated spectrally.

use std::f64::consts::PI;

use super::chi::ChiFunction;
use super::gl::GaussLegendre;
use super::ts::TanhSinh;
use super::QuadratureError;

pub const DEFAULT_NODES: usize = 64;

/// Ratio of the `χ̃`-weighted and unweighted double integrals.
pub fn weighted_ratio(eta: f64, power: u32, chi: &ChiFunction, nodes: usize) -> Result<f64, QuadratureError> {
    let s = 2.0 * eta + 1.0;
    // sin^s is analytic only for integer s >= 0; otherwise its endpoint
    // behaviour needs the tanh-sinh rule
    if s < 0.0 || s.fract() != 0.0 {
        return weighted_ratio_ts(eta, power, chi, nodes);
    }
    let gl = GaussLegendre::new(nodes);
    let mut num = 0.0;
    let mut den = 0.0;
    for (theta, wt) in gl.on(0.0, PI) {
        let st = theta.sin().powf(s);
        let tt = (theta / 2.0).tan();
        let span = PI - theta;
        for (v, wv) in gl.on(0.0, 1.0) {
            let phi = theta + span * v * v;
            let w = wt * wv * 2.0 * span * v * st * phi.sin().powf(s) * (theta.cos() - phi.cos()).powi(power as i32);
            let eps = (tt / (phi / 2.0).tan()).clamp(0.0, 1.0);
            num += w * chi.eval(eps)?;
            den += w;
        }
    }
    Ok(num / den)
}

/// Tanh-sinh variant; `nodes` sets the step `h = 4/nodes`. Distances to
/// the endpoints are carried separately so `sin`, `cos θ - cos φ` and `ε`
/// stay accurate next to `0`, `π` and the diagonal.
fn weighted_ratio_ts(eta: f64, power: u32, chi: &ChiFunction, nodes: usize) -> Result<f64, QuadratureError> {
    let ts = TanhSinh::new(4.0 / nodes as f64);
    let s = 2.0 * eta + 1.0;
    let sin_at = |from_0: f64, to_pi: f64| from_0.min(to_pi).sin();
    let mut num = 0.0;
    let mut den = 0.0;
    for outer in ts.on_span(PI) {
        let (theta, to_pi_t) = (outer.from_a, outer.to_b);
        let st = sin_at(theta, to_pi_t).powf(s);
        let tt = (theta / 2.0).tan();
        for inner in ts.on_span(to_pi_t) {
            let (delta, to_pi_p) = (inner.from_a, inner.to_b);
            let sp = sin_at(theta + delta, to_pi_p).powf(s);
            // cos θ - cos φ = 2 sin((θ+φ)/2) sin((φ-θ)/2)
            let mid = 0.5 * (to_pi_t + to_pi_p);
            let diff = 2.0 * mid.sin() * (0.5 * delta).sin();
            let w = outer.w * inner.w * st * sp * diff.powi(power as i32);
            let eps = (tt * (0.5 * to_pi_p).tan()).clamp(0.0, 1.0);
            num += w * chi.eval(eps)?;
            den += w;
        }
    }
    Ok(num / den)
}

/// Separability probability for division-ring parameter `d` and induced
/// order `k`: exponents `d + k` on `(1-x²)`, `(1-y²)` and `d` on `(x-y)`.
pub fn sep_prob_general(d: u32, k: f64, chi: &ChiFunction) -> Result<f64, QuadratureError> {
    sep_prob_general_with(d, k, chi, DEFAULT_NODES)
}

pub fn sep_prob_general_with(d: u32, k: f64, chi: &ChiFunction, nodes: usize) -> Result<f64, QuadratureError> {
    if !matches!(d, 1 | 2 | 4) {
        return Err(QuadratureError::Dimension(d));
    }
    let eta = d as f64 + k;
    if eta <= -1.0 {
        return Err(QuadratureError::OutOfDomain(format!("d + k = {eta} must exceed -1")));
    }
    weighted_ratio(eta, d, chi, nodes)
}

/// `u(η)`: exponent `η` on `(1-x²)`, `(1-y²)` and 2 on `(x-y)`.
///
/// At `η = -1` both integrals diverge while the normalised weight
/// concentrates at `x → 1`, `y → -1`, where `ε = 0`; the value there is
/// the limit `χ̃(0)`.
pub fn u_eta(eta: f64, chi: &ChiFunction) -> Result<f64, QuadratureError> {
    u_eta_with(eta, chi, DEFAULT_NODES)
}

pub fn u_eta_with(eta: f64, chi: &ChiFunction, nodes: usize) -> Result<f64, QuadratureError> {
    if eta == -1.0 {
        return chi.eval(0.0);
    }
    if eta.is_nan() || eta < -1.0 {
        return Err(QuadratureError::OutOfDomain(format!("u(η) requires η >= -1, got {eta}")));
    }
    weighted_ratio(eta, 2, chi, nodes)
}
