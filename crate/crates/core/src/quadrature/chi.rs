//! Separability functions `χ̃_{d,k}(ε)`: closed forms, constrained-cube
//! quadrature, and the X-state reduction.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use statrs::function::gamma::gamma;

use super::gl::GaussLegendre;
use super::QuadratureError;
use crate::exactmath::{chi_catalog, master_chi};

/// Where a [`ChiFunction`] comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Catalog,
    Numeric,
    Empirical,
}

type Evaluator = dyn Fn(f64) -> Result<f64, QuadratureError> + Send + Sync;

/// `ε ↦ χ̃(ε)` on `[0, 1]` with a provenance tag.
#[derive(Clone)]
pub struct ChiFunction {
    label: String,
    provenance: Provenance,
    eval: Arc<Evaluator>,
}

impl fmt::Debug for ChiFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ChiFunction")
            .field("label", &self.label)
            .field("provenance", &self.provenance)
            .finish()
    }
}

impl ChiFunction {
    pub fn new(
        label: impl Into<String>,
        provenance: Provenance,
        eval: impl Fn(f64) -> Result<f64, QuadratureError> + Send + Sync + 'static,
    ) -> Self {
        ChiFunction { label: label.into(), provenance, eval: Arc::new(eval) }
    }

    /// Closed-form catalog entry; fails early if `(d, k)` is not covered.
    pub fn catalog(d: u32, k: f64) -> Result<Self, QuadratureError> {
        chi_catalog(d, k, 0.5)?;
        Ok(Self::new(format!("catalog chi_{{{d},{k}}}"), Provenance::Catalog, move |e| {
            Ok(chi_catalog(d, k, e)?)
        }))
    }

    /// Master formula `χ̃_{d,0}`.
    pub fn master(d: u32) -> Self {
        Self::new(format!("master chi_{d}"), Provenance::Catalog, move |e| Ok(master_chi(d, e)?))
    }

    /// Constrained-cube quadrature.
    pub fn numeric(d: u32, k: u32, nodes: usize) -> Self {
        Self::new(format!("numeric chi_{{{d},{k}}}"), Provenance::Numeric, move |e| {
            chi_numeric_gl(d, k, e, nodes)
        })
    }

    pub fn xstate(d: u32) -> Self {
        Self::new(format!("x-state chi_{d}"), Provenance::Catalog, move |e| Ok(chi_xstate(d, e)))
    }

    /// Piecewise-linear interpolation through `(ε, value)` points sorted by ε.
    pub fn empirical(points: Vec<(f64, f64)>) -> Self {
        Self::new("empirical", Provenance::Empirical, move |e| {
            let i = points.partition_point(|p| p.0 < e);
            Ok(match i {
                0 => points.first().map_or(0.0, |p| p.1),
                i if i == points.len() => points.last().map_or(0.0, |p| p.1),
                i => {
                    let (x0, y0) = points[i - 1];
                    let (x1, y1) = points[i];
                    y0 + (y1 - y0) * (e - x0) / (x1 - x0)
                }
            })
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn eval(&self, eps: f64) -> Result<f64, QuadratureError> {
        (self.eval)(eps)
    }
}

/// `ε^d`: the X-state separability function.
pub fn chi_xstate(d: u32, eps: f64) -> f64 {
    eps.powi(d as i32)
}

/// Quadrature method for [`chi_numeric_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChiMethod {
    /// Deterministic 2D Gauss-Legendre after integrating `r₂₄` in closed form.
    GaussLegendre { nodes: usize },
    /// Direct 3D quasi-random integration over the unit cube.
    QuasiMonteCarlo { points: usize },
}

pub const DEFAULT_CHI_NODES: usize = 48;
pub const DEFAULT_QMC_POINTS: usize = 1 << 21;

/// Integration region in `(r₁₄, r₂₃, r₂₄) ∈ [0,1]³` for given `(d, k, ε)`.
///
/// State positivity: `r₂₃ < 1` and `r₂₄² < A = (1-r₁₄²)(1-r₂₃²)`.
/// Partial-transpose positivity: `r₂₄² < B = (1-ε²r₁₄²)(1-r₂₃²/ε²)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CubeRegion {
    pub d: u32,
    pub k: f64,
    pub eps: f64,
}

impl CubeRegion {
    pub fn a(r14: f64, r23: f64) -> f64 {
        (1.0 - r14 * r14) * (1.0 - r23 * r23)
    }

    pub fn b(&self, r14: f64, r23: f64) -> f64 {
        let e = self.eps;
        (1.0 - e * e * r14 * r14) * (1.0 - r23 * r23 / (e * e))
    }

    pub fn is_state(r14: f64, r23: f64, r24: f64) -> bool {
        r23 < 1.0 && r24 * r24 < Self::a(r14, r23)
    }

    pub fn is_ppt_state(&self, r14: f64, r23: f64, r24: f64) -> bool {
        let e = self.eps;
        // the constraint in its original polynomial form
        Self::is_state(r14, r23, r24)
            && r23 * r23 * (e * e * r14 * r14 - 1.0) > e * e * (e * e * r14 * r14 + r24 * r24 - 1.0)
    }

    /// Jacobian times the `k`-th power of the determinant factor (without
    /// the constant `ε^{2k}`).
    pub fn weight(&self, r14: f64, r23: f64, r24: f64) -> f64 {
        let jac = (r14 * r23 * r24).powi(self.d as i32 - 1);
        jac * (Self::a(r14, r23) - r24 * r24).powf(self.k)
    }

    /// `∫ weight` over the state region, in closed form:
    /// `Γ(d/2)³ Γ(k+1) Γ(d/2+k+1) / (8 Γ(d+k+1)²)`.
    pub fn state_volume(&self) -> f64 {
        let h = self.d as f64 / 2.0;
        let k = self.k;
        gamma(h).powi(3) * gamma(k + 1.0) * gamma(h + k + 1.0) / (8.0 * gamma(self.d as f64 + k + 1.0).powi(2))
    }
}

fn check(d: u32, eps: f64) -> Result<(), QuadratureError> {
    if !matches!(d, 1 | 2 | 4) {
        return Err(QuadratureError::Dimension(d));
    }
    if !(0.0..=1.0).contains(&eps) {
        return Err(QuadratureError::OutOfDomain(format!("ε must lie in [0,1], got {eps}")));
    }
    Ok(())
}

/// `χ̃_{d,k}(ε)` by deterministic quadrature.
pub fn chi_numeric(d: u32, k: u32, eps: f64) -> Result<f64, QuadratureError> {
    chi_numeric_gl(d, k, eps, DEFAULT_CHI_NODES)
}

pub fn chi_numeric_with(d: u32, k: u32, eps: f64, method: ChiMethod) -> Result<f64, QuadratureError> {
    match method {
        ChiMethod::GaussLegendre { nodes } => chi_numeric_gl(d, k, eps, nodes),
        ChiMethod::QuasiMonteCarlo { points } => chi_numeric_qmc(d, k, eps, points),
    }
}

/// `(1/2) ∫_0^{c²} t^{d/2-1} (A - t)^k dt` for integer `k`, by the binomial expansion.
fn r24_integral(h: f64, k: u32, a: f64, c2: f64) -> f64 {
    let mut s = 0.0;
    let mut binom = 1.0;
    for j in 0..=k {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        s += sign * binom * a.powi((k - j) as i32) * c2.powf(h + j as f64) / (h + j as f64);
        binom = binom * (k - j) as f64 / (j + 1) as f64;
    }
    0.5 * s
}

/// Region-2 contribution (`r₂₃ ∈ [ε r₁₄, ε]`, where `B < A`), unnormalised.
pub(crate) fn region_two(d: u32, k: u32, eps: f64, nodes: usize) -> f64 {
    let gl = GaussLegendre::new(nodes);
    let h = d as f64 / 2.0;
    let dm1 = d as i32 - 1;
    let region = CubeRegion { d, k: k as f64, eps };
    // r₁₄ = 1 - u² and r₂₃ = ε - L w² cluster nodes at the square-root edges
    gl.integrate(0.0, 1.0, |u| {
        let r14 = 1.0 - u * u;
        let jac14 = 2.0 * u;
        let len = eps * (1.0 - r14);
        let inner = gl.integrate(0.0, 1.0, |w| {
            let r23 = eps - len * w * w;
            let jac23 = 2.0 * len * w;
            let a = CubeRegion::a(r14, r23);
            let b = region.b(r14, r23).max(0.0);
            jac23 * r23.powi(dm1) * r24_integral(h, k, a, b)
        });
        jac14 * r14.powi(dm1) * inner
    })
}

/// Region-1 contribution (`r₂₃ ∈ [0, ε r₁₄]`, where `A ≤ B`), unnormalised.
pub(crate) fn region_one(d: u32, k: u32, eps: f64, nodes: usize) -> f64 {
    let gl = GaussLegendre::new(nodes);
    let h = d as f64 / 2.0;
    let dm1 = d as i32 - 1;
    let beta = gamma(h) * gamma(k as f64 + 1.0) / gamma(h + k as f64 + 1.0);
    gl.integrate(0.0, 1.0, |u| {
        let r14 = 1.0 - u * u;
        let jac14 = 2.0 * u;
        let inner = gl.integrate(0.0, eps * r14, |r23| {
            r23.powi(dm1) * 0.5 * CubeRegion::a(r14, r23).powf(h + k as f64) * beta
        });
        jac14 * r14.powi(dm1) * inner
    })
}

fn chi_numeric_gl(d: u32, k: u32, eps: f64, nodes: usize) -> Result<f64, QuadratureError> {
    check(d, eps)?;
    if eps == 0.0 {
        return Ok(0.0);
    }
    let norm = CubeRegion { d, k: k as f64, eps }.state_volume();
    Ok((region_one(d, k, eps, nodes) + region_two(d, k, eps, nodes)) / norm)
}

/// Kronecker sequence with the plastic-number generator (additive recurrence).
fn kronecker(i: usize) -> [f64; 3] {
    // φ₃ = 1.2207440846..., root of x⁴ = x + 1
    const G: f64 = 1.220_744_084_605_759_5;
    const A: [f64; 3] = [1.0 / G, 1.0 / (G * G), 1.0 / (G * G * G)];
    let t = i as f64 + 0.5;
    [(t * A[0]).fract(), (t * A[1]).fract(), (t * A[2]).fract()]
}

fn chi_numeric_qmc(d: u32, k: u32, eps: f64, points: usize) -> Result<f64, QuadratureError> {
    check(d, eps)?;
    if eps == 0.0 {
        return Ok(0.0);
    }
    let region = CubeRegion { d, k: k as f64, eps };
    let mut num = 0.0;
    for i in 0..points {
        let [r14, r23, r24] = kronecker(i);
        if region.is_ppt_state(r14, r23, r24) {
            num += region.weight(r14, r23, r24);
        }
    }
    Ok(num / points as f64 / region.state_volume())
}

#[cfg(test)]
mod tests {
    use super::*;

    const GRID: [f64; 10] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0];

    #[test]
    fn state_volume_matches_hilbert_schmidt_normalisation() {
        // π 4^{-d} Γ(d/2+1)² / (d³ Γ((d+1)/2)²) at k = 0
        for d in [1u32, 2, 4] {
            let df = d as f64;
            let want = std::f64::consts::PI * 4f64.powf(-df) * gamma(df / 2.0 + 1.0).powi(2)
                / (df.powi(3) * gamma((df + 1.0) / 2.0).powi(2));
            let got = CubeRegion { d, k: 0.0, eps: 1.0 }.state_volume();
            assert!((got - want).abs() < 1e-13 * want, "d = {d}: {got} vs {want}");
        }
    }

    #[test]
    fn examples() {
        assert!((chi_numeric(2, 0, 1.0).unwrap() - 1.0).abs() < 1e-10);
        assert!((chi_numeric(2, 1, 0.5).unwrap() - 0.47265625).abs() < 1e-10);
        let c40 = (1.0 / 35.0) * 0.0625 * (15.0 / 16.0 - 16.0 + 84.0);
        assert!((chi_numeric(4, 0, 0.5).unwrap() - c40).abs() < 1e-10);
        assert_eq!(chi_numeric(2, 0, 0.0).unwrap(), 0.0);
        assert!(chi_numeric(3, 0, 0.5).is_err());
    }

    #[test]
    fn agrees_with_catalog() {
        for (d, k) in [(2u32, 0u32), (2, 1), (2, 2), (4, 0), (4, 1)] {
            for e in GRID {
                let num = chi_numeric(d, k, e).unwrap();
                let cat = chi_catalog(d, k as f64, e).unwrap();
                assert!((num - cat).abs() < 1e-9, "({d},{k}) at {e}: {num} vs {cat}");
            }
        }
    }

    #[test]
    fn rebit_matches_odd_master_formula() {
        for e in GRID {
            let num = chi_numeric(1, 0, e).unwrap();
            let m = master_chi(1, e).unwrap();
            assert!((num - m).abs() < 1e-8, "ε = {e}: {num} vs {m}");
        }
    }

    #[test]
    fn monotone_increasing_in_k() {
        for d in [1u32, 2, 4] {
            for e in [0.2, 0.5, 0.9] {
                let v: Vec<f64> = (0..4).map(|k| chi_numeric(d, k, e).unwrap()).collect();
                assert!(v.windows(2).all(|w| w[1] > w[0]), "d={d} ε={e}: {v:?}");
            }
        }
    }

    #[test]
    fn node_doubling_audit() {
        for (d, k) in [(1u32, 0u32), (2, 1), (4, 1)] {
            for e in [0.3, 0.7, 0.95] {
                let a = chi_numeric_gl(d, k, e, 24).unwrap();
                let b = chi_numeric_gl(d, k, e, 48).unwrap();
                assert!((a - b).abs() < 1e-5, "({d},{k}) at {e}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn quasi_random_cross_check() {
        for (d, k) in [(2u32, 1u32), (4, 0), (1, 0)] {
            for e in [0.4, 0.8] {
                let q = chi_numeric_with(d, k, e, ChiMethod::QuasiMonteCarlo { points: 1 << 20 }).unwrap();
                let g = chi_numeric(d, k, e).unwrap();
                assert!((q - g).abs() < 1e-3, "({d},{k}) at {e}: {q} vs {g}");
            }
        }
    }

    #[test]
    fn polynomial_constraint_equals_factored_bound() {
        let region = CubeRegion { d: 2, k: 0.0, eps: 0.6 };
        for i in 0..20_000 {
            let [r14, r23, r24] = kronecker(i);
            let factored = CubeRegion::is_state(r14, r23, r24) && r24 * r24 < region.b(r14, r23) && r23 < region.eps;
            assert_eq!(region.is_ppt_state(r14, r23, r24), factored);
        }
    }

    #[test]
    fn xstate_and_empirical() {
        assert_eq!(chi_xstate(1, 0.5), 0.5);
        assert_eq!(chi_xstate(2, 1.0), 1.0);
        assert_eq!(chi_xstate(4, 0.0), 0.0);
        let f = ChiFunction::empirical(vec![(0.0, 0.0), (1.0, 1.0)]);
        assert_eq!(f.provenance(), Provenance::Empirical);
        assert!((f.eval(0.25).unwrap() - 0.25).abs() < 1e-15);
        assert!(ChiFunction::catalog(4, 2.0).is_err());
    }
}
