//! Regularized generalized hypergeometric series `pF̃q` in double precision.
//!
//! `pF̃q(a; b; z) = Σ_n (a₁)_n…(a_p)_n / (Γ(b₁+n)…Γ(b_q+n)) · zⁿ/n!`.
//! Lower parameters at nonpositive integers are handled by the regularized
//! definition (the leading terms vanish). Non-terminating series are
//! summed with a certified geometric tail bound for `|z| < 1`; at `|z| = 1`
//! the partial sums are Richardson-extrapolated and the result is flagged.

use serde::Serialize;
use statrs::function::gamma::gamma;

use super::ExactError;

/// Stop once the next term falls below this fraction of the partial sum.
const TERM_RTOL: f64 = 1e-18;
const MAX_TERMS: usize = 4_000_000;
/// Base partial-sum length for the `|z| = 1` extrapolation.
const EXTRAPOLATION_BASE: usize = 4096;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SeriesEval {
    pub value: f64,
    /// Terms summed (for extrapolation, in the longest partial sum).
    pub terms: usize,
    /// Bound on the truncation error; an estimate when `extrapolated`.
    pub tail_bound: f64,
    pub extrapolated: bool,
}

fn nonpositive_integer(x: f64) -> Option<usize> {
    (x <= 0.0 && x.fract() == 0.0).then(|| (-x) as usize)
}

/// `1/Γ(x)`, zero at the poles.
pub fn rgamma(x: f64) -> f64 {
    if nonpositive_integer(x).is_some() {
        0.0
    } else {
        1.0 / gamma(x)
    }
}

fn pochhammer(a: f64, n: usize) -> f64 {
    (0..n).fold(1.0, |acc, i| acc * (a + i as f64))
}

struct Terms<'a> {
    a: &'a [f64],
    b: &'a [f64],
    z: f64,
    n: usize,
    term: f64,
}

impl<'a> Terms<'a> {
    /// First index at which the regularized term can be nonzero.
    fn start(a: &'a [f64], b: &'a [f64], z: f64) -> Self {
        let n0 = b
            .iter()
            .filter_map(|&bj| nonpositive_integer(bj).map(|m| m + 1))
            .max()
            .unwrap_or(0);
        let mut term = a.iter().map(|&ai| pochhammer(ai, n0)).product::<f64>();
        term *= b.iter().map(|&bj| rgamma(bj + n0 as f64)).product::<f64>();
        let mut fact = 1.0;
        for i in 1..=n0 {
            fact *= i as f64;
        }
        term *= z.powi(n0 as i32) / fact;
        Terms { a, b, z, n: n0, term }
    }

    fn ratio(&self, n: usize) -> f64 {
        let n = n as f64;
        let num: f64 = self.a.iter().map(|&ai| ai + n).product();
        let den: f64 = self.b.iter().map(|&bj| bj + n).product();
        num / den * self.z / (n + 1.0)
    }

    fn advance(&mut self) {
        self.term *= self.ratio(self.n);
        self.n += 1;
    }
}

fn partial_sum(a: &[f64], b: &[f64], z: f64, upto: usize) -> f64 {
    let mut t = Terms::start(a, b, z);
    let mut s = 0.0;
    while t.n < upto {
        s += t.term;
        t.advance();
    }
    s
}

/// Evaluates `pF̃q(a; b; z)`.
pub fn hyper_regularized(a: &[f64], b: &[f64], z: f64) -> Result<SeriesEval, ExactError> {
    let terminating = a.iter().filter_map(|&ai| nonpositive_integer(ai)).min();
    if let Some(m) = terminating {
        let mut t = Terms::start(a, b, z);
        let mut s = 0.0;
        while t.n <= m {
            s += t.term;
            t.advance();
        }
        return Ok(SeriesEval { value: s, terms: m + 1, tail_bound: 0.0, extrapolated: false });
    }
    let p = a.len();
    let q = b.len();
    if p > q + 1 {
        return Err(ExactError::NonConvergent(format!("{p}F{q} diverges for z != 0")));
    }
    if p == q + 1 && z.abs() >= 1.0 {
        return unit_circle(a, b, z);
    }
    let mut t = Terms::start(a, b, z);
    let mut s = 0.0;
    let mut summed = 0;
    loop {
        s += t.term;
        t.advance();
        summed += 1;
        if t.term.abs() <= TERM_RTOL * s.abs() || t.term == 0.0 {
            break;
        }
        if summed >= MAX_TERMS {
            return Err(ExactError::NonConvergent(format!("no convergence after {MAX_TERMS} terms at z={z}")));
        }
    }
    // geometric certificate from the largest term ratio over a look-ahead window
    let limit = if p == q + 1 { z.abs() } else { 0.0 };
    let r = (t.n..t.n + 64).map(|n| t.ratio(n).abs()).fold(limit, f64::max);
    let tail_bound = if r < 1.0 { t.term.abs() / (1.0 - r) } else { f64::INFINITY };
    Ok(SeriesEval { value: s, terms: summed, tail_bound, extrapolated: false })
}

/// `|z| = 1` with `p = q + 1`: convergent only when `Σb − Σa > 0`; the
/// partial-sum error then behaves as `c₁N^{-s} + c₂N^{-s-1}`, which two
/// Richardson steps remove.
fn unit_circle(a: &[f64], b: &[f64], z: f64) -> Result<SeriesEval, ExactError> {
    let s_exp = b.iter().sum::<f64>() - a.iter().sum::<f64>();
    if z.abs() > 1.0 || s_exp <= 0.0 || z != 1.0 {
        return Err(ExactError::NonConvergent(format!(
            "series at z={z} with parameter excess {s_exp}"
        )));
    }
    let n = EXTRAPOLATION_BASE;
    let s1 = partial_sum(a, b, z, n);
    let s2 = partial_sum(a, b, z, 2 * n);
    let s4 = partial_sum(a, b, z, 4 * n);
    let f1 = 2f64.powf(s_exp);
    let r1a = (f1 * s2 - s1) / (f1 - 1.0);
    let r1b = (f1 * s4 - s2) / (f1 - 1.0);
    let f2 = 2f64.powf(s_exp + 1.0);
    let r2 = (f2 * r1b - r1a) / (f2 - 1.0);
    Ok(SeriesEval {
        value: r2,
        terms: 4 * n,
        tail_bound: (r2 - r1b).abs(),
        extrapolated: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_series() {
        // 1F0(1;;z) = 1/(1-z)
        let e = hyper_regularized(&[1.0], &[], 0.5).unwrap();
        assert!((e.value - 2.0).abs() < 1e-15);
        assert!(e.tail_bound < 1e-15);
    }

    #[test]
    fn gauss_sum_and_terminating_polynomial() {
        // 2F1(a,b;c;1) = Γ(c)Γ(c-a-b)/(Γ(c-a)Γ(c-b)); regularized divides by Γ(c)
        let (a, b, c) = (0.5, 0.25, 3.0);
        let exact = gamma(c - a - b) / (gamma(c - a) * gamma(c - b));
        let e = hyper_regularized(&[a, b], &[c], 1.0).unwrap();
        assert!(e.extrapolated);
        assert!((e.value - exact).abs() < 1e-11, "{} vs {exact}", e.value);
        // 2F1(-2,1;1;z) = (1-z)^2
        let p = hyper_regularized(&[-2.0, 1.0], &[1.0], 0.3).unwrap();
        assert!((p.value - 0.49).abs() < 1e-15);
        assert_eq!(p.terms, 3);
    }

    #[test]
    fn lower_parameter_pole_uses_limit() {
        // 1F̃1(a; -1; z) = a(a+1) z² · 1F̃1(a+2; 3; z) (regularized limit)
        let (a, z) = (0.7, 0.4);
        let lhs = hyper_regularized(&[a], &[-1.0], z).unwrap().value;
        let rhs = a * (a + 1.0) * z * z * hyper_regularized(&[a + 2.0], &[3.0], z).unwrap().value;
        assert!((lhs - rhs).abs() < 1e-14, "{lhs} vs {rhs}");
    }

    #[test]
    fn divergent_cases_error() {
        assert!(hyper_regularized(&[1.0, 1.0], &[1.0], 1.0).is_err());
        assert!(hyper_regularized(&[1.0, 1.0, 1.0], &[1.0], 0.1).is_err());
    }
}
