use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};
use statrs::function::beta::beta_reg;

use super::HarnessError;

/// Below this many hits (or misses) the Wald interval is replaced by the
/// exact Clopper-Pearson interval.
pub const WALD_MIN_HITS: u64 = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CiMethod {
    Wald,
    ClopperPearson,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConfidenceInterval {
    pub lo: f64,
    pub hi: f64,
    pub method: CiMethod,
    /// `hits` was `0` or `samples`.
    pub degenerate: bool,
}

impl ConfidenceInterval {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

fn check(samples: u64, hits: u64, level: f64) -> Result<(), HarnessError> {
    if samples == 0 || hits > samples {
        return Err(HarnessError::Config(format!("need 0 <= hits <= samples and samples >= 1, got {hits}/{samples}")));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(HarnessError::Config(format!("confidence level {level} outside (0, 1)")));
    }
    Ok(())
}

/// Two-sided normal quantile `z` with `P(|Z| < z) = level`.
pub fn normal_quantile(level: f64) -> f64 {
    Normal::standard().inverse_cdf(0.5 + level / 2.0)
}

/// `p̂ ± z √(p̂(1-p̂)/n)`, falling back to [`clopper_pearson`] when fewer
/// than [`WALD_MIN_HITS`] hits or misses were observed.
pub fn wald_ci(samples: u64, hits: u64, level: f64) -> Result<ConfidenceInterval, HarnessError> {
    check(samples, hits, level)?;
    if hits < WALD_MIN_HITS || samples - hits < WALD_MIN_HITS {
        return clopper_pearson(samples, hits, level);
    }
    let n = samples as f64;
    let p = hits as f64 / n;
    let half = normal_quantile(level) * (p * (1.0 - p) / n).sqrt();
    Ok(ConfidenceInterval { lo: p - half, hi: p + half, method: CiMethod::Wald, degenerate: false })
}

/// Quantile of Beta(a, b) by bisection on the regularised incomplete beta
/// function; stable for the very unbalanced parameters of rare events.
fn beta_quantile(a: f64, b: f64, p: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if beta_reg(a, b, mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Exact binomial interval from Beta quantiles.
pub fn clopper_pearson(samples: u64, hits: u64, level: f64) -> Result<ConfidenceInterval, HarnessError> {
    check(samples, hits, level)?;
    let alpha = 1.0 - level;
    let (x, n) = (hits as f64, samples as f64);
    let lo = if hits == 0 { 0.0 } else { beta_quantile(x, n - x + 1.0, alpha / 2.0) };
    let hi = if hits == samples { 1.0 } else { beta_quantile(x + 1.0, n - x, 1.0 - alpha / 2.0) };
    Ok(ConfidenceInterval {
        lo,
        hi,
        method: CiMethod::ClopperPearson,
        degenerate: hits == 0 || hits == samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qubit_qutrit_interval() {
        let ci = wald_ci(2_900_000_000, 78_293_301, 0.95).unwrap();
        assert_eq!(ci.method, CiMethod::Wald);
        assert!((ci.lo - 0.0269918).abs() < 5e-8, "{}", ci.lo);
        assert!((ci.hi - 0.0270036).abs() < 5e-8, "{}", ci.hi);
    }

    #[test]
    fn rebit_retrit_interval() {
        let ci = wald_ci(3_530_000_000, 462_704_503, 0.95).unwrap();
        assert!((ci.lo - 0.131067).abs() < 5e-7, "{}", ci.lo);
        assert!((ci.hi - 0.131089).abs() < 5e-7, "{}", ci.hi);
    }

    #[test]
    fn zero_hits_use_exact_interval() {
        let ci = wald_ci(1000, 0, 0.95).unwrap();
        assert_eq!(ci.method, CiMethod::ClopperPearson);
        assert!(ci.degenerate);
        assert_eq!(ci.lo, 0.0);
        // closed form for x = 0: 1 - (α/2)^{1/n}
        let want = 1.0 - 0.025f64.powf(1.0 / 1000.0);
        assert!((ci.hi - want).abs() < 1e-9, "{} vs {want}", ci.hi);
    }

    #[test]
    fn all_hits_mirror_zero_hits() {
        let a = clopper_pearson(500, 0, 0.9).unwrap();
        let b = clopper_pearson(500, 500, 0.9).unwrap();
        assert!((a.hi - (1.0 - b.lo)).abs() < 1e-12);
        assert_eq!(b.hi, 1.0);
    }

    #[test]
    fn few_hits_fall_back_and_cover_the_estimate() {
        let ci = wald_ci(10_000_000, 12, 0.95).unwrap();
        assert_eq!(ci.method, CiMethod::ClopperPearson);
        assert!(!ci.degenerate);
        assert!(ci.contains(12e-7));
    }

    #[test]
    fn invalid_inputs() {
        assert!(wald_ci(0, 0, 0.95).is_err());
        assert!(wald_ci(10, 11, 0.95).is_err());
        assert!(wald_ci(10, 5, 1.0).is_err());
    }
}
