//! Reduced fractions `p/q` inside an interval whose denominators factor
//! over a small prime set, ranked so that short, structured fractions come
//! first.

use rug::Integer;
use serde::Serialize;

use super::HarnessError;
use crate::exactmath::is_prime;

/// Candidate lists longer than this are refused.
pub const CANDIDATE_CAP: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConjectureCandidate {
    pub p: u64,
    pub q: u64,
    pub value: f64,
    /// `(prime, exponent)` of `q`.
    pub support: Vec<(u64, u32)>,
    /// Lower is better.
    pub score: i64,
}

impl ConjectureCandidate {
    pub fn label(&self) -> String {
        format!("{}/{}", self.p, self.q)
    }
}

fn digits(n: u64) -> i64 {
    n.max(1).ilog10() as i64 + 1
}

/// `n = m^j` for some `m ≥ 2`, `j ≥ 2`.
pub fn is_perfect_power(n: u64) -> bool {
    if n < 4 {
        return false;
    }
    (2..=n.ilog2()).any(|j| {
        let r = (n as f64).powf(1.0 / j as f64).round() as u64;
        (r.saturating_sub(1)..=r + 1).any(|m| m >= 2 && m.checked_pow(j) == Some(n))
    })
}

/// `digits(p) + digits(q) + #primes(q)`, minus one for each of `p`, `q`
/// that is a perfect power.
pub fn score(p: u64, q: u64, distinct_primes: usize) -> i64 {
    digits(p) + digits(q) + distinct_primes as i64 - i64::from(is_perfect_power(p)) - i64::from(is_perfect_power(q))
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn smooth_denominators(primes: &[u64], max_den: u64, max_exp: u32) -> Vec<(u64, Vec<(u64, u32)>)> {
    let mut out = vec![(1u64, Vec::new())];
    for &p in primes {
        let mut next = Vec::new();
        for (q, support) in &out {
            let mut qq = *q;
            for e in 1..=max_exp {
                match qq.checked_mul(p) {
                    Some(v) if v <= max_den => qq = v,
                    _ => break,
                }
                let mut s = support.clone();
                s.push((p, e));
                next.push((qq, s));
            }
        }
        out.extend(next);
    }
    out
}

/// Every reduced `p/q ∈ [lo, hi]` with `q ≤ max_den` a product of powers
/// (each at most `max_exp`) of `primes`, sorted by score, then `q`, then `p`.
pub fn conjecture_search(
    lo: f64,
    hi: f64,
    primes: &[u64],
    max_den: u64,
    max_exp: u32,
) -> Result<Vec<ConjectureCandidate>, HarnessError> {
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(HarnessError::Config(format!("empty interval [{lo}, {hi}]")));
    }
    if lo < 0.0 {
        return Err(HarnessError::Config("interval must lie in [0, ∞)".into()));
    }
    if max_den < 1 {
        return Err(HarnessError::Config("max_den must be at least 1".into()));
    }
    let mut ps: Vec<u64> = primes.to_vec();
    ps.sort_unstable();
    ps.dedup();
    if let Some(&bad) = ps.iter().find(|&&p| !is_prime(&Integer::from(p))) {
        return Err(HarnessError::Config(format!("{bad} is not prime")));
    }
    let mut out = Vec::new();
    for (q, support) in smooth_denominators(&ps, max_den, max_exp) {
        let qf = q as f64;
        let first = (lo * qf).floor().max(0.0) as u64;
        let last = (hi * qf).ceil() as u64;
        for p in first..=last {
            let value = p as f64 / qf;
            if value < lo || value > hi || gcd(p, q) != 1 {
                continue;
            }
            out.push(ConjectureCandidate { p, q, value, score: score(p, q, support.len()), support: support.clone() });
            if out.len() > CANDIDATE_CAP {
                return Err(HarnessError::TooManyCandidates { count: out.len(), cap: CANDIDATE_CAP });
            }
        }
    }
    out.sort_by_key(|c| (c.score, c.q, c.p));
    Ok(out)
}
