//! Prime factorisation for displaying exact constants.
//!
//! Trial division by the primes below [`TRIAL_LIMIT`], then a deterministic
//! Miller-Rabin test on the cofactor and Pollard-Brent rho for composite
//! cofactors that survive trial division.

use std::fmt;
use std::sync::OnceLock;

use rug::ops::Pow;
use rug::{Integer, Rational};

use super::value::PiRational;
use super::ExactError;

const TRIAL_LIMIT: u32 = 100_000;

/// Miller-Rabin with the first 13 prime bases is exact below this bound.
const DETERMINISTIC_MR_BOUND: &str = "3317044064679887385961981";

/// Upper limit on rho iterations per split attempt.
const RHO_BUDGET: u64 = 1 << 24;

/// Ordered `(prime, exponent)` list; exponents are nonzero and may be negative.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PrimeFactorization {
    factors: Vec<(Integer, i32)>,
}

impl PrimeFactorization {
    pub fn factors(&self) -> &[(Integer, i32)] {
        &self.factors
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Builds a factorisation from arbitrary `(prime, exponent)` pairs,
    /// merging repeats and dropping zero exponents.
    pub fn from_pairs<I: IntoIterator<Item = (Integer, i32)>>(pairs: I) -> Self {
        let mut factors: Vec<(Integer, i32)> = Vec::new();
        for (p, e) in pairs {
            match factors.iter_mut().find(|(q, _)| *q == p) {
                Some(slot) => slot.1 += e,
                None => factors.push((p, e)),
            }
        }
        factors.retain(|(_, e)| *e != 0);
        factors.sort_by(|a, b| a.0.cmp(&b.0));
        PrimeFactorization { factors }
    }

    /// Exact product of `p^e` over all factors.
    pub fn reconstruct(&self) -> Rational {
        let mut out = Rational::from(1);
        for (p, e) in &self.factors {
            let pe = Integer::from(p.pow(e.unsigned_abs()));
            if *e > 0 {
                out *= pe;
            } else {
                out /= pe;
            }
        }
        out
    }

    pub fn exponent_of(&self, p: u32) -> i32 {
        self.factors
            .iter()
            .find(|(q, _)| *q == p)
            .map_or(0, |(_, e)| *e)
    }

    pub fn primes(&self) -> impl Iterator<Item = &Integer> {
        self.factors.iter().map(|(p, _)| p)
    }
}

impl fmt::Display for PrimeFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, (p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, "·")?;
            }
            if *e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_LIMIT as usize;
        let mut sieve = vec![true; n + 1];
        sieve[0] = false;
        sieve[1] = false;
        let mut i = 2;
        while i * i <= n {
            if sieve[i] {
                let mut j = i * i;
                while j <= n {
                    sieve[j] = false;
                    j += i;
                }
            }
            i += 1;
        }
        (0..=n).filter(|&i| sieve[i]).map(|i| i as u32).collect()
    })
}

/// Strong probable-prime test; exact for `n < 3.3·10²⁴`, and for larger `n`
/// uses 24 bases (error probability below 4⁻²⁴ for adversarial inputs).
pub fn is_prime(n: &Integer) -> bool {
    if *n < 2 {
        return false;
    }
    for &p in &small_primes()[..24] {
        if *n == p {
            return true;
        }
        if n.is_divisible_u(p) {
            return false;
        }
    }
    let bound: Integer = DETERMINISTIC_MR_BOUND.parse().unwrap();
    let bases: &[u32] = if *n < bound {
        &small_primes()[..13]
    } else {
        &small_primes()[..24]
    };
    let n_minus_1 = Integer::from(n - 1u32);
    let s = n_minus_1.find_one(0).unwrap_or(0);
    let d = Integer::from(&n_minus_1 >> s);
    'witness: for &a in bases {
        let mut x = match Integer::from(a).pow_mod(&d, n) {
            Ok(x) => x,
            Err(_) => return false,
        };
        if x == 1 || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.square() % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Finds a nontrivial factor of an odd composite `n` (Brent's variant).
fn pollard_brent(n: &Integer) -> Option<Integer> {
    for c in 1u32..20 {
        let f = |x: &Integer| -> Integer { (Integer::from(x.square_ref()) + c) % n };
        let mut y = Integer::from(2);
        let mut x = y.clone();
        let mut g = Integer::from(1);
        let mut r: u64 = 1;
        let mut q = Integer::from(1);
        let mut steps: u64 = 0;
        let mut ys = y.clone();
        let m: u64 = 128;
        while g == 1 {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    q = (q * Integer::from(&x - &y).abs()) % n;
                }
                g = q.clone().gcd(n);
                k += m;
            }
            r *= 2;
            steps += r;
            if steps > RHO_BUDGET {
                break;
            }
        }
        if g == *n {
            loop {
                ys = f(&ys);
                g = Integer::from(&x - &ys).abs().gcd(n);
                if g > 1 {
                    break;
                }
            }
        }
        if g > 1 && g != *n {
            return Some(g);
        }
    }
    None
}

fn split_into(n: Integer, out: &mut Vec<(Integer, i32)>) -> Result<(), ExactError> {
    if n == 1 {
        return Ok(());
    }
    if is_prime(&n) {
        out.push((n, 1));
        return Ok(());
    }
    let d = pollard_brent(&n).ok_or_else(|| ExactError::Unfactored(n.to_string()))?;
    let rest = Integer::from(&n / &d);
    split_into(d, out)?;
    split_into(rest, out)
}

/// Factorises a positive integer.
pub fn factorize_integer(n: &Integer) -> Result<PrimeFactorization, ExactError> {
    if n.cmp0() != std::cmp::Ordering::Greater {
        return Err(ExactError::ZeroCoefficient);
    }
    let mut rest = n.clone();
    let mut pairs = Vec::new();
    for &p in small_primes() {
        if rest == 1 {
            break;
        }
        if Integer::from(p) * p > rest {
            break;
        }
        let mut e = 0;
        while rest.is_divisible_u(p) {
            rest.div_exact_u_mut(p);
            e += 1;
        }
        if e > 0 {
            pairs.push((Integer::from(p), e));
        }
    }
    split_into(rest, &mut pairs)?;
    Ok(PrimeFactorization::from_pairs(pairs))
}

/// Factorisation of a rational with signed exponents (denominator primes negative).
pub fn factorize_rational(r: &Rational) -> Result<PrimeFactorization, ExactError> {
    let num = factorize_integer(&Integer::from(r.numer().abs_ref()))?;
    let den = factorize_integer(r.denom())?;
    Ok(PrimeFactorization::from_pairs(
        num.factors
            .into_iter()
            .chain(den.factors.into_iter().map(|(p, e)| (p, -e))),
    ))
}

/// Splits `(p/q)·π^a` into the factorisations of `|p|` and `q` and the π power.
pub fn factorize(
    x: &PiRational,
) -> Result<(PrimeFactorization, PrimeFactorization, i32), ExactError> {
    if x.is_zero() {
        return Err(ExactError::ZeroCoefficient);
    }
    let num = factorize_integer(&Integer::from(x.numer().abs_ref()))?;
    let den = factorize_integer(x.denom())?;
    Ok((num, den, x.pi_power()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn int(s: &str) -> Integer {
        s.parse().unwrap()
    }

    #[test]
    fn two_qubit_volume_denominator() {
        let f = factorize_integer(&int("108972864000")).unwrap();
        assert_eq!(f.to_string(), "2^9·3^5·5^3·7^2·11·13");
    }

    #[test]
    fn rebit_retrit_denominator() {
        let f = factorize_integer(&Integer::from(6561)).unwrap();
        assert_eq!(f.to_string(), "3^8");
    }

    #[test]
    fn one_has_empty_factorisation() {
        assert!(factorize_integer(&Integer::from(1)).unwrap().is_empty());
    }

    #[test]
    fn zero_is_rejected() {
        let z = PiRational::rational(Rational::from(0));
        assert!(matches!(factorize(&z), Err(ExactError::ZeroCoefficient)));
    }

    #[test]
    fn primality_edge_cases() {
        assert!(!is_prime(&Integer::from(1)));
        assert!(is_prime(&Integer::from(2)));
        assert!(is_prime(&int("1000000007")));
        // strong pseudoprime to bases 2..37
        assert!(!is_prime(&int("318665857834031151167461")));
        assert!(is_prime(&int("170141183460469231731687303715884105727")));
    }

    #[test]
    fn rho_splits_semiprimes_beyond_trial_division() {
        let p = int("1000000007");
        let q = int("998244353");
        let n = Integer::from(&p * &q) * 4u32;
        let f = factorize_integer(&n).unwrap();
        assert_eq!(f.factors().len(), 3);
        assert_eq!(f.exponent_of(2), 2);
        assert_eq!(f.reconstruct(), Rational::from(n));
    }

    fn prime_pool() -> Vec<u32> {
        small_primes()[..200].to_vec()
    }

    fn sixty_digit(picks: &[usize], big: u64) -> Integer {
        let pool = prime_pool();
        let mut n = Integer::from(1);
        let mut i = 0;
        while n.significant_digits::<u8>() < 60 {
            n *= pool[picks[i % picks.len()] % pool.len()];
            i += 1;
        }
        // one cofactor that trial division cannot remove
        let extra = Integer::from(big).next_prime();
        n * extra
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn factorize_then_reconstruct_is_identity(
            num_picks in proptest::collection::vec(0usize..200, 1..12),
            den_picks in proptest::collection::vec(0usize..200, 1..12),
            big in 200_000u64..10_000_000_000u64,
            negative in any::<bool>(),
        ) {
            let num = sixty_digit(&num_picks, big);
            let den = sixty_digit(&den_picks, big / 3 + 100_003);
            let mut r = Rational::from((num, den));
            if negative { r = -r; }
            let f = factorize_rational(&r).unwrap();
            prop_assert_eq!(f.reconstruct(), Rational::from(r.abs_ref()));
            for (p, e) in f.factors() {
                prop_assert!(is_prime(p));
                prop_assert!(*e != 0);
            }
        }
    }
}
