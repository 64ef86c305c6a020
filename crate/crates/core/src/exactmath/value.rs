//! Exact values of the form `(p/q)·π^a`, optionally carrying a square-root
//! surd and half-integer powers of π.

use std::fmt;
use std::ops::{Div, Mul};

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use super::ExactError;

/// Exact value `(p/q)·π^a` with `gcd(|p|, q) = 1`, `q > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiRational {
    coefficient: Rational,
    pi_power: i32,
}

impl PiRational {
    pub fn new(coefficient: Rational, pi_power: i32) -> Self {
        // rug keeps rationals canonical, so the gcd/sign invariants hold here.
        PiRational {
            coefficient,
            pi_power,
        }
    }

    pub fn rational(coefficient: Rational) -> Self {
        Self::new(coefficient, 0)
    }

    pub fn coefficient(&self) -> &Rational {
        &self.coefficient
    }

    pub fn numer(&self) -> &Integer {
        self.coefficient.numer()
    }

    pub fn denom(&self) -> &Integer {
        self.coefficient.denom()
    }

    pub fn pi_power(&self) -> i32 {
        self.pi_power
    }

    pub fn is_zero(&self) -> bool {
        self.coefficient.cmp0() == std::cmp::Ordering::Equal
    }

    /// Value rounded to `prec` bits.
    pub fn to_float(&self, prec: u32) -> Float {
        let pi = Float::with_val(prec, Constant::Pi);
        let c = Float::with_val(prec, &self.coefficient);
        c * pi.pow(self.pi_power)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_float(128).to_f64()
    }
}

impl Mul for &PiRational {
    type Output = PiRational;
    fn mul(self, rhs: &PiRational) -> PiRational {
        PiRational::new(
            Rational::from(&self.coefficient * &rhs.coefficient),
            self.pi_power + rhs.pi_power,
        )
    }
}

impl Div for &PiRational {
    type Output = PiRational;
    fn div(self, rhs: &PiRational) -> PiRational {
        PiRational::new(
            Rational::from(&self.coefficient / &rhs.coefficient),
            self.pi_power - rhs.pi_power,
        )
    }
}

impl fmt::Display for PiRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())?;
        if self.pi_power != 0 {
            write!(f, "·pi^{}", self.pi_power)?;
        }
        Ok(())
    }
}

/// Exact value `(p/q)·√r·π^(h/2)` with `r` square-free.
///
/// This is closed under multiplication and division and covers every Gamma
/// function at integer or half-integer argument, `√N` normalisations and
/// half-integer powers of `2π`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurdValue {
    coefficient: Rational,
    radicand: u64,
    pi_half_power: i32,
}

impl SurdValue {
    pub fn new(coefficient: Rational, radicand: u64, pi_half_power: i32) -> Self {
        let (square, free) = split_square(radicand);
        SurdValue {
            coefficient: coefficient * Integer::from(square),
            radicand: free,
            pi_half_power,
        }
    }

    pub fn rational(coefficient: Rational) -> Self {
        Self::new(coefficient, 1, 0)
    }

    pub fn integer(n: i64) -> Self {
        Self::rational(Rational::from(n))
    }

    /// `√n` for a positive integer.
    pub fn sqrt_of(n: u64) -> Self {
        Self::new(Rational::from(1), n, 0)
    }

    /// `π^(h/2)`.
    pub fn pi_half_pow(h: i32) -> Self {
        SurdValue {
            coefficient: Rational::from(1),
            radicand: 1,
            pi_half_power: h,
        }
    }

    pub fn coefficient(&self) -> &Rational {
        &self.coefficient
    }

    /// Square-free integer under the square root.
    pub fn radicand(&self) -> u64 {
        self.radicand
    }

    /// Exponent of π, in halves.
    pub fn pi_half_power(&self) -> i32 {
        self.pi_half_power
    }

    pub fn pow(&self, e: u32) -> SurdValue {
        let mut out = SurdValue::integer(1);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    pub fn recip(&self) -> Result<SurdValue, ExactError> {
        if self.coefficient.cmp0() == std::cmp::Ordering::Equal {
            return Err(ExactError::ZeroCoefficient);
        }
        // 1/√r = √r / r
        Ok(SurdValue {
            coefficient: Rational::from(self.coefficient.recip_ref()) / Integer::from(self.radicand),
            radicand: self.radicand,
            pi_half_power: -self.pi_half_power,
        })
    }

    /// Drops the surd when it is trivial (`r = 1`, even π power).
    pub fn to_pi_rational(&self) -> Option<PiRational> {
        (self.radicand == 1 && self.pi_half_power % 2 == 0)
            .then(|| PiRational::new(self.coefficient.clone(), self.pi_half_power / 2))
    }

    pub fn to_rational(&self) -> Option<Rational> {
        self.to_pi_rational()
            .filter(|p| p.pi_power() == 0)
            .map(|p| p.coefficient().clone())
    }

    pub fn to_float(&self, prec: u32) -> Float {
        let pi = Float::with_val(prec, Constant::Pi);
        let c = Float::with_val(prec, &self.coefficient);
        let root = Float::with_val(prec, self.radicand).sqrt();
        c * root * pi.sqrt().pow(self.pi_half_power)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_float(128).to_f64()
    }
}

impl From<PiRational> for SurdValue {
    fn from(p: PiRational) -> Self {
        SurdValue {
            radicand: 1,
            pi_half_power: 2 * p.pi_power,
            coefficient: p.coefficient,
        }
    }
}

impl Mul for &SurdValue {
    type Output = SurdValue;
    fn mul(self, rhs: &SurdValue) -> SurdValue {
        SurdValue::new(
            Rational::from(&self.coefficient * &rhs.coefficient),
            self.radicand * rhs.radicand,
            self.pi_half_power + rhs.pi_half_power,
        )
    }
}

impl Mul for SurdValue {
    type Output = SurdValue;
    fn mul(self, rhs: SurdValue) -> SurdValue {
        &self * &rhs
    }
}

impl Div for &SurdValue {
    type Output = SurdValue;
    fn div(self, rhs: &SurdValue) -> SurdValue {
        self * &rhs.recip().expect("division by an exact zero")
    }
}

impl Div for SurdValue {
    type Output = SurdValue;
    fn div(self, rhs: SurdValue) -> SurdValue {
        &self / &rhs
    }
}

impl fmt::Display for SurdValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}/{}",
            self.coefficient.numer(),
            self.coefficient.denom()
        )?;
        if self.radicand != 1 {
            write!(f, "·sqrt({})", self.radicand)?;
        }
        match self.pi_half_power {
            0 => {}
            h if h % 2 == 0 => write!(f, "·pi^{}", h / 2)?,
            h => write!(f, "·pi^({}/2)", h)?,
        }
        Ok(())
    }
}

/// Splits `n` as `s²·r` with `r` square-free; returns `(s, r)`.
fn split_square(mut n: u64) -> (u64, u64) {
    assert!(n > 0, "radicand must be positive");
    let mut square = 1u64;
    let mut free = 1u64;
    let mut p = 2u64;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        square *= p.pow(e / 2);
        if e % 2 == 1 {
            free *= p;
        }
        p += 1;
    }
    (square, free * n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surd_products_normalise() {
        let a = SurdValue::sqrt_of(6);
        let b = SurdValue::sqrt_of(3);
        let p = &a * &b;
        // √18 = 3√2
        assert_eq!(p.radicand(), 2);
        assert_eq!(*p.coefficient(), Rational::from(3));
        let sq = &a * &a;
        assert_eq!(sq.to_rational(), Some(Rational::from(6)));
    }

    #[test]
    fn surd_division_round_trips() {
        let a = SurdValue::new(Rational::from((3, 7)), 10, 3);
        let b = SurdValue::new(Rational::from((5, 2)), 6, -1);
        let q = &(&a / &b) * &b;
        assert_eq!(q, a);
    }

    #[test]
    fn display_formats() {
        let p = PiRational::new(Rational::from((1, 108972864000u64)), 6);
        assert_eq!(p.to_string(), "1/108972864000·pi^6");
        let s = SurdValue::new(Rational::from((1, 3)), 2, 1);
        assert_eq!(s.to_string(), "1/3·sqrt(2)·pi^(1/2)");
    }

    #[test]
    fn float_reconstruction() {
        let p = PiRational::new(Rational::from((16, 3)), -2);
        assert!((p.to_f64() - 16.0 / (3.0 * std::f64::consts::PI.powi(2))).abs() < 1e-16);
    }
}
