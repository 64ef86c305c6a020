//! Exact Gamma values at integer and half-integer arguments, and
//! Pochhammer symbols.

use rug::{Integer, Rational};

use super::value::SurdValue;
use super::ExactError;

/// `Γ(twice/2)` exactly. Half-integer arguments carry one factor of `√π`.
pub fn gamma_half(twice: i64) -> Result<SurdValue, ExactError> {
    if twice % 2 == 0 {
        let n = twice / 2;
        if n <= 0 {
            return Err(ExactError::GammaPole(n as f64));
        }
        let f = Integer::from(Integer::factorial((n - 1) as u32));
        return Ok(SurdValue::rational(Rational::from(f)));
    }
    // twice = 2m + 1, argument m + 1/2
    let m = (twice - 1).div_euclid(2);
    let coeff = if m >= 0 {
        let m = m as u32;
        let num = Integer::from(Integer::factorial(2 * m));
        let den = Integer::from(Integer::u_pow_u(4, m)) * Integer::from(Integer::factorial(m));
        Rational::from((num, den))
    } else {
        // Γ(1/2 - j) = (-4)^j j! / (2j)! √π
        let j = (-m) as u32;
        let num = Integer::from(Integer::i_pow_u(-4, j)) * Integer::from(Integer::factorial(j));
        let den = Integer::from(Integer::factorial(2 * j));
        Rational::from((num, den))
    };
    Ok(&SurdValue::rational(coeff) * &SurdValue::pi_half_pow(1))
}

/// `Γ(n)` for a positive integer.
pub fn gamma_int(n: i64) -> Result<SurdValue, ExactError> {
    gamma_half(2 * n)
}

/// Rising factorial `(a)_n = a (a+1) … (a+n-1)`.
pub fn pochhammer(a: &Rational, n: u32) -> Rational {
    let mut out = Rational::from(1);
    let mut term = a.clone();
    for _ in 0..n {
        out *= &term;
        term += 1;
    }
    out
}

/// `n!`
pub fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Float;

    #[test]
    fn half_integer_values() {
        // Γ(1/2) = √π
        let g = gamma_half(1).unwrap();
        assert_eq!(*g.coefficient(), Rational::from(1));
        assert_eq!(g.pi_half_power(), 1);
        // Γ(7/2) = 15/8 √π
        assert_eq!(*gamma_half(7).unwrap().coefficient(), Rational::from((15, 8)));
        // Γ(-1/2) = -2 √π
        assert_eq!(*gamma_half(-1).unwrap().coefficient(), Rational::from(-2));
        // Γ(-3/2) = 4/3 √π
        assert_eq!(*gamma_half(-3).unwrap().coefficient(), Rational::from((4, 3)));
    }

    #[test]
    fn agrees_with_mpfr() {
        for twice in -9i64..40 {
            if twice <= 0 && twice % 2 == 0 {
                assert!(gamma_half(twice).is_err());
                continue;
            }
            let exact = gamma_half(twice).unwrap().to_float(200);
            let reference = Float::with_val(200, twice as f64 / 2.0).gamma();
            let rel = (Float::with_val(200, &exact - &reference) / &reference).abs();
            assert!(rel < 1e-50, "Γ({twice}/2)");
        }
    }

    #[test]
    fn pochhammer_basics() {
        assert_eq!(pochhammer(&Rational::from(1), 5), Rational::from(120));
        assert_eq!(pochhammer(&Rational::from((1, 2)), 2), Rational::from((3, 4)));
        assert_eq!(pochhammer(&Rational::from(-2), 3), Rational::from(0));
        assert_eq!(pochhammer(&Rational::from(7), 0), Rational::from(1));
    }
}
