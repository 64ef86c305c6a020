//! Closed-form volumes and induced-measure separability probabilities.

use std::fmt;
use std::str::FromStr;

use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use super::gamma::{factorial, gamma_half, gamma_int, pochhammer};
use super::value::{PiRational, SurdValue};
use super::ExactError;

/// Scalar division ring of the matrix entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DivisionRing {
    Real,
    Complex,
    Quaternionic,
}

impl DivisionRing {
    /// Dimension `d` of the ring over ℝ (1, 2, 4).
    pub fn d(self) -> u32 {
        match self {
            DivisionRing::Real => 1,
            DivisionRing::Complex => 2,
            DivisionRing::Quaternionic => 4,
        }
    }
}

impl FromStr for DivisionRing {
    type Err = ExactError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "R" | "r" | "real" | "ℝ" => Ok(DivisionRing::Real),
            "C" | "c" | "complex" | "ℂ" => Ok(DivisionRing::Complex),
            "H" | "h" | "quaternionic" | "ℍ" => Ok(DivisionRing::Quaternionic),
            other => Err(ExactError::UnsupportedField(other.to_string())),
        }
    }
}

impl fmt::Display for DivisionRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DivisionRing::Real => "R",
            DivisionRing::Complex => "C",
            DivisionRing::Quaternionic => "H",
        })
    }
}

fn pow2(e: i64) -> Rational {
    let p = Integer::from(Integer::u_pow_u(2, e.unsigned_abs() as u32));
    if e >= 0 {
        Rational::from(p)
    } else {
        Rational::from((Integer::from(1), p))
    }
}

/// Lebesgue volume of the `N×N` density matrices over ℝ, ℂ or ℍ.
///
/// For ℝ the argument is the half-dimension `l` (`N = 2l`); for ℂ and ℍ it
/// is `N` itself.
pub fn volume_lebesgue(ring: DivisionRing, n_or_l: i64) -> Result<PiRational, ExactError> {
    match ring {
        DivisionRing::Complex => {
            if n_or_l < 2 {
                return Err(ExactError::InvalidDimension(n_or_l));
            }
            let n = n_or_l as u32;
            let mut c = Rational::from(1);
            for i in 1..n {
                c *= factorial(i);
            }
            c /= factorial(n * n - 1);
            Ok(PiRational::new(c, (n * (n - 1) / 2) as i32))
        }
        DivisionRing::Real => {
            if n_or_l < 1 {
                return Err(ExactError::InvalidDimension(n_or_l));
            }
            let l = n_or_l as u32;
            let mut c = pow2(-((l * l + l) as i64)) * factorial(2 * l);
            c /= factorial(l) * factorial(2 * l * l + l - 1);
            for i in 1..l {
                c *= factorial(2 * i);
            }
            Ok(PiRational::new(c, (l * l) as i32))
        }
        DivisionRing::Quaternionic => {
            if n_or_l < 2 {
                return Err(ExactError::InvalidDimension(n_or_l));
            }
            let n = n_or_l as u32;
            let mut c = Rational::from(factorial(2 * n - 2));
            c /= factorial(2 * n * n - n - 1);
            for i in 1..n.saturating_sub(1) {
                c *= factorial(2 * i);
            }
            Ok(PiRational::new(c, (n * n - n) as i32))
        }
    }
}

/// Hilbert-Schmidt volume of the `N×N` density matrices, with `√N` kept exact.
pub fn volume_hs(ring: DivisionRing, n: i64) -> Result<SurdValue, ExactError> {
    if n < 2 {
        return Err(ExactError::InvalidDimension(n));
    }
    let nu = n as u64;
    match ring {
        DivisionRing::Complex => {
            let e = n * (n - 1) / 2;
            let mut v = &SurdValue::sqrt_of(nu) * &SurdValue::rational(pow2(e));
            v = &v * &SurdValue::pi_half_pow(2 * e as i32);
            for i in 1..=n {
                v = &v * &gamma_int(i)?;
            }
            Ok(&v / &gamma_int(n * n)?)
        }
        DivisionRing::Real => {
            // (2π)^{N(N-1)/4} = (2π)^{q/2}
            let q = n * (n - 1) / 2;
            let mut v = &SurdValue::sqrt_of(nu) * &SurdValue::rational(pow2(n + q / 2));
            if q % 2 == 1 {
                v = &v * &SurdValue::sqrt_of(2);
            }
            v = &v * &SurdValue::pi_half_pow(q as i32);
            v = &v * &gamma_half(n + 1)?;
            for i in 1..=n {
                v = &v * &gamma_half(2 + i)?;
            }
            let den = &gamma_int(n * (n + 1) / 2)? * &gamma_half(1)?;
            Ok(&v / &den)
        }
        DivisionRing::Quaternionic => Err(ExactError::UnsupportedField("H".into())),
    }
}

fn one_minus(v: SurdValue) -> Result<Rational, ExactError> {
    let r = v.to_rational().ok_or(ExactError::NotRational)?;
    Ok(Rational::from(1) - r)
}

/// Two-qubit separability probability under the induced measure of order `k`.
pub fn p_2qubits(k: i64) -> Result<Rational, ExactError> {
    if k < -2 {
        return Err(ExactError::OutOfDomain(format!("p_2qubits requires k >= -2, got {k}")));
    }
    let poly = 2 * k * (k + 7) + 25;
    let mut v = SurdValue::rational(Rational::from(3 * poly) * pow2(2 * (k + 3)));
    v = &v * &gamma_half(2 * k + 7)?;
    v = &v * &gamma_int(2 * k + 9)?;
    let den = &gamma_half(1)? * &gamma_int(3 * k + 13)?;
    one_minus(&v / &den)
}

/// Two-rebit separability probability under the induced measure of order `k`.
pub fn p_2rebits(k: i64) -> Result<Rational, ExactError> {
    if k < -1 {
        return Err(ExactError::OutOfDomain(format!("p_2rebits requires k >= -1, got {k}")));
    }
    let mut v = SurdValue::rational(Rational::from(8 * k + 15) * pow2(2 * (k + 1)));
    v = &v * &gamma_int(k + 2)?;
    v = &v * &gamma_half(4 * k + 9)?;
    let den = &gamma_half(1)? * &gamma_int(3 * k + 7)?;
    one_minus(&v / &den)
}

/// Two-quaterbit separability probability under the induced measure of order `k`.
pub fn p_2quaterbits(k: i64) -> Result<Rational, ExactError> {
    if k < 0 {
        return Err(ExactError::OutOfDomain(format!(
            "p_2quaterbits requires k >= 0, got {k}"
        )));
    }
    let poly = k * (k * (2 * k * (k + 21) + 355) + 1452) + 2430;
    let mut v = SurdValue::rational(Rational::from(poly) * pow2(2 * (k + 6)));
    v = &v * &gamma_half(2 * k + 13)?;
    v = &v * &gamma_int(2 * k + 15)?;
    let den = &(&gamma_half(1)? * &gamma_int(3 * k + 22)?) * &SurdValue::integer(3);
    one_minus(&v / &den)
}

/// Factor turning the Hilbert-Schmidt volume of `N×N` complex states into
/// the volume under the induced measure with environment `K = N + k`.
///
/// `(N²-1)!/(N-1)! · Π_{i=1}^{N-1} (i)_k · Γ(k+N) / Γ(N(k+N))`
pub fn induced_volume_factor(n: u32, k: i64) -> Result<Rational, ExactError> {
    if n < 2 {
        return Err(ExactError::InvalidDimension(n as i64));
    }
    if k < 0 {
        return Err(ExactError::OutOfDomain(format!(
            "induced volume factor requires k >= 0, got {k}"
        )));
    }
    let kn = k as u32;
    let mut c = Rational::from(factorial(n * n - 1)) / factorial(n - 1);
    for i in 1..n {
        c *= pochhammer(&Rational::from(i), kn);
    }
    c *= factorial(kn + n - 1);
    c /= factorial(n * (kn + n) - 1);
    Ok(c)
}

/// Hilbert-Schmidt volume density of `2×m` states at zero Bloch radius of
/// the qubit, with `√(2m)` kept exact.
pub fn milz_strunz_v0(m: u32) -> Result<SurdValue, ExactError> {
    if m < 2 {
        return Err(ExactError::InvalidDimension(m as i64));
    }
    let mi = m as i64;
    let m2 = mi * mi;
    // 2^{6m²-m-23/2} = 2^{6m²-m-12}·√2
    let mut v = &SurdValue::sqrt_of(m as u64) * &SurdValue::sqrt_of(2);
    v = &v * &SurdValue::rational(pow2(6 * m2 - mi - 12));
    v = &v * &SurdValue::pi_half_pow((4 * m2 - 2 * mi - 3) as i32);
    for k in 1..=(2 * mi) {
        v = &v * &gamma_int(k)?;
    }
    v = &v * &gamma_half(1 + 4 * m2)?;
    let den = &gamma_int(4 * m2)? * &gamma_int(2 * m2 - 1)?;
    Ok(&v / &den)
}

fn check_radius(r: f64) -> Result<(), ExactError> {
    if (0.0..=1.0).contains(&r) {
        Ok(())
    } else {
        Err(ExactError::OutOfDomain(format!("Bloch radius must lie in [0,1], got {r}")))
    }
}

/// Radial profile `(1-r²)^{2(m²-1)}` of the `2×m` volume density.
pub fn milz_strunz_profile(m: u32, r: f64) -> Result<f64, ExactError> {
    check_radius(r)?;
    Ok((1.0 - r * r).powi(2 * (m as i32 * m as i32 - 1)))
}

/// Exact radial profile for rational `r`.
pub fn milz_strunz_profile_exact(m: u32, r: &Rational) -> Result<Rational, ExactError> {
    if *r < 0 || *r > 1 {
        return Err(ExactError::OutOfDomain(format!("Bloch radius must lie in [0,1], got {r}")));
    }
    let base = Rational::from(1) - Rational::from(r * r);
    let e = 2 * (m * m - 1);
    let mut out = Rational::from(1);
    for _ in 0..e {
        out *= &base;
    }
    Ok(out)
}

/// `V(0)` together with the radial profile at `r`.
pub fn milz_strunz_volume(m: u32, r: f64) -> Result<(SurdValue, f64), ExactError> {
    Ok((milz_strunz_v0(m)?, milz_strunz_profile(m, r)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::ops::Pow;
    use rug::Float;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn qubit_values() {
        let expected = [(-2, q(0, 1)), (-1, q(1, 14)), (0, q(8, 33)), (1, q(61, 143)), (2, q(259, 442))];
        for (k, v) in expected {
            assert_eq!(p_2qubits(k).unwrap(), v, "k={k}");
        }
        assert!(p_2qubits(-3).is_err());
    }

    #[test]
    fn rebit_values() {
        assert_eq!(p_2rebits(0).unwrap(), q(29, 64));
        assert!(p_2rebits(-2).is_err());
        let p50 = p_2rebits(50).unwrap().to_f64();
        assert!((1.0 - p50).abs() < 1e-6 && p50 < 1.0);
    }

    fn rebit_float(k: i64, prec: u32) -> Float {
        // independent evaluation straight from Gamma functions
        let kf = Float::with_val(prec, k);
        let pi = Float::with_val(prec, rug::float::Constant::Pi);
        let four = Float::with_val(prec, 4).pow(Float::with_val(prec, &kf + 1u32));
        let g1 = Float::with_val(prec, &kf + 2u32).gamma();
        let g2 = Float::with_val(prec, Float::with_val(prec, &kf * 2u32) + 4.5f64).gamma();
        let g3 = Float::with_val(prec, Float::with_val(prec, &kf * 3u32) + 7u32).gamma();
        let poly = Float::with_val(prec, Float::with_val(prec, &kf * 8u32) + 15u32);
        Float::with_val(prec, 1) - four * poly * g1 * g2 / (pi.sqrt() * g3)
    }

    #[test]
    fn rebit_k1_matches_independent_high_precision() {
        let exact = p_2rebits(1).unwrap();
        let float = rebit_float(1, 300);
        let diff = Float::with_val(300, &float - &exact).abs();
        assert!(diff < 1e-80);
        assert!(exact > q(29, 64) && exact < 1);
        // rationalised value
        assert_eq!(exact, q(1, 1) - q(16 * 23, 1) * rebit_ratio_k1());
    }

    fn rebit_ratio_k1() -> Rational {
        // Γ(3)Γ(13/2)/(√π Γ(10)) = 2·(10395/64)/362880
        q(2 * 10395, 64 * 362880)
    }

    #[test]
    fn quaterbit_values() {
        assert_eq!(p_2quaterbits(0).unwrap(), q(26, 323));
        assert_eq!(p_2quaterbits(1).unwrap(), q(3736, 22287));
        let p2 = p_2quaterbits(2).unwrap();
        assert!(p2 > q(3736, 22287) && p2 < 1);
        assert!(p_2quaterbits(-1).is_err());
    }

    #[test]
    fn sequences_increase_in_k() {
        let mut prev = [q(0, 1), q(0, 1), q(0, 1)];
        for k in 0..=20 {
            let cur = [p_2qubits(k).unwrap(), p_2rebits(k).unwrap(), p_2quaterbits(k).unwrap()];
            for (c, p) in cur.iter().zip(prev.iter()) {
                assert!(*c >= 0 && *c <= 1);
                if k > 0 {
                    assert!(c > p, "k={k}");
                }
            }
            prev = cur;
        }
    }

    #[test]
    fn lebesgue_volumes() {
        let c4 = volume_lebesgue(DivisionRing::Complex, 4).unwrap();
        assert_eq!(c4, PiRational::new(q(1, 108972864000), 6));
        let r2 = volume_lebesgue(DivisionRing::Real, 2).unwrap();
        assert_eq!(r2, PiRational::new(q(1, 967680), 4));
        let h4 = volume_lebesgue(DivisionRing::Quaternionic, 4).unwrap();
        let den: Integer = "315071454005160652800000".parse().unwrap();
        assert_eq!(h4, PiRational::new(Rational::from((Integer::from(1), den)), 12));
        assert!(volume_lebesgue(DivisionRing::Complex, 1).is_err());
        assert!(volume_lebesgue(DivisionRing::Real, 0).is_err());
    }

    #[test]
    fn hs_volumes() {
        let c2 = volume_hs(DivisionRing::Complex, 2).unwrap();
        assert_eq!(c2, SurdValue::new(q(1, 3), 2, 2));
        let r2 = volume_hs(DivisionRing::Real, 2).unwrap();
        assert!(r2.to_f64() > 0.0);
        assert!(volume_hs(DivisionRing::Complex, 0).is_err());
    }

    #[test]
    fn hs_over_lebesgue_is_normalisation_factor() {
        for n in [2i64, 3, 4, 6] {
            let hs = volume_hs(DivisionRing::Complex, n).unwrap();
            let leb = SurdValue::from(volume_lebesgue(DivisionRing::Complex, n).unwrap());
            let ratio = &hs / &leb;
            let expected = &SurdValue::sqrt_of(n as u64)
                * &SurdValue::rational(pow2(n * (n - 1) / 2));
            assert_eq!(ratio, expected, "N={n}");
        }
        let r = &volume_hs(DivisionRing::Complex, 4).unwrap()
            / &SurdValue::from(volume_lebesgue(DivisionRing::Complex, 4).unwrap());
        assert_eq!(r.to_rational(), Some(Rational::from(128)));
    }

    #[test]
    fn hs_real_matches_float_evaluation() {
        for n in 2i64..=7 {
            let exact = volume_hs(DivisionRing::Real, n).unwrap().to_f64();
            let nf = n as f64;
            let mut prod = 1.0;
            for i in 1..=n {
                prod *= statrs::function::gamma::gamma(1.0 + i as f64 / 2.0);
            }
            let float = nf.sqrt() * 2f64.powf(nf) * (2.0 * std::f64::consts::PI).powf(nf * (nf - 1.0) / 4.0)
                * statrs::function::gamma::gamma((nf + 1.0) / 2.0) * prod
                / (statrs::function::gamma::gamma(nf * (nf + 1.0) / 2.0) * std::f64::consts::PI.sqrt());
            assert!(((exact - float) / float).abs() < 1e-10, "N={n}");
        }
    }

    #[test]
    fn induced_factor_constants() {
        // k = 0 is the identity
        assert_eq!(induced_volume_factor(4, 0).unwrap(), 1);
        // leading constants 15!/3! and 35!/5!
        let c4 = Rational::from(factorial(15)) / factorial(3);
        assert_eq!(c4, Rational::from(217945728000u64));
        let c6: Integer = "86109566386551207747222094479360000000".parse().unwrap();
        assert_eq!(Rational::from(factorial(35)) / factorial(5), Rational::from(c6));
        // k=1 against direct evaluation
        let f = induced_volume_factor(4, 1).unwrap();
        let direct = Rational::from(217945728000u64) * 6 * 24 / Rational::from(factorial(19));
        assert_eq!(f, direct);
    }

    #[test]
    fn milz_strunz_profile_values() {
        assert_eq!(milz_strunz_profile(2, 0.0).unwrap(), 1.0);
        assert_eq!(milz_strunz_profile_exact(2, &q(1, 2)).unwrap(), q(729, 4096));
        assert!(milz_strunz_profile(3, 1.0).unwrap() == 0.0);
        assert!(milz_strunz_profile(3, 1.5).is_err());
        let v0 = milz_strunz_v0(2).unwrap();
        assert_eq!(v0.radicand(), 1); // √2·√2
        assert!(v0.to_f64() > 0.0);
        let float = {
            let m = 2.0f64;
            let mut prod = 1.0;
            for k in 1..=4 {
                prod *= statrs::function::gamma::gamma(k as f64);
            }
            m.sqrt() * 2f64.powf(6.0 * m * m - m - 11.5) * std::f64::consts::PI.powf(2.0 * m * m - m - 1.5)
                * prod * statrs::function::gamma::gamma(0.5 + 2.0 * m * m)
                / (statrs::function::gamma::gamma(4.0 * m * m) * statrs::function::gamma::gamma(2.0 * m * m - 1.0))
        };
        assert!(((v0.to_f64() - float) / float).abs() < 1e-10);
    }
}
