//! Closed form of the two-qubit interpolation `u(η)` between the `√x`
//! operator-monotone measure (`η = -1/2`) and Hilbert-Schmidt (`η = 2`),
//! evaluated in 512-bit MPFR arithmetic.

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use super::ExactError;

/// Working precision in bits (about 154 decimal digits).
pub const PREC: u32 = 512;

/// Offset used for the symmetric limit at the removable singularities.
const LIMIT_STEP_LOG2: i32 = -100;

/// Distance below which `η` is treated as sitting on a removable singularity.
const SINGULAR_RADIUS_LOG2: i32 = -150;

fn pow2(e: i32) -> Float {
    let one = Float::with_val(PREC, 1);
    if e >= 0 {
        one << e as u32
    } else {
        one >> (-e) as u32
    }
}

fn numerator(eta: &Float) -> Float {
    let p = PREC;
    let e = eta;
    // -3η(η+4)((η-6)η-15)
    let poly_a = Float::with_val(p, e * Float::with_val(p, e + 4u32))
        * Float::with_val(p, Float::with_val(p, e - 6u32) * e - 15u32)
        * -3i32;
    // 16^{2η+3}((η-10)η-5) Γ(η+3/2) Γ(η+5/2)³ / (π² (2η+3) Γ(4η+5))
    let two_eta_3 = Float::with_val(p, Float::with_val(p, e * 2u32) + 3u32);
    let pow16 = Float::with_val(p, 16).pow(&two_eta_3);
    let poly_b = Float::with_val(p, Float::with_val(p, e - 10u32) * e - 5u32);
    let g1 = Float::with_val(p, e + 1.5f64).gamma();
    let g2 = Float::with_val(p, e + 2.5f64).gamma();
    let g3 = Float::with_val(p, Float::with_val(p, e * 4u32) + 5u32).gamma();
    let pi = Float::with_val(p, Constant::Pi);
    let gamma_term = pow16 * poly_b * g1 * Float::with_val(p, (&g2).pow(3u32))
        / (Float::with_val(p, pi.square_ref()) * &two_eta_3 * g3);
    -(poly_a + gamma_term + 60u32)
}

fn raw(eta: &Float) -> Float {
    let d1 = Float::with_val(PREC, eta - 1u32);
    let den = Float::with_val(PREC, d1.square_ref()) * Float::with_val(PREC, eta.square_ref()) * 3u32;
    numerator(eta) / den
}

fn symmetric_limit(at: i32) -> Float {
    let h = pow2(LIMIT_STEP_LOG2);
    let lo = raw(&Float::with_val(PREC, Float::with_val(PREC, at) - &h));
    let hi = raw(&Float::with_val(PREC, Float::with_val(PREC, at) + &h));
    (lo + hi) / 2u32
}

/// `u(η)` for `η > -3/2`, at full working precision.
///
/// At `η ∈ {0, 1}` the denominator `3(η-1)²η²` vanishes together with the
/// numerator; the value there is the symmetric two-point limit, accurate to
/// `O(h²) ≈ 10⁻⁶⁰`.
pub fn u_closed_float(eta: &Float) -> Result<Float, ExactError> {
    if eta.is_nan() || *eta <= -1.5f64 {
        return Err(ExactError::GammaPole(eta.to_f64()));
    }
    let radius = pow2(SINGULAR_RADIUS_LOG2);
    for at in [0i32, 1] {
        if Float::with_val(PREC, eta - at).abs() < radius {
            return Ok(symmetric_limit(at));
        }
    }
    Ok(raw(&Float::with_val(PREC, eta)))
}

/// `u(η)` for an `f64` exponent.
pub fn u_closed(eta: f64) -> Result<Float, ExactError> {
    u_closed_float(&Float::with_val(PREC, eta))
}

/// Positional decimal rendering (no exponent) with `digits` significant
/// digits.
pub fn to_decimal(x: &Float, digits: usize) -> String {
    let sci = x.to_string_radix(10, Some(digits.max(1)));
    let (mantissa, exp) = match sci.split_once('e') {
        Some((m, e)) => (m, e.parse::<i64>().unwrap_or(0)),
        None => (sci.as_str(), 0),
    };
    if !x.is_finite() {
        return sci;
    }
    let (sign, body) = match mantissa.strip_prefix('-') {
        Some(b) => ("-", b),
        None => ("", mantissa),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    let all: String = format!("{int_part}{frac_part}");
    // position of the decimal point within `all`
    let point = int_part.len() as i64 + exp;
    let out = if point <= 0 {
        format!("0.{}{}", "0".repeat((-point) as usize), all)
    } else if point as usize >= all.len() {
        format!("{}{}", all, "0".repeat(point as usize - all.len()))
    } else {
        format!("{}.{}", &all[..point as usize], &all[point as usize..])
    };
    format!("{sign}{out}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Float, b: &Float, tol: f64) -> bool {
        Float::with_val(PREC, a - b).abs() < tol
    }

    fn pi() -> Float {
        Float::with_val(PREC, Constant::Pi)
    }

    #[test]
    fn hilbert_schmidt_endpoint() {
        let u = u_closed(2.0).unwrap();
        let r = Float::with_val(PREC, 8) / 33u32;
        assert!(close(&u, &r, 1e-60));
    }

    #[test]
    fn operator_monotone_endpoint() {
        let u = u_closed(-0.5).unwrap();
        let r = Float::with_val(PREC, 1) - Float::with_val(PREC, 256) / (Float::with_val(PREC, 27) * pi().square());
        assert!(close(&u, &r, 1e-60));
        assert!((u.to_f64() - 0.0393251).abs() < 1e-7);
    }

    #[test]
    fn removable_singularity_at_one() {
        let u = u_closed(1.0).unwrap();
        let r = Float::with_val(PREC, 41471) / 105u32 - pi().square() * 40u32;
        assert!(close(&u, &r, 1e-50), "{}", to_decimal(&u, 40));
        assert!((u.to_f64() - 0.177729).abs() < 1e-6);
    }

    #[test]
    fn continuity_across_removable_singularities() {
        for at in [0i32, 1] {
            let limit = u_closed(at as f64).unwrap();
            for side in [-1i32, 1] {
                let eta = Float::with_val(PREC, at) + pow2(-80) * side;
                let v = u_closed_float(&eta).unwrap();
                assert!(close(&v, &limit, 1e-20), "η={at} side {side}");
            }
        }
    }

    #[test]
    fn positional_decimal() {
        assert_eq!(to_decimal(&Float::with_val(PREC, 0.1875), 4), "0.1875");
        assert_eq!(to_decimal(&Float::with_val(PREC, -1234.5), 5), "-1234.5");
        assert_eq!(to_decimal(&Float::with_val(PREC, 1200), 2), "1200");
        assert_eq!(to_decimal(&Float::with_val(PREC, 0.00125), 3), "0.00125");
        let u = u_closed(2.0).unwrap();
        assert!(to_decimal(&u, 30).starts_with("0.242424242424"));
    }

    #[test]
    fn lower_boundary_and_poles() {
        let u = u_closed(-1.0).unwrap();
        assert!(u.clone().abs() < 1e-60);
        assert!(u_closed(-1.5).is_err());
        assert!(u_closed(-2.0).is_err());
    }
}
