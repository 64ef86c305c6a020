//! Published Lebesgue volumes of the full and separable state sets,
//! cross-checked against exact recomputation.
//!
//! Several printed entries are internally inconsistent (decimal and factored
//! forms disagree). Both printed forms are kept verbatim and each is compared
//! separately so the discrepancy is reported, never patched.

use rug::{Integer, Rational};
use serde::Serialize;

use super::factor::{factorize_integer, PrimeFactorization};
use super::formulas::{volume_lebesgue, DivisionRing};
use super::value::PiRational;
use super::ExactError;

/// One tabulated volume, as printed.
#[derive(Clone, Debug)]
pub struct TabulatedVolume {
    pub label: &'static str,
    pub ring: DivisionRing,
    /// `N` for ℂ and ℍ, `l = N/2` for ℝ.
    pub size: i64,
    /// Separability probability multiplying the total volume (`None` for totals).
    pub probability: Option<(i64, i64)>,
    pub printed_numerator: &'static str,
    pub printed_denominator: &'static str,
    pub printed_pi_power: i32,
    /// Factored denominator as printed.
    pub printed_denominator_factors: &'static [(u32, i32)],
}

pub const TABULATED_VOLUMES: &[TabulatedVolume] = &[
    TabulatedVolume {
        label: "C N=4 total",
        ring: DivisionRing::Complex,
        size: 4,
        probability: None,
        printed_numerator: "1",
        printed_denominator: "108972864000",
        printed_pi_power: 6,
        printed_denominator_factors: &[(2, 9), (3, 5), (5, 3), (7, 2), (11, 1), (13, 1)],
    },
    TabulatedVolume {
        label: "C N=4 separable",
        ring: DivisionRing::Complex,
        size: 4,
        probability: Some((8, 33)),
        printed_numerator: "1",
        printed_denominator: "449513064000",
        printed_pi_power: 6,
        printed_denominator_factors: &[(2, 6), (3, 6), (5, 3), (7, 2), (11, 2), (13, 1)],
    },
    TabulatedVolume {
        label: "C N=6 total",
        ring: DivisionRing::Complex,
        size: 6,
        probability: None,
        printed_numerator: "1",
        printed_denominator: "298991549953302804677854494720000000",
        printed_pi_power: 15,
        printed_denominator_factors: &[
            (2, 24), (3, 12), (5, 7), (7, 5), (11, 3), (13, 2), (17, 2), (19, 1), (23, 1), (29, 1), (31, 1),
        ],
    },
    TabulatedVolume {
        label: "C N=6 separable",
        ring: DivisionRing::Complex,
        size: 6,
        probability: Some((27, 1000)),
        printed_numerator: "1",
        printed_denominator: "298991549953302804677854494720000000",
        printed_pi_power: 15,
        printed_denominator_factors: &[
            (2, 27), (3, 9), (5, 10), (7, 5), (11, 3), (13, 2), (17, 2), (19, 1), (23, 1), (29, 1), (31, 1),
        ],
    },
    TabulatedVolume {
        label: "R l=2 total",
        ring: DivisionRing::Real,
        size: 2,
        probability: None,
        printed_numerator: "1",
        printed_denominator: "967680",
        printed_pi_power: 4,
        // printed as 2^10·3^3·5^·7 with the exponent of 5 missing
        printed_denominator_factors: &[(2, 10), (3, 3), (5, 1), (7, 1)],
    },
    TabulatedVolume {
        label: "R l=2 separable",
        ring: DivisionRing::Real,
        size: 2,
        probability: Some((29, 64)),
        printed_numerator: "29",
        printed_denominator: "61931520",
        printed_pi_power: 4,
        printed_denominator_factors: &[(2, 16), (3, 3), (5, 1), (7, 1)],
    },
    TabulatedVolume {
        label: "R l=3 total",
        ring: DivisionRing::Real,
        size: 3,
        probability: None,
        printed_numerator: "1",
        printed_denominator: "1730063650258944000",
        printed_pi_power: 9,
        printed_denominator_factors: &[(2, 23), (3, 6), (5, 3), (7, 2), (11, 1), (13, 1), (17, 1), (19, 1)],
    },
    TabulatedVolume {
        label: "R l=3 separable",
        ring: DivisionRing::Real,
        size: 3,
        probability: Some((860, 6561)),
        printed_numerator: "859",
        printed_denominator: "11338145138337015398400",
        printed_pi_power: 9,
        printed_denominator_factors: &[(2, 38), (3, 6), (5, 2), (7, 2), (11, 1)],
    },
    TabulatedVolume {
        label: "H N=4 total",
        ring: DivisionRing::Quaternionic,
        size: 4,
        probability: None,
        printed_numerator: "1",
        printed_denominator: "315071454005160652800000",
        printed_pi_power: 12,
        printed_denominator_factors: &[
            (2, 15), (3, 10), (5, 5), (7, 3), (11, 2), (13, 2), (17, 1), (19, 1), (23, 1),
        ],
    },
    TabulatedVolume {
        label: "H N=4 separable",
        ring: DivisionRing::Quaternionic,
        size: 4,
        probability: Some((26, 323)),
        printed_numerator: "1",
        printed_denominator: "3914156909371803494400000",
        printed_pi_power: 12,
        printed_denominator_factors: &[
            (2, 14), (3, 10), (5, 5), (7, 3), (11, 2), (13, 2), (17, 1), (19, 1), (23, 1),
        ],
    },
];

/// Outcome of comparing one tabulated entry with exact recomputation.
#[derive(Clone, Debug, Serialize)]
pub struct VolumeCheck {
    pub label: String,
    pub computed: String,
    pub computed_denominator_factors: String,
    pub printed: String,
    pub printed_denominator_factors: String,
    /// Printed `p/q` equals the recomputed value.
    pub decimal_matches: bool,
    /// Printed factored denominator equals the recomputed denominator.
    pub factorization_matches: bool,
    /// Printed factored denominator multiplies out to the printed decimal one.
    pub printed_forms_agree: bool,
}

impl VolumeCheck {
    pub fn is_discrepancy(&self) -> bool {
        !(self.decimal_matches && self.factorization_matches)
    }
}

fn printed_factorization(t: &TabulatedVolume) -> PrimeFactorization {
    PrimeFactorization::from_pairs(
        t.printed_denominator_factors
            .iter()
            .map(|&(p, e)| (Integer::from(p), e)),
    )
}

pub fn check_tabulated(t: &TabulatedVolume) -> Result<VolumeCheck, ExactError> {
    let total = volume_lebesgue(t.ring, t.size)?;
    let computed = match t.probability {
        Some((p, q)) => &total * &PiRational::rational(Rational::from((p, q))),
        None => total,
    };
    let num: Integer = t.printed_numerator.parse().map_err(|_| ExactError::Parse(t.printed_numerator.into()))?;
    let den: Integer = t
        .printed_denominator
        .parse()
        .map_err(|_| ExactError::Parse(t.printed_denominator.into()))?;
    let printed = PiRational::new(Rational::from((num, den.clone())), t.printed_pi_power);
    let computed_factors = factorize_integer(computed.denom())?;
    let printed_factors = printed_factorization(t);
    Ok(VolumeCheck {
        label: t.label.to_string(),
        computed: computed.to_string(),
        computed_denominator_factors: computed_factors.to_string(),
        printed: printed.to_string(),
        printed_denominator_factors: printed_factors.to_string(),
        decimal_matches: printed == computed,
        factorization_matches: printed_factors == computed_factors,
        printed_forms_agree: printed_factors.reconstruct() == Rational::from(den),
    })
}

pub fn check_all_tabulated() -> Result<Vec<VolumeCheck>, ExactError> {
    TABULATED_VOLUMES.iter().map(check_tabulated).collect()
}
