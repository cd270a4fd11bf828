//! Numeric constants of the sufficiency, resolver and sieve inequalities,
//! kept as exact decimal literals.

use crate::pattern::CasePattern;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Num;

/// Parses a decimal literal such as "17.810" exactly.
pub fn decimal(s: &str) -> BigRational {
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    let digits = format!("{int}{frac}");
    let num = BigInt::from_str_radix(&digits, 10).expect("decimal literal");
    let den = BigInt::from(10u32).pow(frac.len() as u32);
    BigRational::new(num, den)
}

/// Coefficient of 2^omega in a sufficiency inequality: r + s sqrt(5).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Coefficient {
    pub rational: &'static str,
    pub sqrt5: &'static str,
}

/// K 2^omega + C < q^{e/2}, with omega = omega(Q) for 000 and omega(q^n - 1) otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SufficiencyConstants {
    pub coefficient: Coefficient,
    pub constant: &'static str,
    /// e such that the right side is q^{(n - e)/2}.
    pub shift: u32,
}

pub const fn sufficiency_constants(pattern: CasePattern) -> SufficiencyConstants {
    const fn k(r: &'static str, c: &'static str) -> SufficiencyConstants {
        SufficiencyConstants {
            coefficient: Coefficient { rational: r, sqrt5: "0" },
            constant: c,
            shift: 5,
        }
    }
    match pattern {
        CasePattern::Zero => SufficiencyConstants {
            coefficient: Coefficient { rational: "3", sqrt5: "0" },
            constant: "3.655",
            shift: 6,
        },
        CasePattern::A => k("5.924", "2.635"),
        CasePattern::B => k("12.083", "5.542"),
        CasePattern::C => SufficiencyConstants {
            coefficient: Coefficient { rational: "15", sqrt5: "1" },
            constant: "7.921",
            shift: 5,
        },
        CasePattern::AB => k("11.069", "4.592"),
        CasePattern::AC => k("17.140", "7.490"),
        CasePattern::BC => k("17.810", "7.624"),
        CasePattern::ABC => k("17.779", "7.606"),
    }
}

/// Exponent offset in 2^{omega(Q) + 2.735} < q^{(n-6)/2}.
pub const ZEROS_STRONG_OFFSET: &str = "2.735";
/// Exponent offset in 2^{omega(q^n - 1) + 4.669} < q^{(n-5)/2}.
pub const NONZEROS_STRONG_OFFSET: &str = "4.669";
/// omega(Q) at or above which the zero case holds for every n >= 13.
pub const ZEROS_OMEGA_SHORTCUT: usize = 19;
/// omega(Q) at or above which the nonzero cases hold for every n >= 13.
pub const NONZEROS_OMEGA_SHORTCUT: usize = 34;
/// log2 of A_19 per extra prime beyond 19 used in the shortcut chain.
pub const PRIME_GROWTH_LOG2: &str = "6.149";
/// q^n above 2^{26 * 20.735 / 7} settles the zero case when omega(Q) <= 18.
pub const ZEROS_MAGNITUDE_LOG2_NUM: &str = "539.11";
pub const ZEROS_MAGNITUDE_LOG2_DEN: u32 = 7;
/// Constant in Q > 2^{25.595 + 3.25 omega(Q)}.
pub const NONZEROS_Q_OFFSET: &str = "25.595";
pub const NONZEROS_Q_SLOPE: &str = "3.25";
/// q^{n-1} above 2^132.840 settles the nonzero cases when omega(Q) <= 33.
pub const NONZEROS_MAGNITUDE_LOG2: &str = "132.840";

/// Multiplier and additive term of a nonzero-pattern sieve inequality:
/// (k0 + k1/sqrt q) X + (c0 + c1/sqrt q).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SieveConstants {
    pub k0: (i64, i64),
    pub k1: (i64, i64),
    pub c0: (i64, i64),
    pub c1: (i64, i64),
}

/// Sieve constants as (numerator, denominator) pairs; None for 000 which
/// has its own form.
pub const fn sieve_constants(pattern: CasePattern) -> Option<SieveConstants> {
    const fn s(k0: (i64, i64), k1: (i64, i64), c0: (i64, i64), c1: (i64, i64)) -> Option<SieveConstants> {
        Some(SieveConstants { k0, k1, c0, c1 })
    }
    match pattern {
        CasePattern::Zero => None,
        CasePattern::A => s((21, 4), (0, 1), (0, 1), (4, 1)),
        CasePattern::B => s((9, 1), (6, 1), (2, 1), (4, 1)),
        CasePattern::C | CasePattern::AC => s((15, 1), (5, 1), (4, 1), (3, 1)),
        CasePattern::AB => s((9, 1), (4, 1), (2, 1), (3, 1)),
        CasePattern::BC | CasePattern::ABC => s((15, 1), (19, 3), (4, 1), (3, 1)),
    }
}

/// Pattern whose inequalities are used for the whole nonzero class.
pub const NONZEROS_WORST: CasePattern = CasePattern::BC;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals_are_exact() {
        assert_eq!(decimal("17.810"), BigRational::new(1781.into(), 100.into()));
        assert_eq!(decimal("3"), BigRational::from_integer(3.into()));
        assert_eq!(decimal("132.840") * BigRational::from_integer(1000.into()), BigRational::from_integer(132_840.into()));
    }

    #[test]
    fn magnitude_exponent() {
        // 26 * 20.735 = 539.11
        assert_eq!(decimal("26") * decimal("20.735"), decimal(ZEROS_MAGNITUDE_LOG2_NUM));
    }
}
