//! The eight sufficiency inequalities: N > 0 whenever
//! K 2^omega + C < q^{(n - s)/2}, and the polynomials P and R behind the
//! zero case.

use super::constants::{decimal, sufficiency_constants};
use super::surd::QuadSurd;
use crate::nt::{factor_q_value, factor_qn_minus_1, prime_power};
use crate::pattern::CasePattern;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;

pub(crate) fn check_q(q: u64) -> Result<()> {
    let (p, _) = prime_power(q)?;
    if p < 5 {
        return Err(Error::CharacteristicTooSmall(p));
    }
    Ok(())
}

/// K 2^omega + C as an exact number in Q(sqrt 5).
pub fn sufficiency_lhs(pattern: CasePattern, omega: usize) -> QuadSurd {
    let k = sufficiency_constants(pattern);
    let two = BigRational::from_integer(BigInt::from(2).pow(omega as u32));
    QuadSurd::new(
        decimal(k.coefficient.rational) * &two + decimal(k.constant),
        decimal(k.coefficient.sqrt5) * two,
        5,
    )
}

/// q^{(n - s)/2} with s = 6 for the zero pattern and 5 otherwise.
pub fn sufficiency_rhs(pattern: CasePattern, q: u64, n: u32) -> Result<QuadSurd> {
    let shift = sufficiency_constants(pattern).shift;
    if n <= shift {
        return Err(Error::InvalidInput(format!("n = {n} leaves no room in q^((n - {shift})/2)")));
    }
    Ok(QuadSurd::half_power(q, n - shift))
}

/// Whether the pattern's inequality holds; omega is omega(Q) for 000 and
/// omega(q^n - 1) otherwise. Exact.
pub fn sufficiency_bound(pattern: CasePattern, q: u64, n: u32, omega: usize) -> Result<bool> {
    check_q(q)?;
    if n < 7 {
        return Err(Error::InvalidInput(format!("sufficiency bounds need n >= 7, got {n}")));
    }
    sufficiency_lhs(pattern, omega).lt(&sufficiency_rhs(pattern, q, n)?)
}

/// The omega the pattern's inequality is stated in, from the factorization.
pub fn pattern_omega(pattern: CasePattern, q: u64, n: u32) -> Result<usize> {
    Ok(if pattern == CasePattern::Zero {
        factor_q_value(q, n)?.omega()
    } else {
        factor_qn_minus_1(q, n)?.omega()
    })
}

/// P(q, n) as defined term by term, S = sqrt(q^n).
pub fn p_zeros(q: u64, n: u32) -> QuadSurd {
    let s = QuadSurd::half_power(q, n);
    let q1 = BigRational::from_integer((q - 1).into());
    let lin = |k: i64, c: i64| s.scale(&BigRational::from_integer(k.into())).add(&QuadSurd::from(c)).unwrap();
    let terms = [
        QuadSurd::from(q as i64),
        lin(3, 2).scale(&q1),
        lin(5, 3).scale(&(&q1 * &q1)),
        lin(2, 1).scale(&(&q1 * &q1 * &q1)),
    ];
    terms.iter().skip(1).fold(terms[0].clone(), |a, t| a.add(t).unwrap())
}

/// 2q^{(n+6)/2} - q^{(n+4)/2} - q^{(n+2)/2} + q^3.
pub fn p_zeros_closed(q: u64, n: u32) -> QuadSurd {
    let h = |k| QuadSurd::half_power(q, k);
    h(n + 6)
        .scale(&BigRational::from_integer(2.into()))
        .add(&h(n + 4).neg())
        .and_then(|x| x.add(&h(n + 2).neg()))
        .and_then(|x| x.add(&h(6)))
        .unwrap()
}

/// R(q, n) = (q - 1)(3q^2 + 2q + 1) sqrt(q^n).
pub fn r_zeros(q: u64, n: u32) -> QuadSurd {
    let c = BigRational::from_integer(BigInt::from((q - 1) * (3 * q * q + 2 * q + 1)));
    QuadSurd::half_power(q, n).scale(&c)
}

/// 3q^{(n+6)/2} - q^{(n+4)/2} - q^{(n+2)/2} - q^{n/2}.
pub fn r_zeros_closed(q: u64, n: u32) -> QuadSurd {
    let h = |k| QuadSurd::half_power(q, k);
    h(n + 6)
        .scale(&BigRational::from_integer(3.into()))
        .add(&h(n + 4).neg())
        .and_then(|x| x.add(&h(n + 2).neg()))
        .and_then(|x| x.add(&h(n).neg()))
        .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nt::q_value;
    use num_traits::ToPrimitive;

    #[test]
    fn zero_pattern_at_q5_n12() {
        // 3 * 64 + 3.655 = 195.655 is not below 5^3 = 125
        assert!(!sufficiency_bound(CasePattern::Zero, 5, 12, 6).unwrap());
        assert!((sufficiency_lhs(CasePattern::Zero, 6).to_f64() - 195.655).abs() < 1e-12);
        assert_eq!(pattern_omega(CasePattern::Zero, 5, 12).unwrap(), 6);
        // with one prime the inequality is 9.655 < 125
        assert!(sufficiency_bound(CasePattern::Zero, 5, 12, 1).unwrap());
    }

    #[test]
    fn q7_n11_satisfies_the_nonzero_inequality() {
        let omega = pattern_omega(CasePattern::BC, 7, 11).unwrap();
        for p in CasePattern::ALL.into_iter().skip(1) {
            assert!(sufficiency_bound(p, 7, 11, omega).unwrap(), "{p}");
        }
    }

    #[test]
    fn sqrt5_constant_is_compared_exactly() {
        // (15 + sqrt 5) 2 + 7.921 = 42.393...; q^{(n-5)/2} with q = 5, n = 10 is 5^{2.5} = 55.9
        assert!(sufficiency_bound(CasePattern::C, 5, 10, 1).unwrap());
        // 2^3 (15 + sqrt 5) + 7.921 = 145.8 > 5^3 = 125 (n = 11)
        assert!(!sufficiency_bound(CasePattern::C, 5, 11, 3).unwrap());
        // mixed surds: q = 7, n = 8 gives 7^{1.5} = 18.52 against sqrt 5 terms
        assert!(!sufficiency_bound(CasePattern::C, 7, 8, 1).unwrap());
    }

    #[test]
    fn agrees_with_floats_away_from_equality() {
        for p in CasePattern::ALL {
            for q in [5u64, 7, 11, 25, 49, 125] {
                for n in 7..=12 {
                    for omega in 1..12 {
                        let lhs = sufficiency_lhs(p, omega).to_f64();
                        let rhs = sufficiency_rhs(p, q, n).unwrap().to_f64();
                        if (lhs - rhs).abs() > 1e-6 * rhs {
                            assert_eq!(sufficiency_bound(p, q, n, omega).unwrap(), lhs < rhs);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_small_characteristic_and_degree() {
        assert!(matches!(sufficiency_bound(CasePattern::A, 9, 10, 1), Err(Error::CharacteristicTooSmall(3))));
        assert!(sufficiency_bound(CasePattern::A, 5, 6, 1).is_err());
        assert!(sufficiency_bound(CasePattern::A, 6, 9, 1).is_err());
    }

    #[test]
    fn p_and_r_closed_forms() {
        for q in 5..=49u64 {
            for n in 7..=12 {
                assert_eq!(p_zeros(q, n), p_zeros_closed(q, n), "P at q = {q}, n = {n}");
                assert_eq!(r_zeros(q, n), r_zeros_closed(q, n), "R at q = {q}, n = {n}");
                let two = QuadSurd::half_power(q, n + 6).scale(&BigRational::from_integer(2.into()));
                let three = QuadSurd::half_power(q, n + 6).scale(&BigRational::from_integer(3.into()));
                assert!(p_zeros(q, n).lt(&two).unwrap());
                assert!(r_zeros(q, n).lt(&three).unwrap());
            }
        }
    }

    #[test]
    fn p_by_float() {
        let (q, n) = (7.0f64, 9);
        let s = q.powf(n as f64 / 2.0);
        let want = q + (q - 1.0) * (3.0 * s + 2.0) + (q - 1.0).powi(2) * (5.0 * s + 3.0) + (q - 1.0).powi(3) * (2.0 * s + 1.0);
        assert!((p_zeros(7, n).to_f64() - want).abs() < 1e-9 * want);
    }

    #[test]
    fn omega_of_q_is_for_zero_pattern_only() {
        let w = pattern_omega(CasePattern::Zero, 7, 9).unwrap();
        let f = crate::nt::factorize(&q_value(7, 9)).unwrap();
        assert_eq!(w, f.omega());
        assert!(pattern_omega(CasePattern::A, 7, 9).unwrap() >= w);
        assert!(q_value(7, 9).to_f64().unwrap() > 0.0);
    }
}
