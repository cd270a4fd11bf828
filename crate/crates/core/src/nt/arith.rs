//! Arithmetic functions on factorizations and prime sets.

use super::factor::Factorization;
use super::prime::{is_prime_u64, sieve};
use crate::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

/// The first `k` primes.
pub fn first_primes(k: usize) -> Vec<u64> {
    let mut limit = 64u64.max((k as f64 * ((k as f64).ln() + (k as f64).ln().ln()) * 1.2) as u64 + 16);
    loop {
        let ps = sieve(limit);
        if ps.len() >= k {
            return ps[..k].to_vec();
        }
        limit *= 2;
    }
}

/// A_k, the product of the first k primes.
pub fn primorial(k: usize) -> BigUint {
    first_primes(k).into_iter().map(BigUint::from).product()
}

/// Number of distinct prime divisors.
pub fn omega(f: &Factorization) -> usize {
    f.omega()
}

/// Moebius function; 0 unless squarefree.
pub fn mobius(f: &Factorization) -> i32 {
    if f.is_squarefree() {
        if f.omega() % 2 == 0 {
            1
        } else {
            -1
        }
    } else {
        0
    }
}

/// Moebius function of a squarefree radical together with the radical itself.
pub fn mobius_radical(f: &Factorization) -> (i32, BigUint) {
    (mobius(f), f.radical())
}

pub fn euler_phi(f: &Factorization) -> BigUint {
    f.factors()
        .iter()
        .map(|(p, k)| p.pow(k - 1) * (p - 1u32))
        .product()
}

/// theta(m) = phi(m)/m = prod (1 - 1/l) over the primes l of m.
pub fn theta(primes: &[u128]) -> BigRational {
    primes
        .iter()
        .map(|&l| BigRational::new(BigInt::from(l - 1), BigInt::from(l)))
        .fold(BigRational::one(), |a, b| a * b)
}

pub fn theta_f64(primes: &[u128]) -> f64 {
    primes.iter().map(|&l| 1.0 - 1.0 / l as f64).product()
}

/// Q = (q^n - 1)/(q - 1).
pub fn q_value(q: u64, n: u32) -> BigUint {
    (BigUint::from(q).pow(n) - 1u32) / BigUint::from(q - 1)
}

/// Whether a prime may divide Q for n in {7, 9, 11}: such primes are n
/// (or 3 when n = 9) or congruent to 1 modulo 2n (modulo 6 when n = 9).
pub fn prime_form_filter(n: u32, p: u128) -> Result<bool> {
    Ok(match n {
        7 | 11 => p == n as u128 || p % (2 * n as u128) == 1,
        9 => p == 3 || p % 6 == 1,
        _ => return Err(Error::UnsupportedN(n)),
    })
}

/// Admissible form of a prime divisor of the cyclotomic value Phi_d(q)
/// for d in {3, 7, 9, 11}: l = largest prime of d, or l = 1 mod 2d.
pub fn cyclotomic_prime_form(d: u32, p: u128) -> Result<bool> {
    Ok(match d {
        3 | 9 => p == 3 || p % (2 * d as u128) == 1,
        7 | 11 => p == d as u128 || p % (2 * d as u128) == 1,
        _ => return Err(Error::UnsupportedN(d)),
    })
}

/// Certificate for the integrality of C(n-1, k-1)/k.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BinomRatio {
    pub n: u64,
    pub k: u64,
    pub numerator: String,
    pub integral: bool,
    pub quotient: Option<String>,
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub fn binom_ratio_is_integral(n: u64, k: u64) -> Result<BinomRatio> {
    if k < 1 || k > n {
        return Err(Error::IndexOutOfRange {
            k: k as usize,
            n: n as usize,
        });
    }
    let num = binomial(n - 1, k - 1);
    let (quot, rem) = num.div_rem(&BigUint::from(k));
    Ok(BinomRatio {
        n,
        k,
        numerator: num.to_string(),
        integral: rem.is_zero(),
        quotient: rem.is_zero().then(|| quot.to_string()),
    })
}

/// Decomposes q as p^r, rejecting anything that is not a prime power.
pub fn prime_power(q: u64) -> Result<(u64, u32)> {
    if q < 2 {
        return Err(Error::NotPrimePower(q));
    }
    for r in (1..=63u32).rev() {
        let p = (q as f64).powf(1.0 / r as f64).round() as u64;
        for cand in p.saturating_sub(1)..=p + 1 {
            if cand >= 2 && cand.checked_pow(r) == Some(q) && is_prime_u64(cand) {
                return Ok((cand, r));
            }
        }
    }
    Err(Error::NotPrimePower(q))
}

/// Prime powers p^r in [lo, hi] with p >= 5.
pub fn prime_powers_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(5)..=hi)
        .filter(|&q| prime_power(q).is_ok_and(|(p, _)| p >= 5))
        .collect()
}

/// All squarefree divisors of a radical given by its primes, ascending.
pub fn squarefree_divisors(primes: &[u128]) -> Vec<u128> {
    let mut out = vec![1u128];
    for &p in primes {
        let more: Vec<u128> = out.iter().map(|d| d * p).collect();
        out.extend(more);
    }
    out.sort_unstable();
    out
}

/// The largest k with A_k <= x: an upper bound for omega(x).
pub fn omega_upper_bound(x: &BigUint) -> usize {
    let mut acc = BigUint::one();
    let mut k = 0;
    let mut limit = 64;
    loop {
        let ps = sieve(limit);
        for &p in ps.iter().skip(k) {
            let next = &acc * p;
            if &next > x {
                return k;
            }
            acc = next;
            k += 1;
        }
        limit *= 4;
    }
}

/// Exact radical of a factorization, as u128 primes.
pub fn prime_set(f: &Factorization) -> Result<Vec<u128>> {
    f.primes_u128()
}

pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nt::factorize_u128;
    use proptest::prelude::*;

    #[test]
    fn first_few_primorials() {
        let a: Vec<BigUint> = (1..=6).map(primorial).collect();
        let expect = [2u32, 6, 30, 210, 2310, 30030];
        for (x, e) in a.iter().zip(expect) {
            assert_eq!(x, &BigUint::from(e));
        }
        assert_eq!(first_primes(266)[265], 1699);
    }

    #[test]
    fn theta_of_6_is_a_third() {
        assert_eq!(theta(&[2, 3]), BigRational::new(1.into(), 3.into()));
    }

    #[test]
    fn q_value_examples() {
        assert_eq!(q_value(5, 9), BigUint::from(488_281u32));
        assert_eq!(q_value(7, 2), BigUint::from(8u32));
    }

    #[test]
    fn prime_form_examples() {
        assert!(prime_form_filter(11, 23).unwrap());
        assert!(!prime_form_filter(11, 13).unwrap());
        assert!(prime_form_filter(7, 29).unwrap());
        assert!(prime_form_filter(9, 3).unwrap());
        assert!(matches!(prime_form_filter(8, 17), Err(Error::UnsupportedN(8))));
        assert!(cyclotomic_prime_form(9, 19).unwrap());
        assert!(!cyclotomic_prime_form(9, 7).unwrap());
    }

    #[test]
    fn prime_form_holds_for_actual_divisors() {
        for q in prime_powers_in(5, 200) {
            for n in [7u32, 9, 11] {
                let f = crate::nt::factor_q_value(q, n).unwrap();
                for l in f.primes_u128().unwrap() {
                    assert!(prime_form_filter(n, l).unwrap(), "q={q} n={n} l={l}");
                }
            }
        }
    }

    #[test]
    fn binom_ratio_examples() {
        let r = binom_ratio_is_integral(9, 3).unwrap();
        assert_eq!(r.numerator, "28");
        assert!(!r.integral);
        let r = binom_ratio_is_integral(7, 7).unwrap();
        assert!(!r.integral);
        let r = binom_ratio_is_integral(5, 5).unwrap();
        assert!(!r.integral);
        let r = binom_ratio_is_integral(13, 13).unwrap();
        assert!(!r.integral);
        let r = binom_ratio_is_integral(9, 2).unwrap();
        assert_eq!((r.integral, r.quotient.as_deref()), (true, Some("4")));
    }

    #[test]
    fn prime_power_decomposition() {
        assert_eq!(prime_power(125).unwrap(), (5, 3));
        assert_eq!(prime_power(7).unwrap(), (7, 1));
        assert_eq!(prime_power(1024).unwrap(), (2, 10));
        assert!(prime_power(12).is_err());
        let count = prime_powers_in(5, 100).len();
        // primes 5..97 are 23, plus 25, 49, 121 is out: 25, 27 no (p=3), 49, 125 out.
        assert_eq!(count, 23 + 2);
    }

    #[test]
    fn omega_upper_bound_brackets_primorials() {
        assert_eq!(omega_upper_bound(&BigUint::from(29u32)), 2);
        assert_eq!(omega_upper_bound(&BigUint::from(30u32)), 3);
        assert_eq!(omega_upper_bound(&primorial(19)), 19);
    }

    proptest! {
        #[test]
        fn mobius_and_phi_match_naive(n in 1u64..20_000) {
            let f = factorize_u128(n as u128).unwrap();
            let phi_naive = (1..=n).filter(|k| k.gcd(&n) == 1).count() as u64;
            prop_assert_eq!(euler_phi(&f).to_u64().unwrap(), phi_naive);
            let mut m = n;
            let mut mu = 1i32;
            let mut d = 2;
            while d * d <= m {
                if m % d == 0 {
                    m /= d;
                    if m % d == 0 { mu = 0; break; }
                    mu = -mu;
                }
                d += 1;
            }
            if mu != 0 && m > 1 { mu = -mu; }
            prop_assert_eq!(mobius(&f), mu);
        }

        #[test]
        fn omega_bound_dominates(n in 1u64..1u64 << 50) {
            let f = factorize_u128(n as u128).unwrap();
            prop_assert!(f.omega() <= omega_upper_bound(&BigUint::from(n)));
        }
    }
}
