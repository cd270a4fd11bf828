//! Integer factorization: trial division, then Brent's variant of Pollard rho
//! with a fixed parameter schedule so results never depend on a seed.

use super::mont::{sub_mod, Mont};
use super::prime::{is_prime_big, small_primes};
use crate::{Error, Result};
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

/// Default number of rho iterations before giving up on one input.
pub const DEFAULT_RHO_BUDGET: u64 = 1 << 28;

/// A verified prime factorization `value = prod p^k`, primes ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    value: BigUint,
    factors: Vec<(BigUint, u32)>,
}

impl Factorization {
    fn from_map(value: BigUint, map: BTreeMap<BigUint, u32>) -> Self {
        Factorization {
            value,
            factors: map.into_iter().collect(),
        }
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = &BigUint> {
        self.factors.iter().map(|(p, _)| p)
    }

    /// Prime divisors as u128, failing only for astronomically large primes.
    pub fn primes_u128(&self) -> Result<Vec<u128>> {
        self.primes()
            .map(|p| {
                p.to_u128()
                    .ok_or_else(|| Error::InvalidInput(format!("prime factor {p} exceeds u128")))
            })
            .collect()
    }

    pub fn omega(&self) -> usize {
        self.factors.len()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, k)| k == 1)
    }

    pub fn radical(&self) -> BigUint {
        self.primes().product()
    }

    /// Product of two factorizations.
    pub fn merge(&self, other: &Factorization) -> Factorization {
        let mut map: BTreeMap<BigUint, u32> = self.factors.iter().cloned().collect();
        for (p, k) in &other.factors {
            *map.entry(p.clone()).or_insert(0) += k;
        }
        Factorization::from_map(&self.value * &other.value, map)
    }

    /// Re-multiplies the factors and re-tests every prime.
    pub fn verify(&self) -> bool {
        let prod: BigUint = self
            .factors
            .iter()
            .map(|(p, k)| p.pow(*k))
            .product();
        prod == self.value && self.factors.iter().all(|(p, _)| is_prime_big(p))
    }
}

impl std::fmt::Display for Factorization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(p, k)| if *k == 1 { p.to_string() } else { format!("{p}^{k}") })
            .collect();
        write!(f, "{}", parts.join(" * "))
    }
}

/// Factorizer with an explicit iteration budget.
#[derive(Clone, Debug)]
pub struct Factorizer {
    pub rho_budget: u64,
}

impl Default for Factorizer {
    fn default() -> Self {
        Factorizer {
            rho_budget: DEFAULT_RHO_BUDGET,
        }
    }
}

impl Factorizer {
    pub fn factorize(&self, n: &BigUint) -> Result<Factorization> {
        if n.is_zero() {
            return Err(Error::InvalidInput("cannot factor 0".into()));
        }
        let mut map = BTreeMap::new();
        let mut m = n.clone();
        for &p in small_primes() {
            let pb = BigUint::from(p);
            if &pb * &pb > m {
                break;
            }
            while (&m % p).is_zero() {
                m /= p;
                *map.entry(pb.clone()).or_insert(0) += 1;
            }
        }
        if !m.is_one() {
            let mut budget = self.rho_budget;
            let mut stack = vec![m];
            while let Some(x) = stack.pop() {
                if x.is_one() {
                    continue;
                }
                if is_prime_big(&x) {
                    *map.entry(x).or_insert(0) += 1;
                    continue;
                }
                let d = match x.to_u128() {
                    Some(v) => split_u128(v, &mut budget).map(BigUint::from),
                    None => split_big(&x, &mut budget),
                }
                .ok_or_else(|| Error::Timeout(n.to_string()))?;
                stack.push(&x / &d);
                stack.push(d);
            }
        }
        Ok(Factorization::from_map(n.clone(), map))
    }
}

fn perfect_square_root(n: u128) -> Option<u128> {
    let r = (n as f64).sqrt() as u128;
    (r.saturating_sub(2)..=r + 2).find(|&s| s.checked_mul(s) == Some(n))
}

/// Finds a nontrivial divisor of the odd composite `m`.
fn split_u128(m: u128, budget: &mut u64) -> Option<u128> {
    if m % 2 == 0 {
        return Some(2);
    }
    if let Some(r) = perfect_square_root(m) {
        return Some(r);
    }
    let mont = Mont::new(m);
    for c in 1u128.. {
        match brent_u128(&mont, c, budget) {
            Ok(Some(d)) => return Some(d),
            Ok(None) => continue,
            Err(()) => return None,
        }
    }
    None
}

fn brent_u128(mont: &Mont, c: u128, budget: &mut u64) -> std::result::Result<Option<u128>, ()> {
    const STEP: u64 = 128;
    let m = mont.modulus();
    let c = mont.to_mont(c);
    let f = |x: u128| mont.add(mont.mul(x, x), c);
    let mut y = mont.to_mont(2);
    let mut x = y;
    let mut ys = y;
    let mut q = mont.one();
    let mut g = 1u128;
    let mut r = 1u64;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            let lim = STEP.min(r - k);
            for _ in 0..lim {
                y = f(y);
                q = mont.mul(q, sub_mod(x, y, m));
            }
            g = q.gcd(&m);
            k += lim;
            if *budget < lim {
                return Err(());
            }
            *budget -= lim;
        }
        r *= 2;
    }
    if g == m {
        loop {
            ys = f(ys);
            g = sub_mod(x, ys, m).gcd(&m);
            if g > 1 {
                break;
            }
        }
    }
    Ok(if g == m { None } else { Some(g) })
}

fn split_big(m: &BigUint, budget: &mut u64) -> Option<BigUint> {
    if (m % 2u32).is_zero() {
        return Some(BigUint::from(2u32));
    }
    let r = m.sqrt();
    if &r * &r == *m {
        return Some(r);
    }
    for c in 1u32.. {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % m;
        let mut y = BigUint::from(2u32);
        let mut x;
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut rr = 1u64;
        let mut ys = y.clone();
        while g.is_one() {
            x = y.clone();
            for _ in 0..rr {
                y = f(&y);
            }
            let mut k = 0;
            while k < rr && g.is_one() {
                ys = y.clone();
                let lim = 64.min(rr - k);
                for _ in 0..lim {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = q * diff % m;
                }
                g = q.gcd(m);
                k += lim;
                if *budget < lim {
                    return None;
                }
                *budget -= lim;
            }
            rr *= 2;
            if !g.is_one() && &g == m {
                loop {
                    ys = f(&ys);
                    let diff = if x > ys { &x - &ys } else { &ys - &x };
                    g = diff.gcd(m);
                    if !g.is_one() {
                        break;
                    }
                }
            }
        }
        if &g != m {
            return Some(g);
        }
    }
    None
}

fn cache() -> &'static Mutex<HashMap<BigUint, Factorization>> {
    static CACHE: OnceLock<Mutex<HashMap<BigUint, Factorization>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Factorization with the default budget, memoised process-wide.
pub fn factorize(n: &BigUint) -> Result<Factorization> {
    if let Some(f) = cache().lock().unwrap().get(n) {
        return Ok(f.clone());
    }
    let f = Factorizer::default().factorize(n)?;
    cache().lock().unwrap().insert(n.clone(), f.clone());
    Ok(f)
}

pub fn factorize_u128(n: u128) -> Result<Factorization> {
    factorize(&BigUint::from(n))
}

/// Phi_d(q), by dividing q^d - 1 by Phi_k(q) for the proper divisors k of d.
pub fn cyclotomic_value(d: u32, q: u64) -> BigUint {
    let mut v = BigUint::from(q).pow(d) - 1u32;
    for k in 1..d {
        if d % k == 0 {
            v /= cyclotomic_value(k, q);
        }
    }
    v
}

/// Factorization of q^n - 1 assembled from the cyclotomic pieces Phi_d(q), d | n.
pub fn factor_qn_minus_1(q: u64, n: u32) -> Result<Factorization> {
    let mut acc = factorize(&BigUint::one())?;
    for d in (1..=n).filter(|d| n % d == 0) {
        acc = acc.merge(&factorize(&cyclotomic_value(d, q))?);
    }
    Ok(acc)
}

/// Factorization of Q = (q^n - 1)/(q - 1), the product of Phi_d(q) over d | n, d > 1.
pub fn factor_q_value(q: u64, n: u32) -> Result<Factorization> {
    let mut acc = factorize(&BigUint::one())?;
    for d in (2..=n).filter(|d| n % d == 0) {
        acc = acc.merge(&factorize(&cyclotomic_value(d, q))?);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nt::is_prime_u128;
    use proptest::prelude::*;

    fn naive(mut n: u64) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        let mut d = 2;
        while d * d <= n {
            let mut k = 0;
            while n % d == 0 {
                n /= d;
                k += 1;
            }
            if k > 0 {
                out.push((d, k));
            }
            d += 1;
        }
        if n > 1 {
            out.push((n, 1));
        }
        out
    }

    #[test]
    fn five_to_the_ninth_minus_one() {
        let f = factorize_u128(1_953_124).unwrap();
        assert_eq!(f.to_string(), "2^2 * 19 * 31 * 829");
        assert_eq!(f.omega(), 4);
    }

    #[test]
    fn seven_to_the_tenth_minus_one() {
        let f = factor_qn_minus_1(7, 10).unwrap();
        assert_eq!(f.to_string(), "2^4 * 3 * 11 * 191 * 2801");
        assert!(f.verify());
    }

    #[test]
    fn semiprime_with_large_factors() {
        // Two 61-bit primes force the u128 rho path.
        let p = (1u128 << 61) - 1;
        let q = 2_305_843_009_213_693_951u128 - 2 * 3 * 5 * 7 * 11 * 13;
        let q = (q..).find(|&x| is_prime_u128(x)).unwrap();
        let f = factorize_u128(p * q).unwrap();
        assert_eq!(f.factors().len(), 2);
        assert!(f.verify());
    }

    #[test]
    fn mersenne_101() {
        let f = factorize_u128((1u128 << 101) - 1).unwrap();
        assert_eq!(f.to_string(), "7432339208719 * 341117531003194129");
    }

    #[test]
    fn beyond_u128() {
        let n = (BigUint::one() << 150u32) - 1u32;
        let f = factorize(&n).unwrap();
        assert!(f.verify());
        assert_eq!(f.value(), &n);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let tiny = Factorizer { rho_budget: 4 };
        let semi = BigUint::from((1u128 << 61) - 1) * BigUint::from((1u128 << 89) - 1);
        assert!(matches!(tiny.factorize(&semi), Err(Error::Timeout(_))));
    }

    #[test]
    fn cyclotomic_split_matches_direct() {
        for (q, n) in [(5u64, 12u32), (7, 10), (11, 9), (13, 8), (125, 7)] {
            let direct = factorize(&(BigUint::from(q).pow(n) - 1u32)).unwrap();
            assert_eq!(direct, factor_qn_minus_1(q, n).unwrap(), "{q}^{n}");
        }
    }

    proptest! {
        #[test]
        fn agrees_with_naive(n in 1u64..2_000_000_000) {
            let f = factorize_u128(n as u128).unwrap();
            let got: Vec<(u64, u32)> = f.factors().iter().map(|(p, k)| (p.to_u64().unwrap(), *k)).collect();
            prop_assert_eq!(got, naive(n));
        }

        #[test]
        fn products_verify(a in 2u64..1u64 << 40, b in 2u64..1u64 << 40, c in 2u64..1u64 << 40) {
            let n = a as u128 * b as u128 * c as u128;
            let f = factorize_u128(n).unwrap();
            prop_assert!(f.verify());
        }
    }
}
