//! The sieve with complementary divisors: if e_1, ..., e_r have lcm e and
//! every pairwise gcd has the primes of d, then
//! N(e) >= N(e_1) + ... + N(e_r) - (r - 1) N(d).

use super::constants::sieve_constants;
use super::surd::QuadSurd;
use crate::nt::{factorize_u128, theta};
use crate::pattern::CasePattern;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Squarefree divisors are held as sorted prime lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SievePlan {
    pub e: Vec<u128>,
    pub d: Vec<u128>,
    pub parts: Vec<Vec<u128>>,
}

fn sorted(mut v: Vec<u128>) -> Vec<u128> {
    v.sort_unstable();
    v.dedup();
    v
}

fn radical_primes(v: u128) -> Result<Vec<u128>> {
    if v == 0 {
        return Err(Error::InvalidPlan("divisor 0".into()));
    }
    let f = factorize_u128(v)?;
    if !f.is_squarefree() {
        return Err(Error::InvalidPlan(format!("{v} is not squarefree")));
    }
    f.primes_u128()
}

impl SievePlan {
    pub fn new(e: Vec<u128>, d: Vec<u128>, parts: Vec<Vec<u128>>) -> Self {
        SievePlan {
            e: sorted(e),
            d: sorted(d),
            parts: parts.into_iter().map(sorted).collect(),
        }
    }

    /// From the divisors as integers, e.g. e = 6, d = 2, parts [2, 6].
    pub fn from_values(e: u128, d: u128, parts: &[u128]) -> Result<Self> {
        Ok(SievePlan::new(
            radical_primes(e)?,
            radical_primes(d)?,
            parts.iter().map(|&v| radical_primes(v)).collect::<Result<_>>()?,
        ))
    }

    /// d together with one further prime per part; just [d] when d = e.
    pub fn one_prime_each(e: &[u128], d: &[u128]) -> Self {
        let rest: Vec<u128> = e.iter().copied().filter(|p| !d.contains(p)).collect();
        let parts = if rest.is_empty() {
            vec![d.to_vec()]
        } else {
            rest.iter().map(|&p| d.iter().copied().chain([p]).collect()).collect()
        };
        SievePlan::new(e.to_vec(), d.to_vec(), parts)
    }

    pub fn r(&self) -> usize {
        self.parts.len()
    }

    /// theta = -(r - 1) theta(d) + sum theta(e_i).
    pub fn theta(&self) -> BigRational {
        let r = BigRational::from_integer(BigInt::from(self.r() as i64 - 1));
        self.parts.iter().map(|p| theta(p)).fold(-r * theta(&self.d), |a, b| a + b)
    }

    /// B = sum theta(e_i) (2^{omega(e_i)} - 2^{omega(d)}).
    fn spread(&self) -> BigRational {
        let two = |k: usize| BigRational::from_integer(BigInt::from(2).pow(k as u32));
        self.parts
            .iter()
            .map(|p| theta(p) * (two(p.len()) - two(self.d.len())))
            .fold(BigRational::zero(), |a, b| a + b)
    }

    /// Every part adds exactly omega(d) primes' worth: 2^{omega(e_i)} - 2^{omega(d)} = 2^{omega(d)}.
    pub fn is_specialized(&self) -> bool {
        self.parts.iter().all(|p| p.len() == self.d.len() + 1)
    }

    pub fn value(primes: &[u128]) -> Option<u128> {
        primes.iter().try_fold(1u128, |a, &p| a.checked_mul(p))
    }
}

/// Checks complementarity: the parts cover exactly the primes of e, every
/// pairwise gcd has the primes of d, and r = 1 means e_1 = d = e. Then theta > 0.
pub fn validate_plan(plan: &SievePlan) -> Result<()> {
    if plan.parts.is_empty() {
        return Err(Error::InvalidPlan("no parts".into()));
    }
    let e: BTreeSet<u128> = plan.e.iter().copied().collect();
    let d: BTreeSet<u128> = plan.d.iter().copied().collect();
    let union: BTreeSet<u128> = plan.parts.iter().flatten().copied().collect();
    if union != e {
        return Err(Error::InvalidPlan(format!("parts cover {union:?}, e has {e:?}")));
    }
    if plan.r() == 1 {
        if plan.parts[0] != plan.d {
            return Err(Error::InvalidPlan("with one part, e_1 = d = e".into()));
        }
    } else {
        for (i, a) in plan.parts.iter().enumerate() {
            for b in &plan.parts[i + 1..] {
                let common: BTreeSet<u128> = a.iter().filter(|p| b.contains(p)).copied().collect();
                if common != d {
                    return Err(Error::InvalidPlan(format!("gcd of {a:?} and {b:?} has primes {common:?}, d has {d:?}")));
                }
            }
        }
    }
    if !plan.theta().is_positive() {
        return Err(Error::NonPositiveTheta);
    }
    Ok(())
}

/// sum N(e_i) - (r - 1) N(d); positive means N(e) > 0.
pub fn sieve_lower_bound(plan: &SievePlan, part_counts: &[u64], d_count: u64) -> Result<i128> {
    validate_plan(plan)?;
    if part_counts.len() != plan.r() {
        return Err(Error::InvalidInput(format!("{} counts for {} parts", part_counts.len(), plan.r())));
    }
    Ok(part_counts.iter().map(|&c| c as i128).sum::<i128>() - (plan.r() as i128 - 1) * d_count as i128)
}

/// B / theta + 2^{omega(d)} - 1, the factor multiplying the pattern's constant.
fn bracket(plan: &SievePlan) -> Result<BigRational> {
    validate_plan(plan)?;
    let two = BigRational::from_integer(BigInt::from(2).pow(plan.d.len() as u32));
    Ok(plan.spread() / plan.theta() + two - BigRational::one())
}

fn frac((n, d): (i64, i64)) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Right-hand side of the sieve inequality, exact in Q(sqrt q):
/// 3X + 2 for the zero pattern (X the bracket above), which is 3B/theta + 3 * 2^{omega(d)} - 1;
/// (k0 + k1/sqrt q) X + c0 + c1/sqrt q otherwise.
pub fn sieve_rhs_exact(pattern: CasePattern, plan: &SievePlan, q: u64) -> Result<QuadSurd> {
    let x = bracket(plan)?;
    match sieve_constants(pattern) {
        None => Ok(QuadSurd::rational(BigRational::from_integer(3.into()) * x + BigRational::from_integer(2.into()))),
        Some(k) => {
            // 1/sqrt q = sqrt q / q
            let inv = BigRational::new(1.into(), BigInt::from(q));
            let a = frac(k.k0) * &x + frac(k.c0);
            let b = (frac(k.k1) * &x + frac(k.c1)) * inv;
            Ok(QuadSurd::new(a, b, q))
        }
    }
}

/// The same right-hand side at a real q, as the tables evaluate it at q_0.
pub fn sieve_rhs(pattern: CasePattern, plan: &SievePlan, q: f64) -> Result<f64> {
    let x = bracket(plan)?.to_f64().unwrap_or(f64::NAN);
    Ok(combine(pattern, x, q))
}

fn combine(pattern: CasePattern, x: f64, q: f64) -> f64 {
    match sieve_constants(pattern) {
        None => 3.0 * x + 2.0,
        Some(k) => {
            let f = |(n, d): (i64, i64)| n as f64 / d as f64;
            let s = q.sqrt();
            (f(k.k0) + f(k.k1) / s) * x + f(k.c0) + f(k.c1) / s
        }
    }
}

/// The closed form for plans whose parts each add one prime to d:
/// X = 2^{omega(d)} (2 theta + (r - 1) theta(d)) / theta - 1.
pub fn sieve_rhs_specialized(pattern: CasePattern, plan: &SievePlan, q: f64) -> Result<f64> {
    validate_plan(plan)?;
    if !plan.is_specialized() {
        return Err(Error::InvalidPlan("parts do not each add one prime to d".into()));
    }
    let th = plan.theta();
    let r = BigRational::from_integer(BigInt::from(plan.r() as i64 - 1));
    let two = BigRational::from_integer(BigInt::from(2).pow(plan.d.len() as u32));
    let x = two * (BigRational::from_integer(2.into()) * &th + r * theta(&plan.d)) / th - BigRational::one();
    Ok(combine(pattern, x.to_f64().unwrap_or(f64::NAN), q))
}

/// q^{(n-6)/2} (zero pattern) or q^{(n-5)/2} exceeds the right-hand side. Exact.
pub fn sieve_condition(pattern: CasePattern, plan: &SievePlan, q: u64, n: u32) -> Result<bool> {
    let shift = if pattern == CasePattern::Zero { 6 } else { 5 };
    if n <= shift {
        return Err(Error::InvalidInput(format!("n = {n} too small for the sieve inequality")));
    }
    let rhs = sieve_rhs_exact(pattern, plan, q)?;
    rhs.lt(&QuadSurd::half_power(q, n - shift))
}
