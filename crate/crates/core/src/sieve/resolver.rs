//! Degrees n >= 13: a short chain of inequalities settles every q, with
//! factorizations needed only for the few small q^n.

use super::constants::{
    decimal, NONZEROS_MAGNITUDE_LOG2, NONZEROS_OMEGA_SHORTCUT, NONZEROS_STRONG_OFFSET, ZEROS_MAGNITUDE_LOG2_DEN,
    ZEROS_MAGNITUDE_LOG2_NUM, ZEROS_OMEGA_SHORTCUT, ZEROS_STRONG_OFFSET,
};
use super::sufficiency::check_q;
use crate::nt::{factor_q_value, factor_qn_minus_1, omega_upper_bound, prime_powers_in, q_value};
use crate::pattern::{CasePattern, PatternClass};
use crate::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Resolution {
    Guaranteed,
    NeedsDirectCheck,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ResolverRule {
    /// omega(Q) at or above 19 (zeros) or 34 (nonzeros).
    OmegaShortcut,
    /// q^n > 2^{77.01} (zeros) or q^{n-1} > 2^{132.840} (nonzeros).
    Magnitude,
    /// q^{(n-6)/2} > 2^{omega(Q) + 2.735} or q^{(n-5)/2} > 2^{omega(q^n - 1) + 4.669}.
    StrongForm,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResolverStep {
    pub rule: ResolverRule,
    /// None when the rule could not be decided without work the chain avoids.
    pub holds: Option<bool>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResolverTrace {
    pub q: u64,
    pub n: u32,
    pub class: PatternClass,
    pub steps: Vec<ResolverStep>,
    pub resolution: Resolution,
}

impl ResolverTrace {
    /// The rule that settled the case, if any.
    pub fn fired(&self) -> Option<ResolverRule> {
        self.steps.iter().find(|s| s.holds == Some(true)).map(|s| s.rule)
    }
}

/// Exact test of q^a > 2^b for rational a >= 0 and b: raise both sides to the
/// common denominator.
pub fn power_exceeds_power_of_two(q: u64, a: &BigRational, b: &BigRational) -> bool {
    let den = a.denom().lcm(b.denom());
    let ea = (a * BigRational::from_integer(den.clone())).to_integer();
    let eb = (b * BigRational::from_integer(den)).to_integer();
    if eb.is_negative() {
        return true;
    }
    let lhs = BigUint::from(q).pow(ea.to_u32().expect("exponent fits u32"));
    let rhs = BigUint::one() << eb.to_u64().expect("exponent fits u64");
    lhs > rhs
}

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// q^n > 2^{26 * 20.735 / 7}.
pub fn zeros_magnitude(q: u64, n: u32) -> bool {
    let b = decimal(ZEROS_MAGNITUDE_LOG2_NUM) / rat(ZEROS_MAGNITUDE_LOG2_DEN as i64);
    power_exceeds_power_of_two(q, &rat(n as i64), &b)
}

/// q^{n-1} > 2^{132.840}.
pub fn nonzeros_magnitude(q: u64, n: u32) -> bool {
    power_exceeds_power_of_two(q, &rat(n as i64 - 1), &decimal(NONZEROS_MAGNITUDE_LOG2))
}

/// The strengthened sufficiency inequality at a given omega: omega(Q) for
/// zeros, omega(q^n - 1) for nonzeros.
pub fn strong_form(class: PatternClass, q: u64, n: u32, omega: usize) -> bool {
    let (shift, offset) = match class {
        PatternClass::Zeros => (6, ZEROS_STRONG_OFFSET),
        PatternClass::Nonzeros => (5, NONZEROS_STRONG_OFFSET),
    };
    let a = BigRational::new(BigInt::from(n as i64 - shift), BigInt::from(2));
    power_exceeds_power_of_two(q, &a, &(rat(omega as i64) + decimal(offset)))
}

fn shortcut(class: PatternClass) -> usize {
    match class {
        PatternClass::Zeros => ZEROS_OMEGA_SHORTCUT,
        PatternClass::Nonzeros => NONZEROS_OMEGA_SHORTCUT,
    }
}

fn magnitude(class: PatternClass, q: u64, n: u32) -> (bool, String) {
    match class {
        PatternClass::Zeros => (zeros_magnitude(q, n), format!("{q}^{n} against 2^(26 * 20.735 / 7)")),
        PatternClass::Nonzeros => (nonzeros_magnitude(q, n), format!("{q}^{} against 2^132.840", n - 1)),
    }
}

fn check_large(q: u64, n: u32) -> Result<()> {
    if n < 13 {
        return Err(Error::NotLargeN(n));
    }
    check_q(q)
}

/// Runs the chain for n >= 13: omega shortcut, magnitude bound, then the
/// strong form with an omega bound and, only if that is not enough, the
/// actual factorization. Nonzero patterns share one chain.
pub fn large_n_resolver(q: u64, n: u32, pattern: CasePattern) -> Result<ResolverTrace> {
    check_large(q, n)?;
    let class = pattern.class();
    let target = match class {
        PatternClass::Zeros => q_value(q, n),
        PatternClass::Nonzeros => BigUint::from(q).pow(n) - 1u32,
    };
    let mut steps = Vec::new();
    let finish = |steps: Vec<ResolverStep>, resolution| ResolverTrace { q, n, class, steps, resolution };

    // omega(Q) is only needed when the magnitude bound fails, and then Q is small
    let q_upper = omega_upper_bound(&q_value(q, n));
    let (mag, mag_detail) = magnitude(class, q, n);
    if q_upper < shortcut(class) {
        steps.push(ResolverStep {
            rule: ResolverRule::OmegaShortcut,
            holds: Some(false),
            detail: format!("omega(Q) <= {q_upper} < {}", shortcut(class)),
        });
    } else if mag {
        steps.push(ResolverStep {
            rule: ResolverRule::OmegaShortcut,
            holds: None,
            detail: format!("omega(Q) not computed; either it is >= {} or the magnitude bound applies", shortcut(class)),
        });
    } else {
        let w = factor_q_value(q, n)?.omega();
        let holds = w >= shortcut(class);
        steps.push(ResolverStep {
            rule: ResolverRule::OmegaShortcut,
            holds: Some(holds),
            detail: format!("omega(Q) = {w}"),
        });
        if holds {
            return Ok(finish(steps, Resolution::Guaranteed));
        }
    }
    steps.push(ResolverStep {
        rule: ResolverRule::Magnitude,
        holds: Some(mag),
        detail: mag_detail,
    });
    if mag {
        return Ok(finish(steps, Resolution::Guaranteed));
    }

    let bound = omega_upper_bound(&target);
    if strong_form(class, q, n, bound) {
        steps.push(ResolverStep {
            rule: ResolverRule::StrongForm,
            holds: Some(true),
            detail: format!("holds with omega <= {bound}"),
        });
        return Ok(finish(steps, Resolution::Guaranteed));
    }
    let w = match class {
        PatternClass::Zeros => factor_q_value(q, n)?.omega(),
        PatternClass::Nonzeros => factor_qn_minus_1(q, n)?.omega(),
    };
    let holds = strong_form(class, q, n, w);
    steps.push(ResolverStep {
        rule: ResolverRule::StrongForm,
        holds: Some(holds),
        detail: format!("omega = {w}"),
    });
    Ok(finish(steps, if holds { Resolution::Guaranteed } else { Resolution::NeedsDirectCheck }))
}

/// The chain with a supplied omega (omega(Q) for the shortcut and the zero
/// strong form, omega(q^n - 1) for the nonzero strong form).
pub fn large_n_resolver_with_omega(q: u64, n: u32, pattern: CasePattern, omega: usize) -> Result<ResolverTrace> {
    check_large(q, n)?;
    let class = pattern.class();
    let mut steps = Vec::new();
    let rules: [(ResolverRule, bool, String); 3] = [
        (
            ResolverRule::OmegaShortcut,
            omega >= shortcut(class),
            format!("omega = {omega} against {}", shortcut(class)),
        ),
        {
            let (m, d) = magnitude(class, q, n);
            (ResolverRule::Magnitude, m, d)
        },
        (ResolverRule::StrongForm, strong_form(class, q, n, omega), format!("omega = {omega}")),
    ];
    for (rule, holds, detail) in rules {
        steps.push(ResolverStep { rule, holds: Some(holds), detail });
        if holds {
            return Ok(ResolverTrace { q, n, class, steps, resolution: Resolution::Guaranteed });
        }
    }
    Ok(ResolverTrace { q, n, class, steps, resolution: Resolution::NeedsDirectCheck })
}

/// All (q, n) with n >= 13 and p >= 5 that the magnitude bound leaves open.
pub fn magnitude_failures(class: PatternClass) -> Vec<(u64, u32)> {
    let fails = |q, n| match class {
        PatternClass::Zeros => !zeros_magnitude(q, n),
        PatternClass::Nonzeros => !nonzeros_magnitude(q, n),
    };
    let mut out = Vec::new();
    let mut q_max = 5;
    while fails(q_max, 13) {
        q_max += 1;
    }
    for q in prime_powers_in(5, q_max) {
        let mut n = 13;
        while fails(q, n) {
            out.push((q, n));
            n += 1;
        }
    }
    out
}
