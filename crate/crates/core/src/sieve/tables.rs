//! Threshold tables for 7 <= n <= 12. Row omega uses the omega smallest
//! admissible primes: q_0 is the least real q whose Q (or q^n - 1) could have
//! that many prime factors, and t_omega = RHS^{2/(n-s)} is the q above which
//! the sieve settles every field with omega primes.

use super::constants::{sufficiency_constants, NONZEROS_WORST};
use super::plan::{sieve_rhs, SievePlan};
use super::sufficiency::sufficiency_lhs;
use crate::nt::{factor_q_value, factor_qn_minus_1, prime_form_filter, prime_powers_in, sieve};
use crate::pattern::{CasePattern, PatternClass};
use crate::{Error, Result};
use rayon::prelude::*;
use serde::Serialize;

/// Relative width of the band inside which a float comparison is refused.
pub const GUARD_BAND: f64 = 1e-9;

/// Rows are scanned up to this omega when looking for the sufficiency threshold.
const OMEGA_HORIZON: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TableRow {
    pub omega: usize,
    pub q0: f64,
    pub rhs_root: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SieveTable {
    pub n: u32,
    pub pattern_class: PatternClass,
    /// How the right-hand side is rooted, e.g. "cube root of RHS".
    pub column: String,
    pub rows: Vec<TableRow>,
}

impl SieveTable {
    /// omega at which q_0 first exceeds t_omega; N > 0 from there on.
    pub fn omega_final(&self) -> usize {
        self.rows.last().map_or(0, |r| r.omega)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("omega,q0,rhs_root\n");
        for r in &self.rows {
            out.push_str(&format!("{},{:.2},{:.2}\n", r.omega, r.q0, r.rhs_root));
        }
        out
    }
}

fn check_n(n: u32, class: PatternClass) -> Result<()> {
    if !(7..=12).contains(&n) {
        return Err(Error::UnknownPolicy { n, class: class.to_string() });
    }
    Ok(())
}

/// The pattern whose inequalities stand for the class.
pub fn class_pattern(class: PatternClass) -> CasePattern {
    match class {
        PatternClass::Zeros => CasePattern::Zero,
        PatternClass::Nonzeros => NONZEROS_WORST,
    }
}

/// n - 6 for zeros, n - 5 otherwise: the right side is q^{ex/2}.
pub fn exponent(n: u32, class: PatternClass) -> u32 {
    n - sufficiency_constants(class_pattern(class)).shift
}

pub fn column_label(n: u32, class: PatternClass) -> String {
    match exponent(n, class) {
        1 => "square of RHS".into(),
        2 => "RHS".into(),
        4 => "square root of RHS".into(),
        6 => "cube root of RHS".into(),
        ex => format!("(2/{ex})-root of RHS"),
    }
}

/// Primes that can divide Q (zeros) or q^n - 1 (nonzeros) for some q with p >= 5.
pub fn admissible_primes(n: u32, class: PatternClass, count: usize) -> Vec<u64> {
    let restricted = class == PatternClass::Zeros && matches!(n, 7 | 9 | 11);
    let mut limit = 1024u64;
    loop {
        let ps: Vec<u64> = sieve(limit)
            .into_iter()
            .filter(|&p| !restricted || prime_form_filter(n, p as u128).unwrap_or(true))
            .take(count)
            .collect();
        if ps.len() == count {
            return ps;
        }
        limit *= 4;
    }
}

/// ln q_0 for a product of primes with logarithm ln_a: for zeros the root of
/// (x^n - 1)/(x - 1) = A, for nonzeros (A + 1)^{1/n}.
pub fn ln_q0(n: u32, class: PatternClass, ln_a: f64) -> f64 {
    let nf = n as f64;
    match class {
        PatternClass::Nonzeros => (ln_a + (-ln_a).exp().ln_1p()) / nf,
        PatternClass::Zeros => {
            // ln((x^n - 1)/(x - 1)) at x = e^m, stable for large m
            let value = |m: f64| {
                if m.abs() < 1e-12 {
                    nf.ln()
                } else if m > 0.0 {
                    nf * m + (-(-nf * m).exp()).ln_1p() - (m + (-(-m).exp()).ln_1p())
                } else {
                    let x = m.exp();
                    ((1.0 - x.powf(nf)) / (1.0 - x)).ln()
                }
            };
            let (mut lo, mut hi) = (-5.0f64, ln_a / (nf - 1.0) + 1.0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if value(mid) < ln_a {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            lo
        }
    }
}

/// The divisor choices for a row with the given primes (ascending): e_1 = d
/// for one prime; d = p_1 for two or three; d = p_1 p_2 from four on, with
/// d = p_1 p_2 p_3 for 13..=21 primes when n = 7 (nonzeros); and d = 1 with
/// single-prime parts for n = 7 (zeros).
pub fn policy_plan(n: u32, class: PatternClass, primes: &[u128]) -> Result<SievePlan> {
    check_n(n, class)?;
    let w = primes.len();
    if w == 0 {
        return Err(Error::InvalidPlan("no primes".into()));
    }
    Ok(match w {
        _ if n == 7 && class == PatternClass::Zeros && w >= 2 => SievePlan::one_prime_each(primes, &[]),
        1 => SievePlan::one_prime_each(primes, primes),
        2 => SievePlan::new(primes.to_vec(), primes[..1].to_vec(), vec![primes[..1].to_vec(), primes.to_vec()]),
        3 => SievePlan::new(
            primes.to_vec(),
            primes[..1].to_vec(),
            vec![vec![primes[0], primes[1]], vec![primes[0], primes[2]]],
        ),
        _ => {
            let common = if n == 7 && class == PatternClass::Nonzeros && (13..=21).contains(&w) { 3 } else { 2 };
            SievePlan::one_prime_each(primes, &primes[..common])
        }
    })
}

/// Decides x < y, refusing when the two are within the guard band.
pub fn guarded_lt(x: f64, y: f64, what: &str) -> Result<bool> {
    if (x - y).abs() <= GUARD_BAND * x.abs().max(y.abs()) {
        return Err(Error::AmbiguousComparison(format!("{what}: {x} against {y}")));
    }
    Ok(x < y)
}

fn row(n: u32, class: PatternClass, primes: &[u64], ln_a: f64) -> Result<TableRow> {
    let ps: Vec<u128> = primes.iter().map(|&p| p as u128).collect();
    let plan = policy_plan(n, class, &ps)?;
    let q0 = ln_q0(n, class, ln_a).exp();
    // the nonzero constants shrink as q grows, so q_0 gives the largest RHS
    let rhs = sieve_rhs(class_pattern(class), &plan, q0)?;
    Ok(TableRow {
        omega: primes.len(),
        q0,
        rhs_root: rhs.powf(2.0 / exponent(n, class) as f64),
    })
}

/// Rows until q_0 first exceeds t_omega, that row included.
pub fn generate_table(n: u32, class: PatternClass) -> Result<SieveTable> {
    check_n(n, class)?;
    let ps = admissible_primes(n, class, OMEGA_HORIZON);
    let mut rows = Vec::new();
    let mut ln_a = 0.0;
    for w in 1..=OMEGA_HORIZON {
        ln_a += (ps[w - 1] as f64).ln();
        let r = row(n, class, &ps[..w], ln_a)?;
        rows.push(r);
        if guarded_lt(r.rhs_root, r.q0, "q0 against t")? {
            return Ok(SieveTable { n, pattern_class: class, column: column_label(n, class), rows });
        }
    }
    Err(Error::Internal(format!("no final row below omega = {OMEGA_HORIZON}")))
}

/// Least omega from which the plain sufficiency inequality holds at q_0(omega)
/// for every larger omega up to the scan horizon.
pub fn sufficiency_threshold(n: u32, class: PatternClass) -> Result<usize> {
    check_n(n, class)?;
    let pattern = class_pattern(class);
    let ex = exponent(n, class) as f64;
    let ps = admissible_primes(n, class, OMEGA_HORIZON);
    let mut ln_a = 0.0;
    let mut last_fail = 0;
    for w in 1..=OMEGA_HORIZON {
        ln_a += (ps[w - 1] as f64).ln();
        let lhs = sufficiency_lhs(pattern, w.min(1000)).to_f64().ln();
        let rhs = ex / 2.0 * ln_q0(n, class, ln_a);
        if !guarded_lt(lhs, rhs, "sufficiency at q0")? {
            last_fail = w;
        }
    }
    if last_fail == OMEGA_HORIZON {
        return Err(Error::Internal("sufficiency never holds below the horizon".into()));
    }
    Ok(last_fail + 1)
}

/// omega(Q) for zeros, omega(q^n - 1) for nonzeros.
pub fn class_omega(q: u64, n: u32, class: PatternClass) -> Result<usize> {
    Ok(match class {
        PatternClass::Zeros => factor_q_value(q, n)?.omega(),
        PatternClass::Nonzeros => factor_qn_minus_1(q, n)?.omega(),
    })
}

/// Prime powers q (p >= 5) whose omega is below the final row and with
/// q <= t_omega: the table leaves these open.
pub fn possible_exceptions(n: u32, class: PatternClass) -> Result<Vec<u64>> {
    let table = generate_table(n, class)?;
    exceptions_of(&table)
}

pub fn exceptions_of(table: &SieveTable) -> Result<Vec<u64>> {
    let (n, class) = (table.n, table.pattern_class);
    let top = table.rows.iter().map(|r| r.rhs_root).fold(0.0, f64::max);
    let qs = prime_powers_in(5, top.floor() as u64 + 1);
    let flags: Vec<bool> = qs
        .par_iter()
        .map(|&q| -> Result<bool> {
            let w = class_omega(q, n, class)?;
            if w >= table.omega_final() {
                return Ok(false);
            }
            let t = table.rows[w - 1].rhs_root;
            Ok(!guarded_lt(t, q as f64, "q against t")?)
        })
        .collect::<Result<_>>()?;
    Ok(qs.into_iter().zip(flags).filter(|&(_, f)| f).map(|(q, _)| q).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n12_zeros() {
        let t = generate_table(12, PatternClass::Zeros).unwrap();
        assert_eq!(t.rows.len(), 10);
        assert_eq!(t.column, "cube root of RHS");
        let first = t.rows[0];
        assert_eq!(format!("{:.2} {:.2}", first.q0, first.rhs_root), "0.50 1.71");
        assert!(possible_exceptions(12, PatternClass::Zeros).unwrap().is_empty());
        assert_eq!(class_omega(5, 12, PatternClass::Zeros).unwrap(), 6);
    }

    #[test]
    fn row_counts() {
        let want = [(12, 10, 12), (11, 5, 12), (10, 12, 13), (9, 9, 14), (8, 18, 17), (7, 10, 21)];
        for (n, z, nz) in want {
            assert_eq!(generate_table(n, PatternClass::Zeros).unwrap().rows.len(), z, "n = {n} zeros");
            assert_eq!(generate_table(n, PatternClass::Nonzeros).unwrap().rows.len(), nz, "n = {n} nonzeros");
        }
    }

    #[test]
    fn sufficiency_thresholds() {
        let want = [(12, 16, 18), (11, 5, 20), (10, 25, 24), (9, 20, 30), (8, 91, 45), (7, 266, 100)];
        for (n, z, nz) in want {
            assert_eq!(sufficiency_threshold(n, PatternClass::Zeros).unwrap(), z, "n = {n} zeros");
            assert_eq!(sufficiency_threshold(n, PatternClass::Nonzeros).unwrap(), nz, "n = {n} nonzeros");
        }
    }

    #[test]
    fn admissible_primes_for_n7_zeros() {
        let ps = admissible_primes(7, PatternClass::Zeros, 5);
        assert_eq!(ps, vec![7, 29, 43, 71, 113]);
        assert_eq!(admissible_primes(9, PatternClass::Zeros, 4), vec![3, 7, 13, 19]);
        assert_eq!(admissible_primes(8, PatternClass::Zeros, 3), vec![2, 3, 5]);
    }

    #[test]
    fn q0_inverts_the_target() {
        // zeros, n = 8, A = 2: (x^8 - 1)/(x - 1) = 2 near x = 0.5
        let x = ln_q0(8, PatternClass::Zeros, 2f64.ln()).exp();
        let v = (x.powi(8) - 1.0) / (x - 1.0);
        assert!((v - 2.0).abs() < 1e-9);
        let y = ln_q0(7, PatternClass::Nonzeros, 2f64.ln()).exp();
        assert!((y.powi(7) - 3.0).abs() < 1e-9);
    }

    #[test]
    fn policy_plans_are_valid() {
        for n in 7..=12 {
            for class in [PatternClass::Zeros, PatternClass::Nonzeros] {
                let t = generate_table(n, class).unwrap();
                let ps = admissible_primes(n, class, t.omega_final());
                for w in 1..=ps.len() {
                    let primes: Vec<u128> = ps[..w].iter().map(|&p| p as u128).collect();
                    super::super::plan::validate_plan(&policy_plan(n, class, &primes).unwrap()).unwrap();
                }
            }
        }
    }

    #[test]
    fn unknown_policy() {
        assert!(matches!(generate_table(13, PatternClass::Zeros), Err(Error::UnknownPolicy { .. })));
        assert!(matches!(policy_plan(6, PatternClass::Nonzeros, &[2]), Err(Error::UnknownPolicy { .. })));
    }

    #[test]
    fn guard_band_is_loud() {
        assert!(matches!(guarded_lt(1.0, 1.0 + 1e-12, "x"), Err(Error::AmbiguousComparison(_))));
        assert!(guarded_lt(1.0, 1.0 + 1e-6, "x").unwrap());
    }

    #[test]
    fn csv_renders_two_decimals() {
        let csv = generate_table(11, PatternClass::Zeros).unwrap().to_csv();
        assert!(csv.starts_with("omega,q0,rhs_root\n1,1.00,1.90\n2,1.57,2.61\n"), "{csv}");
    }
}
