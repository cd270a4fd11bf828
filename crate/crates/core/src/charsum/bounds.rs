//! Case bounds on |T_2|, ..., |T_8| and a direct checker.

use super::sums::{t1_closed_form, t_sum, Aggregator};
use super::table::CharTable;
use crate::field::FieldCtx;
use crate::nt::factor_q_value;
use crate::pattern::CasePattern;
use crate::{Error, Result};
use serde::Serialize;

/// Default desk budget on q^n for direct evaluation.
pub const DESK_BUDGET: u128 = 78_125;

/// Bound on |T_i| for i in 2..=7 given the zero pattern of (a, b, c).
pub fn t_bound(i: usize, q: u64, n: usize, pattern: CasePattern) -> Result<f64> {
    let qf = q as f64;
    let sq = qf.sqrt();
    let sn = qf.powf(n as f64 / 2.0);
    let q1 = qf - 1.0;
    let (a, b, c) = (pattern.a(), pattern.b(), pattern.c());
    Ok(match i {
        2 if !b => q1 * (sn + 1.0),
        2 => (sq + 1.0) * (sn + 1.0),
        3 if !c => q1 * (2.0 * sn + 1.0),
        3 => (2.0 * sq + 1.0) * (2.0 * sn + 1.0),
        4 if b => q1 * (sq + 1.0) * (sn + 1.0),
        4 if a => q1 * (sn + 1.0),
        4 => q1 * q1 * (sn + 1.0),
        5 if c => q1 * (2.0 * sq + 1.0) * (2.0 * sn + 1.0),
        5 if a => q1 * (2.0 * sn + 1.0),
        5 => q1 * q1 * (2.0 * sn + 1.0),
        6 if c => q1 * (2.0 * sq + 1.0) * (2.0 * sn + 1.0),
        6 if b => q1 * (sq + 1.0) * (2.0 * sn + 1.0),
        6 => q1 * q1 * (2.0 * sn + 1.0),
        7 if c => q1 * q1 * (2.0 * sq + 1.0) * (2.0 * sn + 1.0),
        7 if b => q1 * q1 * (sq + 1.0) * (2.0 * sn + 1.0),
        7 if a => q1 * q1 * (2.0 * sn + 1.0),
        7 => q1 * q1 * q1 * (2.0 * sn + 1.0),
        _ => return Err(Error::InvalidInput(format!("no case bound for T_{i}"))),
    })
}

/// The bracketed polynomials in q of the T_8 bound, per pattern.
pub fn t8_brackets(q: u64, pattern: CasePattern) -> (f64, Option<f64>) {
    let qf = q as f64;
    let s = qf.sqrt();
    let u = qf - 1.0;
    let u2 = u * u;
    match pattern {
        CasePattern::Zero => (u * (3.0 * qf * qf + 2.0 * qf + 1.0), None),
        CasePattern::A => (1.0 + 10.0 * u + 6.0 * u2, Some(1.0 + 5.0 * u + 3.0 * u2)),
        CasePattern::B => (
            (5.0 * qf - 3.0) * (s + 1.0) + 4.0 * u + 3.0 * (s + 2.0) * u2,
            Some(4.0 + 10.0 * u + 6.0 * u2),
        ),
        CasePattern::C => (
            (6.0 * qf - 3.0) * (2.0 * s + 1.0) + 3.0 * u + (6.0 * s + 5.0) * u2,
            Some(9.0 + 18.0 * u + 9.0 * u2),
        ),
        CasePattern::AB => (
            2.0 * s + 3.0 + (5.0 * s + 11.0) * u + (3.0 * s + 3.0) * u2,
            Some(5.0 + 13.0 * u + 6.0 * u2),
        ),
        CasePattern::AC => (
            6.0 * s + 4.0 + (12.0 * s + 10.0) * u + (6.0 * s + 3.0) * u2,
            Some(10.0 + 20.0 * u + 9.0 * u2),
        ),
        CasePattern::BC => (
            8.0 * s + 5.0 + (14.0 * s + 9.0) * u + (6.0 * s + 3.0) * u2,
            Some(13.0 + 22.0 * u + 9.0 * u2),
        ),
        CasePattern::ABC => (
            8.0 * s + 6.0 + (14.0 * s + 8.0) * u + (6.0 * s + 3.0) * u2,
            Some(14.0 + 22.0 * u + 9.0 * u2),
        ),
    }
}

/// Bound on |T_8| from omega(Q) and omega(q^n - 1).
pub fn t8_bound(q: u64, n: usize, pattern: CasePattern, omega_q: usize, omega_m: usize) -> f64 {
    let qf = q as f64;
    let sn = qf.powf(n as f64 / 2.0);
    let (x, y) = t8_brackets(q, pattern);
    let inner = (2f64.powi(omega_q as i32) - 1.0) * x * sn;
    match y {
        None => inner,
        Some(y) => {
            let outer = 2f64.powi(omega_m as i32) - 2f64.powi(omega_q as i32);
            inner + outer * y * qf.powf((n as f64 + 1.0) / 2.0)
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundCheck {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub margin: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub q: u64,
    pub n: usize,
    pub triple: [u64; 3],
    pub pattern: CasePattern,
    pub t1: i64,
    pub checks: Vec<BoundCheck>,
    pub all_hold: bool,
}

/// Evaluates every bound for many triples of one field, sharing the T_8 aggregate.
pub struct BoundChecker {
    table: CharTable,
    t8: Vec<num_complex::Complex64>,
    omega_q: usize,
    omega_m: usize,
}

impl BoundChecker {
    pub fn new(ctx: &FieldCtx) -> Result<Self> {
        Self::with_budget(ctx, DESK_BUDGET)
    }

    pub fn with_budget(ctx: &FieldCtx, budget: u128) -> Result<Self> {
        if ctx.size() > budget {
            return Err(Error::BudgetExceeded {
                size: ctx.size(),
                tier: "desk".into(),
                limit: budget,
            });
        }
        let table = CharTable::new(ctx)?;
        let t8 = Aggregator::new(&table).t8_all()?;
        let omega_q = factor_q_value(ctx.q(), ctx.n() as u32)?.omega();
        let omega_m = table.factorization().omega();
        Ok(BoundChecker {
            table,
            t8,
            omega_q,
            omega_m,
        })
    }

    pub fn table(&self) -> &CharTable {
        &self.table
    }

    pub fn check(&self, abc: [u64; 3]) -> Result<BoundReport> {
        let q = self.table.q();
        let n = self.table.ctx().n();
        if abc.iter().any(|&v| v >= q) {
            return Err(Error::InvalidInput(format!("{abc:?} not in F_{q}")));
        }
        let pattern = CasePattern::of(abc[0], abc[1], abc[2]);
        let t1 = t_sum(1, abc, &self.table)?;
        let t1_closed = t1_closed_form(abc[0], q);
        if (t1.re - t1_closed as f64).abs() > 1e-6 * (q as f64) * self.table.order() as f64 {
            return Err(Error::Internal(format!("T_1 = {t1} but closed form {t1_closed}")));
        }
        let mut checks = Vec::new();
        for i in 2..=7 {
            let value = t_sum(i, abc, &self.table)?.norm();
            checks.push(make(format!("T{i}"), value, t_bound(i, q, n, pattern)?));
        }
        let idx = (abc[0] * q * q + abc[1] * q + abc[2]) as usize;
        let bound8 = t8_bound(q, n, pattern, self.omega_q, self.omega_m);
        checks.push(make("T8".into(), self.t8[idx].norm(), bound8));
        let all_hold = checks.iter().all(|c| c.holds);
        Ok(BoundReport {
            q,
            n,
            triple: abc,
            pattern,
            t1: t1_closed,
            checks,
            all_hold,
        })
    }
}

fn make(name: String, value: f64, bound: f64) -> BoundCheck {
    BoundCheck {
        name,
        value,
        bound,
        margin: bound - value,
        holds: value <= bound * (1.0 + 1e-12),
    }
}

/// All case bounds for one triple.
pub fn check_all_bounds(ctx: &FieldCtx, abc: [u64; 3]) -> Result<BoundReport> {
    BoundChecker::new(ctx)?.check(abc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budget_is_enforced() {
        let ctx = FieldCtx::new(5, 1, 8).unwrap();
        assert!(matches!(
            check_all_bounds(&ctx, [0, 0, 0]),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn t2_example_bound() {
        let ctx = FieldCtx::new(5, 1, 3).unwrap();
        let t = CharTable::new(&ctx).unwrap();
        let v = t_sum(2, [0, 1, 0], &t).unwrap().norm();
        let bound = (5f64.sqrt() + 1.0) * (125f64.sqrt() + 1.0);
        assert!((t_bound(2, 5, 3, CasePattern::B).unwrap() - bound).abs() < 1e-9);
        assert!(v <= bound);
    }

    #[test]
    fn desk_examples_hold() {
        for (p, n, abc) in [(5, 2, [0, 0, 0]), (7, 2, [1, 1, 1]), (5, 3, [0, 1, 0])] {
            let ctx = FieldCtx::new(p, 1, n).unwrap();
            let r = check_all_bounds(&ctx, abc).unwrap();
            assert!(r.all_hold, "{r:?}");
            assert!(r.checks.iter().all(|c| c.margin > -1e-9), "{r:?}");
        }
    }

    #[test]
    fn t2_bound_is_attained_at_q5_n2() {
        let ctx = FieldCtx::new(5, 1, 2).unwrap();
        let r = check_all_bounds(&ctx, [0, 0, 0]).unwrap();
        let t2 = &r.checks[0];
        assert_eq!(t2.name, "T2");
        assert!((t2.value - 24.0).abs() < 1e-9 && t2.bound == 24.0);
    }

    #[test]
    fn every_triple_at_q5_n3() {
        let ctx = FieldCtx::new(5, 1, 3).unwrap();
        let checker = BoundChecker::new(&ctx).unwrap();
        for a in 0..5 {
            for b in 0..5 {
                for c in 0..5 {
                    let r = checker.check([a, b, c]).unwrap();
                    assert!(r.all_hold, "{r:?}");
                }
            }
        }
    }

    #[test]
    fn t8_zero_pattern_has_single_term() {
        let b = t8_bound(5, 4, CasePattern::Zero, 2, 5);
        assert!((b - 3.0 * 4.0 * 86.0 * 25.0).abs() < 1e-9);
    }
}
