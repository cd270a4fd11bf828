//! Exhaustive counts of e-free elements of F_{q^n} by trace triple
//! (Tr x, Tr x^2, Tr x^3).

mod cache;
mod kernel;
mod suite;

pub use cache::{cache_path, load_cache, read_cache, save_cache, write_cache, CACHE_MAGIC, CACHE_VERSION};
pub use suite::{direct_verification_suite, Outcome, Scope, SuiteEntry, Target};

use crate::charsum::{Aggregator, CharTable, DESK_BUDGET};
use crate::coeff::{convert, traces_to_coeffs, Convention};
use crate::field::{BaseField, FieldCtx};
use crate::nt::{factor_qn_minus_1, prime_power};
use crate::{Error, Result};
use kernel::Setup;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

/// Size limits on q^n for each enumeration tier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    Scalar,
    Parallel,
    Extended,
}

impl Tier {
    pub fn limit(self) -> u128 {
        match self {
            Tier::Scalar => 78_125,
            Tier::Parallel => 1 << 32,
            Tier::Extended => 1 << 40,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Tier::Scalar => "scalar",
            Tier::Parallel => "parallel",
            Tier::Extended => "extended",
        }
    }

    pub fn check(self, size: u128) -> Result<()> {
        if size > self.limit() {
            return Err(Error::BudgetExceeded {
                size,
                tier: self.label().into(),
                limit: self.limit(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for Tier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Tier {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "scalar" => Ok(Tier::Scalar),
            "parallel" => Ok(Tier::Parallel),
            "extended" => Ok(Tier::Extended),
            _ => Err(Error::InvalidInput(format!("unknown tier {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Scalar,
    Parallel,
    Cached,
}

/// Grid of counts indexed by trace triple, a q^2 + b q + c.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountReport {
    pub q: u64,
    pub n: u32,
    pub e: u64,
    pub method: Method,
    pub grid: Vec<u64>,
    pub elapsed: Duration,
}

#[derive(Serialize)]
struct CellJson {
    traces: [u64; 3],
    signed: [u64; 3],
    unsigned: [u64; 3],
    count: u64,
}

#[derive(Serialize)]
struct ReportJson {
    q: u64,
    n: u32,
    e: u64,
    method: Method,
    total: u64,
    cells: Vec<CellJson>,
}

impl CountReport {
    pub fn total(&self) -> u64 {
        self.grid.iter().sum()
    }

    pub fn cell(&self, abc: [u64; 3]) -> Result<u64> {
        if abc.iter().any(|&v| v >= self.q) {
            return Err(Error::InvalidInput(format!("{abc:?} not in F_{}", self.q)));
        }
        Ok(self.grid[((abc[0] * self.q + abc[1]) * self.q + abc[2]) as usize])
    }

    pub fn triples(&self) -> impl Iterator<Item = ([u64; 3], u64)> + '_ {
        let q = self.q;
        self.grid
            .iter()
            .enumerate()
            .map(move |(i, &v)| ([i as u64 / (q * q), (i as u64 / q) % q, i as u64 % q], v))
    }

    /// JSON with both coefficient conventions per cell; deterministic (no timing).
    pub fn to_json(&self) -> Result<serde_json::Value> {
        let (p, r) = prime_power(self.q)?;
        let base = BaseField::new(p, r)?;
        let cells = self
            .triples()
            .map(|(t, count)| {
                let signed = traces_to_coeffs(t[0], t[1], t[2], &base)?;
                let mut unsigned = signed;
                for (k, v) in unsigned.iter_mut().enumerate() {
                    *v = convert(&base, k + 1, *v, Convention::Signed, Convention::Unsigned);
                }
                Ok(CellJson {
                    traces: t,
                    signed,
                    unsigned,
                    count,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let doc = ReportJson {
            q: self.q,
            n: self.n,
            e: self.e,
            method: self.method,
            total: self.total(),
            cells,
        };
        serde_json::to_value(doc).map_err(|e| Error::Internal(e.to_string()))
    }
}

fn setup(ctx: &FieldCtx, e: u64, tier: Option<Tier>) -> Result<Setup<'_>> {
    if let Some(tier) = tier {
        tier.check(ctx.size())?;
    }
    let order = u64::try_from(ctx.order()).map_err(|_| Error::BudgetExceeded {
        size: ctx.size(),
        tier: "u64 index".into(),
        limit: u64::MAX as u128,
    })?;
    if e == 0 || order % e != 0 {
        return Err(Error::NotDivisor {
            d: e.to_string(),
            m: order.to_string(),
        });
    }
    let fact = factor_qn_minus_1(ctx.q(), ctx.n() as u32)?;
    let generator = ctx.find_generator(&fact)?;
    let primes = fact
        .primes_u128()?
        .into_iter()
        .map(|l| l as u64)
        .filter(|l| e % l == 0)
        .collect();
    Ok(Setup {
        ctx,
        generator,
        order,
        primes,
    })
}

/// Counts e-free elements per trace triple. The scalar tier walks every power
/// of the generator; the others use the coset kernel in parallel.
pub fn count_efree_grid(ctx: &FieldCtx, e: u64, tier: Tier) -> Result<CountReport> {
    let s = setup(ctx, e, Some(tier))?;
    let start = Instant::now();
    let (grid, method) = match tier {
        Tier::Scalar => (kernel::scalar(&s), Method::Scalar),
        _ => (kernel::coset(&s, 1 << 16)?, Method::Parallel),
    };
    Ok(CountReport {
        q: ctx.q(),
        n: ctx.n() as u32,
        e,
        method,
        grid,
        elapsed: start.elapsed(),
    })
}

/// As [`count_efree_grid`] with the scalar method and a chosen generator.
pub fn count_efree_grid_with(
    ctx: &FieldCtx,
    e: u64,
    generator: crate::field::FieldElem,
) -> Result<CountReport> {
    let mut s = setup(ctx, e, Some(Tier::Scalar))?;
    let fact = factor_qn_minus_1(ctx.q(), ctx.n() as u32)?;
    if !ctx.is_primitive(&generator, &fact)? {
        return Err(Error::InvalidInput("enumeration needs a primitive element".into()));
    }
    s.generator = generator;
    let start = Instant::now();
    let grid = kernel::scalar(&s);
    Ok(CountReport {
        q: ctx.q(),
        n: ctx.n() as u32,
        e,
        method: Method::Scalar,
        grid,
        elapsed: start.elapsed(),
    })
}

/// Which trace triples a witness search must hit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WitnessTarget {
    /// Only (0, 0, 0).
    Zeros,
    /// Every triple except (0, 0, 0).
    Nonzeros,
    One([u64; 3]),
}

/// Primitive elements exhibited for each target triple.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WitnessReport {
    pub q: u64,
    pub n: u32,
    pub target: WitnessTarget,
    /// Number of triples that needed a witness.
    pub targets: usize,
    /// Number of those triples for which one was found.
    pub covered: usize,
    /// (traces, m) such that g^m is primitive with those traces; empty when
    /// the search was run without keeping them.
    pub witnesses: Vec<([u64; 3], u64)>,
    /// Coset representatives scanned before stopping.
    pub scanned: u64,
}

impl WitnessReport {
    pub fn complete(&self) -> bool {
        self.covered == self.targets
    }
}

/// Searches for primitive elements with the requested trace triples, stopping
/// as soon as each has one. Proves positivity without the full grid, so it is
/// not limited by the enumeration tiers. With `keep` false only the coverage
/// is recorded, which keeps memory at one bit per triple.
pub fn witness_search(ctx: &FieldCtx, target: WitnessTarget, keep: bool) -> Result<WitnessReport> {
    let s = setup(ctx, ctx.order() as u64, None)?;
    let q = ctx.q();
    let q3 = (q * q * q) as usize;
    let mut mask = vec![false; q3];
    match target {
        WitnessTarget::Zeros => mask[0] = true,
        WitnessTarget::Nonzeros => mask[1..].iter_mut().for_each(|m| *m = true),
        WitnessTarget::One(abc) => {
            if abc.iter().any(|&v| v >= q) {
                return Err(Error::InvalidInput(format!("{abc:?} not in F_{q}")));
            }
            mask[((abc[0] * q + abc[1]) * q + abc[2]) as usize] = true;
        }
    }
    // blocks of about 2^20 candidate elements bound the per-batch hit lists
    let block = ((1u64 << 20) / (q - 1)).clamp(64, 1 << 12);
    let w = kernel::witness(&s, &mask, block, keep)?;
    Ok(WitnessReport {
        q,
        n: ctx.n() as u32,
        target,
        targets: w.targets,
        covered: w.covered,
        witnesses: w
            .found
            .iter()
            .map(|&(c, m)| {
                let c = c as u64;
                ([c / (q * q), (c / q) % q, c % q], m)
            })
            .collect(),
        scanned: w.scanned,
    })
}

/// Recomputes g^m for each witness from the deterministic generator and checks
/// primitivity (gcd(m, q^n - 1) = 1) and the trace triple.
pub fn check_witnesses(ctx: &FieldCtx, report: &WitnessReport) -> Result<bool> {
    let fact = factor_qn_minus_1(ctx.q(), ctx.n() as u32)?;
    let g = ctx.find_generator(&fact)?;
    let primes = fact.primes_u128()?;
    for &(t, m) in &report.witnesses {
        if primes.iter().any(|&l| m as u128 % l == 0) {
            return Ok(false);
        }
        let x = ctx.pow(&g, m as u128);
        let x2 = ctx.square(&x);
        let x3 = ctx.mul(&x2, &x);
        if [ctx.trace(&x), ctx.trace(&x2), ctx.trace(&x3)] != t {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Grid of primitive elements (e = q^n - 1).
pub fn primitive_grid(ctx: &FieldCtx, tier: Tier) -> Result<CountReport> {
    tier.check(ctx.size())?;
    count_efree_grid(ctx, ctx.order() as u64, tier)
}

/// Primitive elements with trace triple (a, b, c).
pub fn count_primitive(ctx: &FieldCtx, abc: [u64; 3], tier: Tier) -> Result<u64> {
    primitive_grid(ctx, tier)?.cell(abc)
}

/// Primitive polynomials whose roots have trace triple (a, b, c): the element
/// count divided by n, which must be exact.
pub fn polynomial_count(ctx: &FieldCtx, abc: [u64; 3], tier: Tier) -> Result<u64> {
    divide_by_n(count_primitive(ctx, abc, tier)?, ctx.n() as u32)
}

pub fn divide_by_n(count: u64, n: u32) -> Result<u64> {
    if count % n as u64 != 0 {
        return Err(Error::DivisibilityBreach { count, n });
    }
    Ok(count / n as u64)
}

/// |q^3 N(e) from the character-sum expansion - q^3 times the direct count|
/// for every triple, indexed like the grid.
pub fn counting_identity_residuals(ctx: &FieldCtx, e: u64) -> Result<Vec<f64>> {
    if ctx.size() > DESK_BUDGET {
        return Err(Error::BudgetExceeded {
            size: ctx.size(),
            tier: "desk".into(),
            limit: DESK_BUDGET,
        });
    }
    let direct = count_efree_grid(ctx, e, Tier::Scalar)?;
    let table = CharTable::new(ctx)?;
    let rhs = Aggregator::new(&table).counting_rhs(e)?;
    let q3 = (ctx.q() as f64).powi(3);
    Ok(rhs
        .iter()
        .zip(&direct.grid)
        .map(|(r, &d)| (r - q3 * d as f64).abs())
        .collect())
}

/// Residual of the counting identity at one triple; below 0.5 when correct.
pub fn verify_counting_identity(ctx: &FieldCtx, e: u64, abc: [u64; 3]) -> Result<f64> {
    let q = ctx.q();
    if abc.iter().any(|&v| v >= q) {
        return Err(Error::InvalidInput(format!("{abc:?} not in F_{q}")));
    }
    Ok(counting_identity_residuals(ctx, e)?[((abc[0] * q + abc[1]) * q + abc[2]) as usize])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Poly;
    use crate::nt::{euler_phi, factorize_u128};
    use num_traits::ToPrimitive;

    fn ctx(p: u64, r: u32, n: usize) -> FieldCtx {
        FieldCtx::new(p, r, n).unwrap()
    }

    #[test]
    fn totals_at_q5_n2() {
        let c = ctx(5, 1, 2);
        assert_eq!(count_efree_grid(&c, 24, Tier::Scalar).unwrap().total(), 8);
        assert_eq!(count_efree_grid(&c, 1, Tier::Scalar).unwrap().total(), 24);
        assert_eq!(count_efree_grid(&c, 2, Tier::Scalar).unwrap().total(), 12);
        assert!(matches!(
            count_efree_grid(&c, 5, Tier::Scalar),
            Err(Error::NotDivisor { .. })
        ));
    }

    #[test]
    fn budget_tiers() {
        let c = ctx(5, 1, 8);
        assert!(matches!(
            count_efree_grid(&c, 1, Tier::Scalar),
            Err(Error::BudgetExceeded { .. })
        ));
        let big = ctx(7, 1, 12);
        assert!(matches!(
            count_efree_grid(&big, 1, Tier::Parallel),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn totals_are_totients() {
        for (p, r, n) in [(5, 1, 3), (7, 1, 3), (5, 2, 2), (11, 1, 2), (5, 1, 5)] {
            let c = ctx(p, r, n);
            let m = c.order();
            let phi = euler_phi(&factorize_u128(m).unwrap()).to_u64().unwrap();
            for tier in [Tier::Scalar, Tier::Parallel] {
                assert_eq!(count_efree_grid(&c, m as u64, tier).unwrap().total(), phi);
            }
        }
    }

    #[test]
    fn scalar_and_coset_agree() {
        for (p, r, n) in [(5, 1, 2), (5, 1, 3), (5, 1, 4), (5, 1, 5), (7, 1, 3), (5, 2, 2), (5, 2, 3), (13, 1, 2)] {
            let c = ctx(p, r, n);
            let m = c.order() as u64;
            let fact = factorize_u128(m as u128).unwrap();
            let primes: Vec<u64> = fact.primes_u128().unwrap().iter().map(|&l| l as u64).collect();
            // every squarefree e
            for mask in 0..(1u32 << primes.len()) {
                let e: u64 = primes.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, l)| l).product();
                let a = count_efree_grid(&c, e, Tier::Scalar).unwrap();
                let b = count_efree_grid(&c, e, Tier::Parallel).unwrap();
                assert_eq!(a.grid, b.grid, "q = {}, n = {n}, e = {e}", c.q());
            }
        }
    }

    #[test]
    fn scalar_and_coset_agree_up_to_5_7() {
        for n in [6, 7] {
            let c = ctx(5, 1, n);
            let m = c.order() as u64;
            let a = count_efree_grid(&c, m, Tier::Scalar).unwrap();
            let b = count_efree_grid(&c, m, Tier::Parallel).unwrap();
            assert_eq!(a.grid, b.grid);
        }
    }

    #[test]
    fn frobenius_shift_preserves_grid() {
        for n in 2..=4 {
            let c = ctx(5, 1, n);
            let m = c.order() as u64;
            let fact = factor_qn_minus_1(5, n as u32).unwrap();
            let g = c.find_generator(&fact).unwrap();
            let gq = c.frobenius(&g);
            let a = count_efree_grid(&c, m, Tier::Scalar).unwrap();
            let b = count_efree_grid_with(&c, m, gq).unwrap();
            assert_eq!(a.grid, b.grid);
        }
    }

    #[test]
    fn marginal_over_b_c_matches_single_trace_filter() {
        let c = ctx(5, 1, 3);
        let m = c.order() as u64;
        let grid = count_efree_grid(&c, m, Tier::Scalar).unwrap();
        let fact = factor_qn_minus_1(5, 3).unwrap();
        for a in 0..5 {
            let marginal: u64 = grid.triples().filter(|(t, _)| t[0] == a).map(|(_, v)| v).sum();
            let direct = c
                .elements()
                .skip(1)
                .filter(|x| c.trace(x) == a && c.is_primitive(x, &fact).unwrap())
                .count() as u64;
            assert_eq!(marginal, direct);
        }
    }

    #[test]
    fn primitive_quadratics_over_f5() {
        // monic quadratics x^2 + u x + v whose root has order 24
        let c = ctx(5, 1, 2);
        let base = c.base();
        let mut brute = 0;
        for u in 0..5 {
            for v in 0..5 {
                let f = Poly::new(vec![v, u, 1]);
                if !crate::field::is_irreducible(&f, base).unwrap() {
                    continue;
                }
                let fc = FieldCtx::from_modulus(base.clone(), f).unwrap();
                let x = fc.x();
                let order = (1..=24u128).find(|&k| fc.pow(&x, k) == fc.one()).unwrap();
                if order == 24 {
                    brute += 1;
                }
            }
        }
        assert_eq!(brute, 4);
        let grid = primitive_grid(&c, Tier::Scalar).unwrap();
        let total: u64 = grid.triples().map(|(t, _)| polynomial_count(&c, t, Tier::Scalar).unwrap()).sum();
        assert_eq!(total, 4);
    }

    #[test]
    fn divisibility_breach_is_reported() {
        assert!(matches!(divide_by_n(7, 2), Err(Error::DivisibilityBreach { count: 7, n: 2 })));
        assert_eq!(divide_by_n(12, 3).unwrap(), 4);
    }

    #[test]
    fn counting_identity_examples() {
        let c = ctx(5, 1, 2);
        assert!(verify_counting_identity(&c, 6, [0, 0, 0]).unwrap() < 0.5);
        assert!(counting_identity_residuals(&c, 2).unwrap().iter().all(|&r| r < 0.5));
        let c7 = ctx(7, 1, 2);
        assert!(verify_counting_identity(&c7, 6, [1, 2, 3]).unwrap() < 0.5);
    }

    #[test]
    fn counting_identity_every_radical_divisor() {
        for n in [2, 3] {
            let c = ctx(5, 1, n);
            let m = c.order();
            let primes: Vec<u64> = factorize_u128(m).unwrap().primes_u128().unwrap().iter().map(|&l| l as u64).collect();
            for mask in 0..(1u32 << primes.len()) {
                let e: u64 = primes.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, l)| l).product();
                let res = counting_identity_residuals(&c, e).unwrap();
                assert!(res.iter().all(|&r| r < 0.5), "n = {n}, e = {e}");
            }
        }
    }

    #[test]
    fn json_is_deterministic_and_has_conventions() {
        let c = ctx(5, 1, 2);
        let a = count_efree_grid(&c, 24, Tier::Scalar).unwrap().to_json().unwrap();
        let b = count_efree_grid(&c, 24, Tier::Parallel).unwrap().to_json().unwrap();
        assert_eq!(a["cells"], b["cells"]);
        assert_eq!(a["total"], 8);
        let cell = &a["cells"][(1 * 25 + 2 * 5 + 3) as usize];
        assert_eq!(cell["traces"], serde_json::json!([1, 2, 3]));
        // f2 = (1 - 2)/2 = 2, f3 = (1 - 6 + 6)/6 = 1 in F_5
        assert_eq!(cell["signed"], serde_json::json!([1, 2, 1]));
        assert_eq!(cell["unsigned"], serde_json::json!([4, 2, 4]));
    }

    #[test]
    fn witnesses_agree_with_full_grids() {
        for (p, r, n) in [(5, 1, 3), (5, 1, 4), (7, 1, 3), (5, 2, 2), (5, 1, 6), (7, 1, 4)] {
            let c = ctx(p, r, n);
            let grid = primitive_grid(&c, Tier::Parallel).unwrap();
            for target in [WitnessTarget::Zeros, WitnessTarget::Nonzeros] {
                let w = witness_search(&c, target, true).unwrap();
                let cells: Vec<usize> = match target {
                    WitnessTarget::Zeros => vec![0],
                    _ => (1..grid.grid.len()).collect(),
                };
                let positive = cells.iter().filter(|&&i| grid.grid[i] > 0).count();
                assert_eq!(w.targets, cells.len());
                assert_eq!(w.covered, w.witnesses.len());
                assert_eq!(w.witnesses.len(), positive, "{p}^{r}, n = {n}, {target:?}");
                assert!(check_witnesses(&c, &w).unwrap());
            }
        }
    }

    #[test]
    fn witness_for_a_single_triple() {
        let c = ctx(5, 1, 5);
        let w = witness_search(&c, WitnessTarget::One([1, 2, 3]), true).unwrap();
        assert!(w.complete());
        assert_eq!(w.witnesses[0].0, [1, 2, 3]);
        assert!(check_witnesses(&c, &w).unwrap());
        assert!(witness_search(&c, WitnessTarget::One([5, 0, 0]), false).is_err());
    }

    #[test]
    fn tampered_witness_is_rejected() {
        let c = ctx(5, 1, 6);
        let mut w = witness_search(&c, WitnessTarget::Nonzeros, true).unwrap();
        assert!(w.complete());
        w.witnesses[0].1 += 1;
        assert!(!check_witnesses(&c, &w).unwrap());
    }
}
