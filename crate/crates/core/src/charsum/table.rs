//! Discrete logarithms and character values for a fixed generator.

use crate::field::{FieldCtx, FieldElem};
use crate::nt::{factor_qn_minus_1, squarefree_divisors, Factorization};
use crate::{Error, Result};
use num_complex::Complex64;
use num_integer::Integer;
use std::f64::consts::TAU;

/// Largest q^n for which a table is built.
pub const TABLE_LIMIT: u128 = 1 << 20;

/// The multiplicative character g^j -> exp(2 pi i index j / order).
/// It has exact order `order` because gcd(index, order) = 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Character {
    pub order: u64,
    pub index: u64,
}

#[derive(Clone, Debug)]
pub struct CharTable {
    ctx: FieldCtx,
    fact: Factorization,
    generator: FieldElem,
    m: u64,
    dlog: Vec<u32>,
    powers: Vec<u32>,
    traces: Vec<[u32; 3]>,
    roots: Vec<Complex64>,
    psi: Vec<Complex64>,
    primes: Vec<u64>,
}

impl CharTable {
    /// Table for the least-index generator of F_{q^n}*.
    pub fn new(ctx: &FieldCtx) -> Result<Self> {
        let fact = factor_qn_minus_1(ctx.q(), ctx.n() as u32)?;
        let g = ctx.find_generator(&fact)?;
        Self::build(ctx, fact, g)
    }

    /// Table for a caller-chosen generator.
    pub fn with_generator(ctx: &FieldCtx, g: FieldElem) -> Result<Self> {
        let fact = factor_qn_minus_1(ctx.q(), ctx.n() as u32)?;
        if !ctx.is_primitive(&g, &fact)? {
            return Err(Error::InvalidInput("element is not a generator".into()));
        }
        Self::build(ctx, fact, g)
    }

    fn build(ctx: &FieldCtx, fact: Factorization, g: FieldElem) -> Result<Self> {
        if ctx.size() > TABLE_LIMIT {
            return Err(Error::BudgetExceeded {
                size: ctx.size(),
                tier: "character table".into(),
                limit: TABLE_LIMIT,
            });
        }
        let m = ctx.order() as u64;
        let mut dlog = vec![u32::MAX; ctx.size() as usize];
        let mut powers = Vec::with_capacity(m as usize);
        let mut traces = Vec::with_capacity(m as usize);
        let mut x = ctx.one();
        for j in 0..m {
            let idx = ctx.index(&x) as usize;
            if dlog[idx] != u32::MAX {
                return Err(Error::Internal("generator has order below q^n - 1".into()));
            }
            dlog[idx] = j as u32;
            powers.push(idx as u32);
            let x2 = ctx.square(&x);
            let x3 = ctx.mul(&x2, &x);
            traces.push([ctx.trace(&x) as u32, ctx.trace(&x2) as u32, ctx.trace(&x3) as u32]);
            x = ctx.mul(&x, &g);
        }
        let roots = (0..m)
            .map(|k| Complex64::from_polar(1.0, TAU * k as f64 / m as f64))
            .collect();
        let base = ctx.base();
        let p = base.p() as f64;
        let psi = (0..base.q())
            .map(|x| Complex64::from_polar(1.0, TAU * base.abs_trace(x) as f64 / p))
            .collect();
        let primes = fact
            .primes_u128()?
            .into_iter()
            .map(|l| l as u64)
            .collect();
        Ok(CharTable {
            ctx: ctx.clone(),
            fact,
            generator: g,
            m,
            dlog,
            powers,
            traces,
            roots,
            psi,
            primes,
        })
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn q(&self) -> u64 {
        self.ctx.q()
    }

    /// q^n - 1.
    pub fn order(&self) -> u64 {
        self.m
    }

    pub fn generator(&self) -> &FieldElem {
        &self.generator
    }

    pub fn factorization(&self) -> &Factorization {
        &self.fact
    }

    /// Prime divisors of q^n - 1.
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn dlog(&self, x: &FieldElem) -> Result<u64> {
        if x.is_zero() {
            return Err(Error::ZeroElement);
        }
        Ok(self.dlog[self.ctx.index(x) as usize] as u64)
    }

    pub fn dlog_index(&self, idx: u128) -> Option<u64> {
        match self.dlog.get(idx as usize) {
            Some(&d) if d != u32::MAX => Some(d as u64),
            _ => None,
        }
    }

    /// g^j.
    pub fn power(&self, j: u64) -> FieldElem {
        self.ctx.from_index(self.powers[(j % self.m) as usize] as u128)
    }

    /// (Tr g^j, Tr g^{2j}, Tr g^{3j}).
    pub fn traces(&self, j: u64) -> [u64; 3] {
        let t = self.traces[(j % self.m) as usize];
        [t[0] as u64, t[1] as u64, t[2] as u64]
    }

    fn check_divides(&self, d: u64) -> Result<()> {
        if d == 0 || self.m % d != 0 {
            return Err(Error::NotDivisor {
                d: d.to_string(),
                m: self.m.to_string(),
            });
        }
        Ok(())
    }

    /// All divisors d of q^n - 1.
    pub fn character_orders(&self) -> Vec<u64> {
        let mut out: Vec<u64> = (1..=self.m).filter(|d| self.m % d == 0).collect();
        out.sort_unstable();
        out
    }

    /// Squarefree divisors of q^n - 1, ascending.
    pub fn squarefree_orders(&self) -> Vec<u64> {
        let ps: Vec<u128> = self.primes.iter().map(|&p| p as u128).collect();
        squarefree_divisors(&ps).into_iter().map(|d| d as u64).collect()
    }

    /// The phi(d) characters of exact order d.
    pub fn characters_of_order(&self, d: u64) -> Result<Vec<Character>> {
        self.check_divides(d)?;
        if d == 1 {
            return Ok(vec![Character { order: 1, index: 0 }]);
        }
        Ok((1..d)
            .filter(|t| t.gcd(&d) == 1)
            .map(|t| Character { order: d, index: t })
            .collect())
    }

    /// chi(g^j).
    #[inline]
    pub fn chi_at(&self, ch: Character, j: u64) -> Complex64 {
        let k = ((self.m / ch.order) as u128 * ch.index as u128 * (j % self.m) as u128 % self.m as u128) as usize;
        self.roots[k]
    }

    /// chi(x), with chi(0) = 0.
    pub fn chi(&self, ch: Character, x: &FieldElem) -> Complex64 {
        match self.dlog(x) {
            Ok(j) => self.chi_at(ch, j),
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    /// Canonical additive character of F_q.
    #[inline]
    pub fn psi(&self, x: u64) -> Complex64 {
        self.psi[x as usize]
    }

    /// exp(2 pi i k / (q^n - 1)).
    pub fn root(&self, k: u64) -> Complex64 {
        self.roots[(k % self.m) as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dlog_inverts_powers_exhaustively() {
        for (p, r, n) in [(5, 1, 6), (7, 1, 3), (5, 2, 2)] {
            let ctx = FieldCtx::new(p, r, n).unwrap();
            let t = CharTable::new(&ctx).unwrap();
            for j in 0..t.order() {
                assert_eq!(t.dlog(&t.power(j)).unwrap(), j);
            }
            assert!(matches!(t.dlog(&ctx.zero()), Err(Error::ZeroElement)));
        }
    }

    #[test]
    fn characters_have_exact_order() {
        let ctx = FieldCtx::new(5, 1, 2).unwrap();
        let t = CharTable::new(&ctx).unwrap();
        for d in t.character_orders() {
            let chars = t.characters_of_order(d).unwrap();
            let phi = (1..=d).filter(|k| k.gcd(&d) == 1).count();
            assert_eq!(chars.len(), phi);
            for ch in chars {
                let z = t.chi_at(ch, 1);
                assert!((z.powu(d as u32) - 1.0).norm() < 1e-9);
                for k in 1..d {
                    if d % k == 0 {
                        assert!((z.powu(k as u32) - 1.0).norm() > 1e-6);
                    }
                }
            }
        }
        assert!(matches!(t.characters_of_order(5), Err(Error::NotDivisor { .. })));
    }

    #[test]
    fn additive_orthogonality() {
        // sum_t psi(t x) = q if x = 0 else 0
        for (p, r) in [(5u64, 1u32), (7, 1), (5, 2)] {
            let ctx = FieldCtx::new(p, r, 2).unwrap();
            let t = CharTable::new(&ctx).unwrap();
            let f = ctx.base();
            for x in 0..f.q() {
                let s: Complex64 = (0..f.q()).map(|s| t.psi(f.mul(s, x))).sum();
                let want = if x == 0 { f.q() as f64 } else { 0.0 };
                assert!((s - want).norm() < 1e-9, "q = {} x = {x}", f.q());
            }
        }
    }
}
