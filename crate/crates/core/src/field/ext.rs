//! The extension F_{q^n} = F_q[x]/(T).

use super::base::{check_char, BaseField};
use super::poly::{self, Poly};
use crate::nt::Factorization;
use crate::{Error, Result};
use num_bigint::BigUint;
use serde::Serialize;

/// Coordinates in the basis 1, x, ..., x^{n-1}, each an F_q index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FieldElem {
    coeffs: Vec<u64>,
}

impl FieldElem {
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Some(c) when the element lies in F_q.
    pub fn as_base(&self) -> Option<u64> {
        self.coeffs[1..].iter().all(|&c| c == 0).then(|| self.coeffs[0])
    }
}

#[derive(Clone, Debug)]
pub struct FieldCtx {
    base: BaseField,
    n: usize,
    modulus: Poly,
    /// Row i holds x^{iq} mod T.
    frob: Vec<Vec<u64>>,
    /// Tr(x^i) for i < n.
    trace_vec: Vec<u64>,
    size: u128,
}

impl FieldCtx {
    /// F_{p^{rn}} with lexicographically least moduli at both levels.
    pub fn new(p: u64, r: u32, n: usize) -> Result<Self> {
        Self::with_seed(p, r, n, None)
    }

    /// As [`FieldCtx::new`], but `seed = Some(k)` selects the (k+1)-th
    /// monic irreducible of degree n in lexicographic order.
    pub fn with_seed(p: u64, r: u32, n: usize, seed: Option<u64>) -> Result<Self> {
        check_char(p)?;
        if n == 0 || r == 0 {
            return Err(Error::InvalidInput("degrees must be positive".into()));
        }
        let q = p.checked_pow(r).ok_or(Error::SizeOverBudget { p, degree: r })?;
        size_of(q, n).ok_or(Error::SizeOverBudget {
            p,
            degree: r * n as u32,
        })?;
        let base = BaseField::new(p, r)?;
        let skip = seed.unwrap_or(0) as usize;
        let modulus = poly::lex_irreducibles(&base, n, skip)
            .next()
            .ok_or_else(|| Error::InvalidInput(format!("fewer than {} irreducibles", skip + 1)))?;
        Self::from_modulus(base, modulus)
    }

    /// Uses a caller-supplied monic irreducible of degree n as T.
    pub fn from_modulus(base: BaseField, modulus: Poly) -> Result<Self> {
        if !poly::is_irreducible(&modulus, &base)? {
            return Err(Error::InvalidInput(format!("{modulus} is reducible")));
        }
        let n = modulus.degree().unwrap();
        let size = size_of(base.q(), n).ok_or(Error::SizeOverBudget {
            p: base.p(),
            degree: base.r() * n as u32,
        })?;
        let mut ctx = FieldCtx {
            base,
            n,
            modulus,
            frob: Vec::new(),
            trace_vec: Vec::new(),
            size,
        };
        let xq = ctx.pow(&ctx.x(), ctx.base.q() as u128);
        let mut row = ctx.one();
        for _ in 0..n {
            ctx.frob.push(row.coeffs.clone());
            row = ctx.mul(&row, &xq);
        }
        let mut tv = Vec::with_capacity(n);
        for i in 0..n {
            let mut e = ctx.zero();
            e.coeffs[i] = 1;
            let t = ctx.trace_literal(&e);
            tv.push(t.as_base().ok_or_else(|| {
                Error::Internal(format!("Tr(x^{i}) is not in the base field"))
            })?);
        }
        ctx.trace_vec = tv;
        Ok(ctx)
    }

    pub fn base(&self) -> &BaseField {
        &self.base
    }

    pub fn p(&self) -> u64 {
        self.base.p()
    }

    pub fn q(&self) -> u64 {
        self.base.q()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    /// q^n.
    pub fn size(&self) -> u128 {
        self.size
    }

    /// q^n - 1.
    pub fn order(&self) -> u128 {
        self.size - 1
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem {
            coeffs: vec![0; self.n],
        }
    }

    pub fn one(&self) -> FieldElem {
        self.from_base(1)
    }

    pub fn from_base(&self, c: u64) -> FieldElem {
        let mut e = self.zero();
        e.coeffs[0] = c;
        e
    }

    /// The class of x, a root of T.
    pub fn x(&self) -> FieldElem {
        self.from_poly(&Poly::x())
    }

    pub fn from_poly(&self, p: &Poly) -> FieldElem {
        let r = poly::rem(&self.base, p, &self.modulus).expect("modulus is nonzero");
        FieldElem {
            coeffs: (0..self.n).map(|i| r.coeff(i)).collect(),
        }
    }

    pub fn from_coeffs(&self, coeffs: Vec<u64>) -> Result<FieldElem> {
        if coeffs.len() != self.n || coeffs.iter().any(|&c| c >= self.q()) {
            return Err(Error::InvalidInput("malformed element coordinates".into()));
        }
        Ok(FieldElem { coeffs })
    }

    /// Integer encoding sum c_i q^i, a bijection onto [0, q^n).
    pub fn index(&self, x: &FieldElem) -> u128 {
        x.coeffs
            .iter()
            .rev()
            .fold(0u128, |acc, &c| acc * self.q() as u128 + c as u128)
    }

    pub fn from_index(&self, mut idx: u128) -> FieldElem {
        let q = self.q() as u128;
        FieldElem {
            coeffs: (0..self.n)
                .map(|_| {
                    let c = (idx % q) as u64;
                    idx /= q;
                    c
                })
                .collect(),
        }
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        FieldElem {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| self.base.add(x, y))
                .collect(),
        }
    }

    pub fn neg(&self, a: &FieldElem) -> FieldElem {
        FieldElem {
            coeffs: a.coeffs.iter().map(|&x| self.base.neg(x)).collect(),
        }
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &FieldElem, c: u64) -> FieldElem {
        FieldElem {
            coeffs: a.coeffs.iter().map(|&x| self.base.mul(x, c)).collect(),
        }
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let f = &self.base;
        let n = self.n;
        let mut prod = vec![0u64; 2 * n - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                if y != 0 {
                    prod[i + j] = f.add(prod[i + j], f.mul(x, y));
                }
            }
        }
        let t = self.modulus.coeffs();
        for k in (n..2 * n - 1).rev() {
            let c = prod[k];
            if c != 0 {
                for i in 0..n {
                    prod[k - n + i] = f.sub(prod[k - n + i], f.mul(c, t[i]));
                }
            }
        }
        prod.truncate(n);
        FieldElem { coeffs: prod }
    }

    pub fn square(&self, a: &FieldElem) -> FieldElem {
        self.mul(a, a)
    }

    pub fn pow(&self, a: &FieldElem, mut e: u128) -> FieldElem {
        let mut acc = self.one();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.square(&b);
            e >>= 1;
        }
        acc
    }

    pub fn pow_big(&self, a: &FieldElem, e: &BigUint) -> FieldElem {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.square(&acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    pub fn inv(&self, a: &FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            return Err(Error::ZeroElement);
        }
        Ok(self.pow(a, self.size - 2))
    }

    /// x -> x^q, applied as an F_q-linear map.
    pub fn frobenius(&self, a: &FieldElem) -> FieldElem {
        let f = &self.base;
        let mut out = vec![0u64; self.n];
        for (i, &c) in a.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (o, &m) in out.iter_mut().zip(&self.frob[i]) {
                *o = f.add(*o, f.mul(c, m));
            }
        }
        FieldElem { coeffs: out }
    }

    /// x -> x^{q^k}.
    pub fn frobenius_pow(&self, a: &FieldElem, k: usize) -> FieldElem {
        (0..k % self.n).fold(a.clone(), |acc, _| self.frobenius(&acc))
    }

    fn trace_literal(&self, a: &FieldElem) -> FieldElem {
        let mut acc = a.clone();
        let mut y = a.clone();
        for _ in 1..self.n {
            y = self.frobenius(&y);
            acc = self.add(&acc, &y);
        }
        acc
    }

    /// Tr(x) via the precomputed linear functional.
    pub fn trace(&self, a: &FieldElem) -> u64 {
        let f = &self.base;
        a.coeffs
            .iter()
            .zip(&self.trace_vec)
            .fold(0, |acc, (&c, &t)| f.add(acc, f.mul(c, t)))
    }

    /// Tr(x^j) = sum over i < n of (x^j)^{q^i}, summed literally.
    pub fn trace_power(&self, a: &FieldElem, j: u128) -> Result<u64> {
        let t = self.trace_literal(&self.pow(a, j));
        t.as_base()
            .ok_or_else(|| Error::Internal("trace left the base field".into()))
    }

    /// Whether x^m = 1.
    pub fn element_order_divides(&self, a: &FieldElem, m: &BigUint) -> Result<bool> {
        if a.is_zero() {
            return Err(Error::ZeroElement);
        }
        Ok(self.pow_big(a, m) == self.one())
    }

    /// x generates F_{q^n}* iff x^{(q^n-1)/l} != 1 for every prime l of q^n - 1.
    pub fn is_primitive(&self, a: &FieldElem, fact: &Factorization) -> Result<bool> {
        if a.is_zero() {
            return Err(Error::ZeroElement);
        }
        let m = BigUint::from(self.order());
        if fact.value() != &m {
            return Err(Error::InvalidInput(format!(
                "factorization is of {} rather than {m}",
                fact.value()
            )));
        }
        for l in fact.primes() {
            if self.pow_big(a, &(&m / l)) == self.one() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The least-index primitive element.
    pub fn find_generator(&self, fact: &Factorization) -> Result<FieldElem> {
        for idx in 1..self.size {
            let x = self.from_index(idx);
            if self.is_primitive(&x, fact)? {
                return Ok(x);
            }
        }
        Err(Error::Internal("no primitive element".into()))
    }

    /// Minimal polynomial of x over F_q: the product of X - y over the
    /// distinct Frobenius conjugates y of x.
    pub fn poly_of_element(&self, a: &FieldElem) -> Result<Poly> {
        let mut orbit = vec![a.clone()];
        loop {
            let next = self.frobenius(orbit.last().unwrap());
            if &next == a {
                break;
            }
            if orbit.len() > self.n {
                return Err(Error::Internal("Frobenius orbit longer than n".into()));
            }
            orbit.push(next);
        }
        // coefficients in F_{q^n}, ascending
        let mut acc = vec![self.one()];
        for y in &orbit {
            let ny = self.neg(y);
            let mut next = vec![self.zero(); acc.len() + 1];
            for (i, c) in acc.iter().enumerate() {
                next[i + 1] = self.add(&next[i + 1], c);
                next[i] = self.add(&next[i], &self.mul(c, &ny));
            }
            acc = next;
        }
        let coeffs = acc
            .iter()
            .map(|c| {
                c.as_base()
                    .ok_or_else(|| Error::Internal("minimal polynomial left F_q".into()))
            })
            .collect::<Result<Vec<u64>>>()?;
        Ok(Poly::new(coeffs))
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.size).map(|i| self.from_index(i))
    }
}

fn size_of(q: u64, n: usize) -> Option<u128> {
    (q as u128).checked_pow(n as u32).filter(|&s| s < u128::MAX / 2)
}

/// Convenience: q^n - 1 as a BigUint.
pub fn order_big(ctx: &FieldCtx) -> BigUint {
    BigUint::from(ctx.order())
}
