//! The base field F_q, q = p^r. Elements are integer indices sum d_i p^i,
//! where d_i are the coordinates in the basis 1, y, ..., y^{r-1} of F_p[y]/(B).

use crate::nt::{factorize_u128, is_prime_u64};
use crate::{Error, Result};

/// Largest q supported when r > 1 (log/exp tables are built eagerly).
pub const MAX_TABLE_Q: u64 = 1 << 22;

#[derive(Clone, Debug)]
pub struct BaseField {
    p: u64,
    r: u32,
    q: u64,
    /// Monic defining polynomial of F_q over F_p, ascending; empty when r = 1.
    modulus: Vec<u64>,
    exp: Vec<u32>,
    log: Vec<u32>,
    generator: u64,
}

impl BaseField {
    /// The prime field F_p.
    pub fn prime(p: u64) -> Result<Self> {
        check_char(p)?;
        if p >= 1 << 32 {
            return Err(Error::SizeOverBudget { p, degree: 1 });
        }
        let mut f = BaseField {
            p,
            r: 1,
            q: p,
            modulus: Vec::new(),
            exp: Vec::new(),
            log: Vec::new(),
            generator: 0,
        };
        f.generator = f.find_generator()?;
        Ok(f)
    }

    /// F_{p^r} defined by the lexicographically least monic irreducible of degree r.
    pub fn new(p: u64, r: u32) -> Result<Self> {
        if r == 1 {
            return Self::prime(p);
        }
        check_char(p)?;
        if r == 0 {
            return Err(Error::InvalidInput("extension degree must be >= 1".into()));
        }
        let q = p
            .checked_pow(r)
            .filter(|&q| q <= MAX_TABLE_Q)
            .ok_or(Error::SizeOverBudget { p, degree: r })?;
        let fp = Self::prime(p)?;
        let modulus = super::poly::lex_irreducibles(&fp, r as usize, 0)
            .next()
            .ok_or_else(|| Error::Internal("no irreducible found".into()))?
            .coeffs()
            .to_vec();
        Self::with_modulus(p, r, q, modulus)
    }

    fn with_modulus(p: u64, r: u32, q: u64, modulus: Vec<u64>) -> Result<Self> {
        let mut f = BaseField {
            p,
            r,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
            generator: 0,
        };
        let g = f.find_generator()?;
        let n = (q - 1) as usize;
        let mut exp = vec![0u32; n];
        let mut log = vec![0u32; q as usize];
        let mut x = 1u64;
        for (i, slot) in exp.iter_mut().enumerate() {
            *slot = x as u32;
            log[x as usize] = i as u32;
            x = f.poly_mul(x, g);
        }
        if x != 1 {
            return Err(Error::Internal("generator of F_q* has wrong order".into()));
        }
        f.exp = exp;
        f.log = log;
        f.generator = g;
        Ok(f)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// A fixed generator of F_q*.
    pub fn generator(&self) -> u64 {
        self.generator
    }

    /// Discrete log to the base `generator()`; None for 0.
    pub fn log(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        if self.r == 1 {
            // Only used off the hot path in the prime case.
            let mut x = 1u64;
            for i in 0..self.q - 1 {
                if x == a {
                    return Some(i);
                }
                x = self.mul(x, self.generator);
            }
            return None;
        }
        Some(self.log[a as usize] as u64)
    }

    /// Image of an integer under Z -> F_p -> F_q.
    pub fn from_int(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    fn digits(&self, mut a: u64) -> impl Iterator<Item = u64> + '_ {
        (0..self.r).map(move |_| {
            let d = a % self.p;
            a /= self.p;
            d
        })
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        if self.r == 1 {
            let s = a + b;
            return if s >= self.p { s - self.p } else { s };
        }
        let (mut a, mut b, mut out, mut w) = (a, b, 0, 1);
        for _ in 0..self.r {
            out += ((a % self.p + b % self.p) % self.p) * w;
            a /= self.p;
            b /= self.p;
            w *= self.p;
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if self.r == 1 {
            return if a == 0 { 0 } else { self.p - a };
        }
        let (mut a, mut out, mut w) = (a, 0, 1);
        for _ in 0..self.r {
            out += ((self.p - a % self.p) % self.p) * w;
            a /= self.p;
            w *= self.p;
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if self.r == 1 {
            return a * b % self.p;
        }
        if a == 0 || b == 0 {
            return 0;
        }
        let s = self.log[a as usize] as u64 + self.log[b as usize] as u64;
        self.exp[(s % (self.q - 1)) as usize] as u64
    }

    pub fn pow(&self, a: u64, mut e: u128) -> u64 {
        let mut acc = 1;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::ZeroElement);
        }
        Ok(self.pow(a, (self.q - 2) as u128))
    }

    pub fn div(&self, a: u64, b: u64) -> Result<u64> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Absolute trace F_q -> F_p.
    pub fn abs_trace(&self, a: u64) -> u64 {
        let mut acc = 0;
        let mut x = a;
        for _ in 0..self.r {
            acc = self.add(acc, x);
            x = self.pow(x, self.p as u128);
        }
        debug_assert!(acc < self.p);
        acc
    }

    /// Multiplication of two polynomial-basis indices modulo the defining polynomial.
    fn poly_mul(&self, a: u64, b: u64) -> u64 {
        let p = self.p;
        let r = self.r as usize;
        let da: Vec<u64> = self.digits(a).collect();
        let db: Vec<u64> = self.digits(b).collect();
        let mut prod = vec![0u64; 2 * r - 1];
        for i in 0..r {
            for j in 0..r {
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
            }
        }
        for k in (r..2 * r - 1).rev() {
            let c = prod[k];
            if c != 0 {
                for i in 0..r {
                    prod[k - r + i] = (prod[k - r + i] + (p - c) * self.modulus[i]) % p;
                }
            }
            prod[k] = 0;
        }
        prod[..r].iter().rev().fold(0, |acc, &d| acc * p + d)
    }

    fn find_generator(&self) -> Result<u64> {
        let order = self.q - 1;
        let primes = factorize_u128(order as u128)?.primes_u128()?;
        let pw = |mut b: u64, mut e: u64| {
            let mut acc = 1;
            while e > 0 {
                if e & 1 == 1 {
                    acc = if self.r == 1 { acc * b % self.p } else { self.poly_mul(acc, b) };
                }
                b = if self.r == 1 { b * b % self.p } else { self.poly_mul(b, b) };
                e >>= 1;
            }
            acc
        };
        (2..self.q)
            .find(|&g| primes.iter().all(|&l| pw(g, order / l as u64) != 1))
            .ok_or_else(|| Error::Internal("F_q* has no generator".into()))
    }
}

pub(crate) fn check_char(p: u64) -> Result<()> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    if p < 5 {
        return Err(Error::CharacteristicTooSmall(p));
    }
    Ok(())
}
