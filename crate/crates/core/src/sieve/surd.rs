//! Exact numbers a + b sqrt(s) with rational a, b.

use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::cmp::Ordering;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadSurd {
    pub a: BigRational,
    pub b: BigRational,
    pub s: u64,
}

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

impl QuadSurd {
    pub fn rational(a: BigRational) -> Self {
        QuadSurd { a, b: BigRational::zero(), s: 1 }
    }

    pub fn new(a: BigRational, b: BigRational, s: u64) -> Self {
        QuadSurd { a, b, s }
    }

    /// q^{k/2} for a nonnegative integer k.
    pub fn half_power(q: u64, k: u32) -> Self {
        let base = BigRational::from_integer(BigInt::from(q).pow(k / 2));
        if k % 2 == 0 {
            Self::rational(base)
        } else {
            QuadSurd { a: BigRational::zero(), b: base, s: q }
        }
    }

    fn is_rational(&self) -> bool {
        self.b.is_zero() || self.s == 1
    }

    fn normalized(&self) -> Self {
        if self.s == 1 {
            QuadSurd::rational(&self.a + &self.b)
        } else if self.b.is_zero() {
            QuadSurd::rational(self.a.clone())
        } else {
            self.clone()
        }
    }

    /// Exact sign.
    pub fn signum(&self) -> Ordering {
        let x = self.normalized();
        let sa = x.a.cmp(&BigRational::zero());
        let sb = x.b.cmp(&BigRational::zero());
        if sb == Ordering::Equal {
            return sa;
        }
        if sa == Ordering::Equal || sa == sb {
            return sb;
        }
        // opposite signs: compare a^2 with b^2 s
        let a2 = &x.a * &x.a;
        let b2s = &x.b * &x.b * rat(x.s as i64);
        match a2.cmp(&b2s) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        }
    }

    pub fn add(&self, o: &QuadSurd) -> Result<QuadSurd> {
        let (x, y) = (self.normalized(), o.normalized());
        let s = match (x.is_rational(), y.is_rational()) {
            (true, true) => 1,
            (true, false) => y.s,
            (false, true) => x.s,
            (false, false) if x.s == y.s => x.s,
            _ => return Err(Error::Internal(format!("mixed surds {} and {}", x.s, y.s))),
        };
        Ok(QuadSurd { a: &x.a + &y.a, b: &x.b + &y.b, s }.normalized())
    }

    pub fn neg(&self) -> QuadSurd {
        QuadSurd { a: -&self.a, b: -&self.b, s: self.s }
    }

    pub fn scale(&self, k: &BigRational) -> QuadSurd {
        QuadSurd { a: &self.a * k, b: &self.b * k, s: self.s }
    }

    pub fn square(&self) -> QuadSurd {
        let s = rat(self.s as i64);
        QuadSurd {
            a: &self.a * &self.a + &self.b * &self.b * s,
            b: rat(2) * &self.a * &self.b,
            s: self.s,
        }
        .normalized()
    }

    /// Exact comparison. Different surds are handled when both values are
    /// positive and one side squares to a rational.
    pub fn cmp_exact(&self, o: &QuadSurd) -> Result<Ordering> {
        if let Ok(d) = self.add(&o.neg()) {
            return Ok(d.signum());
        }
        let pos = |v: &QuadSurd| v.signum() == Ordering::Greater;
        let pure = |v: &QuadSurd| v.a.is_zero();
        if pos(self) && pos(o) && (pure(self) || pure(o)) {
            return self.square().cmp_exact(&o.square());
        }
        Err(Error::Internal("cannot compare these surds exactly".into()))
    }

    pub fn lt(&self, o: &QuadSurd) -> Result<bool> {
        Ok(self.cmp_exact(o)? == Ordering::Less)
    }

    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.a.to_f64().unwrap_or(f64::NAN) + self.b.to_f64().unwrap_or(f64::NAN) * (self.s as f64).sqrt()
    }
}

impl From<i64> for QuadSurd {
    fn from(v: i64) -> Self {
        QuadSurd::rational(rat(v))
    }
}
