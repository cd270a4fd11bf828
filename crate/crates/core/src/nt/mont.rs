//! Montgomery arithmetic modulo an odd u128.

const MASK: u128 = u64::MAX as u128;

/// Full 256-bit product of two u128 values as (hi, lo).
#[inline]
pub(crate) fn mul_wide(a: u128, b: u128) -> (u128, u128) {
    let (a1, a0) = (a >> 64, a & MASK);
    let (b1, b0) = (b >> 64, b & MASK);
    let p00 = a0 * b0;
    let p01 = a0 * b1;
    let p10 = a1 * b0;
    let p11 = a1 * b1;
    let mid = (p00 >> 64) + (p01 & MASK) + (p10 & MASK);
    let lo = (p00 & MASK) | (mid << 64);
    let hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
    (hi, lo)
}

#[inline]
pub(crate) fn add_mod(a: u128, b: u128, m: u128) -> u128 {
    let (s, o) = a.overflowing_add(b);
    if o || s >= m {
        s.wrapping_sub(m)
    } else {
        s
    }
}

#[inline]
pub(crate) fn sub_mod(a: u128, b: u128, m: u128) -> u128 {
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

/// Residues are kept in Montgomery form x * 2^128 mod m.
#[derive(Clone, Debug)]
pub(crate) struct Mont {
    m: u128,
    neg_inv: u128,
    r2: u128,
}

impl Mont {
    pub fn new(m: u128) -> Self {
        assert!(m % 2 == 1 && m > 1, "Montgomery modulus must be odd and > 1");
        // Newton iteration doubles the number of correct low bits.
        let mut inv = m;
        for _ in 0..7 {
            inv = inv.wrapping_mul(2u128.wrapping_sub(m.wrapping_mul(inv)));
        }
        let r = (u128::MAX % m + 1) % m;
        let mut r2 = r;
        for _ in 0..128 {
            r2 = add_mod(r2, r2, m);
        }
        Mont { m, neg_inv: inv.wrapping_neg(), r2 }
    }

    #[inline]
    pub fn modulus(&self) -> u128 {
        self.m
    }

    #[inline]
    fn redc(&self, hi: u128, lo: u128) -> u128 {
        let u = lo.wrapping_mul(self.neg_inv);
        let (h2, l2) = mul_wide(u, self.m);
        let carry = lo.overflowing_add(l2).1 as u128;
        let (s, o1) = hi.overflowing_add(h2);
        let (s, o2) = s.overflowing_add(carry);
        if o1 || o2 || s >= self.m {
            s.wrapping_sub(self.m)
        } else {
            s
        }
    }

    #[inline]
    pub fn mul(&self, a: u128, b: u128) -> u128 {
        let (h, l) = mul_wide(a, b);
        self.redc(h, l)
    }

    pub fn to_mont(&self, a: u128) -> u128 {
        self.mul(a % self.m, self.r2)
    }

    pub fn from_mont(&self, a: u128) -> u128 {
        self.redc(0, a)
    }

    pub fn one(&self) -> u128 {
        self.to_mont(1)
    }

    pub fn pow(&self, base: u128, mut e: u128) -> u128 {
        let mut acc = self.one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }

    #[inline]
    pub fn add(&self, a: u128, b: u128) -> u128 {
        add_mod(a, b, self.m)
    }

    #[inline]
    pub fn sub(&self, a: u128, b: u128) -> u128 {
        sub_mod(a, b, self.m)
    }

    /// Multiplication by 1/2, valid in Montgomery form because it is linear.
    #[inline]
    pub fn half(&self, a: u128) -> u128 {
        if a & 1 == 0 {
            a >> 1
        } else {
            (a >> 1) + (self.m >> 1) + 1
        }
    }
}

/// a * b mod m for any m > 0.
pub fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    if m % 2 == 1 && m > 1 {
        let mont = Mont::new(m);
        mont.from_mont(mont.mul(mont.to_mont(a), mont.to_mont(b)))
    } else {
        // Double-and-add, only used off the hot path.
        let (mut a, mut b, mut acc) = (a % m, b % m, 0u128);
        while b > 0 {
            if b & 1 == 1 {
                acc = add_mod(acc, a, m);
            }
            a = add_mod(a, a, m);
            b >>= 1;
        }
        acc
    }
}
