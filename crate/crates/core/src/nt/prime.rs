//! Primality: deterministic Miller-Rabin below 3.3e24, BPSW above.

use super::mont::Mont;
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use std::sync::OnceLock;

const MR_BASES: [u128; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// The first 13 prime bases are a proven witness set below this bound.
pub const MR_DETERMINISTIC_LIMIT: u128 = 3_317_044_064_679_887_385_961_981;

/// Primes below 2^16, sieved once.
pub fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| sieve(1 << 16))
}

/// Sieve of Eratosthenes up to and including `limit`.
pub fn sieve(limit: u64) -> Vec<u64> {
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

pub fn is_prime_u64(n: u64) -> bool {
    is_prime_u128(n as u128)
}

pub fn is_prime_u128(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &small_primes()[..64] {
        let p = p as u128;
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mont = Mont::new(n);
    if !MR_BASES.iter().all(|&a| strong_probable_prime(&mont, a)) {
        return false;
    }
    if n < MR_DETERMINISTIC_LIMIT {
        return true;
    }
    strong_lucas(&mont)
}

fn strong_probable_prime(mont: &Mont, a: u128) -> bool {
    let n = mont.modulus();
    let a = a % n;
    if a == 0 {
        return true;
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    let one = mont.one();
    let minus_one = mont.sub(0, one);
    let mut x = mont.pow(mont.to_mont(a), d);
    if x == one || x == minus_one {
        return true;
    }
    for _ in 1..s {
        x = mont.mul(x, x);
        if x == minus_one {
            return true;
        }
        if x == one {
            return false;
        }
    }
    false
}

fn jacobi(mut a: u128, mut n: u128) -> i32 {
    let mut t = 1;
    a %= n;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x.checked_mul(x).map_or(true, |s| s > n) {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|s| s <= n) {
        x += 1;
    }
    x
}

/// Strong Lucas test with Selfridge parameters (P = 1, Q = (1 - D)/4).
fn strong_lucas(mont: &Mont) -> bool {
    let n = mont.modulus();
    let r = isqrt(n);
    if r * r == n {
        return false;
    }
    let mut d_abs: u128 = 5;
    let mut negative = false;
    loop {
        let d_mod = if negative { n - d_abs % n } else { d_abs % n };
        match jacobi(d_mod, n) {
            -1 => break,
            0 if d_abs % n != 0 => return false,
            _ => {}
        }
        d_abs += 2;
        negative = !negative;
    }
    let to_m = |v: u128, neg: bool| {
        let v = mont.to_mont(v);
        if neg {
            mont.sub(0, v)
        } else {
            v
        }
    };
    let d = to_m(d_abs, negative);
    // Q = (1 - D) / 4 as a signed integer.
    let q = if negative {
        to_m((1 + d_abs) / 4, false)
    } else {
        to_m((d_abs - 1) / 4, true)
    };
    let p = mont.one();
    let s = (n + 1).trailing_zeros();
    let k = (n + 1) >> s;
    let (mut u, mut v, mut qk) = (mont.one(), p, q);
    let bits = 128 - k.leading_zeros();
    for i in (0..bits - 1).rev() {
        u = mont.mul(u, v);
        v = mont.sub(mont.mul(v, v), mont.add(qk, qk));
        qk = mont.mul(qk, qk);
        if (k >> i) & 1 == 1 {
            let nu = mont.half(mont.add(mont.mul(p, u), v));
            let nv = mont.half(mont.add(mont.mul(d, u), mont.mul(p, v)));
            u = nu;
            v = nv;
            qk = mont.mul(qk, q);
        }
    }
    if u == 0 || v == 0 {
        return true;
    }
    for _ in 1..s {
        v = mont.sub(mont.mul(v, v), mont.add(qk, qk));
        qk = mont.mul(qk, qk);
        if v == 0 {
            return true;
        }
    }
    false
}

/// Primality for arbitrary size. Beyond u128 this is Miller-Rabin over the
/// first 20 primes, which is adequate for the desk-scale inputs handled here.
pub fn is_prime_big(n: &BigUint) -> bool {
    if let Some(v) = n.to_u128() {
        return is_prime_u128(v);
    }
    if n.is_zero() || (n % 2u32).is_zero() {
        return false;
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'base: for &a in &small_primes()[..20] {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == nm1 {
                continue 'base;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial(n: u128) -> bool {
        if n < 2 {
            return false;
        }
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                return false;
            }
            d += 1;
        }
        true
    }

    #[test]
    fn agrees_with_trial_division_below_200k() {
        for n in 0..200_000u128 {
            assert_eq!(is_prime_u128(n), trial(n), "n = {n}");
        }
    }

    #[test]
    fn strong_pseudoprimes_are_rejected() {
        // Strong pseudoprimes to several small bases.
        for n in [
            2047u128,
            1_373_653,
            25_326_001,
            3_215_031_751,
            2_152_302_898_747,
            3_474_749_660_383,
            341_550_071_728_321,
            3_825_123_056_546_413_051,
            318_665_857_834_031_151_167_461,
        ] {
            assert!(!is_prime_u128(n), "{n}");
        }
    }

    #[test]
    fn large_known_primes() {
        // 2^89 - 1 and 2^127 - 1 are Mersenne primes; 2^107 - 1 too.
        for e in [61u32, 89, 107, 127] {
            assert!(is_prime_u128((1u128 << e) - 1), "2^{e}-1");
        }
        // 2^101 - 1 = 7432339208719 * 341117531003194129
        assert!(!is_prime_u128((1u128 << 101) - 1));
        assert!(is_prime_u128(341_117_531_003_194_129));
    }

    #[test]
    fn lucas_alone_accepts_primes_beyond_mr_range() {
        let p = (1u128 << 127) - 1;
        assert!(strong_lucas(&Mont::new(p)));
        assert!(!strong_lucas(&Mont::new((1u128 << 101) - 1)));
    }

    #[test]
    fn big_path() {
        let m = (BigUint::one() << 521u32) - 1u32;
        assert!(is_prime_big(&m));
        let c = (BigUint::one() << 523u32) - 1u32;
        assert!(!is_prime_big(&c));
    }
}
