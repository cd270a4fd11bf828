//! Dense univariate polynomials over F_q.

use super::base::BaseField;
use crate::{Error, Result};
use serde::Serialize;

/// Coefficients in ascending degree order with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Poly {
    coeffs: Vec<u64>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![1] }
    }

    pub fn x() -> Self {
        Poly { coeffs: vec![0, 1] }
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Coefficient of x^i, zero past the degree.
    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    pub fn eval(&self, f: &BaseField, x: u64) -> u64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }
}

impl std::fmt::Display for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            terms.push(match (c, i) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}*{mono}"),
            });
        }
        write!(f, "{}", terms.join(" + "))
    }
}

pub fn add(f: &BaseField, a: &Poly, b: &Poly) -> Poly {
    let n = a.coeffs.len().max(b.coeffs.len());
    Poly::new((0..n).map(|i| f.add(a.coeff(i), b.coeff(i))).collect())
}

pub fn sub(f: &BaseField, a: &Poly, b: &Poly) -> Poly {
    let n = a.coeffs.len().max(b.coeffs.len());
    Poly::new((0..n).map(|i| f.sub(a.coeff(i), b.coeff(i))).collect())
}

pub fn mul(f: &BaseField, a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() || b.is_zero() {
        return Poly::zero();
    }
    let mut out = vec![0u64; a.coeffs.len() + b.coeffs.len() - 1];
    for (i, &x) in a.coeffs.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.coeffs.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    Poly::new(out)
}

pub fn scale(f: &BaseField, a: &Poly, c: u64) -> Poly {
    Poly::new(a.coeffs.iter().map(|&x| f.mul(x, c)).collect())
}

/// Quotient and remainder; fails on a zero divisor.
pub fn divrem(f: &BaseField, a: &Poly, b: &Poly) -> Result<(Poly, Poly)> {
    let db = b
        .degree()
        .ok_or_else(|| Error::InvalidInput("division by the zero polynomial".into()))?;
    let lead_inv = f.inv(b.coeffs[db])?;
    let mut r = a.coeffs.clone();
    if r.len() <= db {
        return Ok((Poly::zero(), a.clone()));
    }
    let mut quot = vec![0u64; r.len() - db];
    for k in (db..r.len()).rev() {
        let c = f.mul(r[k], lead_inv);
        if c == 0 {
            continue;
        }
        quot[k - db] = c;
        for i in 0..=db {
            r[k - db + i] = f.sub(r[k - db + i], f.mul(c, b.coeffs[i]));
        }
    }
    r.truncate(db);
    Ok((Poly::new(quot), Poly::new(r)))
}

pub fn rem(f: &BaseField, a: &Poly, b: &Poly) -> Result<Poly> {
    Ok(divrem(f, a, b)?.1)
}

pub fn make_monic(f: &BaseField, a: &Poly) -> Result<Poly> {
    match a.coeffs.last() {
        None => Ok(Poly::zero()),
        Some(&lead) => Ok(scale(f, a, f.inv(lead)?)),
    }
}

/// Monic greatest common divisor (zero only if both inputs are zero).
pub fn gcd(f: &BaseField, a: &Poly, b: &Poly) -> Result<Poly> {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let r = rem(f, &a, &b)?;
        a = b;
        b = r;
    }
    make_monic(f, &a)
}

/// base^e mod m.
pub fn powmod(f: &BaseField, base: &Poly, mut e: u128, m: &Poly) -> Result<Poly> {
    let mut acc = rem(f, &Poly::one(), m)?;
    let mut b = rem(f, base, m)?;
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(f, &mul(f, &acc, &b), m)?;
        }
        b = rem(f, &mul(f, &b, &b), m)?;
        e >>= 1;
    }
    Ok(acc)
}

/// True iff the monic polynomial `p` of positive degree has no nontrivial factor.
///
/// A degree-d polynomial is irreducible iff gcd(p, x^{q^i} - x) = 1 for every
/// i <= d/2, since any factor of degree i divides x^{q^i} - x.
pub fn is_irreducible(p: &Poly, f: &BaseField) -> Result<bool> {
    let d = match p.degree() {
        Some(d) if d >= 1 && p.is_monic() => d,
        _ => {
            return Err(Error::InvalidInput(format!(
                "irreducibility needs a monic polynomial of positive degree, got {p}"
            )))
        }
    };
    if d == 1 {
        return Ok(true);
    }
    if p.coeff(0) == 0 {
        return Ok(false);
    }
    let x = Poly::x();
    let mut h = x.clone();
    for _ in 1..=d / 2 {
        h = powmod(f, &h, f.q() as u128, p)?;
        let g = gcd(f, p, &sub(f, &h, &x))?;
        if g.degree() != Some(0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Monic irreducibles of a given degree in lexicographic order of
/// (c_0, c_1, ..., c_{d-1}), starting after the first `skip` of them.
///
/// For d >= 2 every candidate with c_0 = 0 is divisible by x, so that block
/// is stepped over without testing.
pub fn lex_irreducibles(f: &BaseField, degree: usize, skip: usize) -> impl Iterator<Item = Poly> + '_ {
    let q = f.q();
    let mut digits = vec![0u64; degree];
    if degree >= 2 {
        digits[0] = 1;
    }
    let mut done = degree == 0;
    std::iter::from_fn(move || {
        while !done {
            let mut coeffs = digits.clone();
            coeffs.push(1);
            let cand = Poly::new(coeffs);
            // odometer with c_{d-1} as the fastest digit
            let mut i = degree;
            loop {
                if i == 0 {
                    done = true;
                    break;
                }
                i -= 1;
                digits[i] += 1;
                if digits[i] < q {
                    break;
                }
                digits[i] = 0;
            }
            if is_irreducible(&cand, f).unwrap_or(false) {
                return Some(cand);
            }
        }
        None
    })
    .skip(skip)
}
