//! The sums S_{d,e1,e2,e3}(a,b,c) and T_1, ..., T_8.

use super::table::{CharTable, Character};
use crate::field::FieldElem;
use crate::{Error, Result};
use num_complex::Complex64;
use rayon::prelude::*;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Characters are aggregated in fixed-size chunks so the floating-point
/// summation order does not depend on the thread count.
const CHUNK: usize = 16;

fn check_divides(t: &CharTable, e: u64) -> Result<()> {
    if e == 0 || t.order() % e != 0 {
        return Err(Error::NotDivisor {
            d: e.to_string(),
            m: t.order().to_string(),
        });
    }
    Ok(())
}

fn mobius_phi(t: &CharTable, d: u64) -> (i32, u64) {
    let mut mu = 1;
    let mut phi = 1;
    let mut rest = d;
    for &l in t.primes() {
        if rest % l == 0 {
            rest /= l;
            mu = -mu;
            phi *= l - 1;
        }
    }
    debug_assert_eq!(rest, 1, "d must be squarefree");
    (mu, phi)
}

/// theta(e) sum_{d | e} mu(d)/phi(d) sum_{chi of order d} chi(xi): 1 if xi is e-free, else 0.
pub fn vinogradov_indicator(xi: &FieldElem, e: u64, t: &CharTable) -> Result<Complex64> {
    check_divides(t, e)?;
    let j = t.dlog(xi)?;
    let ps: Vec<u64> = t.primes().iter().copied().filter(|l| e % l == 0).collect();
    let theta: f64 = ps.iter().map(|&l| 1.0 - 1.0 / l as f64).product();
    let mut acc = ZERO;
    for d in t.squarefree_orders().into_iter().filter(|d| e % d == 0) {
        let (mu, phi) = mobius_phi(t, d);
        let inner: Complex64 = t
            .characters_of_order(d)?
            .into_iter()
            .map(|ch| t.chi_at(ch, j))
            .sum();
        acc += inner * (mu as f64 / phi as f64);
    }
    Ok(acc * theta)
}

/// S for one character: sum over xi in F_{q^n}* of
/// psi(Tr(e1 xi + e2 xi^2 + e3 xi^3) - e1 a - e2 b - e3 c) chi(xi).
pub fn s_sum(t: &CharTable, ch: Character, e: [u64; 3], abc: [u64; 3]) -> Result<Complex64> {
    check_divides(t, ch.order)?;
    let f = t.ctx().base();
    let shift = f.neg(dot(f, e, abc));
    let mut acc = ZERO;
    for j in 0..t.order() {
        let arg = f.add(dot(f, e, t.traces(j)), shift);
        acc += t.psi(arg) * t.chi_at(ch, j);
    }
    Ok(acc)
}

#[inline]
fn dot(f: &crate::field::BaseField, e: [u64; 3], x: [u64; 3]) -> u64 {
    f.add(f.add(f.mul(e[0], x[0]), f.mul(e[1], x[1])), f.mul(e[2], x[2]))
}

/// Index set of T_i: which of e1, e2, e3 range over F_q* (the others are 0).
pub fn t_index_set(i: usize) -> Result<[bool; 3]> {
    Ok(match i {
        1 => [true, false, false],
        2 => [false, true, false],
        3 => [false, false, true],
        4 => [true, true, false],
        5 => [true, false, true],
        6 => [false, true, true],
        7 => [true, true, true],
        _ => return Err(Error::InvalidInput(format!("T_{i} is not a direct sum"))),
    })
}

/// Triples (e1, e2, e3) in the index set of T_i.
pub fn t_triples(q: u64, i: usize) -> Result<Vec<[u64; 3]>> {
    let set = t_index_set(i)?;
    let range = |on: bool| if on { (1..q).collect::<Vec<u64>>() } else { vec![0] };
    let mut out = Vec::new();
    for &e1 in &range(set[0]) {
        for &e2 in &range(set[1]) {
            for &e3 in &range(set[2]) {
                out.push([e1, e2, e3]);
            }
        }
    }
    Ok(out)
}

/// T_i for i in 1..=7: the trivial-character S summed over its index set.
pub fn t_sum(i: usize, abc: [u64; 3], t: &CharTable) -> Result<Complex64> {
    let trivial = Character { order: 1, index: 0 };
    let mut acc = ZERO;
    for e in t_triples(t.q(), i)? {
        acc += s_sum(t, trivial, e, abc)?;
    }
    Ok(acc)
}

/// T_1 = 1 - q when a = 0 and 1 otherwise.
pub fn t1_closed_form(a: u64, q: u64) -> i64 {
    if a == 0 {
        1 - q as i64
    } else {
        1
    }
}

/// Aggregates of sum_{e in F_q^3} S_{chi,e}(a,b,c) for all triples at once.
///
/// Uses S_{chi,e}(a,b,c) = psi(-(e1 a + e2 b + e3 c)) S'_{chi}(e) with
/// S'_{chi}(e) = sum_xi psi(e1 t1 + e2 t2 + e3 t3) chi(xi), grouping xi by its
/// trace triple (t1, t2, t3). Both passes are evaluated one coordinate at a
/// time since psi of a sum factors.
pub struct Aggregator<'a> {
    t: &'a CharTable,
    q: usize,
    kernel: Vec<Complex64>,
    kernel_neg: Vec<Complex64>,
    cell: Vec<u32>,
}

impl<'a> Aggregator<'a> {
    pub fn new(t: &'a CharTable) -> Self {
        let f = t.ctx().base();
        let q = f.q() as usize;
        let mut kernel = vec![ZERO; q * q];
        let mut kernel_neg = vec![ZERO; q * q];
        for e in 0..q {
            for x in 0..q {
                let prod = f.mul(e as u64, x as u64);
                kernel[e * q + x] = t.psi(prod);
                kernel_neg[e * q + x] = t.psi(f.neg(prod));
            }
        }
        let cell = (0..t.order())
            .map(|j| {
                let [a, b, c] = t.traces(j);
                (a as usize * q * q + b as usize * q + c as usize) as u32
            })
            .collect();
        Aggregator {
            t,
            q,
            kernel,
            kernel_neg,
            cell,
        }
    }

    fn transform(&self, x: &[Complex64], kernel: &[Complex64]) -> Vec<Complex64> {
        let q = self.q;
        let mut cur = x.to_vec();
        for axis in 0..3 {
            let stride = q.pow(2 - axis as u32);
            let mut next = vec![ZERO; cur.len()];
            for (idx, out) in next.iter_mut().enumerate() {
                let e = (idx / stride) % q;
                let base = idx - e * stride;
                let mut s = ZERO;
                for tau in 0..q {
                    s += kernel[e * q + tau] * cur[base + tau * stride];
                }
                *out = s;
            }
            cur = next;
        }
        cur
    }

    /// S'_{chi}(e) for all e, indexed e1 q^2 + e2 q + e3.
    pub fn s_prime(&self, ch: Character) -> Vec<Complex64> {
        let mut g = vec![ZERO; self.q.pow(3)];
        for (j, &c) in self.cell.iter().enumerate() {
            g[c as usize] += self.t.chi_at(ch, j as u64);
        }
        self.transform(&g, &self.kernel)
    }

    /// sum_{e in F_q^3} S_{chi,e}(a,b,c), indexed a q^2 + b q + c.
    pub fn total_over_e(&self, ch: Character) -> Vec<Complex64> {
        self.transform(&self.s_prime(ch), &self.kernel_neg)
    }

    /// sum_d weight(d) sum_{chi of order d} sum_e S_{chi,e}(a,b,c).
    pub fn weighted(&self, weights: &[(u64, f64)]) -> Result<Vec<Complex64>> {
        let mut jobs = Vec::new();
        for &(d, w) in weights {
            for ch in self.t.characters_of_order(d)? {
                jobs.push((ch, w));
            }
        }
        let partials: Vec<Vec<Complex64>> = jobs
            .par_chunks(CHUNK)
            .map(|chunk| {
                let mut acc = vec![ZERO; self.q.pow(3)];
                for &(ch, w) in chunk {
                    for (a, v) in acc.iter_mut().zip(self.total_over_e(ch)) {
                        *a += v * w;
                    }
                }
                acc
            })
            .collect();
        let mut out = vec![ZERO; self.q.pow(3)];
        for p in partials {
            for (o, v) in out.iter_mut().zip(p) {
                *o += v;
            }
        }
        Ok(out)
    }

    /// T_8 for every triple: squarefree d > 1, weight mu(d)/phi(d).
    pub fn t8_all(&self) -> Result<Vec<Complex64>> {
        let weights: Vec<(u64, f64)> = self
            .t
            .squarefree_orders()
            .into_iter()
            .filter(|&d| d > 1)
            .map(|d| {
                let (mu, phi) = mobius_phi(self.t, d);
                (d, mu as f64 / phi as f64)
            })
            .collect();
        self.weighted(&weights)
    }

    /// Right side of the counting identity, q^3 N(e), for every triple.
    pub fn counting_rhs(&self, e: u64) -> Result<Vec<f64>> {
        check_divides(self.t, e)?;
        let ps: Vec<u64> = self.t.primes().iter().copied().filter(|l| e % l == 0).collect();
        let theta: f64 = ps.iter().map(|&l| 1.0 - 1.0 / l as f64).product();
        let weights: Vec<(u64, f64)> = self
            .t
            .squarefree_orders()
            .into_iter()
            .filter(|&d| e % d == 0)
            .map(|d| {
                let (mu, phi) = mobius_phi(self.t, d);
                (d, mu as f64 / phi as f64)
            })
            .collect();
        Ok(self.weighted(&weights)?.into_iter().map(|z| z.re * theta).collect())
    }

    /// Number of summed terms behind one T_8 value, for tolerances.
    pub fn t8_terms(&self) -> u64 {
        let chars: u64 = self
            .t
            .squarefree_orders()
            .into_iter()
            .filter(|&d| d > 1)
            .map(|d| mobius_phi(self.t, d).1)
            .sum();
        chars * (self.q as u64).pow(3) * self.t.order()
    }
}

/// T_8 for one triple.
pub fn t8_sum(abc: [u64; 3], t: &CharTable) -> Result<Complex64> {
    let q = t.q() as usize;
    let all = Aggregator::new(t).t8_all()?;
    Ok(all[abc[0] as usize * q * q + abc[1] as usize * q + abc[2] as usize])
}
