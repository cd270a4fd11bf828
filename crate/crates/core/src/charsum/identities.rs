//! Reductions of the partial sums over (e1, e2, e3) to a few representatives.
//!
//! Each reduction substitutes xi -> u xi for u in F_q* and collects the factor
//! chi(u^{-1}) together with a shift of the additive character. Both sides are
//! returned so callers can compare them numerically.

use super::sums::s_sum;
use super::table::{CharTable, Character};
use crate::{Error, Result};
use num_complex::Complex64;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Reduction {
    /// sum over e1 only.
    E1,
    /// sum over e2 via a quadratic nonresidue.
    E2,
    /// sum over e1, e2.
    E1E2,
    /// sum over e3 when q = 2 mod 3.
    E3Bijective,
    /// sum over e3 via a cubic nonresidue when q = 1 mod 3.
    E3Cubic,
    /// sum over e1, e3.
    E1E3,
    /// sum over e2, e3.
    E2E3,
    /// sum over e1, e2, e3.
    E1E2E3,
}

impl Reduction {
    pub const ALL: [Reduction; 8] = [
        Reduction::E1,
        Reduction::E2,
        Reduction::E1E2,
        Reduction::E3Bijective,
        Reduction::E3Cubic,
        Reduction::E1E3,
        Reduction::E2E3,
        Reduction::E1E2E3,
    ];

    /// Whether the reduction applies to F_q.
    pub fn applies(self, q: u64) -> bool {
        match self {
            Reduction::E3Bijective => q % 3 == 2,
            Reduction::E3Cubic => q % 3 == 1,
            _ => true,
        }
    }
}

struct Ctx<'a> {
    t: &'a CharTable,
    ch: Character,
    abc: [u64; 3],
}

impl Ctx<'_> {
    fn s(&self, e: [u64; 3]) -> Result<Complex64> {
        s_sum(self.t, self.ch, e, self.abc)
    }

    fn chi_inv(&self, u: u64) -> Result<Complex64> {
        let f = self.t.ctx().base();
        Ok(self.t.chi(self.ch, &self.t.ctx().from_base(f.inv(u)?)))
    }

    /// psi(-sum_k (u^k - 1) v_k) with v indexed by the power k = 1, 2, 3.
    fn shift(&self, u: u64, v: [u64; 3]) -> Complex64 {
        let f = self.t.ctx().base();
        let mut arg = 0;
        for (k, &vk) in v.iter().enumerate() {
            let uk = f.sub(f.pow(u, k as u128 + 1), 1);
            arg = f.add(arg, f.mul(uk, vk));
        }
        self.t.psi(f.neg(arg))
    }
}

/// Left and right sides of one reduction.
pub fn reduction_sides(
    red: Reduction,
    t: &CharTable,
    ch: Character,
    abc: [u64; 3],
) -> Result<(Complex64, Complex64)> {
    let q = t.q();
    if !red.applies(q) {
        return Err(Error::InvalidInput(format!("{red:?} needs another residue of q mod 3")));
    }
    let f = t.ctx().base();
    let c = Ctx { t, ch, abc };
    let [a, b, cc] = abc;
    let units: Vec<u64> = (1..q).collect();
    // a nonresidue of every order dividing q - 1
    let alpha = f.generator();
    let mut lhs = Complex64::new(0.0, 0.0);
    let mut rhs = Complex64::new(0.0, 0.0);
    match red {
        Reduction::E1 => {
            for &u in &units {
                lhs += c.s([u, 0, 0])?;
                rhs += c.chi_inv(u)? * c.shift(u, [a, 0, 0]);
            }
            rhs *= c.s([1, 0, 0])?;
        }
        Reduction::E2 | Reduction::E3Cubic => {
            let (k, slot) = if red == Reduction::E2 { (2, 1) } else { (3, 2) };
            for &u in &units {
                let mut e = [0; 3];
                e[slot] = u;
                lhs += c.s(e)?;
            }
            for i in 0..k {
                let ai = f.pow(alpha, i as u128);
                let mut rep = [0; 3];
                rep[slot] = ai;
                let s_rep = c.s(rep)?;
                for &u in &units {
                    let mut v = [0; 3];
                    v[slot] = f.mul(ai, abc[slot]);
                    rhs += c.chi_inv(u)? * c.shift(u, v) * s_rep;
                }
            }
            rhs /= k as f64;
        }
        Reduction::E3Bijective => {
            for &u in &units {
                lhs += c.s([0, 0, u])?;
                rhs += c.chi_inv(u)? * c.shift(u, [0, 0, cc]);
            }
            rhs *= c.s([0, 0, 1])?;
        }
        Reduction::E1E2 | Reduction::E1E3 => {
            let slot = if red == Reduction::E1E2 { 1 } else { 2 };
            for &u in &units {
                for &w in &units {
                    let mut e = [u, 0, 0];
                    e[slot] = w;
                    lhs += c.s(e)?;
                }
            }
            for &e in &units {
                let mut rep = [1, 0, 0];
                rep[slot] = e;
                let s_rep = c.s(rep)?;
                for &u in &units {
                    let mut v = [a, 0, 0];
                    v[slot] = f.mul(e, abc[slot]);
                    rhs += c.chi_inv(u)? * c.shift(u, v) * s_rep;
                }
            }
        }
        Reduction::E2E3 => {
            for &u in &units {
                for &w in &units {
                    lhs += c.s([0, u, w])?;
                }
            }
            for i in 0..2 {
                let ai = f.pow(alpha, i);
                for &e in &units {
                    let s_rep = c.s([0, ai, e])?;
                    for &u in &units {
                        let v = [0, f.mul(ai, b), f.mul(e, cc)];
                        rhs += c.chi_inv(u)? * c.shift(u, v) * s_rep;
                    }
                }
            }
            rhs /= 2.0;
        }
        Reduction::E1E2E3 => {
            for &u in &units {
                for &v in &units {
                    for &w in &units {
                        lhs += c.s([u, v, w])?;
                    }
                }
            }
            for &e in &units {
                for &g in &units {
                    let s_rep = c.s([1, e, g])?;
                    for &u in &units {
                        let v = [a, f.mul(e, b), f.mul(g, cc)];
                        rhs += c.chi_inv(u)? * c.shift(u, v) * s_rep;
                    }
                }
            }
        }
    }
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldCtx;

    fn check_field(p: u64, r: u32, n: usize) {
        let ctx = FieldCtx::new(p, r, n).unwrap();
        let t = CharTable::new(&ctx).unwrap();
        let q = t.q();
        let mut chars = vec![Character { order: 1, index: 0 }];
        for d in t.squarefree_orders().into_iter().filter(|&d| d > 1) {
            chars.extend(t.characters_of_order(d).unwrap());
        }
        for red in Reduction::ALL.into_iter().filter(|r| r.applies(q)) {
            for &ch in &chars {
                for abc in [[0, 0, 0], [1, 2, 3], [2, 0, 1], [0, 1, 0]] {
                    let abc = abc.map(|v| v % q);
                    let (l, r) = reduction_sides(red, &t, ch, abc).unwrap();
                    let tol = 1e-6 * (q as f64).powi(4) * t.order() as f64;
                    assert!((l - r).norm() < tol, "{red:?} {ch:?} {abc:?}: {l} vs {r}");
                }
            }
        }
    }

    #[test]
    fn reductions_at_q5() {
        check_field(5, 1, 2);
    }

    #[test]
    fn reductions_at_q7() {
        check_field(7, 1, 2);
    }

    #[test]
    fn wrong_residue_rejected() {
        let ctx = FieldCtx::new(7, 1, 2).unwrap();
        let t = CharTable::new(&ctx).unwrap();
        let ch = Character { order: 1, index: 0 };
        assert!(reduction_sides(Reduction::E3Bijective, &t, ch, [0, 0, 1]).is_err());
    }
}
