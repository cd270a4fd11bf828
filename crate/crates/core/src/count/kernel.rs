//! Enumeration kernels for the trace-triple grid of e-free elements.

use crate::field::{BaseField, FieldCtx, FieldElem};
use crate::{Error, Result};
use rayon::prelude::*;

/// Everything an enumeration needs: a generator g of F_{q^n}* and the primes of e.
pub struct Setup<'a> {
    pub ctx: &'a FieldCtx,
    pub generator: FieldElem,
    /// q^n - 1.
    pub order: u64,
    /// Distinct primes dividing e.
    pub primes: Vec<u64>,
}

fn cell(q: u64, t: [u64; 3]) -> usize {
    ((t[0] * q + t[1]) * q + t[2]) as usize
}

fn trace_triple(ctx: &FieldCtx, x: &FieldElem) -> [u64; 3] {
    let x2 = ctx.square(x);
    let x3 = ctx.mul(&x2, x);
    [ctx.trace(x), ctx.trace(&x2), ctx.trace(&x3)]
}

/// One multiplication per element, traces from scratch. The reference method.
pub fn scalar(s: &Setup) -> Vec<u64> {
    let q = s.ctx.q();
    let mut grid = vec![0u64; (q * q * q) as usize];
    let mut x = s.ctx.one();
    for i in 0..s.order {
        if s.primes.iter().all(|&l| i % l != 0) {
            grid[cell(q, trace_triple(s.ctx, &x))] += 1;
        }
        x = s.ctx.mul(&x, &s.generator);
    }
    grid
}

/// Linear recurrence s_{j+n} = sum_i c_i s_{j+i} over F_q.
struct Lfsr {
    /// rows[i][x] = c_i * x.
    rows: Vec<Vec<u32>>,
}

impl Lfsr {
    /// From the minimal polynomial x^n + m_{n-1} x^{n-1} + ... + m_0 of beta.
    fn new(base: &BaseField, minpoly: &[u64]) -> Self {
        let n = minpoly.len() - 1;
        let rows = (0..n)
            .map(|i| {
                let c = base.neg(minpoly[i]);
                (0..base.q()).map(|x| base.mul(c, x) as u32).collect()
            })
            .collect();
        Lfsr { rows }
    }

    #[inline]
    fn next(&self, base: &BaseField, window: &[u32]) -> u32 {
        if base.r() == 1 {
            let mut acc = 0u64;
            for (row, &w) in self.rows.iter().zip(window) {
                acc += row[w as usize] as u64;
            }
            (acc % base.p()) as u32
        } else {
            let mut acc = 0u64;
            for (row, &w) in self.rows.iter().zip(window) {
                acc = base.add(acc, row[w as usize] as u64);
            }
            acc as u32
        }
    }
}

/// Elements are g^{j + kQ} with 0 <= j < Q = (q^n - 1)/(q - 1) and 0 <= k < q - 1.
/// Since h = g^Q lies in F_q*, Tr(g^{m(j+kQ)}) = h^{mk} Tr(g^{mj}): only the
/// traces along j are enumerated (by three linear recurrences) and the k
/// direction is applied afterwards.
struct Cosets<'a> {
    s: &'a Setup<'a>,
    big_q: u64,
    h: u64,
    /// Primes of e dividing Q: they rule out j outright.
    in_q: Vec<u64>,
    /// Product of the primes of e not dividing Q.
    l_mod: u64,
    /// allowed[j mod l_mod][k]: whether j + kQ avoids those primes.
    allowed: Vec<Vec<bool>>,
    betas: [FieldElem; 3],
    lfsrs: Vec<Lfsr>,
}

impl<'a> Cosets<'a> {
    fn new(s: &'a Setup<'a>) -> Result<Self> {
        let ctx = s.ctx;
        let q = ctx.q();
        let n = ctx.n();
        let big_q = s.order / (q - 1);
        let h = ctx
            .pow(&s.generator, big_q as u128)
            .as_base()
            .ok_or_else(|| Error::Internal("g^Q outside F_q".into()))?;
        let (in_q, off_q): (Vec<u64>, Vec<u64>) = s.primes.iter().partition(|&&l| big_q % l == 0);
        let l_mod: u64 = off_q.iter().product();
        let q_mod: Vec<u64> = off_q.iter().map(|&l| big_q % l).collect();
        let allowed = (0..l_mod)
            .map(|class| {
                (0..q - 1)
                    .map(|k| {
                        off_q
                            .iter()
                            .zip(&q_mod)
                            .all(|(&l, &qm)| (class % l + k % l * qm) % l != 0)
                    })
                    .collect()
            })
            .collect();
        let g2 = ctx.square(&s.generator);
        let g3 = ctx.mul(&g2, &s.generator);
        let betas = [s.generator.clone(), g2, g3];
        let mut lfsrs = Vec::new();
        for b in &betas {
            let m = ctx.poly_of_element(b)?;
            if m.degree() != Some(n) {
                return Err(Error::Internal("power of the generator not of degree n".into()));
            }
            lfsrs.push(Lfsr::new(ctx.base(), m.coeffs()));
        }
        Ok(Cosets { s, big_q, h, in_q, l_mod, allowed, betas, lfsrs })
    }

    /// Calls visit(j, j mod l_mod, traces) for every j in [j0, j1) not ruled out.
    fn walk(&self, j0: u64, j1: u64, mut visit: impl FnMut(u64, usize, [u64; 3])) {
        let ctx = self.s.ctx;
        let base = ctx.base();
        let n = ctx.n();
        let len = (j1 - j0) as usize;
        let mut bad = vec![false; len];
        for &l in &self.in_q {
            let mut j = j0.div_ceil(l) * l;
            while j < j1 {
                bad[(j - j0) as usize] = true;
                j += l;
            }
        }
        // windows hold every term so no shifting is needed
        let mut win: Vec<Vec<u32>> = self
            .betas
            .iter()
            .map(|beta| {
                let mut x = ctx.pow(beta, j0 as u128);
                let mut w = Vec::with_capacity(len + n);
                for _ in 0..n.min(len) {
                    w.push(ctx.trace(&x) as u32);
                    x = ctx.mul(&x, beta);
                }
                w
            })
            .collect();
        let mut class = j0 % self.l_mod;
        for i in 0..len {
            if i + n > win[0].len() {
                for (w, lf) in win.iter_mut().zip(&self.lfsrs) {
                    let next = lf.next(base, &w[w.len() - n..]);
                    w.push(next);
                }
            }
            if !bad[i] {
                visit(j0 + i as u64, class as usize, [win[0][i] as u64, win[1][i] as u64, win[2][i] as u64]);
            }
            class += 1;
            if class == self.l_mod {
                class = 0;
            }
        }
    }

    /// Multiplication tables by h^k, h^2k, h^3k.
    fn scalings(&self, k: u64) -> [Vec<u64>; 3] {
        let base = self.s.ctx.base();
        let hk = base.pow(self.h, k as u128);
        let h2k = base.mul(hk, hk);
        let h3k = base.mul(h2k, hk);
        [hk, h2k, h3k].map(|m| (0..base.q()).map(|x| base.mul(m, x)).collect())
    }
}

pub fn coset(s: &Setup, block: u64) -> Result<Vec<u64>> {
    let cs = Cosets::new(s)?;
    let q = s.ctx.q();
    let q3 = (q * q * q) as usize;
    let classes = cs.l_mod as usize;
    let blocks: Vec<u64> = (0..cs.big_q.div_ceil(block)).collect();
    let hist = blocks
        .par_iter()
        .fold(
            || vec![0u64; classes * q3],
            |mut acc, &b| {
                let j0 = b * block;
                cs.walk(j0, (j0 + block).min(cs.big_q), |_, class, t| {
                    acc[class * q3 + cell(q, t)] += 1;
                });
                acc
            },
        )
        .reduce(
            || vec![0u64; classes * q3],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );

    // spread over k: cell (t1, t2, t3) -> (h^k t1, h^2k t2, h^3k t3)
    let mut grid = vec![0u64; q3];
    let qs = q as usize;
    for k in 0..q - 1 {
        let rows = cs.scalings(k);
        for (cl, ks) in cs.allowed.iter().enumerate() {
            if !ks[k as usize] {
                continue;
            }
            let src = &hist[cl * q3..(cl + 1) * q3];
            for (c, &v) in src.iter().enumerate() {
                if v == 0 {
                    continue;
                }
                let (t1, t2, t3) = (c / (qs * qs), (c / qs) % qs, c % qs);
                grid[cell(q, [rows[0][t1], rows[1][t2], rows[2][t3]])] += v;
            }
        }
    }
    Ok(grid)
}

/// Outcome of a witness search: for each target cell, the first exponent m
/// met (in block order) with g^m e-free and of that trace triple. Blocks are
/// scanned in fixed batches, so the result does not depend on the thread count.
#[derive(Clone, Debug)]
pub struct Witnesses {
    /// (cell index, exponent m) for every covered target, in cell order;
    /// empty unless the search was asked to keep them.
    pub found: Vec<(usize, u64)>,
    pub covered: usize,
    pub targets: usize,
    /// Number of j values scanned.
    pub scanned: u64,
}

/// Scans j in order, blocks at a time, until every target cell has an e-free
/// element or the cosets run out. Much cheaper than the full grid when only
/// positivity is wanted.
const WITNESS_BATCH: u64 = 8;

pub fn witness(s: &Setup, targets: &[bool], block: u64, keep: bool) -> Result<Witnesses> {
    let cs = Cosets::new(s)?;
    let q = s.ctx.q();
    let q3 = (q * q * q) as usize;
    if targets.len() != q3 {
        return Err(Error::InvalidInput(format!("target mask of length {} for q^3 = {q3}", targets.len())));
    }
    let want = targets.iter().filter(|&&t| t).count();
    // scaling by powers of h keeps the zero pattern of a triple
    let pattern = |c: usize| {
        let (qs, c) = (q as usize, c);
        usize::from(c / (qs * qs) != 0) << 2 | usize::from((c / qs) % qs != 0) << 1 | usize::from(c % qs != 0)
    };
    let mut live = [false; 8];
    for (c, _) in targets.iter().enumerate().filter(|(_, &t)| t) {
        live[pattern(c)] = true;
    }
    let all_k: Vec<[Vec<u64>; 3]> = (0..q - 1).map(|k| cs.scalings(k)).collect();
    let mut seen = vec![0u64; q3.div_ceil(64)];
    let mut kept = Vec::new();
    let mut covered = 0usize;
    let mut j0 = 0u64;
    let batch = WITNESS_BATCH;
    while covered < want && j0 < cs.big_q {
        let starts: Vec<u64> = (0..batch).map(|i| j0 + i * block).filter(|&b| b < cs.big_q).collect();
        let found: Vec<Vec<(usize, u64)>> = starts
            .par_iter()
            .map(|&b| {
                let mut seen = vec![0u64; q3.div_ceil(64)];
                let mut hits = Vec::new();
                cs.walk(b, (b + block).min(cs.big_q), |j, class, t| {
                    let pat = usize::from(t[0] != 0) << 2 | usize::from(t[1] != 0) << 1 | usize::from(t[2] != 0);
                    if !live[pat] {
                        return;
                    }
                    for (k, rows) in all_k.iter().enumerate() {
                        if !cs.allowed[class][k] {
                            continue;
                        }
                        let c = cell(q, [rows[0][t[0] as usize], rows[1][t[1] as usize], rows[2][t[2] as usize]]);
                        if targets[c] && seen[c / 64] >> (c % 64) & 1 == 0 {
                            seen[c / 64] |= 1 << (c % 64);
                            hits.push((c, j + k as u64 * cs.big_q));
                        }
                    }
                });
                hits
            })
            .collect();
        for (c, m) in found.into_iter().flatten() {
            if seen[c / 64] >> (c % 64) & 1 == 0 {
                seen[c / 64] |= 1 << (c % 64);
                covered += 1;
                if keep {
                    kept.push((c, m));
                }
            }
        }
        j0 = starts.last().map_or(cs.big_q, |&b| b + block);
    }
    kept.sort_unstable();
    Ok(Witnesses {
        found: kept,
        covered,
        targets: want,
        scanned: j0.min(cs.big_q),
    })
}
