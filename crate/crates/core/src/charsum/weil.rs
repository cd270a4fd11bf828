//! Mixed Weil sums sum_c chi(f(c)) psi(g(c)) over F_q.

use crate::field::BaseField;
use crate::nt::prime_power;
use crate::{Error, Result};
use num_complex::Complex64;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::TAU;

pub const WEIL_MAX_Q: u64 = 121;

#[derive(Clone, Debug, Serialize)]
pub struct WeilInstance {
    pub f: Vec<u64>,
    pub g: Vec<u64>,
    pub value: f64,
    pub bound: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct WeilReport {
    pub q: u64,
    pub m: usize,
    pub r: usize,
    pub d: u64,
    pub instances: Vec<WeilInstance>,
    pub all_hold: bool,
}

fn horner(f: &BaseField, poly: &[u64], c: u64) -> u64 {
    poly.iter().rev().fold(0, |acc, &k| f.add(f.mul(acc, c), k))
}

/// sum over c in F_q of chi(f(c)) psi(g(c)), chi of order d with chi(h) = e^{2 pi i / d}
/// for the field generator h, and chi(0) = 0. Coefficients are lowest degree first.
pub fn weil_sum(field: &BaseField, f: &[u64], g: &[u64], d: u64) -> Result<Complex64> {
    let m = field.q() - 1;
    if d == 0 || m % d != 0 {
        return Err(Error::NotDivisor {
            d: d.to_string(),
            m: m.to_string(),
        });
    }
    let p = field.p() as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for c in 0..field.q() {
        let fc = horner(field, f, c);
        let Some(j) = field.log(fc) else { continue };
        let chi = Complex64::from_polar(1.0, TAU * (j % d) as f64 / d as f64);
        let psi = Complex64::from_polar(1.0, TAU * field.abs_trace(horner(field, g, c)) as f64 / p);
        acc += chi * psi;
    }
    Ok(acc)
}

fn check_hypotheses(q: u64, m: usize, r: usize, d: u64) -> Result<()> {
    if q > WEIL_MAX_Q {
        return Err(Error::HypothesisViolated(format!("q = {q} exceeds {WEIL_MAX_Q}")));
    }
    if m == 0 || r == 0 {
        return Err(Error::HypothesisViolated("degrees must be positive".into()));
    }
    if (m as u64).gcd(&d) != 1 {
        return Err(Error::HypothesisViolated(format!("gcd(m, d) = gcd({m}, {d}) != 1")));
    }
    if (r as u64).gcd(&q) != 1 {
        return Err(Error::HypothesisViolated(format!("gcd(r, q) = gcd({r}, {q}) != 1")));
    }
    if d < 2 || (q - 1) % d != 0 {
        return Err(Error::HypothesisViolated(format!("no character of order {d} on F_{q}*")));
    }
    Ok(())
}

/// One explicit pair (f, g), checked against (m + r - 1) sqrt(q).
pub fn weil_instance(field: &BaseField, f: &[u64], g: &[u64], d: u64) -> Result<WeilInstance> {
    let deg = |v: &[u64]| v.iter().rposition(|&c| c != 0).unwrap_or(0);
    let (m, r) = (deg(f), deg(g));
    check_hypotheses(field.q(), m, r, d)?;
    let value = weil_sum(field, f, g, d)?.norm();
    let bound = (m + r - 1) as f64 * (field.q() as f64).sqrt();
    Ok(WeilInstance {
        f: f.to_vec(),
        g: g.to_vec(),
        value,
        bound,
        holds: value <= bound * (1.0 + 1e-12),
    })
}

/// Random monic f of degree m and random g of degree r, checked `samples` times.
pub fn weil_mixed_bound_check(
    q: u64,
    m: usize,
    r: usize,
    d: u64,
    samples: usize,
    seed: u64,
) -> Result<WeilReport> {
    check_hypotheses(q, m, r, d)?;
    let (p, k) = prime_power(q)?;
    let field = BaseField::new(p, k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut instances = Vec::with_capacity(samples);
    for _ in 0..samples {
        let mut f: Vec<u64> = (0..m).map(|_| rng.gen_range(0..q)).collect();
        f.push(1);
        let mut g: Vec<u64> = (0..r).map(|_| rng.gen_range(0..q)).collect();
        g.push(rng.gen_range(1..q));
        instances.push(weil_instance(&field, &f, &g, d)?);
    }
    let all_hold = instances.iter().all(|i| i.holds);
    Ok(WeilReport {
        q,
        m,
        r,
        d,
        instances,
        all_hold,
    })
}
