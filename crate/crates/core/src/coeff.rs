//! Coefficients of a minimal polynomial recovered from traces.
//!
//! With f(x) = x^n - f_1 x^{n-1} + f_2 x^{n-2} - ... (the signed convention),
//! f_k is the k-th elementary symmetric function of the conjugates of a root
//! alpha, and k f_k = Tr(alpha W_{k,n}(alpha)) where W_{k,n} sums the products
//! of alpha^{q^j} over the (k-1)-subsets of {1, ..., n-1}.

use crate::field::{is_irreducible, BaseField, FieldCtx, FieldElem, Poly};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Sign convention for reading coefficients off a polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// f(x) = x^n - f_1 x^{n-1} + f_2 x^{n-2} - ...
    Signed,
    /// f(x) = x^n + g_1 x^{n-1} + g_2 x^{n-2} + ...
    Unsigned,
}

/// Converts a coefficient with index k between conventions (g_k = (-1)^k f_k).
pub fn convert(field: &BaseField, k: usize, value: u64, from: Convention, to: Convention) -> u64 {
    if from == to || k % 2 == 0 {
        value
    } else {
        field.neg(value)
    }
}

/// The coefficient with index k of a monic polynomial of degree n >= k.
pub fn coefficient(f: &Poly, field: &BaseField, k: usize, conv: Convention) -> Result<u64> {
    let n = f
        .degree()
        .filter(|&n| k <= n && f.is_monic())
        .ok_or(Error::IndexOutOfRange {
            k,
            n: f.degree().unwrap_or(0),
        })?;
    let raw = f.coeff(n - k);
    Ok(convert(field, k, raw, Convention::Unsigned, conv))
}

fn check_k(k: usize, n: usize) -> Result<()> {
    if k < 1 || k >= n {
        return Err(Error::IndexOutOfRange { k, n });
    }
    Ok(())
}

/// The (k-1)-subsets of {1, ..., n-1} in lexicographic order.
pub fn w_patterns(k: usize, n: usize) -> Result<Vec<Vec<usize>>> {
    check_k(k, n)?;
    let m = k - 1;
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (1..=m).collect();
    loop {
        out.push(cur.clone());
        // advance to the next combination
        let mut i = m;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if cur[i] < n - 1 - (m - 1 - i) {
                cur[i] += 1;
                for j in i + 1..m {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// W_{k,n}(alpha) = sum over (k-1)-subsets S of {1..n-1} of prod_{j in S} alpha^{q^j}.
pub fn w_eval(k: usize, n: usize, alpha: &FieldElem, ctx: &FieldCtx) -> Result<FieldElem> {
    if n != ctx.n() {
        return Err(Error::InvalidInput(format!(
            "W_{{k,{n}}} evaluated in a degree-{} field",
            ctx.n()
        )));
    }
    let conj: Vec<FieldElem> = (0..n).map(|j| ctx.frobenius_pow(alpha, j)).collect();
    let mut acc = ctx.zero();
    for s in w_patterns(k, n)? {
        let term = s.iter().fold(ctx.one(), |t, &j| ctx.mul(&t, &conj[j]));
        acc = ctx.add(&acc, &term);
    }
    Ok(acc)
}

/// f_k = (1/k) Tr(alpha W_{k,n}(alpha)) for a root alpha in `ctx`.
pub fn fk_via_trace_in(k: usize, alpha: &FieldElem, ctx: &FieldCtx) -> Result<u64> {
    let n = ctx.n();
    check_k(k, n)?;
    let p = ctx.p();
    if k as u64 % p == 0 {
        return Err(Error::CharDividesK { p, k });
    }
    let w = w_eval(k, n, alpha, ctx)?;
    let t = ctx.trace_power(&ctx.mul(alpha, &w), 1)?;
    let f = ctx.base();
    f.div(t, f.from_int(k as i64))
}

/// f_k of the monic irreducible `f`, computed from traces of its root x in F_q[x]/(f).
pub fn fk_via_trace(k: usize, f: &Poly, base: &BaseField) -> Result<u64> {
    let ctx = FieldCtx::from_modulus(base.clone(), f.clone())?;
    fk_via_trace_in(k, &ctx.x(), &ctx)
}

/// Newton recursion k f_k = sum_{i=1}^{k} (-1)^{i-1} f_{k-i} Tr(alpha^i), f_0 = 1.
///
/// `power_traces[i-1]` is Tr(alpha^i) and `prior[i-1]` is f_i for i < k.
pub fn fk_via_recursion(k: usize, power_traces: &[u64], prior: &[u64], field: &BaseField) -> Result<u64> {
    if k == 0 || power_traces.len() < k || prior.len() < k - 1 {
        return Err(Error::InvalidInput(format!(
            "recursion for k = {k} needs {k} power traces and {} earlier coefficients",
            k.saturating_sub(1)
        )));
    }
    let p = field.p();
    if k as u64 % p == 0 {
        return Err(Error::CharDividesK { p, k });
    }
    let mut acc = 0;
    for i in 1..=k {
        let f_prev = if i == k { 1 } else { prior[k - i - 1] };
        let term = field.mul(f_prev, power_traces[i - 1]);
        acc = if i % 2 == 1 {
            field.add(acc, term)
        } else {
            field.sub(acc, term)
        };
    }
    field.div(acc, field.from_int(k as i64))
}

/// (a, b, c) = (Tr alpha, Tr alpha^2, Tr alpha^3) to (f_1, f_2, f_3), signed convention:
/// f_1 = a, f_2 = (a^2 - b)/2, f_3 = (a^3 - 3ab + 2c)/6.
pub fn traces_to_coeffs(a: u64, b: u64, c: u64, field: &BaseField) -> Result<[u64; 3]> {
    check_small_char(field)?;
    let k = |v: i64| field.from_int(v);
    let a2 = field.mul(a, a);
    let a3 = field.mul(a2, a);
    let f2 = field.div(field.sub(a2, b), k(2))?;
    let num = field.add(field.sub(a3, field.mul(k(3), field.mul(a, b))), field.mul(k(2), c));
    let f3 = field.div(num, k(6))?;
    Ok([a, f2, f3])
}

/// Inverse of [`traces_to_coeffs`]: b = f_1^2 - 2 f_2, c = (6 f_3 - a^3 + 3ab)/2.
pub fn coeffs_to_traces(f1: u64, f2: u64, f3: u64, field: &BaseField) -> Result<[u64; 3]> {
    check_small_char(field)?;
    let k = |v: i64| field.from_int(v);
    let a = f1;
    let b = field.sub(field.mul(a, a), field.mul(k(2), f2));
    let a3 = field.mul(a, field.mul(a, a));
    let num = field.add(field.sub(field.mul(k(6), f3), a3), field.mul(k(3), field.mul(a, b)));
    let c = field.div(num, k(2))?;
    Ok([a, b, c])
}

fn check_small_char(field: &BaseField) -> Result<()> {
    if field.p() < 5 {
        return Err(Error::CharacteristicTooSmall(field.p()));
    }
    Ok(())
}

/// A uniformly random monic irreducible of degree n, by rejection.
pub fn random_irreducible(base: &BaseField, n: usize, rng: &mut impl Rng) -> Result<Poly> {
    if n == 0 {
        return Err(Error::InvalidInput("degree must be positive".into()));
    }
    let q = base.q();
    loop {
        let mut coeffs: Vec<u64> = (0..n).map(|_| rng.gen_range(0..q)).collect();
        coeffs.push(1);
        let f = Poly::new(coeffs);
        if is_irreducible(&f, base)? {
            return Ok(f);
        }
    }
}

/// Agreement of the three ways of obtaining f_k for one index k.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexStats {
    pub k: usize,
    /// p | k: the trace formula does not apply.
    pub skipped: bool,
    pub checked: usize,
    pub mismatches: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormulaReport {
    pub q: u64,
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub per_k: Vec<IndexStats>,
}

impl FormulaReport {
    pub fn mismatches(&self) -> usize {
        self.per_k.iter().map(|s| s.mismatches).sum()
    }
}

/// Samples irreducibles of degree n over F_q and compares, for every
/// k <= n/2 (or the requested ks), the trace formula, the Newton recursion
/// and the coefficient read off f in the signed convention.
///
/// Where p | k the recursion cannot produce f_k; later indices then take the
/// coefficient read off f as their prior.
pub fn verify_formula(q: u64, n: usize, samples: usize, seed: u64, ks: Option<&[usize]>) -> Result<FormulaReport> {
    let (p, r) = crate::nt::prime_power(q)?;
    if p < 5 {
        return Err(Error::CharacteristicTooSmall(p));
    }
    if n < 2 {
        return Err(Error::InvalidInput(format!("degree {n} has no index k <= n/2")));
    }
    let base = BaseField::new(p, r)?;
    let ks: Vec<usize> = match ks {
        Some(ks) => ks.to_vec(),
        None => (1..=n / 2).collect(),
    };
    for &k in &ks {
        check_k(k, n)?;
    }
    let top = ks.iter().copied().max().unwrap_or(0);
    let mut per_k: Vec<IndexStats> = ks
        .iter()
        .map(|&k| IndexStats {
            k,
            skipped: k as u64 % p == 0,
            checked: 0,
            mismatches: 0,
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let f = random_irreducible(&base, n, &mut rng)?;
        let ctx = FieldCtx::from_modulus(base.clone(), f.clone())?;
        let alpha = ctx.x();
        let traces = (1..=top as u128)
            .map(|i| ctx.trace_power(&alpha, i))
            .collect::<Result<Vec<u64>>>()?;
        let mut prior = Vec::with_capacity(top);
        let mut recursed = Vec::with_capacity(top);
        for k in 1..=top {
            let direct = coefficient(&f, &base, k, Convention::Signed)?;
            let rec = match fk_via_recursion(k, &traces, &prior, &base) {
                Ok(v) => Some(v),
                Err(Error::CharDividesK { .. }) => None,
                Err(e) => return Err(e),
            };
            prior.push(rec.unwrap_or(direct));
            recursed.push(rec);
        }
        for stats in per_k.iter_mut().filter(|s| !s.skipped) {
            let k = stats.k;
            let direct = coefficient(&f, &base, k, Convention::Signed)?;
            let via_trace = fk_via_trace_in(k, &alpha, &ctx)?;
            stats.checked += 1;
            if via_trace != direct || recursed[k - 1] != Some(direct) {
                stats.mismatches += 1;
            }
        }
    }
    Ok(FormulaReport {
        q,
        n,
        samples,
        seed,
        per_k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::lex_irreducibles;
    use crate::nt::binomial;
    use num_traits::ToPrimitive;
    use proptest::prelude::*;

    /// Elementary symmetric function of the n conjugates by expanding the
    /// product directly, independent of the trace identity.
    fn elementary(ctx: &FieldCtx, alpha: &FieldElem, k: usize) -> u64 {
        let conj: Vec<FieldElem> = (0..ctx.n()).map(|j| ctx.frobenius_pow(alpha, j)).collect();
        let mut e = vec![ctx.one()];
        for c in &conj {
            let mut next = e.clone();
            next.push(ctx.zero());
            for i in 1..next.len() {
                next[i] = ctx.add(&e.get(i).cloned().unwrap_or_else(|| ctx.zero()), &ctx.mul(&e[i - 1], c));
            }
            e = next;
        }
        e[k].as_base().unwrap()
    }

    #[test]
    fn pattern_counts_are_binomial() {
        for n in 2..10usize {
            for k in 1..n {
                let pats = w_patterns(k, n).unwrap();
                assert_eq!(pats.len() as u64, binomial(n as u64 - 1, k as u64 - 1).to_u64().unwrap());
                let mut sorted = pats.clone();
                sorted.sort();
                assert_eq!(sorted, pats);
            }
        }
        assert_eq!(w_patterns(3, 9).unwrap().len(), 28);
        assert_eq!(w_patterns(1, 4).unwrap(), vec![Vec::<usize>::new()]);
        assert!(matches!(w_patterns(0, 4), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(w_patterns(4, 4), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn w_2_for_degree_3_expands_by_hand() {
        // W_{2,3}(alpha) = alpha^q + alpha^{q^2}.
        let ctx = FieldCtx::new(7, 1, 3).unwrap();
        let a = ctx.from_index(123);
        let expect = ctx.add(&ctx.pow(&a, 7), &ctx.pow(&a, 49));
        assert_eq!(w_eval(2, 3, &a, &ctx).unwrap(), expect);
    }

    #[test]
    fn trace_formula_matches_coefficients_for_many_polynomials() {
        for (p, r, n) in [(5u64, 1u32, 7usize), (7, 1, 5), (5, 2, 4), (11, 1, 6), (5, 1, 9)] {
            let base = BaseField::new(p, r).unwrap();
            for f in lex_irreducibles(&base, n, 0).step_by(3).take(8) {
                for k in 1..n {
                    if k as u64 % p == 0 {
                        assert!(matches!(fk_via_trace(k, &f, &base), Err(Error::CharDividesK { .. })));
                        continue;
                    }
                    let want = coefficient(&f, &base, k, Convention::Signed).unwrap();
                    assert_eq!(fk_via_trace(k, &f, &base).unwrap(), want, "f = {f}, k = {k}");
                }
            }
        }
    }

    #[test]
    fn symmetric_function_oracle_agrees() {
        let ctx = FieldCtx::new(5, 1, 6).unwrap();
        for idx in (1..ctx.size()).step_by(211) {
            let a = ctx.from_index(idx);
            if ctx.poly_of_element(&a).unwrap().degree() != Some(6) {
                continue;
            }
            for k in 1..6 {
                if k == 5 {
                    continue;
                }
                assert_eq!(fk_via_trace_in(k, &a, &ctx).unwrap(), elementary(&ctx, &a, k));
            }
        }
    }

    #[test]
    fn recursion_matches_trace_formula() {
        let base = BaseField::prime(11).unwrap();
        for f in lex_irreducibles(&base, 8, 0).take(5) {
            let ctx = FieldCtx::from_modulus(base.clone(), f.clone()).unwrap();
            let alpha = ctx.x();
            let traces: Vec<u64> = (1..=7).map(|i| ctx.trace_power(&alpha, i).unwrap()).collect();
            let mut prior = Vec::new();
            for k in 1..8 {
                let r = fk_via_recursion(k, &traces, &prior, &base).unwrap();
                assert_eq!(r, fk_via_trace_in(k, &alpha, &ctx).unwrap());
                prior.push(r);
            }
        }
    }

    #[test]
    fn closed_forms_on_explicit_polynomial() {
        // x^3 - 2x^2 + 3x - 1 over F_7 has power sums
        // p1 = 2, p2 = 2^2 - 2*3 = -2, p3 = 2 p2 - 3 p1 + 3 = -4 - 6 + 3 = -7 = 0.
        let base = BaseField::prime(7).unwrap();
        let [a, b, c] = coeffs_to_traces(2, 3, 1, &base).unwrap();
        assert_eq!([a, b, c], [2, 5, 0]);
        assert_eq!(traces_to_coeffs(a, b, c, &base).unwrap(), [2, 3, 1]);
    }

    #[test]
    fn unsigned_convention_negates_odd_indices() {
        let base = BaseField::prime(5).unwrap();
        let f = Poly::new(vec![4, 3, 2, 1]); // x^3 + 2x^2 + 3x + 4
        assert_eq!(coefficient(&f, &base, 1, Convention::Unsigned).unwrap(), 2);
        assert_eq!(coefficient(&f, &base, 1, Convention::Signed).unwrap(), 3);
        assert_eq!(coefficient(&f, &base, 2, Convention::Signed).unwrap(), 3);
        assert_eq!(coefficient(&f, &base, 3, Convention::Signed).unwrap(), 1);
    }

    #[test]
    fn sampled_polynomials_agree_and_skip_p() {
        let r = verify_formula(5, 10, 20, 3, None).unwrap();
        assert_eq!(r.mismatches(), 0);
        let skipped: Vec<usize> = r.per_k.iter().filter(|s| s.skipped).map(|s| s.k).collect();
        assert_eq!(skipped, vec![5]);
        assert!(r.per_k.iter().filter(|s| !s.skipped).all(|s| s.checked == 20));
        // same seed, same polynomials
        assert_eq!(r, verify_formula(5, 10, 20, 3, None).unwrap());
    }

    #[test]
    fn sampler_is_irreducible_and_monic() {
        let base = BaseField::new(5, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let f = random_irreducible(&base, 5, &mut rng).unwrap();
            assert!(f.is_monic() && f.degree() == Some(5));
            assert!(is_irreducible(&f, &base).unwrap());
        }
    }

    #[test]
    fn formula_check_rejects_bad_input() {
        assert!(matches!(verify_formula(4, 6, 1, 0, None), Err(Error::NotPrimePower(4)) | Err(Error::CharacteristicTooSmall(2))));
        assert!(matches!(verify_formula(9, 6, 1, 0, None), Err(Error::CharacteristicTooSmall(3))));
        assert!(matches!(verify_formula(5, 6, 1, 0, Some(&[6])), Err(Error::IndexOutOfRange { .. })));
    }

    proptest! {
        #[test]
        fn trace_coeff_roundtrip(a in 0u64..13, b in 0u64..13, c in 0u64..13) {
            let base = BaseField::prime(13).unwrap();
            let f = traces_to_coeffs(a, b, c, &base).unwrap();
            prop_assert_eq!(coeffs_to_traces(f[0], f[1], f[2], &base).unwrap(), [a, b, c]);
        }

        #[test]
        fn roundtrip_over_f25(a in 0u64..25, b in 0u64..25, c in 0u64..25) {
            let base = BaseField::new(5, 2).unwrap();
            let f = traces_to_coeffs(a, b, c, &base).unwrap();
            prop_assert_eq!(coeffs_to_traces(f[0], f[1], f[2], &base).unwrap(), [a, b, c]);
        }
    }
}
