use crate::output::{Exit, Report, EXIT_GOLDEN, EXIT_MISMATCH, EXIT_OK};
use crate::ranges::{degrees, field_sizes};
use crate::{DirectArg, Input, TierArg, TripleArgs};
use pt3_core::charsum::BoundChecker;
use pt3_core::coeff::{coeffs_to_traces, convert, traces_to_coeffs, verify_formula as check_formula, Convention};
use pt3_core::count::{count_efree_grid, divide_by_n, load_cache, save_cache, CountReport, Tier};
use pt3_core::field::{ctx_for_q, BaseField, FieldCtx};
use pt3_core::nt::{factor_qn_minus_1, squarefree_divisors};
use pt3_core::pattern::{CasePattern, PatternClass};
use pt3_core::sieve::{
    class_omega, class_pattern, compare_with_ledger, compare_with_print, exceptions_of, generate_table, large_n_resolver, pattern_omega,
    sieve_eliminated, sufficiency_bound, sufficiency_lhs, sufficiency_rhs, Certifier, ChainRecord, DirectMode,
    DirectStore, Evidence, KnownDiscrepancy, Method,
};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fmt::Write;
use std::path::{Path, PathBuf};

const CONVENTIONS: &str = "signed: f(x) = x^n - f1 x^(n-1) + f2 x^(n-2) - f3 x^(n-3) + ...; \
                           unsigned: f(x) = x^n + g1 x^(n-1) + g2 x^(n-2) + g3 x^(n-3) + ...";

fn single_q(s: &str) -> Result<u64, Exit> {
    match field_sizes(s).map_err(Exit::config)?.as_slice() {
        [q] => Ok(*q),
        _ => Err(Exit::config(format!("--q {s} must name a single field"))),
    }
}

fn class_arg(s: &str) -> Result<PatternClass, Exit> {
    s.parse().map_err(Exit::config)
}

fn classes(s: Option<&str>) -> Result<Vec<PatternClass>, Exit> {
    match s {
        None => Ok(vec![PatternClass::Zeros, PatternClass::Nonzeros]),
        Some(s) => Ok(vec![class_arg(s)?]),
    }
}

fn cache_dir() -> Option<PathBuf> {
    std::env::var_os("PT3_CACHE_DIR").map(PathBuf::from)
}

fn direct_store(mode: DirectArg, all: bool) -> DirectStore {
    let mode = match mode {
        DirectArg::Compute => DirectMode::Compute,
        DirectArg::Reported => DirectMode::Reported,
        DirectArg::Off => DirectMode::Off,
    };
    DirectStore::new(mode, all, cache_dir())
}

/// The trace triple selected by --a/--b/--c, or None for --all. Entries are
/// reduced mod q when q is prime; otherwise they index F_q and must be < q.
fn triple(base: &BaseField, t: &TripleArgs) -> Result<Option<[u64; 3]>, Exit> {
    if t.all {
        return Ok(None);
    }
    let q = base.q();
    let mut v = [0u64; 3];
    for (slot, (name, x)) in v.iter_mut().zip([("a", t.a), ("b", t.b), ("c", t.c)]) {
        let x = x.ok_or_else(|| Exit::config(format!("give --a, --b and --c, or --all (missing --{name})")))?;
        *slot = if base.r() == 1 {
            x % q
        } else if x < q {
            x
        } else {
            return Err(Exit::config(format!("--{name} {x} is not an element index of F_{q}")));
        };
    }
    let traces = match t.input {
        Input::Traces => v,
        Input::Signed => coeffs_to_traces(v[0], v[1], v[2], base)?,
        Input::Unsigned => {
            let s: Vec<u64> = (0..3).map(|i| convert(base, i + 1, v[i], Convention::Unsigned, Convention::Signed)).collect();
            coeffs_to_traces(s[0], s[1], s[2], base)?
        }
    };
    Ok(Some(traces))
}

/// The triple in all three descriptions.
fn describe_triple(base: &BaseField, abc: [u64; 3]) -> Result<([u64; 3], [u64; 3]), Exit> {
    let f = traces_to_coeffs(abc[0], abc[1], abc[2], base)?;
    let g = [0, 1, 2].map(|i| convert(base, i + 1, f[i], Convention::Signed, Convention::Unsigned));
    Ok((f, g))
}

pub fn verify_formula(q: &str, n: u32, samples: usize, seed: u64, ks: &[usize]) -> Result<Report, Exit> {
    let q = single_q(q)?;
    let ks = (!ks.is_empty()).then_some(ks);
    let r = check_formula(q, n as usize, samples, seed, ks)?;
    let mut text = format!("verify-formula q = {q}, n = {n}, {samples} samples, seed {seed}\nconvention {CONVENTIONS}\n");
    let mut csv = String::from("k,skipped,checked,mismatches\n");
    for s in &r.per_k {
        if s.skipped {
            let _ = writeln!(text, "  k = {}: skipped (p divides k)", s.k);
        } else {
            let _ = writeln!(text, "  k = {}: {} checked, {} mismatches", s.k, s.checked, s.mismatches);
        }
        let _ = writeln!(csv, "{},{},{},{}", s.k, s.skipped, s.checked, s.mismatches);
    }
    let bad = r.mismatches();
    let summary = if bad == 0 {
        "trace formula, recursion and coefficients agree".to_string()
    } else {
        format!("{bad} MISMATCHES")
    };
    text.push_str(&summary);
    text.push('\n');
    Ok(Report {
        status: if bad == 0 { EXIT_OK } else { EXIT_MISMATCH },
        summary,
        json: json!({ "report": r, "convention": "signed" }),
        text,
        csv: Some(csv),
    })
}

fn tier_of(t: TierArg) -> Tier {
    match t {
        TierArg::Scalar => Tier::Scalar,
        TierArg::Parallel => Tier::Parallel,
        TierArg::Extended => Tier::Extended,
    }
}

/// The grid, from PT3_CACHE_DIR when possible for primitive counts.
fn grid(ctx: &FieldCtx, e: u64, tier: Tier, primitive: bool) -> Result<(CountReport, bool), Exit> {
    let dir = cache_dir().filter(|_| primitive);
    if let Some(dir) = &dir {
        if let Some(r) = load_cache(dir, ctx.q(), ctx.n() as u32, e)? {
            return Ok((r, true));
        }
    }
    let r = count_efree_grid(ctx, e, tier)?;
    if let Some(dir) = &dir {
        save_cache(dir, &r)?;
    }
    Ok((r, false))
}

pub fn count(q: &str, n: u32, t: &TripleArgs, e: Option<u64>, tier: TierArg) -> Result<Report, Exit> {
    let q = single_q(q)?;
    let tier = tier_of(tier);
    let ctx = ctx_for_q(q, n as usize)?;
    tier.check(ctx.size())?;
    let base = ctx.base().clone();
    let order = ctx.order() as u64;
    let e = e.unwrap_or(order);
    let primitive = e == order;
    let selected = triple(&base, t)?;
    let (rep, cached) = grid(&ctx, e, tier, primitive)?;
    let polys = |c: u64| -> Result<Option<u64>, Exit> { Ok(if primitive { Some(divide_by_n(c, n)?) } else { None }) };
    let what = if primitive { "primitive".to_string() } else { format!("{e}-free") };
    let mut text = format!(
        "F_{{{q}^{n}}}: {what} elements by trace triple (Tr x, Tr x^2, Tr x^3){}\nconvention {CONVENTIONS}\n",
        if cached { ", from cache" } else { "" }
    );
    let mut csv = String::from("a,b,c,f1,f2,f3,g1,g2,g3,count\n");
    let summary;
    let json;
    match selected {
        Some(abc) => {
            let c = rep.cell(abc)?;
            let (f, g) = describe_triple(&base, abc)?;
            let p = polys(c)?;
            summary = match p {
                Some(p) => format!("N{abc:?} = {c} elements, {p} polynomials"),
                None => format!("N{abc:?} = {c} elements"),
            };
            let _ = writeln!(text, "traces {abc:?}, signed f {f:?}, unsigned g {g:?}");
            let _ = writeln!(csv, "{},{},{},{},{},{},{},{},{},{c}", abc[0], abc[1], abc[2], f[0], f[1], f[2], g[0], g[1], g[2]);
            json = json!({
                "q": q, "n": n, "e": e, "traces": abc, "signed": f, "unsigned": g,
                "count": c, "polynomials": p,
            });
        }
        None => {
            for (abc, c) in rep.triples() {
                let (f, g) = describe_triple(&base, abc)?;
                let _ = writeln!(csv, "{},{},{},{},{},{},{},{},{},{c}", abc[0], abc[1], abc[2], f[0], f[1], f[2], g[0], g[1], g[2]);
            }
            let cells = rep.grid.len();
            let positive = rep.grid.iter().filter(|&&c| c > 0).count();
            let (argmin, min) = rep.triples().min_by_key(|&(_, c)| c).expect("grid is never empty");
            let (f, g) = describe_triple(&base, argmin)?;
            for &c in &rep.grid {
                polys(c)?;
            }
            summary = format!("{positive}/{cells} positive");
            let _ = writeln!(text, "total {}", rep.total());
            let _ = writeln!(
                text,
                "minimum {min}{} at traces {argmin:?} (signed f {f:?}, unsigned g {g:?})",
                polys(min)?.map_or(String::new(), |p| format!(" ({p} polynomials)"))
            );
            let mut j = rep.to_json()?;
            j["positive"] = json!(positive);
            j["minimum"] = json!({ "traces": argmin, "count": min });
            json = j;
        }
    }
    text.push_str(&summary);
    text.push('\n');
    Ok(Report {
        status: EXIT_OK,
        text,
        summary,
        json,
        csv: Some(csv),
    })
}

pub fn charsum_check(q: &str, n: u32, t: &TripleArgs, identity: bool) -> Result<Report, Exit> {
    let q = single_q(q)?;
    let ctx = ctx_for_q(q, n as usize)?;
    let checker = BoundChecker::new(&ctx)?;
    let base = ctx.base().clone();
    let triples: Vec<[u64; 3]> = match triple(&base, t)? {
        Some(abc) => vec![abc],
        None => (0..q * q * q).map(|i| [i / (q * q), i / q % q, i % q]).collect(),
    };
    let mut text = format!("character sums over F_{{{q}^{n}}}\n");
    let mut csv = String::from("a,b,c,pattern,sum,value,bound,margin,holds\n");
    let mut failures = 0usize;
    // smallest margin per (pattern, sum)
    let mut worst: BTreeMap<(CasePattern, String), (f64, f64, f64, bool)> = BTreeMap::new();
    let mut reports = Vec::new();
    for abc in triples.iter().copied() {
        let r = checker.check(abc)?;
        for c in &r.checks {
            let _ = writeln!(csv, "{},{},{},{},{},{},{},{},{}", abc[0], abc[1], abc[2], r.pattern.label(), c.name, c.value, c.bound, c.margin, c.holds);
            if !c.holds {
                failures += 1;
            }
            let slot = worst.entry((r.pattern, c.name.clone())).or_insert((c.value, c.bound, c.margin, c.holds));
            if c.margin < slot.2 {
                *slot = (c.value, c.bound, c.margin, c.holds);
            }
        }
        reports.push(r);
    }
    if let [r] = reports.as_slice() {
        let _ = writeln!(text, "triple {:?}, pattern {}, T1 = {}", r.triple, r.pattern.label(), r.t1);
    } else {
        let _ = writeln!(text, "{} triples; smallest margin per pattern and sum:", triples.len());
    }
    for ((pattern, name), (value, bound, margin, holds)) in &worst {
        // equality cases can land a rounding error below zero
        let margin = if margin.abs() < 1e-9 * bound.max(1.0) { 0.0 } else { *margin };
        let _ = writeln!(
            text,
            "  {} |{name}| = {value:.3} {} {bound:.3} (margin {margin:.3})",
            pattern.label(),
            if *holds { "<=" } else { "> VIOLATED" }
        );
    }
    let mut identity_json = Value::Null;
    if identity {
        let primes = factor_qn_minus_1(q, n)?.primes_u128()?;
        let mut rows = Vec::new();
        for e in squarefree_divisors(&primes) {
            let e = u64::try_from(e).map_err(|_| Exit::other("divisor exceeds u64"))?;
            let res = pt3_core::count::counting_identity_residuals(&ctx, e)?;
            let max = res.iter().copied().fold(0.0, f64::max);
            if max >= 0.5 {
                failures += 1;
            }
            let _ = writeln!(text, "  counting identity, e = {e}: max residual {max:.2e}");
            rows.push(json!({ "e": e, "max_residual": max }));
        }
        identity_json = Value::Array(rows);
    }
    let summary = if failures == 0 {
        "all bounds hold".to_string()
    } else {
        format!("{failures} FAILURES")
    };
    text.push_str(&summary);
    text.push('\n');
    Ok(Report {
        status: if failures == 0 { EXIT_OK } else { EXIT_MISMATCH },
        text,
        summary,
        json: json!({ "q": q, "n": n, "reports": reports, "identity": identity_json }),
        csv: Some(csv),
    })
}

fn pattern_arg(s: &str) -> Result<CasePattern, Exit> {
    match s.parse::<PatternClass>() {
        Ok(class) => Ok(class_pattern(class)),
        Err(_) => s.parse::<CasePattern>().map_err(Exit::config),
    }
}

pub fn bounds(q: &str, n: &str, pattern: &str) -> Result<Report, Exit> {
    let qs = field_sizes(q).map_err(Exit::config)?;
    let ns = degrees(n).map_err(Exit::config)?;
    let pattern = pattern_arg(pattern)?;
    if let Some(&n) = ns.iter().find(|&&n| n < 7) {
        return Err(Exit::config(format!("no sufficiency condition for n = {n} < 7")));
    }
    let mut text = String::new();
    let mut csv = String::from("q,n,pattern,rule,omega,lhs,rhs,holds\n");
    let mut rows = Vec::new();
    let mut held = 0usize;
    for &n in &ns {
        for &q in &qs {
            if n >= 13 {
                let trace = large_n_resolver(q, n, pattern)?;
                let rule = trace.fired().map_or("none".to_string(), |r| format!("{r:?}"));
                let ok = trace.fired().is_some();
                held += ok as usize;
                let _ = writeln!(text, "q = {q}, n = {n}, {}: resolver rule {rule}", pattern.label());
                for s in &trace.steps {
                    let _ = writeln!(text, "    {:?}: {:?} ({})", s.rule, s.holds, s.detail);
                }
                let _ = writeln!(csv, "{q},{n},{},{rule},,,,{ok}", pattern.label());
                rows.push(json!({ "q": q, "n": n, "pattern": pattern, "resolver": trace }));
            } else {
                let omega = pattern_omega(pattern, q, n)?;
                let lhs = sufficiency_lhs(pattern, omega).to_f64();
                let rhs = sufficiency_rhs(pattern, q, n)?.to_f64();
                let ok = sufficiency_bound(pattern, q, n, omega)?;
                held += ok as usize;
                let _ = writeln!(
                    text,
                    "q = {q}, n = {n}, {}: omega = {omega}, {lhs:.3} {} {rhs:.3}",
                    pattern.label(),
                    if ok { "<" } else { ">=" }
                );
                let _ = writeln!(csv, "{q},{n},{},sufficiency,{omega},{lhs},{rhs},{ok}", pattern.label());
                rows.push(json!({ "q": q, "n": n, "pattern": pattern, "omega": omega, "lhs": lhs, "rhs": rhs, "holds": ok }));
            }
        }
    }
    let summary = format!("{held}/{} cases settled by the bound", rows.len());
    text.push_str(&summary);
    text.push('\n');
    Ok(Report {
        status: EXIT_OK,
        text,
        summary,
        json: Value::Array(rows),
        csv: Some(csv),
    })
}

fn list(v: &[u64]) -> String {
    v.iter().map(u64::to_string).collect::<Vec<_>>().join(", ")
}

pub fn tables(n: &str, pattern: Option<&str>, golden: bool, ledger: Option<&Path>) -> Result<Report, Exit> {
    let ns = degrees(n).map_err(Exit::config)?;
    let classes = classes(pattern)?;
    let mut text = String::new();
    let mut csv = String::from("n,pattern_class,omega,q0,rhs_root\n");
    let mut docs = Vec::new();
    for &n in &ns {
        for &class in &classes {
            let table = generate_table(n, class)?;
            let exceptions = exceptions_of(&table)?;
            let _ = writeln!(text, "n = {n}, {class}\n  omega        q0  {}", table.column);
            for r in &table.rows {
                let _ = writeln!(text, "  {:>5} {:>9.2} {:>9.2}", r.omega, r.q0, r.rhs_root);
                let _ = writeln!(csv, "{n},{class},{},{:.2},{:.2}", r.omega, r.q0, r.rhs_root);
            }
            let _ = writeln!(text, "  possible exceptions ({}): {}", exceptions.len(), list(&exceptions));
            let mut doc = json!({ "n": n, "pattern_class": class, "table": table, "exceptions": exceptions });
            if (n, class) == (7, PatternClass::Nonzeros) {
                let sieved = sieve_eliminated(&table)?;
                let _ = writeln!(text, "  settled by the d = 2 sieve ({}): {}", sieved.len(), list(&sieved));
                doc["sieve_eliminated"] = json!(sieved);
            }
            docs.push(doc);
        }
    }
    let mut status = EXIT_OK;
    let mut summary = format!("{} tables regenerated", docs.len());
    let mut golden_json = Value::Null;
    if golden {
        let report = match ledger {
            None => compare_with_print()?,
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| Exit::config(format!("{}: {e}", path.display())))?;
                let entries: Vec<KnownDiscrepancy> =
                    serde_json::from_str(&text).map_err(|e| Exit::config(format!("{}: {e}", path.display())))?;
                compare_with_ledger(entries)?
            }
        };
        let selected: Vec<_> = report
            .mismatches
            .iter()
            .filter(|m| ns.contains(&m.n) && classes.contains(&m.pattern_class))
            .collect();
        let unexplained = selected.iter().filter(|m| m.ledger.is_none()).count();
        let _ = writeln!(text, "comparison with the printed values (tolerance 0.02):");
        for m in &selected {
            let table = m.table.map_or("text".to_string(), |t| format!("table {t}"));
            let _ = writeln!(
                text,
                "  {table}, n = {}, {}: {}, printed {}, regenerated {}\n    {}",
                m.n,
                m.pattern_class,
                m.item,
                m.printed.map_or("-".to_string(), |p| format!("{p:.2}")),
                m.computed.map_or("-".to_string(), |c| format!("{c:.2}")),
                m.ledger.as_deref().map_or("UNEXPLAINED".to_string(), |c| format!("ledger: {c}"))
            );
        }
        summary = format!(
            "{summary}; {} differences from print, {} explained by the ledger",
            selected.len(),
            selected.len() - unexplained
        );
        if unexplained > 0 {
            status = EXIT_GOLDEN;
        }
        golden_json = json!(selected);
    }
    text.push_str(&summary);
    text.push('\n');
    Ok(Report {
        status,
        text,
        summary,
        json: json!({ "tables": docs, "golden_diff": golden_json }),
        csv: Some(csv),
    })
}

fn product(ps: &[u128]) -> String {
    if ps.is_empty() {
        return "1".into();
    }
    ps.iter().map(u128::to_string).collect::<Vec<_>>().join("*")
}

fn describe(r: &ChainRecord) -> String {
    match &r.evidence {
        Evidence::Bound { pattern, omega } => format!("omega = {omega}, sufficiency holds for {}", pattern.label()),
        Evidence::Resolver { trace } => format!("rule {:?}", trace.fired()),
        Evidence::Table { omega, omega_final, t } => match t {
            None => format!("omega = {omega} >= {omega_final}"),
            Some(t) => format!("omega = {omega}, t = {t:.2} < q"),
        },
        Evidence::Sieve { plan, rhs, .. } => {
            let parts: Vec<String> = plan.parts.iter().map(|p| product(p)).collect();
            format!("d = {}, e_i / d = [{}], rhs = {rhs:.2}", product(&plan.d), parts.join(", "))
        }
        Evidence::Direct { record } => format!(
            "{:?}, {}/{} triples hit",
            record.source, record.covered, record.targets
        ),
        Evidence::Unresolved { omega } => format!("omega = {omega}"),
    }
}

pub fn certify(q: &str, n: &str, pattern: Option<&str>, mode: DirectArg, all: bool, summary_only: bool) -> Result<Report, Exit> {
    let qs = field_sizes(q).map_err(Exit::config)?;
    let ns = degrees(n).map_err(Exit::config)?;
    let classes = classes(pattern)?;
    let mut certifier = Certifier::new(direct_store(mode, all));
    let report = certifier.certify_all(&qs, &ns, &classes)?;
    let mut text = String::new();
    let mut csv = String::from("q,n,class,method,detail\n");
    for r in &report.records {
        let d = describe(r);
        if !summary_only {
            let _ = writeln!(text, "q = {:>4}, n = {:>2}, {:<8} {:<10} {d}", r.q, r.n, r.class.label(), r.method.label());
        }
        let _ = writeln!(csv, "{},{},{},{},\"{d}\"", r.q, r.n, r.class, r.method.label());
    }
    let mut counts = BTreeMap::new();
    for m in [Method::Bound, Method::Resolver, Method::Table, Method::Sieve, Method::Direct, Method::Unresolved] {
        counts.insert(m.label(), report.count(m));
    }
    let mut unresolved = BTreeMap::new();
    let mut status = EXIT_OK;
    for &n in &ns {
        for &class in &classes {
            let open = report.unresolved(n, class);
            if n >= 9 && !open.is_empty() {
                status = EXIT_MISMATCH;
            }
            let _ = writeln!(text, "n = {n}, {class}: {} unresolved{}", open.len(), if open.is_empty() { String::new() } else { format!(": {}", list(&open)) });
            unresolved.insert(format!("{n}/{class}"), open);
        }
    }
    let counts_line = counts.iter().map(|(k, v)| format!("{k} {v}")).collect::<Vec<_>>().join(", ");
    let summary = format!("{} cases: {counts_line}", report.records.len());
    text.push_str(&summary);
    text.push('\n');
    Ok(Report {
        status,
        text,
        summary,
        json: json!({ "records": report.records, "counts": counts, "unresolved": unresolved }),
        csv: Some(csv),
    })
}

pub fn exceptions(n: u32, pattern: &str, mode: DirectArg, all: bool) -> Result<Report, Exit> {
    let class = class_arg(pattern)?;
    let mut certifier = Certifier::new(direct_store(mode, all));
    let doc = certifier.table_document(n, class)?;
    let mut text = format!("possible exceptions for n = {n}, {class} ({}):\n", doc.exceptions.len());
    let mut csv = String::from("q,omega,t_omega,method\n");
    for (&q, method) in &doc.eliminated_by {
        let w = class_omega(q, n, class)?;
        let t = doc.rows[w - 1].rhs_root;
        let _ = writeln!(text, "  q = {q:>4}  omega = {w:>2}  t = {t:>8.2}  {}", method.label());
        let _ = writeln!(csv, "{q},{w},{t:.2},{}", method.label());
    }
    let open: Vec<u64> = doc
        .eliminated_by
        .iter()
        .filter(|(_, m)| **m == Method::Unresolved)
        .map(|(q, _)| *q)
        .collect();
    let summary = format!("{} possible exceptions, {} unresolved", doc.exceptions.len(), open.len());
    text.push_str(&summary);
    text.push('\n');
    Ok(Report {
        status: EXIT_OK,
        text,
        summary,
        json: json!(doc),
        csv: Some(csv),
    })
}
