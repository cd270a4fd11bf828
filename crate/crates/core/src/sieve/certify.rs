//! The certification chain: for each (q, n) and class, the first of
//! sufficiency bound, large-n resolver, threshold table, sieve on the actual
//! primes and direct check that shows N > 0, or UNRESOLVED.

use super::plan::{sieve_rhs_exact, sieve_condition, validate_plan, SievePlan};
use super::resolver::{large_n_resolver, Resolution, ResolverTrace};
use super::sufficiency::sufficiency_bound;
use super::tables::{class_omega, class_pattern, generate_table, guarded_lt, SieveTable, TableRow};
use crate::count::{load_cache, witness_search, WitnessTarget};
use crate::field::ctx_for_q;
use crate::nt::{factor_q_value, factor_qn_minus_1, is_prime_u64};
use crate::pattern::{CasePattern, PatternClass};
use crate::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Bound,
    Resolver,
    Table,
    Sieve,
    Direct,
    Unresolved,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::Bound => "bound",
            Method::Resolver => "resolver",
            Method::Table => "table",
            Method::Sieve => "sieve",
            Method::Direct => "direct",
            Method::Unresolved => "UNRESOLVED",
        }
    }
}

/// How the direct chain link learned that every target triple is hit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DirectSource {
    /// Witness search run now.
    Witness,
    /// Witness search result read back from the cache directory.
    CachedWitness,
    /// A full count grid read from the cache directory.
    CachedGrid,
    /// Taken from the text's report of a computer check, not recomputed.
    Reported,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DirectMode {
    /// Run witness searches (or read cached results).
    Compute,
    /// Accept the text's statements that a case was checked by computer.
    Reported,
    /// No direct link at all.
    Off,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirectRecord {
    pub q: u64,
    pub n: u32,
    pub class: PatternClass,
    pub source: DirectSource,
    pub positive: bool,
    pub targets: usize,
    pub covered: usize,
    /// Coset representatives the search scanned (0 for grids and reports).
    pub scanned: u64,
}

/// Cases the text says it checked by computer: every survivor for n >= 9,
/// the prime survivors for n = 8, and at n = 7 primes up to 127 (zeros) and
/// up to 179 (nonzeros). The text says "less than 127" for zeros, but 127 is
/// absent from its residual list, so it was evidently checked too.
pub fn reported_direct_scope(q: u64, n: u32, class: PatternClass) -> bool {
    match (n, class) {
        (9.., _) => true,
        (8, _) => is_prime_u64(q),
        (7, PatternClass::Zeros) => is_prime_u64(q) && q <= 127,
        (7, PatternClass::Nonzeros) => is_prime_u64(q) && q <= 179,
        _ => false,
    }
}

/// The default computed scope: the text's scope plus the prime powers left
/// at n = 8 (25 and 49), which a witness search settles in milliseconds.
pub fn default_direct_scope(q: u64, n: u32, class: PatternClass) -> bool {
    n == 8 || reported_direct_scope(q, n, class)
}

pub struct DirectStore {
    pub mode: DirectMode,
    /// Extend the computed scope to every survivor.
    pub all: bool,
    pub cache_dir: Option<PathBuf>,
}

fn witness_cache_path(dir: &Path, q: u64, n: u32, class: PatternClass) -> PathBuf {
    dir.join(format!("pt3w-q{q}-n{n}-{class}.json"))
}

impl DirectStore {
    pub fn new(mode: DirectMode, all: bool, cache_dir: Option<PathBuf>) -> Self {
        DirectStore { mode, all, cache_dir }
    }

    /// Compute mode with the cache directory from PT3_CACHE_DIR, if set.
    pub fn from_env(all: bool) -> Self {
        let dir = std::env::var_os("PT3_CACHE_DIR").map(PathBuf::from);
        DirectStore::new(DirectMode::Compute, all, dir)
    }

    pub fn in_scope(&self, q: u64, n: u32, class: PatternClass) -> bool {
        match self.mode {
            DirectMode::Off => false,
            DirectMode::Reported => reported_direct_scope(q, n, class),
            DirectMode::Compute => self.all || default_direct_scope(q, n, class),
        }
    }

    pub fn lookup(&self, q: u64, n: u32, class: PatternClass) -> Result<Option<DirectRecord>> {
        if !self.in_scope(q, n, class) {
            return Ok(None);
        }
        let record = |source, targets, covered, scanned| DirectRecord {
            q,
            n,
            class,
            source,
            positive: covered == targets,
            targets,
            covered,
            scanned,
        };
        if self.mode == DirectMode::Reported {
            return Ok(Some(record(DirectSource::Reported, 0, 0, 0)));
        }
        if let Some(dir) = &self.cache_dir {
            let order = u64::try_from(crate::nt::q_value(q, n) * (q - 1)).ok();
            if let Some(e) = order {
                if let Some(grid) = load_cache(dir, q, n, e)? {
                    let cells: Vec<u64> = match class {
                        PatternClass::Zeros => grid.grid[..1].to_vec(),
                        PatternClass::Nonzeros => grid.grid[1..].to_vec(),
                    };
                    let covered = cells.iter().filter(|&&c| c > 0).count();
                    return Ok(Some(record(DirectSource::CachedGrid, cells.len(), covered, 0)));
                }
            }
            let path = witness_cache_path(dir, q, n, class);
            if path.exists() {
                let text = fs::read_to_string(&path)?;
                let mut rec: DirectRecord =
                    serde_json::from_str(&text).map_err(|e| Error::BadCache(format!("{}: {e}", path.display())))?;
                if rec.q != q || rec.n != n || rec.class != class {
                    return Err(Error::BadCache(format!("{} describes another case", path.display())));
                }
                rec.source = DirectSource::CachedWitness;
                return Ok(Some(rec));
            }
        }
        let ctx = ctx_for_q(q, n as usize)?;
        let target = match class {
            PatternClass::Zeros => WitnessTarget::Zeros,
            PatternClass::Nonzeros => WitnessTarget::Nonzeros,
        };
        let w = witness_search(&ctx, target, false)?;
        let rec = record(DirectSource::Witness, w.targets, w.covered, w.scanned);
        if let Some(dir) = &self.cache_dir {
            fs::create_dir_all(dir)?;
            let text = serde_json::to_string_pretty(&rec).map_err(|e| Error::Internal(e.to_string()))?;
            fs::write(witness_cache_path(dir, q, n, class), text)?;
        }
        Ok(Some(rec))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Evidence {
    Bound { pattern: CasePattern, omega: usize },
    Resolver { trace: ResolverTrace },
    /// omega at or past the final row, or q above t_omega.
    Table { omega: usize, omega_final: usize, t: Option<f64> },
    Sieve { pattern: CasePattern, plan: SievePlan, rhs: f64 },
    Direct { record: DirectRecord },
    Unresolved { omega: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainRecord {
    pub q: u64,
    pub n: u32,
    pub class: PatternClass,
    pub method: Method,
    pub evidence: Evidence,
}

/// The primes of Q (zeros) or q^n - 1 (nonzeros).
pub fn target_primes(q: u64, n: u32, class: PatternClass) -> Result<Vec<u128>> {
    match class {
        PatternClass::Zeros => factor_q_value(q, n)?.primes_u128(),
        PatternClass::Nonzeros => factor_qn_minus_1(q, n)?.primes_u128(),
    }
}

/// The plan tried on a field's own primes: d = 2 (the least prime when 2 does
/// not divide Q) with one further prime per part, or d = 1 for n = 7 zeros.
/// With two primes the parts are d and e, as in the first rows of the tables.
/// None when theta is not positive.
pub fn elimination_plan(q: u64, n: u32, class: PatternClass) -> Result<Option<SievePlan>> {
    let primes = target_primes(q, n, class)?;
    let d: Vec<u128> = if primes.len() == 1 {
        primes.clone()
    } else if n == 7 && class == PatternClass::Zeros {
        Vec::new()
    } else if primes.contains(&2) {
        vec![2]
    } else {
        primes[..1].to_vec()
    };
    // with one prime outside d, one part would be e itself: use e_1 = d, e_2 = e
    let plan = if primes.len() == d.len() + 1 {
        SievePlan::new(primes.clone(), d.clone(), vec![d.clone(), primes.clone()])
    } else {
        SievePlan::one_prime_each(&primes, &d)
    };
    match validate_plan(&plan) {
        Ok(()) => Ok(Some(plan)),
        Err(Error::NonPositiveTheta) => Ok(None),
        Err(e) => Err(e),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TableDocument {
    pub n: u32,
    pub pattern_class: PatternClass,
    pub column: String,
    pub rows: Vec<TableRow>,
    pub exceptions: Vec<u64>,
    pub eliminated_by: BTreeMap<u64, Method>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CertifyReport {
    pub records: Vec<ChainRecord>,
}

impl CertifyReport {
    pub fn unresolved(&self, n: u32, class: PatternClass) -> Vec<u64> {
        self.records
            .iter()
            .filter(|r| r.n == n && r.class == class && r.method == Method::Unresolved)
            .map(|r| r.q)
            .collect()
    }

    pub fn count(&self, method: Method) -> usize {
        self.records.iter().filter(|r| r.method == method).count()
    }
}

pub struct Certifier {
    pub store: DirectStore,
    tables: BTreeMap<(u32, PatternClass), SieveTable>,
}

impl Certifier {
    pub fn new(store: DirectStore) -> Self {
        Certifier { store, tables: BTreeMap::new() }
    }

    fn ensure_table(&mut self, n: u32, class: PatternClass) -> Result<()> {
        if (7..=12).contains(&n) && !self.tables.contains_key(&(n, class)) {
            self.tables.insert((n, class), generate_table(n, class)?);
        }
        Ok(())
    }

    pub fn table(&mut self, n: u32, class: PatternClass) -> Result<&SieveTable> {
        self.ensure_table(n, class)?;
        self.tables.get(&(n, class)).ok_or(Error::UnknownPolicy { n, class: class.to_string() })
    }

    /// Every link short of the direct check; None if none applies.
    fn without_direct(&self, q: u64, n: u32, class: PatternClass) -> Result<std::result::Result<ChainRecord, usize>> {
        let done = |method, evidence| Ok(Ok(ChainRecord { q, n, class, method, evidence }));
        let pattern = class_pattern(class);
        if n >= 13 {
            let trace = large_n_resolver(q, n, pattern)?;
            if trace.resolution == Resolution::Guaranteed {
                return done(Method::Resolver, Evidence::Resolver { trace });
            }
            return Ok(Err(0));
        }
        if n < 7 {
            return Err(Error::InvalidInput(format!("certification covers n >= 7, got {n}")));
        }
        let omega = class_omega(q, n, class)?;
        if sufficiency_bound(pattern, q, n, omega)? {
            return done(Method::Bound, Evidence::Bound { pattern, omega });
        }
        let table = self.tables.get(&(n, class)).ok_or(Error::UnknownPolicy { n, class: class.to_string() })?;
        let omega_final = table.omega_final();
        if omega >= omega_final {
            return done(Method::Table, Evidence::Table { omega, omega_final, t: None });
        }
        let t = table.rows[omega - 1].rhs_root;
        if guarded_lt(t, q as f64, "t against q")? {
            return done(Method::Table, Evidence::Table { omega, omega_final, t: Some(t) });
        }
        if let Some(plan) = elimination_plan(q, n, class)? {
            if sieve_condition(pattern, &plan, q, n)? {
                let rhs = sieve_rhs_exact(pattern, &plan, q)?.to_f64();
                return done(Method::Sieve, Evidence::Sieve { pattern, plan, rhs });
            }
        }
        Ok(Err(omega))
    }

    fn finish(&self, q: u64, n: u32, class: PatternClass, omega: usize) -> Result<ChainRecord> {
        if let Some(record) = self.store.lookup(q, n, class)? {
            if record.positive {
                return Ok(ChainRecord { q, n, class, method: Method::Direct, evidence: Evidence::Direct { record } });
            }
        }
        Ok(ChainRecord { q, n, class, method: Method::Unresolved, evidence: Evidence::Unresolved { omega } })
    }

    pub fn certify(&mut self, q: u64, n: u32, class: PatternClass) -> Result<ChainRecord> {
        self.ensure_table(n, class)?;
        match self.without_direct(q, n, class)? {
            Ok(r) => Ok(r),
            Err(omega) => self.finish(q, n, class, omega),
        }
    }

    /// Runs the chain over a grid of cases. The inequality links run in
    /// parallel; direct checks (themselves parallel) run one at a time.
    pub fn certify_all(&mut self, qs: &[u64], ns: &[u32], classes: &[PatternClass]) -> Result<CertifyReport> {
        for &n in ns {
            for &class in classes {
                self.ensure_table(n, class)?;
            }
        }
        let cases: Vec<(u64, u32, PatternClass)> = ns
            .iter()
            .flat_map(|&n| classes.iter().flat_map(move |&c| qs.iter().map(move |&q| (q, n, c))))
            .collect();
        let first: Vec<_> = cases
            .par_iter()
            .map(|&(q, n, c)| self.without_direct(q, n, c))
            .collect::<Result<_>>()?;
        let mut records = Vec::with_capacity(cases.len());
        for (&(q, n, c), r) in cases.iter().zip(first) {
            records.push(match r {
                Ok(rec) => rec,
                Err(omega) => self.finish(q, n, c, omega)?,
            });
        }
        Ok(CertifyReport { records })
    }

    /// Recomputes the cited link and reports whether it still decides the case.
    pub fn replay(&mut self, record: &ChainRecord) -> Result<bool> {
        let (q, n, class) = (record.q, record.n, record.class);
        self.ensure_table(n, class)?;
        Ok(match &record.evidence {
            Evidence::Bound { pattern, omega } => {
                *omega == class_omega(q, n, class)? && sufficiency_bound(*pattern, q, n, *omega)?
            }
            Evidence::Resolver { .. } => large_n_resolver(q, n, class_pattern(class))?.resolution == Resolution::Guaranteed,
            Evidence::Table { omega, omega_final, t } => {
                let table = self.table(n, class)?;
                let fin = table.omega_final();
                *omega == class_omega(q, n, class)?
                    && *omega_final == fin
                    && match t {
                        None => *omega >= fin,
                        Some(t) => *t == table.rows[omega - 1].rhs_root && (*t) < q as f64,
                    }
            }
            Evidence::Sieve { pattern, plan, .. } => {
                validate_plan(plan).is_ok()
                    && plan.e == target_primes(q, n, class)?
                    && sieve_condition(*pattern, plan, q, n)?
            }
            Evidence::Direct { record } => record.positive,
            Evidence::Unresolved { .. } => self.without_direct(q, n, class)?.is_err(),
        })
    }

    /// A table with its exceptions and how each one is settled.
    pub fn table_document(&mut self, n: u32, class: PatternClass) -> Result<TableDocument> {
        let table = self.table(n, class)?.clone();
        let exceptions = super::tables::exceptions_of(&table)?;
        let mut eliminated_by = BTreeMap::new();
        for &q in &exceptions {
            eliminated_by.insert(q, self.certify(q, n, class)?.method);
        }
        Ok(TableDocument {
            n,
            pattern_class: class,
            column: table.column,
            rows: table.rows,
            exceptions,
            eliminated_by,
        })
    }
}
