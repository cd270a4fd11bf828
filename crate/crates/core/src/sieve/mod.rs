//! Inequalities that certify N > 0 without counting: the eight sufficiency
//! bounds, the resolver for n >= 13, the sieve with complementary divisors,
//! the threshold tables for 7 <= n <= 12 and the certification chain.

pub mod constants;
mod surd;

pub use surd::QuadSurd;
mod resolver;
mod sufficiency;

pub use resolver::{
    large_n_resolver, large_n_resolver_with_omega, magnitude_failures, nonzeros_magnitude, power_exceeds_power_of_two,
    strong_form, zeros_magnitude, Resolution, ResolverRule, ResolverStep, ResolverTrace,
};
pub use sufficiency::{
    p_zeros, p_zeros_closed, pattern_omega, r_zeros, r_zeros_closed, sufficiency_bound, sufficiency_lhs,
    sufficiency_rhs,
};
mod plan;

pub use plan::{
    sieve_condition, sieve_lower_bound, sieve_rhs, sieve_rhs_exact, sieve_rhs_specialized, validate_plan, SievePlan,
};
mod tables;

pub use tables::{
    admissible_primes, class_omega, class_pattern, column_label, exceptions_of, exponent, generate_table, guarded_lt,
    ln_q0, policy_plan, possible_exceptions, sufficiency_threshold, SieveTable, TableRow, GUARD_BAND,
};
mod certify;

pub use certify::{
    default_direct_scope, elimination_plan, reported_direct_scope, target_primes, CertifyReport, Certifier, ChainRecord,
    DirectMode, DirectRecord, DirectSource, DirectStore, Evidence, Method, TableDocument,
};
mod golden;

pub use golden::{
    compare_with_ledger, compare_with_print, known_discrepancies, printed_tables, sieve_eliminated, GoldenReport, KnownDiscrepancy, Mismatch,
    PrintedTable, TableKind, TABLE_TOLERANCE,
};
