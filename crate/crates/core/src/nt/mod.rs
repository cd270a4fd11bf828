//! Number theory: primality, factorization and arithmetic functions.

mod arith;
mod factor;
mod mont;
mod prime;

pub use arith::*;
pub use factor::{
    cyclotomic_value, factor_q_value, factor_qn_minus_1, factorize, factorize_u128, Factorization,
    Factorizer, DEFAULT_RHO_BUDGET,
};
pub use mont::mul_mod;
pub use prime::{is_prime_big, is_prime_u128, is_prime_u64, sieve, small_primes, MR_DETERMINISTIC_LIMIT};
