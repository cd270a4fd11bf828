//! Finite-field toolkit for primitive polynomials with three prescribed
//! coefficients over F_q, q = p^r with p >= 5.
//!
//! The crate is split along the lines of the argument it supports:
//!
//! * [`field`]: arithmetic in the tower F_p < F_q < F_{q^n}.
//! * [`nt`]: factorization and the arithmetic functions used by the sieve.
//! * [`coeff`]: coefficients of minimal polynomials from traces.
//! * [`charsum`]: character tables, the sums S and T_i, and their bounds.
//! * [`sieve`]: sufficiency bounds, sieve plans, threshold tables and certification.
//! * [`count`]: direct enumeration of e-free elements by trace triple.

pub mod charsum;
pub mod coeff;
pub mod count;
mod error;
pub mod field;
pub mod nt;
pub mod pattern;
pub mod sieve;

pub use error::{Error, Result};
