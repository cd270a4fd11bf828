//! Arithmetic in F_p < F_q < F_{q^n}.

mod base;
mod ext;
pub mod poly;

pub use base::{BaseField, MAX_TABLE_Q};
pub use ext::{order_big, FieldCtx, FieldElem};
pub use poly::{is_irreducible, lex_irreducibles, Poly};

use crate::Result;

/// Builds the context for F_{p^{rn}}; see [`FieldCtx::with_seed`].
pub fn ctx_new(p: u64, r: u32, n: usize, seed: Option<u64>) -> Result<FieldCtx> {
    FieldCtx::with_seed(p, r, n, seed)
}

/// Context for F_{q^n} where q is given as a prime power.
pub fn ctx_for_q(q: u64, n: usize) -> Result<FieldCtx> {
    let (p, r) = crate::nt::prime_power(q)?;
    FieldCtx::new(p, r, n)
}
