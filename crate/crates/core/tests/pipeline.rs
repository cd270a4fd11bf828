//! Cross-module invariants: counts against Euler's phi, coefficient
//! conventions, and certificates that replay.

use num_traits::ToPrimitive;
use proptest::prelude::*;
use pt3_core::coeff::{coeffs_to_traces, traces_to_coeffs};
use pt3_core::count::{count_efree_grid, Tier};
use pt3_core::field::{ctx_for_q, BaseField};
use pt3_core::nt::{euler_phi, factor_qn_minus_1, prime_power, prime_powers_in};
use pt3_core::pattern::PatternClass;
use pt3_core::sieve::{Certifier, DirectMode, DirectStore, Method};

const SMALL_Q: [u64; 5] = [5, 7, 11, 13, 25];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn grid_totals_phi_and_divides_by_n(qi in 0usize..SMALL_Q.len(), n in 2usize..=4) {
        let q = SMALL_Q[qi];
        let ctx = ctx_for_q(q, n).unwrap();
        let tier = if ctx.size() <= 78125 { Tier::Scalar } else { Tier::Parallel };
        let rep = count_efree_grid(&ctx, ctx.order() as u64, tier).unwrap();
        let phi = euler_phi(&factor_qn_minus_1(q, n as u32).unwrap()).to_u64().unwrap();
        prop_assert_eq!(rep.grid.iter().sum::<u64>(), phi);
        // conjugates share a trace triple, so each cell counts whole orbits
        prop_assert!(rep.grid.iter().all(|&c| c % n as u64 == 0));
        if tier == Tier::Scalar {
            let other = count_efree_grid(&ctx, ctx.order() as u64, Tier::Parallel).unwrap();
            prop_assert_eq!(&rep.grid, &other.grid);
        }
    }

    #[test]
    fn traces_and_coefficients_round_trip(qi in 0usize..SMALL_Q.len(), a in 0u64..25, b in 0u64..25, c in 0u64..25) {
        let q = SMALL_Q[qi];
        let (p, r) = prime_power(q).unwrap();
        let field = BaseField::new(p, r).unwrap();
        let (a, b, c) = (a % q, b % q, c % q);
        let f = traces_to_coeffs(a, b, c, &field).unwrap();
        prop_assert_eq!(coeffs_to_traces(f[0], f[1], f[2], &field).unwrap(), [a, b, c]);
        // f1 is the trace itself
        prop_assert_eq!(f[0], a);
    }

    #[test]
    fn certificates_from_nine_up_settle_and_replay(i in 0usize..168, n in 9u32..=12, zeros in any::<bool>()) {
        let qs = prime_powers_in(5, 1000);
        let q = qs[i % qs.len()];
        let class = if zeros { PatternClass::Zeros } else { PatternClass::Nonzeros };
        let mut c = Certifier::new(DirectStore::new(DirectMode::Compute, false, None));
        let rec = c.certify(q, n, class).unwrap();
        prop_assert_ne!(rec.method, Method::Unresolved);
        prop_assert!(c.replay(&rec).unwrap());
    }
}

#[test]
fn direct_links_are_only_needed_for_small_q() {
    let mut c = Certifier::new(DirectStore::new(DirectMode::Off, false, None));
    let report = c
        .certify_all(&prime_powers_in(5, 1000), &[9, 10, 11, 12], &[PatternClass::Zeros, PatternClass::Nonzeros])
        .unwrap();
    let open: Vec<(u64, u32)> = report
        .records
        .iter()
        .filter(|r| r.method == Method::Unresolved)
        .map(|r| (r.q, r.n))
        .collect();
    assert!(!open.is_empty());
    assert!(open.iter().all(|&(q, _)| q <= 11), "{open:?}");
}
