//! Multiplicative and additive character sums over F_{q^n}.

mod bounds;
mod identities;
mod sums;
mod table;
mod weil;

pub use bounds::{
    check_all_bounds, t8_bound, t8_brackets, t_bound, BoundCheck, BoundChecker, BoundReport,
    DESK_BUDGET,
};
pub use identities::{reduction_sides, Reduction};
pub use sums::{
    s_sum, t1_closed_form, t8_sum, t_index_set, t_sum, t_triples, vinogradov_indicator,
    Aggregator,
};
pub use table::{CharTable, Character, TABLE_LIMIT};
pub use weil::{weil_instance, weil_mixed_bound_check, weil_sum, WeilInstance, WeilReport, WEIL_MAX_Q};
