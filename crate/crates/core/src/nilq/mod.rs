//! Free nilpotent groups, the nilpotent quotient algorithm and
//! lower-central fingerprints of finitely presented groups.

mod free;
mod hall;
mod magnus;
mod nq;
mod radical;
mod snf;

pub use free::{free_nilpotent, free_nilpotent_named, FreeNilpotent};
pub use hall::{hall_basis, hall_basis_capped, witt_rank, HallBasis, HallNode, DEFAULT_HALL_CAP};
pub use nq::{
    fingerprint_compare, nq, nq_with_limits, relator_analysis, relator_analysis_capped, Comparison, Fingerprint,
    LayerComparison, NqLimits, NqResult, PQuotientComparison, RelatorAnalysis,
};
pub use radical::p_radical_nilpotent;
pub use snf::{smith_normal_form, smith_normal_form_i64, solve_integer_system, AbelianInvariants, Snf};

#[cfg(test)]
mod tests;
