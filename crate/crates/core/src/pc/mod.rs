//! Polycyclic presentations and their subgroups.
//!
//! Elements are exponent vectors in normal form. Conjugation is
//! `x^g = g^-1 x g` and commutators are `[x, y] = x^-1 y^-1 x y`, matching
//! the finite group module.

mod consistency;
mod presentation;
mod quotient;
mod section;
mod series;
mod subgroup;
mod witness;

pub use consistency::Overlap;
pub use presentation::{PcBuilder, PcElement, PcPresentation, DEFAULT_COLLECTION_CAP};
pub use quotient::{FiniteImage, PcQuotient};
pub use section::AbelianSection;
pub use series::DEFAULT_LCS_DEPTH;
pub use subgroup::PcSubgroup;
pub use witness::{LevelFailure, WitnessReport, DEFAULT_K_MAX};
