//! Pro-p completions, pro-p embeddability and separability witnesses for
//! finite, polycyclic and finitely generated nilpotent groups.
//!
//! * [`perm`]: finite permutation groups, subgroup lattices, quotients.
//! * [`prop`]: maximal p-quotients of finite groups, embeddability of
//!   subgroups, the nilpotency/embeddability verifier, radicals.
//! * [`pc`]: polycyclic presentations, collection, induced subgroups,
//!   p-quotient towers and witness searches.
//! * [`nilq`]: Hall bases, free nilpotent groups, the nilpotent quotient
//!   algorithm, Smith normal form and lower-central fingerprints.
//! * [`io`]: the presentation text format, the built-in catalog and the
//!   structured report schema.

pub mod arith;
pub mod checks;
pub mod error;
pub mod io;
pub mod nilq;
pub mod pc;
pub mod perm;
pub mod prop;

pub use error::{Error, Result};
pub use perm::{FiniteGroup, Permutation, Subgroup};
