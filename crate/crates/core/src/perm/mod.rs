//! Finite groups as permutation groups.
//!
//! Points are 0-based and permutations act on the left, so a product
//! `g h` acts by `h` first. Commutators are `[x, y] = x^-1 y^-1 x y`
//! throughout the crate.

mod construct;
mod group;
mod permutation;
mod subgroup;

pub use construct::{
    abelian, alternating, cyclic, cyclic_semidirect, dicyclic, dihedral, direct_product, from_regular, heisenberg_mod,
    quaternion, semidirect_product, symmetric, Automorphism, SemidirectProduct,
};
pub use group::{FiniteGroup, DEFAULT_MAX_LATTICE_ORDER, DEFAULT_MAX_ORDER};
pub use permutation::Permutation;
pub use subgroup::{Quotient, Subgroup};
