//! Pro-p completions of finite groups and embeddability of subgroups.
//!
//! For a finite group the pro-p completion is the maximal p-quotient
//! `G/O^p(G)`, where `O^p(G)` is the stable term of the p-lower central
//! series. A subgroup `H` is pro-p embeddable when `H ∩ O^p(G) = O^p(H)`.

use std::collections::BTreeSet;

use fixedbitset::FixedBitSet;

use crate::arith::{check_prime, is_p_number, is_power_of, p_part, prime_divisors};
use crate::error::{Error, Result};
use crate::perm::{FiniteGroup, Quotient, Subgroup, DEFAULT_MAX_LATTICE_ORDER};

#[cfg(test)]
mod tests;

/// `γ_1 = h`, `γ_{n+1} = [γ_n, h]·⟨x^p : x ∈ γ_n⟩`, computed inside the
/// parent of `h`. Ends at the trivial group or at the first repeated term,
/// which is listed twice.
fn p_series_of(g: &FiniteGroup, h: &Subgroup, p: u64) -> Vec<Subgroup> {
    let mut series = vec![h.clone()];
    loop {
        let last = series.last().unwrap();
        let comm = g.commutator_subgroup(last, h).expect("own subgroups");
        let next = comm.join(&g.power_subgroup(last, p as i64));
        let stop = next.is_trivial() || next == *last;
        series.push(next);
        if stop {
            return series;
        }
    }
}

pub fn p_lower_central_series(g: &FiniteGroup, p: u64) -> Result<Vec<Subgroup>> {
    check_prime(p)?;
    Ok(p_series_of(g, &g.whole(), p))
}

/// `O^p(G)`, the smallest normal subgroup with p-group quotient.
pub fn p_residual(g: &FiniteGroup, p: u64) -> Result<Subgroup> {
    check_prime(p)?;
    Ok(p_series_of(g, &g.whole(), p).pop().unwrap())
}

/// `O^p(H)` for a subgroup of `g`, as a subgroup of `g`.
pub fn p_residual_of(g: &FiniteGroup, h: &Subgroup, p: u64) -> Result<Subgroup> {
    check_prime(p)?;
    if !g.same_group(h.parent()) {
        return Err(Error::ForeignSubgroup);
    }
    Ok(p_series_of(g, h, p).pop().unwrap())
}

/// `O^p(G)` as the intersection of all normal subgroups of p-power index.
/// Enumerates the normal subgroup lattice, so `|G|` must be within `max_order`.
pub fn p_residual_by_intersection(g: &FiniteGroup, p: u64, max_order: usize) -> Result<Subgroup> {
    check_prime(p)?;
    let mut acc = g.whole();
    for n in g.normal_subgroups(max_order)? {
        if is_power_of(n.index() as u64, p) {
            acc = acc.intersection(&n);
        }
    }
    Ok(acc)
}

/// `O^p(G)` as the kernel of the projection onto `G/M`, where `M` is
/// generated by the elements of order prime to `p`. Fails with
/// `Inconsistent` if that quotient is not a p-group.
pub fn p_residual_by_quotient(g: &FiniteGroup, p: u64) -> Result<Subgroup> {
    check_prime(p)?;
    let coprime: Vec<usize> = (0..g.order()).filter(|&x| !(g.element_order(x) as u64).is_multiple_of(p)).collect();
    let m = g.subgroup_by_indices(&coprime);
    let q = g.quotient(&m)?;
    if !is_power_of(q.group.order() as u64, p) {
        return Err(Error::Inconsistent(format!("G/M has order {}, not a power of {p}", q.group.order())));
    }
    Ok(q.kernel_of_projection(g))
}

/// The pro-p completion `G → G/O^p(G)` of a finite group.
#[derive(Clone, Debug)]
pub struct PResidual {
    pub group: FiniteGroup,
    pub prime: u64,
    /// `O^p(G)`.
    pub residual: Subgroup,
    /// The quotient map onto the completion.
    pub projection: Quotient,
}

impl PResidual {
    /// The completion `G/O^p(G)`, a p-group.
    pub fn completion(&self) -> &FiniteGroup {
        &self.projection.group
    }
}

pub fn pro_p_completion(g: &FiniteGroup, p: u64) -> Result<PResidual> {
    let residual = p_residual(g, p)?;
    let projection = g.quotient(&residual)?;
    debug_assert!(is_power_of(projection.group.order() as u64, p));
    Ok(PResidual { group: g.clone(), prime: p, residual, projection })
}

/// Outcome of a pro-p embeddability test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Embedding {
    Embeddable,
    /// `witness` lies in `H ∩ O^p(G)` but not in `O^p(H)`.
    NotEmbeddable {
        witness: usize,
    },
}

impl Embedding {
    pub fn is_embeddable(&self) -> bool {
        matches!(self, Embedding::Embeddable)
    }
}

pub fn is_pro_p_embeddable(g: &FiniteGroup, h: &Subgroup, p: u64) -> Result<Embedding> {
    let oh = p_residual_of(g, h, p)?;
    let meet = h.intersection(&p_residual(g, p)?);
    debug_assert!(oh.is_subset_of(&meet));
    let witness = meet.elements().find(|&x| !oh.contains(x));
    Ok(match witness {
        None => Embedding::Embeddable,
        Some(witness) => Embedding::NotEmbeddable { witness },
    })
}

/// Searches for `N ⊴ G` of p-power index with `N ∩ H ⊆ Λ`.
///
/// Such an `N` exists exactly when `O^p(G) ∩ H ⊆ Λ`. When it does, the
/// largest one in lattice order is returned, found among the preimages of
/// normal subgroups of `G/O^p(G)`. If that quotient is too large to
/// enumerate, `O^p(G)` itself is returned.
pub fn embeddability_witness(g: &FiniteGroup, h: &Subgroup, lambda: &Subgroup, p: u64) -> Result<Option<Subgroup>> {
    check_prime(p)?;
    if !g.same_group(h.parent()) || !g.same_group(lambda.parent()) {
        return Err(Error::ForeignSubgroup);
    }
    if !lambda.is_subset_of(h) {
        return Err(Error::Precondition("Λ is not contained in H".into()));
    }
    if !h.generators().iter().all(|&x| lambda.generators().iter().all(|&y| lambda.contains(g.conj(y, x)))) {
        return Err(Error::Precondition("Λ is not normal in H".into()));
    }
    let index = (h.order() / lambda.order()) as u64;
    if !is_power_of(index, p) {
        return Err(Error::Precondition(format!("[H:Λ] = {index} is not a power of {p}")));
    }
    let residual = p_residual(g, p)?;
    if !h.intersection(&residual).is_subset_of(lambda) {
        return Ok(None);
    }
    let q = g.quotient(&residual)?;
    let Ok(normals) = q.group.normal_subgroups(DEFAULT_MAX_LATTICE_ORDER) else {
        return Ok(Some(residual));
    };
    for m in normals.iter().rev() {
        let n = q.preimage(g, m);
        if h.intersection(&n).is_subset_of(lambda) {
            return Ok(Some(n));
        }
    }
    unreachable!("the preimage of the trivial subgroup is O^p(G)")
}

/// Result of checking that a finite group is nilpotent exactly when every
/// subgroup is pro-p embeddable for every prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CVerdict {
    Nilpotent,
    Counterexample { subgroup: Subgroup, prime: u64, witness: usize },
}

impl CVerdict {
    /// Re-derives a counterexample from scratch: the witness must lie in
    /// `H ∩ O^p(G)` and outside `O^p(H)`.
    pub fn recheck(&self, g: &FiniteGroup) -> bool {
        match self {
            CVerdict::Nilpotent => g.is_nilpotent(),
            CVerdict::Counterexample { subgroup, prime, witness } => {
                let (Ok(og), Ok(oh)) = (p_residual(g, *prime), p_residual_of(g, subgroup, *prime)) else {
                    return false;
                };
                subgroup.contains(*witness) && og.contains(*witness) && !oh.contains(*witness)
            }
        }
    }
}

/// Searches all primes dividing `|G|` (smallest first) and all subgroups
/// (in lattice order) for a failure of pro-p embeddability, and compares
/// the outcome with the lower central series test. Disagreement is
/// reported as `Inconsistent`.
pub fn theorem_c_verify(g: &FiniteGroup) -> Result<CVerdict> {
    theorem_c_verify_capped(g, DEFAULT_MAX_LATTICE_ORDER)
}

pub fn theorem_c_verify_capped(g: &FiniteGroup, max_order: usize) -> Result<CVerdict> {
    let subgroups = g.all_subgroups(max_order)?;
    let nilpotent = g.is_nilpotent();
    let mut found = None;
    'primes: for p in prime_divisors(g.order() as u64) {
        let og = p_residual(g, p)?;
        for h in &subgroups {
            let oh = p_residual_of(g, h, p)?;
            if let Some(witness) = h.intersection(&og).elements().find(|&x| !oh.contains(x)) {
                found = Some(CVerdict::Counterexample { subgroup: h.clone(), prime: p, witness });
                break 'primes;
            }
        }
    }
    match (nilpotent, found) {
        (true, None) => Ok(CVerdict::Nilpotent),
        (false, Some(c)) => Ok(c),
        (true, Some(c)) => Err(Error::Inconsistent(format!("nilpotent group with counterexample {c:?}"))),
        (false, None) => Err(Error::Inconsistent("non-nilpotent group with every subgroup embeddable".into())),
    }
}

/// `R_P(H) = {g : g^n ∈ H for some P-number n}` in a finite group.
#[derive(Clone, Debug)]
pub struct PRadical {
    pub elements: FixedBitSet,
    /// The radical as a subgroup, when the set is closed under products.
    pub subgroup: Option<Subgroup>,
    /// `|R_P(H) : H|` when the radical is a subgroup.
    pub index: Option<usize>,
}

impl PRadical {
    pub fn is_subgroup(&self) -> bool {
        self.subgroup.is_some()
    }

    pub fn len(&self) -> usize {
        self.elements.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Computes `R_P(H)`. With `P` empty only `n = 1` qualifies, so the result
/// is `H`. For nilpotent `G` the radical must be a subgroup of `P`-number
/// index over `H`; a violation is reported as `Inconsistent`.
pub fn p_radical_finite(g: &FiniteGroup, h: &Subgroup, primes: &BTreeSet<u64>) -> Result<PRadical> {
    if !g.same_group(h.parent()) {
        return Err(Error::ForeignSubgroup);
    }
    for &p in primes {
        check_prime(p)?;
    }
    // g^n ∈ H for a P-number n iff g^m ∈ H for m the P-part of the order of g.
    let mut elements = FixedBitSet::with_capacity(g.order());
    for x in 0..g.order() {
        let o = g.element_order(x) as u64;
        let m = p_part(o, primes);
        if h.contains(g.pow(x, m as i64)) {
            elements.insert(x);
        }
    }
    let closed = elements.ones().all(|x| elements.ones().all(|y| elements.contains(g.mul(x, y))));
    let subgroup = closed.then(|| Subgroup::from_members(g, elements.clone()));
    let index = subgroup.as_ref().map(|r| r.order() / h.order());
    if g.is_nilpotent() && !index.is_some_and(|i| is_p_number(i as u64, primes)) {
        return Err(Error::Inconsistent("radical in a nilpotent group is not a subgroup of P-number index".into()));
    }
    Ok(PRadical { elements, subgroup, index })
}
