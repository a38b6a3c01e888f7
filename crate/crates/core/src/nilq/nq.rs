use std::collections::BTreeSet;
use std::fmt;

use crate::arith::{check_prime, gcd};
use crate::error::{Error, Result};
use crate::io::{FpPresentation, Word};
use crate::pc::{AbelianSection, PcQuotient, PcSubgroup};

use super::free::{free_nilpotent_named, FreeNilpotent};
use super::hall::DEFAULT_HALL_CAP;
use super::snf::AbelianInvariants;

/// Limits for the nilpotent quotient algorithm.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NqLimits {
    pub max_class: usize,
    pub max_rank: usize,
    /// Cap on the number of Hall basis elements.
    pub max_generators: usize,
}

impl Default for NqLimits {
    fn default() -> Self {
        NqLimits { max_class: 5, max_rank: 6, max_generators: DEFAULT_HALL_CAP }
    }
}

impl NqLimits {
    fn check(&self, rank: usize, class: usize) -> Result<()> {
        if class == 0 {
            return Err(Error::Precondition("class must be at least 1".into()));
        }
        if class > self.max_class {
            return Err(Error::Cap { what: "nilpotency class", cap: self.max_class });
        }
        if rank > self.max_rank {
            return Err(Error::Cap { what: "number of generators", cap: self.max_rank });
        }
        Ok(())
    }
}

/// Invariants of the lower central layers `γ_k G / γ_{k+1} G`, `k = 1..=class`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Fingerprint {
    pub class: usize,
    pub layers: Vec<AbelianInvariants>,
}

impl Fingerprint {
    pub fn is_torsion_free(&self) -> bool {
        self.layers.iter().all(AbelianInvariants::is_torsion_free)
    }

    /// The fingerprint of `G/γ_{c+1}G` for `c ≤ class`.
    pub fn truncate(&self, class: usize) -> Fingerprint {
        Fingerprint { class: class.min(self.class), layers: self.layers[..class.min(self.class)].to_vec() }
    }
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let layers: Vec<String> = self.layers.iter().map(ToString::to_string).collect();
        write!(f, "({})", layers.join(", "))
    }
}

/// `G/γ_{c+1}G` for a finitely presented `G`.
#[derive(Clone, Debug)]
pub struct NqResult {
    pub class: usize,
    pub free: FreeNilpotent,
    /// Normal closure of the relators in the free nilpotent group.
    pub kernel: PcSubgroup,
    pub quotient: PcQuotient,
    pub fingerprint: Fingerprint,
}

pub fn nq(fp: &FpPresentation, class: usize) -> Result<NqResult> {
    nq_with_limits(fp, class, &NqLimits::default())
}

/// Evaluates the relators in `F/γ_{c+1}F`, takes their normal closure and
/// reads the layers off the images of `γ_k F`.
pub fn nq_with_limits(fp: &FpPresentation, class: usize, limits: &NqLimits) -> Result<NqResult> {
    limits.check(fp.rank(), class)?;
    if fp.rank() == 0 {
        return Err(Error::Precondition("presentation has no generators".into()));
    }
    let free = free_nilpotent_named(fp.generators.clone(), class, limits.max_generators)?;
    let p = &free.presentation;
    let images = fp.relator_indices().iter().map(|r| free.eval(r)).collect::<Result<Vec<_>>>()?;
    let kernel = p.normal_closure(&images)?;
    let mut layers = Vec::with_capacity(class);
    let mut upper = free.lcs_term(1)?.join(&kernel)?;
    for k in 1..=class {
        let lower = free.lcs_term(k + 1)?.join(&kernel)?;
        layers.push(AbelianSection::new(&upper, &lower)?.invariants());
        upper = lower;
    }
    let quotient = p.quotient(&kernel)?;
    Ok(NqResult { class, free, kernel, quotient, fingerprint: Fingerprint { class, layers } })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerComparison {
    pub weight: usize,
    pub left: AbelianInvariants,
    pub right: AbelianInvariants,
}

impl LayerComparison {
    pub fn equal(&self) -> bool {
        self.left == self.right
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PQuotientComparison {
    pub prime: u64,
    pub level: usize,
    pub left: u128,
    pub right: u128,
}

impl PQuotientComparison {
    pub fn equal(&self) -> bool {
        self.left == self.right
    }
}

/// Layer-by-layer comparison of two presentations up to a class, plus the
/// orders of `G/γ_{k,p}G` for `k ≤ class + 1`. Agreement is a necessary
/// condition for the two groups to share their nilpotent quotients, not a
/// sufficient one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub class: usize,
    pub left: Fingerprint,
    pub right: Fingerprint,
    pub layers: Vec<LayerComparison>,
    pub p_quotients: Vec<PQuotientComparison>,
}

impl Comparison {
    pub fn all_equal(&self) -> bool {
        self.layers.iter().all(LayerComparison::equal) && self.p_quotients.iter().all(PQuotientComparison::equal)
    }

    /// The first weight whose layers differ.
    pub fn first_mismatch(&self) -> Option<usize> {
        self.layers.iter().find(|l| !l.equal()).map(|l| l.weight)
    }
}

pub fn fingerprint_compare(
    left: &FpPresentation,
    right: &FpPresentation,
    class: usize,
    primes: &BTreeSet<u64>,
    limits: &NqLimits,
) -> Result<Comparison> {
    for &p in primes {
        check_prime(p)?;
    }
    let a = nq_with_limits(left, class, limits)?;
    let b = nq_with_limits(right, class, limits)?;
    let layers = (0..class)
        .map(|k| LayerComparison {
            weight: k + 1,
            left: a.fingerprint.layers[k].clone(),
            right: b.fingerprint.layers[k].clone(),
        })
        .collect();
    let mut p_quotients = Vec::new();
    for &p in primes {
        for level in 2..=class + 1 {
            let order = |r: &NqResult| -> Result<u128> {
                let q = r.quotient.presentation.p_quotient(p, level)?;
                Ok(q.presentation.group_order()?.expect("finite p-quotient"))
            };
            p_quotients.push(PQuotientComparison { prime: p, level, left: order(&a)?, right: order(&b)? });
        }
    }
    Ok(Comparison { class, left: a.fingerprint, right: b.fingerprint, layers, p_quotients })
}

/// Where a relator first shows up in the lower central series of the free
/// group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelatorAnalysis {
    pub weight: usize,
    /// Exponents of the weight-`weight` basic commutators.
    pub coordinates: Vec<i64>,
    /// The basic commutators the coordinates refer to.
    pub labels: Vec<String>,
    pub proper_power: bool,
}

impl RelatorAnalysis {
    pub fn content(&self) -> i64 {
        self.coordinates.iter().fold(0, |g, &x| gcd(g, x))
    }
}

/// The least `k` with `w ∈ γ_k F \ γ_{k+1} F` together with the image of
/// `w` in `γ_k F / γ_{k+1} F` over the Hall basis.
pub fn relator_analysis(word: &Word, generators: &[String], max_class: usize) -> Result<RelatorAnalysis> {
    relator_analysis_capped(word, generators, max_class, DEFAULT_HALL_CAP)
}

pub fn relator_analysis_capped(
    word: &Word,
    generators: &[String],
    max_class: usize,
    cap: usize,
) -> Result<RelatorAnalysis> {
    if word.is_identity() {
        return Err(Error::TrivialWord);
    }
    if max_class == 0 {
        return Err(Error::Precondition("class must be at least 1".into()));
    }
    let indices = word.to_indices(generators)?;
    let free = free_nilpotent_named(generators.to_vec(), max_class, cap)?;
    let x = free.eval(&indices)?;
    for k in 1..=max_class {
        let range = free.basis.of_weight(k);
        let coordinates: Vec<i64> = x.exponents()[range.clone()].to_vec();
        if coordinates.iter().any(|&e| e != 0) {
            let labels = range.map(|i| free.label(i)).collect();
            let content = coordinates.iter().fold(0, |g, &e| gcd(g, e));
            return Ok(RelatorAnalysis { weight: k, coordinates, labels, proper_power: content > 1 });
        }
    }
    Err(Error::WeightExceedsBound(max_class))
}
