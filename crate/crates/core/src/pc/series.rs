use std::collections::BTreeSet;

use crate::arith::{check_prime, prime_divisors};
use crate::error::{Error, Result};
use crate::nilq::AbelianInvariants;

use super::presentation::PcPresentation;
use super::quotient::PcQuotient;
use super::section::AbelianSection;
use super::subgroup::PcSubgroup;

/// Default depth cap for lower central series of pc groups.
pub const DEFAULT_LCS_DEPTH: usize = 32;

impl PcPresentation {
    /// `[A, G]` for a normal subgroup `A`.
    pub fn commutator_with_whole(&self, a: &PcSubgroup) -> Result<PcSubgroup> {
        let gens = self.generators();
        let mut comms = Vec::new();
        for x in a.sequence() {
            for g in &gens {
                comms.push(self.comm(x, g)?);
            }
        }
        self.normal_closure(&comms)
    }

    /// `γ_1 = G, γ_{k+1} = [γ_k, G]`, ending with the trivial group.
    /// Fails with `NotNilpotent` if the series stalls or exceeds `depth`
    /// terms.
    pub fn lower_central_series(&self, depth: usize) -> Result<Vec<PcSubgroup>> {
        let mut series = vec![self.whole()];
        loop {
            let last = series.last().unwrap();
            if last.is_trivial() {
                return Ok(series);
            }
            if series.len() > depth {
                return Err(Error::NotNilpotent { depth });
            }
            let next = self.commutator_with_whole(last)?;
            if next == *last {
                return Err(Error::NotNilpotent { depth: series.len() });
            }
            series.push(next);
        }
    }

    pub fn is_nilpotent(&self) -> Result<bool> {
        match self.lower_central_series(DEFAULT_LCS_DEPTH) {
            Ok(_) => Ok(true),
            Err(Error::NotNilpotent { .. }) => Ok(false),
            Err(e) => Err(e),
        }
    }

    /// `[γ_k, G] γ_k^p` for a normal subgroup `γ_k`.
    pub fn next_p_term(&self, a: &PcSubgroup, p: u64) -> Result<PcSubgroup> {
        let gens = self.generators();
        let mut extra = Vec::new();
        for x in a.sequence() {
            extra.push(self.pow(x, p as i64)?);
            for g in &gens {
                extra.push(self.comm(x, g)?);
            }
        }
        self.normal_closure(&extra)
    }

    /// The terms `γ_{1,p}, ..., γ_{k,p}` of the p-lower central series.
    pub fn p_lower_central_series(&self, p: u64, k: usize) -> Result<Vec<PcSubgroup>> {
        check_prime(p)?;
        let mut series = vec![self.whole()];
        while series.len() < k {
            let next = self.next_p_term(series.last().unwrap(), p)?;
            series.push(next);
        }
        Ok(series)
    }

    /// `G/γ_{k,p}G`, a finite p-group.
    pub fn p_quotient(&self, p: u64, k: usize) -> Result<PcQuotient> {
        if k == 0 {
            return Err(Error::Precondition("level must be at least 1".into()));
        }
        let series = self.p_lower_central_series(p, k)?;
        self.quotient(series.last().unwrap())
    }

    /// Invariants of `A/B` for normal subgroups `B ≤ A` with `A/B` abelian.
    pub fn abelian_layer(&self, a: &PcSubgroup, b: &PcSubgroup) -> Result<AbelianInvariants> {
        Ok(AbelianSection::new(a, b)?.invariants())
    }

    /// Invariants of the layers `γ_k/γ_{k+1}` of the lower central series.
    pub fn lcs_layers(&self, depth: usize) -> Result<Vec<AbelianInvariants>> {
        let series = self.lower_central_series(depth)?;
        series.windows(2).map(|w| self.abelian_layer(&w[0], &w[1])).collect()
    }

    /// Primes dividing a torsion coefficient of some lower central layer.
    /// Requires a nilpotent presentation.
    pub fn torsion_primes(&self) -> Result<BTreeSet<u64>> {
        let mut primes = BTreeSet::new();
        for layer in self.lcs_layers(DEFAULT_LCS_DEPTH)? {
            for d in &layer.torsion {
                let d = u64::try_from(d).map_err(|_| Error::Overflow("torsion coefficient"))?;
                primes.extend(prime_divisors(d));
            }
        }
        Ok(primes)
    }
}
