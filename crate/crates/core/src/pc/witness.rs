use std::collections::{HashMap, VecDeque};

use crate::arith::{check_prime, is_power_of};
use crate::error::{Error, Result};

use super::presentation::{PcElement, PcPresentation};
use super::subgroup::PcSubgroup;

/// Default deepest level searched by the witness searches.
pub const DEFAULT_K_MAX: usize = 8;

/// Transversal size beyond which a failing level reports no element.
const TRANSVERSAL_CAP: usize = 100_000;

/// Outcome of a witness search through the p-lower central series.
#[derive(Clone, Debug)]
pub enum WitnessReport {
    /// `N = γ_{level,p}G` is normal of p-power index `index` and has the
    /// property searched for.
    Found { level: usize, witness: PcSubgroup, index: u128 },
    /// No level up to `last_level` worked. This is not a disproof.
    BoundedFailure { last_level: usize, failures: Vec<LevelFailure> },
}

/// Why a single level failed, with an offending element when one was found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelFailure {
    pub level: usize,
    pub element: Option<PcElement>,
}

impl WitnessReport {
    pub fn is_found(&self) -> bool {
        matches!(self, WitnessReport::Found { .. })
    }

    pub fn level(&self) -> Option<usize> {
        match self {
            WitnessReport::Found { level, .. } => Some(*level),
            WitnessReport::BoundedFailure { .. } => None,
        }
    }

    /// The deepest level examined.
    pub fn last_level(&self) -> usize {
        match self {
            WitnessReport::Found { level, .. } => *level,
            WitnessReport::BoundedFailure { last_level, .. } => *last_level,
        }
    }
}

impl PcPresentation {
    /// Searches `k = 1..=k_max` for the first level at which
    /// `H ∩ γ_{k,p}G ⊆ Λ`, decided by `[HN : ΛN] = [H : Λ]`.
    pub fn separability_witness(
        &self,
        h: &PcSubgroup,
        lambda: &PcSubgroup,
        p: u64,
        k_max: usize,
    ) -> Result<WitnessReport> {
        check_prime(p)?;
        let target = match lambda.index_in(h)? {
            Some(i) if is_power_of_u128(i, p) => i,
            Some(i) => return Err(Error::Precondition(format!("[H:Λ] = {i} is not a power of {p}"))),
            None => return Err(Error::Precondition("[H:Λ] is infinite".into())),
        };
        let mut failures = Vec::new();
        let mut n = self.whole();
        for k in 1..=k_max {
            if k > 1 {
                n = self.next_p_term(&n, p)?;
            }
            let hn = h.join(&n)?;
            let ln = lambda.join(&n)?;
            let image_index = ln.index_in(&hn)?.expect("finite quotient");
            if image_index == target {
                let index = n.index()?.expect("p-power index");
                return Ok(WitnessReport::Found { level: k, witness: n, index });
            }
            failures.push(LevelFailure { level: k, element: self.escaping_element(h, lambda, &n)? });
        }
        Ok(WitnessReport::BoundedFailure { last_level: k_max, failures })
    }

    /// The first Schreier generator of `H ∩ N` outside `Λ`, walking a
    /// transversal of `H ∩ N` in `H` breadth first.
    fn escaping_element(&self, h: &PcSubgroup, lambda: &PcSubgroup, n: &PcSubgroup) -> Result<Option<PcElement>> {
        let gens = h.generators();
        let mut reps: HashMap<PcElement, PcElement> = HashMap::new();
        let start = self.identity();
        reps.insert(n.coset_rep(&start)?, start.clone());
        let mut queue = VecDeque::from([start]);
        while let Some(t) = queue.pop_front() {
            for g in &gens {
                let tg = self.mul(&t, g)?;
                let key = n.coset_rep(&tg)?;
                match reps.get(&key) {
                    None => {
                        if reps.len() >= TRANSVERSAL_CAP {
                            return Ok(None);
                        }
                        reps.insert(key, tg.clone());
                        queue.push_back(tg);
                    }
                    Some(u) => {
                        let s = self.mul(&tg, &self.inverse(u)?)?;
                        if !s.is_identity() && !lambda.contains(&s)? {
                            return Ok(Some(s));
                        }
                    }
                }
            }
        }
        Ok(None)
    }

    /// Smallest `k ≤ k_max` with `x ∉ γ_{k,p}G`.
    pub fn residually_p_witness(&self, x: &PcElement, p: u64, k_max: usize) -> Result<WitnessReport> {
        check_prime(p)?;
        if x.is_identity() {
            return Err(Error::Precondition("element is the identity".into()));
        }
        let mut failures = Vec::new();
        let mut n = self.whole();
        for k in 1..=k_max {
            if k > 1 {
                n = self.next_p_term(&n, p)?;
            }
            if !n.contains(x)? {
                let index = n.index()?.expect("p-power index");
                return Ok(WitnessReport::Found { level: k, witness: n, index });
            }
            failures.push(LevelFailure { level: k, element: Some(x.clone()) });
        }
        Ok(WitnessReport::BoundedFailure { last_level: k_max, failures })
    }
}

fn is_power_of_u128(n: u128, p: u64) -> bool {
    match u64::try_from(n) {
        Ok(n) => is_power_of(n, p),
        Err(_) => {
            let mut n = n;
            while n.is_multiple_of(p as u128) {
                n /= p as u128;
            }
            n == 1
        }
    }
}
