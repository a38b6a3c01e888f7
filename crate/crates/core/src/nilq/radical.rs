use std::collections::{BTreeSet, HashSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{check_prime, is_p_number, p_part};
use crate::error::{Error, Result};
use crate::pc::{AbelianSection, PcElement, PcPresentation, PcSubgroup, DEFAULT_LCS_DEPTH};

use super::snf::solve_integer_system;

/// Largest coset space enumerated while lifting radicals.
const COSET_CAP: usize = 100_000;
/// Largest exponent tried when looking for a P-power in a subgroup.
const POWER_CAP: u64 = 1 << 24;

/// `R_P(H) = {g : g^n ∈ H for some P-number n}` in a nilpotent pc group.
///
/// Works down the lower central series. At layer `A = γ_i/γ_{i+1}`, which is
/// central in `G/γ_{i+1}`, the radical mod `γ_i` is known; `K` enlarges
/// `Hγ_{i+1}` by the P-torsion of `Hγ_i / Hγ_{i+1}`, and a coset `tHγ_i`
/// of the radical lifts exactly when `t^n ∈ K A^n` for a P-number `n` with
/// `t^n ∈ Hγ_i`.
pub fn p_radical_nilpotent(g: &PcPresentation, h: &PcSubgroup, primes: &BTreeSet<u64>) -> Result<PcSubgroup> {
    for &p in primes {
        check_prime(p)?;
    }
    if !h.parent().same_presentation(g) {
        return Err(Error::ForeignSubgroup);
    }
    // only n = 1 is a P-number
    if primes.is_empty() {
        return Ok(h.clone());
    }
    let lcs = g.lower_central_series(DEFAULT_LCS_DEPTH)?;
    let mut q = g.whole();
    for i in 0..lcs.len() - 1 {
        let (gi, gi1) = (&lcs[i], &lcs[i + 1]);
        let h1 = h.join(gi1)?;
        let m0 = h.join(gi)?;
        let torsion = {
            let sec = AbelianSection::new(&m0, &h1)?;
            let mut extra = h1.generators();
            for (k, d) in sec.moduli().iter().enumerate() {
                if d.is_zero() || d.is_one() {
                    continue;
                }
                let d64 = d.to_u64().ok_or(Error::Overflow("layer invariant"))?;
                let pp = p_part(d64, primes);
                if pp > 1 {
                    let mut s = vec![BigInt::zero(); sec.len()];
                    s[k] = BigInt::from(d64 / pp);
                    extra.push(sec.from_smith(&s)?);
                }
            }
            g.subgroup(&extra)?
        };
        let sec = AbelianSection::new(&m0, &torsion)?;
        let moduli = sec.moduli();
        let layer_gens = gi.generators();
        let layer_coords = layer_gens.iter().map(|y| sec.smith_coords(y)).collect::<Result<Vec<_>>>()?;
        let mut gens = torsion.generators();
        let index = m0.index_in(&q)?.ok_or(Error::Inconsistent("radical has infinite index over the layer".into()))?;
        let limit = u64::try_from(index).ok().and_then(|m| m.checked_pow(lcs.len() as u32)).unwrap_or(u64::MAX);
        for t in left_cosets(g, &q, &m0)? {
            let n = p_power_into(g, &t, &m0, primes, limit.min(POWER_CAP))?;
            let target = sec.smith_coords(&g.pow(&t, n as i64)?)?;
            // n Σ λ_j y_j ≡ target, with one slack variable per finite modulus
            let slack: Vec<usize> = (0..moduli.len()).filter(|&k| !moduli[k].is_zero()).collect();
            let cols = layer_gens.len() + slack.len();
            let rows: Vec<Vec<BigInt>> = (0..moduli.len())
                .map(|k| {
                    let mut row: Vec<BigInt> = layer_coords.iter().map(|c| &c[k] * BigInt::from(n)).collect();
                    row.extend(slack.iter().map(|&s| if s == k { -moduli[k].clone() } else { BigInt::zero() }));
                    row
                })
                .collect();
            let Some(sol) = solve_integer_system(&rows, cols, &target) else { continue };
            let mut a = g.identity();
            for (y, l) in layer_gens.iter().zip(&sol) {
                let l = l.to_i64().ok_or(Error::Overflow("radical coordinate"))?;
                a = g.mul(&a, &g.pow(y, l)?)?;
            }
            gens.push(g.mul(&t, &g.inverse(&a)?)?);
        }
        q = g.subgroup(&gens)?;
    }
    if !h.is_subset_of(&q)? {
        return Err(Error::Inconsistent("radical does not contain the subgroup".into()));
    }
    match h.index_in(&q)? {
        Some(i) if u64::try_from(i).is_ok_and(|i| is_p_number(i, primes)) => Ok(q),
        _ => Err(Error::Inconsistent("radical index is not a P-number".into())),
    }
}

/// Representatives of the non-trivial left cosets of `m` in `q`.
fn left_cosets(g: &PcPresentation, q: &PcSubgroup, m: &PcSubgroup) -> Result<Vec<PcElement>> {
    let gens = q.generators();
    let start = g.identity();
    let mut seen: HashSet<PcElement> = HashSet::from([m.coset_rep(&start)?]);
    let mut queue = VecDeque::from([start]);
    let mut reps = Vec::new();
    while let Some(t) = queue.pop_front() {
        for x in &gens {
            let y = g.mul(x, &t)?;
            if seen.insert(m.coset_rep(&y)?) {
                if seen.len() > COSET_CAP {
                    return Err(Error::Cap { what: "radical coset enumeration", cap: COSET_CAP });
                }
                reps.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(reps)
}

/// The least P-number `n ≤ limit` with `t^n ∈ m`.
fn p_power_into(g: &PcPresentation, t: &PcElement, m: &PcSubgroup, primes: &BTreeSet<u64>, limit: u64) -> Result<u64> {
    let mut candidates = BTreeSet::from([1u64]);
    while let Some(n) = candidates.pop_first() {
        if m.contains(&g.pow(t, n as i64)?)? {
            return Ok(n);
        }
        for &p in primes {
            if let Some(x) = n.checked_mul(p).filter(|&x| x <= limit) {
                candidates.insert(x);
            }
        }
    }
    Err(Error::Inconsistent("no P-power of a coset representative lies in the subgroup".into()))
}
