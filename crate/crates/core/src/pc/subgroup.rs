use std::fmt;

use crate::arith::ext_gcd;
use crate::error::{Error, Result};

use super::presentation::{Collector, PcElement, PcPresentation};

/// A subgroup given by its canonical induced pc sequence: at most one
/// element per leading position, leading exponents positive (dividing the
/// relative order when it is finite), and every other led entry reduced
/// modulo the corresponding leading exponent.
#[derive(Clone)]
pub struct PcSubgroup {
    parent: PcPresentation,
    slots: Vec<Option<PcElement>>,
}

impl PartialEq for PcSubgroup {
    fn eq(&self, other: &Self) -> bool {
        self.slots == other.slots
    }
}

impl Eq for PcSubgroup {}

impl fmt::Debug for PcSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.sequence().map(|x| self.parent.format(x)).collect();
        write!(f, "⟨{}⟩", gens.join(", "))
    }
}

/// Incremental construction of an induced sequence.
struct SeqBuilder<'a> {
    pres: &'a PcPresentation,
    col: Collector<'a>,
    slots: Vec<Option<Vec<i64>>>,
}

fn lead(x: &[i64]) -> Option<usize> {
    x.iter().position(|&e| e != 0)
}

impl<'a> SeqBuilder<'a> {
    fn new(pres: &'a PcPresentation, slots: Vec<Option<Vec<i64>>>) -> Self {
        SeqBuilder { pres, col: pres.collector(), slots }
    }

    /// Sifts `x` on the right; returns the remainder.
    fn sift(&mut self, mut x: Vec<i64>) -> Result<Vec<i64>> {
        self.col.reset();
        while let Some(d) = lead(&x) {
            let Some(y) = &self.slots[d] else { break };
            let a = y[d];
            if x[d] % a != 0 {
                break;
            }
            let yq = self.col.pow(&y.clone(), -(x[d] / a))?;
            self.col.mul_into(&mut x, &yq)?;
        }
        Ok(x)
    }

    /// Reduces the entries of `x` below its leading position against the
    /// slots already filled, keeping exponents small.
    fn reduce_tail(&mut self, mut x: Vec<i64>) -> Result<Vec<i64>> {
        let Some(l) = lead(&x) else { return Ok(x) };
        self.col.reset();
        for d in l + 1..x.len() {
            let Some(y) = &self.slots[d] else { continue };
            let q = x[d].div_euclid(y[d]);
            if q != 0 {
                let yq = self.col.pow(&y.clone(), -q)?;
                self.col.mul_into(&mut x, &yq)?;
            }
        }
        Ok(x)
    }

    /// Inserts `x`, returning whether the sequence changed.
    fn add(&mut self, x: Vec<i64>) -> Result<bool> {
        let orders = self.pres.relative_orders();
        let mut changed = false;
        let mut queue = vec![x];
        while let Some(x) = queue.pop() {
            let x = self.sift(x)?;
            let mut x = self.reduce_tail(x)?;
            let Some(d) = lead(&x) else { continue };
            match self.slots[d].take() {
                None => match orders[d] {
                    None => {
                        if x[d] < 0 {
                            x = self.col.inverse(&x)?;
                        }
                        self.slots[d] = Some(x);
                    }
                    Some(o) => {
                        let (g, s, _) = ext_gcd(x[d], o as i64);
                        if g == x[d] {
                            self.slots[d] = Some(x);
                        } else {
                            let y = self.col.pow(&x, s)?;
                            let y = self.reduce_tail(y)?;
                            debug_assert_eq!(y[d], g);
                            self.slots[d] = Some(y);
                            queue.push(x);
                        }
                    }
                },
                Some(y) => {
                    // x[d] is not a multiple of y[d]: replace y by a
                    // combination with leading exponent gcd(y[d], x[d]).
                    let (_, s, t) = ext_gcd(y[d], x[d]);
                    let mut z = self.col.pow(&y, s)?;
                    let xt = self.col.pow(&x, t)?;
                    self.col.mul_into(&mut z, &xt)?;
                    let z = self.reduce_tail(z)?;
                    queue.push(y);
                    queue.push(x);
                    queue.push(z);
                }
            }
            changed = true;
        }
        Ok(changed)
    }

    /// Adds powers and conjugates until the sequence is induced, also
    /// closing under conjugation by `conjugators` and their inverses.
    fn close(&mut self, conjugators: &[Vec<i64>]) -> Result<()> {
        let orders = self.pres.relative_orders().to_vec();
        loop {
            let seq: Vec<Vec<i64>> = self.slots.iter().flatten().cloned().collect();
            let mut pending = Vec::new();
            for y in &seq {
                self.col.reset();
                let d = lead(y).unwrap();
                if let Some(o) = orders[d] {
                    let p = self.col.pow(y, o as i64 / y[d])?;
                    pending.push(p);
                }
            }
            let mut by: Vec<Vec<i64>> = seq.clone();
            by.extend(conjugators.iter().cloned());
            for x in &by {
                self.col.reset();
                let xi = self.col.inverse(x)?;
                for y in &seq {
                    for (g, gi) in [(x, &xi), (&xi, x)] {
                        self.col.reset();
                        let mut c = gi.clone();
                        self.col.mul_into(&mut c, y)?;
                        self.col.mul_into(&mut c, g)?;
                        pending.push(c);
                    }
                }
            }
            let mut changed = false;
            for x in pending {
                let r = self.sift(x)?;
                if lead(&r).is_some() {
                    changed |= self.add(r)?;
                }
            }
            if !changed {
                return Ok(());
            }
        }
    }

    /// Reduces every led entry into `[0, a)` for the leading exponent `a`
    /// of the slot at that position.
    fn reduce(&mut self) -> Result<()> {
        let n = self.slots.len();
        for i in 0..n {
            let Some(mut x) = self.slots[i].take() else { continue };
            self.col.reset();
            for d in i + 1..n {
                let Some(y) = &self.slots[d] else { continue };
                let q = x[d].div_euclid(y[d]);
                if q != 0 {
                    let yq = self.col.pow(&y.clone(), -q)?;
                    self.col.mul_into(&mut x, &yq)?;
                }
            }
            self.slots[i] = Some(x);
        }
        Ok(())
    }

    fn finish(mut self) -> Result<PcSubgroup> {
        self.reduce()?;
        Ok(PcSubgroup {
            parent: self.pres.clone(),
            slots: self.slots.into_iter().map(|s| s.map(PcElement::from_vec)).collect(),
        })
    }
}

impl PcPresentation {
    /// The subgroup generated by `gens`, as a canonical induced sequence.
    pub fn subgroup(&self, gens: &[PcElement]) -> Result<PcSubgroup> {
        self.subgroup_closed_under(gens, &[])
    }

    /// The smallest subgroup containing `gens` and normalised by
    /// `conjugators`.
    pub fn subgroup_closed_under(&self, gens: &[PcElement], conjugators: &[PcElement]) -> Result<PcSubgroup> {
        self.check_elements(gens)?;
        self.check_elements(conjugators)?;
        let mut b = SeqBuilder::new(self, vec![None; self.len()]);
        for g in gens {
            b.add(g.exponents().to_vec())?;
        }
        let conj: Vec<Vec<i64>> = conjugators.iter().map(|x| x.exponents().to_vec()).collect();
        b.close(&conj)?;
        b.finish()
    }

    /// The normal closure of `gens` in the whole group.
    pub fn normal_closure(&self, gens: &[PcElement]) -> Result<PcSubgroup> {
        self.subgroup_closed_under(gens, &self.generators())
    }

    pub fn whole(&self) -> PcSubgroup {
        PcSubgroup { parent: self.clone(), slots: self.generators().into_iter().map(Some).collect() }
    }

    pub fn trivial_subgroup(&self) -> PcSubgroup {
        PcSubgroup { parent: self.clone(), slots: vec![None; self.len()] }
    }

    fn check_elements(&self, xs: &[PcElement]) -> Result<()> {
        if xs.iter().any(|x| x.exponents().len() != self.len()) {
            return Err(Error::InvalidPresentation(format!("expected {} exponents", self.len())));
        }
        Ok(())
    }
}

/// `[H:K]`-style index from leading data; `None` when infinite.
fn index_between(orders: &[Option<u64>], big: &[Option<u64>], small: &[Option<u64>]) -> Result<Option<u128>> {
    let mut acc: u128 = 1;
    for d in 0..orders.len() {
        let factor = match (big[d], small[d], orders[d]) {
            (None, None, _) => 1,
            (None, Some(_), _) => return Err(Error::Precondition("not a subgroup of the given group".into())),
            (Some(a), Some(b), _) => {
                if b % a != 0 {
                    return Err(Error::Precondition("not a subgroup of the given group".into()));
                }
                (b / a) as u128
            }
            (Some(a), None, Some(o)) => (o / a) as u128,
            (Some(_), None, None) => return Ok(None),
        };
        acc = acc.checked_mul(factor).ok_or(Error::Overflow("subgroup index"))?;
    }
    Ok(Some(acc))
}

impl PcSubgroup {
    pub fn parent(&self) -> &PcPresentation {
        &self.parent
    }

    /// The induced sequence, by increasing leading position.
    pub fn sequence(&self) -> impl Iterator<Item = &PcElement> {
        self.slots.iter().flatten()
    }

    pub fn generators(&self) -> Vec<PcElement> {
        self.sequence().cloned().collect()
    }

    /// The sequence element with leading position `d`, if any.
    pub fn slot(&self, d: usize) -> Option<&PcElement> {
        self.slots[d].as_ref()
    }

    /// Leading exponent at each position (`None` where no element leads).
    pub fn leading_exponents(&self) -> Vec<Option<u64>> {
        self.slots.iter().enumerate().map(|(d, s)| s.as_ref().map(|x| x.exponents()[d] as u64)).collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.slots.iter().all(Option::is_none)
    }

    pub fn is_whole(&self) -> bool {
        self.leading_exponents().iter().all(|a| *a == Some(1))
    }

    /// Right-sifts `x` through the sequence; the remainder is the identity
    /// exactly when `x` is a member.
    pub fn sift(&self, x: &PcElement) -> Result<PcElement> {
        let slots: Vec<Option<Vec<i64>>> =
            self.slots.iter().map(|s| s.as_ref().map(|x| x.exponents().to_vec())).collect();
        let mut b = SeqBuilder::new(&self.parent, slots);
        Ok(PcElement::from_vec(b.sift(x.exponents().to_vec())?))
    }

    pub fn contains(&self, x: &PcElement) -> Result<bool> {
        Ok(self.sift(x)?.is_identity())
    }

    pub fn is_subset_of(&self, other: &PcSubgroup) -> Result<bool> {
        for x in self.sequence() {
            if !other.contains(x)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The canonical representative of the coset `x H`: led entries are
    /// reduced into `[0, a)`, other entries are unchanged.
    pub fn coset_rep(&self, x: &PcElement) -> Result<PcElement> {
        let mut col = self.parent.collector();
        let mut x = x.exponents().to_vec();
        for (d, s) in self.slots.iter().enumerate() {
            let Some(y) = s else { continue };
            let y = y.exponents();
            let q = x[d].div_euclid(y[d]);
            if q != 0 {
                let yq = col.pow(y, -q)?;
                col.mul_into(&mut x, &yq)?;
            }
        }
        Ok(PcElement::from_vec(x))
    }

    /// `[G : H]`, or `None` when infinite.
    pub fn index(&self) -> Result<Option<u128>> {
        let all: Vec<Option<u64>> = vec![Some(1); self.slots.len()];
        index_between(self.parent.relative_orders(), &all, &self.leading_exponents())
    }

    /// `[sup : self]`, or `None` when infinite. Fails unless `self ≤ sup`.
    pub fn index_in(&self, sup: &PcSubgroup) -> Result<Option<u128>> {
        if !self.is_subset_of(sup)? {
            return Err(Error::Precondition("not a subgroup of the given group".into()));
        }
        index_between(self.parent.relative_orders(), &sup.leading_exponents(), &self.leading_exponents())
    }

    /// Number of infinite layers of the subgroup.
    pub fn hirsch_length(&self) -> usize {
        let orders = self.parent.relative_orders();
        self.slots.iter().enumerate().filter(|(d, s)| s.is_some() && orders[*d].is_none()).count()
    }

    pub fn join(&self, other: &PcSubgroup) -> Result<PcSubgroup> {
        let mut gens = self.generators();
        gens.extend(other.generators());
        self.parent.subgroup(&gens)
    }

    pub fn is_normal(&self) -> Result<bool> {
        let pres = &self.parent;
        for g in pres.generators() {
            let gi = pres.inverse(&g)?;
            for y in self.sequence() {
                if !self.contains(&pres.conj(y, &g)?)? || !self.contains(&pres.conj(y, &gi)?)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// The normal closure of this subgroup in the whole group.
    pub fn normal_closure(&self) -> Result<PcSubgroup> {
        self.parent.normal_closure(&self.generators())
    }
}
