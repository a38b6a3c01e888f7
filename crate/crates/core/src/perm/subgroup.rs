use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::arith::{check_prime, prime_divisors};
use crate::error::{Error, Result};

use super::{FiniteGroup, Permutation};

/// A subgroup of a [`FiniteGroup`], stored as a membership set over the
/// parent's element indices together with a generating set.
#[derive(Clone)]
pub struct Subgroup {
    parent: FiniteGroup,
    members: FixedBitSet,
    generators: Vec<usize>,
    order: usize,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.parent.same_group(&other.parent) && self.members == other.members
    }
}

impl Eq for Subgroup {}

impl std::hash::Hash for Subgroup {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.members.hash(state);
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<_> = self.generators.iter().map(|&g| self.parent.element(g)).collect();
        write!(f, "Subgroup(order {}, generators {:?})", self.order, gens)
    }
}

impl Subgroup {
    pub fn parent(&self) -> &FiniteGroup {
        &self.parent
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn index(&self) -> usize {
        self.parent.order() / self.order
    }

    pub fn contains(&self, element: usize) -> bool {
        self.members.contains(element)
    }

    pub fn contains_perm(&self, p: &Permutation) -> bool {
        self.parent.index_of(p).is_some_and(|i| self.contains(i))
    }

    /// Element indices of the generating set.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn generator_perms(&self) -> Vec<Permutation> {
        self.generators.iter().map(|&g| self.parent.element(g).clone()).collect()
    }

    /// Member element indices in increasing order.
    pub fn elements(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.ones()
    }

    pub fn members(&self) -> &FixedBitSet {
        &self.members
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn is_whole(&self) -> bool {
        self.order == self.parent.order()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.members.is_subset(&other.members)
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        let mut m = self.members.clone();
        m.intersect_with(&other.members);
        Subgroup::from_members(&self.parent, m)
    }

    pub fn join(&self, other: &Subgroup) -> Subgroup {
        self.parent.extend(self, other.generators.iter().copied())
    }

    /// Regards the subgroup as a permutation group in its own right.
    pub fn to_group(&self) -> FiniteGroup {
        FiniteGroup::new(self.parent.degree(), self.generator_perms()).expect("subgroup of enumerated group")
    }

    /// Builds a subgroup from a membership set that is already known to be
    /// closed, choosing a small generating set greedily.
    pub(crate) fn from_members(parent: &FiniteGroup, members: FixedBitSet) -> Subgroup {
        let order = members.count_ones(..);
        let mut h = parent.trivial_subgroup();
        for x in members.ones() {
            if h.order == order {
                break;
            }
            if !h.contains(x) {
                h = parent.extend(&h, [x]);
            }
        }
        debug_assert_eq!(h.members, members);
        h
    }
}

impl FiniteGroup {
    pub fn whole(&self) -> Subgroup {
        let mut members = FixedBitSet::with_capacity(self.order());
        members.insert_range(..);
        Subgroup { parent: self.clone(), members, generators: self.generator_indices().to_vec(), order: self.order() }
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        let mut members = FixedBitSet::with_capacity(self.order());
        members.insert(0);
        Subgroup { parent: self.clone(), members, generators: Vec::new(), order: 1 }
    }

    /// `⟨base, extra⟩`; generators already in `base` are skipped.
    pub(crate) fn extend(&self, base: &Subgroup, extra: impl IntoIterator<Item = usize>) -> Subgroup {
        let mut gens = base.generators.clone();
        let mut members = base.members.clone();
        let mut changed = false;
        for x in extra {
            if members.contains(x) {
                continue;
            }
            gens.push(x);
            changed = true;
            // Re-close from scratch: BFS over right multiplication by generators.
            members.clear();
            members.insert(0);
            let mut queue = VecDeque::from([0usize]);
            while let Some(y) = queue.pop_front() {
                for &g in &gens {
                    let z = self.mul(y, g);
                    if !members.put(z) {
                        queue.push_back(z);
                    }
                }
            }
        }
        if !changed {
            return base.clone();
        }
        let order = members.count_ones(..);
        Subgroup { parent: self.clone(), members, generators: gens, order }
    }

    pub fn subgroup_by_indices(&self, gens: &[usize]) -> Subgroup {
        self.extend(&self.trivial_subgroup(), gens.iter().copied())
    }

    /// Smallest subgroup containing `gens`, which must lie in the group.
    pub fn subgroup(&self, gens: &[Permutation]) -> Result<Subgroup> {
        let idx = self.indices_of(gens)?;
        Ok(self.subgroup_by_indices(&idx))
    }

    fn indices_of(&self, elements: &[Permutation]) -> Result<Vec<usize>> {
        elements.iter().map(|p| self.index_of(p).ok_or(Error::NotInGroup)).collect()
    }

    fn check_owned(&self, h: &Subgroup) -> Result<()> {
        if self.same_group(&h.parent) {
            Ok(())
        } else {
            Err(Error::ForeignSubgroup)
        }
    }

    /// Closes `h` under conjugation by `conjugators` (and hence by the
    /// group they generate).
    fn close_under_conjugation(&self, mut h: Subgroup, conjugators: &[usize]) -> Subgroup {
        loop {
            let mut extra = None;
            'search: for &x in &h.generators {
                for &g in conjugators {
                    let c = self.conj(x, g);
                    if !h.contains(c) {
                        extra = Some(c);
                        break 'search;
                    }
                }
            }
            match extra {
                Some(c) => h = self.extend(&h, [c]),
                None => return h,
            }
        }
    }

    pub fn normal_closure_by_indices(&self, elements: &[usize]) -> Subgroup {
        let h = self.subgroup_by_indices(elements);
        self.close_under_conjugation(h, self.generator_indices())
    }

    /// Smallest normal subgroup containing `elements`.
    pub fn normal_closure(&self, elements: &[Permutation]) -> Result<Subgroup> {
        let idx = self.indices_of(elements)?;
        Ok(self.normal_closure_by_indices(&idx))
    }

    pub fn normal_closure_of(&self, h: &Subgroup) -> Result<Subgroup> {
        self.check_owned(h)?;
        Ok(self.close_under_conjugation(h.clone(), self.generator_indices()))
    }

    pub fn is_normal(&self, h: &Subgroup) -> bool {
        h.generators.iter().all(|&x| self.generator_indices().iter().all(|&g| h.contains(self.conj(x, g))))
    }

    pub fn conjugate_subgroup(&self, h: &Subgroup, g: usize) -> Subgroup {
        let gens: Vec<usize> = h.generators.iter().map(|&x| self.conj(x, g)).collect();
        self.subgroup_by_indices(&gens)
    }

    /// `[a, b]`: the normal closure in `⟨a, b⟩` of the commutators of the
    /// two generating sets.
    pub fn commutator_subgroup(&self, a: &Subgroup, b: &Subgroup) -> Result<Subgroup> {
        self.check_owned(a)?;
        self.check_owned(b)?;
        let mut comms = Vec::new();
        for &x in &a.generators {
            for &y in &b.generators {
                comms.push(self.comm(x, y));
            }
        }
        let h = self.subgroup_by_indices(&comms);
        let conjugators: Vec<usize> = a.generators.iter().chain(&b.generators).copied().collect();
        Ok(self.close_under_conjugation(h, &conjugators))
    }

    /// `⟨x^k : x ∈ h⟩`.
    pub fn power_subgroup(&self, h: &Subgroup, k: i64) -> Subgroup {
        let powers: Vec<usize> = h.elements().map(|x| self.pow(x, k)).collect();
        self.subgroup_by_indices(&powers)
    }

    /// `γ_1 = G`, `γ_{n+1} = [γ_n, G]`, stopping at the trivial group or at
    /// the first repeated term (which is then listed twice).
    pub fn lower_central_series(&self) -> Vec<Subgroup> {
        let whole = self.whole();
        let mut series = vec![whole.clone()];
        loop {
            let last = series.last().unwrap();
            let next = self.commutator_subgroup(last, &whole).expect("own subgroups");
            let stop = next.is_trivial() || next == *last;
            series.push(next);
            if stop {
                return series;
            }
        }
    }

    pub fn is_nilpotent(&self) -> bool {
        self.lower_central_series().last().unwrap().is_trivial()
    }

    pub fn center(&self) -> Subgroup {
        let gens = self.generator_indices();
        let central: Vec<usize> =
            (0..self.order()).filter(|&x| gens.iter().all(|&g| self.mul(x, g) == self.mul(g, x))).collect();
        let mut members = FixedBitSet::with_capacity(self.order());
        for x in central {
            members.insert(x);
        }
        Subgroup::from_members(self, members)
    }

    /// One Sylow `p`-subgroup, grown one `p`-element at a time. Returns the
    /// trivial subgroup when `p` does not divide the order.
    pub fn sylow(&self, p: u64) -> Result<Subgroup> {
        check_prime(p)?;
        let mut target = 1usize;
        let mut n = self.order();
        while n.is_multiple_of(p as usize) {
            n /= p as usize;
            target *= p as usize;
        }
        let p_elements: Vec<usize> =
            (0..self.order()).filter(|&x| crate::arith::is_power_of(self.element_order(x) as u64, p)).collect();
        let mut h = self.trivial_subgroup();
        while h.order < target {
            let grown = p_elements.iter().filter(|&&x| !h.contains(x)).find_map(|&x| {
                let k = self.extend(&h, [x]);
                crate::arith::is_power_of(k.order as u64, p).then_some(k)
            });
            h = grown.expect("a non-Sylow p-subgroup lies in a larger p-subgroup");
        }
        Ok(h)
    }

    /// Nilpotency tested by the Sylow criterion: the group is the internal
    /// direct product of one Sylow subgroup per prime.
    pub fn is_sylow_product(&self) -> bool {
        let sylows: Vec<Subgroup> =
            prime_divisors(self.order() as u64).into_iter().map(|p| self.sylow(p).expect("prime")).collect();
        let product: usize = sylows.iter().map(Subgroup::order).product();
        if product != self.order() {
            return false;
        }
        for (i, a) in sylows.iter().enumerate() {
            for b in &sylows[i + 1..] {
                if !a.intersection(b).is_trivial() {
                    return false;
                }
                for x in a.elements() {
                    for y in b.elements() {
                        if self.mul(x, y) != self.mul(y, x) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// `G/N` as the permutation action on the cosets of `N`.
    pub fn quotient(&self, n: &Subgroup) -> Result<Quotient> {
        self.check_owned(n)?;
        if !self.is_normal(n) {
            return Err(Error::NotNormal);
        }
        // coset label for every element
        let mut label = vec![usize::MAX; self.order()];
        let mut reps = Vec::new();
        for x in 0..self.order() {
            if label[x] != usize::MAX {
                continue;
            }
            let c = reps.len();
            reps.push(x);
            for y in n.elements() {
                label[self.mul(x, y)] = c;
            }
        }
        let k = reps.len();
        let action = |g: usize| -> Vec<usize> { reps.iter().map(|&r| label[self.mul(g, r)]).collect() };
        let gens: Vec<Permutation> = if k == 1 {
            Vec::new()
        } else {
            self.generator_indices()
                .iter()
                .map(|&g| Permutation::from_images(action(g)).expect("coset action"))
                .filter(|p| !p.is_identity())
                .collect()
        };
        let group = FiniteGroup::new(k, gens)?;
        let projection = (0..self.order())
            .map(|x| {
                let perm = if k == 1 {
                    Permutation::identity(1)
                } else {
                    Permutation::from_images(action(x)).expect("coset action")
                };
                group.index_of(&perm).expect("image lies in the quotient")
            })
            .collect();
        Ok(Quotient { group, projection, kernel: n.clone() })
    }

    /// The full subgroup lattice, ordered by subgroup order and then by the
    /// sorted member indices. Built by closing the cyclic subgroups under
    /// joins.
    pub fn all_subgroups(&self, max_order: usize) -> Result<Vec<Subgroup>> {
        if self.order() > max_order {
            return Err(Error::Cap { what: "group order for subgroup enumeration", cap: max_order });
        }
        let mut seen: HashSet<FixedBitSet> = HashSet::new();
        let mut cyclic = Vec::new();
        for x in 0..self.order() {
            let h = self.subgroup_by_indices(&[x]);
            if seen.insert(h.members.clone()) {
                cyclic.push(h);
            }
        }
        let mut all = cyclic.clone();
        let mut frontier = cyclic.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for h in &frontier {
                for c in &cyclic {
                    if c.is_subset_of(h) {
                        continue;
                    }
                    let j = h.join(c);
                    if seen.insert(j.members.clone()) {
                        next.push(j.clone());
                        all.push(j);
                    }
                }
            }
            frontier = next;
        }
        all.sort_by(|a, b| a.order.cmp(&b.order).then_with(|| a.elements().cmp(b.elements())));
        Ok(all)
    }

    /// One representative per conjugacy class of subgroups, in lattice order.
    pub fn subgroup_class_representatives(&self, max_order: usize) -> Result<Vec<Subgroup>> {
        let all = self.all_subgroups(max_order)?;
        let mut covered: HashSet<FixedBitSet> = HashSet::new();
        let mut reps = Vec::new();
        for h in all {
            if covered.contains(&h.members) {
                continue;
            }
            for g in 0..self.order() {
                covered.insert(self.conjugate_subgroup(&h, g).members);
            }
            reps.push(h);
        }
        Ok(reps)
    }

    pub fn normal_subgroups(&self, max_order: usize) -> Result<Vec<Subgroup>> {
        Ok(self.all_subgroups(max_order)?.into_iter().filter(|h| self.is_normal(h)).collect())
    }

    /// Elements commuting with every element of `h`.
    pub fn centralizer(&self, h: &Subgroup) -> Subgroup {
        let mut members = FixedBitSet::with_capacity(self.order());
        for x in 0..self.order() {
            if h.generators.iter().all(|&y| self.mul(x, y) == self.mul(y, x)) {
                members.insert(x);
            }
        }
        Subgroup::from_members(self, members)
    }

    /// Counts elements by order; handy for quick isomorphism sanity checks.
    pub fn order_statistics(&self) -> HashMap<usize, usize> {
        let mut stats = HashMap::new();
        for x in 0..self.order() {
            *stats.entry(self.element_order(x)).or_insert(0) += 1;
        }
        stats
    }
}

/// The quotient group together with the projection from the parent.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: FiniteGroup,
    /// `projection[x]` is the image of parent element `x`.
    pub projection: Vec<usize>,
    pub kernel: Subgroup,
}

impl Quotient {
    pub fn project(&self, x: usize) -> usize {
        self.projection[x]
    }

    /// Parent elements mapping into `h`, a subgroup of the quotient.
    pub fn preimage(&self, parent: &FiniteGroup, h: &Subgroup) -> Subgroup {
        let mut members = FixedBitSet::with_capacity(parent.order());
        for (x, &y) in self.projection.iter().enumerate() {
            if h.contains(y) {
                members.insert(x);
            }
        }
        Subgroup::from_members(parent, members)
    }

    /// Parent elements mapping to the identity.
    pub fn kernel_of_projection(&self, parent: &FiniteGroup) -> Subgroup {
        self.preimage(parent, &self.group.trivial_subgroup())
    }
}
