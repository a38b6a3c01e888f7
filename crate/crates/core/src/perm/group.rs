use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};

use super::Permutation;

/// Default cap on enumerated group orders.
pub const DEFAULT_MAX_ORDER: usize = 1_000_000;
/// Default cap on the order of groups whose subgroup lattice is enumerated.
pub const DEFAULT_MAX_LATTICE_ORDER: usize = 200;

/// Groups up to this order get a precomputed multiplication table.
const TABLE_ORDER: usize = 1024;

/// A finite permutation group with its enumerated element set.
///
/// Elements are addressed by index; index 0 is always the identity. The
/// value is cheap to clone and safe to share between threads. The trivial
/// group is the degree-1 group with no generators.
#[derive(Clone)]
pub struct FiniteGroup {
    inner: Arc<GroupData>,
}

struct GroupData {
    name: Option<String>,
    degree: usize,
    generators: Vec<Permutation>,
    generator_indices: Vec<usize>,
    elements: Vec<Permutation>,
    index: HashMap<Permutation, usize>,
    inverse: Vec<u32>,
    table: OnceLock<Vec<u32>>,
}

impl FiniteGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        Self::with_cap(degree, generators, DEFAULT_MAX_ORDER)
    }

    pub fn trivial() -> Self {
        Self::new(1, Vec::new()).expect("trivial group")
    }

    /// Enumerates the group generated by `generators`, failing once more
    /// than `cap` elements have been produced.
    pub fn with_cap(degree: usize, generators: Vec<Permutation>, cap: usize) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidPermutation("degree must be positive".into()));
        }
        for g in &generators {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch { left: degree, right: g.degree() });
            }
        }
        let identity = Permutation::identity(degree);
        let mut elements = vec![identity.clone()];
        let mut index = HashMap::new();
        index.insert(identity, 0usize);
        let mut head = 0;
        while head < elements.len() {
            for g in &generators {
                let y = elements[head].compose_unchecked(g);
                if !index.contains_key(&y) {
                    if elements.len() >= cap {
                        return Err(Error::OrderCap { cap });
                    }
                    index.insert(y.clone(), elements.len());
                    elements.push(y);
                }
            }
            head += 1;
        }
        let inverse = elements.iter().map(|x| index[&x.inverse()] as u32).collect();
        let generator_indices = generators.iter().map(|g| index[g]).collect();
        Ok(FiniteGroup {
            inner: Arc::new(GroupData {
                name: None,
                degree,
                generators,
                generator_indices,
                elements,
                index,
                inverse,
                table: OnceLock::new(),
            }),
        })
    }

    /// Returns a copy carrying a display name.
    pub fn named(self, name: impl Into<String>) -> Self {
        let data = Arc::try_unwrap(self.inner).unwrap_or_else(|arc| GroupData {
            name: arc.name.clone(),
            degree: arc.degree,
            generators: arc.generators.clone(),
            generator_indices: arc.generator_indices.clone(),
            elements: arc.elements.clone(),
            index: arc.index.clone(),
            inverse: arc.inverse.clone(),
            table: OnceLock::new(),
        });
        FiniteGroup { inner: Arc::new(GroupData { name: Some(name.into()), ..data }) }
    }

    pub fn name(&self) -> Option<&str> {
        self.inner.name.as_deref()
    }

    pub fn degree(&self) -> usize {
        self.inner.degree
    }

    pub fn order(&self) -> usize {
        self.inner.elements.len()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.inner.generators
    }

    /// Element indices of the generators.
    pub fn generator_indices(&self) -> &[usize] {
        &self.inner.generator_indices
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.inner.elements
    }

    pub fn element(&self, i: usize) -> &Permutation {
        &self.inner.elements[i]
    }

    pub fn index_of(&self, p: &Permutation) -> Option<usize> {
        self.inner.index.get(p).copied()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn same_group(&self, other: &FiniteGroup) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
    }

    fn table(&self) -> Option<&[u32]> {
        let n = self.order();
        if n > TABLE_ORDER {
            return None;
        }
        Some(self.inner.table.get_or_init(|| {
            let els = &self.inner.elements;
            let mut t = Vec::with_capacity(n * n);
            for a in els {
                for b in els {
                    t.push(self.inner.index[&a.compose_unchecked(b)] as u32);
                }
            }
            t
        }))
    }

    /// Index of `elements[a] ∘ elements[b]`.
    pub fn mul(&self, a: usize, b: usize) -> usize {
        match self.table() {
            Some(t) => t[a * self.order() + b] as usize,
            None => {
                let els = &self.inner.elements;
                self.inner.index[&els[a].compose_unchecked(&els[b])]
            }
        }
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inner.inverse[a] as usize
    }

    pub fn pow(&self, a: usize, mut k: i64) -> usize {
        let mut base = if k < 0 { self.inv(a) } else { a };
        k = k.abs();
        let mut acc = 0;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    /// `g^-1 a g`.
    pub fn conj(&self, a: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), a), g)
    }

    /// `[a, b] = a^-1 b^-1 a b`.
    pub fn comm(&self, a: usize, b: usize) -> usize {
        let ab = self.mul(a, b);
        let ba = self.mul(b, a);
        self.mul(self.inv(ba), ab)
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let gens = self.generator_indices();
        gens.iter().all(|&a| gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("name", &self.inner.name)
            .field("degree", &self.inner.degree)
            .field("order", &self.order())
            .field("generators", &self.inner.generators)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(n: usize, cycles: &[&[usize]]) -> Permutation {
        Permutation::from_cycles(n, cycles).unwrap()
    }

    #[test]
    fn s3_has_order_six() {
        let g = FiniteGroup::new(3, vec![cyc(3, &[&[0, 1]]), cyc(3, &[&[0, 1, 2]])]).unwrap();
        assert_eq!(g.order(), 6);
        assert!(!g.is_abelian());
    }

    #[test]
    fn closure_and_inverses() {
        let g = FiniteGroup::new(4, vec![cyc(4, &[&[0, 1, 2, 3]]), cyc(4, &[&[0, 2]])]).unwrap();
        assert_eq!(g.order(), 8);
        for a in 0..g.order() {
            assert_eq!(g.mul(a, g.inv(a)), 0);
            for b in 0..g.order() {
                let p = g.element(a).compose(g.element(b)).unwrap();
                assert_eq!(g.index_of(&p), Some(g.mul(a, b)));
            }
        }
    }

    #[test]
    fn order_cap_is_a_resource_error() {
        let gens = vec![cyc(5, &[&[0, 1]]), cyc(5, &[&[0, 1, 2, 3, 4]])];
        assert_eq!(FiniteGroup::with_cap(5, gens, 100).unwrap_err(), Error::OrderCap { cap: 100 });
    }

    #[test]
    fn trivial_group() {
        let t = FiniteGroup::trivial();
        assert_eq!(t.order(), 1);
        assert_eq!(t.degree(), 1);
        assert!(t.generators().is_empty());
    }
}
