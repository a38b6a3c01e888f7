use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::perm::{FiniteGroup, Permutation};

use super::presentation::{PcBuilder, PcElement, PcPresentation};
use super::subgroup::PcSubgroup;

/// `G/N` as a pc presentation on the images of the generators of `G` that
/// survive in the quotient.
#[derive(Clone, Debug)]
pub struct PcQuotient {
    pub presentation: PcPresentation,
    /// Positions of the parent generators kept as quotient generators.
    pub kept: Vec<usize>,
    pub kernel: PcSubgroup,
}

impl PcQuotient {
    pub fn project(&self, x: &PcElement) -> Result<PcElement> {
        let rep = self.kernel.coset_rep(x)?;
        let exps = rep.exponents();
        Ok(PcElement::from_vec(self.kept.iter().map(|&i| exps[i]).collect()))
    }

    /// The canonical coset representative in the parent.
    pub fn lift(&self, y: &PcElement) -> PcElement {
        let mut exps = vec![0; self.kernel.parent().len()];
        for (&i, &e) in self.kept.iter().zip(y.exponents()) {
            exps[i] = e;
        }
        PcElement::from_vec(exps)
    }
}

impl PcPresentation {
    /// The quotient by a normal subgroup. Generator `g_i` survives unless
    /// `N` has an element with leading term `g_i`; its relative order in the
    /// quotient is the leading exponent of `N` at `i` if there is one, and
    /// `o_i` otherwise.
    pub fn quotient(&self, n: &PcSubgroup) -> Result<PcQuotient> {
        if !n.parent().same_presentation(self) && n.parent() != self {
            return Err(Error::ForeignSubgroup);
        }
        if !n.is_normal()? {
            return Err(Error::NotNormal);
        }
        let lead = n.leading_exponents();
        let orders = self.relative_orders();
        let kept: Vec<usize> = (0..self.len()).filter(|&i| lead[i] != Some(1)).collect();
        let new_order = |i: usize| match lead[i] {
            Some(a) => Some(a),
            None => orders[i],
        };
        let names: Vec<String> = kept.iter().map(|&i| self.names()[i].clone()).collect();
        let mut b = PcBuilder::new(names);
        b.collection_cap(self.collection_cap());
        let project = |x: &PcElement| -> Result<Vec<i64>> {
            let rep = n.coset_rep(x)?;
            let exps = rep.exponents();
            Ok(kept.iter().map(|&i| exps[i]).collect())
        };
        for (a, &i) in kept.iter().enumerate() {
            b.order(a, new_order(i));
            if let Some(r) = new_order(i) {
                let w = self.pow(&self.generator(i), r as i64)?;
                b.power(a, project(&w)?);
            }
            for (c, &j) in kept.iter().enumerate().skip(a + 1) {
                if !self.commutes(i, j) {
                    b.conj(a, c, project(self.conj_relation(i, j))?);
                }
                if new_order(i).is_none() {
                    if let Some(x) = self.conj_inv_relation(i, j) {
                        b.conj_inv(a, c, project(x)?);
                    }
                }
            }
        }
        let presentation = b.build()?;
        Ok(PcQuotient { presentation, kept, kernel: n.clone() })
    }
}

/// A finite pc group realised as a permutation group by its left regular
/// action.
#[derive(Clone, Debug)]
pub struct FiniteImage {
    pub group: FiniteGroup,
    /// `elements[i]` is the pc normal form of permutation group element `i`.
    pub elements: Vec<PcElement>,
    index: HashMap<PcElement, usize>,
}

impl FiniteImage {
    pub fn index_of(&self, x: &PcElement) -> Option<usize> {
        self.index.get(x).copied()
    }
}

impl PcPresentation {
    /// Enumerates a finite pc group of order at most `cap` and realises it
    /// as a permutation group.
    pub fn to_finite_group(&self, cap: usize) -> Result<FiniteImage> {
        let order = self.group_order()?.ok_or(Error::Precondition("group is infinite".into()))?;
        if order > cap as u128 {
            return Err(Error::OrderCap { cap });
        }
        let orders: Vec<i64> = self.relative_orders().iter().map(|o| o.unwrap() as i64).collect();
        let mut all = vec![vec![]];
        for &o in &orders {
            all = all
                .into_iter()
                .flat_map(|v: Vec<i64>| {
                    (0..o).map(move |e| {
                        let mut w = v.clone();
                        w.push(e);
                        w
                    })
                })
                .collect();
        }
        let all: Vec<PcElement> = all.into_iter().map(PcElement::from_vec).collect();
        let pos: HashMap<PcElement, usize> = all.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
        let left = |g: &PcElement| -> Result<Permutation> {
            let images = all.iter().map(|x| Ok(pos[&self.mul(g, x)?])).collect::<Result<Vec<_>>>()?;
            Permutation::from_images(images)
        };
        let degree = all.len();
        let gens = self.generators().iter().map(left).collect::<Result<Vec<_>>>()?;
        let group = FiniteGroup::new(degree, gens)?;
        let mut elements = vec![self.identity(); degree];
        for x in &all {
            let i = group.index_of(&left(x)?).expect("regular image");
            elements[i] = x.clone();
        }
        let index = elements.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
        Ok(FiniteImage { group, elements, index })
    }
}
