//! Constructors for the standard families and for direct and semidirect
//! products.

use std::collections::VecDeque;

use crate::error::{Error, Result};

use super::{FiniteGroup, Permutation, Subgroup};

/// Cyclic group of order `n` acting on `n` points (`n = 1` is trivial).
pub fn cyclic(n: usize) -> Result<FiniteGroup> {
    if n == 0 {
        return Err(Error::Precondition("cyclic group order must be positive".into()));
    }
    if n == 1 {
        return Ok(FiniteGroup::trivial());
    }
    let cycle: Vec<usize> = (0..n).collect();
    FiniteGroup::new(n, vec![Permutation::from_cycles(n, &[&cycle])?])
}

pub fn symmetric(n: usize) -> Result<FiniteGroup> {
    match n {
        0 => Err(Error::Precondition("degree must be positive".into())),
        1 => Ok(FiniteGroup::trivial()),
        2 => cyclic(2),
        _ => {
            let cycle: Vec<usize> = (0..n).collect();
            FiniteGroup::new(n, vec![Permutation::from_cycles(n, &[&[0, 1]])?, Permutation::from_cycles(n, &[&cycle])?])
        }
    }
}

pub fn alternating(n: usize) -> Result<FiniteGroup> {
    if n < 3 {
        return Ok(FiniteGroup::trivial());
    }
    let gens = (2..n).map(|k| Permutation::from_cycles(n, &[&[0, 1, k]])).collect::<Result<Vec<_>>>()?;
    FiniteGroup::new(n, gens)
}

/// Dihedral group of order `2n`, the symmetries of an `n`-gon (`n >= 3`).
pub fn dihedral(n: usize) -> Result<FiniteGroup> {
    if n < 3 {
        return Err(Error::Precondition("dihedral groups need n >= 3".into()));
    }
    let cycle: Vec<usize> = (0..n).collect();
    let rotation = Permutation::from_cycles(n, &[&cycle])?;
    let reflection = Permutation::from_images((0..n).map(|i| (n - i) % n).collect())?;
    FiniteGroup::new(n, vec![rotation, reflection])
}

/// Left regular representation of a group given by its multiplication
/// function on `{0, .., n-1}` (0 must be the identity).
pub fn from_regular(n: usize, mul: impl Fn(usize, usize) -> usize, gens: &[usize]) -> Result<FiniteGroup> {
    let perms = gens
        .iter()
        .map(|&g| Permutation::from_images((0..n).map(|x| mul(g, x)).collect()))
        .collect::<Result<Vec<_>>>()?;
    FiniteGroup::new(n, perms)
}

/// Dicyclic group of order `4m`: `⟨a, x | a^{2m}, x^2 = a^m, a^x = a^-1⟩`.
/// `m = 2` gives the quaternion group `Q8` in its regular representation.
pub fn dicyclic(m: usize) -> Result<FiniteGroup> {
    if m < 1 {
        return Err(Error::Precondition("dicyclic groups need m >= 1".into()));
    }
    let n = 2 * m;
    // element a^i x^j has index i + n*j
    let mul = move |u: usize, v: usize| {
        let (i, j) = (u % n, u / n);
        let (k, l) = (v % n, v / n);
        match (j, l) {
            (0, _) => (i + k) % n + n * l,
            (_, 0) => (i + n - k) % n + n,
            _ => (i + n - k + m) % n,
        }
    };
    from_regular(2 * n, mul, &[1, n])
}

pub fn quaternion() -> Result<FiniteGroup> {
    dicyclic(2)
}

/// Direct product acting on the disjoint union of the two domains.
pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Result<FiniteGroup> {
    let (da, db) = (a.degree(), b.degree());
    let mut gens = Vec::new();
    for g in a.generators() {
        let mut images: Vec<usize> = g.images().collect();
        images.extend(da..da + db);
        gens.push(Permutation::from_images(images)?);
    }
    for g in b.generators() {
        let mut images: Vec<usize> = (0..da).collect();
        images.extend(g.images().map(|x| x + da));
        gens.push(Permutation::from_images(images)?);
    }
    FiniteGroup::new(da + db, gens)
}

/// Direct product of cyclic groups of the given orders.
pub fn abelian(orders: &[usize]) -> Result<FiniteGroup> {
    let mut g = FiniteGroup::trivial();
    let mut first = true;
    for &n in orders {
        let c = cyclic(n)?;
        if first {
            g = c;
            first = false;
        } else {
            g = direct_product(&g, &c)?;
        }
    }
    Ok(g)
}

/// An automorphism of a finite group, stored as a map on element indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automorphism {
    map: Vec<usize>,
}

impl Automorphism {
    pub fn identity(group: &FiniteGroup) -> Self {
        Automorphism { map: (0..group.order()).collect() }
    }

    /// Extends an assignment of generator images and verifies by brute
    /// force that the result is a bijective homomorphism.
    pub fn from_generator_images(group: &FiniteGroup, images: &[Permutation]) -> Result<Self> {
        let gens = group.generator_indices();
        if images.len() != gens.len() {
            return Err(Error::InvalidAutomorphism(format!("{} images for {} generators", images.len(), gens.len())));
        }
        let img: Vec<usize> = images
            .iter()
            .map(|p| group.index_of(p).ok_or_else(|| Error::InvalidAutomorphism(format!("{p} not in group"))))
            .collect::<Result<_>>()?;
        let n = group.order();
        let mut map = vec![usize::MAX; n];
        map[0] = 0;
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (&g, &gi) in gens.iter().zip(&img) {
                let y = group.mul(x, g);
                if map[y] == usize::MAX {
                    map[y] = group.mul(map[x], gi);
                    queue.push_back(y);
                }
            }
        }
        let aut = Automorphism { map };
        aut.verify(group)?;
        Ok(aut)
    }

    pub fn from_map(group: &FiniteGroup, map: Vec<usize>) -> Result<Self> {
        let aut = Automorphism { map };
        aut.verify(group)?;
        Ok(aut)
    }

    fn verify(&self, group: &FiniteGroup) -> Result<()> {
        let n = group.order();
        if self.map.len() != n {
            return Err(Error::InvalidAutomorphism("wrong domain size".into()));
        }
        let mut hit = vec![false; n];
        for &y in &self.map {
            if y >= n || hit[y] {
                return Err(Error::InvalidAutomorphism("not bijective".into()));
            }
            hit[y] = true;
        }
        for a in 0..n {
            for b in 0..n {
                if self.map[group.mul(a, b)] != group.mul(self.map[a], self.map[b]) {
                    return Err(Error::InvalidAutomorphism("not a homomorphism".into()));
                }
            }
        }
        Ok(())
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism { map: other.map.iter().map(|&x| self.map[x]).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(i, &x)| i == x)
    }
}

/// `P ⋊_θ Q` with the embedded copies of `P` (normal) and `Q`.
#[derive(Clone, Debug)]
pub struct SemidirectProduct {
    pub group: FiniteGroup,
    pub normal: Subgroup,
    pub complement: Subgroup,
    /// `θ` evaluated on every element of `Q`, indexed by `Q`'s element index.
    pub action: Vec<Automorphism>,
}

impl SemidirectProduct {
    pub fn action_is_trivial(&self) -> bool {
        self.action.iter().all(Automorphism::is_identity)
    }
}

/// Builds `P ⋊_θ Q` where `theta[i]` is the automorphism by which the
/// `i`-th generator of `Q` acts. The product `(p1, q1)(p2, q2)` is
/// `(p1 θ(q1)(p2), q1 q2)`; the group is realised by its left action on
/// the `|P|·|Q|` pairs.
pub fn semidirect_product(p: &FiniteGroup, q: &FiniteGroup, theta: &[Automorphism]) -> Result<SemidirectProduct> {
    let qgens = q.generator_indices();
    if theta.len() != qgens.len() {
        return Err(Error::InvalidAutomorphism(format!(
            "{} automorphisms for {} generators of Q",
            theta.len(),
            qgens.len()
        )));
    }
    let (np, nq) = (p.order(), q.order());
    let mut action: Vec<Option<Automorphism>> = vec![None; nq];
    action[0] = Some(Automorphism::identity(p));
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for (&s, th) in qgens.iter().zip(theta) {
            let y = q.mul(x, s);
            if action[y].is_none() {
                action[y] = Some(action[x].as_ref().unwrap().compose(th));
                queue.push_back(y);
            }
        }
    }
    let action: Vec<Automorphism> = action.into_iter().map(Option::unwrap).collect();
    for x in 0..nq {
        for y in 0..nq {
            if action[q.mul(x, y)] != action[x].compose(&action[y]) {
                return Err(Error::InvalidAutomorphism("θ does not respect the relations of Q".into()));
            }
        }
    }
    let point = |i: usize, j: usize| i * nq + j;
    let degree = np * nq;
    let mut gens = Vec::new();
    for &g in p.generator_indices() {
        let mut images = vec![0; degree];
        for i in 0..np {
            for j in 0..nq {
                images[point(i, j)] = point(p.mul(g, i), j);
            }
        }
        gens.push(Permutation::from_images(images)?);
    }
    for &s in qgens {
        let mut images = vec![0; degree];
        for i in 0..np {
            for j in 0..nq {
                images[point(i, j)] = point(action[s].apply(i), q.mul(s, j));
            }
        }
        gens.push(Permutation::from_images(images)?);
    }
    let np_gens = p.generator_indices().len();
    let group = FiniteGroup::new(degree, gens.clone())?;
    let normal = group.subgroup(&gens[..np_gens])?;
    let complement = group.subgroup(&gens[np_gens..])?;
    Ok(SemidirectProduct { group, normal, complement, action })
}

/// `Z/n ⋊ Z/m` where the generator of `Z/m` acts by `x ↦ x^r`.
pub fn cyclic_semidirect(n: usize, m: usize, r: i64) -> Result<SemidirectProduct> {
    let p = cyclic(n)?;
    let q = cyclic(m)?;
    let image = if p.generators().is_empty() {
        Vec::new()
    } else {
        let g = p.generator_indices()[0];
        vec![p.element(p.pow(g, r)).clone()]
    };
    let theta = Automorphism::from_generator_images(&p, &image)?;
    let theta = if q.generators().is_empty() { Vec::new() } else { vec![theta] };
    semidirect_product(&p, &q, &theta)
}

/// The Heisenberg group mod `p`, `(Z/p)^2 ⋊ Z/p`, of order `p^3`.
pub fn heisenberg_mod(p: usize) -> Result<FiniteGroup> {
    let base = abelian(&[p, p])?;
    let gens = base.generator_indices().to_vec();
    let x = base.element(gens[0]).clone();
    let y = base.element(gens[1]).clone();
    let xy = x.compose(&y)?;
    let theta = Automorphism::from_generator_images(&base, &[xy, y])?;
    Ok(semidirect_product(&base, &cyclic(p)?, &[theta])?.group)
}
