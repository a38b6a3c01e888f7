use std::fmt;

use crate::error::{Error, Result};

/// A bijection of `{0, .., degree - 1}`.
///
/// Composition follows the left-action convention: `p.compose(&q)` is the
/// map `x -> p(q(x))`, so `q` acts first. Group products throughout the
/// crate use this convention.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation { images: (0..degree as u32).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        if n == 0 {
            return Err(Error::InvalidPermutation("degree must be positive".into()));
        }
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(Error::InvalidPermutation(format!("{images:?}")));
            }
            seen[x] = true;
        }
        Ok(Permutation { images: images.into_iter().map(|x| x as u32).collect() })
    }

    /// Builds a permutation from disjoint cycles, e.g. `&[&[0, 1], &[2, 3, 4]]`.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                if x >= degree || touched[x] {
                    return Err(Error::InvalidPermutation(format!("bad cycle {cycle:?}")));
                }
                touched[x] = true;
                images[x] = cycle[(k + 1) % cycle.len()];
            }
        }
        Self::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    pub fn images(&self) -> impl Iterator<Item = usize> + '_ {
        self.images.iter().map(|&x| x as usize)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch { left: self.degree(), right: other.degree() });
        }
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Permutation) -> Permutation {
        Permutation { images: other.images.iter().map(|&x| self.images[x as usize]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u32; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as u32;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// Disjoint cycles of length at least two, each starting at its least point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut x = self.apply(start);
            while x != start {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// Order as a group element (lcm of cycle lengths).
    pub fn order(&self) -> u64 {
        self.cycles().iter().fold(1u64, |acc, c| num_integer::lcm(acc, c.len() as u64))
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (k, x) in c.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cyc(n: usize, cycles: &[&[usize]]) -> Permutation {
        Permutation::from_cycles(n, cycles).unwrap()
    }

    #[test]
    fn involution_squares_to_identity() {
        let t = cyc(2, &[&[0, 1]]);
        assert!(t.compose(&t).unwrap().is_identity());
    }

    #[test]
    fn three_cycle_inverse() {
        assert_eq!(cyc(3, &[&[0, 1, 2]]).inverse(), cyc(3, &[&[0, 2, 1]]));
    }

    #[test]
    fn s3_products_match_hand_table() {
        // (p∘q)(x) = p(q(x)); tabulated by hand for the generators of S3.
        let t = cyc(3, &[&[0, 1]]);
        let r = cyc(3, &[&[0, 1, 2]]);
        // t∘r: 0 -> r -> 1 -> t -> 0; 1 -> 2 -> 2; 2 -> 0 -> 1.
        assert_eq!(t.compose(&r).unwrap(), cyc(3, &[&[1, 2]]));
        // r∘t: 0 -> 1 -> 2; 1 -> 0 -> 1; 2 -> 2 -> 0.
        assert_eq!(r.compose(&t).unwrap(), cyc(3, &[&[0, 2]]));
        assert_eq!(r.compose(&r).unwrap(), r.inverse());
    }

    #[test]
    fn degree_mismatch_is_an_error() {
        let a = Permutation::identity(2);
        let b = Permutation::identity(3);
        assert_eq!(a.compose(&b), Err(Error::DegreeMismatch { left: 2, right: 3 }));
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_images(vec![0, 0, 1]).is_err());
        assert!(Permutation::from_images(vec![]).is_err());
        assert!(Permutation::from_cycles(3, &[&[0, 1], &[1, 2]]).is_err());
    }

    #[test]
    fn display_and_order() {
        let p = cyc(5, &[&[0, 1], &[2, 3, 4]]);
        assert_eq!(p.to_string(), "(0 1)(2 3 4)");
        assert_eq!(p.order(), 6);
        assert_eq!(Permutation::identity(4).to_string(), "()");
    }
}
