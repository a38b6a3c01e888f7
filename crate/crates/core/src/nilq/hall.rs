use std::fmt;

use crate::error::{Error, Result};

/// Largest Hall basis built before giving up.
pub const DEFAULT_HALL_CAP: usize = 20_000;

/// `(1/n) Σ_{d | n} μ(d) r^{n/d}`, the rank of the degree-`n` part of the
/// free Lie ring on `r` generators.
///
/// # Panics
/// If `r^n` does not fit in a `u128`.
pub fn witt_rank(r: u64, n: u32) -> u128 {
    assert!(n >= 1, "weight must be positive");
    let mut total: i128 = 0;
    for d in 1..=n {
        if !n.is_multiple_of(d) {
            continue;
        }
        let mu = mobius(d);
        if mu == 0 {
            continue;
        }
        let term = (r as u128).checked_pow(n / d).expect("r^n overflows u128") as i128;
        total += mu as i128 * term;
    }
    (total / n as i128) as u128
}

fn mobius(mut n: u32) -> i32 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// A basic commutator, referring to earlier basis entries by index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HallNode {
    Leaf(usize),
    Comm(usize, usize),
}

/// Basic commutators of weight at most `class` on `rank` generators.
///
/// Entries are sorted by weight; within a weight, `[u, v]` comes before
/// `[u', v']` when `(u, v) < (u', v')` as index pairs. `[u, v]` is basic
/// when `u > v` and, if `u = [x, y]`, also `y ≤ v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HallBasis {
    rank: usize,
    class: usize,
    nodes: Vec<HallNode>,
    weights: Vec<usize>,
    /// `starts[w - 1]` is the first index of weight `w`; one extra entry
    /// marks the end.
    starts: Vec<usize>,
}

pub fn hall_basis(rank: usize, class: usize) -> Result<HallBasis> {
    hall_basis_capped(rank, class, DEFAULT_HALL_CAP)
}

pub fn hall_basis_capped(rank: usize, class: usize, cap: usize) -> Result<HallBasis> {
    if rank == 0 || class == 0 {
        return Err(Error::Precondition("rank and class must be positive".into()));
    }
    let mut nodes: Vec<HallNode> = (0..rank).map(HallNode::Leaf).collect();
    let mut weights = vec![1; rank];
    let mut starts = vec![0, rank];
    if rank > cap {
        return Err(Error::Cap { what: "Hall basis", cap });
    }
    for w in 2..=class {
        let mut fresh = Vec::new();
        for u in 0..nodes.len() {
            let wu = weights[u];
            if wu >= w {
                break;
            }
            let wv = w - wu;
            for v in starts[wv - 1]..starts[wv] {
                if v >= u {
                    break;
                }
                if let HallNode::Comm(_, y) = nodes[u] {
                    if y > v {
                        continue;
                    }
                }
                fresh.push(HallNode::Comm(u, v));
            }
        }
        if nodes.len() + fresh.len() > cap {
            return Err(Error::Cap { what: "Hall basis", cap });
        }
        weights.extend(std::iter::repeat_n(w, fresh.len()));
        nodes.extend(fresh);
        starts.push(nodes.len());
    }
    Ok(HallBasis { rank, class, nodes, weights, starts })
}

impl HallBasis {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn class(&self) -> usize {
        self.class
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, i: usize) -> HallNode {
        self.nodes[i]
    }

    pub fn weight(&self, i: usize) -> usize {
        self.weights[i]
    }

    /// Indices of the basic commutators of weight `w`.
    pub fn of_weight(&self, w: usize) -> std::ops::Range<usize> {
        if w == 0 || w > self.class {
            return self.nodes.len()..self.nodes.len();
        }
        self.starts[w - 1]..self.starts[w]
    }

    /// Number of entries of each weight `1..=class`.
    pub fn weight_counts(&self) -> Vec<usize> {
        (1..=self.class).map(|w| self.of_weight(w).len()).collect()
    }

    /// `[[b,a],a]`-style rendering with the given generator names.
    pub fn format(&self, i: usize, names: &[String]) -> String {
        match self.nodes[i] {
            HallNode::Leaf(g) => names[g].clone(),
            HallNode::Comm(u, v) => format!("[{},{}]", self.format(u, names), self.format(v, names)),
        }
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        struct D<'a>(&'a HallBasis, &'a [String]);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let items: Vec<String> = (0..self.0.len()).map(|i| self.0.format(i, self.1)).collect();
                write!(f, "{}", items.join(", "))
            }
        }
        D(self, names)
    }
}
