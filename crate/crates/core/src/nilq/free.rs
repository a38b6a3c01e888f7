use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::io::default_generator_names;
use crate::pc::{PcBuilder, PcElement, PcPresentation, PcSubgroup};

use super::hall::{hall_basis_capped, HallBasis, HallNode, DEFAULT_HALL_CAP};
use super::magnus::{LatticeSolver, Magnus, Series};

/// `F_r / γ_{c+1} F_r` as a pc presentation on its Hall basis.
#[derive(Clone, Debug)]
pub struct FreeNilpotent {
    pub presentation: PcPresentation,
    pub basis: HallBasis,
    /// Names of the free generators.
    pub generators: Vec<String>,
}

pub fn free_nilpotent(rank: usize, class: usize) -> Result<FreeNilpotent> {
    free_nilpotent_named(default_generator_names(rank), class, DEFAULT_HALL_CAP)
}

/// Builds the free nilpotent group on the given generator names. Structure
/// constants come from the Magnus embedding: each conjugate
/// `g_j^{g_i}` is expanded as a truncated power series and peeled apart
/// weight by weight.
pub fn free_nilpotent_named(generators: Vec<String>, class: usize, cap: usize) -> Result<FreeNilpotent> {
    let r = generators.len();
    let basis = hall_basis_capped(r, class, cap)?;
    let n = basis.len();
    let magnus = Magnus::new(r, class);
    let mut series: Vec<Series> = Vec::with_capacity(n);
    for i in 0..n {
        let s = match basis.node(i) {
            HallNode::Leaf(g) => magnus.generator(g),
            HallNode::Comm(u, v) => magnus.comm(&series[u], &series[v])?,
        };
        series.push(s);
    }
    let mut solvers = Vec::with_capacity(class);
    for w in 1..=class {
        let rows = basis
            .of_weight(w)
            .map(|i| {
                magnus
                    .degree(&series[i], w)
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| **x != 0)
                    .map(|(k, x)| (k, BigInt::from(*x)))
                    .collect::<BTreeMap<_, _>>()
            })
            .collect();
        solvers.push(LatticeSolver::new(rows)?);
    }
    let decompose = |s: &Series| -> Result<Vec<i64>> {
        let mut exps = vec![0; n];
        let mut rest = s.clone();
        for w in 1..=class {
            let lambda = solvers[w - 1].solve(magnus.degree(&rest, w))?;
            let mut block = magnus.one();
            for (i, &e) in basis.of_weight(w).zip(&lambda) {
                exps[i] = e;
                if e != 0 {
                    block = magnus.mul(&block, &magnus.pow(&series[i], e)?)?;
                }
            }
            rest = magnus.mul(&magnus.inverse(&block)?, &rest)?;
        }
        if !magnus.is_one(&rest) {
            return Err(Error::Inconsistent("Magnus decomposition left a remainder".into()));
        }
        Ok(exps)
    };

    let mut names: Vec<String> = generators.clone();
    for i in r..n {
        let mut name = format!("h{}", i + 1);
        while names.contains(&name) {
            name.insert(0, '_');
        }
        names.push(name);
    }
    let mut b = PcBuilder::new(names);
    for i in 0..n {
        for j in i + 1..n {
            if basis.weight(i) + basis.weight(j) > class {
                continue;
            }
            let inv = magnus.inverse(&series[i])?;
            let conj = magnus.mul(&magnus.mul(&inv, &series[j])?, &series[i])?;
            let exps = decompose(&conj)?;
            if exps != unit(n, j) {
                b.conj(i, j, exps);
            }
        }
    }
    let presentation = b.build()?;
    Ok(FreeNilpotent { presentation, basis, generators })
}

fn unit(n: usize, j: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[j] = 1;
    v
}

impl FreeNilpotent {
    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn class(&self) -> usize {
        self.basis.class()
    }

    /// `γ_k`, spanned by the basic commutators of weight at least `k`.
    pub fn lcs_term(&self, k: usize) -> Result<PcSubgroup> {
        let p = &self.presentation;
        if k > self.class() {
            return Ok(p.trivial_subgroup());
        }
        let start = self.basis.of_weight(k.max(1)).start;
        p.subgroup(&(start..self.basis.len()).map(|i| p.generator(i)).collect::<Vec<_>>())
    }

    /// Evaluates a word in the free generators.
    pub fn eval(&self, word: &[(usize, i64)]) -> Result<PcElement> {
        if let Some(&(g, _)) = word.iter().find(|(g, _)| *g >= self.rank()) {
            return Err(Error::Precondition(format!("generator index {g} out of range")));
        }
        self.presentation.collect(word)
    }

    /// Label of pc generator `i` as a bracketed commutator.
    pub fn label(&self, i: usize) -> String {
        self.basis.format(i, &self.generators)
    }
}
