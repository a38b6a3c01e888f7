use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The ring `Z⟨X_1, ..., X_r⟩` truncated above degree `c`. The free group
/// maps into its units by `a_i ↦ 1 + X_i`, and the kernel is `γ_{c+1}`.
pub(crate) struct Magnus {
    r: usize,
    c: usize,
    offsets: Vec<usize>,
}

pub(crate) type Series = Vec<i128>;

fn add(a: i128, b: i128) -> Result<i128> {
    a.checked_add(b).ok_or(Error::Overflow("Magnus coefficient"))
}

fn mul(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b).ok_or(Error::Overflow("Magnus coefficient"))
}

impl Magnus {
    pub fn new(r: usize, c: usize) -> Self {
        let mut offsets = vec![0];
        for d in 0..=c {
            offsets.push(offsets[d] + r.pow(d as u32));
        }
        Magnus { r, c, offsets }
    }

    fn size(&self, d: usize) -> usize {
        self.r.pow(d as u32)
    }

    pub fn one(&self) -> Series {
        let mut s = vec![0; self.offsets[self.c + 1]];
        s[0] = 1;
        s
    }

    /// `1 + X_i`.
    pub fn generator(&self, i: usize) -> Series {
        let mut s = self.one();
        if self.c >= 1 {
            s[self.offsets[1] + i] = 1;
        }
        s
    }

    pub fn degree<'s>(&self, s: &'s Series, d: usize) -> &'s [i128] {
        &s[self.offsets[d]..self.offsets[d + 1]]
    }

    pub fn mul(&self, a: &Series, b: &Series) -> Result<Series> {
        let mut out = vec![0; a.len()];
        for d1 in 0..=self.c {
            let (oa, na) = (self.offsets[d1], self.size(d1));
            for d2 in 0..=self.c - d1 {
                let (ob, nb) = (self.offsets[d2], self.size(d2));
                let oo = self.offsets[d1 + d2];
                for i in 0..na {
                    let x = a[oa + i];
                    if x == 0 {
                        continue;
                    }
                    for j in 0..nb {
                        let y = b[ob + j];
                        if y != 0 {
                            let k = oo + i * nb + j;
                            out[k] = add(out[k], mul(x, y)?)?;
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Inverse of a series with constant term 1: `Σ (1 - s)^k`.
    pub fn inverse(&self, s: &Series) -> Result<Series> {
        debug_assert_eq!(s[0], 1);
        let mut nil: Series = s.iter().map(|x| -x).collect();
        nil[0] = 0;
        let mut out = self.one();
        let mut term = self.one();
        for _ in 0..self.c {
            term = self.mul(&term, &nil)?;
            for (o, t) in out.iter_mut().zip(&term) {
                *o = add(*o, *t)?;
            }
        }
        Ok(out)
    }

    pub fn pow(&self, s: &Series, e: i64) -> Result<Series> {
        let mut base = if e < 0 { self.inverse(s)? } else { s.clone() };
        let mut m = e.unsigned_abs();
        let mut acc = self.one();
        while m > 0 {
            if m & 1 == 1 {
                acc = self.mul(&acc, &base)?;
            }
            m >>= 1;
            if m > 0 {
                base = self.mul(&base, &base)?;
            }
        }
        Ok(acc)
    }

    pub fn comm(&self, a: &Series, b: &Series) -> Result<Series> {
        let ai = self.inverse(a)?;
        let bi = self.inverse(b)?;
        self.mul(&self.mul(&ai, &bi)?, &self.mul(a, b)?)
    }

    pub fn is_one(&self, s: &Series) -> bool {
        s[0] == 1 && s[1..].iter().all(|&x| x == 0)
    }
}

/// Solves `λ · L = v` for integer `λ`, where the rows of `L` span a direct
/// summand of the ambient lattice. Rows are reduced to echelon form once,
/// remembering how each echelon row combines the originals.
pub(crate) struct LatticeSolver {
    rows: Vec<BTreeMap<usize, BigInt>>,
    transform: Vec<Vec<BigInt>>,
    originals: usize,
}

fn lead(row: &BTreeMap<usize, BigInt>) -> Option<usize> {
    row.keys().next().copied()
}

fn axpy(dst: &mut BTreeMap<usize, BigInt>, src: &BTreeMap<usize, BigInt>, q: &BigInt) {
    for (k, v) in src {
        let e = dst.entry(*k).or_insert_with(BigInt::zero);
        *e -= v * q;
        if e.is_zero() {
            dst.remove(k);
        }
    }
}

fn vec_axpy(dst: &mut [BigInt], src: &[BigInt], q: &BigInt) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d -= s * q;
    }
}

impl LatticeSolver {
    pub fn new(rows: Vec<BTreeMap<usize, BigInt>>) -> Result<Self> {
        let m = rows.len();
        let mut work: Vec<(BTreeMap<usize, BigInt>, Vec<BigInt>)> = rows
            .into_iter()
            .enumerate()
            .map(|(i, r)| {
                let mut t = vec![BigInt::zero(); m];
                t[i] = BigInt::from(1);
                (r, t)
            })
            .collect();
        let mut done: Vec<(BTreeMap<usize, BigInt>, Vec<BigInt>)> = Vec::new();
        while !work.is_empty() {
            work.retain(|(r, _)| !r.is_empty());
            let Some(col) = work.iter().filter_map(|(r, _)| lead(r)).min() else { break };
            // Euclid on the rows led by `col` until one remains
            loop {
                let mut led: Vec<usize> = (0..work.len()).filter(|&i| lead(&work[i].0) == Some(col)).collect();
                led.sort_by_key(|&i| work[i].0[&col].magnitude().clone());
                let p = led[0];
                if led.len() == 1 {
                    done.push(work.swap_remove(p));
                    break;
                }
                let (prow, ptrans) = work[p].clone();
                for &i in &led[1..] {
                    let q = work[i].0[&col].div_floor(&prow[&col]);
                    axpy(&mut work[i].0, &prow, &q);
                    vec_axpy(&mut work[i].1, &ptrans, &q);
                }
                work.retain(|(r, _)| !r.is_empty());
            }
        }
        if done.len() != m {
            return Err(Error::Inconsistent("basic commutators are linearly dependent".into()));
        }
        let (rows, transform) = done.into_iter().unzip();
        Ok(LatticeSolver { rows, transform, originals: m })
    }

    pub fn solve(&self, v: &[i128]) -> Result<Vec<i64>> {
        let mut rest: BTreeMap<usize, BigInt> =
            v.iter().enumerate().filter(|(_, x)| **x != 0).map(|(k, x)| (k, BigInt::from(*x))).collect();
        let mut lambda = vec![BigInt::zero(); self.originals];
        for (row, t) in self.rows.iter().zip(&self.transform) {
            let col = lead(row).unwrap();
            let Some(x) = rest.get(&col).cloned() else { continue };
            let (q, r) = x.div_rem(&row[&col]);
            if !r.is_zero() {
                return Err(Error::Inconsistent("layer element is not an integer combination".into()));
            }
            axpy(&mut rest, row, &q);
            vec_axpy(&mut lambda, t, &-q);
        }
        if !rest.is_empty() {
            return Err(Error::Inconsistent("layer element outside the Lie lattice".into()));
        }
        lambda.iter().map(|x| x.to_i64().ok_or(Error::Overflow("Hall coordinate"))).collect()
    }
}
