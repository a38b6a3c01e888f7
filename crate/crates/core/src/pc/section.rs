use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::nilq::{smith_normal_form, AbelianInvariants, Snf};

use super::presentation::{PcElement, PcPresentation};
use super::subgroup::PcSubgroup;

/// An abelian section `A/B` with `B ⊴ A` and `[A, A] ≤ B`, coordinatised by
/// the induced sequence of `A`.
pub struct AbelianSection<'a> {
    parent: &'a PcPresentation,
    seq: Vec<PcElement>,
    rows: Vec<Vec<BigInt>>,
    snf: Snf,
}

impl<'a> AbelianSection<'a> {
    pub fn new(a: &'a PcSubgroup, b: &PcSubgroup) -> Result<Self> {
        let parent = a.parent();
        let seq = a.generators();
        let orders = parent.relative_orders();
        let mut section = AbelianSection { parent, seq, rows: Vec::new(), snf: smith_normal_form(&[], 0) };
        let mut rows = Vec::new();
        for (idx, y) in section.seq.iter().enumerate() {
            let (d, lead) = y.leading().unwrap();
            if let Some(o) = orders[d] {
                let r = o as i64 / lead;
                let mut row = section.coords(&parent.pow(y, r)?)?;
                for v in row.iter_mut() {
                    *v = -&*v;
                }
                row[idx] += r;
                rows.push(row);
            }
        }
        for z in b.sequence() {
            rows.push(section.coords(z)?);
        }
        section.snf = smith_normal_form(&rows, section.seq.len());
        section.rows = rows;
        Ok(section)
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    pub fn sequence(&self) -> &[PcElement] {
        &self.seq
    }

    pub fn relations(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn snf(&self) -> &Snf {
        &self.snf
    }

    pub fn invariants(&self) -> AbelianInvariants {
        self.snf.invariants(self.seq.len())
    }

    /// Exponents of `x ∈ A` along the induced sequence.
    pub fn coords(&self, x: &PcElement) -> Result<Vec<BigInt>> {
        let mut c = vec![BigInt::zero(); self.seq.len()];
        let mut col = self.parent.collector();
        let mut x = x.exponents().to_vec();
        for (idx, y) in self.seq.iter().enumerate() {
            let (d, lead) = y.leading().unwrap();
            if x[d] == 0 {
                continue;
            }
            if x[d] % lead != 0 {
                return Err(Error::Inconsistent("element outside the section".into()));
            }
            let q = x[d] / lead;
            c[idx] = BigInt::from(q);
            let yq = col.pow(y.exponents(), -q)?;
            col.mul_into(&mut x, &yq)?;
        }
        if x.iter().any(|&e| e != 0) {
            return Err(Error::Inconsistent("element outside the section".into()));
        }
        Ok(c)
    }

    /// Coordinates in the Smith basis: entry `k` is taken modulo the `k`-th
    /// invariant factor (a zero factor means a free coordinate).
    pub fn smith_coords(&self, x: &PcElement) -> Result<Vec<BigInt>> {
        let c = self.coords(x)?;
        Ok(self.to_smith(&c))
    }

    pub fn to_smith(&self, c: &[BigInt]) -> Vec<BigInt> {
        let n = self.seq.len();
        let diag = self.snf.diagonal();
        (0..n)
            .map(|k| {
                let y: BigInt = (0..n).map(|i| &c[i] * &self.snf.v[i][k]).sum();
                match diag.get(k) {
                    Some(d) => ((y % d) + d) % d,
                    None => y,
                }
            })
            .collect()
    }

    /// The element of `A` with the given Smith coordinates.
    pub fn from_smith(&self, s: &[BigInt]) -> Result<PcElement> {
        let n = self.seq.len();
        let c: Vec<BigInt> = (0..n).map(|i| (0..n).map(|k| &s[k] * &self.snf.v_inv[k][i]).sum()).collect();
        self.element(&c)
    }

    /// `y_1^{c_1} ⋯ y_m^{c_m}` along the induced sequence.
    pub fn element(&self, c: &[BigInt]) -> Result<PcElement> {
        let mut x = self.parent.identity();
        for (y, e) in self.seq.iter().zip(c) {
            let e = e.to_i64().ok_or(Error::Overflow("section coordinate"))?;
            x = self.parent.mul(&x, &self.parent.pow(y, e)?)?;
        }
        Ok(x)
    }

    /// The invariant factors, one per Smith coordinate, zero for free ones.
    pub fn moduli(&self) -> Vec<BigInt> {
        let diag = self.snf.diagonal();
        (0..self.seq.len()).map(|k| diag.get(k).cloned().unwrap_or_else(BigInt::zero)).collect()
    }
}
