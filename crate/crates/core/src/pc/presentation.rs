use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::arith::{checked_add, ext_gcd};
use crate::error::{Error, Result};

/// Default cap on collection steps per operation.
pub const DEFAULT_COLLECTION_CAP: u64 = 1_000_000;

/// An element in normal form `g_1^{e_1} ... g_n^{e_n}`, with
/// `0 ≤ e_i < o_i` whenever the relative order `o_i` is finite.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PcElement {
    exps: Vec<i64>,
}

impl PcElement {
    pub(crate) fn from_vec(exps: Vec<i64>) -> Self {
        PcElement { exps }
    }

    pub(crate) fn unit(n: usize, k: usize) -> Self {
        let mut exps = vec![0; n];
        exps[k] = 1;
        PcElement { exps }
    }

    pub fn exponents(&self) -> &[i64] {
        &self.exps
    }

    pub fn into_exponents(self) -> Vec<i64> {
        self.exps
    }

    pub fn is_identity(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// Position and exponent of the first nonzero entry.
    pub fn leading(&self) -> Option<(usize, i64)> {
        self.exps.iter().position(|&e| e != 0).map(|i| (i, self.exps[i]))
    }

    /// Index of the first nonzero entry, or `n` for the identity.
    pub fn depth(&self) -> usize {
        self.exps.iter().position(|&e| e != 0).unwrap_or(self.exps.len())
    }
}

impl fmt::Debug for PcElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps)
    }
}

/// A polycyclic presentation on generators `g_1, ..., g_n`.
///
/// Each `g_i` has a relative order `o_i` (finite or infinite). For finite
/// `o_i` the power relation gives `g_i^{o_i}` as an element of
/// `G_{i+1} = ⟨g_{i+1}, ..., g_n⟩`. For `i < j` the conjugation relation gives
/// `g_j^{g_i} = g_i^-1 g_j g_i` as an element of `G_j`, and for infinite `o_i`
/// also `g_j^{g_i^-1}`. Cheap to clone.
#[derive(Clone)]
pub struct PcPresentation {
    pub(crate) inner: Arc<PcData>,
}

pub(crate) struct PcData {
    pub names: Vec<String>,
    pub orders: Vec<Option<u64>>,
    /// `powers[i]` is `g_i^{o_i}`; identity for infinite `o_i`.
    pub powers: Vec<PcElement>,
    /// `conj[i][j]` is `g_j^{g_i}` for `j > i`.
    pub conj: Vec<Vec<PcElement>>,
    /// `conj_inv[i][j]` is `g_j^{g_i^-1}` for `j > i` and infinite `o_i`.
    pub conj_inv: Vec<Vec<PcElement>>,
    /// `trivial_conj[i][j]` is set when `g_i` and `g_j` commute.
    pub trivial_conj: Vec<Vec<bool>>,
    pub cap: u64,
}

impl PartialEq for PcPresentation {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = (&self.inner, &other.inner);
        Arc::ptr_eq(a, b)
            || (a.names == b.names
                && a.orders == b.orders
                && a.powers == b.powers
                && a.conj == b.conj
                && (0..a.names.len()).filter(|&i| a.orders[i].is_none()).all(|i| a.conj_inv[i] == b.conj_inv[i]))
    }
}

impl Eq for PcPresentation {}

impl fmt::Debug for PcPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PcPresentation")
            .field("generators", &self.inner.names)
            .field("orders", &self.inner.orders)
            .finish_non_exhaustive()
    }
}

/// Collects the relations of a polycyclic presentation. Generators default
/// to infinite order with trivial conjugation; missing inverse conjugation
/// relations are derived from the forward ones.
#[derive(Clone, Debug)]
pub struct PcBuilder {
    names: Vec<String>,
    orders: Vec<Option<u64>>,
    powers: BTreeMap<usize, Vec<i64>>,
    conj: BTreeMap<(usize, usize), Vec<i64>>,
    conj_inv: BTreeMap<(usize, usize), Vec<i64>>,
    cap: u64,
}

impl PcBuilder {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let n = names.len();
        PcBuilder {
            names,
            orders: vec![None; n],
            powers: BTreeMap::new(),
            conj: BTreeMap::new(),
            conj_inv: BTreeMap::new(),
            cap: DEFAULT_COLLECTION_CAP,
        }
    }

    /// Generators named `g1, ..., gn`.
    pub fn with_generators(n: usize) -> Self {
        Self::new((1..=n).map(|i| format!("g{i}")))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn order(&mut self, i: usize, order: Option<u64>) -> &mut Self {
        self.orders[i] = order;
        self
    }

    /// `g_i^{o_i} = exps`.
    pub fn power(&mut self, i: usize, exps: Vec<i64>) -> &mut Self {
        self.powers.insert(i, exps);
        self
    }

    /// `g_j^{g_i} = exps` for `i < j`.
    pub fn conj(&mut self, i: usize, j: usize, exps: Vec<i64>) -> &mut Self {
        self.conj.insert((i, j), exps);
        self
    }

    /// `g_j^{g_i^-1} = exps` for `i < j` and `g_i` of infinite order.
    pub fn conj_inv(&mut self, i: usize, j: usize, exps: Vec<i64>) -> &mut Self {
        self.conj_inv.insert((i, j), exps);
        self
    }

    pub fn collection_cap(&mut self, cap: u64) -> &mut Self {
        self.cap = cap;
        self
    }

    pub fn build(&self) -> Result<PcPresentation> {
        let n = self.names.len();
        let bad = |msg: String| Err(Error::InvalidPresentation(msg));
        for (i, o) in self.orders.iter().enumerate() {
            if matches!(o, Some(x) if *x < 2) {
                return bad(format!("relative order of {} must be at least 2", self.names[i]));
            }
        }
        let check = |what: &str, exps: &[i64], from: usize| -> Result<PcElement> {
            if exps.len() != n {
                return Err(Error::InvalidPresentation(format!("{what}: expected {n} exponents")));
            }
            for (k, &e) in exps.iter().enumerate() {
                if k < from && e != 0 {
                    return Err(Error::InvalidPresentation(format!(
                        "{what}: right-hand side must lie in ⟨{}, ...⟩",
                        self.names.get(from).map_or("", String::as_str)
                    )));
                }
                if let Some(o) = self.orders[k] {
                    if e < 0 || e >= o as i64 {
                        return Err(Error::InvalidPresentation(format!("{what}: exponent {e} out of range")));
                    }
                }
            }
            Ok(PcElement::from_vec(exps.to_vec()))
        };
        let mut powers = vec![PcElement::from_vec(vec![0; n]); n];
        for (&i, exps) in &self.powers {
            if i >= n || self.orders[i].is_none() {
                return bad(format!("power relation for generator {i} of infinite order"));
            }
            powers[i] = check(&format!("power relation of {}", self.names[i]), exps, i + 1)?;
        }
        let mut conj: Vec<Vec<PcElement>> = (0..n).map(|_| (0..n).map(|j| PcElement::unit(n, j)).collect()).collect();
        for (&(i, j), exps) in &self.conj {
            if !(i < j && j < n) {
                return bad(format!("conjugation relation ({i}, {j}) needs i < j"));
            }
            conj[i][j] = check(&format!("{}^{}", self.names[j], self.names[i]), exps, j)?;
        }
        let mut given_inv: Vec<Vec<Option<PcElement>>> = vec![vec![None; n]; n];
        for (&(i, j), exps) in &self.conj_inv {
            if !(i < j && j < n) || self.orders[i].is_some() {
                return bad(format!("inverse conjugation relation ({i}, {j}) needs i < j and g_i infinite"));
            }
            given_inv[i][j] = Some(check(&format!("{}^({}^-1)", self.names[j], self.names[i]), exps, j)?);
        }
        let trivial_conj =
            (0..n).map(|i| (0..n).map(|j| j <= i || conj[i][j] == PcElement::unit(n, j)).collect()).collect();
        let mut data = PcData {
            names: self.names.clone(),
            orders: self.orders.clone(),
            powers,
            conj,
            conj_inv: (0..n).map(|_| (0..n).map(|j| PcElement::unit(n, j)).collect()).collect(),
            trivial_conj,
            cap: self.cap,
        };
        // Inverse automorphisms from the bottom up: computing them for g_i
        // only needs collection in G_{i+1}.
        for i in (0..n).rev() {
            if data.orders[i].is_some() {
                continue;
            }
            let mut inv: Vec<PcElement> = (0..n).map(|j| PcElement::unit(n, j)).collect();
            for j in (i + 1..n).rev() {
                if let Some(x) = given_inv[i][j].take() {
                    inv[j] = x;
                    continue;
                }
                if data.trivial_conj[i][j] {
                    continue;
                }
                inv[j] = invert_image(&data, &inv, i, j)?;
            }
            data.conj_inv[i] = inv;
        }
        Ok(PcPresentation { inner: Arc::new(data) })
    }
}

/// `ψ(g_j)` for `ψ` the inverse of conjugation by `g_i`, given `ψ` on
/// `g_{j+1}, ..., g_n`: with `g_j^{g_i} = g_j^a r` and `ab ≡ 1`, `ψ(g_j) = g_j^b ψ(c^-b g_j)`.
fn invert_image(data: &PcData, known: &[PcElement], i: usize, j: usize) -> Result<PcElement> {
    let n = data.names.len();
    let c = &data.conj[i][j];
    let a = c.exps[j];
    let b = match data.orders[j] {
        None if a == 1 || a == -1 => a,
        Some(o) => {
            let (g, s, _) = ext_gcd(a, o as i64);
            if g != 1 {
                return Err(Error::InvalidPresentation(format!(
                    "conjugation by {} is not invertible on {}",
                    data.names[i], data.names[j]
                )));
            }
            s.rem_euclid(o as i64)
        }
        None => {
            return Err(Error::InvalidPresentation(format!(
                "conjugation by {} maps {} to a non-generator of the infinite layer",
                data.names[i], data.names[j]
            )))
        }
    };
    let mut col = Collector::new(data);
    let cb = col.pow(&c.exps, -b)?;
    let mut rest = cb;
    col.mul_gen_pow(&mut rest, j, 1)?;
    debug_assert!(rest[..=j].iter().all(|&e| e == 0));
    let image_rest = col.apply(known, &rest, j)?;
    let mut out = vec![0; n];
    col.mul_gen_pow(&mut out, j, b)?;
    col.mul_into(&mut out, &image_rest)?;
    Ok(PcElement::from_vec(out))
}

/// Collection from the left. Multiplying `x = u g_k^{x_k} t` on the right
/// by `g_k^e` gives `u g_k^{x_k + e} t^{g_k^e}`; any overflow of the
/// exponent is folded back through the power relation.
pub(crate) struct Collector<'a> {
    d: &'a PcData,
    steps: u64,
}

fn unit_vec(n: usize, k: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[k] = 1;
    v
}

impl<'a> Collector<'a> {
    pub fn new(d: &'a PcData) -> Self {
        Collector { d, steps: 0 }
    }

    /// Starts a new operation with a fresh step budget.
    pub fn reset(&mut self) {
        self.steps = 0;
    }

    fn tick(&mut self) -> Result<()> {
        self.steps += 1;
        if self.steps > self.d.cap {
            Err(Error::CollectionCap { cap: self.d.cap })
        } else {
            Ok(())
        }
    }

    /// `x := x · g_k^e`.
    pub fn mul_gen_pow(&mut self, x: &mut [i64], k: usize, e: i64) -> Result<()> {
        if e == 0 {
            return Ok(());
        }
        let d = self.d;
        let n = x.len();
        if let (Some(_), true) = (d.orders[k], e < 0) {
            let inv = self.inverse(&unit_vec(n, k))?;
            let p = self.pow(&inv, -e)?;
            return self.mul_into(x, &p);
        }
        self.tick()?;
        let mut tail = vec![0; n];
        if x[k + 1..].iter().any(|&v| v != 0) {
            tail[k + 1..].copy_from_slice(&x[k + 1..]);
            tail = self.conj_pow(tail, k, e)?;
        }
        let s = checked_add(x[k], e)?;
        match d.orders[k] {
            None => x[k] = s,
            Some(o) => {
                let o = o as i64;
                let (q, r) = (s.div_euclid(o), s.rem_euclid(o));
                x[k] = r;
                if q != 0 && !d.powers[k].is_identity() {
                    let mut w = self.pow(&d.powers[k].exps, q)?;
                    self.mul_into(&mut w, &tail)?;
                    tail = w;
                }
            }
        }
        x[k + 1..].copy_from_slice(&tail[k + 1..]);
        Ok(())
    }

    /// `x := x · y`.
    pub fn mul_into(&mut self, x: &mut [i64], y: &[i64]) -> Result<()> {
        for (j, &e) in y.iter().enumerate() {
            if e != 0 {
                self.mul_gen_pow(x, j, e)?;
            }
        }
        Ok(())
    }

    pub fn mul(&mut self, x: &[i64], y: &[i64]) -> Result<Vec<i64>> {
        let mut out = x.to_vec();
        self.mul_into(&mut out, y)?;
        Ok(out)
    }

    pub fn inverse(&mut self, y: &[i64]) -> Result<Vec<i64>> {
        let n = y.len();
        let mut z = y.to_vec();
        let mut f = vec![0; n];
        for k in 0..n {
            if z[k] != 0 {
                let fk = match self.d.orders[k] {
                    None => -z[k],
                    Some(o) => o as i64 - z[k],
                };
                self.mul_gen_pow(&mut z, k, fk)?;
                f[k] = fk;
            }
        }
        debug_assert!(z.iter().all(|&e| e == 0));
        Ok(f)
    }

    pub fn pow(&mut self, y: &[i64], m: i64) -> Result<Vec<i64>> {
        let n = y.len();
        if m == 0 || y.iter().all(|&e| e == 0) {
            return Ok(vec![0; n]);
        }
        if let Some(k) = y.iter().position(|&e| e != 0) {
            if y[k + 1..].iter().all(|&e| e == 0) && self.d.orders[k].is_none() {
                let mut out = vec![0; n];
                out[k] = crate::arith::checked_mul(y[k], m)?;
                return Ok(out);
            }
        }
        let (mut base, mut m) = if m < 0 { (self.inverse(y)?, m.unsigned_abs()) } else { (y.to_vec(), m as u64) };
        let mut acc = vec![0; n];
        loop {
            if m & 1 == 1 {
                self.mul_into(&mut acc, &base)?;
            }
            m >>= 1;
            if m == 0 {
                return Ok(acc);
            }
            let b = base.clone();
            self.mul_into(&mut base, &b)?;
        }
    }

    /// `ψ(t)` for `t ∈ G_{k+1}`, where the automorphism `ψ` of `G_{k+1}`
    /// is given by its images of `g_{k+1}, ..., g_n`.
    fn apply(&mut self, images: &[PcElement], t: &[i64], k: usize) -> Result<Vec<i64>> {
        let n = t.len();
        let mut out = vec![0; n];
        for j in k + 1..n {
            if t[j] == 0 {
                continue;
            }
            let img = &images[j].exps;
            if img[j] == 1 && img.iter().enumerate().all(|(l, &e)| l == j || e == 0) {
                self.mul_gen_pow(&mut out, j, t[j])?;
            } else {
                let p = self.pow(img, t[j])?;
                self.mul_into(&mut out, &p)?;
            }
        }
        Ok(out)
    }

    fn apply_vec(&mut self, images: &[Vec<i64>], t: &[i64], k: usize) -> Result<Vec<i64>> {
        let n = t.len();
        let mut out = vec![0; n];
        for j in k + 1..n {
            if t[j] != 0 {
                let p = self.pow(&images[j], t[j])?;
                self.mul_into(&mut out, &p)?;
            }
        }
        Ok(out)
    }

    /// `t^{g_k^e}` for `t ∈ G_{k+1}`.
    fn conj_pow(&mut self, t: Vec<i64>, k: usize, e: i64) -> Result<Vec<i64>> {
        let d = self.d;
        let n = t.len();
        if e == 0 || (k + 1..n).all(|j| t[j] == 0 || d.trivial_conj[k][j]) {
            return Ok(t);
        }
        if let Some(o) = d.orders[k] {
            let o = o as i64;
            if e >= o {
                // g_k^e = g_k^r w_k^q
                let (q, r) = (e.div_euclid(o), e.rem_euclid(o));
                let t = self.conj_pow(t, k, r)?;
                let w = self.pow(&d.powers[k].exps, q)?;
                let wi = self.inverse(&w)?;
                let mut out = wi;
                self.mul_into(&mut out, &t)?;
                self.mul_into(&mut out, &w)?;
                return Ok(out);
            }
        }
        let images = if e > 0 { &d.conj[k] } else { &d.conj_inv[k] };
        let m = e.unsigned_abs();
        if m <= 8 {
            let mut t = t;
            for _ in 0..m {
                t = self.apply(images, &t, k)?;
            }
            return Ok(t);
        }
        // square-and-multiply on the automorphism
        let mut cur: Vec<Vec<i64>> = images.iter().map(|x| x.exps.clone()).collect();
        let mut t = t;
        let mut m = m;
        loop {
            if m & 1 == 1 {
                t = self.apply_vec(&cur, &t, k)?;
            }
            m >>= 1;
            if m == 0 {
                return Ok(t);
            }
            let mut next = cur.clone();
            for j in k + 1..n {
                next[j] = self.apply_vec(&cur, &cur[j], k)?;
            }
            cur = next;
        }
    }
}

impl PcPresentation {
    pub(crate) fn data(&self) -> &PcData {
        &self.inner
    }

    pub(crate) fn collector(&self) -> Collector<'_> {
        Collector::new(&self.inner)
    }

    /// Number of generators.
    pub fn len(&self) -> usize {
        self.inner.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.inner.names
    }

    pub fn relative_orders(&self) -> &[Option<u64>] {
        &self.inner.orders
    }

    pub fn collection_cap(&self) -> u64 {
        self.inner.cap
    }

    pub fn same_presentation(&self, other: &PcPresentation) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
    }

    /// `g_i^{o_i}`, for finite `o_i`.
    pub fn power_relation(&self, i: usize) -> Option<&PcElement> {
        self.inner.orders[i].map(|_| &self.inner.powers[i])
    }

    /// `g_j^{g_i}` for `i < j`.
    pub fn conj_relation(&self, i: usize, j: usize) -> &PcElement {
        &self.inner.conj[i][j]
    }

    /// `g_j^{g_i^-1}` for `i < j` and infinite `o_i`.
    pub fn conj_inv_relation(&self, i: usize, j: usize) -> Option<&PcElement> {
        self.inner.orders[i].is_none().then(|| &self.inner.conj_inv[i][j])
    }

    pub fn commutes(&self, i: usize, j: usize) -> bool {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        self.inner.trivial_conj[i][j]
    }

    pub fn identity(&self) -> PcElement {
        PcElement::from_vec(vec![0; self.len()])
    }

    pub fn generator(&self, i: usize) -> PcElement {
        PcElement::unit(self.len(), i)
    }

    pub fn generators(&self) -> Vec<PcElement> {
        (0..self.len()).map(|i| self.generator(i)).collect()
    }

    /// Validates an exponent vector as a normal form.
    pub fn element(&self, exps: Vec<i64>) -> Result<PcElement> {
        if exps.len() != self.len() {
            return Err(Error::InvalidPresentation(format!("expected {} exponents", self.len())));
        }
        for (e, o) in exps.iter().zip(&self.inner.orders) {
            if let Some(o) = o {
                if *e < 0 || *e >= *o as i64 {
                    return Err(Error::InvalidPresentation(format!("exponent {e} outside [0, {o})")));
                }
            }
        }
        Ok(PcElement::from_vec(exps))
    }

    /// Normal form of the word `g_{i_1}^{e_1} g_{i_2}^{e_2} ...`.
    pub fn collect(&self, word: &[(usize, i64)]) -> Result<PcElement> {
        let mut col = self.collector();
        let mut x = vec![0; self.len()];
        for &(g, e) in word {
            if g >= self.len() {
                return Err(Error::InvalidPresentation(format!("no generator {g}")));
            }
            col.mul_gen_pow(&mut x, g, e)?;
        }
        Ok(PcElement::from_vec(x))
    }

    pub fn mul(&self, a: &PcElement, b: &PcElement) -> Result<PcElement> {
        Ok(PcElement::from_vec(self.collector().mul(&a.exps, &b.exps)?))
    }

    pub fn inverse(&self, a: &PcElement) -> Result<PcElement> {
        Ok(PcElement::from_vec(self.collector().inverse(&a.exps)?))
    }

    pub fn pow(&self, a: &PcElement, m: i64) -> Result<PcElement> {
        Ok(PcElement::from_vec(self.collector().pow(&a.exps, m)?))
    }

    /// `g^-1 a g`.
    pub fn conj(&self, a: &PcElement, g: &PcElement) -> Result<PcElement> {
        let mut col = self.collector();
        let mut x = col.inverse(&g.exps)?;
        col.mul_into(&mut x, &a.exps)?;
        col.mul_into(&mut x, &g.exps)?;
        Ok(PcElement::from_vec(x))
    }

    /// `[a, b] = a^-1 b^-1 a b`.
    pub fn comm(&self, a: &PcElement, b: &PcElement) -> Result<PcElement> {
        let mut col = self.collector();
        let ba = col.mul(&b.exps, &a.exps)?;
        let mut x = col.inverse(&ba)?;
        col.mul_into(&mut x, &a.exps)?;
        col.mul_into(&mut x, &b.exps)?;
        Ok(PcElement::from_vec(x))
    }

    /// Number of generators of infinite relative order.
    pub fn hirsch_length(&self) -> usize {
        self.inner.orders.iter().filter(|o| o.is_none()).count()
    }

    /// Product of the relative orders; `None` when the group is infinite.
    pub fn group_order(&self) -> Result<Option<u128>> {
        let mut acc: u128 = 1;
        for o in &self.inner.orders {
            match o {
                None => return Ok(None),
                Some(o) => acc = acc.checked_mul(*o as u128).ok_or(Error::Overflow("group order"))?,
            }
        }
        Ok(Some(acc))
    }

    /// Renders an element as a word such as `a*b^2*c^-1`.
    pub fn format(&self, x: &PcElement) -> String {
        let parts: Vec<String> = x
            .exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, &e)| {
                let name = &self.inner.names[i];
                if e == 1 {
                    name.clone()
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    /// A builder preloaded with this presentation's relations.
    pub fn to_builder(&self) -> PcBuilder {
        let d = &self.inner;
        let n = self.len();
        let mut b = PcBuilder::new(d.names.clone());
        b.collection_cap(d.cap);
        for i in 0..n {
            b.order(i, d.orders[i]);
            if d.orders[i].is_some() && !d.powers[i].is_identity() {
                b.power(i, d.powers[i].exps.clone());
            }
            for j in i + 1..n {
                if !d.trivial_conj[i][j] {
                    b.conj(i, j, d.conj[i][j].exps.clone());
                }
                if d.orders[i].is_none() && d.conj_inv[i][j] != PcElement::unit(n, j) {
                    b.conj_inv(i, j, d.conj_inv[i][j].exps.clone());
                }
            }
        }
        b
    }
}
