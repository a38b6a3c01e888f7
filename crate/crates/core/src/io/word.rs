use std::fmt;

use crate::error::{Error, Result};

/// A freely reduced word: no zero exponents and no two adjacent syllables
/// on the same generator.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word {
    syllables: Vec<(String, i64)>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn generator(name: impl Into<String>) -> Self {
        Word { syllables: vec![(name.into(), 1)] }
    }

    /// Builds a word from arbitrary syllables, reducing freely.
    pub fn new<S: Into<String>>(syllables: impl IntoIterator<Item = (S, i64)>) -> Self {
        let mut w = Word::identity();
        for (name, e) in syllables {
            w.push(name.into(), e);
        }
        w
    }

    fn push(&mut self, name: String, e: i64) {
        if e == 0 {
            return;
        }
        match self.syllables.last_mut() {
            Some((last, f)) if *last == name => {
                *f += e;
                if *f == 0 {
                    self.syllables.pop();
                }
            }
            _ => self.syllables.push((name, e)),
        }
    }

    pub fn syllables(&self) -> &[(String, i64)] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Sum of the absolute values of the exponents.
    pub fn len(&self) -> u64 {
        self.syllables.iter().map(|(_, e)| e.unsigned_abs()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.is_identity()
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for (name, e) in &other.syllables {
            w.push(name.clone(), *e);
        }
        w
    }

    pub fn inverse(&self) -> Word {
        Word { syllables: self.syllables.iter().rev().map(|(n, e)| (n.clone(), -e)).collect() }
    }

    pub fn pow(&self, k: i64) -> Word {
        if let [(name, e)] = self.syllables.as_slice() {
            return Word::new([(name.clone(), e.checked_mul(k).expect("exponent overflow"))]);
        }
        let base = if k < 0 { self.inverse() } else { self.clone() };
        (0..k.unsigned_abs()).fold(Word::identity(), |acc, _| acc.mul(&base))
    }

    /// `[x, y] = x^-1 y^-1 x y`.
    pub fn commutator(x: &Word, y: &Word) -> Word {
        x.inverse().mul(&y.inverse()).mul(x).mul(y)
    }

    /// Generator names in order of first appearance.
    pub fn generators(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for (n, _) in &self.syllables {
            if !out.contains(&n.as_str()) {
                out.push(n);
            }
        }
        out
    }

    /// The word over generator indices into `names`.
    pub fn to_indices(&self, names: &[String]) -> Result<Vec<(usize, i64)>> {
        self.syllables
            .iter()
            .map(|(n, e)| {
                names
                    .iter()
                    .position(|m| m == n)
                    .map(|i| (i, *e))
                    .ok_or_else(|| Error::InvalidPresentation(format!("undeclared generator {n}")))
            })
            .collect()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return write!(f, "1");
        }
        for (i, (n, e)) in self.syllables.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{n}")?;
            } else {
                write!(f, "{n}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A finitely presented group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpPresentation {
    pub name: String,
    pub generators: Vec<String>,
    pub relators: Vec<Word>,
}

impl FpPresentation {
    pub fn new(name: impl Into<String>, generators: Vec<String>, relators: Vec<Word>) -> Result<Self> {
        for (i, g) in generators.iter().enumerate() {
            if generators[..i].contains(g) {
                return Err(Error::InvalidPresentation(format!("generator {g} declared twice")));
            }
        }
        for r in &relators {
            r.to_indices(&generators)?;
        }
        Ok(FpPresentation { name: name.into(), generators, relators })
    }

    /// The free group on the given generators.
    pub fn free(name: impl Into<String>, generators: Vec<String>) -> Result<Self> {
        Self::new(name, generators, Vec::new())
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn relator_indices(&self) -> Vec<Vec<(usize, i64)>> {
        self.relators.iter().map(|r| r.to_indices(&self.generators).expect("validated")).collect()
    }
}

/// `a, b, c, ...` for small ranks, `a1, a2, ...` beyond 26.
pub fn default_generator_names(r: usize) -> Vec<String> {
    if r <= 26 {
        (0..r).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
    } else {
        (1..=r).map(|i| format!("a{i}")).collect()
    }
}
