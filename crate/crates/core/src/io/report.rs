//! Line-delimited JSON reports.
//!
//! Every line is one object with a `schema` field (currently
//! [`SCHEMA`]) and a `kind` field naming the report type; the remaining
//! fields depend on the kind and are documented on the report structs.
//! Field order is fixed by declaration order, so identical inputs produce
//! byte-identical output.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nilq::{AbelianInvariants, Comparison, Fingerprint, NqResult, RelatorAnalysis};
use crate::pc::{PcPresentation, PcSubgroup, WitnessReport};
use crate::perm::{FiniteGroup, Subgroup};
use crate::prop::{CVerdict, Embedding, PRadical};

use super::format::{Document, Group};

pub const SCHEMA: &str = "prosep.report/1";

/// One output line.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct Record {
    pub schema: String,
    #[serde(flatten)]
    pub report: Report,
}

impl Record {
    pub fn new(report: Report) -> Self {
        Record { schema: SCHEMA.to_string(), report }
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }

    pub fn from_line(line: &str) -> Result<Self> {
        let r: Record = serde_json::from_str(line).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        if r.schema != SCHEMA {
            return Err(Error::Parse { line: 1, column: 1, message: format!("unsupported schema `{}`", r.schema) });
        }
        Ok(r)
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Report {
    TheoremC(TheoremC),
    Embeddable(Embeddable),
    Witness(Witness),
    Radical(Radical),
    Series(Series),
    PQuotient(PQuotient),
    Nq(Nq),
    Fingerprint(FingerprintOut),
    Comparison(ComparisonOut),
    Relator(Relator),
    Catalog(CatalogOut),
    Summary(Summary),
}

impl From<Report> for Record {
    fn from(r: Report) -> Self {
        Record::new(r)
    }
}

fn to_u64<T: TryInto<u64>>(x: T, what: &'static str) -> Result<u64> {
    x.try_into().map_err(|_| Error::Overflow(what))
}

fn perm_gens(s: &Subgroup) -> Vec<String> {
    s.generator_perms().iter().map(ToString::to_string).collect()
}

fn pc_gens(s: &PcSubgroup) -> Vec<String> {
    s.sequence().map(|x| s.parent().format(x)).collect()
}

/// `{"free_rank": n, "torsion": [d1, d2, ...]}`.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct Layer {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

impl Layer {
    pub fn new(a: &AbelianInvariants) -> Result<Self> {
        let torsion = a
            .torsion
            .iter()
            .map(|d| u64::try_from(d).map_err(|_| Error::Overflow("torsion coefficient")))
            .collect::<Result<_>>()?;
        Ok(Layer { free_rank: a.free_rank, torsion })
    }
}

/// Outcome of the nilpotency/embeddability check on one finite group.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct TheoremC {
    pub group: String,
    pub order: usize,
    /// `"nilpotent"` or `"counterexample"`.
    pub verdict: String,
    pub nilpotent: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    /// Whether the verdict survived an independent recheck.
    pub rechecked: bool,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub prime: u64,
    pub subgroup: Vec<String>,
    pub subgroup_order: usize,
    /// An element of `H ∩ O^p(G)` outside `O^p(H)`.
    pub witness: String,
}

impl TheoremC {
    pub fn new(name: &str, g: &FiniteGroup, v: &CVerdict) -> Self {
        let counterexample = match v {
            CVerdict::Nilpotent => None,
            CVerdict::Counterexample { subgroup, prime, witness } => Some(Counterexample {
                prime: *prime,
                subgroup: perm_gens(subgroup),
                subgroup_order: subgroup.order(),
                witness: g.element(*witness).to_string(),
            }),
        };
        TheoremC {
            group: name.to_string(),
            order: g.order(),
            verdict: if counterexample.is_none() { "nilpotent" } else { "counterexample" }.into(),
            nilpotent: g.is_nilpotent(),
            counterexample,
            rechecked: v.recheck(g),
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct Embeddable {
    pub group: String,
    pub subgroup: Vec<String>,
    pub prime: u64,
    pub embeddable: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Embeddable {
    pub fn new(name: &str, g: &FiniteGroup, h: &Subgroup, p: u64, e: &Embedding) -> Self {
        let witness = match e {
            Embedding::Embeddable => None,
            Embedding::NotEmbeddable { witness } => Some(g.element(*witness).to_string()),
        };
        Embeddable { group: name.to_string(), subgroup: perm_gens(h), prime: p, embeddable: witness.is_none(), witness }
    }
}

/// A separability or residual-p witness search.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub group: String,
    /// `"separability"` or `"residual-p"`.
    pub search: String,
    pub prime: u64,
    pub k_max: usize,
    pub found: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<usize>,
    /// Induced generating sequence of the witnessing normal subgroup.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<u64>,
    pub failures: Vec<LevelFailureOut>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct LevelFailureOut {
    pub level: usize,
    pub element: Option<String>,
}

impl Witness {
    pub fn new(name: &str, search: &str, prime: u64, k_max: usize, r: &WitnessReport) -> Result<Self> {
        let mut out = Witness {
            group: name.to_string(),
            search: search.to_string(),
            prime,
            k_max,
            found: r.is_found(),
            level: None,
            witness: None,
            index: None,
            failures: Vec::new(),
        };
        match r {
            WitnessReport::Found { level, witness, index } => {
                out.level = Some(*level);
                out.witness = Some(pc_gens(witness));
                out.index = Some(to_u64(*index, "witness index")?);
            }
            WitnessReport::BoundedFailure { failures, .. } => {
                out.failures = failures
                    .iter()
                    .map(|f| LevelFailureOut {
                        level: f.level,
                        element: f.element.as_ref().map(|x| {
                            // the element lives in the parent group of the search
                            x.exponents().iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
                        }),
                    })
                    .collect();
            }
        }
        Ok(out)
    }

    /// Replaces raw exponent vectors in failures by words in `names`.
    pub fn with_names(mut self, names: &[String]) -> Self {
        for f in &mut self.failures {
            if let Some(e) = &f.element {
                let parts: Vec<String> = e
                    .split(',')
                    .zip(names)
                    .filter(|(x, _)| *x != "0")
                    .map(|(x, n)| if x == "1" { n.clone() } else { format!("{n}^{x}") })
                    .collect();
                f.element = Some(if parts.is_empty() { "1".into() } else { parts.join("*") });
            }
        }
        self
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct Radical {
    pub group: String,
    pub subgroup: Vec<String>,
    pub primes: Vec<u64>,
    pub is_subgroup: bool,
    /// Number of elements (finite groups only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radical: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<u64>,
}

impl Radical {
    pub fn finite(name: &str, h: &Subgroup, primes: &[u64], r: &PRadical) -> Result<Self> {
        Ok(Radical {
            group: name.to_string(),
            subgroup: perm_gens(h),
            primes: primes.to_vec(),
            is_subgroup: r.is_subgroup(),
            size: Some(r.len() as u64),
            radical: r.subgroup.as_ref().map(perm_gens),
            index: r.index.map(|i| i as u64),
        })
    }

    pub fn pc(name: &str, h: &PcSubgroup, primes: &[u64], r: &PcSubgroup) -> Result<Self> {
        let index = h.index_in(r)?.map(|i| to_u64(i, "radical index")).transpose()?;
        Ok(Radical {
            group: name.to_string(),
            subgroup: pc_gens(h),
            primes: primes.to_vec(),
            is_subgroup: true,
            size: None,
            radical: Some(pc_gens(r)),
            index,
        })
    }
}

/// A (p-)lower central series with its abelian layers.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct Series {
    pub group: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prime: Option<u64>,
    /// Generators of each term, starting with the whole group.
    pub terms: Vec<Vec<String>>,
    /// Orders of the terms (finite groups only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orders: Option<Vec<u64>>,
    /// Invariants of consecutive quotients (pc groups only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layers: Option<Vec<Layer>>,
    /// Whether the series reaches the trivial group.
    pub terminates: bool,
}

impl Series {
    pub fn finite(name: &str, prime: Option<u64>, terms: &[Subgroup]) -> Self {
        Series {
            group: name.to_string(),
            prime,
            terms: terms.iter().map(perm_gens).collect(),
            orders: Some(terms.iter().map(|t| t.order() as u64).collect()),
            layers: None,
            terminates: terms.last().is_some_and(Subgroup::is_trivial),
        }
    }

    pub fn pc(name: &str, prime: Option<u64>, terms: &[PcSubgroup], layers: &[AbelianInvariants]) -> Result<Self> {
        Ok(Series {
            group: name.to_string(),
            prime,
            terms: terms.iter().map(pc_gens).collect(),
            orders: None,
            layers: Some(layers.iter().map(Layer::new).collect::<Result<_>>()?),
            terminates: terms.last().is_some_and(PcSubgroup::is_trivial),
        })
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct PQuotient {
    pub group: String,
    pub prime: u64,
    pub level: usize,
    /// The order is `prime^order_exponent`.
    pub order_exponent: u32,
    /// The order itself, when it fits in 64 bits.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<u64>,
    /// The quotient in the presentation text format.
    pub presentation: String,
}

/// `e` with `n = p^e`.
fn exponent_of(n: u128, p: u64) -> Result<u32> {
    let (mut n, mut e) = (n, 0);
    while n > 1 {
        if n % p as u128 != 0 {
            return Err(Error::Precondition(format!("order is not a power of {p}")));
        }
        n /= p as u128;
        e += 1;
    }
    Ok(e)
}

impl PQuotient {
    pub fn new(name: &str, prime: u64, level: usize, q: &PcPresentation) -> Result<Self> {
        let order = q.group_order()?.ok_or(Error::Precondition("p-quotient is infinite".into()))?;
        let doc = Document::new(format!("{name}-p{prime}-k{level}"), None, Group::Pc(q.clone()));
        Self::with_order(name, prime, level, order, doc.to_string())
    }

    pub fn with_order(name: &str, prime: u64, level: usize, order: u128, presentation: String) -> Result<Self> {
        Ok(PQuotient {
            group: name.to_string(),
            prime,
            level,
            order_exponent: exponent_of(order, prime)?,
            order: u64::try_from(order).ok(),
            presentation,
        })
    }
}

/// `G/γ_{c+1}G` as a pc presentation together with its layers.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct Nq {
    pub group: String,
    pub class: usize,
    pub hirsch_length: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<u64>,
    pub layers: Vec<Layer>,
    /// The quotient in the presentation text format.
    pub presentation: String,
}

impl Nq {
    pub fn new(name: &str, r: &NqResult) -> Result<Self> {
        let q = &r.quotient.presentation;
        let doc = Document::new(format!("{name}-nq{}", r.class), None, Group::Pc(q.clone()));
        Ok(Nq {
            group: name.to_string(),
            class: r.class,
            hirsch_length: q.hirsch_length(),
            order: q.group_order()?.map(|o| to_u64(o, "group order")).transpose()?,
            layers: r.fingerprint.layers.iter().map(Layer::new).collect::<Result<_>>()?,
            presentation: doc.to_string(),
        })
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct FingerprintOut {
    pub group: String,
    pub class: usize,
    pub layers: Vec<Layer>,
    pub torsion_free: bool,
    /// Human-readable form such as `(Z^2, Z, Z^2)`.
    pub display: String,
}

impl FingerprintOut {
    pub fn new(name: &str, f: &Fingerprint) -> Result<Self> {
        Ok(FingerprintOut {
            group: name.to_string(),
            class: f.class,
            layers: f.layers.iter().map(Layer::new).collect::<Result<_>>()?,
            torsion_free: f.is_torsion_free(),
            display: f.to_string(),
        })
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct LayerPair {
    pub weight: usize,
    pub left: Layer,
    pub right: Layer,
    pub equal: bool,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct OrderPair {
    pub prime: u64,
    pub level: usize,
    /// The orders are `prime^left_exponent` and `prime^right_exponent`.
    pub left_exponent: u32,
    pub right_exponent: u32,
    pub equal: bool,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct ComparisonOut {
    pub left: String,
    pub right: String,
    pub class: usize,
    pub layers: Vec<LayerPair>,
    pub p_quotients: Vec<OrderPair>,
    pub all_equal: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_mismatch: Option<usize>,
}

impl ComparisonOut {
    pub fn new(left: &str, right: &str, c: &Comparison) -> Result<Self> {
        Ok(ComparisonOut {
            left: left.to_string(),
            right: right.to_string(),
            class: c.class,
            layers: c
                .layers
                .iter()
                .map(|l| {
                    Ok(LayerPair {
                        weight: l.weight,
                        left: Layer::new(&l.left)?,
                        right: Layer::new(&l.right)?,
                        equal: l.equal(),
                    })
                })
                .collect::<Result<_>>()?,
            p_quotients: c
                .p_quotients
                .iter()
                .map(|q| {
                    Ok(OrderPair {
                        prime: q.prime,
                        level: q.level,
                        left_exponent: exponent_of(q.left, q.prime)?,
                        right_exponent: exponent_of(q.right, q.prime)?,
                        equal: q.equal(),
                    })
                })
                .collect::<Result<_>>()?,
            all_equal: c.all_equal(),
            first_mismatch: c.first_mismatch(),
        })
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct Relator {
    pub word: String,
    pub weight: usize,
    pub coordinates: Vec<i64>,
    pub labels: Vec<String>,
    pub content: i64,
    pub proper_power: bool,
}

impl Relator {
    pub fn new(word: &str, r: &RelatorAnalysis) -> Self {
        Relator {
            word: word.to_string(),
            weight: r.weight,
            coordinates: r.coordinates.clone(),
            labels: r.labels.clone(),
            content: r.content(),
            proper_power: r.proper_power,
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct CatalogOut {
    pub name: String,
    /// `"fp"`, `"pc"` or `"perm"`.
    pub encoding: String,
    pub note: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hirsch_length: Option<usize>,
    pub generators: usize,
}

impl CatalogOut {
    pub fn new(d: &Document) -> Result<Self> {
        let (order, hirsch_length, generators) = match &d.group {
            Group::Perm(g) => (Some(g.order() as u64), None, g.generators().len()),
            Group::Pc(p) => {
                (p.group_order()?.map(|o| to_u64(o, "group order")).transpose()?, Some(p.hirsch_length()), p.len())
            }
            Group::Fp(f) => (None, None, f.rank()),
        };
        Ok(CatalogOut {
            name: d.name.clone(),
            encoding: d.group.kind().to_string(),
            note: d.note.clone().unwrap_or_default(),
            order,
            hirsch_length,
            generators,
        })
    }
}

/// Totals over a batch run.
#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct Summary {
    pub command: String,
    pub total: usize,
    pub agree: usize,
    pub disagree: usize,
    pub inconclusive: usize,
    pub failures: Vec<String>,
}
