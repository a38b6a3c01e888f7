//! End-to-end self-checks. Each one exercises several modules on the
//! built-in catalog and reports whether the expected relationship held;
//! the CLI runs them as `prosep selfcheck`.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use crate::arith::{is_p_number, is_power_of, prime_divisors};
use crate::error::{Error, Result};
use crate::io::report::{FingerprintOut, Record, Report, TheoremC, Witness};
use crate::io::{catalog, catalog_entries, parse_document, parse_word_in, Document, FpPresentation, Group};
use crate::nilq::{
    hall_basis, nq, nq_with_limits, p_radical_nilpotent, smith_normal_form_i64, witt_rank, Fingerprint, NqLimits,
};
use crate::pc::{PcElement, PcPresentation, PcSubgroup, WitnessReport, DEFAULT_K_MAX};
use crate::perm::{
    abelian, cyclic, cyclic_semidirect, semidirect_product, Automorphism, FiniteGroup, SemidirectProduct,
};
use crate::prop::{
    is_pro_p_embeddable, p_radical_finite, p_residual, p_residual_by_intersection, p_residual_by_quotient,
    theorem_c_verify_capped,
};

/// Outcome of one self-check.
#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub criterion: usize,
    pub title: &'static str,
    pub passed: bool,
    pub details: Vec<String>,
    pub elapsed: Duration,
}

pub const TITLES: [&str; 10] = [
    "nilpotency agrees with pro-p embeddability of all subgroups",
    "three computations of O^p(G) coincide",
    "semidirect products: trivial action, direct product, nilpotent, embeddable",
    "Witt rank, Hall basis count and nq layer rank agree",
    "Klein bottle group is not residually 3",
    "separability witnesses in torsion-free nilpotent groups",
    "residually-p witnesses in torsion-free nilpotent groups",
    "one-relator layers are torsion-free",
    "radicals of subgroups",
    "determinism and catalog round-trip",
];

/// Runs check `criterion` (1-based).
pub fn run(criterion: usize) -> Result<CheckOutcome> {
    let start = Instant::now();
    let (passed, details) = match criterion {
        1 => {
            let r = theorem_c_catalog(200)?;
            let ok = r.disagreements.is_empty() && r.elapsed <= Duration::from_secs(60);
            let mut d = vec![format!(
                "{} groups, {} nilpotent, {} counterexamples, all rechecked: {}, {:.1}s",
                r.groups,
                r.nilpotent,
                r.counterexamples,
                r.all_rechecked,
                r.elapsed.as_secs_f64()
            )];
            d.extend(r.disagreements);
            (ok && r.all_rechecked, d)
        }
        2 => {
            let r = residual_triple(100)?;
            (
                r.mismatches.is_empty(),
                std::iter::once(format!("{} (group, prime) pairs", r.pairs)).chain(r.mismatches).collect(),
            )
        }
        3 => {
            let rows = semidirect_family()?;
            let ok = rows.iter().all(SemidirectRow::consistent);
            (ok, rows.iter().map(ToString::to_string).collect())
        }
        4 => {
            let w = witt_three_way(7)?;
            let ok = w.class >= 5 && w.agree() && w.elapsed <= Duration::from_secs(120);
            (
                ok,
                vec![format!(
                    "class {}: witt {:?}, hall {:?}, nq {:?}, {:.1}s",
                    w.class,
                    w.witt,
                    w.hall,
                    w.nq,
                    w.elapsed.as_secs_f64()
                )],
            )
        }
        5 => {
            let k = klein_bottle()?;
            (k.passed(), k.details())
        }
        6 => {
            let s = separability_suite()?;
            (s.failures.is_empty(), std::iter::once(format!("{} searches", s.runs)).chain(s.failures).collect())
        }
        7 => {
            let s = residual_suite(50)?;
            (s.failures.is_empty(), std::iter::once(format!("{} searches", s.runs)).chain(s.failures).collect())
        }
        8 => {
            let l = one_relator_layers()?;
            (l.passed(), vec![format!("trefoil {}", l.trefoil), format!("surface-2 {}", l.surface)])
        }
        9 => {
            let r = radical_suite()?;
            let mut d = vec![format!("{} nilpotent triples, {} abelian lattice cases", r.triples, r.lattice_cases)];
            d.extend(r.controls.iter().map(|(n, s)| format!("control {n}: radical is a subgroup: {s}")));
            d.extend(r.failures.iter().cloned());
            (r.failures.is_empty(), d)
        }
        10 => {
            let r = determinism()?;
            (
                r.failures.is_empty(),
                std::iter::once(format!("{} lines, {} documents", r.lines, r.documents)).chain(r.failures).collect(),
            )
        }
        n => return Err(Error::Precondition(format!("no check numbered {n}"))),
    };
    Ok(CheckOutcome { criterion, title: TITLES[criterion - 1], passed, details, elapsed: start.elapsed() })
}

/// The finite permutation groups of the fixed catalog, in catalog order.
pub fn finite_catalog(max_order: usize) -> Result<Vec<(String, FiniteGroup)>> {
    Ok(catalog_entries()?
        .into_iter()
        .filter_map(|d| match d.group {
            Group::Perm(g) if g.order() <= max_order => Some((d.name, g)),
            _ => None,
        })
        .collect())
}

#[derive(Clone, Debug)]
pub struct TheoremCRun {
    pub groups: usize,
    pub nilpotent: usize,
    pub counterexamples: usize,
    pub all_rechecked: bool,
    pub disagreements: Vec<String>,
    pub reports: Vec<TheoremC>,
    pub elapsed: Duration,
}

pub fn theorem_c_catalog(max_order: usize) -> Result<TheoremCRun> {
    let start = Instant::now();
    let groups = finite_catalog(max_order)?;
    let mut run = TheoremCRun {
        groups: groups.len(),
        nilpotent: 0,
        counterexamples: 0,
        all_rechecked: true,
        disagreements: Vec::new(),
        reports: Vec::new(),
        elapsed: Duration::ZERO,
    };
    for (name, g) in &groups {
        match theorem_c_verify_capped(g, max_order) {
            Ok(v) => {
                let r = TheoremC::new(name, g, &v);
                if r.nilpotent {
                    run.nilpotent += 1;
                }
                if r.counterexample.is_some() {
                    run.counterexamples += 1;
                }
                run.all_rechecked &= r.rechecked;
                run.reports.push(r);
            }
            Err(e) => run.disagreements.push(format!("{name}: {e}")),
        }
    }
    run.elapsed = start.elapsed();
    Ok(run)
}

#[derive(Clone, Debug)]
pub struct ResidualTriple {
    pub pairs: usize,
    pub mismatches: Vec<String>,
}

pub fn residual_triple(max_order: usize) -> Result<ResidualTriple> {
    let mut out = ResidualTriple { pairs: 0, mismatches: Vec::new() };
    for (name, g) in finite_catalog(max_order)? {
        for p in prime_divisors(g.order() as u64) {
            out.pairs += 1;
            let a = p_residual(&g, p)?;
            let b = p_residual_by_intersection(&g, p, max_order)?;
            let c = p_residual_by_quotient(&g, p)?;
            if a != b || a != c {
                out.mismatches.push(format!("{name}, p = {p}: orders {}, {}, {}", a.order(), b.order(), c.order()));
            }
        }
    }
    Ok(out)
}

/// One instance of `P ⋊_θ Q` with the four properties that should agree.
#[derive(Clone, Debug)]
pub struct SemidirectRow {
    pub name: String,
    pub order: usize,
    pub action_trivial: bool,
    pub direct: bool,
    pub nilpotent: bool,
    pub all_embeddable: bool,
}

impl SemidirectRow {
    pub fn consistent(&self) -> bool {
        self.action_trivial == self.direct && self.direct == self.nilpotent && self.nilpotent == self.all_embeddable
    }

    fn new(name: String, s: &SemidirectProduct) -> Result<Self> {
        let g = &s.group;
        let mut all_embeddable = true;
        'outer: for p in prime_divisors(g.order() as u64) {
            for h in g.all_subgroups(g.order())? {
                if !is_pro_p_embeddable(g, &h, p)?.is_embeddable() {
                    all_embeddable = false;
                    break 'outer;
                }
            }
        }
        Ok(SemidirectRow {
            name,
            order: g.order(),
            action_trivial: s.action_is_trivial(),
            direct: g.is_normal(&s.complement),
            nilpotent: g.is_nilpotent(),
            all_embeddable,
        })
    }
}

impl std::fmt::Display for SemidirectRow {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} (order {}): trivial action {}, direct {}, nilpotent {}, all embeddable {}",
            self.name, self.order, self.action_trivial, self.direct, self.nilpotent, self.all_embeddable
        )
    }
}

pub fn semidirect_family() -> Result<Vec<SemidirectRow>> {
    let mut rows = Vec::new();
    for (n, m, r) in
        [(7, 3, 2), (7, 3, 1), (5, 4, 2), (5, 4, 4), (5, 4, 1), (13, 3, 3), (13, 3, 1), (3, 2, 2), (3, 2, 1)]
    {
        rows.push(SemidirectRow::new(format!("Z/{n} ⋊ Z/{m} by x^{r}"), &cyclic_semidirect(n, m, r)?)?);
    }
    // P = Z/3 × Z/5 with Z/2 inverting both factors, one factor, or neither
    let p = abelian(&[3, 5])?;
    let q = cyclic(2)?;
    let gens = p.generator_indices().to_vec();
    let inv = |x: usize| p.element(p.inv(x)).clone();
    let same = |x: usize| p.element(x).clone();
    for (label, images) in [
        ("both", vec![inv(gens[0]), inv(gens[1])]),
        ("Z/3", vec![inv(gens[0]), same(gens[1])]),
        ("Z/5", vec![same(gens[0]), inv(gens[1])]),
        ("neither", vec![same(gens[0]), same(gens[1])]),
    ] {
        let theta = Automorphism::from_generator_images(&p, &images)?;
        rows.push(SemidirectRow::new(
            format!("(Z/3 × Z/5) ⋊ Z/2 inverting {label}"),
            &semidirect_product(&p, &q, &[theta])?,
        )?);
    }
    Ok(rows)
}

#[derive(Clone, Debug)]
pub struct WittCheck {
    /// The class reached; the largest of `5..=max_class` within caps.
    pub class: usize,
    pub witt: Vec<u128>,
    pub hall: Vec<usize>,
    pub nq: Vec<usize>,
    /// Whether every nq layer was free abelian.
    pub torsion_free: bool,
    pub elapsed: Duration,
}

impl WittCheck {
    pub fn agree(&self) -> bool {
        self.torsion_free
            && self.witt.len() == self.class
            && self.witt.iter().zip(&self.hall).all(|(&w, &h)| w == h as u128)
            && self.witt.iter().zip(&self.nq).all(|(&w, &n)| w == n as u128)
    }
}

/// Rank 2 up to `max_class`, dropping to lower classes (not below 5) if
/// the nilpotent quotient exceeds its caps.
pub fn witt_three_way(max_class: usize) -> Result<WittCheck> {
    let free = FpPresentation::free("free-2", vec!["a".into(), "b".into()])?;
    let start = Instant::now();
    let mut last = None;
    for class in (5.min(max_class)..=max_class).rev() {
        let limits = NqLimits { max_class: class, ..NqLimits::default() };
        match nq_with_limits(&free, class, &limits) {
            Ok(r) => {
                let basis = hall_basis(2, class)?;
                return Ok(WittCheck {
                    class,
                    witt: (1..=class).map(|k| witt_rank(2, k as u32)).collect(),
                    hall: basis.weight_counts(),
                    nq: r.fingerprint.layers.iter().map(|l| l.free_rank).collect(),
                    torsion_free: r.fingerprint.is_torsion_free(),
                    elapsed: start.elapsed(),
                });
            }
            Err(e @ (Error::Cap { .. } | Error::CollectionCap { .. } | Error::Overflow(_))) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.unwrap_or(Error::Precondition("empty class range".into())))
}

fn pc_catalog(name: &str) -> Result<PcPresentation> {
    match catalog(name)?.group {
        Group::Pc(p) => Ok(p),
        _ => Err(Error::Precondition(format!("{name} is not a pc group"))),
    }
}

fn pc_word(p: &PcPresentation, text: &str) -> Result<PcElement> {
    let w = parse_word_in(text, p.names())?;
    p.collect(&w.to_indices(p.names())?)
}

fn pc_subgroup(p: &PcPresentation, words: &[&str]) -> Result<PcSubgroup> {
    p.subgroup(&words.iter().map(|w| pc_word(p, w)).collect::<Result<Vec<_>>>()?)
}

#[derive(Clone, Debug)]
pub struct KleinCheck {
    /// Orders of `G/γ_{k,3}G` and of the image of `b` in it, `k = 1..=6`.
    pub tower: Vec<(u128, u128)>,
    pub odd: WitnessReport,
    /// Failure elements of the `p = 3` search, written as words.
    pub odd_elements: Vec<Option<String>>,
    /// `(Λ, level found)` for the 2-power sublattices.
    pub even: Vec<(String, Option<usize>)>,
}

impl KleinCheck {
    pub fn cyclic_tower(&self) -> bool {
        self.tower.iter().all(|(g, b)| g == b)
    }

    pub fn passed(&self) -> bool {
        self.cyclic_tower()
            && !self.odd.is_found()
            && self.odd_elements.len() == 6
            && self.odd_elements[1..].iter().all(|e| e.as_deref() == Some("a"))
            && self.even.iter().all(|(_, l)| l.is_some())
    }

    fn details(&self) -> Vec<String> {
        vec![
            format!("3-quotient orders and orders of b: {:?}", self.tower),
            format!("p = 3 failure elements by level: {:?}", self.odd_elements),
            format!("p = 2 witness levels: {:?}", self.even),
        ]
    }
}

fn element_order(p: &PcPresentation, x: &PcElement) -> Result<u128> {
    let mut y = x.clone();
    let mut n = 1u128;
    while !y.is_identity() {
        y = p.mul(&y, x)?;
        n += 1;
        if n > 1 << 20 {
            return Err(Error::Cap { what: "element order", cap: 1 << 20 });
        }
    }
    Ok(n)
}

pub fn klein_bottle() -> Result<KleinCheck> {
    let k = pc_catalog("klein-bottle")?;
    let mut tower = Vec::new();
    for level in 1..=6 {
        let q = k.p_quotient(3, level)?;
        let b = q.project(&pc_word(&k, "b")?)?;
        tower.push((q.presentation.group_order()?.expect("finite"), element_order(&q.presentation, &b)?));
    }
    let h = pc_subgroup(&k, &["a", "b^2"])?;
    let lambda = pc_subgroup(&k, &["a^3", "b^6"])?;
    let odd = k.separability_witness(&h, &lambda, 3, 6)?;
    let odd_elements = match &odd {
        WitnessReport::BoundedFailure { failures, .. } => {
            failures.iter().map(|f| f.element.as_ref().map(|x| k.format(x))).collect()
        }
        WitnessReport::Found { .. } => Vec::new(),
    };
    let mut even = Vec::new();
    for words in [["a^2", "b^2"], ["a", "b^4"], ["a^4", "b^4"], ["a^2", "b^8"], ["a*b^2", "a^2"]] {
        let lambda = pc_subgroup(&k, &words)?;
        let r = k.separability_witness(&h, &lambda, 2, DEFAULT_K_MAX)?;
        even.push((format!("{lambda:?}"), r.level()));
    }
    Ok(KleinCheck { tower, odd, odd_elements, even })
}

/// The torsion-free nilpotent groups used by the witness suites, with the
/// words generating the cyclic subgroups tried in each.
pub fn witness_groups() -> Result<Vec<(String, PcPresentation, Vec<&'static str>)>> {
    Ok(vec![
        (
            "heisenberg".into(),
            pc_catalog("heisenberg")?,
            vec!["a", "b", "c", "a*b", "a^2*c", "b^-1*c^3", "a*b*c", "a^3*b^-2"],
        ),
        (
            "free-abelian-3".into(),
            pc_catalog("free-abelian-3")?,
            vec!["x", "y", "z", "x*y", "x^2*z^-1", "x*y*z", "y^3*z^2"],
        ),
        (
            "free-nilpotent-2-2".into(),
            pc_catalog("free-nilpotent-2-2")?,
            vec!["a", "b", "h3", "a*b", "a^2*h3", "a^-1*b^2*h3", "b*h3^-2"],
        ),
    ])
}

#[derive(Clone, Debug, Default)]
pub struct SuiteRun {
    pub runs: usize,
    pub failures: Vec<String>,
}

/// Least `m > 0` with `x^m ∈ n`; `n` must have finite index.
fn order_modulo(p: &PcPresentation, x: &PcElement, n: &PcSubgroup) -> Result<u128> {
    let bound = n.index()?.ok_or(Error::Precondition("subgroup of infinite index".into()))?;
    let mut y = x.clone();
    for m in 1..=bound {
        if n.contains(&y)? {
            return Ok(m);
        }
        y = p.mul(&y, x)?;
    }
    Err(Error::Inconsistent("no power lands in a subgroup of finite index".into()))
}

/// Independent re-verification of a witnessing normal subgroup: normal, of
/// p-power index, and meeting `⟨h⟩` inside `⟨h^p⟩`.
fn recheck_cyclic_witness(p: &PcPresentation, h: &PcElement, prime: u64, n: &PcSubgroup) -> Result<bool> {
    let index = n.index()?;
    let p_power = index.is_some_and(|i| u64::try_from(i).is_ok_and(|i| is_power_of(i, prime)));
    Ok(n.is_normal()? && p_power && order_modulo(p, h, n)? % prime as u128 == 0)
}

pub fn separability_suite() -> Result<SuiteRun> {
    let mut run = SuiteRun::default();
    for (name, g, words) in witness_groups()? {
        for w in words {
            let h = pc_word(&g, w)?;
            for prime in [2u64, 3] {
                run.runs += 1;
                let hs = g.subgroup(std::slice::from_ref(&h))?;
                let lambda = g.subgroup(&[g.pow(&h, prime as i64)?])?;
                match g.separability_witness(&hs, &lambda, prime, DEFAULT_K_MAX)? {
                    WitnessReport::Found { witness, .. } if recheck_cyclic_witness(&g, &h, prime, &witness)? => {}
                    WitnessReport::Found { level, .. } => run
                        .failures
                        .push(format!("{name}, H = ⟨{w}⟩, p = {prime}: witness at level {level} fails the recheck")),
                    WitnessReport::BoundedFailure { .. } => run
                        .failures
                        .push(format!("{name}, H = ⟨{w}⟩, p = {prime}: no witness up to level {DEFAULT_K_MAX}")),
                }
            }
        }
    }
    Ok(run)
}

/// `count` non-trivial elements with exponents in `[-2, 2]`, spread evenly
/// over that box.
pub fn sample_elements(g: &PcPresentation, count: usize) -> Result<Vec<PcElement>> {
    let n = g.len();
    let total = 5usize.pow(n as u32) - 1;
    let step = (total / count).max(1);
    let mut out = Vec::new();
    let mut code = 1;
    while out.len() < count && code <= total {
        let exps: Vec<i64> = (0..n).map(|i| (code / 5usize.pow(i as u32) % 5) as i64 - 2).collect();
        let x = g.element(exps)?;
        if !x.is_identity() {
            out.push(x);
        }
        code += step;
    }
    Ok(out)
}

pub fn residual_suite(count: usize) -> Result<SuiteRun> {
    let mut run = SuiteRun::default();
    for (name, g, _) in witness_groups()? {
        for x in sample_elements(&g, count)? {
            for prime in [2u64, 3, 5] {
                run.runs += 1;
                let ok = match g.residually_p_witness(&x, prime, DEFAULT_K_MAX)? {
                    WitnessReport::Found { witness, .. } => {
                        let p_power =
                            witness.index()?.is_some_and(|i| u64::try_from(i).is_ok_and(|i| is_power_of(i, prime)));
                        witness.is_normal()? && p_power && !witness.contains(&x)?
                    }
                    WitnessReport::BoundedFailure { .. } => false,
                };
                if !ok {
                    run.failures.push(format!("{name}, x = {}, p = {prime}", g.format(&x)));
                }
            }
        }
    }
    Ok(run)
}

#[derive(Clone, Debug)]
pub struct OneRelatorLayers {
    pub trefoil: Fingerprint,
    pub surface: Fingerprint,
}

impl OneRelatorLayers {
    pub fn passed(&self) -> bool {
        self.trefoil.is_torsion_free()
            && self.surface.is_torsion_free()
            && self.trefoil.to_string() == "(Z, 0, 0, 0)"
            && self.surface.layers[0].free_rank == 4
            && self.surface.layers[1].free_rank as u128 == witt_rank(4, 2) - 1
    }
}

fn fp_catalog(name: &str) -> Result<FpPresentation> {
    match catalog(name)?.group {
        Group::Fp(f) => Ok(f),
        _ => Err(Error::Precondition(format!("{name} is not finitely presented"))),
    }
}

pub fn one_relator_layers() -> Result<OneRelatorLayers> {
    Ok(OneRelatorLayers {
        trefoil: nq(&fp_catalog("trefoil")?, 4)?.fingerprint,
        surface: nq(&fp_catalog("surface-2")?, 3)?.fingerprint,
    })
}

#[derive(Clone, Debug, Default)]
pub struct RadicalRun {
    pub triples: usize,
    pub lattice_cases: usize,
    /// Non-nilpotent controls and whether their radical was a subgroup.
    pub controls: Vec<(String, bool)>,
    pub failures: Vec<String>,
}

const PRIME_SETS: [&[u64]; 5] = [&[2], &[3], &[2, 3], &[5], &[2, 5]];

pub fn radical_suite() -> Result<RadicalRun> {
    let mut run = RadicalRun::default();
    let nilpotent: Vec<(String, FiniteGroup)> = finite_catalog(200)?
        .into_iter()
        .filter(|(_, g)| g.is_nilpotent() && g.order() > 1 && g.order() <= 72)
        .collect();
    let mut k = 0usize;
    while run.triples < 20 {
        let (name, g) = &nilpotent[k % nilpotent.len()];
        let subgroups = g.all_subgroups(g.order())?;
        let h = &subgroups[(7 * k + 3) % subgroups.len()];
        let primes: BTreeSet<u64> = PRIME_SETS[k % PRIME_SETS.len()].iter().copied().collect();
        k += 1;
        run.triples += 1;
        let r = p_radical_finite(g, h, &primes)?;
        let label = format!("{name}, |H| = {}, P = {primes:?}", h.order());
        let Some(sub) = &r.subgroup else {
            run.failures.push(format!("{label}: radical is not a subgroup"));
            continue;
        };
        let index_ok = r.index.is_some_and(|i| is_p_number(i as u64, &primes));
        let again = p_radical_finite(g, sub, &primes)?;
        if !h.is_subset_of(sub) || !index_ok || again.subgroup.as_ref() != Some(sub) {
            run.failures.push(format!(
                "{label}: contains H {}, index {:?}, idempotent {}",
                h.is_subset_of(sub),
                r.index,
                again.subgroup.as_ref() == Some(sub)
            ));
        }
    }
    // H ≤ Z^n given by a lattice basis: the radical has index equal to the
    // P-part of the product of the elementary divisors
    let lattices: [(&[&[i64]], &[u64]); 5] = [
        (&[&[6, 0], &[0, 10]], &[2]),
        (&[&[2, 4], &[6, 8]], &[2, 3]),
        (&[&[12, 0, 0], &[0, 15, 0], &[0, 0, 7]], &[3, 5]),
        (&[&[4, 6, 0], &[0, 9, 3], &[2, 0, 5]], &[2]),
        (&[&[30]], &[5]),
    ];
    for (rows, primes) in lattices {
        run.lattice_cases += 1;
        let n = rows[0].len();
        let src = format!("pc z\ngenerators {}\n", crate::io::default_generator_names(n).join(" "));
        let Document { group: Group::Pc(g), .. } = parse_document(&src)? else { unreachable!() };
        let h = g.subgroup(&rows.iter().map(|r| g.element(r.to_vec())).collect::<Result<Vec<_>>>()?)?;
        let primes: BTreeSet<u64> = primes.iter().copied().collect();
        let r = p_radical_nilpotent(&g, &h, &primes)?;
        let snf = smith_normal_form_i64(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>(), n);
        let expected: u128 = snf
            .invariants(n)
            .torsion
            .iter()
            .map(|d| crate::arith::p_part(u64::try_from(d).unwrap(), &primes) as u128)
            .product();
        let index = h.index_in(&r)?;
        let again = p_radical_nilpotent(&g, &r, &primes)?;
        if index != Some(expected) || again != r {
            run.failures.push(format!("lattice {rows:?}, P = {primes:?}: index {index:?}, expected {expected}"));
        }
    }
    for name in ["s3", "s4", "a4", "d5", "z7:z3"] {
        let Group::Perm(g) = catalog(name)?.group else { unreachable!() };
        let h = g.trivial_subgroup();
        let primes: BTreeSet<u64> = prime_divisors(g.order() as u64).into_iter().take(1).collect();
        run.controls.push((name.to_string(), p_radical_finite(&g, &h, &primes)?.is_subgroup()));
    }
    Ok(run)
}

#[derive(Clone, Debug, Default)]
pub struct DeterminismRun {
    pub lines: usize,
    pub documents: usize,
    pub failures: Vec<String>,
}

fn report_lines() -> Result<Vec<String>> {
    let mut lines = Vec::new();
    for (name, g) in finite_catalog(30)? {
        lines.push(
            Record::new(Report::TheoremC(TheoremC::new(&name, &g, &crate::prop::theorem_c_verify(&g)?))).to_line(),
        );
    }
    for name in ["trefoil", "surface-2", "heisenberg-fp"] {
        let f = nq(&fp_catalog(name)?, 3)?.fingerprint;
        lines.push(Record::new(Report::Fingerprint(FingerprintOut::new(name, &f)?)).to_line());
    }
    let k = pc_catalog("klein-bottle")?;
    let h = pc_subgroup(&k, &["a", "b^2"])?;
    let lambda = pc_subgroup(&k, &["a^3", "b^6"])?;
    let r = k.separability_witness(&h, &lambda, 3, 6)?;
    lines.push(
        Record::new(Report::Witness(Witness::new("klein-bottle", "separability", 3, 6, &r)?.with_names(k.names())))
            .to_line(),
    );
    Ok(lines)
}

pub fn determinism() -> Result<DeterminismRun> {
    let mut run = DeterminismRun::default();
    let a = report_lines()?;
    let b = report_lines()?;
    run.lines = a.len();
    if a != b {
        run.failures.push("repeated report runs differ".into());
    }
    for line in &a {
        match Record::from_line(line) {
            Ok(r) if r.to_line() == *line => {}
            _ => run.failures.push(format!("report line does not round-trip: {line}")),
        }
    }
    for d in catalog_entries()? {
        run.documents += 1;
        let text = d.to_string();
        match parse_document(&text) {
            Ok(back) if back == d && back.to_string() == text => {}
            Ok(_) => run.failures.push(format!("{} changes on round-trip", d.name)),
            Err(e) => run.failures.push(format!("{} fails to parse back: {e}", d.name)),
        }
    }
    Ok(run)
}
