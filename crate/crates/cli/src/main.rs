//! `prosep`: command-line front end. Every subcommand writes one JSON report
//! per line to stdout (or a human-readable line with `--format human`).
//!
//! Exit codes: 0 for a computed result, 1 when a bounded search or a cap
//! left the answer open, 2 for bad input.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use prosep_core::arith::{check_prime, prime_divisors};
use prosep_core::checks;
use prosep_core::io::report::{
    CatalogOut, ComparisonOut, Embeddable, FingerprintOut, Nq, PQuotient, Radical, Relator, Series, Summary, TheoremC,
    Witness,
};
use prosep_core::io::{
    catalog, catalog_entries, catalog_names, default_generator_names, parse_documents, parse_permutation, parse_word,
    parse_word_in, Document, FpPresentation, Group, Record, Report,
};
use prosep_core::nilq::{
    fingerprint_compare, nq_with_limits, p_radical_nilpotent, relator_analysis_capped, NqLimits, DEFAULT_HALL_CAP,
};
use prosep_core::pc::{PcElement, PcPresentation, PcSubgroup, WitnessReport, DEFAULT_LCS_DEPTH};
use prosep_core::prop::{
    is_pro_p_embeddable, p_lower_central_series, p_radical_finite, pro_p_completion, theorem_c_verify_capped,
};
use prosep_core::{Error, FiniteGroup, Subgroup};
use rayon::prelude::*;

#[derive(Parser, Debug)]
#[command(name = "prosep", version, about = "Pro-p completions, embeddability and separability witnesses")]
struct RunConfig {
    /// Output mode.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Worker threads for batch subcommands. Output order does not depend on it.
    #[arg(long, default_value_t = 1, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    jobs: u16,
    /// Step cap for collection in pc groups.
    #[arg(long, env = "PROSEP_COLLECTION_CAP", global = true, value_parser = clap::value_parser!(u64).range(1..))]
    collection_cap: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Human,
}

/// Where a group comes from: a catalog name or a presentation file.
#[derive(Args, Debug, Clone)]
struct Source {
    /// Catalog entry (see `prosep catalog`).
    #[arg(long, visible_aliases = ["group", "fp", "pc", "perm"], conflicts_with = "file")]
    catalog: Option<String>,
    /// Presentation file.
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check that nilpotency agrees with pro-p embeddability of every subgroup.
    VerifyTheoremC {
        /// Catalog entries, or `all` for every finite catalog group.
        #[arg(long, visible_aliases = ["group", "perm"], num_args = 1.., conflicts_with = "file")]
        catalog: Vec<String>,
        /// Presentation file with one or more perm groups.
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, env = "PROSEP_MAX_ORDER", default_value_t = 200)]
        max_order: usize,
    },
    /// Is H ≤ G pro-p embeddable?
    Embeddable {
        #[command(flatten)]
        source: Source,
        /// Generators of H in cycle notation, e.g. "(0 1)(2 3)".
        #[arg(long = "subgroup", num_args = 1..)]
        subgroup: Vec<String>,
        /// Prime; every prime dividing |G| when omitted.
        #[arg(long)]
        prime: Option<u64>,
    },
    /// Search the p-lower central series for N with H ∩ N ⊆ Λ.
    WitnessSeparate {
        #[command(flatten)]
        source: Source,
        /// Generators of H as words.
        #[arg(long, num_args = 1.., required = true)]
        h: Vec<String>,
        /// Generators of Λ ≤ H as words.
        #[arg(long, num_args = 1.., required = true)]
        lambda: Vec<String>,
        #[arg(long)]
        prime: u64,
        #[arg(long, env = "PROSEP_K_MAX", default_value_t = 8)]
        k_max: usize,
    },
    /// Search the p-lower central series for N avoiding an element.
    WitnessResidualP {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        element: String,
        #[arg(long)]
        prime: u64,
        #[arg(long, env = "PROSEP_K_MAX", default_value_t = 8)]
        k_max: usize,
    },
    /// The P-radical of a subgroup.
    Radical {
        #[command(flatten)]
        source: Source,
        /// Generators of H: cycle notation for perm groups, words for pc groups.
        #[arg(long = "subgroup", num_args = 1..)]
        subgroup: Vec<String>,
        /// The set of primes P, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
    },
    /// Lower central series, or the p-lower central series with `--prime`.
    Lcs {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        prime: Option<u64>,
        /// Number of terms for infinite groups.
        #[arg(long, default_value_t = DEFAULT_LCS_DEPTH)]
        depth: usize,
    },
    /// The quotient G/γ_{k,p}G, or the maximal p-quotient of a finite group.
    PQuotient {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        prime: u64,
        /// Level k; required for pc groups.
        #[arg(long)]
        level: Option<usize>,
    },
    /// Nilpotent quotient G/γ_{c+1}G of a finitely presented group.
    Nq {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        class: usize,
        #[arg(long, env = "PROSEP_MAX_CLASS", default_value_t = 5)]
        max_class: usize,
    },
    /// Abelian invariants of the lower central layers.
    Fingerprint {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        class: usize,
        #[arg(long, env = "PROSEP_MAX_CLASS", default_value_t = 5)]
        max_class: usize,
    },
    /// Compare two fingerprints and p-quotient orders.
    Compare {
        /// Catalog entry or presentation file for the left group.
        #[arg(long)]
        left: String,
        /// Catalog entry or presentation file for the right group.
        #[arg(long)]
        right: String,
        #[arg(long)]
        class: usize,
        #[arg(long, value_delimiter = ',', default_values_t = [2u64, 3])]
        primes: Vec<u64>,
        #[arg(long, env = "PROSEP_MAX_CLASS", default_value_t = 5)]
        max_class: usize,
    },
    /// Weight and leading coordinates of a relator in a free group.
    Relator {
        /// Rank of the free group; generators are a1..ar (or a, b, ... when the word uses those).
        #[arg(long, conflicts_with = "generators")]
        rank: Option<usize>,
        /// Generator names, comma separated.
        #[arg(long, value_delimiter = ',')]
        generators: Vec<String>,
        #[arg(long)]
        word: String,
        #[arg(long, env = "PROSEP_MAX_CLASS", default_value_t = 5)]
        max_class: usize,
    },
    /// List the built-in catalog, or print one entry in the presentation format.
    Catalog { name: Option<String> },
    /// Run the built-in end-to-end checks.
    Selfcheck {
        /// Run only these checks (1 to 10).
        #[arg(long, num_args = 1.., value_parser = clap::value_parser!(u8).range(1..=10))]
        only: Vec<u8>,
    },
}

/// A failed run: bad input (exit 2) or a limit that left the answer open (exit 1).
#[derive(Debug)]
enum Failure {
    Input(anyhow::Error),
    Bounded(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast_ref::<Error>() {
            Some(core) if is_bound(core) => Failure::Bounded(e),
            _ => Failure::Input(e),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::from(anyhow::Error::new(e))
    }
}

fn is_bound(e: &Error) -> bool {
    matches!(
        e,
        Error::Cap { .. }
            | Error::OrderCap { .. }
            | Error::CollectionCap { .. }
            | Error::Overflow(_)
            | Error::NotNilpotent { .. }
            | Error::WeightExceedsBound(_)
    )
}

/// A successful run: everything computed, or some answers left open.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
enum Status {
    Done,
    Inconclusive,
}

impl Status {
    fn and(self, other: Status) -> Status {
        if self == Status::Done && other == Status::Done {
            Status::Done
        } else {
            Status::Inconclusive
        }
    }
}

struct Out {
    format: Format,
    stdout: std::io::StdoutLock<'static>,
}

impl Out {
    fn emit(&mut self, report: Report) -> anyhow::Result<()> {
        let line = match self.format {
            Format::Json => Record::new(report).to_line(),
            Format::Human => human(&report),
        };
        writeln!(self.stdout, "{line}")?;
        Ok(())
    }

    fn text(&mut self, text: &str) -> anyhow::Result<()> {
        write!(self.stdout, "{text}")?;
        Ok(())
    }
}

fn main() -> ExitCode {
    let config = RunConfig::parse();
    let mut out = Out { format: config.format, stdout: std::io::stdout().lock() };
    match run(&config, &mut out) {
        Ok(Status::Done) => ExitCode::SUCCESS,
        Ok(Status::Inconclusive) => ExitCode::from(1),
        Err(Failure::Bounded(e)) => {
            eprintln!("prosep: inconclusive: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(Failure::Input(e)) => {
            eprintln!("prosep: error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.downcast_ref::<std::io::Error>().is_some_and(|e| e.kind() == std::io::ErrorKind::BrokenPipe)
}

fn load(source: &Source) -> anyhow::Result<Document> {
    match (&source.catalog, &source.file) {
        (Some(name), None) => Ok(catalog(name)?),
        (None, Some(path)) => {
            let mut docs = read_file(path)?;
            match docs.len() {
                1 => Ok(docs.pop().unwrap()),
                n => bail!("{} holds {n} groups; expected one", path.display()),
            }
        }
        _ => bail!("give a group with --catalog NAME or --file PATH"),
    }
}

fn read_file(path: &PathBuf) -> anyhow::Result<Vec<Document>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_documents(&text).with_context(|| format!("in {}", path.display()))
}

/// A catalog entry, or a presentation file if the argument names one.
fn load_named(arg: &str) -> anyhow::Result<Document> {
    let path = PathBuf::from(arg);
    if path.is_file() {
        load(&Source { catalog: None, file: Some(path) })
    } else {
        Ok(catalog(arg)?)
    }
}

fn perm(doc: &Document) -> anyhow::Result<&FiniteGroup> {
    match &doc.group {
        Group::Perm(g) => Ok(g),
        g => bail!("{} is a {} group; this subcommand needs a perm group", doc.name, g.kind()),
    }
}

fn pc(doc: &Document, cap: Option<u64>) -> anyhow::Result<PcPresentation> {
    match &doc.group {
        Group::Pc(p) => match cap {
            Some(cap) => Ok(p.to_builder().collection_cap(cap).build()?),
            None => Ok(p.clone()),
        },
        g => bail!("{} is a {} group; this subcommand needs a pc group", doc.name, g.kind()),
    }
}

fn fp(doc: &Document) -> anyhow::Result<&FpPresentation> {
    match &doc.group {
        Group::Fp(f) => Ok(f),
        g => bail!("{} is a {} group; this subcommand needs an fp group", doc.name, g.kind()),
    }
}

fn pc_element(p: &PcPresentation, text: &str) -> anyhow::Result<PcElement> {
    let w = parse_word_in(text, p.names()).with_context(|| format!("in word `{text}`"))?;
    Ok(p.collect(&w.to_indices(p.names())?)?)
}

fn pc_subgroup(p: &PcPresentation, words: &[String]) -> anyhow::Result<PcSubgroup> {
    let gens = words.iter().map(|w| pc_element(p, w)).collect::<anyhow::Result<Vec<_>>>()?;
    Ok(p.subgroup(&gens)?)
}

fn perm_subgroup(g: &FiniteGroup, cycles: &[String]) -> anyhow::Result<Subgroup> {
    let gens = cycles
        .iter()
        .map(|c| parse_permutation(c, g.degree()).with_context(|| format!("in permutation `{c}`")))
        .collect::<anyhow::Result<Vec<_>>>()?;
    Ok(g.subgroup(&gens)?)
}

fn primes_checked(primes: &[u64]) -> anyhow::Result<BTreeSet<u64>> {
    for &p in primes {
        check_prime(p)?;
    }
    Ok(primes.iter().copied().collect())
}

fn limits(max_class: usize) -> NqLimits {
    NqLimits { max_class, ..NqLimits::default() }
}

fn with_pool<T: Send>(jobs: u16, f: impl FnOnce() -> T + Send) -> anyhow::Result<T> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs as usize).build()?;
    Ok(pool.install(f))
}

fn run(config: &RunConfig, out: &mut Out) -> Result<Status, Failure> {
    let cap = config.collection_cap;
    match &config.command {
        Command::VerifyTheoremC { catalog: names, file, max_order } => {
            let groups: Vec<(String, FiniteGroup)> = match (names.as_slice(), file) {
                ([], Some(path)) => read_file(path)?
                    .into_iter()
                    .map(|d| perm(&d).map(|g| (d.name.clone(), g.clone())))
                    .collect::<anyhow::Result<_>>()?,
                ([all], None) if all == "all" => checks::finite_catalog(*max_order)?,
                ([], None) => return Err(Failure::Input(anyhow!("give --catalog all, catalog names or --file"))),
                (names, _) => names
                    .iter()
                    .map(|n| {
                        let d = catalog(n)?;
                        perm(&d).map(|g| (d.name.clone(), g.clone()))
                    })
                    .collect::<anyhow::Result<_>>()?,
            };
            let max_order = *max_order;
            let results = with_pool(config.jobs, || {
                groups
                    .par_iter()
                    .map(|(name, g)| {
                        (name.clone(), theorem_c_verify_capped(g, max_order).map(|v| TheoremC::new(name, g, &v)))
                    })
                    .collect::<Vec<_>>()
            })?;
            let mut summary = Summary {
                command: "verify-theorem-c".into(),
                total: results.len(),
                agree: 0,
                disagree: 0,
                inconclusive: 0,
                failures: Vec::new(),
            };
            for (name, r) in results {
                match r {
                    Ok(r) if r.rechecked => {
                        summary.agree += 1;
                        out.emit(Report::TheoremC(r))?;
                    }
                    Ok(r) => {
                        summary.disagree += 1;
                        summary.failures.push(format!("{name}: verdict does not recheck"));
                        out.emit(Report::TheoremC(r))?;
                    }
                    Err(e) if is_bound(&e) => {
                        summary.inconclusive += 1;
                        summary.failures.push(format!("{name}: {e}"));
                    }
                    Err(e) => {
                        summary.disagree += 1;
                        summary.failures.push(format!("{name}: {e}"));
                    }
                }
            }
            let status = if summary.disagree + summary.inconclusive == 0 { Status::Done } else { Status::Inconclusive };
            out.emit(Report::Summary(summary))?;
            Ok(status)
        }
        Command::Embeddable { source, subgroup, prime } => {
            let doc = load(source)?;
            let g = perm(&doc)?;
            let h = perm_subgroup(g, subgroup)?;
            let primes = match prime {
                Some(p) => vec![*p],
                None => prime_divisors(g.order() as u64),
            };
            for p in primes {
                let e = is_pro_p_embeddable(g, &h, p)?;
                out.emit(Report::Embeddable(Embeddable::new(&doc.name, g, &h, p, &e)))?;
            }
            Ok(Status::Done)
        }
        Command::WitnessSeparate { source, h, lambda, prime, k_max } => {
            let doc = load(source)?;
            let p = pc(&doc, cap)?;
            let hs = pc_subgroup(&p, h)?;
            let ls = pc_subgroup(&p, lambda)?;
            let r = p.separability_witness(&hs, &ls, *prime, *k_max)?;
            emit_witness(out, &doc.name, "separability", &p, *prime, *k_max, &r)
        }
        Command::WitnessResidualP { source, element, prime, k_max } => {
            let doc = load(source)?;
            let p = pc(&doc, cap)?;
            let x = pc_element(&p, element)?;
            let r = p.residually_p_witness(&x, *prime, *k_max)?;
            emit_witness(out, &doc.name, "residually-p", &p, *prime, *k_max, &r)
        }
        Command::Radical { source, subgroup, primes } => {
            let doc = load(source)?;
            let set = primes_checked(primes)?;
            let list: Vec<u64> = set.iter().copied().collect();
            match &doc.group {
                Group::Perm(g) => {
                    let h = perm_subgroup(g, subgroup)?;
                    let r = p_radical_finite(g, &h, &set)?;
                    out.emit(Report::Radical(Radical::finite(&doc.name, &h, &list, &r)?))?;
                }
                Group::Pc(_) => {
                    let p = pc(&doc, cap)?;
                    let h = pc_subgroup(&p, subgroup)?;
                    let r = p_radical_nilpotent(&p, &h, &set)?;
                    out.emit(Report::Radical(Radical::pc(&doc.name, &h, &list, &r)?))?;
                }
                Group::Fp(_) => return Err(Failure::Input(anyhow!("radical needs a perm or pc group"))),
            }
            Ok(Status::Done)
        }
        Command::Lcs { source, prime, depth } => {
            let doc = load(source)?;
            if let Some(p) = prime {
                check_prime(*p)?;
            }
            let series = match &doc.group {
                Group::Perm(g) => {
                    let terms = match prime {
                        Some(p) => p_lower_central_series(g, *p)?,
                        None => g.lower_central_series(),
                    };
                    Series::finite(&doc.name, *prime, &terms)
                }
                Group::Pc(_) => {
                    let p = pc(&doc, cap)?;
                    let terms = match prime {
                        Some(q) => p.p_lower_central_series(*q, *depth)?,
                        None => p.lower_central_series(*depth)?,
                    };
                    let layers = terms
                        .windows(2)
                        .map(|w| p.abelian_layer(&w[0], &w[1]))
                        .collect::<prosep_core::Result<Vec<_>>>()?;
                    Series::pc(&doc.name, *prime, &terms, &layers)?
                }
                Group::Fp(_) => {
                    return Err(Failure::Input(anyhow!("lcs needs a perm or pc group; use nq for fp groups")))
                }
            };
            let status = if series.terminates || prime.is_some() { Status::Done } else { Status::Inconclusive };
            out.emit(Report::Series(series))?;
            Ok(status)
        }
        Command::PQuotient { source, prime, level } => {
            let doc = load(source)?;
            check_prime(*prime)?;
            match &doc.group {
                Group::Pc(_) => {
                    let Some(level) = level else {
                        return Err(Failure::Input(anyhow!("--level is required for pc groups")));
                    };
                    let p = pc(&doc, cap)?;
                    let q = p.p_quotient(*prime, *level)?;
                    out.emit(Report::PQuotient(PQuotient::new(&doc.name, *prime, *level, &q.presentation)?))?;
                }
                Group::Perm(g) => {
                    let c = pro_p_completion(g, *prime)?;
                    let levels = p_lower_central_series(g, *prime)?.len();
                    let quotient =
                        Document::new(format!("{}-p{prime}", doc.name), None, Group::Perm(c.completion().clone()));
                    out.emit(Report::PQuotient(PQuotient::with_order(
                        &doc.name,
                        *prime,
                        level.unwrap_or(levels),
                        c.completion().order() as u128,
                        quotient.to_string(),
                    )?))?;
                }
                Group::Fp(_) => {
                    return Err(Failure::Input(anyhow!(
                        "p-quotient needs a perm or pc group; run nq first for fp groups"
                    )))
                }
            }
            Ok(Status::Done)
        }
        Command::Nq { source, class, max_class } => {
            let doc = load(source)?;
            let r = nq_with_limits(fp(&doc)?, *class, &limits(*max_class))?;
            out.emit(Report::Nq(Nq::new(&doc.name, &r)?))?;
            Ok(Status::Done)
        }
        Command::Fingerprint { source, class, max_class } => {
            let doc = load(source)?;
            let r = nq_with_limits(fp(&doc)?, *class, &limits(*max_class))?;
            out.emit(Report::Fingerprint(FingerprintOut::new(&doc.name, &r.fingerprint)?))?;
            Ok(Status::Done)
        }
        Command::Compare { left, right, class, primes, max_class } => {
            let a = load_named(left)?;
            let b = load_named(right)?;
            let set = primes_checked(primes)?;
            let c = fingerprint_compare(fp(&a)?, fp(&b)?, *class, &set, &limits(*max_class))?;
            out.emit(Report::Comparison(ComparisonOut::new(&a.name, &b.name, &c)?))?;
            Ok(Status::Done)
        }
        Command::Relator { rank, generators, word, max_class } => {
            let names = match rank {
                Some(r) => {
                    let indexed: Vec<String> = (1..=*r).map(|i| format!("a{i}")).collect();
                    if parse_word_in(word, &indexed).is_ok() {
                        indexed
                    } else {
                        default_generator_names(*r)
                    }
                }
                None if !generators.is_empty() => generators.clone(),
                None => {
                    let w = parse_word(word)?;
                    w.generators().into_iter().map(String::from).collect::<BTreeSet<_>>().into_iter().collect()
                }
            };
            let w = parse_word_in(word, &names)?;
            let r = relator_analysis_capped(&w, &names, *max_class, DEFAULT_HALL_CAP)?;
            out.emit(Report::Relator(Relator::new(&w.to_string(), &r)))?;
            Ok(Status::Done)
        }
        Command::Catalog { name: Some(name) } => {
            out.text(&catalog(name)?.to_string())?;
            Ok(Status::Done)
        }
        Command::Catalog { name: None } => {
            let entries = catalog_entries()?;
            let rows = with_pool(config.jobs, || {
                entries.par_iter().map(CatalogOut::new).collect::<prosep_core::Result<Vec<_>>>()
            })??;
            for r in rows {
                out.emit(Report::Catalog(r))?;
            }
            debug_assert_eq!(catalog_names().len(), entries.len());
            Ok(Status::Done)
        }
        Command::Selfcheck { only } => {
            let which: Vec<usize> =
                if only.is_empty() { (1..=10).collect() } else { only.iter().map(|&n| n as usize).collect() };
            let results = with_pool(config.jobs, || which.par_iter().map(|&n| checks::run(n)).collect::<Vec<_>>())?;
            let mut status = Status::Done;
            for r in results {
                let o = r?;
                let line = format!(
                    "check {:>2}: {}  {} ({:.2}s)",
                    o.criterion,
                    if o.passed { "PASS" } else { "FAIL" },
                    o.title,
                    o.elapsed.as_secs_f64()
                );
                out.text(&(line + "\n"))?;
                if out.format == Format::Human || !o.passed {
                    for d in &o.details {
                        out.text(&format!("    {d}\n"))?;
                    }
                }
                if !o.passed {
                    status = status.and(Status::Inconclusive);
                }
            }
            Ok(status)
        }
    }
}

fn emit_witness(
    out: &mut Out,
    name: &str,
    search: &str,
    p: &PcPresentation,
    prime: u64,
    k_max: usize,
    r: &WitnessReport,
) -> Result<Status, Failure> {
    out.emit(Report::Witness(Witness::new(name, search, prime, k_max, r)?.with_names(p.names())))?;
    Ok(if r.is_found() { Status::Done } else { Status::Inconclusive })
}

fn human(r: &Report) -> String {
    let layers = |ls: &[prosep_core::io::report::Layer]| -> String {
        let parts: Vec<String> = ls
            .iter()
            .map(|l| {
                let mut terms: Vec<String> = Vec::new();
                match l.free_rank {
                    0 => {}
                    1 => terms.push("Z".into()),
                    n => terms.push(format!("Z^{n}")),
                }
                terms.extend(l.torsion.iter().map(|d| format!("Z/{d}")));
                if terms.is_empty() {
                    "0".into()
                } else {
                    terms.join(" + ")
                }
            })
            .collect();
        format!("({})", parts.join(", "))
    };
    match r {
        Report::TheoremC(t) => match &t.counterexample {
            None => format!("{:<12} order {:>3}  nilpotent, all subgroups embeddable", t.group, t.order),
            Some(c) => format!(
                "{:<12} order {:>3}  not nilpotent: H = ⟨{}⟩ (order {}) fails for p = {} at {}{}",
                t.group,
                t.order,
                c.subgroup.join(", "),
                c.subgroup_order,
                c.prime,
                c.witness,
                if t.rechecked { "" } else { "  [recheck failed]" }
            ),
        },
        Report::Embeddable(e) => format!(
            "{}: ⟨{}⟩ p = {}: {}",
            e.group,
            e.subgroup.join(", "),
            e.prime,
            match &e.witness {
                None => "embeddable".to_string(),
                Some(w) => format!("not embeddable, witness {w}"),
            }
        ),
        Report::Witness(w) => {
            if w.found {
                format!(
                    "{} {} p = {}: witness at level {}, index {}",
                    w.group,
                    w.search,
                    w.prime,
                    w.level.unwrap_or_default(),
                    w.index.map_or("?".to_string(), |i| i.to_string())
                )
            } else {
                let fails: Vec<String> =
                    w.failures.iter().map(|f| format!("{}:{}", f.level, f.element.as_deref().unwrap_or("?"))).collect();
                format!("{} {} p = {}: none up to level {} [{}]", w.group, w.search, w.prime, w.k_max, fails.join(" "))
            }
        }
        Report::Radical(r) => format!(
            "{}: radical of ⟨{}⟩ for P = {:?}: subgroup {}, index {}, generators ⟨{}⟩",
            r.group,
            r.subgroup.join(", "),
            r.primes,
            r.is_subgroup,
            r.index.map_or("-".to_string(), |i| i.to_string()),
            r.radical.as_ref().map_or("not a subgroup".to_string(), |v| v.join(", "))
        ),
        Report::Series(s) => match (&s.orders, &s.layers) {
            (Some(o), _) => format!("{}: orders {:?}", s.group, o),
            (_, Some(l)) => format!("{}: layers {}{}", s.group, layers(l), if s.terminates { "" } else { " ..." }),
            _ => s.group.clone(),
        },
        Report::PQuotient(q) => {
            format!("{}: p = {}, level {}, order {}^{}", q.group, q.prime, q.level, q.prime, q.order_exponent)
        }
        Report::Nq(n) => format!(
            "{}: class {}, Hirsch length {}, order {}, layers {}",
            n.group,
            n.class,
            n.hirsch_length,
            n.order.map_or("infinite".to_string(), |o| o.to_string()),
            layers(&n.layers)
        ),
        Report::Fingerprint(f) => format!("{}: {}", f.group, f.display),
        Report::Comparison(c) => format!(
            "{} vs {} to class {}: {}",
            c.left,
            c.right,
            c.class,
            match c.first_mismatch {
                None => "indistinguishable".to_string(),
                Some(k) => format!("first difference at weight {k}"),
            }
        ),
        Report::Relator(r) => format!(
            "{}: weight {}, coordinates {:?} on {:?}, {}",
            r.word,
            r.weight,
            r.coordinates,
            r.labels,
            if r.proper_power { format!("proper power (content {})", r.content) } else { "primitive".into() }
        ),
        Report::Catalog(c) => format!(
            "{:<20} {:<4} {:<10} {}",
            c.name,
            c.encoding,
            match (c.order, c.hirsch_length) {
                (Some(o), _) => format!("order {o}"),
                (None, Some(h)) => format!("hirsch {h}"),
                _ => String::new(),
            },
            c.note
        ),
        Report::Summary(s) => format!(
            "{}: {} total, {} agree, {} disagree, {} inconclusive{}",
            s.command,
            s.total,
            s.agree,
            s.disagree,
            s.inconclusive,
            if s.failures.is_empty() { String::new() } else { format!(": {}", s.failures.join("; ")) }
        ),
    }
}
