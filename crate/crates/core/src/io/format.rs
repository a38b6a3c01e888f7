use std::fmt;

use crate::error::{Error, Result};
use crate::pc::{PcBuilder, PcPresentation};
use crate::perm::{FiniteGroup, Permutation};

use super::parse::parse_word_at;
use super::word::{FpPresentation, Word};

/// A group in one of the three supported encodings.
#[derive(Clone, Debug)]
pub enum Group {
    Fp(FpPresentation),
    Pc(PcPresentation),
    Perm(FiniteGroup),
}

impl Group {
    pub fn kind(&self) -> &'static str {
        match self {
            Group::Fp(_) => "fp",
            Group::Pc(_) => "pc",
            Group::Perm(_) => "perm",
        }
    }
}

impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Group::Fp(a), Group::Fp(b)) => a == b,
            (Group::Pc(a), Group::Pc(b)) => a == b,
            (Group::Perm(a), Group::Perm(b)) => a.degree() == b.degree() && a.generators() == b.generators(),
            _ => false,
        }
    }
}

/// A named group with a free-text note, as stored in a presentation file.
#[derive(Clone, Debug, PartialEq)]
pub struct Document {
    pub name: String,
    pub note: Option<String>,
    pub group: Group,
}

impl Document {
    pub fn new(name: impl Into<String>, note: Option<String>, group: Group) -> Self {
        Document { name: name.into(), note, group }
    }
}

/// Parses a file holding exactly one group.
pub fn parse_document(text: &str) -> Result<Document> {
    let mut docs = parse_documents(text)?;
    match docs.len() {
        1 => Ok(docs.pop().unwrap()),
        0 => Err(Error::Parse { line: 1, column: 1, message: "no group header found".into() }),
        n => Err(Error::Parse { line: 1, column: 1, message: format!("expected one group, found {n}") }),
    }
}

/// Parses a file holding any number of groups, each introduced by a
/// `fp NAME`, `pc NAME` or `perm NAME` header line.
pub fn parse_documents(text: &str) -> Result<Vec<Document>> {
    let mut docs = Vec::new();
    let mut current: Option<Section> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = Line::new(raw, i + 1);
        let Some(keyword) = line.keyword() else { continue };
        if matches!(keyword, "fp" | "pc" | "perm") {
            if let Some(s) = current.take() {
                docs.push(s.finish()?);
            }
            let name = line.rest_after(keyword);
            if name.is_empty() || name.contains(char::is_whitespace) {
                return line.error(keyword.len() + 1, "expected a single group name after the kind");
            }
            current = Some(Section {
                kind: keyword.to_string(),
                name: name.to_string(),
                header: line.number,
                lines: Vec::new(),
            });
        } else {
            match current.as_mut() {
                Some(s) => s.lines.push(line),
                None => return line.error(0, "expected a header `fp NAME`, `pc NAME` or `perm NAME`"),
            }
        }
    }
    if let Some(s) = current.take() {
        docs.push(s.finish()?);
    }
    Ok(docs)
}

#[derive(Clone)]
struct Line<'a> {
    text: &'a str,
    number: usize,
    /// Byte offset of the content after leading whitespace.
    indent: usize,
}

impl<'a> Line<'a> {
    fn new(raw: &'a str, number: usize) -> Self {
        let content = match raw.find('#') {
            Some(k) => &raw[..k],
            None => raw,
        };
        let trimmed = content.trim_start();
        Line { text: trimmed.trim_end(), number, indent: content.len() - trimmed.len() }
    }

    fn keyword(&self) -> Option<&'a str> {
        self.text.split_whitespace().next()
    }

    fn rest_after(&self, keyword: &str) -> &'a str {
        self.text[keyword.len()..].trim()
    }

    /// Column (1-based) of byte offset `at` within the trimmed text.
    fn column(&self, at: usize) -> usize {
        self.indent + self.text[..at.min(self.text.len())].chars().count() + 1
    }

    fn error<T>(&self, at: usize, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse { line: self.number, column: self.column(at), message: message.into() })
    }

    fn word(&self, at: usize, text: &str, generators: &[String]) -> Result<Word> {
        let lead = text.len() - text.trim_start().len();
        parse_word_at(text.trim(), self.number, self.column(at + lead), Some(generators))
    }
}

struct Section<'a> {
    kind: String,
    name: String,
    header: usize,
    lines: Vec<Line<'a>>,
}

impl<'a> Section<'a> {
    fn finish(mut self) -> Result<Document> {
        let mut note = None;
        let mut generators: Option<(Vec<String>, usize)> = None;
        let mut body = Vec::new();
        for line in std::mem::take(&mut self.lines) {
            match line.keyword().unwrap() {
                "note" => {
                    if note.is_some() {
                        return line.error(0, "duplicate note");
                    }
                    note = Some(line.rest_after("note").to_string());
                }
                "generators" => {
                    if generators.is_some() {
                        return line.error(0, "duplicate generators line");
                    }
                    let names: Vec<String> =
                        line.rest_after("generators").split_whitespace().map(String::from).collect();
                    for (k, n) in names.iter().enumerate() {
                        if !n.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_')
                            || !n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                        {
                            return line.error(
                                line.text.find(n.as_str()).unwrap_or(0),
                                format!("invalid generator name `{n}`"),
                            );
                        }
                        if names[..k].contains(n) {
                            return line.error(0, format!("generator `{n}` declared twice"));
                        }
                    }
                    generators = Some((names, line.number));
                }
                _ => body.push(line),
            }
        }
        let group = match self.kind.as_str() {
            "fp" => {
                let Some((gens, _)) = generators else { return self.missing("generators") };
                Group::Fp(fp_body(&self.name, gens, &body)?)
            }
            "pc" => {
                let Some((gens, _)) = generators else { return self.missing("generators") };
                Group::Pc(pc_body(gens, &body)?)
            }
            _ => {
                if let Some((_, number)) = generators {
                    return Err(Error::Parse {
                        line: number,
                        column: 1,
                        message: "perm groups take `generator` lines".into(),
                    });
                }
                Group::Perm(perm_body(self.header, &body)?)
            }
        };
        Ok(Document { name: self.name, note, group })
    }

    fn missing<T>(&self, what: &str) -> Result<T> {
        Err(Error::Parse {
            line: self.header,
            column: 1,
            message: format!("{} group `{}` has no {what} line", self.kind, self.name),
        })
    }
}

fn fp_body(name: &str, gens: Vec<String>, body: &[Line]) -> Result<FpPresentation> {
    let mut relators = Vec::new();
    for line in body {
        match line.keyword().unwrap() {
            "relator" => relators.push(line.word("relator".len(), &line.text["relator".len()..], &gens)?),
            k => return line.error(0, format!("unknown fp directive `{k}`")),
        }
    }
    FpPresentation::new(name, gens, relators)
}

/// Exponent vector of a word written in normal form.
fn normal_form(line: &Line, at: usize, w: &Word, gens: &[String], orders: &[Option<u64>]) -> Result<Vec<i64>> {
    let mut exps = vec![0; gens.len()];
    let mut last = None;
    for (name, e) in w.syllables() {
        let k = gens.iter().position(|g| g == name).expect("declared");
        if last.is_some_and(|l| l >= k) {
            return line.error(at, "right-hand side must be a normal word g_i^e_i*g_j^e_j*... with i < j");
        }
        if let Some(o) = orders[k] {
            if *e < 0 || *e >= o as i64 {
                return line.error(at, format!("exponent of `{name}` must lie in [0, {o})"));
            }
        }
        exps[k] = *e;
        last = Some(k);
    }
    Ok(exps)
}

fn pc_body(gens: Vec<String>, body: &[Line]) -> Result<PcPresentation> {
    let n = gens.len();
    let index = |line: &Line, at: usize, name: &str| -> Result<usize> {
        match gens.iter().position(|g| g == name) {
            Some(k) => Ok(k),
            None => line.error(at, format!("undeclared generator `{name}`")),
        }
    };
    let mut orders = vec![None; n];
    let mut relations = Vec::new();
    for line in body {
        let keyword = line.keyword().unwrap();
        if keyword == "order" {
            let rest: Vec<&str> = line.rest_after("order").split_whitespace().collect();
            let [g, o] = rest.as_slice() else { return line.error(0, "expected `order GENERATOR N`") };
            let k = index(line, line.text.find(g).unwrap(), g)?;
            let Some(o) = o.parse::<u64>().ok().filter(|&o| o >= 2) else {
                return line.error(line.text.rfind(o).unwrap(), "relative order must be an integer at least 2");
            };
            if orders[k].replace(o).is_some() {
                return line.error(0, format!("order of `{g}` given twice"));
            }
        } else if line.text.contains('=') {
            relations.push(line);
        } else {
            return line.error(0, format!("unknown pc directive `{keyword}`"));
        }
    }
    let mut b = PcBuilder::new(gens.clone());
    for (k, o) in orders.iter().enumerate() {
        b.order(k, *o);
    }
    let mut seen = std::collections::BTreeSet::new();
    for line in relations {
        let eq = line.text.find('=').unwrap();
        let lhs = line.text[..eq].trim();
        let Some((base, exp)) = lhs.split_once('^') else {
            return line.error(0, "left-hand side must be `g^N`, `g^h` or `g^H`");
        };
        let (base, exp) = (base.trim(), exp.trim());
        let rhs_at = eq + 1;
        let rhs = line.word(rhs_at, &line.text[rhs_at..], &gens)?;
        let rhs = normal_form(line, rhs_at, &rhs, &gens, &orders)?;
        let j = index(line, 0, base)?;
        let in_tail = |from: usize| -> Result<()> {
            match rhs[..from].iter().position(|&e| e != 0) {
                Some(k) => line.error(
                    rhs_at + line.text[rhs_at..].len() - line.text[rhs_at..].trim_start().len(),
                    format!("right-hand side of `{lhs}` involves `{}`", gens[k]),
                ),
                None => Ok(()),
            }
        };
        if let Ok(e) = exp.parse::<u64>() {
            in_tail(j + 1)?;
            if orders[j] != Some(e) {
                return line.error(0, format!("power relation `{lhs}` does not match the relative order of `{base}`"));
            }
            if !seen.insert(("power", j, j)) {
                return line.error(0, format!("relation `{lhs}` given twice"));
            }
            b.power(j, rhs);
            continue;
        }
        let exp_at = line.text.find('^').unwrap() + 1;
        let (i, inverse) = match gens.iter().position(|g| g == exp) {
            Some(i) => (i, false),
            None => {
                let mut lowered = exp.to_string();
                if exp.starts_with(|c: char| c.is_ascii_uppercase()) {
                    lowered.replace_range(..1, &exp[..1].to_ascii_lowercase());
                }
                match gens.iter().position(|g| *g == lowered) {
                    Some(i) if lowered != exp => (i, true),
                    _ => return line.error(exp_at, format!("undeclared generator `{exp}`")),
                }
            }
        };
        if i >= j {
            return line.error(0, format!("conjugation relation `{lhs}` needs the conjugator before `{base}`"));
        }
        in_tail(j)?;
        if !seen.insert((if inverse { "conj-inv" } else { "conj" }, i, j)) {
            return line.error(0, format!("relation `{lhs}` given twice"));
        }
        if inverse {
            if orders[i].is_some() {
                return line.error(0, format!("`{lhs}`: inverse conjugation only for generators of infinite order"));
            }
            b.conj_inv(i, j, rhs);
        } else {
            b.conj(i, j, rhs);
        }
    }
    let p = b.build()?;
    p.consistency_check().map_err(|o| Error::Inconsistent(o.to_string()))?;
    Ok(p)
}

/// Parses a permutation of `{0, ..., degree-1}` in cycle notation, such as
/// `(0 1 2)(3 4)`. The empty string is the identity.
pub fn parse_permutation(text: &str, degree: usize) -> Result<Permutation> {
    let line = Line::new(text, 1);
    let cycles = parse_cycles(&line, 0, text)?;
    let refs: Vec<&[usize]> = cycles.iter().map(Vec::as_slice).collect();
    Permutation::from_cycles(degree, &refs)
}

fn parse_cycles(line: &Line, at: usize, text: &str) -> Result<Vec<Vec<usize>>> {
    let mut cycles = Vec::new();
    let mut rest = text.trim();
    let col = |rest: &str| at + text.len() - text.trim_start().len() + (text.trim().len() - rest.len());
    while !rest.is_empty() {
        if !rest.starts_with('(') {
            return line.error(col(rest), "expected `(`");
        }
        let Some(close) = rest.find(')') else { return line.error(col(rest), "unclosed cycle") };
        let inner = &rest[1..close];
        let mut cycle = Vec::new();
        for tok in inner.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
            match tok.parse::<usize>() {
                Ok(x) => cycle.push(x),
                Err(_) => return line.error(col(rest), format!("invalid point `{tok}`")),
            }
        }
        if !cycle.is_empty() {
            cycles.push(cycle);
        }
        rest = rest[close + 1..].trim_start();
    }
    Ok(cycles)
}

fn perm_body(header: usize, body: &[Line]) -> Result<FiniteGroup> {
    let mut degree: Option<usize> = None;
    let mut gens: Vec<(Vec<Vec<usize>>, &Line)> = Vec::new();
    for line in body {
        match line.keyword().unwrap() {
            "degree" => {
                let Some(d) = line.rest_after("degree").parse::<usize>().ok().filter(|&d| d >= 1) else {
                    return line.error(7, "degree must be a positive integer");
                };
                if degree.replace(d).is_some() {
                    return line.error(0, "degree given twice");
                }
            }
            "generator" => gens.push((parse_cycles(line, 10, line.rest_after("generator"))?, line)),
            k => return line.error(0, format!("unknown perm directive `{k}`")),
        }
    }
    let Some(degree) = degree else {
        return Err(Error::Parse { line: header, column: 1, message: "perm group has no degree line".into() });
    };
    let mut perms = Vec::new();
    for (cycles, line) in gens {
        let refs: Vec<&[usize]> = cycles.iter().map(Vec::as_slice).collect();
        match Permutation::from_cycles(degree, &refs) {
            Ok(p) => perms.push(p),
            Err(e) => return line.error(0, e.to_string()),
        }
    }
    FiniteGroup::new(degree, perms)
}

impl fmt::Display for Document {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.group.kind(), self.name)?;
        if let Some(note) = &self.note {
            writeln!(f, "note {note}")?;
        }
        match &self.group {
            Group::Fp(g) => {
                writeln!(f, "generators {}", g.generators.join(" "))?;
                for r in &g.relators {
                    writeln!(f, "relator {r}")?;
                }
            }
            Group::Pc(p) => write_pc(f, p)?,
            Group::Perm(g) => {
                writeln!(f, "degree {}", g.degree())?;
                for x in g.generators() {
                    writeln!(f, "generator {x}")?;
                }
            }
        }
        Ok(())
    }
}

fn write_pc(f: &mut fmt::Formatter<'_>, p: &PcPresentation) -> fmt::Result {
    let names = p.names();
    let n = names.len();
    writeln!(f, "generators {}", names.join(" "))?;
    let orders = p.relative_orders();
    for (k, o) in orders.iter().enumerate() {
        if let Some(o) = o {
            writeln!(f, "order {} {o}", names[k])?;
        }
    }
    for i in 0..n {
        if let (Some(o), Some(w)) = (orders[i], p.power_relation(i)) {
            if !w.is_identity() {
                writeln!(f, "{}^{o} = {}", names[i], p.format(w))?;
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let unit = p.generator(j);
            if !p.commutes(i, j) {
                writeln!(f, "{}^{} = {}", names[j], names[i], p.format(p.conj_relation(i, j)))?;
            }
            if orders[i].is_none() {
                if let Some(w) = p.conj_inv_relation(i, j).filter(|w| **w != unit) {
                    writeln!(f, "{}^{} = {}", names[j], inverse_name(&names[i]), p.format(w))?;
                }
            }
        }
    }
    Ok(())
}

/// The uppercase shorthand for the inverse of a generator.
fn inverse_name(name: &str) -> String {
    let mut out = name.to_string();
    out.replace_range(..1, &name[..1].to_ascii_uppercase());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse::parse_word;

    const HEISENBERG: &str = "\
# the integral Heisenberg group
pc heisenberg
note upper unitriangular integer matrices
generators a b c
b^a = b*c^-1
";

    #[test]
    fn pc_file() {
        let d = parse_document(HEISENBERG).unwrap();
        assert_eq!(d.name, "heisenberg");
        let Group::Pc(p) = &d.group else { panic!() };
        assert_eq!(p.hirsch_length(), 3);
        let text = d.to_string();
        assert_eq!(parse_document(&text).unwrap(), d);
        assert!(text.contains("b^A = b*c"));
    }

    #[test]
    fn fp_and_perm_files() {
        let text =
            "fp trefoil\ngenerators a b\nrelator a^2*b^3\n\nperm s3\ndegree 3\ngenerator (0 1 2)\ngenerator (0,1)\n";
        let docs = parse_documents(text).unwrap();
        assert_eq!(docs.len(), 2);
        let Group::Fp(fp) = &docs[0].group else { panic!() };
        assert_eq!(fp.relators, vec![parse_word("a^2*b^3").unwrap()]);
        let Group::Perm(g) = &docs[1].group else { panic!() };
        assert_eq!(g.order(), 6);
        for d in docs {
            assert_eq!(parse_document(&d.to_string()).unwrap(), d);
        }
    }

    #[test]
    fn broken_overlap_is_named() {
        let text = "pc broken\ngenerators a b c\nb^a = b*c^-1\nb^A = b*c\nc^b = c^2\nc^B = c\n";
        match parse_document(text) {
            Err(Error::Inconsistent(msg)) => assert!(msg.contains("(c b^-1) b = c"), "{msg}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn errors_point_into_the_file() {
        let at = |t: &str| match parse_document(t) {
            Err(Error::Parse { line, column, .. }) => (line, column),
            other => panic!("{other:?}"),
        };
        assert_eq!(at("fp g\ngenerators a b\nrelator a*c\n"), (3, 11));
        assert_eq!(at("fp g\ngenerators a b\nrelator   a^^2\n"), (3, 13));
        assert_eq!(at("generators a\n"), (1, 1));
        assert_eq!(at("pc g\ngenerators a b\nb^a = a\n"), (3, 7));
        assert_eq!(at("pc g\ngenerators a b\norder a 2\na^3 = b\n"), (4, 1));
        assert_eq!(at("pc g\ngenerators a b\na^b = a\n"), (3, 1));
        assert_eq!(at("pc g\ngenerators a b\nb^x = b\n"), (3, 3));
        assert_eq!(at("perm g\ndegree 3\ngenerator (0 1 x)\n"), (3, 11));
        assert_eq!(at("perm g\ngenerator (0 1)\n"), (1, 1));
        assert_eq!(at("fp g\n"), (1, 1));
        assert!(matches!(parse_document("perm g\ndegree 2\ngenerator (0 1 2)\n"), Err(Error::Parse { line: 3, .. })));
    }
}
