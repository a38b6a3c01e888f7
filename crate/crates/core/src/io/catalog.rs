use crate::error::{Error, Result};
use crate::nilq::free_nilpotent;
use crate::perm::{
    abelian, alternating, cyclic, cyclic_semidirect, dicyclic, dihedral, direct_product, heisenberg_mod, quaternion,
    symmetric, FiniteGroup,
};

use super::format::{parse_document, Document, Group};
use super::parse::parse_word;
use super::word::{default_generator_names, FpPresentation, Word};

/// A catalog entry is a document whose note says what the group is.
pub type CatalogEntry = Document;

type Build = fn() -> Result<Group>;

fn perm(g: Result<FiniteGroup>) -> Result<Group> {
    g.map(Group::Perm)
}

fn product(a: Result<FiniteGroup>, b: Result<FiniteGroup>) -> Result<Group> {
    perm(direct_product(&a?, &b?))
}

fn semidirect(n: usize, m: usize, r: i64) -> Result<Group> {
    perm(cyclic_semidirect(n, m, r).map(|s| s.group))
}

fn text(src: &str) -> Result<Group> {
    parse_document(src).map(|d| d.group)
}

const ENTRIES: &[(&str, &str, Build)] = &[
    ("z2", "cyclic group of order 2", || perm(cyclic(2))),
    ("z3", "cyclic group of order 3", || perm(cyclic(3))),
    ("z4", "cyclic group of order 4", || perm(cyclic(4))),
    ("z5", "cyclic group of order 5", || perm(cyclic(5))),
    ("z6", "cyclic group of order 6", || perm(cyclic(6))),
    ("z7", "cyclic group of order 7", || perm(cyclic(7))),
    ("z8", "cyclic group of order 8", || perm(cyclic(8))),
    ("z9", "cyclic group of order 9", || perm(cyclic(9))),
    ("z12", "cyclic group of order 12", || perm(cyclic(12))),
    ("z16", "cyclic group of order 16", || perm(cyclic(16))),
    ("z2xz2", "Klein four-group", || perm(abelian(&[2, 2]))),
    ("z2xz4", "abelian 2-group of order 8", || perm(abelian(&[2, 4]))),
    ("z3xz3", "elementary abelian group of order 9", || perm(abelian(&[3, 3]))),
    ("z2xz2xz2", "elementary abelian group of order 8", || perm(abelian(&[2, 2, 2]))),
    ("z4xz4", "abelian 2-group of order 16", || perm(abelian(&[4, 4]))),
    ("s3", "symmetric group on 3 points, the smallest non-nilpotent group", || perm(symmetric(3))),
    ("s4", "symmetric group on 4 points", || perm(symmetric(4))),
    ("a4", "alternating group on 4 points", || perm(alternating(4))),
    ("a5", "alternating group on 5 points, simple", || perm(alternating(5))),
    ("d4", "dihedral group of order 8, a 2-group", || perm(dihedral(4))),
    ("d5", "dihedral group of order 10", || perm(dihedral(5))),
    ("d6", "dihedral group of order 12", || perm(dihedral(6))),
    ("d8", "dihedral group of order 16, a 2-group", || perm(dihedral(8))),
    ("q8", "quaternion group of order 8", || perm(quaternion())),
    ("dic3", "dicyclic group of order 12, Z/3 ⋊ Z/4", || perm(dicyclic(3))),
    ("q16", "generalized quaternion group of order 16", || perm(dicyclic(4))),
    ("heis3", "Heisenberg group mod 3, extraspecial of order 27", || perm(heisenberg_mod(3))),
    ("heis5", "Heisenberg group mod 5, extraspecial of order 125", || perm(heisenberg_mod(5))),
    ("z7:z3", "Frobenius group Z/7 ⋊ Z/3", || semidirect(7, 3, 2)),
    ("z5:z4", "Frobenius group Z/5 ⋊ Z/4", || semidirect(5, 4, 2)),
    ("z13:z3", "Frobenius group Z/13 ⋊ Z/3", || semidirect(13, 3, 3)),
    ("z11:z5", "Frobenius group Z/11 ⋊ Z/5", || semidirect(11, 5, 3)),
    ("z3:z8", "Z/3 ⋊ Z/8 with inversion", || semidirect(3, 8, -1)),
    ("d4xz3", "nilpotent product of a 2-group and a 3-group", || product(dihedral(4), cyclic(3))),
    ("q8xz3", "nilpotent product of a 2-group and a 3-group", || product(quaternion(), cyclic(3))),
    ("q8xz5", "nilpotent product of a 2-group and a 5-group", || product(quaternion(), cyclic(5))),
    ("d4xz2", "2-group of order 16", || product(dihedral(4), cyclic(2))),
    ("heis3xz2", "nilpotent product of a 3-group and a 2-group", || product(heisenberg_mod(3), cyclic(2))),
    ("d4xz9", "nilpotent product of a 2-group and a 3-group", || product(dihedral(4), cyclic(9))),
    ("s3xz3", "non-nilpotent group of order 18", || product(symmetric(3), cyclic(3))),
    ("a4xz2", "non-nilpotent group of order 24", || product(alternating(4), cyclic(2))),
    ("s3xs3", "non-nilpotent group of order 36", || product(symmetric(3), symmetric(3))),
    ("klein-bottle", "fundamental group of the Klein bottle, Z ⋊ Z; residually p only for p = 2", || {
        text("pc klein-bottle\ngenerators b a\na^b = a^-1\n")
    }),
    ("heisenberg", "integral Heisenberg group, free nilpotent of rank 2 and class 2", || {
        text("pc heisenberg\ngenerators a b c\nb^a = b*c^-1\n")
    }),
    ("integers", "infinite cyclic group", || text("pc integers\ngenerators g\n")),
    ("free-abelian-3", "free abelian group of rank 3", || text("pc free-abelian-3\ngenerators x y z\n")),
    ("z3:z", "Z/3 ⋊ Z with inversion; residually p only for p = 2 and p = 3", || {
        text("pc z3:z\ngenerators t x\norder x 3\nx^t = x^2\nx^T = x^2\n")
    }),
    ("free-nilpotent-2-2", "free nilpotent group of rank 2 and class 2", || {
        free_nilpotent(2, 2).map(|f| Group::Pc(f.presentation))
    }),
    ("free-nilpotent-2-3", "free nilpotent group of rank 2 and class 3", || {
        free_nilpotent(2, 3).map(|f| Group::Pc(f.presentation))
    }),
    ("trefoil", "trefoil knot group, a one-relator group with infinite cyclic abelianization", || {
        fp("trefoil", &["a", "b"], &["a^2*b^3"])
    }),
    ("surface-2", "fundamental group of the closed orientable surface of genus 2", || surface(2)),
    ("surface-3", "fundamental group of the closed orientable surface of genus 3", || surface(3)),
    ("free-2", "free group of rank 2", || free(2)),
    ("free-3", "free group of rank 3", || free(3)),
    ("klein-bottle-fp", "fundamental group of the Klein bottle as a one-relator group", || {
        fp("klein-bottle-fp", &["a", "b"], &["a*b*a*b^-1"])
    }),
    ("heisenberg-fp", "integral Heisenberg group by generators and relators", || {
        fp("heisenberg-fp", &["a", "b"], &["[[a,b],a]", "[[a,b],b]"])
    }),
    ("bs-1-2", "Baumslag-Solitar group BS(1,2), metabelian and not nilpotent", || {
        fp("bs-1-2", &["a", "b"], &["b^-1*a*b*a^-2"])
    }),
    ("dihedral-inf", "infinite dihedral group, residually 2 but not residually p for odd p", || {
        fp("dihedral-inf", &["a", "b"], &["a^2", "b^2"])
    }),
];

fn fp(name: &str, gens: &[&str], relators: &[&str]) -> Result<Group> {
    let relators = relators.iter().map(|r| parse_word(r)).collect::<Result<Vec<_>>>()?;
    Ok(Group::Fp(FpPresentation::new(name, gens.iter().map(|s| s.to_string()).collect(), relators)?))
}

fn surface_presentation(genus: usize) -> Result<FpPresentation> {
    let gens: Vec<String> = (1..=2 * genus).map(|i| format!("a{i}")).collect();
    let relator = (0..genus).fold(Word::identity(), |w, i| {
        w.mul(&Word::commutator(&Word::generator(gens[2 * i].clone()), &Word::generator(gens[2 * i + 1].clone())))
    });
    FpPresentation::new(format!("surface-{genus}"), gens, vec![relator])
}

fn surface(genus: usize) -> Result<Group> {
    surface_presentation(genus).map(Group::Fp)
}

fn free(rank: usize) -> Result<Group> {
    FpPresentation::free(format!("free-{rank}"), default_generator_names(rank)).map(Group::Fp)
}

/// Names of the fixed catalog entries, in catalog order.
pub fn catalog_names() -> Vec<&'static str> {
    ENTRIES.iter().map(|(n, _, _)| *n).collect()
}

/// Every fixed catalog entry.
pub fn catalog_entries() -> Result<Vec<CatalogEntry>> {
    catalog_names().into_iter().map(catalog).collect()
}

fn numeric_suffix(name: &str, prefix: &str) -> Option<usize> {
    name.strip_prefix(prefix).and_then(|s| s.parse().ok()).filter(|&n| n >= 1)
}

/// Looks up a fixed entry or one of the parametric families `zN`, `dN`
/// (order `2N`), `sN`, `surface-G`, `free-R`, `free-abelian-R` and
/// `free-nilpotent-R-C`.
pub fn catalog(name: &str) -> Result<CatalogEntry> {
    if let Some((n, note, build)) = ENTRIES.iter().find(|(n, _, _)| *n == name) {
        let group = match build()? {
            Group::Perm(g) => Group::Perm(g.named(*n)),
            g => g,
        };
        return Ok(Document::new(*n, Some(note.to_string()), group));
    }
    let entry = |note: String, group: Group| Ok(Document::new(name, Some(note), group));
    if let Some(n) = numeric_suffix(name, "z").filter(|&n| n <= 1000) {
        return entry(format!("cyclic group of order {n}"), Group::Perm(cyclic(n)?.named(name)));
    }
    if let Some(n) = numeric_suffix(name, "d").filter(|&n| (2..=500).contains(&n)) {
        return entry(format!("dihedral group of order {}", 2 * n), Group::Perm(dihedral(n)?.named(name)));
    }
    if let Some(n) = numeric_suffix(name, "s").filter(|&n| n <= 6) {
        return entry(format!("symmetric group on {n} points"), Group::Perm(symmetric(n)?.named(name)));
    }
    if let Some(g) = numeric_suffix(name, "surface-").filter(|&g| g <= 10) {
        return entry(format!("fundamental group of the closed orientable surface of genus {g}"), surface(g)?);
    }
    if let Some(r) = numeric_suffix(name, "free-abelian-").filter(|&r| r <= 26) {
        let gens = default_generator_names(r).join(" ");
        return entry(format!("free abelian group of rank {r}"), text(&format!("pc {name}\ngenerators {gens}\n"))?);
    }
    if let Some(rest) = name.strip_prefix("free-nilpotent-") {
        if let Some((r, c)) = rest.split_once('-') {
            if let (Ok(r), Ok(c)) = (r.parse::<usize>(), c.parse::<usize>()) {
                if (1..=6).contains(&r) && (1..=6).contains(&c) {
                    let g = free_nilpotent(r, c)?;
                    return entry(format!("free nilpotent group of rank {r} and class {c}"), Group::Pc(g.presentation));
                }
            }
        }
    }
    if let Some(r) = numeric_suffix(name, "free-").filter(|&r| r <= 26) {
        return entry(format!("free group of rank {r}"), free(r)?);
    }
    Err(Error::UnknownCatalogEntry(name.to_string()))
}
