use std::collections::BTreeSet;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::magnus::Magnus;
use super::*;
use crate::error::Error;
use crate::io::{default_generator_names, FpPresentation, Word};
use crate::pc::{PcBuilder, PcElement, PcPresentation};

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

fn word(syl: &[(&str, i64)]) -> Word {
    Word::new(syl.iter().map(|&(n, e)| (n, e)))
}

fn comm(x: &str, y: &str) -> Word {
    Word::commutator(&Word::generator(x), &Word::generator(y))
}

fn fp(gens: &[&str], rels: Vec<Word>) -> FpPresentation {
    FpPresentation::new("test", names(gens), rels).unwrap()
}

fn free(r: usize) -> FpPresentation {
    FpPresentation::free("free", default_generator_names(r)).unwrap()
}

fn trefoil() -> FpPresentation {
    fp(&["a", "b"], vec![word(&[("a", 2), ("b", 3)])])
}

fn surface2() -> FpPresentation {
    fp(&["a1", "a2", "a3", "a4"], vec![comm("a1", "a2").mul(&comm("a3", "a4"))])
}

fn layer_strings(f: &Fingerprint) -> Vec<String> {
    f.layers.iter().map(ToString::to_string).collect()
}

/// Lyndon words of length `n` over `r` letters, by brute force.
fn lyndon_count(r: usize, n: usize) -> u128 {
    let mut count = 0;
    let total = r.pow(n as u32);
    for code in 0..total {
        let w: Vec<usize> = (0..n).map(|i| code / r.pow((n - 1 - i) as u32) % r).collect();
        let strictly_least = (1..n).all(|s| {
            let rot: Vec<usize> = w[s..].iter().chain(&w[..s]).copied().collect();
            w < rot
        });
        if strictly_least {
            count += 1;
        }
    }
    count
}

#[test]
fn witt_ranks() {
    let expected = [2, 1, 2, 3, 6, 9, 18];
    for (k, &e) in expected.iter().enumerate() {
        assert_eq!(witt_rank(2, k as u32 + 1), e);
    }
    assert_eq!(witt_rank(1, 1), 1);
    for n in 2..6 {
        assert_eq!(witt_rank(1, n), 0);
    }
    for r in 1..=4 {
        for n in 1..=6 {
            assert_eq!(witt_rank(r as u64, n as u32), lyndon_count(r, n), "r={r} n={n}");
        }
    }
    assert_eq!(witt_rank(4, 2), 6);
}

#[test]
fn hall_basis_shape() {
    let ab = names(&["a", "b"]);
    let b2 = hall_basis(2, 2).unwrap();
    assert_eq!(b2.display(&ab).to_string(), "a, b, [b,a]");
    let b3 = hall_basis(2, 3).unwrap();
    assert_eq!(b3.display(&ab).to_string(), "a, b, [b,a], [[b,a],a], [[b,a],b]");
    assert_eq!(hall_basis(5, 1).unwrap().len(), 5);
    for r in 1..=4 {
        let c = if r <= 2 { 7 } else { 4 };
        let basis = hall_basis(r, c).unwrap();
        let counts = basis.weight_counts();
        for w in 1..=c {
            assert_eq!(counts[w - 1] as u128, witt_rank(r as u64, w as u32));
        }
        for i in 0..basis.len() {
            if let HallNode::Comm(u, v) = basis.node(i) {
                assert!(u > v);
                assert_eq!(basis.weight(i), basis.weight(u) + basis.weight(v));
                if let HallNode::Comm(_, y) = basis.node(u) {
                    assert!(y <= v);
                }
            }
        }
    }
    assert!(matches!(hall_basis_capped(2, 7, 10), Err(Error::Cap { .. })));
    assert!(hall_basis(0, 3).is_err());
}

#[test]
fn free_nilpotent_small_cases() {
    let f = free_nilpotent(2, 2).unwrap();
    let p = &f.presentation;
    assert_eq!(p.len(), 3);
    assert!(p.is_consistent());
    assert_eq!(p.comm(&p.generator(1), &p.generator(0)).unwrap(), p.generator(2));
    assert_eq!(f.label(2), "[b,a]");
    assert_eq!(free_nilpotent(2, 3).unwrap().presentation.hirsch_length(), 5);
    assert_eq!(free_nilpotent(4, 2).unwrap().presentation.hirsch_length(), 10);
    for (r, c) in [(2, 3), (3, 3), (2, 5), (3, 2)] {
        assert!(free_nilpotent(r, c).unwrap().presentation.is_consistent(), "r={r} c={c}");
    }
}

fn magnus_of_word(m: &Magnus, w: &[(usize, i64)]) -> Vec<i128> {
    w.iter().fold(m.one(), |acc, &(g, e)| m.mul(&acc, &m.pow(&m.generator(g), e).unwrap()).unwrap())
}

fn magnus_of_element(m: &Magnus, f: &FreeNilpotent, x: &PcElement) -> Vec<i128> {
    let mut series: Vec<Vec<i128>> = Vec::new();
    for i in 0..f.basis.len() {
        let s = match f.basis.node(i) {
            HallNode::Leaf(g) => m.generator(g),
            HallNode::Comm(u, v) => m.comm(&series[u], &series[v]).unwrap(),
        };
        series.push(s);
    }
    x.exponents().iter().enumerate().fold(m.one(), |acc, (i, &e)| m.mul(&acc, &m.pow(&series[i], e).unwrap()).unwrap())
}

#[test]
fn free_nilpotent_collection_matches_magnus() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for (r, c) in [(2, 4), (3, 3)] {
        let f = free_nilpotent(r, c).unwrap();
        let m = Magnus::new(r, c);
        for _ in 0..150 {
            let w: Vec<(usize, i64)> =
                (0..rng.gen_range(0..10)).map(|_| (rng.gen_range(0..r), rng.gen_range(-3..=3))).collect();
            let x = f.eval(&w).unwrap();
            assert_eq!(magnus_of_element(&m, &f, &x), magnus_of_word(&m, &w));
        }
    }
}

#[test]
fn free_nilpotent_layers_have_witt_rank() {
    let f = free_nilpotent(2, 5).unwrap();
    let layers = f.presentation.lcs_layers(8).unwrap();
    assert_eq!(layers.len(), 5);
    for (k, l) in layers.iter().enumerate() {
        assert!(l.is_torsion_free());
        assert_eq!(l.free_rank as u128, witt_rank(2, k as u32 + 1));
        assert_eq!(f.lcs_term(k + 1).unwrap(), f.presentation.lower_central_series(8).unwrap()[k]);
    }
}

#[test]
fn nq_examples() {
    let abelian = fp(&["a", "b"], vec![comm("a", "b")]);
    assert_eq!(layer_strings(&nq(&abelian, 3).unwrap().fingerprint), ["Z^2", "0", "0"]);
    let t = nq(&trefoil(), 4).unwrap();
    assert_eq!(layer_strings(&t.fingerprint), ["Z", "0", "0", "0"]);
    assert_eq!(t.fingerprint.to_string(), "(Z, 0, 0, 0)");
    assert_eq!(layer_strings(&nq(&free(2), 4).unwrap().fingerprint), ["Z^2", "Z", "Z^2", "Z^3"]);
    let s = nq(&surface2(), 3).unwrap();
    assert!(s.fingerprint.is_torsion_free());
    assert_eq!(s.fingerprint.layers[0].free_rank, 4);
    assert_eq!(s.fingerprint.layers[1].free_rank, 5);
    assert!(nq(&trefoil(), 4).unwrap().fingerprint.is_torsion_free());
}

#[test]
fn nq_with_torsion() {
    // infinite dihedral group: γ_k = ⟨(ab)^{2^{k-1}}⟩
    let dinf = fp(&["a", "b"], vec![word(&[("a", 2)]), word(&[("b", 2)])]);
    assert_eq!(layer_strings(&nq(&dinf, 4).unwrap().fingerprint), ["Z/2 + Z/2", "Z/2", "Z/2", "Z/2"]);
    // D4 and Q8 have order 8 and class 2
    let d4 = fp(&["a", "b"], vec![word(&[("a", 4)]), word(&[("b", 2)]), word(&[("a", 1), ("b", 1)]).pow(2)]);
    let q8 = fp(
        &["a", "b"],
        vec![word(&[("a", 4)]), word(&[("a", 2), ("b", -2)]), word(&[("b", -1), ("a", 1), ("b", 1), ("a", 1)])],
    );
    for g in [d4, q8] {
        let r = nq(&g, 3).unwrap();
        assert_eq!(r.quotient.presentation.group_order().unwrap(), Some(8));
        assert_eq!(layer_strings(&r.fingerprint), ["Z/2 + Z/2", "Z/2", "0"]);
        let img = r.quotient.presentation.to_finite_group(64).unwrap();
        let sizes: Vec<usize> = img.group.lower_central_series().iter().map(|s| s.order()).collect();
        assert_eq!(sizes, [8, 2, 1]);
    }
}

#[test]
fn first_layer_is_abelianization() {
    let cases = vec![
        trefoil(),
        surface2(),
        free(3),
        fp(&["a", "b"], vec![word(&[("a", 4), ("b", -6)]), word(&[("a", 1), ("b", 2)]).pow(3)]),
        fp(&["x", "y", "z"], vec![comm("x", "y"), word(&[("z", 5), ("x", 10)])]),
    ];
    for g in cases {
        let rows: Vec<Vec<BigInt>> = g
            .relator_indices()
            .iter()
            .map(|r| {
                let mut row = vec![BigInt::from(0); g.rank()];
                for &(i, e) in r {
                    row[i] += e;
                }
                row
            })
            .collect();
        let expected = AbelianInvariants::from_relations(g.rank(), &rows);
        assert_eq!(nq(&g, 2).unwrap().fingerprint.layers[0], expected);
    }
}

#[test]
fn nq_functoriality() {
    let cases = vec![
        trefoil(),
        surface2(),
        fp(&["a", "b"], vec![word(&[("a", 2)]), word(&[("b", 2)])]),
        fp(&["a", "b"], vec![word(&[("a", 4)]), comm("a", "b").pow(2)]),
    ];
    for g in cases {
        let top = if g.rank() > 2 { 3 } else { 4 };
        let full = nq(&g, top).unwrap().fingerprint;
        for c in 1..top {
            assert_eq!(full.truncate(c), nq(&g, c).unwrap().fingerprint);
        }
    }
}

#[test]
fn nq_limits() {
    assert!(matches!(nq(&free(2), 6), Err(Error::Cap { what: "nilpotency class", .. })));
    assert!(matches!(nq(&free(7), 2), Err(Error::Cap { .. })));
    let big = NqLimits { max_class: 7, ..NqLimits::default() };
    assert_eq!(nq_with_limits(&free(2), 6, &big).unwrap().fingerprint.layers[5].free_rank, 9);
}

#[test]
fn relator_examples() {
    let ab = names(&["a", "b"]);
    let sq = relator_analysis(&word(&[("a", 2)]), &ab, 3).unwrap();
    assert_eq!((sq.weight, sq.coordinates.clone(), sq.proper_power), (1, vec![2, 0], true));
    let c = relator_analysis(&comm("a", "b"), &ab, 3).unwrap();
    assert_eq!(c.weight, 2);
    assert_eq!(c.coordinates, vec![-1]);
    assert!(!c.proper_power);
    assert_eq!(c.labels, ["[b,a]"]);
    let gens = names(&["a1", "a2", "a3", "a4"]);
    let s = relator_analysis(&surface2().relators[0], &gens, 3).unwrap();
    assert_eq!(s.weight, 2);
    assert_eq!(s.coordinates, vec![-1, 0, 0, 0, 0, -1]);
    assert!(!s.proper_power);
    let t = relator_analysis(&trefoil().relators[0], &ab, 3).unwrap();
    assert_eq!((t.weight, t.coordinates), (1, vec![2, 3]));
    let deep = Word::commutator(&comm("a", "b"), &Word::generator("a"));
    assert!(matches!(relator_analysis(&deep, &ab, 2), Err(Error::WeightExceedsBound(2))));
    assert_eq!(relator_analysis(&deep, &ab, 3).unwrap().weight, 3);
    assert!(matches!(relator_analysis(&Word::identity(), &ab, 3), Err(Error::TrivialWord)));
    let sq_comm = comm("a", "b").pow(2);
    assert!(relator_analysis(&sq_comm, &ab, 3).unwrap().proper_power);
}

#[test]
fn comparisons() {
    let lim = NqLimits::default();
    let no_primes = BTreeSet::new();
    let z = free(1);
    let cmp = fingerprint_compare(&z, &trefoil(), 4, &BTreeSet::from([2, 3]), &lim).unwrap();
    assert!(cmp.layers.iter().all(|l| l.equal()));
    // the trefoil maps onto S3, so its 3-quotients are no bigger than Z's
    assert!(cmp.p_quotients.iter().all(|q| q.left >= q.right));
    let c23 = fingerprint_compare(&free(2), &free(3), 2, &no_primes, &lim).unwrap();
    assert_eq!(c23.first_mismatch(), Some(1));
    let sf = fingerprint_compare(&surface2(), &free(4), 2, &no_primes, &lim).unwrap();
    assert!(sf.layers[0].equal());
    assert_eq!(sf.first_mismatch(), Some(2));
    assert_eq!((sf.layers[1].left.free_rank, sf.layers[1].right.free_rank), (5, 6));
    let same = fingerprint_compare(&free(2), &free(2), 3, &BTreeSet::from([2]), &lim).unwrap();
    assert!(same.all_equal());
    assert_eq!(same.p_quotients.iter().map(|q| q.left).collect::<Vec<_>>(), [4, 32, 2u128.pow(10)]);
}

fn integers() -> PcPresentation {
    PcBuilder::new(["g"]).build().unwrap()
}

fn heisenberg() -> PcPresentation {
    let mut b = PcBuilder::new(["a", "b", "c"]);
    b.conj(0, 1, vec![0, 1, -1]);
    b.build().unwrap()
}

fn set(ps: &[u64]) -> BTreeSet<u64> {
    ps.iter().copied().collect()
}

#[test]
fn radical_examples() {
    let z = integers();
    let h = z.subgroup(&[z.element(vec![6]).unwrap()]).unwrap();
    let r = p_radical_nilpotent(&z, &h, &set(&[2])).unwrap();
    assert_eq!(r, z.subgroup(&[z.element(vec![3]).unwrap()]).unwrap());
    assert_eq!(h.index_in(&r).unwrap(), Some(2));
    let r3 = p_radical_nilpotent(&z, &h, &set(&[3])).unwrap();
    assert_eq!(r3, z.subgroup(&[z.element(vec![2]).unwrap()]).unwrap());

    let g = heisenberg();
    let h =
        g.subgroup(&[g.element(vec![2, 0, 0]).unwrap(), g.element(vec![0, 2, 0]).unwrap(), g.generator(2)]).unwrap();
    assert!(p_radical_nilpotent(&g, &h, &set(&[2])).unwrap().is_whole());
    assert_eq!(p_radical_nilpotent(&g, &h, &set(&[3])).unwrap(), h);
    assert!(p_radical_nilpotent(&g, &g.whole(), &set(&[5])).unwrap().is_whole());
    // a^4 has a square root a^2 but no cube root
    let a4 = g.subgroup(&[g.element(vec![4, 0, 0]).unwrap()]).unwrap();
    assert_eq!(p_radical_nilpotent(&g, &a4, &set(&[2])).unwrap(), g.subgroup(&[g.generator(0)]).unwrap());
    // c^2 = [a, b]^2 lies in ⟨a, b^2⟩ through [a, b^2]
    let sub = g.subgroup(&[g.generator(0), g.element(vec![0, 2, 0]).unwrap()]).unwrap();
    assert!(p_radical_nilpotent(&g, &sub, &set(&[2])).unwrap().is_whole());

    let mut kb = PcBuilder::new(["b", "a"]);
    kb.conj(0, 1, vec![0, -1]);
    let k = kb.build().unwrap();
    assert!(matches!(p_radical_nilpotent(&k, &k.trivial_subgroup(), &set(&[2])), Err(Error::NotNilpotent { .. })));
}

fn p_numbers_up_to(primes: &BTreeSet<u64>, bound: u64) -> Vec<u64> {
    (1..=bound).filter(|&n| crate::arith::is_p_number(n, primes)).collect()
}

fn finite_nilpotent_pc() -> Vec<PcPresentation> {
    let mut out = Vec::new();
    // Heisenberg mod 3
    let mut b = PcBuilder::new(["a", "b", "c"]);
    b.order(0, Some(3)).order(1, Some(3)).order(2, Some(3)).conj(0, 1, vec![0, 1, 2]);
    out.push(b.build().unwrap());
    // D4
    let mut b = PcBuilder::new(["s", "r", "z"]);
    b.order(0, Some(2)).order(1, Some(2)).order(2, Some(2)).power(1, vec![0, 0, 1]).conj(0, 1, vec![0, 1, 1]);
    out.push(b.build().unwrap());
    // Z4 x Z3 x Z2
    let mut b = PcBuilder::new(["x", "y", "z", "w"]);
    b.order(0, Some(2)).order(1, Some(2)).order(2, Some(3)).order(3, Some(2)).power(0, vec![0, 1, 0, 0]);
    out.push(b.build().unwrap());
    // Q8 x Z3
    let mut b = PcBuilder::new(["i", "j", "m", "t"]);
    b.order(0, Some(2)).order(1, Some(2)).order(2, Some(2)).order(3, Some(3));
    b.power(0, vec![0, 0, 1, 0]).power(1, vec![0, 0, 1, 0]).conj(0, 1, vec![0, 1, 1, 0]);
    out.push(b.build().unwrap());
    out
}

#[test]
fn radicals_match_finite_computation() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let subsets = [set(&[2]), set(&[3]), set(&[2, 3]), set(&[5])];
    for g in finite_nilpotent_pc() {
        assert!(g.is_consistent());
        let img = g.to_finite_group(1000).unwrap();
        for _ in 0..8 {
            let gens: Vec<PcElement> = (0..rng.gen_range(0..=2))
                .map(|_| {
                    let e: Vec<i64> = g.relative_orders().iter().map(|o| rng.gen_range(0..o.unwrap() as i64)).collect();
                    g.element(e).unwrap()
                })
                .collect();
            let h = g.subgroup(&gens).unwrap();
            let primes = &subsets[rng.gen_range(0..subsets.len())];
            let r = p_radical_nilpotent(&g, &h, primes).unwrap();
            let h_perm = img
                .group
                .subgroup(&gens.iter().map(|x| img.group.element(img.index_of(x).unwrap()).clone()).collect::<Vec<_>>())
                .unwrap();
            let expected = crate::prop::p_radical_finite(&img.group, &h_perm, primes).unwrap();
            assert!(expected.is_subgroup());
            let got: BTreeSet<usize> =
                img.elements.iter().filter(|x| r.contains(x).unwrap()).map(|x| img.index_of(x).unwrap()).collect();
            let want: BTreeSet<usize> = expected.elements.ones().collect();
            assert_eq!(got, want, "{g:?} H={h:?} P={primes:?}");
            assert_eq!(p_radical_nilpotent(&g, &r, primes).unwrap(), r);
        }
    }
}

#[test]
fn radicals_are_idempotent_in_infinite_groups() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let f = free_nilpotent(2, 3).unwrap();
    for g in [heisenberg(), f.presentation.clone(), integers()] {
        for _ in 0..6 {
            let gens: Vec<PcElement> = (0..rng.gen_range(1..=2))
                .map(|_| {
                    let e: Vec<i64> = (0..g.len()).map(|_| rng.gen_range(-4..=4)).collect();
                    g.element(e).unwrap()
                })
                .collect();
            let h = g.subgroup(&gens).unwrap();
            for primes in [set(&[2]), set(&[3]), set(&[2, 3])] {
                let r = match p_radical_nilpotent(&g, &h, &primes) {
                    Ok(r) => r,
                    Err(Error::Cap { .. }) => continue,
                    Err(e) => panic!("{e}: H={h:?} P={primes:?}"),
                };
                assert!(h.is_subset_of(&r).unwrap());
                let idx = h.index_in(&r).unwrap().unwrap();
                assert!(crate::arith::is_p_number(idx as u64, &primes));
                assert_eq!(p_radical_nilpotent(&g, &r, &primes).unwrap(), r);
                // every sequence element of the radical has a P-power in H
                let p_numbers = p_numbers_up_to(&primes, 1 << 16);
                for x in r.sequence() {
                    assert!(p_numbers.iter().any(|&n| h.contains(&g.pow(x, n as i64).unwrap()).unwrap()), "{x:?}");
                }
            }
        }
    }
}
