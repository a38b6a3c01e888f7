use std::collections::BTreeSet;

use super::*;
use crate::perm::*;

fn orders(series: &[Subgroup]) -> Vec<usize> {
    series.iter().map(Subgroup::order).collect()
}

fn set(ps: &[u64]) -> BTreeSet<u64> {
    ps.iter().copied().collect()
}

/// Normal subgroups found by checking every subgroup against every element.
fn brute_normals(g: &FiniteGroup) -> Vec<Subgroup> {
    g.all_subgroups(200)
        .unwrap()
        .into_iter()
        .filter(|h| (0..g.order()).all(|x| h.elements().all(|y| h.contains(g.conj(y, x)))))
        .collect()
}

fn brute_residual(g: &FiniteGroup, p: u64) -> Subgroup {
    brute_normals(g)
        .into_iter()
        .filter(|n| is_power_of(n.index() as u64, p))
        .fold(g.whole(), |acc, n| acc.intersection(&n))
}

fn small_groups() -> Vec<FiniteGroup> {
    vec![
        symmetric(3).unwrap(),
        symmetric(4).unwrap(),
        alternating(4).unwrap(),
        dihedral(4).unwrap(),
        dihedral(6).unwrap(),
        quaternion().unwrap(),
        cyclic(12).unwrap(),
        dicyclic(3).unwrap(),
        cyclic_semidirect(7, 3, 2).unwrap().group,
        cyclic_semidirect(5, 4, 2).unwrap().group,
        heisenberg_mod(3).unwrap(),
    ]
}

#[test]
fn p_lower_central_series_examples() {
    assert_eq!(orders(&p_lower_central_series(&cyclic(4).unwrap(), 2).unwrap()), vec![4, 2, 1]);
    let s3 = symmetric(3).unwrap();
    assert_eq!(orders(&p_lower_central_series(&s3, 2).unwrap()), vec![6, 3, 3]);
    assert_eq!(orders(&p_lower_central_series(&s3, 3).unwrap()), vec![6, 6]);
    assert_eq!(p_lower_central_series(&s3, 6).unwrap_err(), Error::NotPrime(6));
}

#[test]
fn p_series_terms_are_normal_with_elementary_abelian_layers() {
    for g in small_groups() {
        for p in [2, 3, 5, 7] {
            let series = p_lower_central_series(&g, p).unwrap();
            for pair in series.windows(2) {
                let (a, b) = (&pair[0], &pair[1]);
                assert!(g.is_normal(a) && b.is_subset_of(a));
                for x in a.elements() {
                    assert!(b.contains(g.pow(x, p as i64)));
                    for y in a.elements() {
                        assert!(b.contains(g.comm(x, y)));
                    }
                }
            }
        }
    }
}

#[test]
fn residual_examples() {
    let s3 = symmetric(3).unwrap();
    let c = pro_p_completion(&s3, 2).unwrap();
    assert_eq!(c.residual.order(), 3);
    assert_eq!(c.completion().order(), 2);
    let c = pro_p_completion(&s3, 3).unwrap();
    assert!(c.residual.is_whole());
    assert_eq!(c.completion().order(), 1);
    for g in [quaternion().unwrap(), heisenberg_mod(3).unwrap(), cyclic(8).unwrap()] {
        let p = prime_divisors(g.order() as u64)[0];
        assert!(p_residual(&g, p).unwrap().is_trivial());
    }
}

#[test]
fn three_residual_routes_agree_with_brute_force() {
    for g in small_groups() {
        for p in [2, 3, 5, 7] {
            let stable = p_residual(&g, p).unwrap();
            assert_eq!(stable, brute_residual(&g, p));
            assert_eq!(stable, p_residual_by_intersection(&g, p, 200).unwrap());
            assert_eq!(stable, p_residual_by_quotient(&g, p).unwrap());
        }
    }
}

#[test]
fn embeddability_examples() {
    let s3 = symmetric(3).unwrap();
    let a3 = s3.sylow(3).unwrap();
    match is_pro_p_embeddable(&s3, &a3, 3).unwrap() {
        Embedding::NotEmbeddable { witness } => {
            assert!(a3.contains(witness) && witness != 0);
        }
        e => panic!("{e:?}"),
    }
    let t = s3.subgroup(&[Permutation::from_cycles(3, &[&[0, 1]]).unwrap()]).unwrap();
    assert!(is_pro_p_embeddable(&s3, &t, 2).unwrap().is_embeddable());
    let other = symmetric(3).unwrap();
    assert_eq!(is_pro_p_embeddable(&other, &a3, 3).unwrap_err(), Error::ForeignSubgroup);
}

/// Embeddability decided by comparing the maximal p-quotient of `H`,
/// computed in `H` as a group of its own, with the image of `H` in the
/// maximal p-quotient of `G`.
fn brute_embeddable(g: &FiniteGroup, h: &Subgroup, p: u64) -> bool {
    let hg = h.to_group();
    let oh = brute_residual(&hg, p);
    let og = brute_residual(g, p);
    // |H/O^p(H)| must equal |H O^p(G) / O^p(G)| = |H| / |H ∩ O^p(G)|.
    hg.order() / oh.order() == h.order() / h.intersection(&og).order()
}

#[test]
fn embeddability_matches_quotient_size_oracle() {
    for g in small_groups() {
        let subs = g.all_subgroups(200).unwrap();
        for p in prime_divisors(g.order() as u64) {
            for h in &subs {
                assert_eq!(is_pro_p_embeddable(&g, h, p).unwrap().is_embeddable(), brute_embeddable(&g, h, p));
            }
        }
    }
}

#[test]
fn embeddability_is_conjugation_invariant() {
    for g in small_groups() {
        let subs = g.all_subgroups(200).unwrap();
        for p in prime_divisors(g.order() as u64) {
            for h in &subs {
                let v = is_pro_p_embeddable(&g, h, p).unwrap().is_embeddable();
                for x in 0..g.order() {
                    let k = g.conjugate_subgroup(h, x);
                    assert_eq!(is_pro_p_embeddable(&g, &k, p).unwrap().is_embeddable(), v);
                }
            }
        }
    }
}

#[test]
fn nilpotent_groups_embed_every_subgroup() {
    for g in [dihedral(4).unwrap(), quaternion().unwrap(), cyclic(12).unwrap(), heisenberg_mod(3).unwrap()] {
        for h in g.all_subgroups(200).unwrap() {
            for p in [2, 3, 5] {
                assert!(is_pro_p_embeddable(&g, &h, p).unwrap().is_embeddable());
            }
        }
    }
}

#[test]
fn witness_examples() {
    let z12 = cyclic(12).unwrap();
    let gen = z12.generator_indices()[0];
    let h = z12.subgroup_by_indices(&[z12.pow(gen, 2)]);
    let lambda = z12.subgroup_by_indices(&[z12.pow(gen, 4)]);
    let n = embeddability_witness(&z12, &h, &lambda, 2).unwrap().unwrap();
    assert!([1, 2, 4].contains(&n.index()));
    assert!(z12.is_normal(&n) && h.intersection(&n).is_subset_of(&lambda));

    let s3 = symmetric(3).unwrap();
    let a3 = s3.sylow(3).unwrap();
    assert_eq!(embeddability_witness(&s3, &a3, &s3.trivial_subgroup(), 3).unwrap(), None);

    for g in small_groups() {
        for h in g.all_subgroups(200).unwrap() {
            assert!(embeddability_witness(&g, &h, &h, 2).unwrap().unwrap().is_whole());
        }
    }

    assert!(matches!(embeddability_witness(&z12, &h, &lambda, 3), Err(Error::Precondition(_))));
}

#[test]
fn witness_search_is_complete() {
    for g in small_groups() {
        let normals = brute_normals(&g);
        let subs = g.all_subgroups(200).unwrap();
        for p in prime_divisors(g.order() as u64) {
            for h in &subs {
                for lambda in subs.iter().filter(|l| l.is_subset_of(h)) {
                    let normal_in_h = h.elements().all(|x| lambda.elements().all(|y| lambda.contains(g.conj(y, x))));
                    if !normal_in_h || !is_power_of((h.order() / lambda.order()) as u64, p) {
                        continue;
                    }
                    let exists = normals
                        .iter()
                        .any(|n| is_power_of(n.index() as u64, p) && h.intersection(n).is_subset_of(lambda));
                    let found = embeddability_witness(&g, h, lambda, p).unwrap();
                    assert_eq!(found.is_some(), exists);
                    if let Some(n) = found {
                        assert!(g.is_normal(&n) && is_power_of(n.index() as u64, p));
                        assert!(h.intersection(&n).is_subset_of(lambda));
                    }
                }
            }
        }
    }
}

#[test]
fn theorem_c_examples() {
    assert_eq!(theorem_c_verify(&cyclic(6).unwrap()).unwrap(), CVerdict::Nilpotent);

    let s3 = symmetric(3).unwrap();
    let v = theorem_c_verify(&s3).unwrap();
    match &v {
        CVerdict::Counterexample { subgroup, prime, .. } => {
            assert_eq!((subgroup.order(), *prime), (3, 3));
        }
        _ => panic!("{v:?}"),
    }
    assert!(v.recheck(&s3));

    let f21 = cyclic_semidirect(7, 3, 2).unwrap();
    let v = theorem_c_verify(&f21.group).unwrap();
    match &v {
        CVerdict::Counterexample { subgroup, prime, .. } => {
            assert_eq!(subgroup, &f21.normal);
            assert_eq!(*prime, 7);
        }
        _ => panic!("{v:?}"),
    }
    assert!(v.recheck(&f21.group));

    for g in small_groups() {
        let v = theorem_c_verify(&g).unwrap();
        assert_eq!(v == CVerdict::Nilpotent, g.is_nilpotent());
        assert!(v.recheck(&g));
    }
}

/// `R_P(H)` by trying every P-number up to `|G|^2`.
fn brute_radical(g: &FiniteGroup, h: &Subgroup, primes: &BTreeSet<u64>) -> Vec<usize> {
    let bound = (g.order() * g.order()) as u64;
    let ns: Vec<u64> = (1..=bound).filter(|&n| is_p_number(n, primes)).collect();
    (0..g.order()).filter(|&x| ns.iter().any(|&n| h.contains(g.pow(x, n as i64)))).collect()
}

#[test]
fn radical_examples() {
    let z12 = cyclic(12).unwrap();
    let gen = z12.generator_indices()[0];
    let four = z12.subgroup_by_indices(&[z12.pow(gen, 4)]);

    let r = p_radical_finite(&z12, &four, &set(&[2])).unwrap();
    assert!(r.subgroup.as_ref().unwrap().is_whole());
    assert_eq!(r.index, Some(4));

    let r = p_radical_finite(&z12, &z12.trivial_subgroup(), &set(&[3])).unwrap();
    assert_eq!(r.subgroup.unwrap(), four);
    assert_eq!(r.index, Some(3));

    let r = p_radical_finite(&z12, &z12.whole(), &set(&[5])).unwrap();
    assert_eq!(r.len(), 12);

    let r = p_radical_finite(&z12, &four, &set(&[])).unwrap();
    assert_eq!(r.subgroup.unwrap(), four);
}

#[test]
fn radical_matches_brute_force() {
    for g in small_groups() {
        for h in g.all_subgroups(200).unwrap() {
            for primes in [set(&[]), set(&[2]), set(&[3]), set(&[2, 3]), set(&[5, 7])] {
                let r = p_radical_finite(&g, &h, &primes).unwrap();
                assert_eq!(r.elements.ones().collect::<Vec<_>>(), brute_radical(&g, &h, &primes));
            }
        }
    }
}

#[test]
fn radical_need_not_be_a_subgroup_outside_nilpotent_groups() {
    // the elements of S3 whose square is trivial form no subgroup
    let s3 = symmetric(3).unwrap();
    let r = p_radical_finite(&s3, &s3.trivial_subgroup(), &set(&[2])).unwrap();
    assert_eq!(r.len(), 4);
    assert!(!r.is_subgroup());
}
