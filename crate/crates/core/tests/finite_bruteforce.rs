//! Finite handle algebra against naive element-set computations.

use std::collections::BTreeSet;
use std::sync::Arc;

use tdlc::backends::identities::check_index_identities;
use tdlc::backends::{ElemSet, FiniteGroup, FiniteSystem};
use tdlc::catalog;

type Naive = BTreeSet<u32>;

fn naive(s: &ElemSet) -> Naive {
    s.iter().collect()
}

fn groups() -> Vec<FiniteGroup> {
    vec![
        FiniteGroup::symmetric3(),
        FiniteGroup::dihedral4(),
        FiniteGroup::quaternion8(),
        FiniteGroup::alternating4(),
        FiniteGroup::cyclic(12).unwrap(),
        FiniteGroup::cyclic(64).unwrap(),
        FiniteGroup::abelian_product(&[2, 4]).unwrap(),
        FiniteGroup::abelian_product(&[2, 2, 4]).unwrap(),
    ]
}

/// Every subgroup arises from {1} by repeatedly adjoining one element.
fn naive_subgroups(g: &FiniteGroup) -> BTreeSet<Naive> {
    let mut found: BTreeSet<Naive> = BTreeSet::new();
    let mut frontier = vec![naive(&g.identity_set())];
    while let Some(h) = frontier.pop() {
        if !found.insert(h.clone()) {
            continue;
        }
        for a in g.elements().filter(|a| !h.contains(a)) {
            frontier.push(naive(&g.closure(h.iter().copied().chain([a]))));
        }
    }
    found
}

#[test]
fn subgroup_counts() {
    let expect = [6, 10, 6, 10, 6];
    for (g, n) in groups().iter().zip(expect) {
        assert_eq!(g.subgroups().len(), n);
    }
    for g in groups() {
        let ours: BTreeSet<Naive> = g.subgroups().iter().map(naive).collect();
        assert_eq!(ours, naive_subgroups(&g));
    }
}

#[test]
fn endomorphism_counts() {
    let s3 = FiniteGroup::symmetric3();
    assert_eq!(s3.endomorphisms().len(), 10);
    assert_eq!(FiniteGroup::cyclic(12).unwrap().endomorphisms().len(), 12);
    for m in s3.endomorphisms() {
        for a in s3.elements() {
            for b in s3.elements() {
                assert_eq!(m[s3.mul(a, b) as usize], s3.mul(m[a as usize], m[b as usize]));
            }
        }
    }
}

#[test]
fn handle_algebra_matches_naive_sets() {
    for g in groups() {
        let arc = Arc::new(g.clone());
        let maps: Vec<Vec<u32>> = g.endomorphisms().into_iter().take(24).collect();
        let subs = g.subgroups();
        for map in maps {
            let sys = FiniteSystem::new(arc.clone(), map.clone()).unwrap();
            let e = g.identity_set().iter().next().unwrap();
            let ker_naive: Naive = g.elements().filter(|&x| map[x as usize] == e).collect();
            assert_eq!(naive(&sys.kernel()), ker_naive);
            for u in subs {
                let img: Naive = u.iter().map(|x| map[x as usize]).collect();
                assert_eq!(naive(&sys.image(u)), img);
                let pre: Naive = g.elements().filter(|&x| u.contains(map[x as usize])).collect();
                assert_eq!(naive(&sys.preimage(u)), pre);
                for v in subs {
                    let meet: Naive = naive(u).intersection(&naive(v)).copied().collect();
                    assert_eq!(naive(&u.intersection(v)), meet);
                    let prod: Naive = u.iter().flat_map(|a| v.iter().map(move |b| (a, b))).map(|(a, b)| g.mul(a, b)).collect();
                    let rev: Naive = v.iter().flat_map(|b| u.iter().map(move |a| (a, b))).map(|(a, b)| g.mul(b, a)).collect();
                    match sys.set_product(u, v) {
                        Ok(s) => assert_eq!(naive(&s), prod),
                        Err(_) => assert_ne!(prod, rev),
                    }
                    if v.is_subset(u) {
                        assert_eq!(sys.index(v, u).unwrap() as usize, u.len() / v.len());
                    } else {
                        assert!(sys.index(v, u).is_err());
                    }
                }
            }
        }
    }
}

#[test]
fn quotients_and_subgroup_groups() {
    for g in groups() {
        for n in g.subgroups().iter().filter(|n| g.is_normal(n)) {
            let (q, coset) = g.quotient(n).unwrap();
            assert_eq!(q.order() * n.len(), g.order());
            for a in g.elements() {
                for b in g.elements() {
                    assert_eq!(coset[g.mul(a, b) as usize], q.mul(coset[a as usize], coset[b as usize]));
                }
            }
        }
        for h in g.subgroups() {
            let (sub, embed) = g.subgroup_as_group(h).unwrap();
            assert_eq!(sub.order(), h.len());
            for a in sub.elements() {
                for b in sub.elements() {
                    assert_eq!(embed[sub.mul(a, b) as usize], g.mul(embed[a as usize], embed[b as usize]));
                }
            }
        }
    }
}

#[test]
fn index_identities_on_catalog_groups() {
    for (name, g) in catalog::index_groups() {
        for c in check_index_identities(&g) {
            assert!(c.checked > 0, "{name} {}", c.name);
            assert_eq!(c.violations, 0, "{name} {}", c.name);
        }
    }
}
