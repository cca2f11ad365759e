//! Exhaustive checks of the index identities over every subgroup tuple of a
//! finite group, by raw element counting.

use std::sync::Arc;

use super::finite::{ElemSet, FiniteGroup, FiniteSystem};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityCount {
    pub name: &'static str,
    pub checked: usize,
    pub violations: usize,
}

impl IdentityCount {
    pub fn named(name: &'static str) -> Self {
        IdentityCount { name, checked: 0, violations: 0 }
    }

    pub fn record(&mut self, ok: bool) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
        }
    }
}

fn idx(big: &ElemSet, small: &ElemSet) -> usize {
    debug_assert!(small.is_subset(big));
    big.len() / small.len()
}

/// Checks identities (1)–(6), the snake identity and the normalized core over
/// all applicable tuples; (5) and (6) range over every endomorphism.
pub fn check_index_identities(g: &FiniteGroup) -> Vec<IdentityCount> {
    let subs = g.subgroups();
    let mut gi = [
        IdentityCount::named("gi1-tower"),
        IdentityCount::named("gi2-product"),
        IdentityCount::named("gi3-intersection"),
        IdentityCount::named("gi4-join"),
        IdentityCount::named("gi5-preimage"),
        IdentityCount::named("gi6-image"),
    ];
    let pairs: Vec<(&ElemSet, &ElemSet)> =
        subs.iter().flat_map(|k| subs.iter().filter(move |h| h.is_subset(k)).map(move |h| (h, k))).collect();
    let permutes = |a: &ElemSet, b: &ElemSet| g.product_set(a, b) == g.product_set(b, a);

    for &(h, k) in &pairs {
        for g0 in subs.iter().filter(|g0| k.is_subset(g0)) {
            gi[0].record(idx(g0, h) == idx(g0, k) * idx(k, h));
        }
        for l in subs {
            gi[2].record(idx(k, h) >= idx(&k.intersection(l), &h.intersection(l)));
            if permutes(h, l) && permutes(k, l) {
                let kl = g.product_set(k, l);
                let hl = g.product_set(h, l);
                gi[3].record(idx(k, h) >= idx(&kl, &hl));
            }
        }
    }
    for h in subs {
        for l in subs.iter().filter(|l| permutes(l, h)) {
            let lh = g.product_set(l, h);
            gi[1].record(g.is_subgroup(&lh) && idx(&lh, h) == idx(l, &h.intersection(l)));
        }
    }
    let arc = Arc::new(g.clone());
    for map in g.endomorphisms() {
        let sys = FiniteSystem::new(arc.clone(), map).expect("enumerated endomorphism");
        let im = sys.image(&g.whole());
        let ker = sys.kernel();
        for &(h, k) in &pairs {
            let (ph, pk) = (sys.preimage(h), sys.preimage(k));
            gi[4].record(idx(&pk, &ph) == idx(&k.intersection(&im), &h.intersection(&im)));
            let (kk, hk) = (g.product_set(k, &ker), g.product_set(h, &ker));
            gi[5].record(idx(&kk, &hk) == idx(&sys.image(k), &sys.image(h)));
        }
    }

    let mut snake = IdentityCount::named("snake");
    for b in subs {
        let inside: Vec<&ElemSet> = subs.iter().filter(|s| s.is_subset(b)).collect();
        for a in &inside {
            for b1 in &inside {
                if permutes(b1, a) {
                    let b1a = g.product_set(b1, a);
                    snake.record(idx(b, b1) == idx(a, &a.intersection(b1)) * idx(b, &b1a));
                }
            }
        }
    }

    let mut magic = IdentityCount::named("normalized-core");
    for k in subs {
        for c in subs {
            let l = g.normalized_core(k, c);
            let maximal = subs
                .iter()
                .filter(|m| m.is_subset(k) && g.normalizes(c, m))
                .all(|m| m.is_subset(&l));
            magic.record(g.is_subgroup(&l) && l.is_subset(k) && g.normalizes(c, &l) && maximal);
        }
    }

    let mut out: Vec<IdentityCount> = gi.into_iter().collect();
    out.push(snake);
    out.push(magic);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s3_snake_example() {
        let g = FiniteGroup::symmetric3();
        let t = g.subgroups().iter().find(|s| s.len() == 2).unwrap();
        let a3 = g.subgroups().iter().find(|s| s.len() == 3).unwrap();
        let whole = g.whole();
        let b1a = g.product_set(t, a3);
        assert_eq!(idx(&whole, t), 3);
        assert_eq!(idx(a3, &a3.intersection(t)) * idx(&whole, &b1a), 3);
    }

    #[test]
    fn no_violations_on_small_groups() {
        for g in [FiniteGroup::symmetric3(), FiniteGroup::cyclic(12).unwrap()] {
            for c in check_index_identities(&g) {
                assert!(c.checked > 0, "{} never applied", c.name);
                assert_eq!(c.violations, 0, "{}", c.name);
            }
        }
    }
}
