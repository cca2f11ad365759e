//! Finite groups given by multiplication tables.
//!
//! Every finite group is compact and discrete, so each of its subgroups is
//! compact open. This backend is also the oracle substrate: every handle
//! operation can be re-derived by raw element enumeration.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::error::{Result, TdlcError};

pub const DEFAULT_ORDER_BOUND: usize = 256;

/// A set of group elements stored as a bitset over element indices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElemSet {
    words: Vec<u64>,
}

impl ElemSet {
    pub fn empty(order: usize) -> Self {
        ElemSet { words: vec![0; order.div_ceil(64).max(1)] }
    }

    pub fn full(order: usize) -> Self {
        let mut s = Self::empty(order);
        for i in 0..order {
            s.insert(i as u32);
        }
        s
    }

    pub fn from_iter(order: usize, elems: impl IntoIterator<Item = u32>) -> Self {
        let mut s = Self::empty(order);
        for e in elems {
            s.insert(e);
        }
        s
    }

    pub fn insert(&mut self, e: u32) -> bool {
        let (w, b) = (e as usize / 64, e % 64);
        let had = self.words[w] >> b & 1 == 1;
        self.words[w] |= 1 << b;
        !had
    }

    pub fn contains(&self, e: u32) -> bool {
        let (w, b) = (e as usize / 64, e % 64);
        self.words.get(w).is_some_and(|x| x >> b & 1 == 1)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            (0..64u32).filter(move |b| w >> b & 1 == 1).map(move |b| wi as u32 * 64 + b)
        })
    }

    pub fn intersection(&self, other: &ElemSet) -> ElemSet {
        ElemSet { words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect() }
    }

    pub fn is_subset(&self, other: &ElemSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A finite group: element `0` is the identity.
#[derive(Clone)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u32>,
    inverses: Vec<u32>,
    names: Vec<String>,
    subgroups: Vec<ElemSet>,
    abelian: bool,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup")
            .field("order", &self.order)
            .field("subgroups", &self.subgroups.len())
            .finish()
    }
}

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        self.table == other.table
    }
}
impl Eq for FiniteGroup {}

impl FiniteGroup {
    /// Load a multiplication table, verifying the group axioms. Element `0`
    /// must be the identity.
    pub fn from_table(table: Vec<Vec<u32>>, names: Option<Vec<String>>) -> Result<Self> {
        Self::from_table_bounded(table, names, DEFAULT_ORDER_BOUND)
    }

    pub fn from_table_bounded(
        table: Vec<Vec<u32>>,
        names: Option<Vec<String>>,
        bound: usize,
    ) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(TdlcError::Invalid("empty multiplication table".into()));
        }
        if n > bound {
            return Err(TdlcError::Invalid(format!("group order {n} exceeds bound {bound}")));
        }
        if table.iter().any(|row| row.len() != n || row.iter().any(|&x| x as usize >= n)) {
            return Err(TdlcError::Invalid("table is not an n x n table over 0..n".into()));
        }
        let flat: Vec<u32> = table.into_iter().flatten().collect();
        let m = |a: usize, b: usize| flat[a * n + b] as usize;
        for a in 0..n {
            if m(0, a) != a || m(a, 0) != a {
                return Err(TdlcError::Invalid("element 0 is not the identity".into()));
            }
        }
        let mut inverses = vec![0u32; n];
        for a in 0..n {
            match (0..n).find(|&b| m(a, b) == 0 && m(b, a) == 0) {
                Some(b) => inverses[a] = b as u32,
                None => return Err(TdlcError::Invalid(format!("element {a} has no inverse"))),
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = m(a, b);
                for c in 0..n {
                    if m(ab, c) != m(a, m(b, c)) {
                        return Err(TdlcError::Invalid("table is not associative".into()));
                    }
                }
            }
        }
        let names = match names {
            Some(v) if v.len() == n => v,
            Some(_) => return Err(TdlcError::Invalid("wrong number of element names".into())),
            None => (0..n).map(|i| i.to_string()).collect(),
        };
        let abelian = (0..n).all(|a| (0..n).all(|b| m(a, b) == m(b, a)));
        let mut g = FiniteGroup { order: n, table: flat, inverses, names, subgroups: Vec::new(), abelian };
        g.subgroups = g.compute_subgroups();
        Ok(g)
    }

    /// Close a set of generators under a multiplication, in BFS order from the
    /// identity, and build the table.
    pub fn generated_by<T, F>(identity: T, gens: &[T], mul: F, name: impl Fn(&T) -> String) -> Result<Self>
    where
        T: Clone + Eq + std::hash::Hash,
        F: Fn(&T, &T) -> T,
    {
        let mut elems = vec![identity.clone()];
        let mut index: HashMap<T, u32> = HashMap::from([(identity, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in gens {
                let x = mul(&elems[i], g);
                if !index.contains_key(&x) {
                    if elems.len() >= DEFAULT_ORDER_BOUND {
                        return Err(TdlcError::Invalid("generated group exceeds order bound".into()));
                    }
                    index.insert(x.clone(), elems.len() as u32);
                    queue.push_back(elems.len());
                    elems.push(x);
                }
            }
        }
        let table = elems
            .iter()
            .map(|a| elems.iter().map(|b| index[&mul(a, b)]).collect())
            .collect();
        let names = elems.iter().map(&name).collect();
        Self::from_table(table, Some(names))
    }

    pub fn from_permutations(degree: usize, gens: &[Vec<u8>]) -> Result<Self> {
        let id: Vec<u8> = (0..degree as u8).collect();
        // (a*b)(i) = a(b(i)): apply b first.
        Self::generated_by(id, gens, |a, b| b.iter().map(|&i| a[i as usize]).collect(), |p| {
            format!("{p:?}")
        })
    }

    pub fn cyclic(n: u32) -> Result<Self> {
        Self::abelian_product(&[n])
    }

    /// `Z/n₁ × … × Z/n_r`, elements as coordinate tuples.
    pub fn abelian_product(orders: &[u32]) -> Result<Self> {
        if orders.contains(&0) {
            return Err(TdlcError::Invalid("cyclic order must be positive".into()));
        }
        let zero = vec![0u32; orders.len()];
        let gens: Vec<Vec<u32>> = (0..orders.len())
            .map(|i| {
                let mut v = zero.clone();
                v[i] = 1 % orders[i];
                v
            })
            .collect();
        let ords = orders.to_vec();
        Self::generated_by(
            zero,
            &gens,
            move |a, b| a.iter().zip(b).zip(&ords).map(|((x, y), n)| (x + y) % n).collect(),
            |v| format!("{v:?}"),
        )
    }

    pub fn symmetric3() -> Self {
        Self::from_permutations(3, &[vec![1, 0, 2], vec![1, 2, 0]]).expect("S3")
    }

    pub fn dihedral4() -> Self {
        Self::from_permutations(4, &[vec![1, 2, 3, 0], vec![0, 3, 2, 1]]).expect("D4")
    }

    pub fn alternating4() -> Self {
        Self::from_permutations(4, &[vec![1, 2, 0, 3], vec![1, 0, 3, 2]]).expect("A4")
    }

    pub fn quaternion8() -> Self {
        // Hamilton product on unit quaternions with integer coordinates.
        let mul = |a: &[i8; 4], b: &[i8; 4]| {
            [
                a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
                a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
                a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
                a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
            ]
        };
        Self::generated_by([1, 0, 0, 0], &[[0, 1, 0, 0], [0, 0, 1, 0]], mul, |q| format!("{q:?}"))
            .expect("Q8")
    }

    pub fn trivial() -> Self {
        Self::from_table(vec![vec![0]], Some(vec!["e".into()])).expect("trivial")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_abelian(&self) -> bool {
        self.abelian
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.order + b as usize]
    }

    pub fn inv(&self, a: u32) -> u32 {
        self.inverses[a as usize]
    }

    pub fn name(&self, a: u32) -> &str {
        &self.names[a as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn table_rows(&self) -> Vec<Vec<u32>> {
        self.table.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.order as u32
    }

    pub fn whole(&self) -> ElemSet {
        ElemSet::full(self.order)
    }

    pub fn identity_set(&self) -> ElemSet {
        ElemSet::from_iter(self.order, [0])
    }

    /// All subgroups, sorted by order then bit pattern.
    pub fn subgroups(&self) -> &[ElemSet] {
        &self.subgroups
    }

    pub fn subgroup_id(&self, s: &ElemSet) -> Option<usize> {
        self.subgroups.iter().position(|x| x == s)
    }

    pub fn is_subgroup(&self, s: &ElemSet) -> bool {
        s.contains(0) && s.iter().all(|a| s.iter().all(|b| s.contains(self.mul(a, self.inv(b)))))
    }

    /// The subgroup generated by a set of elements.
    pub fn closure(&self, gens: impl IntoIterator<Item = u32>) -> ElemSet {
        let mut set = self.identity_set();
        let gens: Vec<u32> = gens.into_iter().collect();
        let mut frontier = vec![0u32];
        while let Some(x) = frontier.pop() {
            for &g in &gens {
                let y = self.mul(x, g);
                if set.insert(y) {
                    frontier.push(y);
                }
            }
        }
        set
    }

    fn compute_subgroups(&self) -> Vec<ElemSet> {
        let mut found: BTreeSet<ElemSet> = BTreeSet::new();
        let mut frontier = vec![self.identity_set()];
        found.insert(self.identity_set());
        while let Some(h) = frontier.pop() {
            for g in self.elements() {
                if h.contains(g) {
                    continue;
                }
                let joined = self.closure(h.iter().chain([g]));
                if found.insert(joined.clone()) {
                    frontier.push(joined);
                }
            }
        }
        let mut subs: Vec<ElemSet> = found.into_iter().collect();
        subs.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
        subs
    }

    /// The set product `AB`.
    pub fn product_set(&self, a: &ElemSet, b: &ElemSet) -> ElemSet {
        let mut out = ElemSet::empty(self.order);
        for x in a.iter() {
            for y in b.iter() {
                out.insert(self.mul(x, y));
            }
        }
        out
    }

    pub fn conjugate(&self, s: &ElemSet, x: u32) -> ElemSet {
        // x⁻¹ s x
        ElemSet::from_iter(self.order, s.iter().map(|h| self.mul(self.mul(self.inv(x), h), x)))
    }

    /// Whether every element of `c` normalizes `s`.
    pub fn normalizes(&self, c: &ElemSet, s: &ElemSet) -> bool {
        c.iter().all(|x| self.conjugate(s, x) == *s)
    }

    pub fn is_normal(&self, s: &ElemSet) -> bool {
        self.normalizes(&self.whole(), s)
    }

    /// `L = ⋂_{x ∈ C} x⁻¹Kx`, the largest subgroup of `K` normalized by `C`.
    pub fn normalized_core(&self, k: &ElemSet, c: &ElemSet) -> ElemSet {
        c.iter().fold(k.clone(), |acc, x| acc.intersection(&self.conjugate(k, x)))
    }

    /// A small generating set, chosen greedily in element order.
    pub fn generators(&self) -> Vec<u32> {
        let mut gens = Vec::new();
        let mut span = self.identity_set();
        for g in self.elements() {
            if !span.contains(g) {
                gens.push(g);
                span = self.closure(gens.iter().copied());
            }
        }
        gens
    }

    pub fn is_homomorphism(&self, map: &[u32]) -> bool {
        map.len() == self.order
            && map.iter().all(|&x| (x as usize) < self.order)
            && self
                .elements()
                .all(|a| self.elements().all(|b| map[self.mul(a, b) as usize] == self.mul(map[a as usize], map[b as usize])))
    }

    /// Every endomorphism of the group, in lexicographic order of generator images.
    pub fn endomorphisms(&self) -> Vec<Vec<u32>> {
        let gens = self.generators();
        let n = self.order as u32;
        let mut out = Vec::new();
        let mut images = vec![0u32; gens.len()];
        loop {
            if let Some(map) = self.extend_homomorphism(&gens, &images) {
                out.push(map);
            }
            // odometer
            let mut i = 0;
            loop {
                if i == images.len() {
                    out.sort();
                    out.dedup();
                    return out;
                }
                images[i] += 1;
                if images[i] < n {
                    break;
                }
                images[i] = 0;
                i += 1;
            }
        }
    }

    fn extend_homomorphism(&self, gens: &[u32], images: &[u32]) -> Option<Vec<u32>> {
        let mut map: Vec<Option<u32>> = vec![None; self.order];
        map[0] = Some(0);
        let mut queue = VecDeque::from([0u32]);
        while let Some(x) = queue.pop_front() {
            let fx = map[x as usize]?;
            for (g, img) in gens.iter().zip(images) {
                let y = self.mul(x, *g);
                let fy = self.mul(fx, *img);
                match map[y as usize] {
                    None => {
                        map[y as usize] = Some(fy);
                        queue.push_back(y);
                    }
                    Some(v) if v != fy => return None,
                    Some(_) => {}
                }
            }
        }
        let map: Vec<u32> = map.into_iter().collect::<Option<_>>()?;
        self.is_homomorphism(&map).then_some(map)
    }

    /// The quotient `G/N` for a normal subgroup `N`, with the coset of each element.
    pub fn quotient(&self, n: &ElemSet) -> Result<(FiniteGroup, Vec<u32>)> {
        if !self.is_subgroup(n) || !self.is_normal(n) {
            return Err(TdlcError::Unsupported("quotient by a non-normal subgroup".into()));
        }
        let mut coset_of = vec![u32::MAX; self.order];
        let mut reps: Vec<u32> = Vec::new();
        for g in self.elements() {
            if coset_of[g as usize] != u32::MAX {
                continue;
            }
            let id = reps.len() as u32;
            for h in n.iter() {
                coset_of[self.mul(g, h) as usize] = id;
            }
            reps.push(g);
        }
        let table = reps
            .iter()
            .map(|&a| reps.iter().map(|&b| coset_of[self.mul(a, b) as usize]).collect())
            .collect();
        let names = reps.iter().map(|&r| format!("{}N", self.name(r))).collect();
        Ok((FiniteGroup::from_table(table, Some(names))?, coset_of))
    }

    /// The subgroup `H` as a group in its own right, with the embedding.
    pub fn subgroup_as_group(&self, h: &ElemSet) -> Result<(FiniteGroup, Vec<u32>)> {
        if !self.is_subgroup(h) {
            return Err(TdlcError::Invalid("not a subgroup".into()));
        }
        let embed: Vec<u32> = h.iter().collect();
        let pos: HashMap<u32, u32> = embed.iter().enumerate().map(|(i, &e)| (e, i as u32)).collect();
        let table = embed
            .iter()
            .map(|&a| embed.iter().map(|&b| pos[&self.mul(a, b)]).collect())
            .collect();
        let names = embed.iter().map(|&e| self.name(e).to_string()).collect();
        Ok((FiniteGroup::from_table(table, Some(names))?, embed))
    }
}

/// A finite group together with an endomorphism given as a map table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSystem {
    pub group: Arc<FiniteGroup>,
    pub map: Vec<u32>,
}

impl FiniteSystem {
    pub fn new(group: Arc<FiniteGroup>, map: Vec<u32>) -> Result<Self> {
        if !group.is_homomorphism(&map) {
            return Err(TdlcError::Invalid("map table is not an endomorphism".into()));
        }
        Ok(FiniteSystem { group, map })
    }

    pub fn identity(group: Arc<FiniteGroup>) -> Self {
        let map = group.elements().collect();
        FiniteSystem { group, map }
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn image(&self, u: &ElemSet) -> ElemSet {
        ElemSet::from_iter(self.order(), u.iter().map(|x| self.map[x as usize]))
    }

    pub fn preimage(&self, u: &ElemSet) -> ElemSet {
        ElemSet::from_iter(self.order(), self.group.elements().filter(|&x| u.contains(self.map[x as usize])))
    }

    pub fn kernel(&self) -> ElemSet {
        self.preimage(&self.group.identity_set())
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().len() == 1
    }

    /// `[U : V]` for `V ≤ U`.
    pub fn index(&self, v: &ElemSet, u: &ElemSet) -> Result<u64> {
        if !v.is_subset(u) {
            return Err(TdlcError::NotContained("V is not a subgroup of U".into()));
        }
        Ok((u.len() / v.len()) as u64)
    }

    /// The set product `UV`, required to be a subgroup (`UV = VU`).
    pub fn set_product(&self, u: &ElemSet, v: &ElemSet) -> Result<ElemSet> {
        let uv = self.group.product_set(u, v);
        let vu = self.group.product_set(v, u);
        if uv != vu {
            return Err(TdlcError::Unsupported("UV != VU: the set product is not a subgroup".into()));
        }
        Ok(uv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subgroup_counts() {
        assert_eq!(FiniteGroup::symmetric3().subgroups().len(), 6);
        assert_eq!(FiniteGroup::cyclic(12).unwrap().subgroups().len(), 6);
        assert_eq!(FiniteGroup::trivial().subgroups().len(), 1);
        assert_eq!(FiniteGroup::dihedral4().subgroups().len(), 10);
        assert_eq!(FiniteGroup::quaternion8().subgroups().len(), 6);
        assert_eq!(FiniteGroup::alternating4().subgroups().len(), 10);
    }

    #[test]
    fn subgroup_list_is_complete_by_brute_force() {
        // Every subset closed under x·y⁻¹ of S3 (2^6 subsets) is in the list.
        let g = FiniteGroup::symmetric3();
        let mut count = 0;
        for mask in 0u32..64 {
            let s = ElemSet::from_iter(6, (0..6).filter(|i| mask >> i & 1 == 1));
            if g.is_subgroup(&s) {
                count += 1;
                assert!(g.subgroup_id(&s).is_some());
            }
        }
        assert_eq!(count, 6);
    }

    #[test]
    fn endomorphism_counts() {
        // End(S3): 6 automorphisms, 3 maps onto order-2 subgroups, the trivial map.
        assert_eq!(FiniteGroup::symmetric3().endomorphisms().len(), 10);
        assert_eq!(FiniteGroup::cyclic(12).unwrap().endomorphisms().len(), 12);
    }

    #[test]
    fn rejects_non_groups() {
        assert!(FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]], None).is_err());
        assert!(FiniteGroup::from_table(vec![vec![1, 0], vec![0, 1]], None).is_err());
        let big: Vec<Vec<u32>> = (0..300u32).map(|a| (0..300).map(|b| (a + b) % 300).collect()).collect();
        assert!(FiniteGroup::from_table(big, None).is_err());
    }

    fn s3_parts() -> (FiniteGroup, ElemSet, ElemSet) {
        let g = FiniteGroup::symmetric3();
        let transposition = g.subgroups().iter().find(|s| s.len() == 2).unwrap().clone();
        let a3 = g.subgroups().iter().find(|s| s.len() == 3).unwrap().clone();
        (g, transposition, a3)
    }

    #[test]
    fn s3_intersection_and_product() {
        let (g, t, a3) = s3_parts();
        let sys = FiniteSystem::identity(Arc::new(g.clone()));
        assert_eq!(t.intersection(&a3), g.identity_set());
        assert_eq!(sys.set_product(&t, &a3).unwrap(), g.whole());
        // Two distinct transpositions do not permute.
        let others: Vec<_> = g.subgroups().iter().filter(|s| s.len() == 2).cloned().collect();
        assert!(sys.set_product(&others[0], &others[1]).is_err());
    }

    #[test]
    fn normalized_core_examples() {
        let (g, t, a3) = s3_parts();
        assert_eq!(g.normalized_core(&t, &a3), g.identity_set());
        assert_eq!(g.normalized_core(&a3, &g.whole()), a3);
        assert_eq!(g.normalized_core(&t, &g.identity_set()), t);
    }

    #[test]
    fn quotient_and_subgroup_groups() {
        let (g, t, a3) = s3_parts();
        let (q, coset) = g.quotient(&a3).unwrap();
        assert_eq!(q.order(), 2);
        assert_eq!(coset.len(), 6);
        assert!(g.quotient(&t).is_err());
        let (h, embed) = g.subgroup_as_group(&a3).unwrap();
        assert_eq!(h.order(), 3);
        assert_eq!(embed.len(), 3);
    }
}
