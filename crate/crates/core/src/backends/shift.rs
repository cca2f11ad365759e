//! Shift groups over a finite abelian alphabet `F`.
//!
//! The group is `F^Z` (compact), `F((t))` (left tail restricted), or `⊕F`
//! (discrete). The endomorphism is `φ(x)_i = σ(x_{i+k})`. Handles are profile
//! subgroups `∏ V_i` that are constant outside a finite window.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use super::finite::{ElemSet, FiniteGroup};
use crate::error::{Result, TdlcError};
use crate::kernel::IndexValue;

/// Index into the alphabet's subgroup list.
pub type SubId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Product,
    Restricted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TailMode {
    Compact,
    Laurent,
    Discrete,
}

impl TailMode {
    pub fn left(self) -> Direction {
        match self {
            TailMode::Compact => Direction::Product,
            _ => Direction::Restricted,
        }
    }

    pub fn right(self) -> Direction {
        match self {
            TailMode::Discrete => Direction::Restricted,
            _ => Direction::Product,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TailMode::Compact => "compact",
            TailMode::Laurent => "laurent",
            TailMode::Discrete => "discrete",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "compact" => Some(TailMode::Compact),
            "laurent" => Some(TailMode::Laurent),
            "discrete" => Some(TailMode::Discrete),
            _ => None,
        }
    }
}

/// `∏ V_i` with `V_i = left` for `i < offset`, `window[i − offset]` inside the
/// window, and `right` beyond it. Canonical: window ends differ from the tails.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Profile {
    pub left: SubId,
    pub right: SubId,
    pub offset: i64,
    pub window: Vec<SubId>,
}

impl Profile {
    pub fn new(left: SubId, right: SubId, offset: i64, window: Vec<SubId>) -> Self {
        let mut p = Profile { left, right, offset, window };
        let lead = p.window.iter().take_while(|&&s| s == left).count();
        p.window.drain(..lead);
        p.offset += lead as i64;
        while p.window.last() == Some(&right) {
            p.window.pop();
        }
        if p.window.is_empty() && left == right {
            p.offset = 0;
        }
        p
    }

    pub fn constant(s: SubId) -> Self {
        Profile::new(s, s, 0, Vec::new())
    }

    pub fn at(&self, i: i64) -> SubId {
        if i < self.offset {
            self.left
        } else if i < self.end() {
            self.window[(i - self.offset) as usize]
        } else {
            self.right
        }
    }

    pub fn end(&self) -> i64 {
        self.offset + self.window.len() as i64
    }

    /// `i ↦ −i`.
    pub fn reflect(&self) -> Profile {
        let mut w = self.window.clone();
        w.reverse();
        Profile::new(self.right, self.left, 1 - self.end(), w)
    }

    /// `R_i = f(P_{i+s})`.
    pub fn remap(&self, f: impl Fn(SubId) -> SubId, s: i64) -> Profile {
        Profile::new(f(self.left), f(self.right), self.offset - s, self.window.iter().map(|&x| f(x)).collect())
    }

    /// Coordinatewise combination.
    pub fn zip(&self, other: &Profile, f: impl Fn(SubId, SubId) -> SubId) -> Profile {
        let lo = self.offset.min(other.offset);
        let hi = self.end().max(other.end());
        let window = (lo..hi).map(|i| f(self.at(i), other.at(i))).collect();
        Profile::new(f(self.left, other.left), f(self.right, other.right), lo, window)
    }

    /// Every coordinate value, tails included.
    pub fn values(&self) -> impl Iterator<Item = SubId> + '_ {
        [self.left, self.right].into_iter().chain(self.window.iter().copied())
    }
}

/// `(G, φ)` with `φ(x)_i = σ(x_{i+k})`.
#[derive(Clone)]
pub struct ShiftSystem {
    pub alphabet: Arc<FiniteGroup>,
    pub label: String,
    pub mode: TailMode,
    pub shift: i64,
    pub sigma: Vec<u32>,
    img: Vec<SubId>,
    pre: Vec<SubId>,
    meet: Vec<Vec<SubId>>,
    join: Vec<Vec<SubId>>,
    leq: Vec<Vec<bool>>,
    sizes: Vec<usize>,
    full: SubId,
    trivial: SubId,
}

impl fmt::Debug for ShiftSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ShiftSystem")
            .field("alphabet", &self.label)
            .field("mode", &self.mode)
            .field("shift", &self.shift)
            .field("sigma", &self.sigma)
            .finish()
    }
}

impl PartialEq for ShiftSystem {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet == other.alphabet && self.mode == other.mode && self.shift == other.shift && self.sigma == other.sigma
    }
}
impl Eq for ShiftSystem {}

/// Outcome of the closedness test for `⋃ φⁿU₊`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TailVerdict {
    Closed(String),
    NotClosed(String),
    Unknown(String),
}

impl ShiftSystem {
    pub fn new(alphabet: Arc<FiniteGroup>, label: impl Into<String>, mode: TailMode, shift: i64, sigma: Vec<u32>) -> Result<Self> {
        if !alphabet.is_abelian() {
            return Err(TdlcError::Invalid("shift alphabet must be abelian".into()));
        }
        if !alphabet.is_homomorphism(&sigma) {
            return Err(TdlcError::Invalid("sigma is not an endomorphism of the alphabet".into()));
        }
        let subs = alphabet.subgroups().to_vec();
        let n = alphabet.order();
        let id = |s: &ElemSet| alphabet.subgroup_id(s).expect("closed under lattice operations");
        let img: Vec<SubId> =
            subs.iter().map(|s| id(&ElemSet::from_iter(n, s.iter().map(|x| sigma[x as usize])))).collect();
        let pre: Vec<SubId> = subs
            .iter()
            .map(|s| id(&ElemSet::from_iter(n, alphabet.elements().filter(|&x| s.contains(sigma[x as usize])))))
            .collect();
        let meet = subs.iter().map(|a| subs.iter().map(|b| id(&a.intersection(b))).collect()).collect();
        let join = subs.iter().map(|a| subs.iter().map(|b| id(&alphabet.product_set(a, b))).collect()).collect();
        let leq = subs.iter().map(|a| subs.iter().map(|b| a.is_subset(b)).collect()).collect();
        let sizes = subs.iter().map(|s| s.len()).collect();
        let full = id(&alphabet.whole());
        let trivial = id(&alphabet.identity_set());
        Ok(ShiftSystem {
            alphabet,
            label: label.into(),
            mode,
            shift,
            sigma,
            img,
            pre,
            meet,
            join,
            leq,
            sizes,
            full,
            trivial,
        })
    }

    pub fn identity_sigma(alphabet: &FiniteGroup) -> Vec<u32> {
        alphabet.elements().collect()
    }

    pub fn full(&self) -> SubId {
        self.full
    }

    pub fn trivial_sub(&self) -> SubId {
        self.trivial
    }

    pub fn sub_count(&self) -> usize {
        self.sizes.len()
    }

    pub fn sub_size(&self, s: SubId) -> usize {
        self.sizes[s]
    }

    pub fn sub_image(&self, s: SubId) -> SubId {
        self.img[s]
    }

    pub fn sub_preimage(&self, s: SubId) -> SubId {
        self.pre[s]
    }

    pub fn sub_meet(&self, a: SubId, b: SubId) -> SubId {
        self.meet[a][b]
    }

    pub fn sub_leq(&self, a: SubId, b: SubId) -> bool {
        self.leq[a][b]
    }

    pub fn sub_id(&self, s: &ElemSet) -> Option<SubId> {
        self.alphabet.subgroup_id(s)
    }

    pub fn whole(&self) -> Profile {
        Profile::constant(self.full)
    }

    pub fn trivial(&self) -> Profile {
        Profile::constant(self.trivial)
    }

    /// Profile with the given coordinates, validated against the tail mode.
    pub fn make_profile(&self, left: SubId, right: SubId, offset: i64, window: Vec<SubId>) -> Result<Profile> {
        let n = self.sub_count();
        if left >= n || right >= n || window.iter().any(|&s| s >= n) {
            return Err(TdlcError::Invalid("unknown alphabet subgroup".into()));
        }
        Ok(Profile::new(left, right, offset, window))
    }

    /// Profile that is `inner` on `[lo, hi]` and `outer` elsewhere, tails per mode.
    pub fn window_profile(&self, lo: i64, hi: i64, inner: SubId) -> Profile {
        Profile::new(self.full, self.full, lo, vec![inner; (hi - lo + 1).max(0) as usize])
    }

    pub fn is_compact(&self, p: &Profile) -> bool {
        (self.mode.left() == Direction::Product || p.left == self.trivial)
            && (self.mode.right() == Direction::Product || p.right == self.trivial)
    }

    pub fn is_open(&self, p: &Profile) -> bool {
        (self.mode.left() == Direction::Restricted || p.left == self.full)
            && (self.mode.right() == Direction::Restricted || p.right == self.full)
    }

    pub fn is_compact_group(&self) -> bool {
        self.mode == TailMode::Compact
    }

    pub fn image(&self, p: &Profile) -> Profile {
        p.remap(|s| self.img[s], self.shift)
    }

    pub fn preimage(&self, p: &Profile) -> Profile {
        p.remap(|s| self.pre[s], -self.shift)
    }

    pub fn intersect(&self, a: &Profile, b: &Profile) -> Profile {
        a.zip(b, |x, y| self.meet[x][y])
    }

    pub fn set_product(&self, a: &Profile, b: &Profile) -> Profile {
        a.zip(b, |x, y| self.join[x][y])
    }

    pub fn contains(&self, big: &Profile, small: &Profile) -> bool {
        let lo = big.offset.min(small.offset);
        let hi = big.end().max(small.end());
        self.leq[small.left][big.left]
            && self.leq[small.right][big.right]
            && (lo..hi).all(|i| self.leq[small.at(i)][big.at(i)])
    }

    /// `[big : small]`.
    pub fn index(&self, small: &Profile, big: &Profile) -> Result<IndexValue> {
        if !self.contains(big, small) {
            return Err(TdlcError::NotContained("profile is not a subgroup of the other".into()));
        }
        if small.left != big.left || small.right != big.right {
            return Ok(IndexValue::Infinite);
        }
        let lo = big.offset.min(small.offset);
        let hi = big.end().max(small.end());
        let mut acc = IndexValue::one();
        for i in lo..hi {
            let (a, b) = (big.at(i), small.at(i));
            if a != b {
                acc = acc * IndexValue::finite((self.sizes[a] / self.sizes[b]) as u64)?;
            }
        }
        Ok(acc)
    }

    /// The k-th base element: `{0}` on `[−k, k]` (compact), `t^k F[[t]]`
    /// (Laurent), or `{0}` (discrete).
    pub fn base(&self, k: usize) -> Profile {
        let k = k as i64;
        match self.mode {
            TailMode::Compact => self.window_profile(-k, k, self.trivial),
            TailMode::Laurent => Profile::new(self.trivial, self.full, k, Vec::new()),
            TailMode::Discrete => self.trivial(),
        }
    }

    pub fn kernel(&self) -> Profile {
        Profile::constant(self.pre[self.trivial])
    }

    pub fn is_injective(&self) -> bool {
        self.pre[self.trivial] == self.trivial
    }

    /// Limit of `V₀ = U`, `V_{n+1} = U ∩ T(V_n)` with `T(V)_i = m(V_{i+s})`.
    /// `None` when the upstream sweep ends in a cycle of length above one.
    fn recursion_limit(&self, u: &Profile, m: &[SubId], s: i64) -> Option<Profile> {
        let step = |base: SubId, x: SubId| self.meet[base][m[x]];
        let settle = |base: SubId| {
            let mut x = base;
            loop {
                let y = step(base, x);
                if y == x {
                    return x;
                }
                x = y;
            }
        };
        if s == 0 {
            let window = u.window.iter().map(|&b| settle(b)).collect();
            return Some(Profile::new(settle(u.left), settle(u.right), u.offset, window));
        }
        if s < 0 {
            return self.recursion_limit(&u.reflect(), m, -s).map(|p| p.reflect());
        }
        let (a, b) = (u.offset, u.end());
        let r_star = settle(u.right);
        let mut vals: HashMap<i64, SubId> = HashMap::new();
        let get = |vals: &HashMap<i64, SubId>, i: i64| if i >= b { r_star } else { vals[&i] };
        for i in (a..b).rev() {
            let v = step(u.at(i), get(&vals, i + s));
            vals.insert(i, v);
        }
        let budget = s * (self.sub_count() as i64 + 2);
        let mut i = a - 1;
        loop {
            let v = step(u.left, get(&vals, i + s));
            vals.insert(i, v);
            let last: Vec<SubId> = (i..i + s).map(|j| get(&vals, j)).collect();
            if last.iter().all(|&x| x == v) && step(u.left, v) == v {
                let window = (i..b).map(|j| get(&vals, j)).collect();
                return Some(Profile::new(v, r_star, i, window));
            }
            if a - i > budget {
                return None;
            }
            i -= 1;
        }
    }

    /// `U₊ = ⋂ U_n`, exact.
    pub fn plus_group(&self, u: &Profile) -> Result<Profile> {
        self.recursion_limit(u, &self.img, self.shift)
            .ok_or_else(|| TdlcError::Unresolved("periodic tail in the U+ recursion".into()))
    }

    /// `U₋ = ⋂ U₋ₙ`, exact.
    pub fn minus_group(&self, u: &Profile) -> Result<Profile> {
        self.recursion_limit(u, &self.pre, -self.shift)
            .ok_or_else(|| TdlcError::Unresolved("periodic tail in the U- recursion".into()))
    }

    /// The limit of `α_n = [U₋ₙ : U₋ₙ₋₁]` from the closed form of the moving
    /// front, with the index from which `α_n` is certified constant.
    pub fn alpha_limit(&self, u: &Profile) -> Result<(IndexValue, usize, String)> {
        if self.shift == 0 {
            let mut cur = u.clone();
            for n in 0..=self.sub_count() * (u.window.len() + 2) {
                let next = self.intersect(u, &self.preimage(&cur));
                if next == cur {
                    return Ok((IndexValue::one(), n, format!("fixpoint of U-n at n={n}")));
                }
                cur = next;
            }
            return Err(TdlcError::Unresolved("no fixpoint for unshifted cotrajectory".into()));
        }
        let (u, k) = if self.shift > 0 { (u.clone(), self.shift) } else { (u.reflect(), -self.shift) };
        let (l, r) = (u.left, u.right);
        let g = |x: SubId| self.meet[r][self.pre[x]];
        if self.meet[l][self.pre[l]] != l || g(r) != r {
            return Err(TdlcError::Unresolved("cotrajectory tails are not stable".into()));
        }
        let (a, b) = (u.offset, u.end());
        let n0 = if a == b { 0 } else { ((b - 1 - a) / k + 1) as usize };
        let reflected = self.shift < 0;
        let front = {
            let mut cur = u.clone();
            for _ in 0..n0 {
                let pre = cur.remap(|x| self.pre[x], -k);
                cur = u.zip(&pre, |x, y| self.meet[x][y]);
            }
            cur
        };
        let extent = front.end().max(b) - b;
        let mut pairs: Vec<(SubId, SubId)> = Vec::new();
        for uu in 0..k {
            let mut mm = 0;
            loop {
                let t = uu + mm * k;
                let x = front.at(b + t);
                let y = g(front.at(b + t - k));
                if t >= extent + k && x == r && y == r {
                    break;
                }
                pairs.push((x, y));
                mm += 1;
            }
        }
        let alpha_of = |state: &[(SubId, SubId)]| -> Result<IndexValue> {
            let mut acc = IndexValue::one();
            for &(x, y) in state {
                if !self.leq[y][x] {
                    return Err(TdlcError::InvariantViolation("front coordinates not nested".into()));
                }
                acc = acc * IndexValue::finite((self.sizes[x] / self.sizes[y]) as u64)?;
            }
            Ok(acc)
        };
        let mut seen: HashMap<Vec<(SubId, SubId)>, usize> = HashMap::new();
        let mut state = pairs;
        let mut history: Vec<IndexValue> = Vec::new();
        for e in 0.. {
            if let Some(&start) = seen.get(&state) {
                let cycle = &history[start..];
                if cycle.iter().any(|v| v != &cycle[0]) {
                    return Err(TdlcError::InvariantViolation("alpha is periodic but not constant".into()));
                }
                let why = format!(
                    "front recursion cycles from step {} (period {}){}",
                    n0 + start,
                    e - start,
                    if reflected { ", reflected" } else { "" }
                );
                return Ok((cycle[0].clone(), n0 + start, why));
            }
            seen.insert(state.clone(), e);
            history.push(alpha_of(&state)?);
            state = state.iter().map(|&(x, y)| (g(x), g(y))).collect();
        }
        unreachable!()
    }

    /// Closedness of `U₊₊ = ⋃ φⁿU₊` from the tails of `U₊`.
    pub fn tidy_below_tails(&self, uplus: &Profile) -> TailVerdict {
        if self.shift == 0 {
            return TailVerdict::Closed("unshifted: the union stabilizes coordinatewise".into());
        }
        let grow = |s: SubId| {
            let mut x = s;
            loop {
                let y = self.img[x];
                if y == x {
                    return x;
                }
                if !self.leq[x][y] {
                    return usize::MAX;
                }
                x = y;
            }
        };
        let (l, r) = (grow(uplus.left), grow(uplus.right));
        if l == usize::MAX || r == usize::MAX {
            return TailVerdict::Unknown("U+ is not contained in its image".into());
        }
        let downstream = if self.shift > 0 { self.mode.left() } else { self.mode.right() };
        if downstream == Direction::Restricted {
            TailVerdict::Closed("the union exhausts a restricted tail".into())
        } else if l == r {
            TailVerdict::Closed(format!("limit tails agree (order {})", self.sizes[l]))
        } else {
            TailVerdict::NotClosed(format!(
                "limit tails differ (orders {} and {}): the union is dense in a larger group",
                self.sizes[l], self.sizes[r]
            ))
        }
    }

    /// Whether `H_top` is provably constant along the base.
    pub fn base_saturation(&self) -> Option<String> {
        match self.mode {
            TailMode::Laurent => Some("base elements are translates; translation commutes with phi".into()),
            TailMode::Discrete => Some("the base is constant".into()),
            TailMode::Compact if self.shift == 0 => {
                Some("unshifted: every base element is phi-inverse invariant, so each value is 0".into())
            }
            TailMode::Compact if self.shift.abs() == 1 && self.is_injective() => {
                Some("base elements are images of cotrajectories of the first one under an automorphism".into())
            }
            TailMode::Compact => None,
        }
    }

    /// `τ_j`: `(τ_j V)_i = V_{i+j}`.
    pub fn translate(&self, p: &Profile, j: i64) -> Profile {
        p.remap(|s| s, j)
    }

    /// `⋂_{j ∈ Z} τ_j W`.
    pub fn translate_meet(&self, p: &Profile) -> Profile {
        let m = p.values().fold(self.full, |acc, s| self.meet[acc][s]);
        Profile::constant(m)
    }

    pub fn is_invariant_constant(&self, s: SubId) -> bool {
        self.leq[self.img[s]][s]
    }

    /// The system on `S^Z` for a σ-invariant subgroup `S ≤ F`.
    pub fn restrict_alphabet(&self, s: SubId) -> Result<ShiftSystem> {
        if !self.is_invariant_constant(s) {
            return Err(TdlcError::Invalid("subgroup is not phi-invariant".into()));
        }
        let set = self.alphabet.subgroups()[s].clone();
        let (sub, embed) = self.alphabet.subgroup_as_group(&set)?;
        let pos: HashMap<u32, u32> = embed.iter().enumerate().map(|(i, &e)| (e, i as u32)).collect();
        let sigma = embed.iter().map(|&e| pos[&self.sigma[e as usize]]).collect();
        ShiftSystem::new(Arc::new(sub), format!("{}|{}", self.label, embed.len()), self.mode, self.shift, sigma)
    }

    /// The system on `(F/S)^Z` for a σ-invariant `S ≤ F`, with the coset map.
    pub fn quotient_alphabet(&self, s: SubId) -> Result<(ShiftSystem, Vec<u32>)> {
        if !self.is_invariant_constant(s) {
            return Err(TdlcError::Invalid("subgroup is not phi-invariant".into()));
        }
        let set = self.alphabet.subgroups()[s].clone();
        let (quot, coset) = self.alphabet.quotient(&set)?;
        let mut reps = vec![u32::MAX; quot.order()];
        for g in self.alphabet.elements() {
            let c = coset[g as usize] as usize;
            if reps[c] == u32::MAX {
                reps[c] = g;
            }
        }
        let sigma = reps.iter().map(|&r| coset[self.sigma[r as usize] as usize]).collect();
        let sys = ShiftSystem::new(Arc::new(quot), format!("{}/{}", self.label, set.len()), self.mode, self.shift, sigma)?;
        Ok((sys, coset))
    }

    /// Push a profile of this system through an alphabet homomorphism.
    pub fn push_profile(&self, target: &ShiftSystem, map: &[u32], p: &Profile) -> Profile {
        let n = target.alphabet.order();
        let f = |s: SubId| {
            let set = ElemSet::from_iter(n, self.alphabet.subgroups()[s].iter().map(|x| map[x as usize]));
            target.sub_id(&set).expect("image of a subgroup is a subgroup")
        };
        p.remap(f, 0)
    }

    /// Pull a profile of `S^Z` back into this system through the embedding.
    pub fn embed_profile(&self, source: &ShiftSystem, embed: &[u32], p: &Profile) -> Profile {
        source.push_profile(self, embed, p)
    }

    pub fn describe(&self, p: &Profile) -> String {
        let w: Vec<String> = p.window.iter().map(|&s| self.sizes[s].to_string()).collect();
        format!("|{}| ..{}[{}]{}.. |{}|", self.sizes[p.left], p.offset, w.join(","), p.end(), self.sizes[p.right])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2_shift(mode: TailMode) -> ShiftSystem {
        let f = Arc::new(FiniteGroup::cyclic(2).unwrap());
        let sigma = ShiftSystem::identity_sigma(&f);
        ShiftSystem::new(f, "Z/2", mode, 1, sigma).unwrap()
    }

    fn trivial_at(sys: &ShiftSystem, i: i64) -> Profile {
        sys.window_profile(i, i, sys.trivial_sub())
    }

    #[test]
    fn intersection_of_profiles() {
        let s = z2_shift(TailMode::Compact);
        let got = s.intersect(&trivial_at(&s, 0), &trivial_at(&s, 1));
        assert_eq!(got, s.window_profile(0, 1, s.trivial_sub()));
    }

    #[test]
    fn image_and_preimage_under_left_shift() {
        let s = z2_shift(TailMode::Compact);
        assert_eq!(s.image(&trivial_at(&s, 0)), trivial_at(&s, -1));
        assert_eq!(s.preimage(&trivial_at(&s, 0)), trivial_at(&s, 1));
    }

    #[test]
    fn index_and_canonical_form() {
        let s = z2_shift(TailMode::Compact);
        let u = s.window_profile(0, 1, s.trivial_sub());
        assert_eq!(s.index(&u, &s.whole()).unwrap(), IndexValue::finite(4u32).unwrap());
        assert_eq!(s.window_profile(3, 2, s.trivial_sub()), s.whole());
        let mixed = Profile::new(s.full(), s.full(), -2, vec![s.full(), s.trivial_sub(), s.full()]);
        assert_eq!(mixed, trivial_at(&s, -1));
    }

    #[test]
    fn plus_and_minus_groups() {
        let s = z2_shift(TailMode::Compact);
        let u = trivial_at(&s, 0);
        let plus = s.plus_group(&u).unwrap();
        assert_eq!(plus, Profile::new(s.trivial_sub(), s.full(), 1, vec![]));
        let minus = s.minus_group(&u).unwrap();
        assert_eq!(minus, Profile::new(s.full(), s.trivial_sub(), 0, vec![]));
        assert_eq!(s.set_product(&plus, &minus), u);
    }

    #[test]
    fn alpha_limit_of_running_example() {
        let s = z2_shift(TailMode::Compact);
        let (a, n, _) = s.alpha_limit(&trivial_at(&s, 0)).unwrap();
        assert_eq!(a, IndexValue::finite(2u32).unwrap());
        assert!(n <= 1);
        let l = z2_shift(TailMode::Laurent);
        let (a, _, _) = l.alpha_limit(&l.base(0)).unwrap();
        assert_eq!(a, IndexValue::finite(2u32).unwrap());
    }

    #[test]
    fn tail_verdicts() {
        let s = z2_shift(TailMode::Compact);
        let plus = s.plus_group(&trivial_at(&s, 0)).unwrap();
        assert!(matches!(s.tidy_below_tails(&plus), TailVerdict::NotClosed(_)));
        let l = z2_shift(TailMode::Laurent);
        let plus = l.plus_group(&l.base(0)).unwrap();
        assert!(matches!(l.tidy_below_tails(&plus), TailVerdict::Closed(_)));
    }

    #[test]
    fn reflection_is_an_involution() {
        let p = Profile::new(0, 1, -3, vec![1, 0, 0]);
        assert_eq!(p.reflect().reflect(), p);
        for i in -6..6 {
            assert_eq!(p.reflect().at(-i), p.at(i));
        }
    }
}
