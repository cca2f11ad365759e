//! Cotrajectories `U₋ₙ`, the forward sequence `Uₙ`, the groups `U₊` and `U₋`,
//! the index sequences `cₙ`, `αₙ`, and the tidiness predicates.

use crate::backends::identities::IdentityCount;
use crate::backends::shift::TailVerdict;
use crate::error::{Result, TdlcError};
use crate::kernel::{entropy_from_index, ExactEntropy, IndexValue};
use crate::system::{Handle, System};

fn require_compact_open(sys: &System, u: &Handle) -> Result<()> {
    if !sys.is_compact(u)? || !sys.is_open(u)? {
        return Err(TdlcError::Invalid("expected a compact open subgroup".into()));
    }
    Ok(())
}

/// `U₋ₙ = U ∩ φ⁻¹U ∩ … ∩ φ⁻ⁿU` for n = 0..=n_max.
pub fn minus_chain(sys: &System, u: &Handle, n_max: usize) -> Result<Vec<Handle>> {
    let mut out = vec![u.clone()];
    let mut pre = u.clone();
    for _ in 0..n_max {
        pre = sys.preimage(&pre)?;
        let next = sys.intersect(out.last().unwrap(), &pre)?;
        out.push(next);
    }
    Ok(out)
}

/// `U₀ = U`, `Uₙ₊₁ = U ∩ φUₙ` for n = 0..=n_max.
pub fn plus_chain(sys: &System, u: &Handle, n_max: usize) -> Result<Vec<Handle>> {
    let mut out = vec![u.clone()];
    for _ in 0..n_max {
        let next = sys.intersect(u, &sys.image(out.last().unwrap())?)?;
        out.push(next);
    }
    Ok(out)
}

pub fn minus_n(sys: &System, u: &Handle, n: usize) -> Result<Handle> {
    require_compact_open(sys, u)?;
    Ok(minus_chain(sys, u, n)?.pop().unwrap())
}

pub fn plus_n(sys: &System, u: &Handle, n: usize) -> Result<Handle> {
    require_compact_open(sys, u)?;
    Ok(plus_chain(sys, u, n)?.pop().unwrap())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CotrajectoryRow {
    pub n: usize,
    pub minus: Handle,
    pub plus: Handle,
    /// `[U : U₋ₙ]`
    pub c: IndexValue,
    /// `[U₋ₙ : U₋ₙ₋₁]`
    pub alpha: IndexValue,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CotrajectoryTable {
    pub base: Handle,
    pub rows: Vec<CotrajectoryRow>,
    /// First n from which `αₙ` is certified constant.
    pub stabilization: Option<usize>,
    pub limit: Option<IndexValue>,
    pub certificate: String,
}

impl CotrajectoryTable {
    pub fn stabilized_alpha(&self) -> Option<&IndexValue> {
        self.stabilization.map(|n| &self.rows[n].alpha)
    }
}

pub fn alpha_sequence(sys: &System, u: &Handle, n_max: usize) -> Result<CotrajectoryTable> {
    require_compact_open(sys, u)?;
    if n_max == 0 {
        return Err(TdlcError::Invalid("n_max must be at least 1".into()));
    }
    let minus = minus_chain(sys, u, n_max + 1)?;
    let plus = plus_chain(sys, u, n_max)?;
    let mut rows: Vec<CotrajectoryRow> = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let c = sys.index(&minus[n], u)?;
        let alpha = sys.index(&minus[n + 1], &minus[n])?;
        if let Some(prev) = rows.last() {
            if prev.c.clone() * prev.alpha.clone() != c {
                return Err(TdlcError::InvariantViolation(format!("c_{n} is not c_{} * alpha_{}", n - 1, n - 1)));
            }
            if alpha > prev.alpha {
                return Err(TdlcError::InvariantViolation(format!("alpha increases at n={n}")));
            }
        }
        rows.push(CotrajectoryRow { n, minus: minus[n].clone(), plus: plus[n].clone(), c, alpha });
    }
    let (stabilization, limit, certificate) = match sys.alpha_certificate(u) {
        Ok((lim, _, why)) => {
            if rows[n_max].alpha == lim {
                let first = rows.iter().position(|r| r.alpha == lim);
                (first, Some(lim), why)
            } else if rows[n_max].alpha < lim {
                return Err(TdlcError::InvariantViolation(format!(
                    "alpha_{n_max} = {} is below the certified limit {lim}",
                    rows[n_max].alpha
                )));
            } else {
                (None, Some(lim.clone()), format!("{why}; table has not reached {lim} by n={n_max}"))
            }
        }
        Err(e) if e.is_unresolved() => (None, None, e.to_string()),
        Err(e) => return Err(e),
    };
    Ok(CotrajectoryTable { base: u.clone(), rows, stabilization, limit, certificate })
}

/// `H_top(φ, U)` as the log of the certified stable value of `αₙ`.
pub fn htop_limit_estimate(sys: &System, u: &Handle, n_max: usize) -> Result<ExactEntropy> {
    let table = alpha_sequence(sys, u, n_max)?;
    match table.stabilized_alpha() {
        Some(a) => Ok(entropy_from_index(a)),
        None => Err(TdlcError::Unresolved(format!("alpha not certified stable: {}", table.certificate))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlusMethod {
    Fixpoint,
    Structural,
}

impl PlusMethod {
    pub fn name(self) -> &'static str {
        match self {
            PlusMethod::Fixpoint => "fixpoint",
            PlusMethod::Structural => "structural",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlusGroupResult {
    pub handle: Handle,
    pub method: PlusMethod,
    pub steps: usize,
    pub certificate: String,
}

/// `U₊ = ⋂ Uₙ`, by fixpoint when the iteration stabilizes within `probe`
/// steps and from the backend's structural description otherwise.
pub fn plus_group(sys: &System, u: &Handle, probe: usize) -> Result<PlusGroupResult> {
    require_compact_open(sys, u)?;
    let mut cur = u.clone();
    let mut found = None;
    for n in 0..=probe {
        let next = sys.intersect(u, &sys.image(&cur)?)?;
        if next == cur {
            found = Some(PlusGroupResult {
                handle: cur.clone(),
                method: PlusMethod::Fixpoint,
                steps: n,
                certificate: format!("U_{} = U_{n}", n + 1),
            });
            break;
        }
        cur = next;
    }
    let res = match found {
        Some(r) => r,
        None => {
            let (handle, certificate) = sys.plus_structural(u, probe)?;
            PlusGroupResult { handle, method: PlusMethod::Structural, steps: probe, certificate }
        }
    };
    let image = sys.image(&res.handle)?;
    if !sys.contains(u, &res.handle)? || sys.intersect(u, &image)? != res.handle {
        return Err(TdlcError::InvariantViolation("U+ is not U ∩ φU+".into()));
    }
    if !sys.index(&res.handle, &image)?.is_finite() {
        return Err(TdlcError::InvariantViolation("[φU+ : U+] is infinite".into()));
    }
    Ok(res)
}

/// `U₋ = ⋂ φ⁻ⁿU`.
pub fn minus_group(sys: &System, u: &Handle, probe: usize) -> Result<Handle> {
    require_compact_open(sys, u)?;
    let mut cur = u.clone();
    for _ in 0..=probe {
        let next = sys.intersect(u, &sys.preimage(&cur)?)?;
        if next == cur {
            return Ok(cur);
        }
        cur = next;
    }
    let (h, _) = sys.minus_structural(u, probe)?;
    let pre = sys.preimage(&h)?;
    if !sys.contains(u, &h)? || sys.intersect(u, &pre)? != h {
        return Err(TdlcError::InvariantViolation("U- is not U ∩ φ⁻¹U-".into()));
    }
    Ok(h)
}

/// `log [φU₊ : U₊]`, with no limit taken.
pub fn htop_local(sys: &System, u: &Handle, probe: usize) -> Result<ExactEntropy> {
    let plus = plus_group(sys, u, probe)?;
    let image = sys.image(&plus.handle)?;
    Ok(entropy_from_index(&sys.index(&plus.handle, &image)?))
}

/// `[φU : U ∩ φU]`.
pub fn displacement(sys: &System, u: &Handle) -> Result<IndexValue> {
    let image = sys.image(u)?;
    sys.index(&sys.intersect(u, &image)?, &image)
}

pub fn is_tidy_above(sys: &System, u: &Handle, probe: usize) -> Result<bool> {
    if !sys.capabilities().set_product {
        return Err(TdlcError::Unsupported("set_product".into()));
    }
    let plus = plus_group(sys, u, probe)?.handle;
    let minus = minus_group(sys, u, probe)?;
    Ok(sys.set_product(&plus, &minus)? == *u)
}

/// The first `U₋ₙ`, n ≤ probe, that is tidy above, with its n.
pub fn tidy_above_transform(sys: &System, u: &Handle, probe: usize) -> Result<(Handle, usize)> {
    let chain = minus_chain(sys, u, probe)?;
    for (n, m) in chain.into_iter().enumerate() {
        if is_tidy_above(sys, &m, probe)? {
            return Ok((m, n));
        }
    }
    Err(TdlcError::Unresolved(format!("no tidy-above U_-n for n <= {probe}")))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TidyBelow {
    pub holds: bool,
    /// Decided through minimality instead of a closedness certificate.
    pub indirect: bool,
    pub certificate: String,
}

/// Tidiness below: `[φⁿ⁺¹U₊ : φⁿU₊]` constant on `0..probe` and `⋃ φⁿU₊`
/// closed. Without a closedness verdict, falls back on minimality against a
/// known scale.
pub fn is_tidy_below(sys: &System, u: &Handle, probe: usize, scale: Option<&IndexValue>) -> Result<TidyBelow> {
    let plus = plus_group(sys, u, probe)?.handle;
    let mut cur = plus.clone();
    let mut first: Option<IndexValue> = None;
    let mut constant = true;
    for _ in 0..probe {
        let next = sys.image(&cur)?;
        let idx = sys.index(&cur, &next)?;
        match &first {
            None => first = Some(idx),
            Some(f) if *f != idx => {
                constant = false;
                break;
            }
            _ => {}
        }
        cur = next;
    }
    if !constant {
        return Ok(TidyBelow { holds: false, indirect: false, certificate: "index sequence not constant".into() });
    }
    let verdict = if sys.capabilities().tidy_below_certificate {
        sys.tidy_below_tails(&plus, probe)?
    } else {
        TailVerdict::Unknown("no closedness certificate".into())
    };
    match verdict {
        TailVerdict::Closed(why) => Ok(TidyBelow { holds: true, indirect: false, certificate: why }),
        TailVerdict::NotClosed(why) => Ok(TidyBelow { holds: false, indirect: false, certificate: why }),
        TailVerdict::Unknown(why) => {
            let Some(s) = scale else {
                return Err(TdlcError::Unresolved(format!("tidy below undecided: {why}")));
            };
            let minimizing = displacement(sys, u)? == *s;
            if minimizing {
                return Ok(TidyBelow { holds: true, indirect: true, certificate: "minimizing implies tidy".into() });
            }
            if is_tidy_above(sys, u, probe)? {
                return Ok(TidyBelow {
                    holds: false,
                    indirect: true,
                    certificate: "tidy above but not minimizing".into(),
                });
            }
            Err(TdlcError::Unresolved(format!("tidy below undecided: {why}")))
        }
    }
}

pub fn is_minimizing(sys: &System, u: &Handle, scale: &IndexValue) -> Result<bool> {
    Ok(displacement(sys, u)? == *scale)
}

/// Whether minimality agrees with tidiness (above and below) at `u`.
pub fn minimizing_matches_tidy(sys: &System, u: &Handle, scale: &IndexValue, probe: usize) -> Result<bool> {
    let minimizing = is_minimizing(sys, u, scale)?;
    let below = is_tidy_below(sys, u, probe, None)?;
    let tidy = is_tidy_above(sys, u, probe)? && below.holds;
    Ok(minimizing == tidy)
}

/// Counts for the cotrajectory identities over n ≤ n_max.
pub fn check_cotrajectory_identities(sys: &System, u: &Handle, n_max: usize) -> Result<Vec<IdentityCount>> {
    let minus = minus_chain(sys, u, n_max + 1)?;
    let plus = plus_chain(sys, u, n_max + 1)?;
    let mut counts = [
        IdentityCount::named("willis1-plus-is-image"),
        IdentityCount::named("willis3-plus-fixed"),
        IdentityCount::named("willis4-image-of-minus"),
        IdentityCount::named("magia2-alpha"),
        IdentityCount::named("alpha-non-increasing"),
        IdentityCount::named("c-divides"),
    ];
    // images[k][n] = φᵏU₋ₙ
    let mut images: Vec<Vec<Handle>> = vec![minus[..=n_max].to_vec()];
    for k in 1..=n_max {
        let row: Vec<Handle> = images[k - 1].iter().map(|h| sys.image(h)).collect::<Result<_>>()?;
        images.push(row);
    }
    for n in 0..=n_max {
        counts[0].record(images[n][n] == plus[n]);
        for k in 0..=n {
            let expect = sys.intersect(&plus[k], &minus[n - k])?;
            counts[2].record(images[k][n] == expect);
        }
        let phi_un = sys.image(&plus[n])?;
        let alpha = sys.index(&minus[n + 1], &minus[n])?;
        counts[3].record(sys.index(&plus[n + 1], &phi_un)? == alpha);
        let c = sys.index(&minus[n], u)?;
        let c1 = sys.index(&minus[n + 1], u)?;
        counts[5].record(c.divides(&c1));
        if n > 0 {
            let prev = sys.index(&minus[n], &minus[n - 1])?;
            counts[4].record(alpha <= prev);
        }
    }
    match plus_group(sys, u, n_max) {
        Ok(p) => {
            let image = sys.image(&p.handle)?;
            counts[1].record(sys.intersect(u, &image)? == p.handle && sys.contains(&image, &p.handle)?);
        }
        Err(e) if e.is_unresolved() => {}
        Err(e) => return Err(e),
    }
    Ok(counts.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backends::finite::{FiniteGroup, FiniteSystem};
    use crate::backends::linalg::{q, Q};
    use crate::backends::padic::PadicSystem;
    use crate::backends::shift::{Profile, ShiftSystem, TailMode};
    use std::sync::Arc;

    fn padic(p: u64, rows: Vec<Vec<Q>>) -> System {
        System::Padic(PadicSystem::new(p, rows).unwrap())
    }

    fn half() -> Q {
        Q::new(1.into(), 2.into())
    }

    fn shift(n: u32, mode: TailMode) -> System {
        let f = Arc::new(FiniteGroup::cyclic(n).unwrap());
        let sigma = ShiftSystem::identity_sigma(&f);
        System::Shift(ShiftSystem::new(f, format!("Z/{n}"), mode, 1, sigma).unwrap())
    }

    fn trivial_at_zero(sys: &System) -> Handle {
        let System::Shift(s) = sys else { unreachable!() };
        Handle::Shift(Profile::new(s.full(), s.full(), 0, vec![s.trivial_sub()]))
    }

    #[test]
    fn q2_half_tables() {
        let s = padic(2, vec![vec![half()]]);
        let u = s.base_family(0);
        assert_eq!(minus_n(&s, &u, 3).unwrap(), s.base_family(3));
        assert_eq!(plus_n(&s, &u, 5).unwrap(), u);
        let t = alpha_sequence(&s, &u, 8).unwrap();
        for r in &t.rows {
            assert_eq!(r.c, IndexValue::power(2, r.n as u64));
            assert_eq!(r.alpha, IndexValue::power(2, 1));
        }
        assert_eq!(t.stabilization, Some(0));
        assert_eq!(htop_local(&s, &u, 16).unwrap(), ExactEntropy::log_of(2u32).unwrap());
        assert_eq!(htop_limit_estimate(&s, &u, 8).unwrap(), ExactEntropy::log_of(2u32).unwrap());
        let plus = plus_group(&s, &u, 16).unwrap();
        assert_eq!((plus.handle, plus.method, plus.steps), (u.clone(), PlusMethod::Fixpoint, 0));
        assert_eq!(minus_group(&s, &u, 16).unwrap(), s.trivial_handle());
        assert!(is_tidy_above(&s, &u, 16).unwrap());
        assert!(is_tidy_below(&s, &u, 16, None).unwrap().holds);
        assert_eq!(tidy_above_transform(&s, &u, 16).unwrap(), (u, 0));
    }

    #[test]
    fn q2_double_plus_chain() {
        let s = padic(2, vec![vec![q(2)]]);
        let u = s.base_family(0);
        for n in 0..6 {
            assert_eq!(plus_n(&s, &u, n).unwrap(), s.base_family(n));
        }
    }

    #[test]
    fn mixed_diagonal_is_tidy_above() {
        let s = padic(2, vec![vec![q(2), q(0)], vec![q(0), half()]]);
        let u = s.base_family(0);
        let plus = plus_group(&s, &u, 16).unwrap();
        assert_eq!(plus.method, PlusMethod::Structural);
        assert!(is_tidy_above(&s, &u, 16).unwrap());
        assert_eq!(htop_local(&s, &u, 16).unwrap(), ExactEntropy::log_of(2u32).unwrap());
        assert_eq!(htop_limit_estimate(&s, &u, 16).unwrap(), ExactEntropy::log_of(2u32).unwrap());
    }

    #[test]
    fn z2_shift_running_example() {
        let s = shift(2, TailMode::Compact);
        let System::Shift(sh) = &s else { unreachable!() };
        let u = trivial_at_zero(&s);
        let m2 = Profile::new(sh.full(), sh.full(), 0, vec![sh.trivial_sub(); 3]);
        assert_eq!(minus_n(&s, &u, 2).unwrap(), Handle::Shift(m2));
        let t = alpha_sequence(&s, &u, 8).unwrap();
        assert!(t.rows.iter().all(|r| r.alpha == IndexValue::power(2, 1)));
        assert_eq!(t.stabilization, Some(0));
        let plus = plus_group(&s, &u, 8).unwrap();
        assert_eq!(plus.method, PlusMethod::Structural);
        assert_eq!(plus.handle, Handle::Shift(Profile::new(sh.trivial_sub(), sh.full(), 1, vec![])));
        assert_eq!(minus_group(&s, &u, 8).unwrap(), Handle::Shift(Profile::new(sh.full(), sh.trivial_sub(), 0, vec![])));
        assert!(is_tidy_above(&s, &u, 8).unwrap());
        assert!(!is_tidy_below(&s, &u, 8, None).unwrap().holds);
        assert!(!is_minimizing(&s, &u, &IndexValue::one()).unwrap());
        assert_eq!(htop_local(&s, &u, 8).unwrap(), ExactEntropy::log_of(2u32).unwrap());
    }

    #[test]
    fn z4_shift_limit_estimate() {
        let s = shift(4, TailMode::Compact);
        let u = trivial_at_zero(&s);
        assert_eq!(htop_limit_estimate(&s, &u, 8).unwrap(), ExactEntropy::log_of(4u32).unwrap());
    }

    #[test]
    fn finite_and_identity_cases() {
        let g = Arc::new(FiniteGroup::symmetric3());
        let s = System::Finite(FiniteSystem::identity(g.clone()));
        for h in g.subgroups() {
            let u = Handle::Finite(h.clone());
            assert_eq!(htop_local(&s, &u, 8).unwrap(), ExactEntropy::zero());
            assert_eq!(htop_limit_estimate(&s, &u, 8).unwrap(), ExactEntropy::zero());
            assert!(is_tidy_above(&s, &u, 8).unwrap());
            assert!(is_tidy_below(&s, &u, 8, None).unwrap().holds);
            assert!(is_minimizing(&s, &u, &IndexValue::one()).unwrap());
        }
    }

    #[test]
    fn identity_counts_are_clean() {
        let systems = [padic(2, vec![vec![half()]]), shift(2, TailMode::Compact), shift(3, TailMode::Laurent)];
        for s in &systems {
            let u = match s {
                System::Shift(sh) if sh.mode == TailMode::Compact => trivial_at_zero(s),
                _ => s.base_family(0),
            };
            for c in check_cotrajectory_identities(s, &u, 6).unwrap() {
                assert!(c.checked > 0, "{}", c.name);
                assert_eq!(c.violations, 0, "{}", c.name);
            }
        }
    }
}
