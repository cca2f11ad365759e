//! Global quantities: topological entropy, the scale, the nub, and checkers for
//! the addition theorem and the link between scale and entropy.

use crate::cotrajectory::{self, displacement, htop_local, is_tidy_above, is_tidy_below, plus_group};
use crate::error::{Result, TdlcError};
use crate::kernel::{entropy_add, entropy_from_index, ExactEntropy, IndexValue};
use crate::system::{ClosedSubgroupSpec, Handle, System};

/// Resource bounds shared by the computations below.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Probe {
    /// Length of cotrajectory tables.
    pub n_max: usize,
    /// Steps used by the tidy-below index check and the U₊ fixpoint search.
    pub tidy: usize,
    /// Number of base elements examined.
    pub base: usize,
    /// Translate range and family size for nub and scale candidates.
    pub resolution: usize,
}

impl Default for Probe {
    fn default() -> Self {
        Probe { n_max: 64, tidy: 16, base: 4, resolution: 3 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Outcome {
    Pass,
    Fail,
    Skipped,
    Inconclusive,
}

impl Outcome {
    pub fn name(self) -> &'static str {
        match self {
            Outcome::Pass => "PASS",
            Outcome::Fail => "FAIL",
            Outcome::Skipped => "SKIPPED",
            Outcome::Inconclusive => "INCONCLUSIVE",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntropyEntry {
    pub k: usize,
    pub handle: Handle,
    /// `Err` holds the reason the element was excluded.
    pub value: std::result::Result<ExactEntropy, String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntropyReport {
    pub value: ExactEntropy,
    pub achieved_at: Handle,
    pub probed: usize,
    /// The value is the supremum, not only a lower bound.
    pub saturated: bool,
    pub saturation: String,
    pub table: Vec<EntropyEntry>,
}

pub fn topological_entropy(sys: &System, probe: &Probe) -> Result<EntropyReport> {
    let mut table = Vec::new();
    let mut best: Option<(ExactEntropy, Handle)> = None;
    let mut excluded = 0;
    for k in 0..probe.base.max(1) {
        let handle = sys.base_family(k);
        let value = match htop_local(sys, &handle, probe.tidy) {
            Ok(v) => Ok(v),
            Err(e) if e.is_unresolved() => {
                excluded += 1;
                Err(e.to_string())
            }
            Err(e) => return Err(e),
        };
        if let Ok(v) = &value {
            if best.as_ref().is_none_or(|(b, _)| v > b) {
                best = Some((v.clone(), handle.clone()));
            }
        }
        table.push(EntropyEntry { k, handle, value });
    }
    let resolved: Vec<&ExactEntropy> = table.iter().filter_map(|e| e.value.as_ref().ok()).collect();
    if resolved.windows(2).any(|w| w[1] < w[0]) {
        return Err(TdlcError::InvariantViolation("H_top decreases along the shrinking base".into()));
    }
    let Some((value, achieved_at)) = best else {
        return Err(TdlcError::Unresolved("no base element resolved".into()));
    };
    let (saturated, saturation) = match sys.base_saturation() {
        Some(why) if excluded == 0 => (true, why),
        Some(_) => (false, format!("{excluded} base elements unresolved")),
        None => (false, "no eventual-constancy certificate for this base".into()),
    };
    Ok(EntropyReport { value, achieved_at, probed: table.len(), saturated, saturation, table })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaleReport {
    pub value: IndexValue,
    pub witness: Handle,
    pub candidates: usize,
    pub oracle: Option<IndexValue>,
    pub witness_tidy_above: Option<bool>,
    pub witness_tidy_below: Option<bool>,
    pub certified: bool,
    pub certificate: String,
}

impl ScaleReport {
    pub fn oracle_agrees(&self) -> Option<bool> {
        self.oracle.as_ref().map(|o| *o == self.value)
    }
}

/// Compact open candidates for the scale minimum, deduplicated in order.
pub fn scale_candidates(sys: &System, probe: &Probe) -> Result<Vec<Handle>> {
    let mut out: Vec<Handle> = Vec::new();
    let push = |h: Handle, out: &mut Vec<Handle>| {
        if !out.contains(&h) {
            out.push(h);
        }
    };
    for k in 0..probe.base.max(1) {
        let b = sys.base_family(k);
        push(b.clone(), &mut out);
        match cotrajectory::tidy_above_transform(sys, &b, probe.tidy) {
            Ok((t, _)) => push(t, &mut out),
            Err(e) if e.is_unresolved() => {}
            Err(e) => return Err(e),
        }
    }
    for h in sys.extra_scale_candidates(probe.resolution) {
        if sys.is_compact(&h)? && sys.is_open(&h)? {
            push(h, &mut out);
        }
    }
    Ok(out)
}

pub fn scale(sys: &System, probe: &Probe) -> Result<ScaleReport> {
    let candidates = scale_candidates(sys, probe)?;
    let mut best: Option<(IndexValue, Handle)> = None;
    for u in &candidates {
        let d = displacement(sys, u)?;
        if best.as_ref().is_none_or(|(b, _)| d < *b) {
            best = Some((d.clone(), u.clone()));
        }
        // at a tidy-above U the displacement is [φU₊ : U₊]
        if matches!(is_tidy_above(sys, u, probe.tidy), Ok(true)) {
            let plus = plus_group(sys, u, probe.tidy)?.handle;
            if sys.index(&plus, &sys.image(&plus)?)? != d {
                return Err(TdlcError::InvariantViolation("[φU+ : U+] differs from [φU : U ∩ φU]".into()));
            }
        }
    }
    let (value, witness) = best.ok_or_else(|| TdlcError::Unresolved("no scale candidates".into()))?;
    let witness_tidy_above = is_tidy_above(sys, &witness, probe.tidy).ok();
    let witness_tidy_below = is_tidy_below(sys, &witness, probe.tidy, None).ok().map(|t| t.holds);
    let oracle = sys.scale_oracle();
    let tidy = witness_tidy_above == Some(true) && witness_tidy_below == Some(true);
    let agrees = oracle.as_ref().map(|o| *o == value);
    let (certified, certificate) = if tidy {
        (true, "witness is tidy".to_string())
    } else if agrees == Some(true) {
        (true, "agrees with the spectral prediction".to_string())
    } else if value == IndexValue::one() {
        (true, "minimum possible value".to_string())
    } else {
        (false, "minimum over the probed candidates only".to_string())
    };
    if agrees == Some(false) && tidy {
        return Err(TdlcError::InvariantViolation(format!(
            "tidy witness gives {value} but the spectral prediction is {}",
            oracle.as_ref().unwrap()
        )));
    }
    Ok(ScaleReport {
        value,
        witness,
        candidates: candidates.len(),
        oracle,
        witness_tidy_above,
        witness_tidy_below,
        certified,
        certificate,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NubReport {
    pub handle: Handle,
    pub resolution: usize,
    /// Minimizing subgroups examined.
    pub family: usize,
    pub certified: bool,
    pub certificate: String,
}

pub fn nub(sys: &System, probe: &Probe) -> Result<NubReport> {
    if let System::Product(a, b) = sys {
        let (x, y) = (nub(a, probe)?, nub(b, probe)?);
        return Ok(NubReport {
            handle: Handle::pair(x.handle, y.handle),
            resolution: probe.resolution,
            family: x.family * y.family,
            certified: x.certified && y.certified,
            certificate: format!("{}; {}", x.certificate, y.certificate),
        });
    }
    let sc = scale(sys, probe)?;
    let s = &sc.value;
    let minimizing = |u: &Handle| -> Result<bool> { Ok(displacement(sys, u)? == *s) };
    let (handle, family, mut certified, mut certificate) = match sys {
        System::Finite(f) => {
            let mut acc = f.group.whole();
            let mut count = 0;
            for h in f.group.subgroups() {
                if minimizing(&Handle::Finite(h.clone()))? {
                    acc = acc.intersection(h);
                    count += 1;
                }
            }
            (Handle::Finite(acc), count, true, "all subgroups examined".to_string())
        }
        System::Padic(_) => {
            let Handle::Padic(w) = &sc.witness else { unreachable!() };
            let mut ok = true;
            for j in 0..=probe.resolution {
                ok &= minimizing(&Handle::Padic(w.scale(j as i64)))?;
            }
            let why = if ok {
                "p^j W minimizing for all j, and these shrink to 0".to_string()
            } else {
                "a multiple p^j W is not minimizing".to_string()
            };
            (sys.trivial_handle(), probe.resolution + 1, ok, why)
        }
        System::Shift(sh) => {
            let Handle::Shift(w) = &sc.witness else { unreachable!() };
            let r = probe.resolution as i64;
            let translates: Vec<_> = (-r..=r).map(|j| sh.translate(w, j)).collect();
            let mut family = translates.clone();
            for (i, a) in translates.iter().enumerate() {
                for b in &translates[i + 1..] {
                    let m = sh.intersect(a, b);
                    if !family.contains(&m) {
                        family.push(m);
                    }
                }
            }
            let mut ok = true;
            for p in &family {
                ok &= minimizing(&Handle::Shift(p.clone()))?;
            }
            let why = if ok {
                format!("translates of the witness within {r} and their meets are minimizing")
            } else {
                "a translate meet is not minimizing".to_string()
            };
            (Handle::Shift(sh.translate_meet(w)), family.len(), ok, why)
        }
        System::Product(..) => unreachable!(),
    };
    if !sc.certified {
        certified = false;
        certificate = format!("{certificate}; scale not certified");
    }
    let image = sys.image(&handle)?;
    if !sys.is_compact(&handle)? || image != handle {
        certified = false;
        certificate = format!("{certificate}; result is not compact and stable");
    }
    Ok(NubReport { handle, resolution: probe.resolution, family, certified, certificate })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdditionVerdict {
    pub outcome: Outcome,
    pub reason: String,
    pub total: Option<ExactEntropy>,
    pub restricted: Option<ExactEntropy>,
    pub quotient: Option<ExactEntropy>,
}

impl AdditionVerdict {
    fn early(outcome: Outcome, reason: impl Into<String>) -> Self {
        AdditionVerdict { outcome, reason: reason.into(), total: None, restricted: None, quotient: None }
    }
}

fn saturated_entropy(sys: &System, probe: &Probe) -> std::result::Result<ExactEntropy, String> {
    match topological_entropy(sys, probe) {
        Ok(r) if r.saturated => Ok(r.value),
        Ok(r) => Err(format!("entropy is only a lower bound: {}", r.saturation)),
        Err(e) => Err(e.to_string()),
    }
}

/// `h(φ̄)` for a compact non-normal `H` in a finite group, as the largest
/// `H_top(φ, K)` over subgroups `K ⊇ H`.
fn coset_entropy(sys: &System, h: &Handle, probe: &Probe) -> Result<ExactEntropy> {
    let System::Finite(f) = sys else {
        return Err(TdlcError::Unsupported("quotient by a non-normal subgroup".into()));
    };
    let Handle::Finite(hs) = h else { unreachable!() };
    let mut best = ExactEntropy::zero();
    for k in f.group.subgroups().iter().filter(|k| hs.is_subset(k)) {
        best = best.max(htop_local(sys, &Handle::Finite(k.clone()), probe.tidy)?);
    }
    Ok(best)
}

pub fn verify_addition_theorem(sys: &System, h: &ClosedSubgroupSpec, probe: &Probe) -> AdditionVerdict {
    let flags = h.flags;
    if !flags.stable {
        return AdditionVerdict::early(Outcome::Skipped, "H is not phi-stable");
    }
    if !flags.contains_kernel {
        return AdditionVerdict::early(Outcome::Skipped, "kernel of phi is not contained in H");
    }
    if !flags.normal && !flags.compact {
        return AdditionVerdict::early(Outcome::Skipped, "H is neither normal nor compact");
    }
    let total = saturated_entropy(sys, probe);
    let restricted = sys.restrict_system(h).map_err(|e| e.to_string()).and_then(|r| saturated_entropy(&r, probe));
    let quotient = if flags.normal {
        sys.quotient_system(h).map_err(|e| e.to_string()).and_then(|q| saturated_entropy(&q, probe))
    } else {
        coset_entropy(sys, &h.handle, probe).map_err(|e| e.to_string())
    };
    let mut v = AdditionVerdict {
        outcome: Outcome::Inconclusive,
        reason: String::new(),
        total: total.clone().ok(),
        restricted: restricted.clone().ok(),
        quotient: quotient.clone().ok(),
    };
    match (total, restricted, quotient) {
        (Ok(t), Ok(r), Ok(q)) => {
            let sum = entropy_add(&r, &q);
            v.outcome = if sum == t { Outcome::Pass } else { Outcome::Fail };
            v.reason = format!("{t} = {r} + {q}");
            if sum != t {
                v.reason = format!("{t} != {r} + {q}");
            }
        }
        (t, r, q) => {
            let errs: Vec<String> = [t.err(), r.err(), q.err()].into_iter().flatten().collect();
            v.reason = errs.join("; ");
        }
    }
    v
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkVerdict {
    pub outcome: Outcome,
    pub reason: String,
    pub scale: Option<IndexValue>,
    pub nub: Option<Handle>,
    pub nub_trivial: Option<bool>,
    pub entropy: Option<ExactEntropy>,
    pub nub_entropy: Option<ExactEntropy>,
    pub quotient_entropy: Option<ExactEntropy>,
    /// `h = log s`, nub trivial, `h(φ|nub) = 0`.
    pub equivalence: Option<[bool; 3]>,
}

pub fn verify_scale_entropy_link(sys: &System, probe: &Probe) -> LinkVerdict {
    let mut v = LinkVerdict {
        outcome: Outcome::Inconclusive,
        reason: String::new(),
        scale: None,
        nub: None,
        nub_trivial: None,
        entropy: None,
        nub_entropy: None,
        quotient_entropy: None,
        equivalence: None,
    };
    let run = |v: &mut LinkVerdict| -> std::result::Result<(), String> {
        let e = |x: TdlcError| x.to_string();
        let sc = scale(sys, probe).map_err(e)?;
        v.scale = Some(sc.value.clone());
        let nb = nub(sys, probe).map_err(e)?;
        v.nub = Some(nb.handle.clone());
        let trivial = nb.handle == sys.trivial_handle();
        v.nub_trivial = Some(trivial);
        if !nb.certified {
            return Err(format!("nub not certified: {}", nb.certificate));
        }
        let spec = sys.spec_from_handle(&nb.handle).map_err(e)?;
        let h = saturated_entropy(sys, probe)?;
        v.entropy = Some(h.clone());
        let hn = saturated_entropy(&sys.restrict_system(&spec).map_err(e)?, probe)?;
        v.nub_entropy = Some(hn.clone());
        let hq = saturated_entropy(&sys.quotient_system(&spec).map_err(e)?, probe)?;
        v.quotient_entropy = Some(hq.clone());
        let log_s = entropy_from_index(&sc.value);
        let first = log_s == hq;
        let second = h == entropy_add(&log_s, &hn);
        let eq = [h == log_s, trivial, hn.is_zero()];
        v.equivalence = Some(eq);
        let third = eq[0] == eq[1] && eq[1] == eq[2];
        v.outcome = if first && second && third { Outcome::Pass } else { Outcome::Fail };
        v.reason = format!("log s = {log_s}, h = {h}, h(nub) = {hn}, h(G/nub) = {hq}");
        Ok(())
    };
    if let Err(msg) = run(&mut v) {
        v.outcome = Outcome::Inconclusive;
        v.reason = msg;
    }
    v
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiNBound {
    pub value: ExactEntropy,
    pub accepted: Vec<(Handle, ExactEntropy)>,
    pub rejected: Vec<(Handle, String)>,
}

/// The largest `log [φM : M]` over compact `M ≤ φM` with finite index.
pub fn entropy_lower_bound_phi_n(sys: &System, candidates: &[Handle]) -> Result<PhiNBound> {
    let mut out = PhiNBound { value: ExactEntropy::zero(), accepted: Vec::new(), rejected: Vec::new() };
    for m in candidates {
        let image = sys.image(m)?;
        let reason = if !sys.is_compact(m)? {
            Some("not compact")
        } else if !sys.contains(&image, m)? {
            Some("M is not contained in its image")
        } else {
            None
        };
        if let Some(r) = reason {
            out.rejected.push((m.clone(), r.into()));
            continue;
        }
        let idx = sys.index(m, &image)?;
        if !idx.is_finite() {
            out.rejected.push((m.clone(), "infinite index".into()));
            continue;
        }
        let e = entropy_from_index(&idx);
        out.value = out.value.clone().max(e.clone());
        out.accepted.push((m.clone(), e));
    }
    Ok(out)
}

/// Entropy of `(H, φ|H)` against `(G, φ)`: `(restricted, total, monotone)`.
pub fn restriction_monotone(sys: &System, h: &ClosedSubgroupSpec, probe: &Probe) -> Result<(ExactEntropy, ExactEntropy, bool)> {
    let total = topological_entropy(sys, probe)?;
    let restricted = topological_entropy(&sys.restrict_system(h)?, probe)?;
    let ok = restricted.value <= total.value;
    Ok((restricted.value, total.value, ok))
}

/// For compact invariant normal `H`: compares `H_top(φ, K)` with
/// `H_top(φ̄, πK)` over `K = B_k H`. Returns `(checked, mismatches)`.
pub fn quotient_table_check(sys: &System, h: &ClosedSubgroupSpec, probe: &Probe) -> Result<(usize, usize)> {
    if !h.flags.compact {
        return Err(TdlcError::Invalid("H must be compact".into()));
    }
    let q = sys.quotient_system(h)?;
    let mut seen = Vec::new();
    let mut bad = 0;
    for k in 0..probe.base.max(1) {
        let kk = sys.set_product(&sys.base_family(k), &h.handle)?;
        if seen.contains(&kk) {
            continue;
        }
        let up = htop_local(sys, &kk, probe.tidy)?;
        let down = htop_local(&q, &sys.project(h, &q, &kk)?, probe.tidy)?;
        if up != down {
            bad += 1;
        }
        seen.push(kk);
    }
    Ok((seen.len(), bad))
}
