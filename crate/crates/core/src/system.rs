//! The backend-independent contract: systems `(G, φ)`, subgroup handles, and
//! closed subgroups used for restriction and quotients.

use std::sync::Arc;

use crate::backends::finite::{ElemSet, FiniteGroup, FiniteSystem};
use crate::backends::linalg::{self, Mat, Q};
use crate::backends::padic::{PadicModule, PadicSystem};
use crate::backends::shift::{Profile, ShiftSystem, SubId, TailVerdict};
use crate::error::{Result, TdlcError};
use crate::kernel::IndexValue;

/// A closed subgroup of one of the backends. Handles for compact subgroups
/// are canonical, so equality of handles is equality of subgroups.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Handle {
    Finite(ElemSet),
    Padic(PadicModule),
    Shift(Profile),
    Pair(Box<Handle>, Box<Handle>),
}

impl Handle {
    pub fn pair(a: Handle, b: Handle) -> Handle {
        Handle::Pair(Box::new(a), Box::new(b))
    }
}

/// A group with a continuous endomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum System {
    Finite(FiniteSystem),
    Padic(PadicSystem),
    Shift(ShiftSystem),
    Product(Box<System>, Box<System>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Capabilities {
    pub quotient: bool,
    pub restriction: bool,
    pub set_product: bool,
    pub tidy_below_certificate: bool,
    pub base_stabilizes: bool,
}

/// The description of a closed subgroup `H`, as given by a scenario.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpecData {
    Finite(ElemSet),
    /// Rational basis of a subspace.
    Padic(Mat),
    /// The constant profile `S^Z`.
    Shift(SubId),
    Pair(Box<SpecData>, Box<SpecData>),
}

/// Properties of `H`, always recomputed from the data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpecFlags {
    pub normal: bool,
    pub compact: bool,
    pub invariant: bool,
    pub stable: bool,
    pub contains_kernel: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedSubgroupSpec {
    pub data: SpecData,
    pub handle: Handle,
    pub flags: SpecFlags,
}

fn mismatch(op: &str) -> TdlcError {
    TdlcError::BackendMismatch(format!("{op}: handle does not belong to this system"))
}

impl System {
    pub fn trivial() -> System {
        System::Finite(FiniteSystem::identity(Arc::new(FiniteGroup::trivial())))
    }

    pub fn make_product(a: System, b: System) -> System {
        System::Product(Box::new(a), Box::new(b))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            System::Finite(_) => "finite",
            System::Padic(_) => "padic",
            System::Shift(_) => "shift",
            System::Product(..) => "product",
        }
    }

    pub fn describe(&self) -> String {
        match self {
            System::Finite(f) => format!("finite group of order {}", f.order()),
            System::Padic(p) => {
                let rows: Vec<String> = p
                    .matrix
                    .iter()
                    .map(|r| format!("[{}]", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
                    .collect();
                format!("Q_{}^{} with matrix [{}]", p.p, p.dim, rows.join(","))
            }
            System::Shift(s) => {
                format!("{} shift over {} by {} with sigma {:?}", s.mode.name(), s.label, s.shift, s.sigma)
            }
            System::Product(a, b) => format!("({}) x ({})", a.describe(), b.describe()),
        }
    }

    /// Whether this is the one-point group.
    pub fn is_trivial_group(&self) -> bool {
        match self {
            System::Finite(f) => f.order() == 1,
            System::Padic(p) => p.dim == 0,
            System::Shift(s) => s.alphabet.order() == 1,
            System::Product(a, b) => a.is_trivial_group() && b.is_trivial_group(),
        }
    }

    pub fn trivial_handle(&self) -> Handle {
        match self {
            System::Finite(f) => Handle::Finite(f.group.identity_set()),
            System::Padic(p) => Handle::Padic(PadicModule::zero(p.p, p.dim)),
            System::Shift(s) => Handle::Shift(s.trivial()),
            System::Product(a, b) => Handle::pair(a.trivial_handle(), b.trivial_handle()),
        }
    }

    /// `G` itself as a closed subgroup.
    pub fn whole(&self) -> Handle {
        match self {
            System::Finite(f) => Handle::Finite(f.group.whole()),
            System::Padic(p) => Handle::Padic(PadicModule::whole(p.p, p.dim)),
            System::Shift(s) => Handle::Shift(s.whole()),
            System::Product(a, b) => Handle::pair(a.whole(), b.whole()),
        }
    }

    pub fn is_compact_group(&self) -> bool {
        match self {
            System::Finite(_) => true,
            System::Padic(p) => p.dim == 0,
            System::Shift(s) => s.is_compact_group() || s.alphabet.order() == 1,
            System::Product(a, b) => a.is_compact_group() && b.is_compact_group(),
        }
    }

    pub fn is_compact(&self, h: &Handle) -> Result<bool> {
        Ok(match (self, h) {
            (System::Finite(_), Handle::Finite(_)) => true,
            (System::Padic(_), Handle::Padic(m)) => m.is_compact(),
            (System::Shift(s), Handle::Shift(p)) => s.is_compact(p),
            (System::Product(a, b), Handle::Pair(x, y)) => a.is_compact(x)? && b.is_compact(y)?,
            _ => return Err(mismatch("is_compact")),
        })
    }

    pub fn is_open(&self, h: &Handle) -> Result<bool> {
        Ok(match (self, h) {
            (System::Finite(_), Handle::Finite(_)) => true,
            (System::Padic(_), Handle::Padic(m)) => m.is_open(),
            (System::Shift(s), Handle::Shift(p)) => s.is_open(p),
            (System::Product(a, b), Handle::Pair(x, y)) => a.is_open(x)? && b.is_open(y)?,
            _ => return Err(mismatch("is_open")),
        })
    }

    /// Whether `small ≤ big`.
    pub fn contains(&self, big: &Handle, small: &Handle) -> Result<bool> {
        Ok(match (self, big, small) {
            (System::Finite(_), Handle::Finite(b), Handle::Finite(s)) => s.is_subset(b),
            (System::Padic(_), Handle::Padic(b), Handle::Padic(s)) => b.contains(s),
            (System::Shift(sys), Handle::Shift(b), Handle::Shift(s)) => sys.contains(b, s),
            (System::Product(a, b), Handle::Pair(b1, b2), Handle::Pair(s1, s2)) => {
                a.contains(b1, s1)? && b.contains(b2, s2)?
            }
            _ => return Err(mismatch("contains")),
        })
    }

    pub fn intersect(&self, u: &Handle, v: &Handle) -> Result<Handle> {
        Ok(match (self, u, v) {
            (System::Finite(_), Handle::Finite(a), Handle::Finite(b)) => Handle::Finite(a.intersection(b)),
            (System::Padic(_), Handle::Padic(a), Handle::Padic(b)) => Handle::Padic(a.intersect(b)),
            (System::Shift(s), Handle::Shift(a), Handle::Shift(b)) => Handle::Shift(s.intersect(a, b)),
            (System::Product(a, b), Handle::Pair(u1, u2), Handle::Pair(v1, v2)) => {
                Handle::pair(a.intersect(u1, v1)?, b.intersect(u2, v2)?)
            }
            _ => return Err(mismatch("intersect")),
        })
    }

    /// `φU`.
    pub fn image(&self, u: &Handle) -> Result<Handle> {
        Ok(match (self, u) {
            (System::Finite(f), Handle::Finite(a)) => Handle::Finite(f.image(a)),
            (System::Padic(p), Handle::Padic(a)) => Handle::Padic(p.image(a)),
            (System::Shift(s), Handle::Shift(a)) => Handle::Shift(s.image(a)),
            (System::Product(a, b), Handle::Pair(x, y)) => Handle::pair(a.image(x)?, b.image(y)?),
            _ => return Err(mismatch("image")),
        })
    }

    /// `φⁿU`.
    pub fn image_pow(&self, u: &Handle, n: usize) -> Result<Handle> {
        let mut cur = u.clone();
        for _ in 0..n {
            cur = self.image(&cur)?;
        }
        Ok(cur)
    }

    /// `φ⁻¹U`; may be non-compact.
    pub fn preimage(&self, u: &Handle) -> Result<Handle> {
        Ok(match (self, u) {
            (System::Finite(f), Handle::Finite(a)) => Handle::Finite(f.preimage(a)),
            (System::Padic(p), Handle::Padic(a)) => Handle::Padic(p.preimage(a)),
            (System::Shift(s), Handle::Shift(a)) => Handle::Shift(s.preimage(a)),
            (System::Product(a, b), Handle::Pair(x, y)) => Handle::pair(a.preimage(x)?, b.preimage(y)?),
            _ => return Err(mismatch("preimage")),
        })
    }

    /// `[U : V]` for `V ≤ U`.
    pub fn index(&self, v: &Handle, u: &Handle) -> Result<IndexValue> {
        match (self, v, u) {
            (System::Finite(f), Handle::Finite(a), Handle::Finite(b)) => IndexValue::finite(f.index(a, b)?),
            (System::Padic(_), Handle::Padic(a), Handle::Padic(b)) => b.index_of(a),
            (System::Shift(s), Handle::Shift(a), Handle::Shift(b)) => s.index(a, b),
            (System::Product(a, b), Handle::Pair(v1, v2), Handle::Pair(u1, u2)) => {
                Ok(a.index(v1, u1)? * b.index(v2, u2)?)
            }
            _ => Err(mismatch("index")),
        }
    }

    /// The subgroup `UV`, which must equal `VU`.
    pub fn set_product(&self, u: &Handle, v: &Handle) -> Result<Handle> {
        Ok(match (self, u, v) {
            (System::Finite(f), Handle::Finite(a), Handle::Finite(b)) => Handle::Finite(f.set_product(a, b)?),
            (System::Padic(_), Handle::Padic(a), Handle::Padic(b)) => Handle::Padic(a.sum(b)),
            (System::Shift(s), Handle::Shift(a), Handle::Shift(b)) => Handle::Shift(s.set_product(a, b)),
            (System::Product(a, b), Handle::Pair(u1, u2), Handle::Pair(v1, v2)) => {
                Handle::pair(a.set_product(u1, v1)?, b.set_product(u2, v2)?)
            }
            _ => return Err(mismatch("set_product")),
        })
    }

    /// The k-th element of the canonical decreasing base of compact open subgroups.
    pub fn base_family(&self, k: usize) -> Handle {
        match self {
            System::Finite(f) => {
                if k == 0 {
                    Handle::Finite(f.group.whole())
                } else {
                    Handle::Finite(f.group.identity_set())
                }
            }
            System::Padic(p) => Handle::Padic(p.base(k)),
            System::Shift(s) => Handle::Shift(s.base(k)),
            System::Product(a, b) => Handle::pair(a.base_family(k), b.base_family(k)),
        }
    }

    pub fn capabilities(&self) -> Capabilities {
        match self {
            System::Finite(_) => Capabilities {
                quotient: true,
                restriction: true,
                set_product: true,
                tidy_below_certificate: true,
                base_stabilizes: true,
            },
            System::Padic(_) => Capabilities {
                quotient: true,
                restriction: true,
                set_product: true,
                tidy_below_certificate: true,
                base_stabilizes: true,
            },
            System::Shift(s) => Capabilities {
                quotient: true,
                restriction: true,
                set_product: true,
                tidy_below_certificate: true,
                base_stabilizes: s.base_saturation().is_some(),
            },
            System::Product(a, b) => {
                let (x, y) = (a.capabilities(), b.capabilities());
                Capabilities {
                    quotient: x.quotient && y.quotient,
                    restriction: x.restriction && y.restriction,
                    set_product: x.set_product && y.set_product,
                    tidy_below_certificate: x.tidy_below_certificate && y.tidy_below_certificate,
                    base_stabilizes: x.base_stabilizes && y.base_stabilizes,
                }
            }
        }
    }

    pub fn kernel(&self) -> Handle {
        match self {
            System::Finite(f) => Handle::Finite(f.kernel()),
            System::Padic(p) => Handle::Padic(p.kernel()),
            System::Shift(s) => Handle::Shift(s.kernel()),
            System::Product(a, b) => Handle::pair(a.kernel(), b.kernel()),
        }
    }

    pub fn is_injective(&self) -> bool {
        match self {
            System::Finite(f) => f.is_injective(),
            System::Padic(p) => p.is_injective(),
            System::Shift(s) => s.is_injective(),
            System::Product(a, b) => a.is_injective() && b.is_injective(),
        }
    }

    pub fn is_surjective(&self) -> bool {
        match self {
            System::Finite(f) => f.image(&f.group.whole()) == f.group.whole(),
            System::Padic(p) => p.is_injective(),
            System::Shift(s) => s.sub_image(s.full()) == s.full(),
            System::Product(a, b) => a.is_surjective() && b.is_surjective(),
        }
    }

    pub fn describe_handle(&self, h: &Handle) -> String {
        match (self, h) {
            (System::Finite(f), Handle::Finite(a)) => {
                let names: Vec<&str> = a.iter().map(|e| f.group.name(e)).collect();
                format!("{{{}}}", names.join(", "))
            }
            (System::Padic(_), Handle::Padic(m)) => m.describe(),
            (System::Shift(s), Handle::Shift(p)) => s.describe(p),
            (System::Product(a, b), Handle::Pair(x, y)) => {
                format!("{} x {}", a.describe_handle(x), b.describe_handle(y))
            }
            _ => "<foreign handle>".into(),
        }
    }

    /// Independent prediction of the entropy index and the scale, if any.
    pub fn scale_oracle(&self) -> Option<IndexValue> {
        match self {
            System::Padic(p) => Some(p.oracle_index()),
            System::Product(a, b) => Some(a.scale_oracle()? * b.scale_oracle()?),
            _ => None,
        }
    }

    /// Candidates for the scale minimum beyond the base and its tidy transforms.
    pub fn extra_scale_candidates(&self, count: usize) -> Vec<Handle> {
        match self {
            System::Finite(f) => f.group.subgroups().iter().cloned().map(Handle::Finite).collect(),
            System::Padic(p) => p.adapted_lattices(count).into_iter().map(Handle::Padic).collect(),
            System::Shift(s) if s.is_compact_group() => vec![Handle::Shift(s.whole())],
            System::Shift(_) => Vec::new(),
            System::Product(a, b) => {
                let xs = a.extra_scale_candidates(count);
                let ys = b.extra_scale_candidates(count);
                let mut out = Vec::new();
                for x in xs.iter().chain([&a.base_family(0)]) {
                    for y in ys.iter().chain([&b.base_family(0)]) {
                        out.push(Handle::pair(x.clone(), y.clone()));
                    }
                }
                out
            }
        }
    }

    /// Certificate that `H_top` is eventually constant along the base.
    pub fn base_saturation(&self) -> Option<String> {
        match self {
            System::Finite(_) => Some("finite group: every value is 0".into()),
            System::Padic(_) => Some("scaling by p commutes with the matrix".into()),
            System::Shift(s) => s.base_saturation(),
            System::Product(a, b) => {
                let (x, y) = (a.base_saturation()?, b.base_saturation()?);
                Some(format!("{x}; {y}"))
            }
        }
    }

    /// Backend-specific `U₊` when the plain iteration has not stabilized.
    pub fn plus_structural(&self, u: &Handle, max_steps: usize) -> Result<(Handle, String)> {
        match (self, u) {
            (System::Finite(f), Handle::Finite(a)) => {
                let mut cur = a.clone();
                loop {
                    let next = a.intersection(&f.image(&cur));
                    if next == cur {
                        return Ok((Handle::Finite(cur), "fixpoint".into()));
                    }
                    cur = next;
                }
            }
            (System::Padic(p), Handle::Padic(a)) => p.plus_group(a, max_steps).map(|(m, w)| (Handle::Padic(m), w)),
            (System::Shift(s), Handle::Shift(a)) => {
                Ok((Handle::Shift(s.plus_group(a)?), "closed-form tail recursion".into()))
            }
            (System::Product(a, b), Handle::Pair(x, y)) => {
                let (p1, w1) = a.plus_structural(x, max_steps)?;
                let (p2, w2) = b.plus_structural(y, max_steps)?;
                Ok((Handle::pair(p1, p2), format!("{w1}; {w2}")))
            }
            _ => Err(mismatch("plus_structural")),
        }
    }

    /// Backend-specific `U₋`.
    pub fn minus_structural(&self, u: &Handle, max_steps: usize) -> Result<(Handle, String)> {
        match (self, u) {
            (System::Finite(f), Handle::Finite(a)) => {
                let mut cur = a.clone();
                loop {
                    let next = a.intersection(&f.preimage(&cur));
                    if next == cur {
                        return Ok((Handle::Finite(cur), "fixpoint".into()));
                    }
                    cur = next;
                }
            }
            (System::Padic(p), Handle::Padic(a)) => p.minus_group(a, max_steps).map(|(m, w)| (Handle::Padic(m), w)),
            (System::Shift(s), Handle::Shift(a)) => {
                Ok((Handle::Shift(s.minus_group(a)?), "closed-form tail recursion".into()))
            }
            (System::Product(a, b), Handle::Pair(x, y)) => {
                let (p1, w1) = a.minus_structural(x, max_steps)?;
                let (p2, w2) = b.minus_structural(y, max_steps)?;
                Ok((Handle::pair(p1, p2), format!("{w1}; {w2}")))
            }
            _ => Err(mismatch("minus_structural")),
        }
    }

    /// The certified limit of `α_n` for `U`, and (when known) an index from
    /// which the table must already sit at the limit.
    pub fn alpha_certificate(&self, u: &Handle) -> Result<(IndexValue, Option<usize>, String)> {
        match (self, u) {
            (System::Finite(f), Handle::Finite(a)) => {
                let mut cur = a.clone();
                for n in 0.. {
                    let next = a.intersection(&f.preimage(&cur));
                    if next == cur {
                        return Ok((IndexValue::one(), Some(n), format!("U_-n fixpoint at n={n}")));
                    }
                    cur = next;
                }
                unreachable!()
            }
            (System::Padic(p), Handle::Padic(_)) => {
                let np = p.newton();
                let e = np.entropy_exponent();
                Ok((IndexValue::power(p.p, e), None, format!("Newton polygon exponent {e}")))
            }
            (System::Shift(s), Handle::Shift(a)) => s.alpha_limit(a).map(|(v, n, w)| (v, Some(n), w)),
            (System::Product(a, b), Handle::Pair(x, y)) => {
                let (l1, n1, w1) = a.alpha_certificate(x)?;
                let (l2, n2, w2) = b.alpha_certificate(y)?;
                let n = match (n1, n2) {
                    (Some(i), Some(j)) => Some(i.max(j)),
                    _ => None,
                };
                Ok((l1 * l2, n, format!("{w1}; {w2}")))
            }
            _ => Err(mismatch("alpha_certificate")),
        }
    }

    /// Closedness of `⋃ φⁿU₊`.
    pub fn tidy_below_tails(&self, uplus: &Handle, max_steps: usize) -> Result<TailVerdict> {
        Ok(match (self, uplus) {
            (System::Finite(_), Handle::Finite(_)) => TailVerdict::Closed("finite: the union is a finite chain".into()),
            (System::Padic(p), Handle::Padic(m)) => p.tidy_below_tails(m, max_steps),
            (System::Shift(s), Handle::Shift(m)) => s.tidy_below_tails(m),
            (System::Product(a, b), Handle::Pair(x, y)) => {
                match (a.tidy_below_tails(x, max_steps)?, b.tidy_below_tails(y, max_steps)?) {
                    (TailVerdict::Closed(r1), TailVerdict::Closed(r2)) => TailVerdict::Closed(format!("{r1}; {r2}")),
                    (TailVerdict::NotClosed(r), _) | (_, TailVerdict::NotClosed(r)) => TailVerdict::NotClosed(r),
                    (TailVerdict::Unknown(r), _) | (_, TailVerdict::Unknown(r)) => TailVerdict::Unknown(r),
                }
            }
            _ => return Err(mismatch("tidy_below_tails")),
        })
    }

    /// Build a closed subgroup from data, recomputing its flags.
    pub fn spec(&self, data: SpecData) -> Result<ClosedSubgroupSpec> {
        let handle = self.spec_handle(&data)?;
        let image = self.image(&handle)?;
        let flags = SpecFlags {
            normal: self.spec_is_normal(&data),
            compact: self.is_compact(&handle)?,
            invariant: self.contains(&handle, &image)?,
            stable: image == handle,
            contains_kernel: self.contains(&handle, &self.kernel())?,
        };
        Ok(ClosedSubgroupSpec { data, handle, flags })
    }

    pub fn whole_spec(&self) -> ClosedSubgroupSpec {
        self.spec(self.whole_data()).expect("G is a closed subgroup")
    }

    pub fn trivial_spec(&self) -> ClosedSubgroupSpec {
        self.spec(self.trivial_data()).expect("{1} is a closed subgroup")
    }

    /// The closed-subgroup description of a handle, when it has one.
    pub fn spec_from_handle(&self, h: &Handle) -> Result<ClosedSubgroupSpec> {
        let data = self.handle_data(h)?;
        self.spec(data)
    }

    fn handle_data(&self, h: &Handle) -> Result<SpecData> {
        Ok(match (self, h) {
            (System::Finite(_), Handle::Finite(s)) => SpecData::Finite(s.clone()),
            (System::Padic(_), Handle::Padic(m)) if m.lattice_rank() == 0 => SpecData::Padic(m.subspace().clone()),
            (System::Shift(_), Handle::Shift(p)) if p.left == p.right && p.window.is_empty() => SpecData::Shift(p.left),
            (System::Product(a, b), Handle::Pair(x, y)) => {
                SpecData::Pair(Box::new(a.handle_data(x)?), Box::new(b.handle_data(y)?))
            }
            _ => return Err(TdlcError::Unsupported("subgroup has no closed-subgroup description".into())),
        })
    }

    fn whole_data(&self) -> SpecData {
        match self {
            System::Finite(f) => SpecData::Finite(f.group.whole()),
            System::Padic(p) => SpecData::Padic(linalg::identity(p.dim)),
            System::Shift(s) => SpecData::Shift(s.full()),
            System::Product(a, b) => SpecData::Pair(Box::new(a.whole_data()), Box::new(b.whole_data())),
        }
    }

    fn trivial_data(&self) -> SpecData {
        match self {
            System::Finite(f) => SpecData::Finite(f.group.identity_set()),
            System::Padic(_) => SpecData::Padic(Vec::new()),
            System::Shift(s) => SpecData::Shift(s.trivial_sub()),
            System::Product(a, b) => SpecData::Pair(Box::new(a.trivial_data()), Box::new(b.trivial_data())),
        }
    }

    fn spec_handle(&self, data: &SpecData) -> Result<Handle> {
        Ok(match (self, data) {
            (System::Finite(f), SpecData::Finite(s)) => {
                if s.is_empty() || !f.group.is_subgroup(s) {
                    return Err(TdlcError::Invalid("element set is not a subgroup".into()));
                }
                Handle::Finite(s.clone())
            }
            (System::Padic(p), SpecData::Padic(basis)) => {
                if basis.iter().any(|v| v.len() != p.dim) {
                    return Err(TdlcError::Invalid("subspace vector has the wrong length".into()));
                }
                Handle::Padic(PadicModule::new(p.p, p.dim, basis, &[]))
            }
            (System::Shift(s), SpecData::Shift(id)) => {
                if *id >= s.sub_count() {
                    return Err(TdlcError::Invalid("unknown alphabet subgroup".into()));
                }
                Handle::Shift(Profile::constant(*id))
            }
            (System::Product(a, b), SpecData::Pair(x, y)) => Handle::pair(a.spec_handle(x)?, b.spec_handle(y)?),
            _ => return Err(TdlcError::BackendMismatch("subgroup data does not match the system".into())),
        })
    }

    fn spec_is_normal(&self, data: &SpecData) -> bool {
        match (self, data) {
            (System::Finite(f), SpecData::Finite(s)) => f.group.is_normal(s),
            (System::Product(a, b), SpecData::Pair(x, y)) => a.spec_is_normal(x) && b.spec_is_normal(y),
            _ => true,
        }
    }

    fn require_invariant(h: &ClosedSubgroupSpec) -> Result<()> {
        if !h.flags.invariant {
            return Err(TdlcError::Invalid("subgroup is not phi-invariant".into()));
        }
        Ok(())
    }

    /// `(H, φ|_H)`.
    pub fn restrict_system(&self, h: &ClosedSubgroupSpec) -> Result<System> {
        Self::require_invariant(h)?;
        match (self, &h.data) {
            (System::Finite(f), SpecData::Finite(s)) => {
                let (sub, embed) = f.group.subgroup_as_group(s)?;
                let pos: std::collections::HashMap<u32, u32> =
                    embed.iter().enumerate().map(|(i, &e)| (e, i as u32)).collect();
                let map = embed.iter().map(|&e| pos[&f.map[e as usize]]).collect();
                Ok(System::Finite(FiniteSystem::new(Arc::new(sub), map)?))
            }
            (System::Padic(p), SpecData::Padic(_)) => {
                let Handle::Padic(m) = &h.handle else { unreachable!() };
                let basis = m.subspace().clone();
                if basis.is_empty() {
                    return Ok(System::trivial());
                }
                let bt = linalg::transpose(&basis, p.dim);
                let k = basis.len();
                let mut cols: Vec<Vec<Q>> = Vec::with_capacity(k);
                for b in &basis {
                    let ab = linalg::mat_vec(&p.matrix, b);
                    cols.push(linalg::solve(&bt, &ab, k).expect("invariant subspace"));
                }
                let a = linalg::transpose(&cols, k);
                Ok(System::Padic(PadicSystem::new(p.p, a)?))
            }
            (System::Shift(s), SpecData::Shift(id)) => {
                if *id == s.trivial_sub() {
                    return Ok(System::trivial());
                }
                Ok(System::Shift(s.restrict_alphabet(*id)?))
            }
            (System::Product(a, b), SpecData::Pair(x, y)) => {
                let (sa, sb) = (a.spec((**x).clone())?, b.spec((**y).clone())?);
                Ok(System::make_product(a.restrict_system(&sa)?, b.restrict_system(&sb)?))
            }
            _ => Err(TdlcError::BackendMismatch("subgroup data does not match the system".into())),
        }
    }

    /// `(G/H, φ̄)` for a normal φ-invariant `H`.
    pub fn quotient_system(&self, h: &ClosedSubgroupSpec) -> Result<System> {
        Self::require_invariant(h)?;
        match (self, &h.data) {
            (System::Finite(f), SpecData::Finite(s)) => {
                let (quot, coset) = f.group.quotient(s)?;
                let mut reps = vec![u32::MAX; quot.order()];
                for g in f.group.elements() {
                    let c = coset[g as usize] as usize;
                    if reps[c] == u32::MAX {
                        reps[c] = g;
                    }
                }
                let map = reps.iter().map(|&r| coset[f.map[r as usize] as usize]).collect();
                Ok(System::Finite(FiniteSystem::new(Arc::new(quot), map)?))
            }
            (System::Padic(p), SpecData::Padic(_)) => {
                let proj = self.padic_projection(h)?;
                if proj.is_empty() {
                    return Ok(System::trivial());
                }
                let (_, pivots) = self.padic_spec_rref(h)?;
                let free: Vec<usize> = (0..p.dim).filter(|c| !pivots.contains(c)).collect();
                // column j of the quotient matrix is π(A e_{free_j})
                let cols: Vec<Vec<Q>> =
                    free.iter().map(|&c| linalg::mat_vec(&proj, &p.matrix.iter().map(|r| r[c].clone()).collect::<Vec<_>>())).collect();
                let a = linalg::transpose(&cols, free.len());
                Ok(System::Padic(PadicSystem::new(p.p, a)?))
            }
            (System::Shift(s), SpecData::Shift(id)) => {
                if *id == s.full() {
                    return Ok(System::trivial());
                }
                Ok(System::Shift(s.quotient_alphabet(*id)?.0))
            }
            (System::Product(a, b), SpecData::Pair(x, y)) => {
                let (sa, sb) = (a.spec((**x).clone())?, b.spec((**y).clone())?);
                Ok(System::make_product(a.quotient_system(&sa)?, b.quotient_system(&sb)?))
            }
            _ => Err(TdlcError::BackendMismatch("subgroup data does not match the system".into())),
        }
    }

    fn padic_spec_rref(&self, h: &ClosedSubgroupSpec) -> Result<(Mat, Vec<usize>)> {
        match (self, &h.handle) {
            (System::Padic(p), Handle::Padic(m)) => Ok(linalg::rref(m.subspace(), p.dim)),
            _ => Err(mismatch("padic projection")),
        }
    }

    /// The matrix of `Q_p^d → Q_p^d / V` in the non-pivot coordinates of `V`.
    fn padic_projection(&self, h: &ClosedSubgroupSpec) -> Result<Mat> {
        let System::Padic(p) = self else { return Err(mismatch("padic projection")) };
        let (rows, pivots) = self.padic_spec_rref(h)?;
        let free: Vec<usize> = (0..p.dim).filter(|c| !pivots.contains(c)).collect();
        let mut proj = linalg::zeros(free.len(), p.dim);
        for (j, &fc) in free.iter().enumerate() {
            proj[j][fc] = Q::from_integer(1.into());
            for (row, &pc) in rows.iter().zip(&pivots) {
                proj[j][pc] = -row[fc].clone();
            }
        }
        Ok(proj)
    }

    /// `π(U)` in the quotient system built by [`System::quotient_system`].
    pub fn project(&self, h: &ClosedSubgroupSpec, quotient: &System, u: &Handle) -> Result<Handle> {
        Ok(match (self, quotient, u, &h.data) {
            (System::Finite(f), System::Finite(q), Handle::Finite(a), SpecData::Finite(s)) => {
                let (_, coset) = f.group.quotient(s)?;
                Handle::Finite(ElemSet::from_iter(q.order(), a.iter().map(|g| coset[g as usize])))
            }
            (System::Padic(_), System::Padic(_), Handle::Padic(m), _) => Handle::Padic(m.image(&self.padic_projection(h)?)),
            (System::Shift(s), System::Shift(q), Handle::Shift(p), SpecData::Shift(id)) => {
                let (_, coset) = s.quotient_alphabet(*id)?;
                Handle::Shift(s.push_profile(q, &coset, p))
            }
            (System::Product(a, b), System::Product(qa, qb), Handle::Pair(x, y), SpecData::Pair(dx, dy)) => {
                let (sa, sb) = (a.spec((**dx).clone())?, b.spec((**dy).clone())?);
                Handle::pair(a.project(&sa, qa, x)?, b.project(&sb, qb, y)?)
            }
            (_, q, _, _) if q.is_trivial_group() => q.trivial_handle(),
            _ => return Err(mismatch("project")),
        })
    }
}
