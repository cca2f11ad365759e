//! Built-in systems used by the verification suites.

use std::sync::Arc;

use crate::backends::finite::{FiniteGroup, FiniteSystem};
use crate::backends::linalg::{q, Q};
use crate::backends::padic::PadicSystem;
use crate::backends::shift::{ShiftSystem, TailMode};
use crate::system::{SpecData, System};

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub system: System,
    /// Named φ-invariant closed subgroups.
    pub subgroups: Vec<(String, SpecData)>,
}

#[derive(Debug, Clone)]
pub struct AdditionInstance {
    pub name: String,
    pub system: System,
    pub subgroup: SpecData,
}

#[derive(Debug, Clone)]
pub struct ProductInstance {
    pub name: &'static str,
    pub left: System,
    pub right: System,
}

fn frac(a: i64, b: i64) -> Q {
    Q::new(a.into(), b.into())
}

pub fn padic(p: u64, rows: Vec<Vec<Q>>) -> System {
    System::Padic(PadicSystem::new(p, rows).expect("catalog matrix"))
}

pub fn shift(n: u32, mode: TailMode, k: i64) -> System {
    let f = Arc::new(FiniteGroup::cyclic(n).expect("catalog alphabet"));
    let sigma = ShiftSystem::identity_sigma(&f);
    System::Shift(ShiftSystem::new(f, format!("Z/{n}"), mode, k, sigma).expect("catalog shift"))
}

fn shift_with(n: u32, mode: TailMode, k: i64, sigma: impl Fn(u32) -> u32) -> System {
    let f = Arc::new(FiniteGroup::cyclic(n).expect("catalog alphabet"));
    let sigma = f.elements().map(sigma).collect();
    System::Shift(ShiftSystem::new(f, format!("Z/{n}"), mode, k, sigma).expect("catalog shift"))
}

fn involution(g: &FiniteGroup) -> u32 {
    let e = g.identity_set().iter().next().unwrap();
    g.elements().find(|&x| x != e && g.mul(x, x) == e).expect("group has an involution")
}

/// S₃ with `x ↦ t` on odd permutations and `x ↦ 1` on even ones.
pub fn s3_sign() -> System {
    let g = FiniteGroup::symmetric3();
    let e = g.identity_set().iter().next().unwrap();
    let t = involution(&g);
    let a3 = g.subgroups().iter().find(|s| s.len() == 3).unwrap().clone();
    let map = g.elements().map(|x| if a3.contains(x) { e } else { t }).collect();
    System::Finite(FiniteSystem::new(Arc::new(g), map).expect("sign map"))
}

/// S₃ with conjugation by a transposition.
pub fn s3_conjugation() -> System {
    let g = FiniteGroup::symmetric3();
    let t = involution(&g);
    let map = g.elements().map(|x| g.mul(g.mul(g.inv(t), x), t)).collect();
    System::Finite(FiniteSystem::new(Arc::new(g), map).expect("inner automorphism"))
}

pub fn s3_identity() -> System {
    System::Finite(FiniteSystem::identity(Arc::new(FiniteGroup::symmetric3())))
}

pub fn q2_half() -> System {
    padic(2, vec![vec![frac(1, 2)]])
}

pub fn diag_half() -> System {
    padic(2, vec![vec![frac(1, 2), q(0)], vec![q(0), frac(1, 2)]])
}

pub fn jordan_half() -> System {
    padic(2, vec![vec![frac(1, 2), q(1)], vec![q(0), frac(1, 2)]])
}

pub fn mixed_diag() -> System {
    padic(2, vec![vec![q(2), q(0)], vec![q(0), frac(1, 2)]])
}

pub fn singular_half() -> System {
    padic(2, vec![vec![frac(1, 2), q(0)], vec![q(0), q(0)]])
}

fn span(v: &[i64]) -> SpecData {
    SpecData::Padic(vec![v.iter().map(|&x| q(x)).collect()])
}

fn alphabet_sub(sys: &System, size: usize) -> SpecData {
    let System::Shift(s) = sys else { unreachable!() };
    let id = s.alphabet.subgroups().iter().position(|x| x.len() == size).expect("alphabet subgroup");
    SpecData::Shift(id)
}

fn whole_data(sys: &System) -> SpecData {
    sys.whole_spec().data
}

fn trivial_data(sys: &System) -> SpecData {
    sys.trivial_spec().data
}

pub fn systems() -> Vec<CatalogEntry> {
    let mut out = Vec::new();
    let mut add = |name: &'static str, system: System, extra: Vec<(String, SpecData)>| {
        let mut subgroups = vec![("trivial".to_string(), trivial_data(&system)), ("whole".to_string(), whole_data(&system))];
        subgroups.extend(extra);
        out.push(CatalogEntry { name, system, subgroups });
    };
    add("trivial", System::trivial(), vec![]);
    let a3 = {
        let g = FiniteGroup::symmetric3();
        g.subgroups().iter().find(|s| s.len() == 3).unwrap().clone()
    };
    add("s3_identity", s3_identity(), vec![("a3".into(), SpecData::Finite(a3.clone()))]);
    add("s3_sign", s3_sign(), vec![]);
    let t_sub = {
        let g = FiniteGroup::symmetric3();
        let t = involution(&g);
        g.closure([t])
    };
    add(
        "s3_conjugation",
        s3_conjugation(),
        vec![("a3".into(), SpecData::Finite(a3)), ("transposition".into(), SpecData::Finite(t_sub))],
    );
    add("q2_half", q2_half(), vec![]);
    add("q2_double", padic(2, vec![vec![q(2)]]), vec![]);
    add("q3_third", padic(3, vec![vec![frac(1, 3)]]), vec![]);
    add("padic_diag_half", diag_half(), vec![("axis".into(), span(&[1, 0])), ("diagonal".into(), span(&[1, 1]))]);
    add("padic_jordan", jordan_half(), vec![("axis".into(), span(&[1, 0]))]);
    add("padic_mixed", mixed_diag(), vec![("expanding".into(), span(&[0, 1])), ("contracting".into(), span(&[1, 0]))]);
    add("padic_singular", singular_half(), vec![("axis".into(), span(&[1, 0]))]);
    let z2 = shift(2, TailMode::Compact, 1);
    add("shift_z2", z2, vec![]);
    let z3n = shift_with(3, TailMode::Compact, 1, |x| (3 - x) % 3);
    add("shift_z3_neg", z3n, vec![]);
    let z4 = shift(4, TailMode::Compact, 1);
    let two = alphabet_sub(&z4, 2);
    add("shift_z4", z4, vec![("even".into(), two)]);
    add("laurent_z2", shift(2, TailMode::Laurent, 1), vec![]);
    add("laurent_z3", shift(3, TailMode::Laurent, 1), vec![]);
    let l4 = shift(4, TailMode::Laurent, 1);
    let two = alphabet_sub(&l4, 2);
    add("laurent_z4", l4, vec![("even".into(), two)]);
    add("discrete_z2", shift(2, TailMode::Discrete, 1), vec![]);
    for p in products() {
        let sys = System::make_product(p.left, p.right);
        add(p.name, sys, vec![]);
    }
    out
}

pub fn products() -> Vec<ProductInstance> {
    vec![
        ProductInstance { name: "q2_half_squared", left: q2_half(), right: q2_half() },
        ProductInstance { name: "q2_half_x_shift_z3", left: q2_half(), right: shift(3, TailMode::Compact, 1) },
        ProductInstance { name: "s3_sign_x_laurent_z2", left: s3_sign(), right: shift(2, TailMode::Laurent, 1) },
        ProductInstance {
            name: "shift_z2_x_laurent_z3",
            left: shift(2, TailMode::Compact, 1),
            right: shift(3, TailMode::Laurent, 1),
        },
        ProductInstance { name: "q3_third_x_q2_double", left: padic(3, vec![vec![frac(1, 3)]]), right: padic(2, vec![vec![q(2)]]) },
        ProductInstance { name: "mixed_x_s3_identity", left: mixed_diag(), right: s3_identity() },
    ]
}

pub fn addition_instances() -> Vec<AdditionInstance> {
    let mut out = Vec::new();
    let mut add = |name: &str, system: &System, subgroup: SpecData| {
        out.push(AdditionInstance { name: name.to_string(), system: system.clone(), subgroup });
    };
    let d = diag_half();
    add("diag_half/axis", &d, span(&[1, 0]));
    add("diag_half/diagonal", &d, span(&[1, 1]));
    add("diag_half/trivial", &d, trivial_data(&d));
    add("diag_half/whole", &d, whole_data(&d));
    let z4 = shift(4, TailMode::Compact, 1);
    add("shift_z4/even", &z4, alphabet_sub(&z4, 2));
    add("shift_z4/trivial", &z4, trivial_data(&z4));
    add("shift_z4/whole", &z4, whole_data(&z4));
    let j = jordan_half();
    add("jordan/axis", &j, span(&[1, 0]));
    add("jordan/trivial", &j, trivial_data(&j));
    add("jordan/whole", &j, whole_data(&j));
    let m = mixed_diag();
    add("mixed/expanding", &m, span(&[0, 1]));
    add("mixed/contracting", &m, span(&[1, 0]));
    let l4 = shift(4, TailMode::Laurent, 1);
    add("laurent_z4/even", &l4, alphabet_sub(&l4, 2));
    let c = s3_conjugation();
    let System::Finite(f) = &c else { unreachable!() };
    let t = involution(&f.group);
    add("s3_conjugation/transposition", &c, SpecData::Finite(f.group.closure([t])));
    let a3 = f.group.subgroups().iter().find(|s| s.len() == 3).unwrap().clone();
    add("s3_conjugation/a3", &c, SpecData::Finite(a3));
    let p = System::make_product(q2_half(), shift(2, TailMode::Compact, 1));
    let System::Product(a, b) = &p else { unreachable!() };
    add(
        "q2_half_x_shift_z2/first",
        &p,
        SpecData::Pair(Box::new(whole_data(a)), Box::new(trivial_data(b))),
    );
    let s = singular_half();
    add("singular/axis", &s, span(&[1, 0]));
    out
}

/// Groups for the exhaustive index-identity checks.
pub fn index_groups() -> Vec<(&'static str, FiniteGroup)> {
    vec![
        ("S3", FiniteGroup::symmetric3()),
        ("D4", FiniteGroup::dihedral4()),
        ("Q8", FiniteGroup::quaternion8()),
        ("Z12", FiniteGroup::cyclic(12).expect("cyclic group")),
        ("A4", FiniteGroup::alternating4()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_is_large_and_named_uniquely() {
        let s = systems();
        assert!(s.len() >= 12);
        let mut names: Vec<_> = s.iter().map(|e| e.name).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), s.len());
        for e in &s {
            for (n, d) in &e.subgroups {
                let spec = e.system.spec(d.clone()).unwrap();
                assert!(spec.flags.invariant, "{}/{n}", e.name);
            }
        }
    }

    #[test]
    fn sign_map_has_image_of_order_two() {
        let System::Finite(f) = s3_sign() else { unreachable!() };
        assert_eq!(f.image(&f.group.whole()).len(), 2);
    }
}
