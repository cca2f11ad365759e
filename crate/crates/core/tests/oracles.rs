//! Worked examples checked against independently computed values.

use std::sync::Arc;

use num_rational::BigRational;
use tdlc::backends::linalg::q;
use tdlc::backends::{FiniteGroup, FiniteSystem, PadicModule, Profile, TailMode, TailVerdict};
use tdlc::catalog;
use tdlc::cotrajectory::*;
use tdlc::dynamics::*;
use tdlc::{entropy_from_index, ExactEntropy, Handle, IndexValue, SpecData, System};

fn frac(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

fn log(n: u32) -> ExactEntropy {
    ExactEntropy::log_of(n).unwrap()
}

fn pmod(p: u64, rows: &[&[i64]]) -> PadicModule {
    let lat: Vec<Vec<BigRational>> = rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
    PadicModule::new(p, rows[0].len(), &[], &lat)
}

/// p-adic valuation of an integer determinant, computed by trial division.
fn det_valuation(p: i64, rows: &[&[i64]]) -> u64 {
    let det: i64 = match rows.len() {
        1 => rows[0][0],
        2 => rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0],
        _ => unimplemented!(),
    };
    assert_ne!(det, 0);
    let (mut d, mut v) = (det.abs(), 0);
    while d % p == 0 {
        d /= p;
        v += 1;
    }
    v
}

fn trivial_at(sys: &System, cells: &[i64]) -> Handle {
    let System::Shift(s) = sys else { unreachable!() };
    let (lo, hi) = (cells[0], *cells.last().unwrap());
    let window = (lo..=hi).map(|i| if cells.contains(&i) { s.trivial_sub() } else { s.full() }).collect();
    Handle::Shift(Profile::new(s.full(), s.full(), lo, window))
}

fn probe() -> Probe {
    Probe { n_max: 16, tidy: 16, base: 3, resolution: 2 }
}

#[test]
fn lattice_index_matches_determinant() {
    let cases: [&[&[i64]]; 4] = [&[&[4]], &[&[1, 0], &[0, 4]], &[&[2, 1], &[0, 6]], &[&[3, 5], &[1, 7]]];
    for rows in cases {
        let l = pmod(2, rows);
        let zp = PadicModule::standard(2, rows.len(), 0);
        assert_eq!(zp.index_of(&l).unwrap(), IndexValue::power(2, det_valuation(2, rows)));
    }
    assert_eq!(PadicModule::standard(2, 1, 0).intersect(&PadicModule::standard(2, 1, 2)), PadicModule::standard(2, 1, 2));
}

#[test]
fn contract_examples() {
    let s = catalog::q2_half();
    let z2 = s.base_family(0);
    let half_z2 = Handle::Padic(pmod(2, &[&[1]]).scale(-1));
    assert_eq!(s.image(&z2).unwrap(), half_z2);
    assert_eq!(s.preimage(&z2).unwrap(), s.base_family(1));
    assert_eq!(s.index(&s.base_family(2), &z2).unwrap(), IndexValue::finite(4u32).unwrap());

    let sh = catalog::shift(2, TailMode::Compact, 1);
    let u0 = trivial_at(&sh, &[0]);
    assert_eq!(sh.intersect(&u0, &trivial_at(&sh, &[1])).unwrap(), trivial_at(&sh, &[0, 1]));
    assert_eq!(sh.image(&u0).unwrap(), trivial_at(&sh, &[-1]));
    assert_eq!(sh.preimage(&u0).unwrap(), trivial_at(&sh, &[1]));
    // |F|^|window|
    assert_eq!(sh.index(&trivial_at(&sh, &[0, 1]), &sh.whole()).unwrap(), IndexValue::finite(4u32).unwrap());
    for k in 0..4 {
        let cells: Vec<i64> = (-(k as i64)..=k as i64).collect();
        assert_eq!(sh.base_family(k), trivial_at(&sh, &cells));
    }

    let g = FiniteGroup::symmetric3();
    let s3 = System::Finite(FiniteSystem::identity(Arc::new(g.clone())));
    let t = Handle::Finite(g.subgroups().iter().find(|x| x.len() == 2).unwrap().clone());
    let a3 = Handle::Finite(g.subgroups().iter().find(|x| x.len() == 3).unwrap().clone());
    assert_eq!(s3.intersect(&t, &a3).unwrap(), s3.trivial_handle());
    assert_eq!(s3.set_product(&t, &a3).unwrap(), s3.whole());
    assert_eq!(s3.base_family(0), s3.whole());
    assert_eq!(s3.base_family(3), s3.trivial_handle());
}

#[test]
fn quotient_and_restriction_examples() {
    let d = catalog::diag_half();
    let h = d.spec(SpecData::Padic(vec![vec![q(1), q(0)]])).unwrap();
    assert_eq!(d.quotient_system(&h).unwrap(), catalog::q2_half());
    assert_eq!(d.restrict_system(&h).unwrap(), catalog::q2_half());
    let triv = d.trivial_spec();
    assert_eq!(d.quotient_system(&triv).unwrap(), d);
    assert_eq!(d.restrict_system(&d.whole_spec()).unwrap(), d);
}

#[test]
fn cotrajectory_examples() {
    let s = catalog::q2_half();
    let u = s.base_family(0);
    assert_eq!(minus_n(&s, &u, 3).unwrap(), s.base_family(3));
    assert_eq!(minus_n(&s, &u, 0).unwrap(), u);
    let t = alpha_sequence(&s, &u, 8).unwrap();
    for r in &t.rows {
        assert_eq!(r.c, IndexValue::power(2, r.n as u64));
    }
    assert_eq!(t.stabilization, Some(0));

    let dbl = catalog::padic(2, vec![vec![q(2)]]);
    for n in 0..5 {
        assert_eq!(plus_n(&dbl, &u, n).unwrap(), dbl.base_family(n));
    }

    let sh = catalog::shift(2, TailMode::Compact, 1);
    let u0 = trivial_at(&sh, &[0]);
    assert_eq!(minus_n(&sh, &u0, 2).unwrap(), trivial_at(&sh, &[0, 1, 2]));
    let t = alpha_sequence(&sh, &u0, 8).unwrap();
    for r in &t.rows {
        assert_eq!(r.c, IndexValue::power(2, r.n as u64));
    }
    assert_eq!(t.stabilization, Some(0));

    let z4 = catalog::shift(4, TailMode::Compact, 1);
    assert_eq!(htop_limit_estimate(&z4, &trivial_at(&z4, &[0]), 8).unwrap(), log(4));

    let g = Arc::new(FiniteGroup::alternating4());
    for map in g.endomorphisms().into_iter().take(6) {
        let f = System::Finite(FiniteSystem::new(g.clone(), map).unwrap());
        for h in g.subgroups() {
            let u = Handle::Finite(h.clone());
            let t = alpha_sequence(&f, &u, g.order() + 1).unwrap();
            assert!(t.rows[g.order()..].iter().all(|r| r.alpha == IndexValue::one()));
            assert_eq!(htop_local(&f, &u, 16).unwrap(), ExactEntropy::zero());
        }
    }
}

#[test]
fn tidiness_examples() {
    let m = catalog::mixed_diag();
    let u = m.base_family(0);
    let System::Padic(p) = &m else { unreachable!() };
    let e1 = PadicModule::new(2, 2, &[], &[vec![q(1), q(0)]]);
    let e2 = PadicModule::new(2, 2, &[], &[vec![q(0), q(1)]]);
    assert_eq!(plus_group(&m, &u, 16).unwrap().handle, Handle::Padic(e2));
    assert_eq!(minus_group(&m, &u, 16).unwrap(), Handle::Padic(e1));
    assert!(is_tidy_above(&m, &u, 16).unwrap());
    assert_eq!(p.newton().entropy_exponent(), 1);

    let sh = catalog::shift(2, TailMode::Compact, 1);
    let u0 = trivial_at(&sh, &[0]);
    let System::Shift(ss) = &sh else { unreachable!() };
    let plus = Profile::new(ss.trivial_sub(), ss.full(), 1, vec![]);
    assert_eq!(plus_group(&sh, &u0, 16).unwrap().handle, Handle::Shift(plus.clone()));
    assert!(matches!(ss.tidy_below_tails(&plus), TailVerdict::NotClosed(_)));
    assert_eq!(tidy_above_transform(&sh, &u0, 16).unwrap().0, u0);
    assert!(!is_minimizing(&sh, &u0, &IndexValue::one()).unwrap());
    assert!(is_minimizing(&sh, &sh.whole(), &IndexValue::one()).unwrap());
}

#[test]
fn dynamics_examples() {
    let p = probe();
    let s = catalog::q2_half();
    let e = topological_entropy(&s, &p).unwrap();
    assert_eq!((e.value, e.achieved_at), (log(2), s.base_family(0)));
    assert_eq!(scale(&s, &p).unwrap().value, IndexValue::finite(2u32).unwrap());
    assert_eq!(nub(&s, &p).unwrap().handle, s.trivial_handle());

    let sh = catalog::shift(2, TailMode::Compact, 1);
    let e = topological_entropy(&sh, &p).unwrap();
    assert_eq!(e.value, log(2));
    assert!(e.table.iter().all(|x| x.value == Ok(log(2))));
    let sc = scale(&sh, &p).unwrap();
    assert_eq!((sc.value, sc.witness), (IndexValue::one(), sh.whole()));
    assert_eq!(nub(&sh, &p).unwrap().handle, sh.whole());

    let l3 = catalog::shift(3, TailMode::Laurent, 1);
    let System::Shift(ls) = &l3 else { unreachable!() };
    let sc = scale(&l3, &p).unwrap();
    assert_eq!(sc.value, IndexValue::finite(3u32).unwrap());
    // F[[t]]: trivial in negative degrees, full from 0 on
    assert!(is_minimizing(&l3, &Handle::Shift(Profile::new(ls.trivial_sub(), ls.full(), 0, vec![])), &sc.value).unwrap());

    let f = catalog::s3_sign();
    assert_eq!(topological_entropy(&f, &p).unwrap().value, ExactEntropy::zero());
    let id = catalog::s3_identity();
    assert_eq!(nub(&id, &p).unwrap().handle, id.trivial_handle());
}

#[test]
fn phi_n_examples() {
    let s = catalog::q2_half();
    assert_eq!(entropy_lower_bound_phi_n(&s, &[s.base_family(0)]).unwrap().value, log(2));
    let sh = catalog::shift(2, TailMode::Compact, 1);
    let System::Shift(ss) = &sh else { unreachable!() };
    let m = Handle::Shift(Profile::new(ss.trivial_sub(), ss.full(), 1, vec![]));
    let b = entropy_lower_bound_phi_n(&sh, &[m, trivial_at(&sh, &[0])]).unwrap();
    assert_eq!(b.value, log(2));
    assert_eq!(b.rejected.len(), 1);
    assert!(b.value <= topological_entropy(&sh, &probe()).unwrap().value);
}

#[test]
fn newton_polygon_examples() {
    let cases = [
        (catalog::diag_half(), 2u64),
        (catalog::jordan_half(), 2),
        (catalog::mixed_diag(), 1),
        (catalog::singular_half(), 1),
        (catalog::padic(2, vec![vec![frac(1, 8)]]), 3),
        (catalog::padic(3, vec![vec![frac(1, 9), q(0)], vec![q(0), q(3)]]), 2),
    ];
    for (sys, e) in cases {
        let System::Padic(p) = &sys else { unreachable!() };
        assert_eq!(p.newton().entropy_exponent(), e);
        let expect = entropy_from_index(&IndexValue::power(p.p, e));
        assert_eq!(htop_local(&sys, &sys.base_family(0), 16).unwrap(), expect);
        assert_eq!(p.oracle_index(), IndexValue::power(p.p, e));
    }
}
