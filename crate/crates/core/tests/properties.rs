use num_rational::BigRational;
use proptest::prelude::*;
use tdlc::backends::linalg::q;
use tdlc::backends::{PadicModule, Profile, TailMode};
use tdlc::catalog;
use tdlc::cotrajectory::*;
use tdlc::{entropy_add, ExactEntropy, Handle, IndexValue, System};

fn lattice(rows: &[[i64; 2]; 2]) -> PadicModule {
    let lat: Vec<Vec<BigRational>> = rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
    PadicModule::new(2, 2, &[], &lat)
}

fn full_rank() -> impl Strategy<Value = [[i64; 2]; 2]> {
    prop::array::uniform2(prop::array::uniform2(-8i64..=8))
        .prop_filter("nonsingular", |m| m[0][0] * m[1][1] - m[0][1] * m[1][0] != 0)
}

fn entry() -> impl Strategy<Value = BigRational> {
    (-3i64..=3, 0u32..=2).prop_map(|(a, k)| BigRational::new(a.into(), (1i64 << k).into()))
}

fn matrix() -> impl Strategy<Value = Vec<Vec<BigRational>>> {
    prop::collection::vec(prop::collection::vec(entry(), 2), 2)
}

fn profile(sys: &System) -> impl Strategy<Value = Handle> {
    let System::Shift(s) = sys else { unreachable!() };
    let (full, count) = (s.full(), s.sub_count());
    (-2i64..=2, prop::collection::vec(0..count, 1..5))
        .prop_map(move |(off, w)| Handle::Shift(Profile::new(full, full, off, w)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lattice_index_identities(a in full_rank(), b in full_rank()) {
        let (l1, l2) = (lattice(&a), lattice(&b));
        let (sum, meet) = (l1.sum(&l2), l1.intersect(&l2));
        let z = PadicModule::standard(2, 2, 0);
        let i = |big: &PadicModule, small: &PadicModule| big.index_of(small).unwrap();
        prop_assert_eq!(i(&sum, &meet), i(&sum, &l1) * i(&l1, &meet));
        prop_assert_eq!(i(&sum, &l2), i(&l1, &meet));
        if z.contains(&l1) {
            prop_assert_eq!(i(&z, &meet), i(&z, &l1) * i(&l1, &meet));
        }
        prop_assert!(i(&l1, &meet).divides(&i(&sum, &meet)));
    }

    #[test]
    fn module_image_preimage(a in full_rank(), m in matrix()) {
        let sys = System::Padic(tdlc::backends::PadicSystem::new(2, m).unwrap());
        let u = Handle::Padic(lattice(&a));
        let img = sys.image(&u).unwrap();
        let back = sys.preimage(&img).unwrap();
        prop_assert!(sys.contains(&back, &u).unwrap());
        let pre = sys.preimage(&u).unwrap();
        prop_assert!(sys.contains(&u, &sys.image(&pre).unwrap()).unwrap());
        prop_assert_eq!(sys.contains(&back, &sys.kernel()).unwrap(), true);
    }

    #[test]
    fn padic_cotrajectory_laws(a in full_rank(), m in matrix()) {
        let sys = System::Padic(tdlc::backends::PadicSystem::new(2, m).unwrap());
        let u = Handle::Padic(lattice(&a));
        // alpha_sequence itself rejects broken divisibility or monotonicity
        let table = alpha_sequence(&sys, &u, 10).unwrap();
        let local = htop_local(&sys, &u, 16);
        if let (Some(alpha), Ok(h)) = (table.stabilized_alpha(), &local) {
            prop_assert_eq!(&tdlc::entropy_from_index(alpha), h);
        }
        for c in check_cotrajectory_identities(&sys, &u, 6).unwrap() {
            prop_assert_eq!(c.violations, 0, "{}", c.name);
        }
    }

    #[test]
    fn local_entropy_does_not_depend_on_the_lattice(a in full_rank(), m in matrix()) {
        let sys = System::Padic(tdlc::backends::PadicSystem::new(2, m).unwrap());
        let System::Padic(p) = &sys else { unreachable!() };
        let expect = tdlc::entropy_from_index(&p.oracle_index());
        match htop_local(&sys, &Handle::Padic(lattice(&a)), 16) {
            Ok(h) => prop_assert_eq!(h, expect),
            Err(e) => prop_assert!(e.is_unresolved(), "{}", e),
        }
    }

    #[test]
    fn profile_lattice_laws(seed in 0usize..3) {
        let sys = [
            catalog::shift(4, TailMode::Compact, 1),
            catalog::shift(6, TailMode::Compact, -1),
            catalog::shift(8, TailMode::Compact, 1),
        ][seed].clone();
        let strat = (profile(&sys), profile(&sys), profile(&sys));
        let mut runner = proptest::test_runner::TestRunner::deterministic();
        runner.run(&strat, |(x, y, z)| {
            let i = |big: &Handle, small: &Handle| sys.index(small, big).unwrap();
            let meet = sys.intersect(&x, &y).unwrap();
            prop_assert_eq!(&meet, &sys.intersect(&y, &x).unwrap());
            prop_assert_eq!(
                sys.intersect(&meet, &z).unwrap(),
                sys.intersect(&x, &sys.intersect(&y, &z).unwrap()).unwrap()
            );
            let join = sys.set_product(&x, &y).unwrap();
            prop_assert_eq!(i(&join, &y), i(&x, &meet));
            prop_assert_eq!(i(&join, &meet), i(&join, &x) * i(&x, &meet));
            let img = sys.image(&x).unwrap();
            prop_assert!(sys.contains(&sys.preimage(&img).unwrap(), &x).unwrap());
            for c in check_cotrajectory_identities(&sys, &x, 5).unwrap() {
                prop_assert_eq!(c.violations, 0, "{}", c.name);
            }
            prop_assert_eq!(htop_local(&sys, &x, 16).unwrap(), htop_limit_estimate(&sys, &x, 12).unwrap());
            Ok(())
        }).unwrap();
    }

    #[test]
    fn invariant_subgroups_stay_below_plus_chain(k in 0usize..3, n in 0usize..6) {
        // a φ-stable compact H ≤ U lies in every Uₙ
        let sys = catalog::shift(4, TailMode::Compact, 1);
        let System::Shift(s) = &sys else { unreachable!() };
        let two = s.alphabet.subgroups().iter().position(|x| x.len() == 2).unwrap();
        let h = Handle::Shift(Profile::constant(two));
        let u = sys.set_product(&sys.base_family(k), &h).unwrap();
        prop_assert!(sys.contains(&plus_n(&sys, &u, n).unwrap(), &h).unwrap());
    }

    #[test]
    fn entropy_addition_is_commutative_monoid(a in 1u64..50, b in 1u64..50, c in 1u64..50) {
        let e = |x: u64| tdlc::entropy_from_index(&IndexValue::finite(x).unwrap());
        prop_assert_eq!(entropy_add(&e(a), &e(b)), entropy_add(&e(b), &e(a)));
        prop_assert_eq!(entropy_add(&entropy_add(&e(a), &e(b)), &e(c)), entropy_add(&e(a), &entropy_add(&e(b), &e(c))));
        prop_assert_eq!(entropy_add(&e(a), &ExactEntropy::zero()), e(a));
        prop_assert_eq!(entropy_add(&e(a), &e(b)), e(a * b));
    }
}
