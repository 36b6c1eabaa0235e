mod common;

use std::collections::BTreeMap;

use rand::Rng;

use asymcert::asymlp::{asym_feasible, feasible_at, steady_state_threshold, SolveOptions};
use asymcert::certificate::{
    build_certificate, build_omega, certificate_value, elementary_symmetric, omega_determinant, ScalarSet,
};
use asymcert::decide::{decide_plinear, verify_decision, DecideOptions, SubsetQuery};
use asymcert::linsys::parse_system;
use asymcert::ratfield::{rat, ratio, PolyK, Rational};
use asymcert::testgen;
use asymcert::transform::{strict_to_nonstrict, AsymConstraint, AsymSystem};

use common::{brute_comb, fm_dense_feasible, fm_part2, fm_system_feasible, leibniz_det};

#[test]
fn comb_matches_enumeration() {
    let mut rng = testgen::rng(11);
    for _ in 0..100 {
        let len = rng.random_range(0..=7);
        let s: Vec<u64> = (0..len).map(|_| rng.random_range(1..=12)).collect();
        for m in 0..=len {
            assert_eq!(elementary_symmetric(&s, m).unwrap(), brute_comb(&s, m), "{s:?}, m = {m}");
        }
    }
}

#[test]
fn omega_determinant_matches_leibniz() {
    for n in 2..=7 {
        let m = build_omega(n).unwrap();
        let det = leibniz_det(m.entries());
        assert_eq!(omega_determinant(&m), det, "N = {n}");
        assert_ne!(det, rat(0));
    }
}

#[test]
fn certificate_fraction_matches_direct_sum() {
    let mut rng = testgen::rng(12);
    for _ in 0..100 {
        let x = testgen::scalar_set(&mut rng, 6, 50);
        let cert = build_certificate(&x).unwrap();
        for k0 in [rat(0), rat(3), ratio(7, 2), rat(1000)] {
            let direct: Rational = x
                .values()
                .iter()
                .zip(1..)
                .map(|(xi, i)| xi / (&k0 + rat(i)))
                .sum();
            assert_eq!(cert.numerator.eval(&k0) / cert.denominator.eval(&k0), direct);
            assert_eq!(certificate_value(&x, &k0), direct);
        }
    }
}

#[test]
fn fixed_k_simplex_matches_fourier_motzkin() {
    let mut rng = testgen::rng(13);
    let opts = SolveOptions::default();
    for _ in 0..150 {
        let sys = testgen::asym_system(&mut rng, 4, 6);
        for k0 in [rat(2), ratio(7, 3), rat(20)] {
            let rows: Vec<_> = sys.constraints().iter().map(|c| c.specialize(&k0)).collect();
            let truth = fm_dense_feasible(&rows, sys.variables());
            let got = feasible_at(&sys, &k0, &opts).unwrap();
            assert_eq!(got.feasible, truth, "K = {k0}\n{sys}");
            if let Some(w) = got.witness_at(&k0).unwrap() {
                assert!(sys.satisfied_at(&w, &k0));
            }
        }
    }
}

#[test]
fn part_one_matches_fourier_motzkin() {
    let mut rng = testgen::rng(14);
    let opts = DecideOptions::default();
    for _ in 0..120 {
        let sys = testgen::linear_system(&mut rng, 4, 6);
        let names = testgen::subset(&mut rng, &sys);
        let q = SubsetQuery::new(names).unwrap();
        let d = decide_plinear(&sys, &q, &opts).unwrap();
        assert_eq!(d.part1_feasible, fm_system_feasible(&sys), "{sys}");
    }
}

#[test]
fn part_two_matches_fourier_motzkin() {
    let mut rng = testgen::rng(15);
    let opts = DecideOptions::default();
    let mut yes = 0;
    for _ in 0..120 {
        let sys = testgen::linear_system(&mut rng, 4, 6);
        let names = testgen::subset(&mut rng, &sys);
        let truth = fm_part2(&sys, &names);
        let q = SubsetQuery::new(names.clone()).unwrap();
        let d = decide_plinear(&sys, &q, &opts).unwrap();
        assert_eq!(d.part2_nontrivial, truth, "subset {names:?}\n{sys}");
        yes += usize::from(truth == Some(true));
        assert!(verify_decision(&sys, &q, &d, &opts).unwrap().passed());
    }
    assert!(yes > 10, "too few YES cases to be meaningful: {yes}");
}

#[test]
fn literal_mode_is_sound_but_not_complete() {
    let mut rng = testgen::rng(16);
    let literal = DecideOptions {
        literal: true,
        ..DecideOptions::default()
    };
    for _ in 0..80 {
        let sys = testgen::linear_system(&mut rng, 3, 5);
        let names = testgen::subset(&mut rng, &sys);
        let truth = fm_part2(&sys, &names);
        let q = SubsetQuery::new(names).unwrap();
        let d = decide_plinear(&sys, &q, &literal).unwrap();
        assert_eq!(d.part1_feasible, truth.is_some());
        if d.part2_nontrivial == Some(true) {
            assert_eq!(truth, Some(true), "{sys}");
        }
        assert!(verify_decision(&sys, &q, &d, &literal).unwrap().passed());
    }
    // bounded strict interval: a solution exists with y1 = 1/2, the literal
    // gadget cannot see it
    let sys = parse_system("y1 > 0\ny1 < 1").unwrap();
    let q = SubsetQuery::new(["y1"]).unwrap();
    assert_eq!(fm_part2(&sys, q.names()), Some(true));
    assert_eq!(decide_plinear(&sys, &q, &literal).unwrap().part2_nontrivial, Some(false));
}

fn one_var(rows: &[(&[i64], &[i64])]) -> AsymSystem {
    AsymSystem::new(
        vec!["y".into()],
        rows.iter()
            .map(|(a, b)| AsymConstraint {
                coeffs: BTreeMap::from([("y".to_string(), PolyK::from_ints(a))]),
                rhs: PolyK::from_ints(b),
            })
            .collect(),
    )
    .unwrap()
}

#[test]
fn threshold_examples() {
    let opts = SolveOptions::default();
    // y ≥ K - 5, y ≤ 0
    let s = one_var(&[(&[-1], &[5, -1]), (&[1], &[0])]);
    let k = steady_state_threshold(&s, &opts).unwrap();
    assert!(k >= rat(5));
    assert!(feasible_at(&s, &rat(3), &opts).unwrap().feasible);
    for k0 in [&k + rat(1), &k * rat(10), &k * rat(1000)] {
        assert!(!feasible_at(&s, &k0, &opts).unwrap().feasible);
    }
    assert!(!asym_feasible(&s, &opts).unwrap().feasible);

    // y ≤ 1, y ≥ 2 has no K at all
    let s = one_var(&[(&[1], &[1]), (&[-1], &[-2])]);
    assert_eq!(steady_state_threshold(&s, &opts).unwrap(), rat(1));
    assert!(!feasible_at(&s, &rat(7), &opts).unwrap().feasible);
}

#[test]
fn strict_gadget_example() {
    let sys = parse_system("y1 < 0").unwrap();
    let a = strict_to_nonstrict(&sys).unwrap();
    let v = asym_feasible(&a, &SolveOptions::default()).unwrap();
    assert!(v.feasible);
    let k0 = &v.threshold + rat(1);
    let w = v.witness_at(&k0).unwrap().unwrap();
    assert!(w["y1"] < rat(0));
    assert!(w["e"] >= rat(1) / &k0);
}

#[test]
fn all_zero_scalars_have_zero_numerator() {
    for n in 1..=8 {
        let x = ScalarSet::from_ints(&vec![0; n]).unwrap();
        assert!(build_certificate(&x).unwrap().numerator.is_zero());
    }
}
