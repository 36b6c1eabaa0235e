use std::cmp::Ordering;

use num_traits::{One, Signed};
use proptest::prelude::*;
use rand::seq::SliceRandom;

use asymcert::asymlp::{asym_feasible, feasible_at, SolveOptions};
use asymcert::certificate::{build_certificate, certificate_gamma, elementary_symmetric, ScalarSet};
use asymcert::decide::{decide_plinear, DecideOptions, SubsetQuery};
use asymcert::linsys::{parse_system, BranchSign, CertificateRow, LinearSystem};
use asymcert::ratfield::{rat, ratio, PolyK, RatFuncK, Rational, Sign};
use asymcert::testgen;
use asymcert::transform::{add_certificate_constraint, scale_certificate_vars, strict_to_nonstrict};

fn poly() -> impl Strategy<Value = PolyK> {
    prop::collection::vec(-6i64..=6, 0..4).prop_map(|c| PolyK::from_ints(&c))
}

fn nonzero_poly() -> impl Strategy<Value = PolyK> {
    poly().prop_filter("nonzero", |p| !p.is_zero())
}

fn ratfunc() -> impl Strategy<Value = RatFuncK> {
    (poly(), nonzero_poly()).prop_map(|(n, d)| RatFuncK::new(n, d).unwrap())
}

fn is_canonical(r: &RatFuncK) -> bool {
    let den = r.den();
    let lead_positive = den.leading_coeff().is_some_and(|c| c.is_positive());
    let (content, _) = den.primitive_split();
    let coprime = r.num().is_zero() || r.num().gcd(den).degree() == 0;
    lead_positive && coprime && (content.is_one() || r.num().is_zero())
}

fn sign_at(r: &RatFuncK, k0: &Rational) -> Option<Sign> {
    r.eval_at(k0).ok().map(|v| Sign::of(&v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn field_laws(a in ratfunc(), b in ratfunc(), c in ratfunc()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a + &RatFuncK::zero(), a.clone());
        prop_assert_eq!(&a * &RatFuncK::one(), a.clone());
        if !a.is_zero() {
            let inv = RatFuncK::one().checked_div(&a).unwrap();
            prop_assert_eq!(&a * &inv, RatFuncK::one());
            prop_assert!(is_canonical(&inv));
        } else {
            prop_assert!(RatFuncK::one().checked_div(&a).is_err());
        }
    }

    #[test]
    fn results_stay_canonical(a in ratfunc(), b in ratfunc()) {
        for r in [&a + &b, &a - &b, &a * &b, -&a] {
            prop_assert!(is_canonical(&r), "{}", r);
            let again = RatFuncK::new(r.num().clone(), r.den().clone()).unwrap();
            prop_assert_eq!(again, r);
        }
    }

    #[test]
    fn order_is_compatible(a in ratfunc(), b in ratfunc(), c in ratfunc()) {
        prop_assert_eq!(a.compare(&b), b.compare(&a).reverse());
        if a.compare(&b) == Ordering::Less {
            prop_assert_eq!((&a + &c).compare(&(&b + &c)), Ordering::Less);
        }
        if a.sign_at_infinity() == Sign::Positive && b.sign_at_infinity() == Sign::Positive {
            prop_assert_eq!((&a * &b).sign_at_infinity(), Sign::Positive);
        }
        if a.compare(&b) != Ordering::Greater && b.compare(&c) != Ordering::Greater {
            prop_assert_ne!(a.compare(&c), Ordering::Greater);
        }
    }

    #[test]
    fn sign_at_infinity_is_sign_past_the_bound(a in ratfunc()) {
        let past = a.root_bound().unwrap_or_else(Rational::one) + rat(1);
        for k0 in [past.clone(), &past * rat(7), &past * rat(1000)] {
            prop_assert_eq!(sign_at(&a, &k0), Some(a.sign_at_infinity()));
        }
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in ratfunc(), b in ratfunc(), k in -20i64..=20) {
        let k0 = ratio(2 * k + 1, 2);
        if let (Ok(x), Ok(y)) = (a.eval_at(&k0), b.eval_at(&k0)) {
            if let Ok(s) = (&a + &b).eval_at(&k0) {
                prop_assert_eq!(s, &x + &y);
            }
            if let Ok(p) = (&a * &b).eval_at(&k0) {
                prop_assert_eq!(p, &x * &y);
            }
        }
    }

    #[test]
    fn window_difference(set in prop::collection::btree_set(1u64..=20, 0..6), a in 1u64..=20, b in 1u64..=20, m in 1usize..=6) {
        let s: Vec<u64> = set.into_iter().collect();
        prop_assume!(m <= s.len() + 1);
        let with = |x: u64| { let mut v = s.clone(); v.push(x); v };
        let lhs = elementary_symmetric(&with(a), m).unwrap() - elementary_symmetric(&with(b), m).unwrap();
        let rhs = rat(a as i64 - b as i64) * elementary_symmetric(&s, m - 1).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn gamma_bounds_every_root(xs in prop::collection::vec(-50i64..=50, 1..=7)) {
        let x = ScalarSet::from_ints(&xs).unwrap();
        let p = build_certificate(&x).unwrap().numerator;
        let g = certificate_gamma(&x).unwrap();
        prop_assert!(g >= rat(1));
        if !p.is_zero() {
            let s = Sign::of(&p.eval(&(&g + rat(1))));
            prop_assert_ne!(s, Sign::Zero);
            for d in [ratio(1, 3), rat(2), rat(5), rat(50), rat(10_000)] {
                prop_assert_eq!(Sign::of(&p.eval(&(&g + d))), s);
            }
        }
    }
}

fn seeded_system(seed: u64, vars: usize, rows: usize) -> LinearSystem {
    testgen::linear_system(&mut testgen::rng(seed), vars, rows)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn text_round_trip(seed in any::<u64>()) {
        let sys = seeded_system(seed, 5, 6);
        let text = sys.to_string();
        prop_assert_eq!(parse_system(&text).unwrap(), sys.clone());
        prop_assert_eq!(LinearSystem::from_json(&sys.to_json()).unwrap(), sys);
    }

    #[test]
    fn normalize_is_idempotent(seed in any::<u64>()) {
        let sys = seeded_system(seed, 4, 6);
        let n = sys.normalize();
        prop_assert!(n.is_normalized());
        prop_assert_eq!(n.normalize(), n.clone());
        let mut rng = testgen::rng(seed ^ 1);
        for _ in 0..10 {
            let point = sys.variables().iter().map(|v| (v.clone(), testgen::small_rational(&mut rng, 3))).collect();
            prop_assert_eq!(n.satisfied_by(&point), sys.satisfied_by(&point));
        }
    }

    #[test]
    fn transforms_are_linear_in_k(seed in any::<u64>(), positive in any::<bool>()) {
        let sys = seeded_system(seed, 4, 6);
        let step1 = strict_to_nonstrict(&sys).unwrap();
        prop_assert!(step1.max_degree() <= 1);
        prop_assert_eq!(step1.slack().is_some(), sys.count_strict() > 0);
        let sign = if positive { BranchSign::Positive } else { BranchSign::Negative };
        let subset = testgen::subset(&mut testgen::rng(seed), &sys);
        let branch = scale_certificate_vars(&add_certificate_constraint(&sys, &subset, sign).unwrap()).unwrap();
        prop_assert!(branch.max_degree() <= 1);
        prop_assert!(branch.slack().is_some());
        for (y, s) in branch.substitutions() {
            prop_assert!(subset.contains(y));
            prop_assert!(s.offset >= 1);
            prop_assert!(branch.variables().contains(&s.scaled));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn specialized_solutions_pull_back(seed in any::<u64>(), k in 1i64..=40, positive in any::<bool>()) {
        let sys = seeded_system(seed, 3, 5);
        let k0 = rat(k);
        let opts = SolveOptions::default();
        let step1 = strict_to_nonstrict(&sys).unwrap();
        if let Some(w) = feasible_at(&step1, &k0, &opts).unwrap().witness_at(&k0).unwrap() {
            prop_assert!(sys.satisfied_by(&step1.pull_back(&w, &k0)));
        }
        let sign = if positive { BranchSign::Positive } else { BranchSign::Negative };
        let subset = testgen::subset(&mut testgen::rng(seed), &sys);
        let branch = scale_certificate_vars(&add_certificate_constraint(&sys, &subset, sign).unwrap()).unwrap();
        if let Some(w) = feasible_at(&branch, &k0, &opts).unwrap().witness_at(&k0).unwrap() {
            let y = branch.pull_back(&w, &k0);
            prop_assert!(sys.satisfied_by(&y));
            let value = CertificateRow { subset: subset.clone(), sign }.value_at(&y, &k0);
            prop_assert_eq!(Sign::of(&value), if positive { Sign::Positive } else { Sign::Negative });
        }
    }

    #[test]
    fn positive_row_scaling_keeps_the_verdict(seed in any::<u64>(), row in 0usize..10, c in 1i64..=9, d in 0i64..=2) {
        let mut sys = testgen::asym_system(&mut testgen::rng(seed), 4, 6);
        let opts = SolveOptions::default();
        let before = asym_feasible(&sys, &opts).unwrap().feasible;
        let index = row % sys.constraints().len();
        // c + d·K is positive for every K ≥ 1
        sys.scale_row(index, &PolyK::from_ints(&[c, d]));
        prop_assert_eq!(asym_feasible(&sys, &opts).unwrap().feasible, before);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn subset_order_and_growth(seed in any::<u64>()) {
        let sys = seeded_system(seed, 4, 5);
        let opts = DecideOptions::default();
        let mut rng = testgen::rng(seed);
        let mut names = sys.variables().to_vec();
        names.shuffle(&mut rng);
        let verdict = |names: &[String]| {
            let d = decide_plinear(&sys, &SubsetQuery::new(names.to_vec()).unwrap(), &opts).unwrap();
            (d.part1_feasible, d.part2_nontrivial)
        };
        let mut previous: Option<bool> = None;
        for k in 1..=names.len() {
            let (p1, p2) = verdict(&names[..k]);
            let mut reversed = names[..k].to_vec();
            reversed.reverse();
            prop_assert_eq!(verdict(&reversed), (p1, p2));
            if previous == Some(true) {
                prop_assert_eq!(p2, Some(true));
            }
            previous = p2;
        }
    }
}

#[test]
fn parse_errors_carry_positions() {
    use asymcert::linsys::ParseError;
    match parse_system("y1 + y2 <= 1\ny1 < abc") {
        Err(ParseError::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 6)),
        other => panic!("{other:?}"),
    }
    assert!(matches!(parse_system("y1 <> 2"), Err(ParseError::UnknownRelation { .. })));
    assert!(matches!(parse_system("vars: a\nb <= 1"), Err(ParseError::Invalid { .. })));
}
