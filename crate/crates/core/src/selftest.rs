//! Randomized property suites runnable from the command line.

use rand::seq::SliceRandom;

use crate::asymlp::{asym_feasible, feasible_at, SolveOptions};
use crate::certificate::{
    build_certificate, build_omega, certificate_gamma, is_trivial_at, is_trivial_via_certificate, omega_det_nonzero,
    reduce_omega_chain,
};
use crate::decide::{decide_plinear, verify_decision, DecideOptions, SubsetQuery};
use crate::ratfield::{rat, Rational};
use crate::report::{SelftestReport, SuiteJson};
use crate::testgen;

const MAX_EXAMPLES: usize = 3;

struct Suite {
    name: &'static str,
    trials: usize,
    failures: usize,
    examples: Vec<String>,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Suite {
            name,
            trials: 0,
            failures: 0,
            examples: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, example: impl FnOnce() -> String) {
        self.trials += 1;
        if !ok {
            self.failures += 1;
            if self.examples.len() < MAX_EXAMPLES {
                self.examples.push(example());
            }
        }
    }

    fn finish(self) -> SuiteJson {
        SuiteJson {
            name: self.name.to_string(),
            trials: self.trials,
            failures: self.failures,
            examples: self.examples,
        }
    }
}

/// Runs every suite with `trials` random cases each (the Ω suite always
/// covers `N = 2 … 10`).
pub fn run_selftest(seed: u64, trials: usize) -> SelftestReport {
    let mut rng = testgen::rng(seed);
    let mut suites = Vec::new();

    let mut s = Suite::new("certificate decides triviality");
    for _ in 0..trials {
        let x = testgen::scalar_set(&mut rng, 8, 100);
        let ok = match (is_trivial_via_certificate(&x), certificate_gamma(&x)) {
            (Ok(t), Ok(g)) => {
                t == x.all_zero()
                    && [rat(2), rat(100)]
                        .iter()
                        .all(|d| is_trivial_at(&x, &(&g + d)) == x.all_zero())
            }
            _ => false,
        };
        s.record(ok, || format!("{:?}", x.values().iter().map(ToString::to_string).collect::<Vec<_>>()));
    }
    suites.push(s.finish());

    let mut s = Suite::new("expansion matches closed form");
    for _ in 0..trials {
        let x = testgen::scalar_set(&mut rng, 8, 100);
        s.record(build_certificate(&x).is_ok(), || format!("{:?}", x.values()));
    }
    suites.push(s.finish());

    let mut s = Suite::new("omega chain and determinant");
    for n in 2..=10 {
        let ok = build_omega(n).is_ok_and(|m| {
            reduce_omega_chain(&m).is_ok_and(|t| t == rat(n as i64 - 1)) && omega_det_nonzero(&m)
        });
        s.record(ok, || format!("N = {n}"));
    }
    suites.push(s.finish());

    let solve = SolveOptions::default();
    let mut s = Suite::new("asymptotic verdict matches fixed K");
    for _ in 0..trials {
        let sys = testgen::asym_system(&mut rng, 6, 10);
        let ok = asym_feasible(&sys, &solve).is_ok_and(|v| {
            oracle_points(&v.threshold)
                .iter()
                .all(|k0| feasible_at(&sys, k0, &solve).is_ok_and(|f| f.feasible == v.feasible))
        });
        s.record(ok, || sys.to_string());
    }
    suites.push(s.finish());

    let opts = DecideOptions::default();
    let mut audit = Suite::new("decisions pass the audit");
    let mut order = Suite::new("verdict independent of subset order");
    for _ in 0..trials.div_ceil(4) {
        let sys = testgen::linear_system(&mut rng, 4, 5);
        let mut names = testgen::subset(&mut rng, &sys);
        let q = SubsetQuery::new(names.clone()).expect("generated subsets are valid");
        let first = decide_plinear(&sys, &q, &opts);
        let ok = first
            .as_ref()
            .is_ok_and(|d| verify_decision(&sys, &q, d, &opts).is_ok_and(|r| r.passed()));
        audit.record(ok, || format!("{} with subset {}", sys.to_string().trim_end(), names.join(" ")));

        names.shuffle(&mut rng);
        let q = SubsetQuery::new(names.clone()).expect("permutation stays valid");
        let second = decide_plinear(&sys, &q, &opts);
        let same = match (&first, &second) {
            (Ok(a), Ok(b)) => a.part1_feasible == b.part1_feasible && a.part2_nontrivial == b.part2_nontrivial,
            _ => false,
        };
        order.record(same, || format!("{} with subset {}", sys.to_string().trim_end(), names.join(" ")));
    }
    suites.push(audit.finish());
    suites.push(order.finish());

    SelftestReport { seed, suites }
}

/// `k*+1, 10k*, 1000k*`.
pub fn oracle_points(threshold: &Rational) -> [Rational; 3] {
    [threshold + rat(1), threshold * rat(10), threshold * rat(1000)]
}
