//! Seeded generators for random scalar sets and small systems, shared by
//! `selftest` and the test suites.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::certificate::ScalarSet;
use crate::linsys::{Constraint, LinearSystem, Relation};
use crate::ratfield::{rat, ratio, PolyK, Rational};
use crate::transform::{AsymConstraint, AsymSystem};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A rational `p/q` with `|p/q| ≤ bound` and `q ≤ 9`.
pub fn small_rational<R: Rng>(rng: &mut R, bound: i64) -> Rational {
    let q = rng.random_range(1..=9);
    let p = rng.random_range(-bound * q..=bound * q);
    ratio(p, q)
}

/// `1 ≤ n ≤ max_n` scalars in `[-bound, bound]`, a quarter of them zero; one
/// set in eight is entirely zero.
pub fn scalar_set<R: Rng>(rng: &mut R, max_n: usize, bound: i64) -> ScalarSet {
    let n = rng.random_range(1..=max_n);
    let all_zero = rng.random_ratio(1, 8);
    let values = (0..n)
        .map(|_| {
            if all_zero || rng.random_ratio(1, 4) {
                rat(0)
            } else {
                small_rational(rng, bound)
            }
        })
        .collect();
    ScalarSet::new(values).expect("n ≥ 1")
}

fn names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("y{i}")).collect()
}

/// A system over `y1 …` with at most `max_vars` variables and `max_rows`
/// rows; every coefficient and right-hand side is `a + b·K` with small
/// integers, so degrees stay `≤ 1`.
pub fn asym_system<R: Rng>(rng: &mut R, max_vars: usize, max_rows: usize) -> AsymSystem {
    let vars = names(rng.random_range(1..=max_vars));
    let rows = rng.random_range(1..=max_rows);
    let linear = |rng: &mut R| {
        let a = rng.random_range(-5..=5);
        let b = if rng.random_ratio(1, 3) { rng.random_range(-3..=3) } else { 0 };
        PolyK::from_ints(&[a, b])
    };
    let constraints = (0..rows)
        .map(|_| {
            let mut coeffs = BTreeMap::new();
            for v in &vars {
                if rng.random_ratio(2, 3) {
                    let p = linear(rng);
                    if !p.is_zero() {
                        coeffs.insert(v.clone(), p);
                    }
                }
            }
            AsymConstraint {
                coeffs,
                rhs: linear(rng),
            }
        })
        .collect();
    AsymSystem::new(vars, constraints).expect("generated names are declared")
}

/// A linear system over `y1 … y_n` with every relation kind, integer
/// coefficients in `[-3, 3]` and right-hand sides in `[-4, 4]`.
pub fn linear_system<R: Rng>(rng: &mut R, max_vars: usize, max_rows: usize) -> LinearSystem {
    let vars = names(rng.random_range(1..=max_vars));
    let rows = rng.random_range(1..=max_rows);
    let relations = [Relation::Le, Relation::Lt, Relation::Ge, Relation::Gt, Relation::Eq];
    let mut constraints = Vec::with_capacity(rows);
    while constraints.len() < rows {
        let mut coeffs: BTreeMap<String, Rational> = BTreeMap::new();
        for v in &vars {
            let c = rng.random_range(-3..=3);
            if c != 0 && rng.random_ratio(1, 2) {
                coeffs.insert(v.clone(), rat(c));
            }
        }
        if coeffs.is_empty() {
            continue;
        }
        let relation = relations[rng.random_range(0..relations.len())];
        let rhs = rat(rng.random_range(-4..=4));
        constraints.push(Constraint::new(coeffs, relation, rhs).expect("nonempty"));
    }
    LinearSystem::new(vars, constraints).expect("generated names are declared")
}

/// A nonempty random subset of the system's variables in random order.
pub fn subset<R: Rng>(rng: &mut R, sys: &LinearSystem) -> Vec<String> {
    let mut vars = sys.variables().to_vec();
    vars.shuffle(rng);
    let k = rng.random_range(1..=vars.len());
    vars.truncate(k);
    vars
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    #[test]
    fn seeded_generation_is_deterministic() {
        let run = |seed| {
            let mut r = rng(seed);
            (0..5).map(|_| linear_system(&mut r, 4, 5).to_string()).collect::<Vec<_>>()
        };
        assert_eq!(run(7), run(7));
        assert_ne!(run(7), run(8));
    }

    #[test]
    fn shapes_respect_limits() {
        let mut r = rng(1);
        for _ in 0..50 {
            let s = asym_system(&mut r, 6, 10);
            assert!(s.variables().len() <= 6 && s.constraints().len() <= 10);
            assert!(s.max_degree() <= 1);
            let x = scalar_set(&mut r, 8, 100);
            assert!(x.n() <= 8);
            assert!(x.values().iter().all(|v| v.abs() <= rat(100)));
        }
    }
}
