//! Independent oracles used by the integration tests. Nothing here calls
//! into the solver it is meant to check.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use num_traits::{Signed, Zero};

use asymcert::linsys::{LinearSystem, Relation};
use asymcert::ratfield::{rat, Rational};

/// `a·x ≤ b`, or `a·x < b` when `strict`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FmRow {
    pub a: Vec<Rational>,
    pub b: Rational,
    pub strict: bool,
}

impl FmRow {
    /// Scaled so the first nonzero coefficient has magnitude one.
    fn normalized(mut self) -> FmRow {
        if let Some(lead) = self.a.iter().find(|c| !c.is_zero()).map(Signed::abs) {
            for c in &mut self.a {
                *c = &*c / &lead;
            }
            self.b = &self.b / &lead;
        }
        self
    }
}

/// Fourier-Motzkin elimination with strictness tracking: feasibility over
/// the reals of a mixed strict/non-strict system.
pub fn fm_feasible(rows: Vec<FmRow>, n_vars: usize) -> bool {
    let mut rows: BTreeSet<FmRow> = rows.into_iter().map(FmRow::normalized).collect();
    for j in 0..n_vars {
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), BTreeSet::new());
        for r in rows {
            if r.a[j].is_positive() {
                pos.push(r);
            } else if r.a[j].is_negative() {
                neg.push(r);
            } else {
                rest.insert(r);
            }
        }
        for (p, q) in pos.iter().cartesian_product(&neg) {
            let (sp, sq) = (&p.a[j], -&q.a[j]);
            let a: Vec<Rational> = p.a.iter().zip(&q.a).map(|(x, y)| x / sp + y / &sq).collect();
            let row = FmRow {
                a,
                b: &p.b / sp + &q.b / &sq,
                strict: p.strict || q.strict,
            };
            rest.insert(row.normalized());
        }
        rows = rest;
    }
    rows.iter().all(|r| if r.strict { r.b.is_positive() } else { !r.b.is_negative() })
}

/// Normalized rows of `sys` in its variable order.
pub fn fm_rows(sys: &LinearSystem) -> Vec<FmRow> {
    let vars = sys.variables();
    let mut out = Vec::new();
    for c in sys.constraints() {
        let a: Vec<Rational> = vars.iter().map(|v| c.coeff(v)).collect();
        let neg = |a: &Vec<Rational>| a.iter().map(|x| -x).collect::<Vec<_>>();
        let b = c.rhs().clone();
        match c.relation() {
            Relation::Le => out.push(FmRow { a, b, strict: false }),
            Relation::Lt => out.push(FmRow { a, b, strict: true }),
            Relation::Ge => out.push(FmRow { a: neg(&a), b: -b, strict: false }),
            Relation::Gt => out.push(FmRow { a: neg(&a), b: -b, strict: true }),
            Relation::Eq => {
                out.push(FmRow { a: neg(&a), b: -b.clone(), strict: false });
                out.push(FmRow { a, b, strict: false });
            }
        }
    }
    out
}

pub fn fm_system_feasible(sys: &LinearSystem) -> bool {
    fm_feasible(fm_rows(sys), sys.variables().len())
}

/// Ground truth for the two-part question: `None` if infeasible, otherwise
/// whether some solution has a nonzero subset variable.
pub fn fm_part2(sys: &LinearSystem, subset: &[String]) -> Option<bool> {
    if !fm_system_feasible(sys) {
        return None;
    }
    let vars = sys.variables();
    let base = fm_rows(sys);
    Some(subset.iter().any(|v| {
        let j = vars.iter().position(|x| x == v).expect("subset names are declared");
        [rat(1), rat(-1)].into_iter().any(|s| {
            // s·y_j > 0  as  -s·y_j < 0
            let mut a = vec![rat(0); vars.len()];
            a[j] = -s;
            let mut rows = base.clone();
            rows.push(FmRow { a, b: rat(0), strict: true });
            fm_feasible(rows, vars.len())
        })
    }))
}

/// Exact `a·x ≤ b` rows at fixed values.
pub fn fm_dense_feasible(rows: &[(BTreeMap<String, Rational>, Rational)], vars: &[String]) -> bool {
    let fm: Vec<FmRow> = rows
        .iter()
        .map(|(coeffs, b)| FmRow {
            a: vars.iter().map(|v| coeffs.get(v).cloned().unwrap_or_else(Rational::zero)).collect(),
            b: b.clone(),
            strict: false,
        })
        .collect();
    fm_feasible(fm, vars.len())
}

/// Determinant by the Leibniz permutation expansion.
pub fn leibniz_det(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    (0..n)
        .permutations(n)
        .map(|p| {
            let inversions = (0..n).tuple_combinations().filter(|&(i, j)| p[i] > p[j]).count();
            let prod: Rational = p.iter().enumerate().map(|(r, &c)| m[r][c].clone()).product();
            if inversions % 2 == 0 {
                prod
            } else {
                -prod
            }
        })
        .sum()
}

/// Sum over all `m`-subsets of the product, by enumeration.
pub fn brute_comb(s: &[u64], m: usize) -> Rational {
    s.iter()
        .combinations(m)
        .map(|c| rat(c.into_iter().product::<u64>() as i64))
        .sum()
}
