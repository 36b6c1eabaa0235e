//! Feasibility of asymptotic systems "for all sufficiently large `K`".
//!
//! [`asym_feasible`] runs the phase-1 simplex over [`RatFuncK`], ordered by
//! sign at `K → +∞`. [`feasible_at`] runs the identical algorithm on the
//! system specialized at a fixed rational `K`, and is the oracle the
//! asymptotic verdict is checked against.

mod simplex;

use std::collections::BTreeMap;

use num_traits::One;
use thiserror::Error;

use crate::ratfield::{RatFuncK, Rational};
use crate::transform::AsymSystem;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("pivot ceiling of {limit} reached")]
    PivotCeiling { limit: usize },
    #[error("phase-one objective unbounded (internal error)")]
    UnboundedPhaseOne,
    #[error("witness has a pole at K = {0}")]
    WitnessPole(Rational),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveOptions {
    /// Maximum pivots before giving up; defaults to `10·(rows+cols)²`.
    pub pivot_ceiling: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityVerdict {
    pub feasible: bool,
    pub witness: Option<BTreeMap<String, RatFuncK>>,
    pub pivots: usize,
    /// Value past which every fixed-`K` run makes the same pivot decisions.
    /// Always `≥ 1`; fixed-`K` verdicts report `1`.
    pub threshold: Rational,
}

impl FeasibilityVerdict {
    /// The witness specialized at `K = k0`.
    pub fn witness_at(&self, k0: &Rational) -> Result<Option<BTreeMap<String, Rational>>, SolveError> {
        self.witness
            .as_ref()
            .map(|w| {
                w.iter()
                    .map(|(k, f)| {
                        f.eval_at(k0)
                            .map(|v| (k.clone(), v))
                            .map_err(|_| SolveError::WitnessPole(k0.clone()))
                    })
                    .collect()
            })
            .transpose()
    }
}

fn input_bound(sys: &AsymSystem) -> Rational {
    sys.constraints()
        .iter()
        .flat_map(|c| c.coeffs.values().chain(std::iter::once(&c.rhs)))
        .filter_map(|p| p.cauchy_bound())
        .fold(Rational::one(), Rational::max)
}

fn index_rows<F>(sys: &AsymSystem, mut lift: impl FnMut(&crate::ratfield::PolyK) -> F, zero: F) -> Vec<(Vec<F>, F)>
where
    F: Clone,
{
    let index: BTreeMap<&str, usize> = sys
        .variables()
        .iter()
        .enumerate()
        .map(|(i, v)| (v.as_str(), i))
        .collect();
    sys.constraints()
        .iter()
        .map(|c| {
            let mut a = vec![zero.clone(); index.len()];
            for (v, p) in &c.coeffs {
                a[index[v.as_str()]] = lift(p);
            }
            (a, lift(&c.rhs))
        })
        .collect()
}

fn label<F>(sys: &AsymSystem, point: Vec<F>) -> BTreeMap<String, F> {
    sys.variables().iter().cloned().zip(point).collect()
}

/// Feasibility over the ordered field of rational functions in `K`, which
/// equals feasibility for every sufficiently large real `K`.
pub fn asym_feasible(sys: &AsymSystem, opts: &SolveOptions) -> Result<FeasibilityVerdict, SolveError> {
    let rows = index_rows(sys, |p| RatFuncK::from_poly(p.clone()), RatFuncK::zero());
    let out = simplex::phase_one(sys.variables().len(), &rows, opts.pivot_ceiling)?;
    let threshold = match out.bound {
        Some(b) => b.max(input_bound(sys)),
        None => input_bound(sys),
    };
    Ok(FeasibilityVerdict {
        feasible: out.feasible,
        witness: out.point.map(|p| label(sys, p)),
        pivots: out.pivots,
        threshold,
    })
}

/// Feasibility of the system specialized at `K = k0`, by the same simplex
/// run over exact rationals.
pub fn feasible_at(sys: &AsymSystem, k0: &Rational, opts: &SolveOptions) -> Result<FeasibilityVerdict, SolveError> {
    let rows = index_rows(sys, |p| p.eval(k0), Rational::from_integer(0.into()));
    let out = simplex::phase_one(sys.variables().len(), &rows, opts.pivot_ceiling)?;
    Ok(FeasibilityVerdict {
        feasible: out.feasible,
        witness: out
            .point
            .map(|p| label(sys, p.into_iter().map(RatFuncK::constant).collect())),
        pivots: out.pivots,
        threshold: Rational::one(),
    })
}

/// A conservative `k*` such that `feasible_at(sys, k0)` agrees with
/// `asym_feasible(sys)` for every `k0 ≥ k*`: the largest root bound over
/// the input coefficients and every quantity whose sign the asymptotic run
/// inspected.
pub fn steady_state_threshold(sys: &AsymSystem, opts: &SolveOptions) -> Result<Rational, SolveError> {
    asym_feasible(sys, opts).map(|v| v.threshold)
}

/// `k*+1, 10·(k*+1), 100·(k*+1), …` gives `count` sample points past `k*`.
pub fn sample_points(threshold: &Rational, count: usize) -> Vec<Rational> {
    let base = threshold + Rational::one();
    let ten = crate::ratfield::rat(10);
    std::iter::successors(Some(base), |k| Some(k * &ten))
        .take(count)
        .collect()
}
