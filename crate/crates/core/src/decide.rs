//! Two-part decision for a linear system:
//!
//! 1. is the system feasible?
//! 2. if so, does it have a feasible point where the chosen subset of
//!    variables is not all zero?
//!
//! Part 1 solves the strict-gadget system asymptotically. Part 2 adds the
//! certificate row `Σ y_m/(K+m) > 0` and, separately, `< 0`, linearizes each
//! branch and solves it; the answer is YES iff either branch is feasible.
//! Every asymptotic verdict is cross-checked at fixed `K` past its
//! steady-state threshold.
//!
//! With one shared margin `e ≥ 1/K` the certificate row needs
//! `Σ y_m/(K+m) ≥ 1/K`, which a bounded solution set cannot always meet
//! (`0 < y1 < 1` with subset `{y1}` would come out NO). Part 2 therefore
//! runs on the homogenized system `{a·y ⋈ b·t, t > 0}` by default, whose
//! solutions can be scaled with `K`; [`DecideOptions::literal`] skips that.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::asymlp::{asym_feasible, feasible_at, sample_points, FeasibilityVerdict, SolveError, SolveOptions};
use crate::linsys::{BranchSign, LinearSystem, LinsysError};
use crate::ratfield::Rational;
use crate::transform::{add_certificate_constraint, scale_certificate_vars, strict_to_nonstrict, AsymSystem, TransformError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecideError {
    #[error(transparent)]
    System(#[from] LinsysError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// Ordered, duplicate-free list of variable names whose joint
/// non-triviality is asked about. Order sets the certificate weights but
/// never the verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetQuery {
    names: Vec<String>,
}

impl SubsetQuery {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self, LinsysError> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(LinsysError::EmptySubset);
        }
        let mut seen = BTreeSet::new();
        if let Some(dup) = names.iter().find(|n| !seen.insert(n.as_str())) {
            return Err(LinsysError::DuplicateSubsetVariable(dup.clone()));
        }
        Ok(SubsetQuery { names })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Part1,
    Positive,
    Negative,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Part1 => "part1",
            Stage::Positive => "positive",
            Stage::Negative => "negative",
        })
    }
}

impl From<BranchSign> for Stage {
    fn from(s: BranchSign) -> Self {
        match s {
            BranchSign::Positive => Stage::Positive,
            BranchSign::Negative => Stage::Negative,
        }
    }
}

/// One fixed-`K` cross-check of an asymptotic verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleSample {
    pub stage: Stage,
    pub k0: Rational,
    pub asymptotic: bool,
    pub fixed: bool,
}

impl OracleSample {
    pub fn agree(&self) -> bool {
        self.asymptotic == self.fixed
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsymDecision {
    pub part1_feasible: bool,
    /// Present iff `part1_feasible`.
    pub part2_nontrivial: Option<bool>,
    pub part1: FeasibilityVerdict,
    /// Branch verdicts; absent when part 1 already answered NO.
    pub branch_positive: Option<FeasibilityVerdict>,
    pub branch_negative: Option<FeasibilityVerdict>,
    pub oracle_samples: Vec<OracleSample>,
    /// Homogenizing variable used for part 2, if any.
    pub cone_variable: Option<String>,
}

impl AsymDecision {
    pub fn oracle_agrees(&self) -> bool {
        self.oracle_samples.iter().all(OracleSample::agree)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecideOptions {
    pub solve: SolveOptions,
    /// Fixed-`K` checks per asymptotic verdict (`≥ 1`).
    pub oracle_samples: usize,
    /// Run part 2 on the system as given instead of its homogenization.
    pub literal: bool,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions {
            solve: SolveOptions::default(),
            oracle_samples: 1,
            literal: false,
        }
    }
}

/// The system part 2 is run on, and its homogenizing variable.
pub fn part2_source(sys: &LinearSystem, literal: bool) -> (LinearSystem, Option<String>) {
    if literal {
        (sys.clone(), None)
    } else {
        let (h, t) = sys.homogenize();
        (h, Some(t))
    }
}

/// The linearized system for one certificate branch of `source`.
pub fn branch_system(source: &LinearSystem, subset: &SubsetQuery, sign: BranchSign) -> Result<AsymSystem, DecideError> {
    let with_row = add_certificate_constraint(source, subset.names(), sign)?;
    Ok(scale_certificate_vars(&with_row)?)
}

fn solve_checked(
    stage: Stage,
    asym: &AsymSystem,
    opts: &DecideOptions,
) -> Result<(FeasibilityVerdict, Vec<OracleSample>), DecideError> {
    let verdict = asym_feasible(asym, &opts.solve)?;
    let samples = sample_points(&verdict.threshold, opts.oracle_samples.max(1))
        .into_iter()
        .map(|k0| {
            let fixed = feasible_at(asym, &k0, &opts.solve)?.feasible;
            Ok(OracleSample {
                stage,
                k0,
                asymptotic: verdict.feasible,
                fixed,
            })
        })
        .collect::<Result<Vec<_>, SolveError>>()?;
    Ok((verdict, samples))
}

pub fn decide_plinear(sys: &LinearSystem, subset: &SubsetQuery, opts: &DecideOptions) -> Result<AsymDecision, DecideError> {
    sys.check_subset(subset.names())?;

    let step1 = strict_to_nonstrict(sys)?;
    let (part1, mut oracle_samples) = solve_checked(Stage::Part1, &step1, opts)?;
    if !part1.feasible {
        return Ok(AsymDecision {
            part1_feasible: false,
            part2_nontrivial: None,
            part1,
            branch_positive: None,
            branch_negative: None,
            oracle_samples,
            cone_variable: None,
        });
    }

    let (source, cone_variable) = part2_source(sys, opts.literal);
    let positive = branch_system(&source, subset, BranchSign::Positive)?;
    let negative = branch_system(&source, subset, BranchSign::Negative)?;
    let (pos, neg) = std::thread::scope(|s| {
        let handle = s.spawn(|| solve_checked(Stage::Positive, &positive, opts));
        let neg = solve_checked(Stage::Negative, &negative, opts);
        (handle.join().expect("branch solver panicked"), neg)
    });
    let (pos, pos_samples) = pos?;
    let (neg, neg_samples) = neg?;
    oracle_samples.extend(pos_samples);
    oracle_samples.extend(neg_samples);

    Ok(AsymDecision {
        part1_feasible: true,
        part2_nontrivial: Some(pos.feasible || neg.feasible),
        part1,
        branch_positive: Some(pos),
        branch_negative: Some(neg),
        oracle_samples,
        cone_variable,
    })
}

/// One line of an audit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditCheck {
    pub name: String,
    pub stage: Stage,
    pub k0: Option<Rational>,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AuditReport {
    pub checks: Vec<AuditCheck>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AuditCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn push(&mut self, name: &str, stage: Stage, k0: Option<&Rational>, passed: bool, detail: String) {
        self.checks.push(AuditCheck {
            name: name.to_string(),
            stage,
            k0: k0.cloned(),
            passed,
            detail,
        });
    }
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let at = c.k0.as_ref().map(|k| format!(" at K={k}")).unwrap_or_default();
            writeln!(
                f,
                "[{}] {} ({}{}): {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.stage,
                at,
                c.detail
            )?;
        }
        Ok(())
    }
}

fn audit_points(asym: &AsymSystem, opts: &SolveOptions) -> Result<Vec<Rational>, SolveError> {
    let threshold = asym_feasible(asym, opts)?.threshold;
    Ok(sample_points(&threshold, 2))
}

/// How a witness of a transformed system maps back to the source system.
struct PullBack<'a> {
    sys: &'a LinearSystem,
    source: &'a LinearSystem,
    cone: Option<&'a str>,
}

impl PullBack<'_> {
    /// Source-variable point, dehomogenized when a cone variable is in use.
    fn point(&self, report: &mut AuditReport, stage: Stage, k0: &Rational, lifted: BTreeMap<String, Rational>) -> Option<BTreeMap<String, Rational>> {
        let Some(t) = self.cone else {
            return Some(lifted);
        };
        let on_cone = self.source.satisfied_by(&lifted);
        report.push("witness lies on the homogenized cone", stage, Some(k0), on_cone, format_point(&lifted));
        let scale = lifted.get(t).cloned().unwrap_or_else(Rational::zero);
        if scale <= Rational::zero() {
            report.push("cone coordinate positive", stage, Some(k0), false, format!("{t} = {scale}"));
            return None;
        }
        Some(
            lifted
                .into_iter()
                .filter(|(k, _)| k != t)
                .map(|(k, v)| (k, v / &scale))
                .collect(),
        )
    }
}

/// Checks a claimed feasible asymptotic witness at `k0`: pulled back to the
/// source variables it must satisfy every original row exactly.
#[allow(clippy::too_many_arguments)]
fn check_witness(
    report: &mut AuditReport,
    stage: Stage,
    back: &PullBack<'_>,
    asym: &AsymSystem,
    verdict: &FeasibilityVerdict,
    k0: &Rational,
    subset: Option<&SubsetQuery>,
) {
    let point = match verdict.witness_at(k0) {
        Ok(Some(p)) => p,
        Ok(None) => {
            report.push("witness", stage, Some(k0), false, "feasible verdict carries no witness".into());
            return;
        }
        Err(e) => {
            report.push("witness", stage, Some(k0), false, e.to_string());
            return;
        }
    };
    let in_asym = asym.satisfied_at(&point, k0);
    report.push(
        "witness satisfies transformed rows",
        stage,
        Some(k0),
        in_asym,
        format!("{} rows", asym.constraints().len()),
    );
    let Some(y) = back.point(report, stage, k0, asym.pull_back(&point, k0)) else {
        return;
    };
    let holds = back.sys.satisfied_by(&y);
    report.push(
        "pulled-back witness satisfies source rows",
        stage,
        Some(k0),
        holds,
        format_point(&y),
    );
    if let (Some(subset), Some(sign)) = (subset, branch_sign(stage)) {
        let nonzero = subset.names().iter().any(|v| y.get(v).is_some_and(|x| !x.is_zero()));
        report.push("subset not all zero", stage, Some(k0), nonzero, format_point(&y));
        let row = crate::linsys::CertificateRow {
            subset: subset.names().to_vec(),
            sign,
        };
        let value = row.value_at(&y, k0);
        let ok = match sign {
            BranchSign::Positive => value > Rational::zero(),
            BranchSign::Negative => value < Rational::zero(),
        };
        report.push("certificate sign", stage, Some(k0), ok, format!("sum y/(K+m) = {value}"));
    }
}

fn branch_sign(stage: Stage) -> Option<BranchSign> {
    match stage {
        Stage::Part1 => None,
        Stage::Positive => Some(BranchSign::Positive),
        Stage::Negative => Some(BranchSign::Negative),
    }
}

fn format_point(p: &BTreeMap<String, Rational>) -> String {
    let parts: Vec<String> = p.iter().map(|(k, v)| format!("{k}={v}")).collect();
    format!("{{{}}}", parts.join(", "))
}

/// Re-derives every claim of `decision` independently: transformed systems
/// are rebuilt, specialized at two points past a freshly computed threshold
/// and solved over the rationals; feasible claims must come with a witness
/// that pulls back to an exact solution of the source system.
pub fn verify_decision(
    sys: &LinearSystem,
    subset: &SubsetQuery,
    decision: &AsymDecision,
    opts: &DecideOptions,
) -> Result<AuditReport, DecideError> {
    let mut report = AuditReport::default();
    let step1 = strict_to_nonstrict(sys)?;

    for k0 in audit_points(&step1, &opts.solve)? {
        let fixed = feasible_at(&step1, &k0, &opts.solve)?.feasible;
        report.push(
            "part-1 verdict matches fixed-K oracle",
            Stage::Part1,
            Some(&k0),
            fixed == decision.part1_feasible,
            format!("claimed {}, oracle {}", decision.part1_feasible, fixed),
        );
        if decision.part1_feasible && decision.part1.feasible {
            let back = PullBack { sys, source: sys, cone: None };
            check_witness(&mut report, Stage::Part1, &back, &step1, &decision.part1, &k0, None);
        }
    }

    report.push(
        "part 2 present iff part 1 feasible",
        Stage::Part1,
        None,
        decision.part2_nontrivial.is_some() == decision.part1_feasible,
        format!("part2 = {:?}", decision.part2_nontrivial),
    );

    let Some(part2) = decision.part2_nontrivial else {
        return Ok(report);
    };
    let (source, cone) = part2_source(sys, opts.literal);
    report.push(
        "part 2 ran in the requested mode",
        Stage::Part1,
        None,
        cone == decision.cone_variable,
        format!("cone variable {:?}", decision.cone_variable),
    );
    let back = PullBack {
        sys,
        source: &source,
        cone: cone.as_deref(),
    };

    let branches = [
        (BranchSign::Positive, decision.branch_positive.as_ref()),
        (BranchSign::Negative, decision.branch_negative.as_ref()),
    ];
    let disjunction = branches.iter().any(|(_, v)| v.is_some_and(|v| v.feasible));
    report.push(
        "part 2 is the disjunction of both branches",
        Stage::Part1,
        None,
        disjunction == part2,
        format!("claimed {part2}, branches give {disjunction}"),
    );

    if part2 {
        let feasible_branch = branches.iter().find(|(_, v)| v.is_some_and(|v| v.feasible));
        match feasible_branch {
            Some(&(sign, Some(verdict))) => {
                let asym = branch_system(&source, subset, sign)?;
                for k0 in audit_points(&asym, &opts.solve)? {
                    let fixed = feasible_at(&asym, &k0, &opts.solve)?.feasible;
                    report.push(
                        "branch feasible at fixed K",
                        sign.into(),
                        Some(&k0),
                        fixed,
                        format!("oracle {fixed}"),
                    );
                    check_witness(&mut report, sign.into(), &back, &asym, verdict, &k0, Some(subset));
                }
            }
            _ => report.push(
                "part 2 YES has a feasible branch",
                Stage::Part1,
                None,
                false,
                "no branch verdict is feasible".into(),
            ),
        }
    } else {
        for sign in [BranchSign::Positive, BranchSign::Negative] {
            let asym = branch_system(&source, subset, sign)?;
            for k0 in audit_points(&asym, &opts.solve)? {
                let fixed = feasible_at(&asym, &k0, &opts.solve)?.feasible;
                report.push(
                    "branch infeasible at fixed K",
                    sign.into(),
                    Some(&k0),
                    !fixed,
                    format!("oracle {fixed}"),
                );
            }
        }
    }

    Ok(report)
}
