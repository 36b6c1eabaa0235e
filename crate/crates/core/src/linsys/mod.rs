//! Linear systems of strict and non-strict inequalities over named real
//! variables.

mod json;
mod parse;

pub use json::{ConstraintJson, LinearSystemJson};
pub use parse::{parse_system, ParseError};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ratfield::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinsysError {
    #[error("constraint has no terms")]
    EmptyConstraint,
    #[error("variable names must be nonempty")]
    EmptyName,
    #[error("variable `{0}` is declared twice")]
    DuplicateVariable(String),
    #[error("variable `{0}` is not declared")]
    UnknownVariable(String),
    #[error("subset must not be empty")]
    EmptySubset,
    #[error("variable `{0}` appears twice in the subset")]
    DuplicateSubsetVariable(String),
    #[error("system already carries a certificate row")]
    CertificateAlreadyPresent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = "=")]
    Eq,
}

impl Relation {
    pub fn token(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Lt => "<",
            Relation::Ge => ">=",
            Relation::Gt => ">",
            Relation::Eq => "=",
        }
    }

    pub fn from_token(tok: &str) -> Option<Relation> {
        Some(match tok {
            "<=" => Relation::Le,
            "<" => Relation::Lt,
            ">=" => Relation::Ge,
            ">" => Relation::Gt,
            "=" | "==" => Relation::Eq,
            _ => return None,
        })
    }

    pub fn is_strict(self) -> bool {
        matches!(self, Relation::Lt | Relation::Gt)
    }

    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Relation::Le => lhs <= rhs,
            Relation::Lt => lhs < rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Gt => lhs > rhs,
            Relation::Eq => lhs == rhs,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// `Σ coeffs[v]·v  relation  rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    coeffs: BTreeMap<String, Rational>,
    relation: Relation,
    rhs: Rational,
}

impl Constraint {
    pub fn new(
        coeffs: BTreeMap<String, Rational>,
        relation: Relation,
        rhs: Rational,
    ) -> Result<Self, LinsysError> {
        if coeffs.is_empty() {
            return Err(LinsysError::EmptyConstraint);
        }
        if coeffs.keys().any(String::is_empty) {
            return Err(LinsysError::EmptyName);
        }
        Ok(Constraint {
            coeffs,
            relation,
            rhs,
        })
    }

    /// Convenience constructor from `(name, coefficient)` pairs; repeated
    /// names are summed.
    pub fn from_terms<'a>(
        terms: impl IntoIterator<Item = (&'a str, Rational)>,
        relation: Relation,
        rhs: Rational,
    ) -> Result<Self, LinsysError> {
        let mut coeffs: BTreeMap<String, Rational> = BTreeMap::new();
        for (name, c) in terms {
            *coeffs.entry(name.to_string()).or_insert_with(Rational::zero) += c;
        }
        Self::new(coeffs, relation, rhs)
    }

    pub fn coeffs(&self) -> &BTreeMap<String, Rational> {
        &self.coeffs
    }

    pub fn coeff(&self, name: &str) -> Rational {
        self.coeffs.get(name).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn relation(&self) -> Relation {
        self.relation
    }

    pub fn rhs(&self) -> &Rational {
        &self.rhs
    }

    pub fn lhs_at(&self, point: &BTreeMap<String, Rational>) -> Rational {
        self.coeffs
            .iter()
            .filter_map(|(v, c)| point.get(v).map(|x| c * x))
            .sum()
    }

    /// Missing variables in `point` count as zero.
    pub fn satisfied_by(&self, point: &BTreeMap<String, Rational>) -> bool {
        self.relation.holds(&self.lhs_at(point), &self.rhs)
    }

    fn negated(&self, relation: Relation) -> Constraint {
        Constraint {
            coeffs: self.coeffs.iter().map(|(k, v)| (k.clone(), -v)).collect(),
            relation,
            rhs: -&self.rhs,
        }
    }

    fn write_with_order(&self, f: &mut impl fmt::Write, order: &[String]) -> fmt::Result {
        let mut first = true;
        let ordered = order
            .iter()
            .filter_map(|v| self.coeffs.get_key_value(v))
            .chain(self.coeffs.iter().filter(|(k, _)| !order.contains(k)));
        for (name, c) in ordered {
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_char('-')?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            if mag.is_one() {
                f.write_str(name)?;
            } else {
                write!(f, "{mag} {name}")?;
            }
        }
        write!(f, " {} {}", self.relation, self.rhs)
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_with_order(f, &[])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BranchSign {
    Positive,
    Negative,
}

impl fmt::Display for BranchSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BranchSign::Positive => "positive",
            BranchSign::Negative => "negative",
        })
    }
}

/// The strict side constraint `Σ_m subset[m] / (K + m) > 0` (or `< 0`),
/// with offsets `m = 1 … |subset|` in subset order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateRow {
    pub subset: Vec<String>,
    pub sign: BranchSign,
}

impl CertificateRow {
    /// `(name, offset)` pairs.
    pub fn weights(&self) -> impl Iterator<Item = (&str, i64)> {
        self.subset.iter().map(String::as_str).zip(1i64..)
    }

    /// Value of the weighted sum at `K = k0`.
    pub fn value_at(&self, point: &BTreeMap<String, Rational>, k0: &Rational) -> Rational {
        self.weights()
            .map(|(v, m)| {
                point.get(v).cloned().unwrap_or_else(Rational::zero)
                    / (k0 + crate::ratfield::rat(m))
            })
            .sum()
    }
}

/// A system of linear constraints over ordered, named real variables, plus
/// at most one parameterized certificate row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSystem {
    variables: Vec<String>,
    constraints: Vec<Constraint>,
    certificate: Option<CertificateRow>,
}

impl LinearSystem {
    pub fn new(variables: Vec<String>, constraints: Vec<Constraint>) -> Result<Self, LinsysError> {
        let mut seen = BTreeSet::new();
        for v in &variables {
            if v.is_empty() {
                return Err(LinsysError::EmptyName);
            }
            if !seen.insert(v.as_str()) {
                return Err(LinsysError::DuplicateVariable(v.clone()));
            }
        }
        for c in &constraints {
            if let Some(k) = c.coeffs.keys().find(|k| !seen.contains(k.as_str())) {
                return Err(LinsysError::UnknownVariable(k.clone()));
            }
        }
        Ok(LinearSystem {
            variables,
            constraints,
            certificate: None,
        })
    }

    /// Variables are taken in order of first appearance.
    pub fn from_constraints(constraints: Vec<Constraint>) -> Result<Self, LinsysError> {
        let mut variables: Vec<String> = Vec::new();
        for c in &constraints {
            for k in c.coeffs.keys() {
                if !variables.contains(k) {
                    variables.push(k.clone());
                }
            }
        }
        Self::new(variables, constraints)
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn certificate(&self) -> Option<&CertificateRow> {
        self.certificate.as_ref()
    }

    pub fn has_variable(&self, name: &str) -> bool {
        self.variables.iter().any(|v| v == name)
    }

    /// Checks a subset query: nonempty, no repeats, all names declared.
    pub fn check_subset(&self, subset: &[String]) -> Result<(), LinsysError> {
        if subset.is_empty() {
            return Err(LinsysError::EmptySubset);
        }
        let mut seen = BTreeSet::new();
        for name in subset {
            if !self.has_variable(name) {
                return Err(LinsysError::UnknownVariable(name.clone()));
            }
            if !seen.insert(name) {
                return Err(LinsysError::DuplicateSubsetVariable(name.clone()));
            }
        }
        Ok(())
    }

    pub fn with_certificate(mut self, row: CertificateRow) -> Result<Self, LinsysError> {
        if self.certificate.is_some() {
            return Err(LinsysError::CertificateAlreadyPresent);
        }
        self.check_subset(&row.subset)?;
        self.certificate = Some(row);
        Ok(self)
    }

    /// Rewrites every row as `≤` or `<`: `≥`/`>` rows are negated and
    /// equalities split into two opposite `≤` rows.
    pub fn normalize(&self) -> LinearSystem {
        let mut constraints = Vec::with_capacity(self.constraints.len());
        for c in &self.constraints {
            match c.relation {
                Relation::Le | Relation::Lt => constraints.push(c.clone()),
                Relation::Ge => constraints.push(c.negated(Relation::Le)),
                Relation::Gt => constraints.push(c.negated(Relation::Lt)),
                Relation::Eq => {
                    constraints.push(Constraint {
                        relation: Relation::Le,
                        ..c.clone()
                    });
                    constraints.push(c.negated(Relation::Le));
                }
            }
        }
        LinearSystem {
            variables: self.variables.clone(),
            constraints,
            certificate: self.certificate.clone(),
        }
    }

    /// The cone over the solution set: each row `a·y ⋈ b` becomes
    /// `a·y - b·t ⋈ 0` for a fresh variable `t`, plus `t > 0`. Its points
    /// with `t > 0` are exactly `λ·(y, 1)` for `λ > 0` and `y` a solution.
    /// Returns the new system and the name of `t`.
    pub fn homogenize(&self) -> (LinearSystem, String) {
        let mut t = "t".to_string();
        let mut i = 0;
        while self.has_variable(&t) {
            i += 1;
            t = format!("t_{i}");
        }
        let mut constraints: Vec<Constraint> = self
            .constraints
            .iter()
            .map(|c| {
                let mut coeffs = c.coeffs.clone();
                if !c.rhs.is_zero() {
                    coeffs.insert(t.clone(), -c.rhs.clone());
                }
                Constraint {
                    coeffs,
                    relation: c.relation,
                    rhs: Rational::zero(),
                }
            })
            .collect();
        constraints.push(Constraint {
            coeffs: BTreeMap::from([(t.clone(), Rational::one())]),
            relation: Relation::Gt,
            rhs: Rational::zero(),
        });
        let mut variables = self.variables.clone();
        variables.push(t.clone());
        let sys = LinearSystem {
            variables,
            constraints,
            certificate: self.certificate.clone(),
        };
        (sys, t)
    }

    pub fn is_normalized(&self) -> bool {
        self.constraints
            .iter()
            .all(|c| matches!(c.relation, Relation::Le | Relation::Lt))
    }

    pub fn count_strict(&self) -> usize {
        self.constraints.iter().filter(|c| c.relation.is_strict()).count()
    }

    /// Checks every plain constraint exactly; the certificate row, which
    /// depends on `K`, is not included.
    pub fn satisfied_by(&self, point: &BTreeMap<String, Rational>) -> bool {
        self.constraints.iter().all(|c| c.satisfied_by(point))
    }
}

impl fmt::Display for LinearSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vars: {}", self.variables.join(" "))?;
        for c in &self.constraints {
            c.write_with_order(f, &self.variables)?;
            writeln!(f)?;
        }
        Ok(())
    }
}
