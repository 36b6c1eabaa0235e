//! Rewrites a [`LinearSystem`] into an [`AsymSystem`]: only `≤` rows, with
//! coefficients that are polynomials in the parameter `K`.
//!
//! * A strict row `lhs < d` becomes `lhs + e ≤ d` for one shared slack `e`,
//!   together with the single row `K·e ≥ 1` (stored as `-K·e ≤ -1`).
//! * A certificate row `Σ_m y_m / (K + m) ⋚ 0` is linearized by substituting
//!   `y_m = (K + m)·z_m` everywhere, which turns it into `Σ z_m ⋚ 0`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linsys::{BranchSign, CertificateRow, LinearSystem, LinsysError, Relation};
use crate::ratfield::{parse_rational, rat, PolyK, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error(transparent)]
    System(#[from] LinsysError),
    #[error("system has no certificate row to linearize")]
    MissingCertificate,
    #[error("system carries a certificate row; linearize it with scale_certificate_vars")]
    UnexpectedCertificate,
    #[error("invalid asymptotic system: {0}")]
    Invalid(String),
}

/// `Σ coeffs[v]·v ≤ rhs` with polynomial coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsymConstraint {
    pub coeffs: BTreeMap<String, PolyK>,
    pub rhs: PolyK,
}

impl AsymConstraint {
    pub fn relation(&self) -> Relation {
        Relation::Le
    }

    pub fn coeff(&self, name: &str) -> PolyK {
        self.coeffs.get(name).cloned().unwrap_or_else(PolyK::zero)
    }

    /// The row at `K = k0`, as `(coefficients, rhs)`.
    pub fn specialize(&self, k0: &Rational) -> (BTreeMap<String, Rational>, Rational) {
        (
            self.coeffs.iter().map(|(k, p)| (k.clone(), p.eval(k0))).collect(),
            self.rhs.eval(k0),
        )
    }
}

/// `y ↦ (K + offset)·z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substitution {
    pub scaled: String,
    pub offset: i64,
}

impl Substitution {
    pub fn factor(&self) -> PolyK {
        PolyK::k_plus(self.offset)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsymSystem {
    variables: Vec<String>,
    constraints: Vec<AsymConstraint>,
    substitutions: BTreeMap<String, Substitution>,
    slack: Option<String>,
}

impl AsymSystem {
    /// A system with no substitutions or slack bookkeeping.
    pub fn new(variables: Vec<String>, constraints: Vec<AsymConstraint>) -> Result<Self, TransformError> {
        let mut seen = BTreeSet::new();
        for v in &variables {
            if v.is_empty() || !seen.insert(v.as_str()) {
                return Err(TransformError::Invalid(format!("bad or repeated variable `{v}`")));
            }
        }
        for c in &constraints {
            if let Some(k) = c.coeffs.keys().find(|k| !seen.contains(k.as_str())) {
                return Err(TransformError::Invalid(format!("unknown variable `{k}`")));
            }
        }
        Ok(AsymSystem {
            variables,
            constraints,
            substitutions: BTreeMap::new(),
            slack: None,
        })
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn constraints(&self) -> &[AsymConstraint] {
        &self.constraints
    }

    pub fn substitutions(&self) -> &BTreeMap<String, Substitution> {
        &self.substitutions
    }

    /// Name of the shared strict-inequality slack, if any strict row existed.
    pub fn slack(&self) -> Option<&str> {
        self.slack.as_deref()
    }

    /// Largest coefficient degree in `K`.
    pub fn max_degree(&self) -> isize {
        self.constraints
            .iter()
            .flat_map(|c| c.coeffs.values().chain(std::iter::once(&c.rhs)))
            .map(PolyK::degree)
            .max()
            .unwrap_or(-1)
    }

    /// Multiplies row `index` by a polynomial.
    pub fn scale_row(&mut self, index: usize, factor: &PolyK) {
        let c = &mut self.constraints[index];
        for p in c.coeffs.values_mut() {
            *p = &*p * factor;
        }
        c.rhs = &c.rhs * factor;
    }

    /// Maps a point of this system at `K = k0` back to the source variables:
    /// substituted variables become `y = (k0 + offset)·z`, the slack is
    /// dropped, everything else is copied.
    pub fn pull_back(&self, point: &BTreeMap<String, Rational>, k0: &Rational) -> BTreeMap<String, Rational> {
        let scaled_to_source: BTreeMap<&str, (&str, i64)> = self
            .substitutions
            .iter()
            .map(|(y, s)| (s.scaled.as_str(), (y.as_str(), s.offset)))
            .collect();
        let mut out = BTreeMap::new();
        for (name, value) in point {
            if Some(name.as_str()) == self.slack() {
                continue;
            }
            match scaled_to_source.get(name.as_str()) {
                Some(&(y, offset)) => {
                    out.insert(y.to_string(), (k0 + rat(offset)) * value);
                }
                None => {
                    out.insert(name.clone(), value.clone());
                }
            }
        }
        out
    }

    /// Exact check of every row at `K = k0`.
    pub fn satisfied_at(&self, point: &BTreeMap<String, Rational>, k0: &Rational) -> bool {
        self.constraints.iter().all(|c| {
            let (coeffs, rhs) = c.specialize(k0);
            let lhs: Rational = coeffs
                .iter()
                .map(|(v, a)| a * point.get(v).cloned().unwrap_or_else(Rational::zero))
                .sum();
            lhs <= rhs
        })
    }
}

fn poly_term(p: &PolyK) -> String {
    if p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
        format!("({p})")
    } else {
        p.to_string()
    }
}

impl fmt::Display for AsymConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .filter(|(_, p)| !p.is_zero())
            .map(|(v, p)| {
                if *p == PolyK::one() {
                    v.clone()
                } else {
                    format!("{}*{v}", poly_term(p))
                }
            })
            .collect();
        let lhs = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
        write!(f, "{lhs} <= {}", self.rhs)
    }
}

impl fmt::Display for AsymSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vars: {}", self.variables.join(" "))?;
        for c in &self.constraints {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

/// JSON form of an [`AsymSystem`]: each polynomial is a list of rational
/// strings, lowest power first (`["-5", "1"]` is `K - 5`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AsymSystemJson {
    pub variables: Vec<String>,
    pub constraints: Vec<AsymConstraintJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AsymConstraintJson {
    pub coeffs: BTreeMap<String, Vec<String>>,
    pub rhs: Vec<String>,
}

fn poly_to_json(p: &PolyK) -> Vec<String> {
    p.coeffs().iter().map(ToString::to_string).collect()
}

fn poly_from_json(v: &[String]) -> Result<PolyK, TransformError> {
    v.iter()
        .map(|s| parse_rational(s).ok_or_else(|| TransformError::Invalid(format!("`{s}` is not rational"))))
        .collect::<Result<Vec<_>, _>>()
        .map(PolyK::new)
}

impl AsymSystem {
    pub fn to_json(&self) -> AsymSystemJson {
        AsymSystemJson {
            variables: self.variables.clone(),
            constraints: self
                .constraints
                .iter()
                .map(|c| AsymConstraintJson {
                    coeffs: c.coeffs.iter().map(|(k, p)| (k.clone(), poly_to_json(p))).collect(),
                    rhs: poly_to_json(&c.rhs),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &AsymSystemJson) -> Result<Self, TransformError> {
        let constraints = j
            .constraints
            .iter()
            .map(|c| {
                Ok(AsymConstraint {
                    coeffs: c
                        .coeffs
                        .iter()
                        .map(|(k, v)| Ok((k.clone(), poly_from_json(v)?)))
                        .collect::<Result<_, TransformError>>()?,
                    rhs: poly_from_json(&c.rhs)?,
                })
            })
            .collect::<Result<Vec<_>, TransformError>>()?;
        AsymSystem::new(j.variables.clone(), constraints)
    }
}

fn fresh_name(base: &str, taken: &BTreeSet<String>) -> String {
    if !taken.contains(base) {
        return base.to_string();
    }
    (1..)
        .map(|i| format!("{base}_{i}"))
        .find(|c| !taken.contains(c))
        .expect("unbounded search")
}

/// Lowers an already normalized system. `scaling` maps source variables to
/// their substitutions; `certificate` (if any) is appended as one more
/// strict row over the scaled variables.
fn lower(
    sys: &LinearSystem,
    scaling: BTreeMap<String, Substitution>,
    certificate: Option<&CertificateRow>,
) -> AsymSystem {
    let mut taken: BTreeSet<String> = sys.variables().iter().cloned().collect();
    taken.extend(scaling.values().map(|s| s.scaled.clone()));

    let strict_count = sys.count_strict() + usize::from(certificate.is_some());
    let slack = (strict_count > 0).then(|| fresh_name("e", &taken));

    let mut variables: Vec<String> = sys
        .variables()
        .iter()
        .map(|v| scaling.get(v).map_or_else(|| v.clone(), |s| s.scaled.clone()))
        .collect();
    if let Some(e) = &slack {
        variables.push(e.clone());
    }

    let mut constraints = Vec::with_capacity(sys.constraints().len() + 2);
    for c in sys.constraints() {
        let mut coeffs: BTreeMap<String, PolyK> = c
            .coeffs()
            .iter()
            .map(|(v, a)| match scaling.get(v) {
                Some(s) => (s.scaled.clone(), s.factor().scale(a)),
                None => (v.clone(), PolyK::constant(a.clone())),
            })
            .collect();
        if c.relation() == Relation::Lt {
            let e = slack.as_ref().expect("slack exists when a strict row does");
            coeffs.insert(e.clone(), PolyK::one());
        }
        constraints.push(AsymConstraint {
            coeffs,
            rhs: PolyK::constant(c.rhs().clone()),
        });
    }

    if let Some(row) = certificate {
        let e = slack.as_ref().expect("certificate row is strict");
        // positive: Σz > 0  ⇔  -Σz < 0  →  -Σz + e ≤ 0
        // negative: Σz < 0             →   Σz + e ≤ 0
        let unit = match row.sign {
            BranchSign::Positive => -Rational::one(),
            BranchSign::Negative => Rational::one(),
        };
        let mut coeffs: BTreeMap<String, PolyK> = row
            .subset
            .iter()
            .map(|y| (scaling[y].scaled.clone(), PolyK::constant(unit.clone())))
            .collect();
        coeffs.insert(e.clone(), PolyK::one());
        constraints.push(AsymConstraint {
            coeffs,
            rhs: PolyK::zero(),
        });
    }

    if let Some(e) = &slack {
        constraints.push(AsymConstraint {
            coeffs: BTreeMap::from([(e.clone(), -PolyK::k())]),
            rhs: PolyK::constant(-Rational::one()),
        });
    }

    AsymSystem {
        variables,
        constraints,
        substitutions: scaling,
        slack,
    }
}

/// Replaces every strict row `lhs < d` by `lhs + e ≤ d` with one shared `e`
/// and adds `K·e ≥ 1`. `≥`, `>` and `=` rows are normalized first.
pub fn strict_to_nonstrict(sys: &LinearSystem) -> Result<AsymSystem, TransformError> {
    if sys.certificate().is_some() {
        return Err(TransformError::UnexpectedCertificate);
    }
    Ok(lower(&sys.normalize(), BTreeMap::new(), None))
}

/// Appends the strict row `Σ_m subset[m] / (K + m) > 0` (or `< 0`).
pub fn add_certificate_constraint(
    sys: &LinearSystem,
    subset: &[String],
    sign: BranchSign,
) -> Result<LinearSystem, TransformError> {
    Ok(sys.clone().with_certificate(CertificateRow {
        subset: subset.to_vec(),
        sign,
    })?)
}

/// Substitutes `y_m = (K + m)·z_m` for every subset variable, turning the
/// certificate row into `Σ z_m > 0` (or `< 0`), then applies the strict
/// gadget to every strict row.
pub fn scale_certificate_vars(sys: &LinearSystem) -> Result<AsymSystem, TransformError> {
    let row = sys.certificate().ok_or(TransformError::MissingCertificate)?;
    let taken: BTreeSet<String> = sys.variables().iter().cloned().collect();
    let mut scaling = BTreeMap::new();
    let mut used = taken.clone();
    for (y, offset) in row.weights() {
        let scaled = fresh_name(&format!("z_{y}"), &used);
        used.insert(scaled.clone());
        scaling.insert(y.to_string(), Substitution { scaled, offset });
    }
    Ok(lower(&sys.normalize(), scaling, Some(row)))
}
