//! JSON mirror of [`LinearSystem`]. Rationals travel as strings (`"3"`,
//! `"-3/4"`) so no precision is lost.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{CertificateRow, Constraint, LinearSystem, ParseError, Relation};
use crate::ratfield::{parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintJson {
    pub coeffs: BTreeMap<String, String>,
    pub relation: Relation,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearSystemJson {
    pub variables: Vec<String>,
    pub constraints: Vec<ConstraintJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateRow>,
}

fn rational_field(s: &str) -> Result<Rational, ParseError> {
    parse_rational(s).ok_or_else(|| ParseError::Json(format!("`{s}` is not a rational number")))
}

impl From<&LinearSystem> for LinearSystemJson {
    fn from(sys: &LinearSystem) -> Self {
        LinearSystemJson {
            variables: sys.variables.clone(),
            constraints: sys
                .constraints
                .iter()
                .map(|c| ConstraintJson {
                    coeffs: c.coeffs.iter().map(|(k, v)| (k.clone(), v.to_string())).collect(),
                    relation: c.relation,
                    rhs: c.rhs.to_string(),
                })
                .collect(),
            certificate: sys.certificate.clone(),
        }
    }
}

impl TryFrom<LinearSystemJson> for LinearSystem {
    type Error = ParseError;

    fn try_from(j: LinearSystemJson) -> Result<Self, ParseError> {
        let invalid = |(line, source)| ParseError::Invalid { line, source };
        let constraints = j
            .constraints
            .into_iter()
            .enumerate()
            .map(|(i, c)| {
                let coeffs = c
                    .coeffs
                    .iter()
                    .map(|(k, v)| Ok((k.clone(), rational_field(v)?)))
                    .collect::<Result<BTreeMap<_, _>, ParseError>>()?;
                Constraint::new(coeffs, c.relation, rational_field(&c.rhs)?)
                    .map_err(|e| invalid((i + 1, e)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let sys = LinearSystem::new(j.variables, constraints).map_err(|e| invalid((0, e)))?;
        match j.certificate {
            Some(row) => sys.with_certificate(row).map_err(|e| invalid((0, e))),
            None => Ok(sys),
        }
    }
}

impl LinearSystem {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&LinearSystemJson::from(self)).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<LinearSystem, ParseError> {
        let j: LinearSystemJson =
            serde_json::from_str(text).map_err(|e| ParseError::Json(e.to_string()))?;
        LinearSystem::try_from(j)
    }

    /// Accepts either the text format or its JSON mirror.
    pub fn parse_any(text: &str) -> Result<LinearSystem, ParseError> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            super::parse_system(text)
        }
    }
}
