//! Serializable reports for the command-line tool. Every rational and
//! rational function is written as a string, maps are ordered, so equal
//! inputs give byte-identical JSON.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::asymlp::FeasibilityVerdict;
use crate::certificate::{
    build_certificate, certificate_gamma, certificate_value, is_trivial_via_certificate, omega_chain,
    omega_determinant, CertificateError, OmegaChain, OmegaMatrix, ScalarSet,
};
use crate::decide::{AsymDecision, AuditReport, OracleSample};
use crate::ratfield::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictJson {
    pub feasible: bool,
    pub pivots: usize,
    pub threshold: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<BTreeMap<String, String>>,
}

impl From<&FeasibilityVerdict> for VerdictJson {
    fn from(v: &FeasibilityVerdict) -> Self {
        VerdictJson {
            feasible: v.feasible,
            pivots: v.pivots,
            threshold: v.threshold.to_string(),
            witness: v
                .witness
                .as_ref()
                .map(|w| w.iter().map(|(k, f)| (k.clone(), f.to_string())).collect()),
        }
    }
}

impl fmt::Display for VerdictJson {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} after {} pivots, steady past K = {}",
            if self.feasible { "feasible" } else { "infeasible" },
            self.pivots,
            self.threshold
        )?;
        if let Some(w) = &self.witness {
            for (k, v) in w {
                writeln!(f, "  {k} = {v}")?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleSampleJson {
    pub stage: String,
    pub k0: String,
    pub asymptotic: bool,
    pub fixed: bool,
    pub agree: bool,
}

impl From<&OracleSample> for OracleSampleJson {
    fn from(s: &OracleSample) -> Self {
        OracleSampleJson {
            stage: s.stage.to_string(),
            k0: s.k0.to_string(),
            asymptotic: s.asymptotic,
            fixed: s.fixed,
            agree: s.agree(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditCheckJson {
    pub name: String,
    pub stage: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k0: Option<String>,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditJson {
    pub passed: bool,
    pub checks: Vec<AuditCheckJson>,
}

impl From<&AuditReport> for AuditJson {
    fn from(r: &AuditReport) -> Self {
        AuditJson {
            passed: r.passed(),
            checks: r
                .checks
                .iter()
                .map(|c| AuditCheckJson {
                    name: c.name.clone(),
                    stage: c.stage.to_string(),
                    k0: c.k0.as_ref().map(ToString::to_string),
                    passed: c.passed,
                    detail: c.detail.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecideReport {
    pub part1: bool,
    pub part2: Option<bool>,
    pub subset: Vec<String>,
    pub mode: String,
    pub verdicts: BTreeMap<String, VerdictJson>,
    pub oracle_samples: Vec<OracleSampleJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub audit: Option<AuditJson>,
}

impl DecideReport {
    pub fn new(subset: &[String], decision: &AsymDecision, audit: Option<&AuditReport>) -> Self {
        let mut verdicts = BTreeMap::from([("part1".to_string(), VerdictJson::from(&decision.part1))]);
        if let Some(v) = &decision.branch_positive {
            verdicts.insert("positive".into(), v.into());
        }
        if let Some(v) = &decision.branch_negative {
            verdicts.insert("negative".into(), v.into());
        }
        DecideReport {
            part1: decision.part1_feasible,
            part2: decision.part2_nontrivial,
            subset: subset.to_vec(),
            mode: match (&decision.cone_variable, decision.part2_nontrivial) {
                (_, None) => "none".into(),
                (Some(_), _) => "homogenized".into(),
                (None, _) => "literal".into(),
            },
            verdicts,
            oracle_samples: decision.oracle_samples.iter().map(Into::into).collect(),
            audit: audit.map(Into::into),
        }
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "YES"
    } else {
        "NO"
    }
}

impl fmt::Display for DecideReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "part 1 (feasible): {}", yes_no(self.part1))?;
        match self.part2 {
            Some(b) => writeln!(f, "part 2 (subset {} not all zero): {}", self.subset.join(" "), yes_no(b))?,
            None => writeln!(f, "part 2: not evaluated")?,
        }
        for (stage, v) in &self.verdicts {
            write!(f, "{stage}: {v}")?;
        }
        let disagreements = self.oracle_samples.iter().filter(|s| !s.agree).count();
        writeln!(
            f,
            "fixed-K oracle: {} samples, {} disagreements",
            self.oracle_samples.len(),
            disagreements
        )?;
        if let Some(a) = &self.audit {
            writeln!(f, "audit: {}", if a.passed { "passed" } else { "FAILED" })?;
            for c in a.checks.iter().filter(|c| !c.passed) {
                let at = c.k0.as_ref().map(|k| format!(" at K={k}")).unwrap_or_default();
                writeln!(f, "  failed: {} ({}{}): {}", c.name, c.stage, at, c.detail)?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifyReport {
    pub scalars: Vec<String>,
    pub numerator: String,
    pub denominator: String,
    pub b_coeffs: Vec<String>,
    pub gamma: String,
    pub k0: String,
    pub value: String,
    pub trivial: bool,
}

impl CertifyReport {
    pub fn new(x: &ScalarSet) -> Result<Self, CertificateError> {
        let cert = build_certificate(x)?;
        let gamma = certificate_gamma(x)?;
        let k0 = &gamma + Rational::from_integer(1.into());
        Ok(CertifyReport {
            scalars: x.values().iter().map(ToString::to_string).collect(),
            numerator: cert.numerator.to_string(),
            denominator: cert.denominator.to_string(),
            b_coeffs: cert.b_coeffs.iter().map(ToString::to_string).collect(),
            value: certificate_value(x, &k0).to_string(),
            gamma: gamma.to_string(),
            k0: k0.to_string(),
            trivial: is_trivial_via_certificate(x)?,
        })
    }
}

impl fmt::Display for CertifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "scalars: {}", self.scalars.join(" "))?;
        writeln!(f, "numerator: {}", self.numerator)?;
        writeln!(f, "denominator: {}", self.denominator)?;
        for (i, b) in self.b_coeffs.iter().enumerate() {
            writeln!(f, "B_{i} = {b}")?;
        }
        writeln!(f, "gamma: {}", self.gamma)?;
        writeln!(f, "value at K = {}: {}", self.k0, self.value)?;
        writeln!(f, "trivial: {}", self.trivial)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaLevelJson {
    pub level: usize,
    pub entries: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaReport {
    pub n: usize,
    pub levels: Vec<OmegaLevelJson>,
    pub terminal: String,
    pub determinant: String,
}

impl OmegaReport {
    pub fn new(omega1: &OmegaMatrix) -> Result<Self, CertificateError> {
        let OmegaChain { levels, terminal } = omega_chain(omega1)?;
        Ok(OmegaReport {
            n: omega1.n(),
            levels: levels
                .iter()
                .map(|m| OmegaLevelJson {
                    level: m.level(),
                    entries: m
                        .entries()
                        .iter()
                        .map(|r| r.iter().map(ToString::to_string).collect())
                        .collect(),
                })
                .collect(),
            terminal: terminal.to_string(),
            determinant: omega_determinant(omega1).to_string(),
        })
    }
}

impl fmt::Display for OmegaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for level in &self.levels {
            writeln!(f, "Omega_{}:", level.level)?;
            let width = level.entries.iter().flatten().map(String::len).max().unwrap_or(1);
            for row in &level.entries {
                let cells: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
                writeln!(f, "  {}", cells.join("  "))?;
            }
        }
        writeln!(f, "terminal: {}", self.terminal)?;
        writeln!(f, "det(Omega_1): {}", self.determinant)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveReport {
    pub verdict: VerdictJson,
    pub oracle_samples: Vec<OracleSampleJson>,
}

impl fmt::Display for SolveReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.verdict)?;
        for s in &self.oracle_samples {
            writeln!(
                f,
                "K = {}: {} ({})",
                s.k0,
                if s.fixed { "feasible" } else { "infeasible" },
                if s.agree { "agrees" } else { "DISAGREES" }
            )?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteJson {
    pub name: String,
    pub trials: usize,
    pub failures: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub examples: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub suites: Vec<SuiteJson>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.failures == 0)
    }
}

impl fmt::Display for SelftestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "seed {}", self.seed)?;
        for s in &self.suites {
            writeln!(
                f,
                "[{}] {}: {} trials, {} failures",
                if s.failures == 0 { "PASS" } else { "FAIL" },
                s.name,
                s.trials,
                s.failures
            )?;
            for e in &s.examples {
                writeln!(f, "    {e}")?;
            }
        }
        Ok(())
    }
}

/// Pretty JSON for any report.
pub fn to_json<T: Serialize>(report: &T) -> String {
    serde_json::to_string_pretty(report).expect("reports serialize")
}
