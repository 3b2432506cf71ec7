use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::{CliError, RunConfig};

pub const SCHEMA: &str = "cosetcx.certificate/v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
}

/// One sub-verdict of a certificate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Section {
    pub name: String,
    pub verdict: Verdict,
    /// Tolerance the verdict was decided at; `None` for exact checks.
    pub tolerance: Option<f64>,
    /// Scope remarks, e.g. the instance a check actually ran on.
    pub note: Option<String>,
    /// First failing item when `verdict` is `fail`.
    pub witness: Option<String>,
    pub report: Value,
}

impl Section {
    pub fn new(name: &str, pass: bool, tolerance: Option<f64>, report: impl Serialize) -> Self {
        Section {
            name: name.to_string(),
            verdict: if pass { Verdict::Pass } else { Verdict::Fail },
            tolerance,
            note: None,
            witness: None,
            report: serde_json::to_value(report).expect("serialisable report"),
        }
    }

    pub fn skipped(name: &str, reason: impl Into<String>) -> Self {
        Section { name: name.to_string(), verdict: Verdict::Skipped, tolerance: None, note: Some(reason.into()), witness: None, report: Value::Null }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Attaches a witness, kept only when the section failed.
    pub fn with_witness(mut self, witness: Option<String>) -> Self {
        if self.verdict == Verdict::Fail {
            self.witness = witness.or_else(|| Some("see report".into()));
        }
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateBundle {
    pub schema: String,
    pub version: String,
    pub config: RunConfig,
    pub sections: Vec<Section>,
    pub overall: Verdict,
    /// sha256 of the bundle serialised with this field empty.
    pub digest: String,
}

/// Fail if any section failed, pass otherwise.
pub fn overall(sections: &[Section]) -> Verdict {
    if sections.iter().any(|s| s.verdict == Verdict::Fail) {
        Verdict::Fail
    } else {
        Verdict::Pass
    }
}

impl CertificateBundle {
    pub fn new(config: RunConfig, sections: Vec<Section>) -> Self {
        let mut b = CertificateBundle {
            schema: SCHEMA.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            overall: overall(&sections),
            sections,
            digest: String::new(),
        };
        b.digest = b.compute_digest();
        b
    }

    pub fn compute_digest(&self) -> String {
        let mut copy = self.clone();
        copy.digest.clear();
        let bytes = serde_json::to_vec(&copy).expect("serialisable bundle");
        Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serialisable bundle");
        s.push('\n');
        s
    }

    /// Parses a bundle and checks schema tag, digest and overall verdict.
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let raw: Value = serde_json::from_str(text)?;
        let found = raw.get("schema").and_then(Value::as_str).unwrap_or("").to_string();
        if found != SCHEMA {
            return Err(CliError::SchemaMismatch { found, expected: SCHEMA.to_string() });
        }
        let b: CertificateBundle = serde_json::from_value(raw)?;
        if b.digest != b.compute_digest() {
            return Err(CliError::DigestMismatch);
        }
        if b.overall != overall(&b.sections) {
            return Err(CliError::Json("overall verdict disagrees with the sections".into()));
        }
        Ok(b)
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections.iter().find(|s| s.name == name)
    }

    pub fn first_failure(&self) -> Option<&Section> {
        self.sections.iter().find(|s| s.verdict == Verdict::Fail)
    }

    /// One line per section, fixed column order.
    pub fn summary(&self) -> String {
        let c = &self.config;
        let mut out = format!("certificate {} for q={} n={} s={} seed={}\n", self.schema, c.q(), c.n, c.s, c.seed);
        for s in &self.sections {
            let verdict = match s.verdict {
                Verdict::Pass => "pass",
                Verdict::Fail => "FAIL",
                Verdict::Skipped => "skipped",
            };
            let tol = s.tolerance.map(|t| format!("{t:e}")).unwrap_or_else(|| "exact".into());
            out.push_str(&format!("{:<28} {:<8} tol={:<8}", s.name, verdict, tol));
            if let Some(n) = &s.note {
                out.push_str(&format!(" [{n}]"));
            }
            out.push('\n');
        }
        out.push_str(&format!("overall: {}\n", if self.overall == Verdict::Pass { "pass" } else { "FAIL" }));
        if let Some(f) = self.first_failure() {
            out.push_str(&format!("first failure: {}: {}\n", f.name, f.witness.as_deref().unwrap_or("no witness recorded")));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bundle() -> CertificateBundle {
        let sections = vec![
            Section::new("a", true, Some(1e-9), serde_json::json!({"x": 1.5})),
            Section::skipped("b", "too large"),
        ];
        CertificateBundle::new(RunConfig::default(), sections)
    }

    #[test]
    fn round_trip_and_digest() {
        let b = bundle();
        assert_eq!(b.overall, Verdict::Pass);
        let json = b.to_json();
        let back = CertificateBundle::from_json(&json).unwrap();
        assert_eq!(back.to_json(), json);
        let tampered = json.replace("1.5", "2.5");
        assert!(matches!(CertificateBundle::from_json(&tampered), Err(CliError::DigestMismatch)));
        let other = json.replace(SCHEMA, "cosetcx.certificate/v0");
        assert!(matches!(CertificateBundle::from_json(&other), Err(CliError::SchemaMismatch { .. })));
    }

    #[test]
    fn failure_wins_and_is_reported() {
        let mut sections = bundle().sections;
        sections.push(Section::new("c", false, None, Value::Null).with_witness(Some("edge 3-4".into())));
        let b = CertificateBundle::new(RunConfig::default(), sections);
        assert_eq!(b.overall, Verdict::Fail);
        assert!(b.summary().contains("first failure: c: edge 3-4"));
    }
}
