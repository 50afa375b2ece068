//! The composite verification report and its schema version.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, Result};

const SCHEMA_VERSION: &str = "1.0.0";

/// Bumped on any change to the report fields: minor for additions, major
/// for anything a reader could misinterpret.
pub fn report_schema_version() -> &'static str {
    SCHEMA_VERSION
}

/// An expected value, what was computed, and whether they agree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check<T> {
    pub expected: T,
    pub actual: T,
    #[serde(rename = "match")]
    pub matches: bool,
}

impl<T: PartialEq> Check<T> {
    pub fn new(expected: T, actual: T) -> Self {
        let matches = expected == actual;
        Self {
            expected,
            actual,
            matches,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenusRecord {
    pub genus: usize,
    #[serde(rename = "N")]
    pub almost_special: Check<u64>,
    #[serde(rename = "n")]
    pub special: Check<u64>,
    #[serde(rename = "m")]
    pub irreducible: Check<u64>,
    pub points: Check<u64>,
    pub lines: Check<u64>,
    pub f2_rank: Check<u64>,
    pub z_free_rank: Check<u64>,
    /// Invariant factors above one, as decimal strings.
    pub torsion: Check<Vec<String>>,
    pub mu_injective: Check<bool>,
    pub basis_unimodular: Check<bool>,
    pub closure_spans: Check<bool>,
    /// Present only when timings were requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl GenusRecord {
    pub fn all_match(&self) -> bool {
        [
            self.almost_special.matches,
            self.special.matches,
            self.irreducible.matches,
            self.points.matches,
            self.lines.matches,
            self.f2_rank.matches,
            self.z_free_rank.matches,
            self.torsion.matches,
            self.mu_injective.matches,
            self.basis_unimodular.matches,
            self.closure_spans.matches,
        ]
        .iter()
        .all(|&m| m)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: String,
    pub records: Vec<GenusRecord>,
    #[serde(rename = "match")]
    pub all_match: bool,
}

impl VerificationReport {
    pub fn new(records: Vec<GenusRecord>) -> Self {
        let all_match = records.iter().all(GenusRecord::all_match);
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            records,
            all_match,
        }
    }
}

fn major(version: &str) -> Option<u64> {
    version.split('.').next()?.parse().ok()
}

/// Parses a report, refusing any whose major schema version is newer than
/// this build understands.
pub fn parse_report(text: &str) -> Result<VerificationReport> {
    let raw: Value = serde_json::from_str(text)?;
    let found = raw
        .get("schema_version")
        .and_then(Value::as_str)
        .ok_or_else(|| CliError::Usage("report has no schema_version".into()))?;
    let ours = major(SCHEMA_VERSION).expect("own version is well formed");
    match major(found) {
        Some(m) if m <= ours => Ok(serde_json::from_value(raw)?),
        _ => Err(CliError::SchemaTooNew {
            found: found.to_string(),
            supported: SCHEMA_VERSION,
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record() -> GenusRecord {
        GenusRecord {
            genus: 0,
            almost_special: Check::new(1, 1),
            special: Check::new(1, 1),
            irreducible: Check::new(1, 1),
            points: Check::new(1, 1),
            lines: Check::new(0, 0),
            f2_rank: Check::new(0, 0),
            z_free_rank: Check::new(1, 1),
            torsion: Check::new(vec![], vec![]),
            mu_injective: Check::new(true, true),
            basis_unimodular: Check::new(true, true),
            closure_spans: Check::new(true, true),
            elapsed_ms: None,
        }
    }

    #[test]
    fn version_is_semver() {
        assert_eq!(report_schema_version(), "1.0.0");
    }

    #[test]
    fn round_trip() {
        let rep = VerificationReport::new(vec![record()]);
        assert!(rep.all_match);
        let text = serde_json::to_string(&rep).unwrap();
        assert!(text.contains("\"match\":true"));
        assert_eq!(parse_report(&text).unwrap(), rep);
    }

    #[test]
    fn newer_major_is_refused() {
        let mut v = serde_json::to_value(VerificationReport::new(vec![record()])).unwrap();
        v["schema_version"] = "2.0.0".into();
        let err = parse_report(&v.to_string()).unwrap_err();
        assert!(matches!(err, CliError::SchemaTooNew { .. }));
        assert!(err.to_string().contains("2.0.0"));

        v["schema_version"] = "1.4.0".into();
        assert!(parse_report(&v.to_string()).is_ok());
    }

    #[test]
    fn one_mismatch_fails_the_report() {
        let mut r = record();
        r.closure_spans = Check::new(true, false);
        assert!(!VerificationReport::new(vec![record(), r]).all_match);
    }
}
