//! File formats.
//!
//! State sets are `{"t": int, "states": [[v1, ..., vt], ...]}` and
//! certificates are `{"cut": "A|BC", "y": ["p/q", ...], "qs": [[...], ...],
//! "value": "p/q"}`, with operator coefficients listed in lattice-basis
//! order (level 1 most significant). Rationals are always strings.
//!
//! Output is canonical: object keys sorted, arrays of scalars on one line,
//! everything else one item per line with two-space indentation, and a
//! trailing newline. Parsing a canonical file and writing it back gives the
//! same bytes.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bounds::GhzLikeSet;
use crate::certifier::{Certificate, CertifierError, StateSet};
use crate::exact::Rational;
use crate::ghz::{lattice_dim, Bipartition, DiagOperator, GhzError};

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File { path: String, source: std::io::Error },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("declared t = {declared} but state {index} has {found} levels")]
    LevelCount { declared: usize, index: usize, found: usize },
    #[error("operator {name} has {found} coefficients, expected {expected}")]
    OperatorLength { name: String, expected: usize, found: usize },
    #[error("t = 0 is not a valid level count")]
    ZeroLevels,
    #[error(transparent)]
    Certifier(#[from] CertifierError),
    #[error(transparent)]
    Ghz(#[from] GhzError),
}

/// On-disk state set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSetFile {
    pub t: usize,
    pub states: Vec<Vec<u8>>,
}

impl StateSetFile {
    pub fn from_set(set: &StateSet) -> Self {
        Self { t: set.levels(), states: set.states().iter().map(|v| v.values()).collect() }
    }

    pub fn to_set(&self) -> Result<StateSet, IoError> {
        if self.t == 0 {
            return Err(IoError::ZeroLevels);
        }
        if let Some((index, v)) = self.states.iter().enumerate().find(|(_, v)| v.len() != self.t) {
            return Err(IoError::LevelCount { declared: self.t, index, found: v.len() });
        }
        Ok(StateSet::from_values(&self.states)?)
    }
}

/// On-disk dual certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateFile {
    pub cut: Bipartition,
    pub y: Vec<Rational>,
    pub qs: Vec<Vec<Rational>>,
    pub value: Rational,
}

impl CertificateFile {
    pub fn from_certificate(cert: &Certificate) -> Self {
        Self {
            cut: cert.cut,
            y: cert.y.coeffs().to_vec(),
            qs: cert.qs.iter().map(|q| q.coeffs().to_vec()).collect(),
            value: cert.claimed_value.clone(),
        }
    }

    /// Converts to a certificate over `levels` levels.
    pub fn to_certificate(&self, levels: usize) -> Result<Certificate, IoError> {
        if levels == 0 {
            return Err(IoError::ZeroLevels);
        }
        let expected = lattice_dim(levels);
        let op = |name: String, coeffs: &[Rational]| {
            if coeffs.len() != expected {
                return Err(IoError::OperatorLength { name, expected, found: coeffs.len() });
            }
            Ok(DiagOperator::new(levels, coeffs.to_vec())?)
        };
        let y = op("y".to_string(), &self.y)?;
        let qs = self
            .qs
            .iter()
            .enumerate()
            .map(|(k, q)| op(format!("qs[{k}]"), q))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Certificate { cut: self.cut, y, qs, claimed_value: self.value.clone() })
    }

    /// Level count implied by the length of `y`, if it is a power of 8.
    pub fn levels(&self) -> Option<usize> {
        (1..=8).find(|&t| lattice_dim(t) == self.y.len())
    }
}

/// Serializes `value` in the canonical layout.
pub fn to_canonical_json<T: Serialize>(value: &T) -> Result<String, IoError> {
    let tree = serde_json::to_value(value)?;
    let mut out = String::new();
    write_value(&mut out, &tree, 0);
    out.push('\n');
    Ok(out)
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) if items.iter().all(is_scalar) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&item.to_string());
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(out, item, indent + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (key, item)) in map.iter().enumerate() {
                let _ = write!(out, "{}{}: ", pad(indent + 1), Value::String(key.clone()));
                write_value(out, item, indent + 1);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T, IoError> {
    Ok(serde_json::from_str(text)?)
}

pub fn read_text(path: &Path) -> Result<String, IoError> {
    fs::read_to_string(path).map_err(|source| IoError::File { path: path.display().to_string(), source })
}

pub fn write_text(path: &Path, text: &str) -> Result<(), IoError> {
    fs::write(path, text).map_err(|source| IoError::File { path: path.display().to_string(), source })
}

pub fn parse_state_set(text: &str) -> Result<StateSet, IoError> {
    from_json::<StateSetFile>(text)?.to_set()
}

pub fn state_set_json(set: &StateSet) -> String {
    to_canonical_json(&StateSetFile::from_set(set)).expect("state sets always serialize")
}

pub fn read_state_set(path: &Path) -> Result<StateSet, IoError> {
    parse_state_set(&read_text(path)?)
}

/// Parses a certificate; its level count comes from the length of `y`.
pub fn parse_certificate(text: &str) -> Result<Certificate, IoError> {
    let file: CertificateFile = from_json(text)?;
    let levels = file.levels().ok_or(IoError::OperatorLength {
        name: "y".to_string(),
        expected: 8,
        found: file.y.len(),
    })?;
    file.to_certificate(levels)
}

pub fn certificate_json(cert: &Certificate) -> String {
    to_canonical_json(&CertificateFile::from_certificate(cert)).expect("certificates always serialize")
}

pub fn read_certificate(path: &Path) -> Result<Certificate, IoError> {
    parse_certificate(&read_text(path)?)
}

pub fn parse_ghz_like_set(text: &str) -> Result<GhzLikeSet, IoError> {
    from_json(text)
}

pub fn ghz_like_set_json(set: &GhzLikeSet) -> String {
    to_canonical_json(set).expect("GHZ-like sets always serialize")
}

pub fn read_ghz_like_set(path: &Path) -> Result<GhzLikeSet, IoError> {
    parse_ghz_like_set(&read_text(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn state_set_layout_and_round_trip() {
        let set = StateSet::from_values(&[vec![1, 2], vec![7, 0]]).unwrap();
        let text = state_set_json(&set);
        assert_eq!(text, "{\n  \"states\": [\n    [1, 2],\n    [7, 0]\n  ],\n  \"t\": 2\n}\n");
        let back = parse_state_set(&text).unwrap();
        assert_eq!(back, set);
        assert_eq!(state_set_json(&back), text);
    }

    #[test]
    fn state_set_rejections() {
        assert!(matches!(parse_state_set(r#"{"t":1,"states":[]}"#), Err(IoError::Certifier(CertifierError::EmptySet))));
        assert!(matches!(parse_state_set(r#"{"t":2,"states":[[1]]}"#), Err(IoError::LevelCount { .. })));
        assert!(matches!(parse_state_set(r#"{"t":1,"states":[[8]]}"#), Err(IoError::Certifier(_))));
        assert!(matches!(parse_state_set(r#"{"t":1,"states":[[1],[1]]}"#), Err(IoError::Certifier(_))));
        assert!(matches!(parse_state_set("{"), Err(IoError::Json(_))));
        assert!(matches!(parse_state_set(r#"{"t":1,"states":[[1]],"x":0}"#), Err(IoError::Json(_))));
    }

    #[test]
    fn certificate_round_trip() {
        let set = StateSet::from_values(&[vec![1], vec![2], vec![3]]).unwrap();
        let cert = Certificate::trivial(&set, Bipartition::C);
        let text = certificate_json(&cert);
        assert!(text.contains("\"cut\": \"C|AB\""));
        assert!(text.contains("\"value\": \"8/3\""));
        let back = parse_certificate(&text).unwrap();
        assert_eq!(back, cert);
        assert_eq!(certificate_json(&back), text);
    }

    #[test]
    fn certificate_length_checked() {
        let bad = r#"{"cut":"A|BC","y":["1","1"],"qs":[],"value":"1"}"#;
        assert!(matches!(parse_certificate(bad), Err(IoError::OperatorLength { .. })));
        let ones = vec!["\"1\""; 8].join(",");
        let bad_q = format!(r#"{{"cut":"A|BC","y":[{ones}],"qs":[["1"]],"value":"1"}}"#);
        assert!(matches!(parse_certificate(&bad_q), Err(IoError::OperatorLength { .. })));
    }
}
