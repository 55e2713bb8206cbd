//! Scenario files.
//!
//! ```json
//! {
//!   "schema": 1,
//!   "name": "figure1",
//!   "family": { "kind": "bernoulli" },
//!   "prior": { "type": "atoms", "atoms": [{ "theta": "1/2", "weight": "1" }] },
//!   "theta0": "1/2",
//!   "theta1": "13/20",
//!   "horizon": 200,
//!   "numeric_mode": "exact",
//!   "outputs": ["csv", "json", "svg"]
//! }
//! ```
//!
//! Parameters may be JSON numbers or `"p/q"` / decimal strings; both are read
//! exactly. Errors name the offending key and the line it sits on.

use std::path::Path;

use posterior_dynamics::priors::{json_to_value, value_to_json};
use posterior_dynamics::psi::NumericMode;
use posterior_dynamics::{FamilySpec, Prior, Value};
use serde_json::{json, Map};

use crate::{CliError, CliResult};

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum OutputKind {
    Csv,
    Json,
    Svg,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub description: Option<String>,
    pub family: FamilySpec,
    pub prior: Prior,
    pub theta0: Value,
    pub theta1: Value,
    pub horizon: u64,
    pub numeric_mode: NumericMode,
    pub outputs: Vec<OutputKind>,
}

const KEYS: [&str; 10] = [
    "schema",
    "name",
    "description",
    "family",
    "prior",
    "theta0",
    "theta1",
    "horizon",
    "numeric_mode",
    "outputs",
];

/// 1-based line of the first occurrence of `"key"` in the source.
fn line_of(text: &str, key: &str) -> usize {
    let needle = format!("\"{key}\"");
    text.lines().position(|l| l.contains(&needle)).map_or(1, |i| i + 1)
}

fn schema_error(text: &str, origin: &str, key: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Schema(format!("{origin}:{}: {key}: {msg}", line_of(text, key)))
}

impl Scenario {
    pub fn from_path(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Scenario::parse(&text, &path.display().to_string())
    }

    /// Parse scenario text; `origin` prefixes error messages.
    pub fn parse(text: &str, origin: &str) -> CliResult<Self> {
        let root: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| CliError::Schema(format!("{origin}:{}:{}: invalid JSON: {e}", e.line(), e.column())))?;
        let obj = root
            .as_object()
            .ok_or_else(|| CliError::Schema(format!("{origin}:1: scenario must be a JSON object")))?;
        let err = |key: &str, msg: &dyn std::fmt::Display| schema_error(text, origin, key, msg);
        if let Some(k) = obj.keys().find(|k| !KEYS.contains(&k.as_str())) {
            return Err(err(k, &"unknown key"));
        }
        let get = |key: &str| obj.get(key).ok_or_else(|| err(key, &"missing required key"));

        match obj.get("schema").map(|v| v.as_u64()) {
            None => {}
            Some(Some(SCHEMA_VERSION)) => {}
            Some(_) => return Err(err("schema", &format!("unsupported version (expected {SCHEMA_VERSION})"))),
        }
        let name = match obj.get("name") {
            None => "scenario".to_string(),
            Some(v) => {
                let s = v.as_str().ok_or_else(|| err("name", &"expected a string"))?;
                if s.is_empty() || !s.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_') {
                    return Err(err("name", &"use letters, digits, '-' or '_'"));
                }
                s.to_string()
            }
        };
        let description = match obj.get("description") {
            None => None,
            Some(v) => Some(v.as_str().ok_or_else(|| err("description", &"expected a string"))?.to_string()),
        };
        let family: FamilySpec = serde_json::from_value(get("family")?.clone()).map_err(|e| err("family", &e))?;
        let prior = Prior::from_json(get("prior")?).map_err(|e| err("prior", &e))?;
        let theta0 = json_to_value(get("theta0")?, true).map_err(|e| err("theta0", &e))?;
        let theta1 = json_to_value(get("theta1")?, true).map_err(|e| err("theta1", &e))?;
        let horizon = get("horizon")?
            .as_u64()
            .filter(|&h| h >= 3)
            .ok_or_else(|| err("horizon", &"expected an integer >= 3"))?;
        let numeric_mode = match obj.get("numeric_mode") {
            None => NumericMode::Auto,
            Some(v) => v
                .as_str()
                .ok_or_else(|| err("numeric_mode", &"expected a string"))?
                .parse()
                .map_err(|e| err("numeric_mode", &e))?,
        };
        let outputs = match obj.get("outputs") {
            None => vec![OutputKind::Csv, OutputKind::Json],
            Some(v) => {
                let list = v.as_array().ok_or_else(|| err("outputs", &"expected a list"))?;
                let mut out = list
                    .iter()
                    .map(|o| match o.as_str() {
                        Some("csv") => Ok(OutputKind::Csv),
                        Some("json") => Ok(OutputKind::Json),
                        Some("svg") => Ok(OutputKind::Svg),
                        _ => Err(err("outputs", &format!("unknown output {o} (expected csv, json or svg)"))),
                    })
                    .collect::<CliResult<Vec<_>>>()?;
                out.sort();
                out.dedup();
                out
            }
        };

        prior.validate_for(&family).map_err(|e| err("prior", &e))?;
        if let Prior::Atoms(d) = &prior {
            if d.index_of(&theta0).is_none() {
                return Err(err("theta0", &"must be one of the prior atoms"));
            }
        }
        let t0 = theta0.to_f64();
        let on_support = match &prior {
            Prior::Named(p) => p.ln_density(t0).is_finite(),
            Prior::Atoms(_) => true,
        };
        if !on_support {
            return Err(err("theta0", &"outside the prior support"));
        }
        Ok(Scenario { name, description, family, prior, theta0, theta1, horizon, numeric_mode, outputs })
    }

    /// Canonical JSON echo of the scenario.
    pub fn to_json(&self) -> serde_json::Value {
        let mut m = Map::new();
        m.insert("schema".into(), json!(SCHEMA_VERSION));
        m.insert("name".into(), json!(self.name));
        if let Some(d) = &self.description {
            m.insert("description".into(), json!(d));
        }
        m.insert("family".into(), serde_json::to_value(self.family).expect("family serializes"));
        m.insert("prior".into(), self.prior.to_json());
        m.insert("theta0".into(), value_to_json(&self.theta0));
        m.insert("theta1".into(), value_to_json(&self.theta1));
        m.insert("horizon".into(), json!(self.horizon));
        let mode = match self.numeric_mode {
            NumericMode::Exact => "exact",
            NumericMode::Float => "float",
            NumericMode::Auto => "auto",
        };
        m.insert("numeric_mode".into(), json!(mode));
        let outs: Vec<&str> = self
            .outputs
            .iter()
            .map(|o| match o {
                OutputKind::Csv => "csv",
                OutputKind::Json => "json",
                OutputKind::Svg => "svg",
            })
            .collect();
        m.insert("outputs".into(), json!(outs));
        serde_json::Value::Object(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"{
  "family": { "kind": "bernoulli" },
  "prior": { "type": "atoms", "atoms": [
    { "theta": "1/2", "weight": "1/2" },
    { "theta": 1, "weight": "1/2" }
  ] },
  "theta0": 0.5,
  "theta1": "1/2",
  "horizon": 5
}"#;

    #[test]
    fn parses_minimal() {
        let s = Scenario::parse(BASE, "t.json").unwrap();
        assert_eq!(s.horizon, 5);
        assert_eq!(s.numeric_mode, NumericMode::Auto);
        assert!(s.theta0.is_exact());
        let again = Scenario::parse(&s.to_json().to_string(), "echo").unwrap();
        assert_eq!(again.prior, s.prior);
    }

    #[test]
    fn errors_are_line_anchored() {
        let bad = BASE.replace("\"horizon\": 5", "\"horizon\": 2");
        let e = Scenario::parse(&bad, "t.json").unwrap_err();
        assert_eq!(e.exit_code(), 2);
        assert!(e.to_string().starts_with("t.json:9: horizon"), "{e}");

        let bad = BASE.replace("\"theta0\": 0.5", "\"theta0\": 0.25");
        let e = Scenario::parse(&bad, "t.json").unwrap_err();
        assert!(e.to_string().contains(":7: theta0"), "{e}");

        let e = Scenario::parse("{ \"family\": ", "t.json").unwrap_err();
        assert!(e.to_string().starts_with("t.json:1:"), "{e}");

        let bad = BASE.replace("\"horizon\"", "\"horizon_typo\"");
        assert!(Scenario::parse(&bad, "t.json").unwrap_err().to_string().contains("unknown key"));
    }
}
