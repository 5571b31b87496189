//! Experiment configuration: a JSON document, overridden field by field by
//! command-line flags.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use affinewalk::fourier::{Budgets, DEFAULT_CHARACTER_CAP};
use affinewalk::exactdist::DEFAULT_STATE_CAP;
use affinewalk::IntMatrix;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::failure::Failure;

/// A matrix given either as JSON rows or as text like `2,1;1,1`.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixSpec(pub IntMatrix);

impl FromStr for MatrixSpec {
    type Err = Failure;

    fn from_str(s: &str) -> Result<Self, Failure> {
        s.parse().map(Self).map_err(|e| Failure::Config(format!("cannot parse matrix {s:?}: {e}")))
    }
}

impl Serialize for MatrixSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MatrixSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Rows(IntMatrix),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Rows(m) => Ok(Self(m)),
            Repr::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Step counts `a`, `a..b` (exclusive) or `a..=b` (inclusive).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NRange {
    pub start: u64,
    /// Exclusive end.
    pub end: u64,
}

impl NRange {
    pub fn values(&self) -> Vec<u64> {
        (self.start..self.end).collect()
    }
}

impl FromStr for NRange {
    type Err = Failure;

    fn from_str(s: &str) -> Result<Self, Failure> {
        let bad = |why: &str| Failure::Config(format!("bad step range {s:?}: {why}"));
        let num = |x: &str| x.trim().parse::<u64>().map_err(|e| bad(&e.to_string()));
        if let Some((a, b)) = s.split_once("..=") {
            let (start, last) = (num(a)?, num(b)?);
            let end = last.checked_add(1).ok_or_else(|| bad("end too large"))?;
            Ok(Self { start, end: end.max(start) })
        } else if let Some((a, b)) = s.split_once("..") {
            let (start, end) = (num(a)?, num(b)?);
            Ok(Self { start, end: end.max(start) })
        } else {
            let n = num(s)?;
            Ok(Self { start: n, end: n + 1 })
        }
    }
}

impl fmt::Display for NRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

impl Serialize for NRange {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for NRange {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Single(u64),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Single(n) => Ok(Self { start: n, end: n + 1 }),
            Repr::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Every setting any subcommand reads. Absent fields fall back to
/// per-command defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrices: Option<Vec<MatrixSpec>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tags: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ps: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<NRange>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_cap: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub state_cap: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub character_cap: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell_max: Option<u64>,
}

macro_rules! overlay {
    ($base:expr, $top:expr, $($field:ident),*) => {
        ExperimentConfig { $($field: $top.$field.or($base.$field)),* }
    };
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Config(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Failure::Config(format!("invalid config {}: {e}", path.display())))
    }

    /// Fields set in `top` win over fields set in `self`.
    pub fn overlay(self, top: ExperimentConfig) -> Self {
        overlay!(
            self, top, matrix, matrices, tags, p, ps, epsilon, n, n_cap, seed, samples, method, c, c1, m, tol,
            state_cap, character_cap, ell_max
        )
    }

    pub fn budgets(&self) -> Budgets {
        Budgets {
            state_cap: self.state_cap.unwrap_or(DEFAULT_STATE_CAP),
            character_cap: self.character_cap.unwrap_or(DEFAULT_CHARACTER_CAP),
            ell_max: self.ell_max,
        }
    }

    pub fn matrix(&self) -> Result<&IntMatrix, Failure> {
        self.matrix.as_ref().map(|m| &m.0).ok_or_else(|| missing("matrix"))
    }

    pub fn p(&self) -> Result<u64, Failure> {
        self.p.ok_or_else(|| missing("p"))
    }
}

pub fn missing(field: &str) -> Failure {
    Failure::Config(format!("missing required setting `{field}` (pass --{} or set it in the config file)", field.replace('_', "-")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_ranges() {
        assert_eq!("0..16".parse::<NRange>().unwrap().values(), (0..16).collect::<Vec<_>>());
        assert_eq!("0..=15".parse::<NRange>().unwrap(), "0..16".parse().unwrap());
        assert_eq!("7".parse::<NRange>().unwrap().values(), vec![7]);
        assert!("5..3".parse::<NRange>().unwrap().values().is_empty());
        assert!("a..3".parse::<NRange>().is_err());
    }

    #[test]
    fn config_json_forms() {
        let a: ExperimentConfig = serde_json::from_str(r#"{"matrix": [[2,1],[1,1]], "p": 5, "n": "0..=3"}"#).unwrap();
        let b: ExperimentConfig = serde_json::from_str(r#"{"matrix": "2,1;1,1", "p": 5, "n": "0..4"}"#).unwrap();
        assert_eq!(a, b);
        let round: ExperimentConfig = serde_json::from_str(&serde_json::to_string(&a).unwrap()).unwrap();
        assert_eq!(round, a);
        assert!(serde_json::from_str::<ExperimentConfig>(r#"{"prime": 5}"#).is_err());
    }

    #[test]
    fn flags_override_file() {
        let file = ExperimentConfig { p: Some(5), seed: Some(1), ..Default::default() };
        let flags = ExperimentConfig { p: Some(7), ..Default::default() };
        let merged = file.overlay(flags);
        assert_eq!((merged.p, merged.seed), (Some(7), Some(1)));
    }
}
