//! Scenario files: TOML by default, JSON when the file ends in `.json` or
//! starts with `{`.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use mushy_core::{BoundaryData, Coefficient, CoefficientSet, FaceCondition, Precision};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// The `case` field: an unknown coefficient, or `direct` when all are known.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum CaseSpec {
    Direct,
    Unknown(Coefficient),
}

impl FromStr for CaseSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim().eq_ignore_ascii_case("direct") {
            return Ok(CaseSpec::Direct);
        }
        s.parse::<Coefficient>()
            .map(CaseSpec::Unknown)
            .map_err(|_| format!("unknown case '{s}'; expected one of l, gamma, epsilon, k, rho, c, direct"))
    }
}

impl TryFrom<String> for CaseSpec {
    type Error = String;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<CaseSpec> for String {
    fn from(c: CaseSpec) -> String {
        c.to_string()
    }
}

impl fmt::Display for CaseSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseSpec::Direct => f.write_str("direct"),
            CaseSpec::Unknown(c) => write!(f, "{c}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abs_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    /// Profile and verification times.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub times: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nx: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h0_grid: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fd_step: Option<f64>,
    /// Verification points as fractions of s(t).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_fractions: Option<Vec<f64>>,
}

impl Options {
    fn is_empty(&self) -> bool {
        *self == Options::default()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub problem: FaceCondition,
    pub case: CaseSpec,
    #[serde(default)]
    pub coefficients: CoefficientSet,
    pub boundary: BoundaryData,
    #[serde(default, skip_serializing_if = "Options::is_empty")]
    pub options: Options,
}

impl Scenario {
    pub fn parse(text: &str, json: bool) -> Result<Self, CliError> {
        let parsed = if json || text.trim_start().starts_with('{') {
            serde_json::from_str(text).map_err(|e| CliError::Input(format!("invalid JSON scenario: {e}")))?
        } else {
            toml::from_str(text).map_err(|e| CliError::Input(format!("invalid scenario: {e}")))?
        };
        Ok(parsed)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        let json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
        Self::parse(&text, json)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serialises")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serialises")
    }

    /// The precision from the options, overridden by `tol`.
    pub fn precision(&self, tol: Option<f64>) -> Result<Precision, CliError> {
        let default = Precision::default();
        let abs_tol = tol.or(self.options.abs_tol).unwrap_or(default.abs_tol);
        let max_iter = self.options.max_iter.unwrap_or(default.max_iter);
        Precision::new(abs_tol, max_iter).ok_or_else(|| {
            CliError::Input(format!(
                "invalid precision: abs_tol = {abs_tol} must be positive and finite, max_iter = {max_iter} at least 1"
            ))
        })
    }
}
