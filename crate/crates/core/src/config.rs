//! TOML run configuration.
//!
//! ```toml
//! [spray]
//! n = 2
//! f = ["x1*y2^2", "-2*y1*y2/x1"]
//!
//! [[candidates]]
//! name = "euclidean"
//! F = "sqrt(y1^2+y2^2)"
//! expect = "pass"          # or "fail"
//!
//! [[projective_factors]]   # optional
//! name = "norm"
//! P = "sqrt(y1^2+y2^2)"
//!
//! [samples]                # optional, defaults shown
//! count = 200
//! seed = 0
//! x_lo = [-1.0, -1.0]
//! x_hi = [1.0, 1.0]
//! y_min = 0.5
//! y_max = 2.0
//!
//! [tolerances]             # optional, defaults shown
//! operator = 1e-8
//! containment = 1e-10
//! degeneracy = 1e-9
//! classify = 1e-8
//! ```

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::expr::{ExprError, ScalarModel, SprayModel};
use crate::geometry::CLASSIFY_TOL;
use crate::operators::Tolerances;
use crate::sampling::SampleBox;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid config: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("{field}: {source}")]
    Expr { field: String, source: ExprError },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expectation {
    Pass,
    Fail,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpray {
    n: usize,
    f: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCandidate {
    name: String,
    #[serde(rename = "F")]
    f: String,
    #[serde(default = "default_expect")]
    expect: Expectation,
}

fn default_expect() -> Expectation {
    Expectation::Pass
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFactor {
    name: String,
    #[serde(rename = "P")]
    p: String,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSamples {
    count: Option<usize>,
    seed: Option<u64>,
    x_lo: Option<Vec<f64>>,
    x_hi: Option<Vec<f64>>,
    y_min: Option<f64>,
    y_max: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ToleranceSet {
    pub operator: f64,
    pub containment: f64,
    pub degeneracy: f64,
    pub classify: f64,
}

impl Default for ToleranceSet {
    fn default() -> Self {
        let t = Tolerances::default();
        ToleranceSet {
            operator: t.operator,
            containment: t.containment,
            degeneracy: t.degeneracy,
            classify: CLASSIFY_TOL,
        }
    }
}

impl ToleranceSet {
    pub fn audit(&self) -> Tolerances {
        Tolerances {
            operator: self.operator,
            containment: self.containment,
            degeneracy: self.degeneracy,
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    spray: RawSpray,
    #[serde(default)]
    candidates: Vec<RawCandidate>,
    #[serde(default)]
    projective_factors: Vec<RawFactor>,
    #[serde(default)]
    samples: RawSamples,
    #[serde(default)]
    tolerances: ToleranceSet,
}

#[derive(Debug, Clone)]
pub struct Candidate {
    pub name: String,
    pub function: ScalarModel,
    pub expect: Expectation,
}

#[derive(Debug, Clone)]
pub struct NamedFactor {
    pub name: String,
    pub factor: ScalarModel,
}

#[derive(Debug, Clone, Serialize)]
pub struct SampleSettings {
    pub count: usize,
    pub seed: u64,
    pub region: SampleBox,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub spray: SprayModel,
    pub candidates: Vec<Candidate>,
    pub projective_factors: Vec<NamedFactor>,
    pub samples: SampleSettings,
    pub tolerances: ToleranceSet,
    /// Hex SHA-256 of the config text.
    pub digest: String,
}

fn expr_err(field: String) -> impl FnOnce(ExprError) -> ConfigError {
    move |source| ConfigError::Expr { field, source }
}

impl RunConfig {
    pub fn load(path: &str) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let raw: RawConfig = toml::from_str(text)?;
        let n = raw.spray.n;
        if n == 0 {
            return Err(ConfigError::Invalid("spray.n must be at least 1".into()));
        }
        if raw.spray.f.len() != n {
            return Err(ConfigError::Invalid(format!(
                "spray.f has {} entries but n = {n}",
                raw.spray.f.len()
            )));
        }
        let f = raw
            .spray
            .f
            .iter()
            .enumerate()
            .map(|(i, s)| crate::expr::parse(s, n).map_err(expr_err(format!("spray.f[{i}]"))))
            .collect::<Result<Vec<_>, _>>()?;
        let spray = SprayModel::new(n, f).map_err(expr_err("spray.f".into()))?;
        let candidates = raw
            .candidates
            .into_iter()
            .enumerate()
            .map(|(i, c)| {
                let function = ScalarModel::parse(n, &c.f, 1)
                    .map_err(expr_err(format!("candidates[{i}].F")))?;
                Ok(Candidate {
                    name: c.name,
                    function,
                    expect: c.expect,
                })
            })
            .collect::<Result<Vec<_>, ConfigError>>()?;
        let projective_factors = raw
            .projective_factors
            .into_iter()
            .enumerate()
            .map(|(i, p)| {
                let factor = ScalarModel::parse(n, &p.p, 1)
                    .map_err(expr_err(format!("projective_factors[{i}].P")))?;
                Ok(NamedFactor {
                    name: p.name,
                    factor,
                })
            })
            .collect::<Result<Vec<_>, ConfigError>>()?;
        let unit = SampleBox::unit(n);
        let s = raw.samples;
        let region = SampleBox {
            x_lo: s.x_lo.unwrap_or(unit.x_lo),
            x_hi: s.x_hi.unwrap_or(unit.x_hi),
            y_min: s.y_min.unwrap_or(unit.y_min),
            y_max: s.y_max.unwrap_or(unit.y_max),
        };
        if region.x_lo.len() != n || region.x_hi.len() != n {
            return Err(ConfigError::Invalid(format!(
                "samples.x_lo and samples.x_hi must have {n} entries"
            )));
        }
        if region
            .x_lo
            .iter()
            .zip(&region.x_hi)
            .any(|(a, b)| a.is_nan() || b.is_nan() || a > b)
            || !(0.0 < region.y_min && region.y_min <= region.y_max)
        {
            return Err(ConfigError::Invalid(
                "samples: need x_lo <= x_hi and 0 < y_min <= y_max".into(),
            ));
        }
        let t = &raw.tolerances;
        if [t.operator, t.containment, t.degeneracy, t.classify]
            .iter()
            .any(|v| !(*v > 0.0 && v.is_finite()))
        {
            return Err(ConfigError::Invalid("tolerances must be positive".into()));
        }
        Ok(RunConfig {
            spray,
            candidates,
            projective_factors,
            samples: SampleSettings {
                count: s.count.unwrap_or(200),
                seed: s.seed.unwrap_or(0),
                region,
            },
            tolerances: raw.tolerances,
            digest: hex_digest(text.as_bytes()),
        })
    }
}

pub fn hex_digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const POLAR: &str = r#"
[spray]
n = 2
f = ["x1*y2^2", "-2*y1*y2/x1"]

[[candidates]]
name = "euclidean"
F = "sqrt(y1^2 + x1^2*y2^2)"

[samples]
x_lo = [0.5, -1.0]
x_hi = [2.0, 1.0]
"#;

    #[test]
    fn parses_with_defaults() {
        let c = RunConfig::parse(POLAR).unwrap();
        assert_eq!(c.spray.dim(), 2);
        assert_eq!(c.candidates.len(), 1);
        assert_eq!(c.candidates[0].expect, Expectation::Pass);
        assert_eq!(c.samples.count, 200);
        assert_eq!(c.tolerances, ToleranceSet::default());
        assert_eq!(c.digest.len(), 64);
    }

    #[test]
    fn expression_errors_name_the_field() {
        let bad = POLAR.replace("-2*y1*y2/x1", "y3");
        let err = RunConfig::parse(&bad).unwrap_err().to_string();
        assert!(err.starts_with("spray.f[1]"), "{err}");
    }

    #[test]
    fn toml_errors_carry_positions() {
        let err = RunConfig::parse("[spray]\nn = \n").unwrap_err().to_string();
        assert!(err.contains("line 2"), "{err}");
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(RunConfig::parse(&format!("{POLAR}\n[extra]\na = 1\n")).is_err());
    }
}
