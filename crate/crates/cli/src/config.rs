//! Scenario configuration files (JSON).

use momenta_core::lattice::LatticeSubgroup;
use momenta_core::lie::DualVector;
use momenta_core::momentum::CocycleTheta;
use momenta_core::scalar::QuadraticField;
use momenta_core::scenario::Scenario;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("config field `{field}`: {message}")]
    Field { field: String, message: String },
}

fn field_err(field: impl Into<String>, message: impl ToString) -> ConfigError {
    ConfigError::Field { field: field.into(), message: message.to_string() }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase", deny_unknown_fields)]
pub enum GroupSpec {
    Torus { dim: usize },
    /// The Heisenberg example; analysed on `G = S¹ × ℝ²`, whose universal
    /// cover is the Heisenberg group.
    Heisenberg,
    CentralExtension,
}

fn default_field() -> String {
    "2".into()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct VerifySettings {
    #[serde(default = "VerifySettings::default_tolerance")]
    pub tolerance: f64,
    #[serde(default = "VerifySettings::default_samples")]
    pub sample_count: usize,
    #[serde(default = "VerifySettings::default_seed")]
    pub seed: u64,
}

impl VerifySettings {
    fn default_tolerance() -> f64 {
        1e-8
    }
    fn default_samples() -> usize {
        100
    }
    fn default_seed() -> u64 {
        42
    }
}

impl Default for VerifySettings {
    fn default() -> Self {
        Self {
            tolerance: Self::default_tolerance(),
            sample_count: Self::default_samples(),
            seed: Self::default_seed(),
        }
    }
}

/// The document as written by the user.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ScenarioConfig {
    pub group: GroupSpec,
    /// `r` with `α = √r`.
    #[serde(default = "default_field")]
    pub field: String,
    #[serde(default)]
    pub theta: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub sigma: Option<[String; 2]>,
    #[serde(default, rename = "mu")]
    pub mu_list: Vec<Vec<f64>>,
    /// Generators of `Γ_N` as columns.
    #[serde(default, rename = "gammaN")]
    pub gamma_n: Option<Vec<Vec<i64>>>,
    #[serde(default)]
    pub verify: VerifySettings,
}

/// A validated configuration.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub config: ScenarioConfig,
    pub scenario: Scenario,
    pub mu_list: Vec<DualVector>,
    pub gamma_n: Option<LatticeSubgroup>,
}

pub fn parse_config(text: &str) -> Result<Loaded, ConfigError> {
    let config: ScenarioConfig = serde_json::from_str(text).map_err(|e| ConfigError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    validate(config)
}

pub fn validate(config: ScenarioConfig) -> Result<Loaded, ConfigError> {
    let field = QuadraticField::parse(&config.field).map_err(|e| field_err("field", e))?;
    let scenario = match &config.group {
        GroupSpec::Torus { dim } => {
            if *dim == 0 {
                return Err(field_err("group.dim", "dimension must be positive"));
            }
            if config.sigma.is_some() {
                return Err(field_err("sigma", "only used by the Heisenberg family"));
            }
            let rows = config.theta.as_ref().ok_or_else(|| field_err("theta", "required for torus"))?;
            if rows.len() != *dim || rows.iter().any(|r| r.len() != *dim) {
                return Err(field_err("theta", format!("expected a {dim}×{dim} matrix")));
            }
            let mut matrix = Vec::with_capacity(*dim);
            for (i, row) in rows.iter().enumerate() {
                let mut parsed = Vec::with_capacity(*dim);
                for (j, s) in row.iter().enumerate() {
                    parsed.push(field.scalar(s).map_err(|e| field_err(format!("theta[{i}][{j}]"), e))?);
                }
                matrix.push(parsed);
            }
            let theta = CocycleTheta::new(&field, matrix).map_err(|e| field_err("theta", e))?;
            Scenario::torus(theta).map_err(|e| field_err("theta", e))?
        }
        GroupSpec::Heisenberg | GroupSpec::CentralExtension => {
            if config.theta.is_some() {
                return Err(field_err("theta", "the Heisenberg family is configured by sigma"));
            }
            let s = config.sigma.as_ref().ok_or_else(|| field_err("sigma", "required"))?;
            let s1 = field.scalar(&s[0]).map_err(|e| field_err("sigma[0]", e))?;
            let s2 = field.scalar(&s[1]).map_err(|e| field_err("sigma[1]", e))?;
            Scenario::central_extension(&field, [s1, s2]).map_err(|e| field_err("sigma", e))?
        }
    };
    let n = scenario.dim();
    let mut mu_list = Vec::with_capacity(config.mu_list.len());
    for (i, mu) in config.mu_list.iter().enumerate() {
        if mu.len() != n {
            return Err(field_err(format!("mu[{i}]"), format!("expected {n} entries")));
        }
        if mu.iter().any(|x| !x.is_finite()) {
            return Err(field_err(format!("mu[{i}]"), "entries must be finite"));
        }
        mu_list.push(DualVector(mu.clone()));
    }
    let rank = scenario.fundamental_rank();
    let gamma_n = match &config.gamma_n {
        None => None,
        Some(cols) => {
            if cols.iter().any(|c| c.len() != rank) {
                return Err(field_err("gammaN", format!("columns must have {rank} entries")));
            }
            let lattice = LatticeSubgroup::from_columns(rank, cols);
            if !lattice.is_subgroup_of(&scenario.gamma0()) {
                return Err(field_err("gammaN", "not contained in Γ₀, so the cover is not Hamiltonian"));
            }
            Some(lattice)
        }
    };
    let v = &config.verify;
    if !(v.tolerance > 0.0 && v.tolerance.is_finite()) {
        return Err(field_err("verify.tolerance", "must be positive"));
    }
    if v.sample_count == 0 {
        return Err(field_err("verify.sampleCount", "must be positive"));
    }
    Ok(Loaded { config, scenario, mu_list, gamma_n })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_config_parses() {
        let c = parse_config(r#"{"group": {"kind": "torus", "dim": 2}, "theta": [["0","1"],["-1","0"]]}"#).unwrap();
        assert_eq!(c.config.verify, VerifySettings::default());
        assert_eq!(c.scenario.dim(), 2);
    }

    #[test]
    fn non_skew_theta_is_rejected() {
        let e = parse_config(r#"{"group": {"kind": "torus", "dim": 2}, "theta": [["0","1"],["1","0"]]}"#).unwrap_err();
        assert!(e.to_string().contains("theta not antisymmetric"), "{e}");
    }

    #[test]
    fn exact_entry_syntax() {
        let c = parse_config(
            r#"{"group": {"kind": "torus", "dim": 2}, "field": "2", "theta": [["0","1/2+1/3*al"],["-1/2-1/3*al","0"]]}"#,
        )
        .unwrap();
        let e = &c.scenario.phase().theta().entries()[0][1];
        assert_eq!(e.to_string(), "1/2+1/3*al");
    }

    #[test]
    fn errors_carry_location() {
        let e = parse_config("{\n  \"group\": {\"kind\": \"torus\", \"dim\": 2},\n  \"theta\": [[\"0\",\"1 \"],[\"-1\",\"0\"]]\n}").unwrap_err();
        assert!(e.to_string().contains("theta[0][1]"), "{e}");
        let e = parse_config("{\n  \"group\": \n}").unwrap_err();
        assert!(matches!(e, ConfigError::Syntax { line: 3, .. }), "{e:?}");
        let e = parse_config(r#"{"group": {"kind": "heisenberg"}, "field": "4", "sigma": ["1","0"]}"#).unwrap_err();
        assert!(e.to_string().contains("field"), "{e}");
    }
}
