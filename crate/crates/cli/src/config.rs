//! Scenario files: JSON with named operators, families, symbols, problems,
//! lattice paths and scenarios.

use std::collections::BTreeMap;

use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub operators: BTreeMap<String, OperatorSpec>,
    #[serde(default)]
    pub families: BTreeMap<String, FamilySpec>,
    #[serde(default)]
    pub symbols: BTreeMap<String, SymbolSpec>,
    #[serde(default)]
    pub problems: BTreeMap<String, ProblemSpec>,
    #[serde(default)]
    pub paths: BTreeMap<String, PathSpec>,
    pub scenarios: BTreeMap<String, ScenarioSpec>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignSpec {
    #[default]
    Signed,
    Abs,
    NegAbs,
}

fn one() -> f64 {
    1.0
}

fn one_u32() -> u32 {
    1
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentSpec {
    #[serde(default = "one")]
    pub scale: f64,
    pub offset: f64,
    #[serde(default = "one_u32")]
    pub power: u32,
    #[serde(default)]
    pub sign: SignSpec,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixSpec {
    pub dim: usize,
    /// Row-major real parts.
    pub re: Vec<f64>,
    /// Row-major imaginary parts; zero when absent.
    #[serde(default)]
    pub im: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum OperatorSpec {
    Lattice {
        components: Vec<ComponentSpec>,
        #[serde(default)]
        removed: Vec<f64>,
        #[serde(default)]
        added: Vec<f64>,
    },
    Matrix {
        dim: usize,
        re: Vec<f64>,
        #[serde(default)]
        im: Vec<f64>,
        #[serde(default = "one_u32")]
        order: u32,
    },
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum LoopSpec {
    Full,
    Window { lo: f64, hi: f64 },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FamilySpec {
    Curves {
        grid: Vec<f64>,
        curves: Vec<Vec<f64>>,
        #[serde(default, rename = "loop")]
        loop_check: Option<LoopSpec>,
    },
    Matrices {
        grid: Vec<f64>,
        matrices: Vec<MatrixSpec>,
        #[serde(default, rename = "loop")]
        loop_check: Option<LoopSpec>,
    },
    /// `scale (k + from + tau (to - from))` for `|k| <= mode window`.
    LatticeShift {
        #[serde(default = "one")]
        scale: f64,
        from: f64,
        to: f64,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub xi_power: u32,
    /// `[k, re, im]` triples.
    pub fourier_coeffs: Vec<(i64, f64, f64)>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolSpec {
    pub order: u32,
    pub terms: Vec<TermSpec>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConventionsSpec {
    pub near_includes_zero: Option<bool>,
    pub far_flip: Option<bool>,
    pub far_includes_zero: Option<bool>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    /// Name of a first-order lattice operator.
    pub base: String,
    /// `[t, chi(t)]` nodes.
    pub profile: Vec<(f64, f64)>,
    #[serde(default)]
    pub tau: f64,
    pub conventions: Option<ConventionsSpec>,
    /// Overrides `--mode-window`.
    pub window: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathSpec {
    pub scales: Option<Vec<f64>>,
    pub start: Vec<f64>,
    pub end: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepParam {
    Tau,
    /// Offset of a single-component lattice.
    Offset,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub values: Option<Vec<f64>>,
    pub from: Option<f64>,
    pub to: Option<f64>,
    pub steps: Option<usize>,
}

impl SweepSpec {
    /// Sweep values in ascending order.
    pub fn values(&self) -> Result<Vec<f64>, CliError> {
        let mut v = match (&self.values, self.from, self.to, self.steps) {
            (Some(v), None, None, None) => v.clone(),
            (None, Some(a), Some(b), Some(n)) if n >= 1 => {
                (0..=n).map(|i| a + (b - a) * i as f64 / n as f64).collect()
            }
            _ => {
                return Err(CliError::Config(
                    "sweep: give either `values` or all of `from`, `to`, `steps` (steps >= 1)".into(),
                ))
            }
        };
        if v.iter().any(|x| !x.is_finite()) {
            return Err(CliError::Config("sweep: values must be finite".into()));
        }
        v.sort_by(f64::total_cmp);
        Ok(v)
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverSpec {
    pub sheets: u32,
    #[serde(default)]
    pub trivial: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BackendSpec {
    #[default]
    ClosedForm,
    Hurwitz,
}

fn default_samples() -> usize {
    200
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ScenarioSpec {
    Eta {
        operators: Vec<String>,
        #[serde(default)]
        backend: BackendSpec,
        sweep: Option<SweepSpec>,
    },
    Zeta {
        operators: Vec<String>,
    },
    Sf {
        family: String,
    },
    LoopSf {
        family: String,
    },
    Aps {
        problem: String,
        sweep: Option<SweepSpec>,
    },
    Modn {
        problem: String,
        cover: CoverSpec,
        sweep: Option<SweepSpec>,
    },
    Inv {
        problem: String,
        cover: CoverSpec,
        sweep: Option<SweepSpec>,
    },
    SeeleyZeta {
        symbols: Vec<String>,
    },
    Decomposition {
        path: String,
        #[serde(default = "default_samples")]
        samples: usize,
    },
    Suite {
        name: String,
    },
}

/// Parses a config, naming the path of the offending key on failure.
pub fn parse_config(text: &str) -> Result<Config, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if path.is_empty() || path == "." {
            CliError::Config(inner.to_string())
        } else {
            CliError::Config(format!("{path}: {inner}"))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_minimal_config() {
        let c = parse_config(
            r#"{"operators": {"a": {"kind": "lattice", "components": [{"offset": 0.3}]}},
                "scenarios": {"s": {"command": "eta", "operators": ["a"]}}}"#,
        )
        .unwrap();
        assert_eq!(c.operators.len(), 1);
        assert!(matches!(c.scenarios["s"], ScenarioSpec::Eta { .. }));
    }

    #[test]
    fn unknown_keys_are_named() {
        let err = parse_config(
            r#"{"scenarios": {"s": {"command": "eta", "operators": ["a"], "bogus_key": 1}}}"#,
        )
        .unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("bogus_key"), "{msg}");
        assert!(msg.contains("scenarios.s"), "{msg}");
    }

    #[test]
    fn sweep_values() {
        let s = SweepSpec { param: SweepParam::Tau, values: Some(vec![0.3, -0.1]), from: None, to: None, steps: None };
        assert_eq!(s.values().unwrap(), vec![-0.1, 0.3]);
        let r = SweepSpec { param: SweepParam::Tau, values: None, from: Some(0.0), to: Some(1.0), steps: Some(4) };
        assert_eq!(r.values().unwrap().len(), 5);
        let bad = SweepSpec { param: SweepParam::Tau, values: None, from: Some(0.0), to: None, steps: None };
        assert!(bad.values().is_err());
    }
}
