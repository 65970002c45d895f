//! Experiment configuration files.
//!
//! The format is TOML with four sections:
//!
//! ```toml
//! [problem]
//! operator = "volterra"          # see `htrunc list-presets`
//! datum = "poly:0,0,0.5"
//! exact = "poly:0,1"             # optional
//!
//! [truncation]
//! trial = "legendre"             # legendre | fourier | canonical | svd | krylov
//! test = "legendre"              # optional; defaults depend on the trial basis
//! n_list = "2..=100"             # or an array such as [4, 10, 50]
//! solver = "qr"                  # qr | gmres | cg
//! tol = 1e-10
//! solution_family = "min-norm"   # min-norm | e_N | N*e_N
//!
//! [noise]                        # optional; switches to the closed-form noise series
//! sigma = "power:1,1"
//! g = "power:1,2"
//! nu = "power:1,1.5"
//!
//! [output]
//! csv = "out.csv"                # optional; stdout otherwise
//! tracked = [1, 2, 3, 5, 10]
//! ```

use serde::{Deserialize, Serialize};

use hilbert_trunc::diagnostics::DEFAULT_TRACKED;

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problem: ProblemConfig,
    pub truncation: TruncationConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise: Option<NoiseConfig>,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub operator: String,
    #[serde(default = "default_datum")]
    pub datum: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncationConfig {
    #[serde(default = "default_trial")]
    pub trial: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub test: Option<String>,
    pub n_list: NList,
    #[serde(default = "default_solver")]
    pub solver: String,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_family")]
    pub solution_family: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseConfig {
    pub sigma: String,
    pub g: String,
    pub nu: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<String>,
    #[serde(default = "default_tracked")]
    pub tracked: Vec<usize>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            csv: None,
            tracked: default_tracked(),
        }
    }
}

/// Truncation levels: an explicit array or a string of comma-separated
/// items, each `N` or an inclusive range `a..=b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NList {
    List(Vec<usize>),
    Spec(String),
}

impl NList {
    pub fn expand(&self) -> Result<Vec<usize>, CliError> {
        let ns = match self {
            NList::List(v) => v.clone(),
            NList::Spec(s) => parse_n_list(s)?,
        };
        if ns.is_empty() {
            return Err(CliError::Config("truncation.n_list: empty".into()));
        }
        if ns.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::Config(
                "truncation.n_list: values must be strictly increasing".into(),
            ));
        }
        Ok(ns)
    }
}

pub fn parse_n_list(s: &str) -> Result<Vec<usize>, CliError> {
    let bad = |item: &str| CliError::Config(format!("truncation.n_list: cannot parse `{item}`"));
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|i| !i.is_empty()) {
        if let Some((a, b)) = item.split_once("..=") {
            let a: usize = a.trim().parse().map_err(|_| bad(item))?;
            let b: usize = b.trim().parse().map_err(|_| bad(item))?;
            out.extend(a..=b);
        } else {
            out.push(item.parse().map_err(|_| bad(item))?);
        }
    }
    Ok(out)
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration is serializable")
    }
}

fn default_datum() -> String {
    "zero".into()
}

fn default_trial() -> String {
    "legendre".into()
}

fn default_solver() -> String {
    "qr".into()
}

fn default_tol() -> f64 {
    1e-10
}

fn default_family() -> String {
    "min-norm".into()
}

fn default_tracked() -> Vec<usize> {
    DEFAULT_TRACKED.to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_fills_defaults() {
        let c = ExperimentConfig::parse(
            "[problem]\noperator = \"volterra\"\n[truncation]\nn_list = [2, 3]\n",
        )
        .unwrap();
        assert_eq!(c.truncation.solver, "qr");
        assert_eq!(c.truncation.trial, "legendre");
        assert_eq!(c.output.tracked, vec![1, 2, 3, 5, 10]);
        assert_eq!(c.problem.datum, "zero");
        assert_eq!(ExperimentConfig::parse(&c.to_toml()).unwrap(), c);
    }

    #[test]
    fn errors_name_the_line_and_field() {
        let e = ExperimentConfig::parse("[problem]\noperator = \"volterra\"\nbogus = 1\n[truncation]\nn_list = [1]\n")
            .unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("bogus") && msg.contains('3'), "{msg}");
    }

    #[test]
    fn n_list_grammar() {
        assert_eq!(parse_n_list("2..=5, 8,16").unwrap(), vec![2, 3, 4, 5, 8, 16]);
        assert!(parse_n_list("2..5").is_err());
        assert!(NList::List(vec![3, 3]).expand().is_err());
        assert!(NList::Spec(String::new()).expand().is_err());
    }
}
