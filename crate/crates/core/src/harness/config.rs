//! Experiment configuration, stored as TOML.
//!
//! ```toml
//! algorithm = "aod"        # ogd | ader | aod | aoa
//! eta = "auto"             # or a positive number (ogd only)
//! horizon = 512            # alias: rounds
//! seed = 3
//! comparators = ["minimizers", "piecewise-constant"]
//! trace = "trace.csv"
//! report = "report.csv"
//!
//! [environment]
//! kind = "abrupt"          # stationary | abrupt | drift | adversarial-linear
//! segments = 8
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Ogd,
    Ader,
    Aod,
    Aoa,
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::Ogd => "ogd",
            Algorithm::Ader => "ader",
            Algorithm::Aod => "aod",
            Algorithm::Aoa => "aoa",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ogd" => Ok(Algorithm::Ogd),
            "ader" => Ok(Algorithm::Ader),
            "aod" => Ok(Algorithm::Aod),
            "aoa" => Ok(Algorithm::Aoa),
            other => Err(Error::Config(format!(
                "unknown algorithm '{other}' (expected ogd, ader, aod or aoa)"
            ))),
        }
    }
}

/// OGD step size: tuned to `D / (G sqrt T)` or fixed.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "StepSizeRepr", into = "StepSizeRepr")]
pub enum StepSize {
    #[default]
    Auto,
    Fixed(f64),
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum StepSizeRepr {
    Value(f64),
    Word(String),
}

impl TryFrom<StepSizeRepr> for StepSize {
    type Error = String;

    fn try_from(repr: StepSizeRepr) -> std::result::Result<Self, String> {
        match repr {
            StepSizeRepr::Word(w) => w.parse().map_err(|e: Error| e.to_string()),
            StepSizeRepr::Value(v) => Ok(StepSize::Fixed(v)),
        }
    }
}

impl From<StepSize> for StepSizeRepr {
    fn from(eta: StepSize) -> Self {
        match eta {
            StepSize::Auto => StepSizeRepr::Word("auto".into()),
            StepSize::Fixed(v) => StepSizeRepr::Value(v),
        }
    }
}

impl FromStr for StepSize {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "auto" {
            return Ok(StepSize::Auto);
        }
        s.parse()
            .map(StepSize::Fixed)
            .map_err(|_| Error::Config(format!("eta must be 'auto' or a number, got '{s}'")))
    }
}

/// Synthetic loss sequences.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EnvironmentSpec {
    /// `|w - theta|` on `[0, 1]` with a fixed target.
    Stationary {
        #[serde(default = "default_theta")]
        theta: f64,
    },
    /// `|w - theta_t|` on `[0, 1]` with piecewise-constant targets.
    ///
    /// Segment starts default to `1 + floor(j T / m)`; levels default to
    /// seeded uniform draws from `[0, 1]`.
    Abrupt {
        #[serde(default = "default_abrupt_segments")]
        segments: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        change_points: Option<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        levels: Option<Vec<f64>>,
    },
    /// `|w - theta_t|` with `theta_t = (1 + sin(2 pi cycles t / T)) / 2`.
    Drift {
        #[serde(default = "default_drift_segments")]
        segments: usize,
        #[serde(default = "default_cycles")]
        cycles: f64,
    },
    /// `(<g_t, w> + D) / (2D)` on a ball of diameter one, with seeded random
    /// unit directions `g_t`.
    AdversarialLinear {
        #[serde(default = "default_dim")]
        dim: usize,
        #[serde(default = "default_linear_segments")]
        segments: usize,
    },
}

impl EnvironmentSpec {
    pub fn name(&self) -> &'static str {
        match self {
            EnvironmentSpec::Stationary { .. } => "stationary",
            EnvironmentSpec::Abrupt { .. } => "abrupt",
            EnvironmentSpec::Drift { .. } => "drift",
            EnvironmentSpec::AdversarialLinear { .. } => "adversarial-linear",
        }
    }
}

fn default_theta() -> f64 {
    0.3
}
fn default_abrupt_segments() -> usize {
    4
}
fn default_drift_segments() -> usize {
    8
}
fn default_cycles() -> f64 {
    1.0
}
fn default_dim() -> usize {
    2
}
fn default_linear_segments() -> usize {
    1
}

/// Where the comparator sequence for dynamic regret comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolicyName {
    Minimizers,
    PiecewiseConstant,
    /// Read from `comparator_file`.
    File,
}

fn default_policies() -> Vec<PolicyName> {
    vec![PolicyName::Minimizers, PolicyName::PiecewiseConstant]
}

fn default_trace() -> PathBuf {
    "trace.csv".into()
}

fn default_report() -> PathBuf {
    "report.csv".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub algorithm: Algorithm,
    #[serde(default)]
    pub eta: StepSize,
    #[serde(alias = "rounds")]
    pub horizon: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_policies")]
    pub comparators: Vec<PolicyName>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comparator_file: Option<PathBuf>,
    #[serde(default = "default_trace")]
    pub trace: PathBuf,
    #[serde(default = "default_report")]
    pub report: PathBuf,
    pub environment: EnvironmentSpec,
}

impl ExperimentConfig {
    /// A configuration with default policies and output paths.
    pub fn new(algorithm: Algorithm, horizon: usize, seed: u64, environment: EnvironmentSpec) -> Self {
        Self {
            algorithm,
            eta: StepSize::Auto,
            horizon,
            seed,
            comparators: default_policies(),
            comparator_file: None,
            trace: default_trace(),
            report: default_report(),
            environment,
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let config: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.horizon == 0 {
            return Err(Error::Config("horizon must be at least 1".into()));
        }
        if let StepSize::Fixed(eta) = self.eta {
            if !(eta > 0.0 && eta.is_finite()) {
                return Err(Error::Config(format!("eta must be positive, got {eta}")));
            }
            if self.algorithm != Algorithm::Ogd {
                return Err(Error::Config(format!(
                    "a fixed eta only applies to ogd, not {}",
                    self.algorithm
                )));
            }
        }
        if self.comparators.contains(&PolicyName::File) != self.comparator_file.is_some() {
            return Err(Error::Config(
                "the 'file' comparator policy and comparator_file must be given together".into(),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_minimal_config_with_defaults() {
        let c = ExperimentConfig::from_toml(
            "algorithm = \"aod\"\nrounds = 64\n[environment]\nkind = \"abrupt\"\n",
        )
        .unwrap();
        assert_eq!(c.horizon, 64);
        assert_eq!(c.eta, StepSize::Auto);
        assert_eq!(
            c.environment,
            EnvironmentSpec::Abrupt { segments: 4, change_points: None, levels: None }
        );
        assert_eq!(c.comparators, default_policies());
    }

    #[test]
    fn rejects_unknown_algorithm_and_environment() {
        let bad = ExperimentConfig::from_toml("algorithm = \"sgd\"\nhorizon = 4\n[environment]\nkind = \"drift\"\n");
        assert!(matches!(bad, Err(Error::Config(_))));
        let bad = ExperimentConfig::from_toml("algorithm = \"ogd\"\nhorizon = 4\n[environment]\nkind = \"rotating\"\n");
        assert!(matches!(bad, Err(Error::Config(_))));
        assert!(matches!("sgd".parse::<Algorithm>(), Err(Error::Config(_))));
    }

    #[test]
    fn fixed_eta_is_ogd_only() {
        let text = "algorithm = \"aod\"\neta = 0.1\nhorizon = 4\n[environment]\nkind = \"stationary\"\n";
        assert!(matches!(ExperimentConfig::from_toml(text), Err(Error::Config(_))));
        let text = text.replace("aod", "ogd");
        assert_eq!(ExperimentConfig::from_toml(&text).unwrap().eta, StepSize::Fixed(0.1));
    }

    fn arb_env() -> impl Strategy<Value = EnvironmentSpec> {
        prop_oneof![
            (-1e3f64..1e3).prop_map(|theta| EnvironmentSpec::Stationary { theta }),
            (
                1usize..20,
                proptest::option::of(proptest::collection::vec(1usize..1000, 0..5)),
                proptest::option::of(proptest::collection::vec(-1e6f64..1e6, 0..5)),
            )
                .prop_map(|(segments, change_points, levels)| EnvironmentSpec::Abrupt {
                    segments,
                    change_points,
                    levels
                }),
            (1usize..20, 0.01f64..10.0).prop_map(|(segments, cycles)| EnvironmentSpec::Drift { segments, cycles }),
            (1usize..8, 1usize..4).prop_map(|(dim, segments)| EnvironmentSpec::AdversarialLinear { dim, segments }),
        ]
    }

    fn arb_config() -> impl Strategy<Value = ExperimentConfig> {
        (
            prop_oneof![Just(Algorithm::Ogd), Just(Algorithm::Ader), Just(Algorithm::Aod), Just(Algorithm::Aoa)],
            proptest::option::of(1e-6f64..10.0),
            1usize..100_000,
            any::<u32>(),
            arb_env(),
            proptest::option::of("[a-z]{1,8}\\.csv"),
        )
            .prop_map(|(algorithm, eta, horizon, seed, environment, file)| {
                let mut c = ExperimentConfig::new(algorithm, horizon, u64::from(seed), environment);
                if algorithm == Algorithm::Ogd {
                    c.eta = eta.map_or(StepSize::Auto, StepSize::Fixed);
                }
                if let Some(f) = file {
                    c.comparators.push(PolicyName::File);
                    c.comparator_file = Some(f.into());
                }
                c
            })
    }

    proptest! {
        #[test]
        fn round_trips_through_toml(config in arb_config()) {
            let text = config.to_toml().unwrap();
            prop_assert_eq!(ExperimentConfig::from_toml(&text).unwrap(), config);
        }
    }
}
