use std::f64::consts::PI;

use clap::{Args, ValueEnum};
use fixtrace_core::pipeline::{PipelineConfig, DEFAULT_MAX_FRAGMENT_LENGTH, DEFAULT_MIN_FRAGMENT_LENGTH};
use fixtrace_core::{Algorithm, ReplicationRange, DEFAULT_THETA};
use serde::{Deserialize, Serialize};

use crate::{CliError, CliResult};

/// Which solvers a request runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlgorithmChoice {
    Base,
    Alg1,
    Alg1Sweep,
    #[default]
    Alg2,
    /// Baseline, Algorithm I and Algorithm II.
    All,
}

impl AlgorithmChoice {
    pub fn algorithms(self) -> Vec<Algorithm> {
        match self {
            AlgorithmChoice::Base => vec![Algorithm::Baseline],
            AlgorithmChoice::Alg1 => vec![Algorithm::Alg1Dijkstra],
            AlgorithmChoice::Alg1Sweep => vec![Algorithm::Alg1Sweep],
            AlgorithmChoice::Alg2 => vec![Algorithm::Alg2],
            AlgorithmChoice::All => vec![Algorithm::Baseline, Algorithm::Alg1Dijkstra, Algorithm::Alg2],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum RangeArg {
    #[default]
    Wide,
    Narrow,
}

impl From<RangeArg> for ReplicationRange {
    fn from(r: RangeArg) -> Self {
        match r {
            RangeArg::Wide => ReplicationRange::Wide,
            RangeArg::Narrow => ReplicationRange::Narrow,
        }
    }
}

/// Flags shared by every command.
#[derive(Debug, Clone, Args)]
pub struct ConfigArgs {
    /// Largest visual angle a gap may span, in radians.
    #[arg(long, global = true, default_value_t = DEFAULT_THETA)]
    pub theta: f64,
    /// Fragments longer than this many pixels are cut into near-equal pieces.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_FRAGMENT_LENGTH)]
    pub max_fragment_length: usize,
    /// Traced chains shorter than this are dropped.
    #[arg(long, global = true, default_value_t = DEFAULT_MIN_FRAGMENT_LENGTH)]
    pub min_fragment_length: usize,
    /// Solvers to run; `solve` defaults to alg2 and `bench` to all.
    #[arg(long, global = true, value_enum)]
    pub algorithm: Option<AlgorithmChoice>,
    #[arg(long, global = true, value_enum, default_value_t = RangeArg::Wide)]
    pub replication_range: RangeArg,
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub theta: f64,
    pub max_fragment_length: usize,
    pub min_fragment_length: usize,
    pub algorithm: AlgorithmChoice,
    pub replication_range: ReplicationRange,
    pub json: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            theta: DEFAULT_THETA,
            max_fragment_length: DEFAULT_MAX_FRAGMENT_LENGTH,
            min_fragment_length: DEFAULT_MIN_FRAGMENT_LENGTH,
            algorithm: AlgorithmChoice::default(),
            replication_range: ReplicationRange::Wide,
            json: false,
        }
    }
}

impl ConfigArgs {
    /// Validated configuration; `default` applies when no algorithm was given.
    pub fn resolve(&self, default: AlgorithmChoice) -> CliResult<RunConfig> {
        let cfg = RunConfig {
            theta: self.theta,
            max_fragment_length: self.max_fragment_length,
            min_fragment_length: self.min_fragment_length,
            algorithm: self.algorithm.unwrap_or(default),
            replication_range: self.replication_range.into(),
            json: self.json,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

impl RunConfig {
    pub fn validate(&self) -> CliResult<()> {
        validate_theta(self.theta)?;
        if self.max_fragment_length < 2 {
            return Err(CliError::Invalid(format!(
                "max fragment length must be >= 2, got {}",
                self.max_fragment_length
            )));
        }
        if self.min_fragment_length < 2 {
            return Err(CliError::Invalid(format!(
                "min fragment length must be >= 2, got {}",
                self.min_fragment_length
            )));
        }
        Ok(())
    }

    pub fn pipeline(&self) -> PipelineConfig {
        PipelineConfig {
            theta: self.theta,
            max_fragment_length: Some(self.max_fragment_length),
            min_fragment_length: self.min_fragment_length,
            replication_range: self.replication_range,
            ..PipelineConfig::default()
        }
    }
}

pub fn validate_theta(theta: f64) -> CliResult<()> {
    if theta > 0.0 && theta <= PI {
        Ok(())
    } else {
        Err(CliError::Invalid(format!("theta must lie in (0, pi], got {theta}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_bounds() {
        assert!(validate_theta(PI).is_ok());
        assert!(validate_theta(3.5).is_err());
        assert!(validate_theta(0.0).is_err());
        assert!(validate_theta(f64::NAN).is_err());
    }

    #[test]
    fn lengths_validated() {
        let cfg = RunConfig { max_fragment_length: 1, ..Default::default() };
        assert_eq!(cfg.validate().unwrap_err().exit_code(), CliError::EXIT_INVALID);
        let cfg = RunConfig { min_fragment_length: 1, ..Default::default() };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn all_runs_three_solvers() {
        assert_eq!(AlgorithmChoice::All.algorithms().len(), 3);
        let parsed: AlgorithmChoice = serde_json::from_str("\"alg1-sweep\"").unwrap();
        assert_eq!(parsed, AlgorithmChoice::Alg1Sweep);
    }
}
