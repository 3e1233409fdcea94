//! Experiment configuration: a flat JSON document with hard-validated
//! ranges. Unknown keys are rejected so typos fail loudly instead of
//! silently running a different experiment.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::HarnessError;

/// Which solvers a trial runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Greedy,
    Heuristic,
    Random,
    Optimal,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Method::Greedy => "greedy",
            Method::Heuristic => "heuristic",
            Method::Random => "random",
            Method::Optimal => "optimal",
        };
        f.write_str(name)
    }
}

impl std::str::FromStr for Method {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "greedy" => Ok(Method::Greedy),
            "heuristic" => Ok(Method::Heuristic),
            "random" => Ok(Method::Random),
            "optimal" => Ok(Method::Optimal),
            other => Err(HarnessError::Config(format!("unknown method '{other}'"))),
        }
    }
}

/// Second-phase evaluation order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveMode {
    Set,
    Sequence,
}

impl std::str::FromStr for SolveMode {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "set" => Ok(SolveMode::Set),
            "sequence" => Ok(SolveMode::Sequence),
            other => Err(HarnessError::Config(format!("unknown mode '{other}'"))),
        }
    }
}

/// Full experiment description. Instance sizes are drawn uniformly from the
/// closed ranges below; every field has a desk-scale default so the stock
/// experiment keeps each trial inside the exact oracle's budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    /// Base seed; trial `i` derives its own generator stream from it.
    pub seed: u64,
    pub trials: usize,
    /// Allocation-side ranges, each within 2..=6.
    pub r1_range: [usize; 2],
    pub d_range: [usize; 2],
    pub e_req_range: [usize; 2],
    /// Deployment-side ranges: state dim within 2..=5, horizon within
    /// 2..=5, robots within 2..=4.
    pub p_range: [usize; 2],
    pub k_range: [usize; 2],
    pub r2_range: [usize; 2],
    /// Tasks a single robot may take.
    pub robot_capacity: usize,
    /// Robots deployable per time step; `null` means all of them, which
    /// also keeps the per-time family out of the second-phase constraint.
    pub per_time_cap: Option<usize>,
    /// Distinct times with any deployment; `null` means the whole horizon
    /// (same note as above).
    pub max_active_times: Option<usize>,
    pub methods: Vec<Method>,
    pub mode: SolveMode,
    /// Scale on the additive reward term of the deployment payoff.
    pub reward_weight: f64,
    /// Deployment-only trials: the first phase is pinned to one zero-reward
    /// element so values and ratios reflect the second phase alone.
    pub deployment_only: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            trials: 500,
            r1_range: [2, 3],
            d_range: [2, 3],
            e_req_range: [2, 2],
            p_range: [2, 5],
            k_range: [2, 3],
            r2_range: [2, 2],
            robot_capacity: 1,
            per_time_cap: None,
            max_active_times: None,
            methods: vec![
                Method::Greedy,
                Method::Heuristic,
                Method::Random,
                Method::Optimal,
            ],
            mode: SolveMode::Set,
            reward_weight: 1.0,
            deployment_only: false,
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            HarnessError::Config(format!("cannot read config {}: {e}", path.display()))
        })?;
        let config: Self = serde_json::from_str(&text).map_err(|e| {
            HarnessError::Config(format!("cannot parse config {}: {e}", path.display()))
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        fn range_in(
            name: &str,
            range: [usize; 2],
            lo: usize,
            hi: usize,
        ) -> Result<(), HarnessError> {
            let [a, b] = range;
            if a > b || a < lo || b > hi {
                return Err(HarnessError::Config(format!(
                    "{name} must be a sub-range of [{lo}, {hi}], got [{a}, {b}]"
                )));
            }
            Ok(())
        }
        if self.trials == 0 {
            return Err(HarnessError::Config("trials must be >= 1".into()));
        }
        range_in("r1_range", self.r1_range, 2, 6)?;
        range_in("d_range", self.d_range, 2, 6)?;
        range_in("e_req_range", self.e_req_range, 2, 6)?;
        range_in("p_range", self.p_range, 2, 5)?;
        range_in("k_range", self.k_range, 2, 5)?;
        range_in("r2_range", self.r2_range, 2, 4)?;
        if self.robot_capacity == 0 {
            return Err(HarnessError::Config("robot_capacity must be >= 1".into()));
        }
        if self.per_time_cap == Some(0) {
            return Err(HarnessError::Config("per_time_cap must be >= 1".into()));
        }
        if self.max_active_times == Some(0) {
            return Err(HarnessError::Config("max_active_times must be >= 1".into()));
        }
        if self.methods.is_empty() {
            return Err(HarnessError::Config("at least one method required".into()));
        }
        if !(self.reward_weight.is_finite() && self.reward_weight >= 0.0) {
            return Err(HarnessError::Config(
                "reward_weight must be finite and >= 0".into(),
            ));
        }
        Ok(())
    }

    pub fn has_method(&self, m: Method) -> bool {
        self.methods.contains(&m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_valid() {
        ExperimentConfig::default().validate().unwrap();
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = serde_json::from_str::<ExperimentConfig>(r#"{"seed": 1, "trils": 5}"#);
        assert!(err.is_err());
    }

    #[test]
    fn partial_documents_take_defaults() {
        let c: ExperimentConfig = serde_json::from_str(r#"{"seed": 7, "trials": 3}"#).unwrap();
        assert_eq!(c.seed, 7);
        assert_eq!(c.trials, 3);
        assert_eq!(c.r1_range, [2, 3]);
        c.validate().unwrap();
    }

    #[test]
    fn out_of_interval_ranges_fail() {
        let mut c = ExperimentConfig {
            r1_range: [1, 3],
            ..Default::default()
        };
        assert!(c.validate().is_err());
        c.r1_range = [2, 7];
        assert!(c.validate().is_err());
        c.r1_range = [4, 3];
        assert!(c.validate().is_err());
    }

    #[test]
    fn zero_trials_fail() {
        let c = ExperimentConfig {
            trials: 0,
            ..Default::default()
        };
        assert!(c.validate().is_err());
    }

    #[test]
    fn method_and_mode_parsing() {
        assert_eq!("greedy".parse::<Method>().unwrap(), Method::Greedy);
        assert!("grdy".parse::<Method>().is_err());
        assert_eq!(
            "sequence".parse::<SolveMode>().unwrap(),
            SolveMode::Sequence
        );
        assert!("ordered".parse::<SolveMode>().is_err());
    }
}
