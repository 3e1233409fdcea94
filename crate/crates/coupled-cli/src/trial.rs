//! One Monte Carlo trial: run the configured solvers on a generated
//! instance pair and record values, optimality ratios and work counts.

use coupled_core::deployment::InformationGain;
use coupled_core::solvers::{
    brute_force_optimal, decoupled_heuristic, nested_greedy, random_feasible, InnerMode,
    SolverResult,
};
use coupled_core::{ConstraintFamily, Error};

use crate::config::{ExperimentConfig, Method, SolveMode};
use crate::generate::GeneratedInstance;
use crate::HarnessError;

/// One solver's numbers within a trial. `wall_time` is measurement, not
/// data: the CSV serializes only the deterministic fields.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodOutcome {
    pub total: f64,
    pub g_value: f64,
    pub h_value: f64,
    pub evaluations: u64,
    pub wall_time: f64,
}

impl MethodOutcome {
    fn from_result(res: &SolverResult<f64>) -> Self {
        Self {
            total: res.value.total,
            g_value: res.value.g_value,
            h_value: res.value.h_value,
            evaluations: res.evaluations,
            wall_time: res.wall_time,
        }
    }
}

/// Per-trial record. Ratios are present only when the exact oracle ran;
/// `time_ratio` is the greedy/optimal ratio of payoff-evaluation counts, a
/// deterministic stand-in for solve effort (wall clocks stay in the
/// per-method outcomes).
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub trial_index: usize,
    pub s1: usize,
    pub s2: usize,
    pub size_product: usize,
    pub optimal: Option<MethodOutcome>,
    pub greedy: Option<MethodOutcome>,
    pub heuristic: Option<MethodOutcome>,
    pub random: Option<MethodOutcome>,
    pub ratio_greedy: Option<f64>,
    pub ratio_heur: Option<f64>,
    pub ratio_rand: Option<f64>,
    pub time_ratio: Option<f64>,
}

/// Second-phase constraint for a config: the selection family alone in the
/// stock configuration, or the full three-family intersection when either
/// cap is set explicitly.
pub fn inner_constraint_for(
    config: &ExperimentConfig,
    deployment: &coupled_core::DeploymentInstanceF64,
) -> ConstraintFamily {
    if config.per_time_cap.is_none() && config.max_active_times.is_none() {
        deployment.selection_constraint()
    } else {
        deployment.intersection_constraint()
    }
}

/// Runs every configured method on one instance pair.
pub fn run_trial(
    instance: &GeneratedInstance,
    config: &ExperimentConfig,
    trial_index: usize,
) -> Result<TrialRecord, HarnessError> {
    let g = instance.allocation.utility();
    let gain = InformationGain::new(&instance.deployment).map_err(HarnessError::Core)?;
    let m1 = instance.allocation.intersection_constraint();
    let m2 = inner_constraint_for(config, &instance.deployment);
    let mode = match config.mode {
        SolveMode::Set => InnerMode::Set,
        SolveMode::Sequence => InnerMode::Sequence {
            window_of: instance.deployment.time_windows(),
        },
    };

    let s1 = instance.allocation.size();
    let s2 = instance.deployment.size();

    let optimal = if config.has_method(Method::Optimal) {
        match brute_force_optimal(&g, &gain, &m1, &m2) {
            Ok(res) => Some(MethodOutcome::from_result(&res)),
            Err(Error::EnumerationBudget { .. }) => None, // ratios stay empty
            Err(e) => return Err(HarnessError::Core(e)),
        }
    } else {
        None
    };
    let greedy = config
        .has_method(Method::Greedy)
        .then(|| MethodOutcome::from_result(&nested_greedy(&g, &gain, &m1, &m2, &mode)));
    let heuristic = config
        .has_method(Method::Heuristic)
        .then(|| MethodOutcome::from_result(&decoupled_heuristic(&g, &gain, &m1, &m2, &mode)));
    let random = config.has_method(Method::Random).then(|| {
        MethodOutcome::from_result(&random_feasible(&g, &gain, &m1, &m2, instance.solver_seed))
    });

    let ratio_to = |outcome: &Option<MethodOutcome>| -> Option<f64> {
        let opt = optimal.as_ref()?;
        let out = outcome.as_ref()?;
        let ratio = (opt.total > 0.0).then(|| out.total / opt.total);
        debug_assert!(
            ratio.is_none_or(|r| (0.0..=1.0 + 1e-9).contains(&r)),
            "optimality ratio out of range: {ratio:?}"
        );
        ratio
    };
    let ratio_greedy = ratio_to(&greedy);
    let ratio_heur = ratio_to(&heuristic);
    let ratio_rand = ratio_to(&random);
    let time_ratio = match (&greedy, &optimal) {
        (Some(grd), Some(opt)) if opt.evaluations > 0 => {
            Some(grd.evaluations as f64 / opt.evaluations as f64)
        }
        _ => None,
    };

    Ok(TrialRecord {
        trial_index,
        s1,
        s2,
        size_product: s1 * s2,
        optimal,
        greedy,
        heuristic,
        random,
        ratio_greedy,
        ratio_heur,
        ratio_rand,
        time_ratio,
    })
}
