//! Long-term intermittent-deployment domain: a robot/time ground set with
//! per-time capacity, active-time-count and selection families, plus the
//! log-det information-gain payoff of a deployment schedule.
//!
//! The payoff works on information matrices (inverse error covariances).
//! A schedule accumulates per-deployment increments `Cᵀ Z⁻¹ C`, propagated
//! through the dynamics, and scores the log-det growth from the prior to the
//! final information matrix plus the additive rewards of the deployed
//! robot/time pairs. That growth equals the covariance-reduction reading of
//! the same recursion and is nonnegative and non-decreasing in the schedule.

use crate::constraints::ConstraintFamily;
use crate::error::{Error, Result};
use crate::ground::GroundSet;
use crate::linalg::Matrix;
use crate::objectives::InnerObjective;
use crate::scalar::{scalar, Scalar};

/// Symmetry / PSD tolerance used throughout this module.
const SYM_TOL: f64 = 1e-9;

/// "Deploy robot `robot` at time `time`", time being 1-based up to the
/// horizon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DeploymentElement {
    pub robot: usize,
    pub time: usize,
}

/// One robot's sensing: a `q x p` measurement matrix and the `q x q`
/// covariance of its measurement noise.
#[derive(Debug, Clone, PartialEq)]
pub struct SensorModel<T> {
    pub measurement: Matrix<T>,
    pub noise_cov: Matrix<T>,
}

impl<T: Scalar> SensorModel<T> {
    pub fn new(measurement: Matrix<T>, noise_cov: Matrix<T>) -> Self {
        Self {
            measurement,
            noise_cov,
        }
    }

    /// Single-row sensor with unit noise.
    pub fn single_row(row: Vec<T>) -> Self {
        Self {
            measurement: Matrix::from_rows(vec![row]).expect("one row"),
            noise_cov: Matrix::identity(1),
        }
    }
}

/// The deployment problem data: horizon, per-robot sensors, constraint
/// caps, dynamics, priors keyed by first-phase element, and per-deployment
/// rewards. Immutable once built; evaluations are pure.
#[derive(Debug, Clone, PartialEq)]
pub struct DeploymentInstance<T> {
    horizon: usize,
    sensors: Vec<SensorModel<T>>,
    per_time_cap: Vec<usize>,
    max_active_times: usize,
    dynamics: Matrix<T>,
    priors: Vec<Matrix<T>>,
    deploy_rewards: Vec<T>,
    state_dim: usize,
    // cached per-robot information increments Cᵀ Z⁻¹ C
    increments: Vec<Matrix<T>>,
    // cached log-dets of the priors (doubles as the PD validation)
    prior_logdets: Vec<T>,
    identity_dynamics: bool,
}

impl<T: Scalar> DeploymentInstance<T> {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        horizon: usize,
        sensors: Vec<SensorModel<T>>,
        per_time_cap: Vec<usize>,
        max_active_times: usize,
        dynamics: Matrix<T>,
        priors: Vec<Matrix<T>>,
        deploy_rewards: Vec<T>,
        state_dim: usize,
    ) -> Result<Self> {
        if horizon == 0 || sensors.is_empty() {
            return Err(Error::Instance(
                "horizon and robot set must be non-empty".into(),
            ));
        }
        if per_time_cap.len() != horizon {
            return Err(Error::Instance("one per-time cap per time step".into()));
        }
        if per_time_cap.iter().any(|&c| c > sensors.len()) {
            return Err(Error::Instance(
                "per-time caps cannot exceed the robot count".into(),
            ));
        }
        if max_active_times > horizon {
            return Err(Error::Instance(
                "active-time cap cannot exceed the horizon".into(),
            ));
        }
        if deploy_rewards.len() != sensors.len() * horizon {
            return Err(Error::Instance(
                "one reward per robot/time pair is required".into(),
            ));
        }
        if deploy_rewards.iter().any(|&u| u < T::zero()) {
            return Err(Error::Instance("deployment rewards must be >= 0".into()));
        }
        if !dynamics.is_square() || dynamics.rows() != state_dim {
            return Err(Error::Instance(
                "dynamics must be state_dim x state_dim".into(),
            ));
        }

        let mut increments = Vec::with_capacity(sensors.len());
        for (r, sensor) in sensors.iter().enumerate() {
            let c = &sensor.measurement;
            let z = &sensor.noise_cov;
            if c.cols() != state_dim || !z.is_square() || z.rows() != c.rows() {
                return Err(Error::Instance(format!(
                    "sensor {r} has inconsistent shapes"
                )));
            }
            let z_inv = z.try_inverse().ok_or_else(|| {
                Error::Instance(format!("sensor {r} noise covariance is singular"))
            })?;
            increments.push(c.transpose().matmul(&z_inv).matmul(c));
        }

        let sym_tol = scalar::<T>(SYM_TOL);
        let mut prior_logdets = Vec::with_capacity(priors.len());
        for (a, prior) in priors.iter().enumerate() {
            if !prior.is_square() || prior.rows() != state_dim {
                return Err(Error::Instance(format!("prior {a} has the wrong shape")));
            }
            if prior.max_asymmetry() > sym_tol {
                return Err(Error::Instance(format!("prior {a} is not symmetric")));
            }
            let logdet = prior
                .cholesky_logdet()
                .map_err(|_| Error::Instance(format!("prior {a} is not positive definite")))?;
            prior_logdets.push(logdet);
        }

        let identity_dynamics = dynamics.is_identity();
        Ok(Self {
            horizon,
            sensors,
            per_time_cap,
            max_active_times,
            dynamics,
            priors,
            deploy_rewards,
            state_dim,
            increments,
            prior_logdets,
            identity_dynamics,
        })
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn num_robots(&self) -> usize {
        self.sensors.len()
    }

    pub fn state_dim(&self) -> usize {
        self.state_dim
    }

    pub fn num_priors(&self) -> usize {
        self.priors.len()
    }

    pub fn prior(&self, a: usize) -> &Matrix<T> {
        &self.priors[a]
    }

    pub fn deploy_reward(&self, element: usize) -> T {
        self.deploy_rewards[element]
    }

    pub fn sensors(&self) -> &[SensorModel<T>] {
        &self.sensors
    }

    pub fn dynamics(&self) -> &Matrix<T> {
        &self.dynamics
    }

    pub fn size(&self) -> usize {
        self.sensors.len() * self.horizon
    }

    /// Element index of (robot, 1-based time): time-major layout.
    pub fn element_index(&self, robot: usize, time: usize) -> usize {
        debug_assert!(robot < self.num_robots() && (1..=self.horizon).contains(&time));
        (time - 1) * self.num_robots() + robot
    }

    pub fn element(&self, index: usize) -> DeploymentElement {
        DeploymentElement {
            robot: index % self.num_robots(),
            time: index / self.num_robots() + 1,
        }
    }

    /// Ground set ordered by time then robot.
    pub fn ground_set(&self) -> GroundSet<DeploymentElement> {
        GroundSet::new((0..self.size()).map(|i| self.element(i)).collect())
    }

    /// 0-based time window per element, for order-aware solving.
    pub fn time_windows(&self) -> Vec<usize> {
        (0..self.size()).map(|i| i / self.num_robots()).collect()
    }

    /// At most `per_time_cap[k]` robots deployed at time `k`.
    pub fn per_time_capacity_constraint(&self) -> ConstraintFamily {
        ConstraintFamily::partition(self.time_windows(), self.per_time_cap.clone())
            .expect("time cells are in range")
    }

    /// At most `max_active_times` distinct times with any deployment.
    pub fn active_times_constraint(&self) -> ConstraintFamily {
        ConstraintFamily::active_window(self.time_windows(), self.max_active_times)
    }

    /// Each robot/time pair selected at most once. Set semantics make this
    /// automatic; the family is kept for fidelity and cardinality counting.
    pub fn selection_constraint(&self) -> ConstraintFamily {
        let n = self.size();
        ConstraintFamily::partition((0..n).collect(), vec![1; n])
            .expect("identity cells are in range")
    }

    /// Intersection of all three families; cardinality 3.
    pub fn intersection_constraint(&self) -> ConstraintFamily {
        ConstraintFamily::intersection(vec![
            self.per_time_capacity_constraint(),
            self.active_times_constraint(),
            self.selection_constraint(),
        ])
        .expect("families share the ground set")
    }

    /// Final-time information matrix of a schedule for prior `a`:
    /// the prior propagated `K` steps through the inverse dynamics plus the
    /// accumulated measurement increments, each propagated from its own
    /// time. The result is symmetrized and checked against a 1e-9 tolerance.
    pub fn information_matrix_final(&self, a: usize, schedule: &[usize]) -> Result<Matrix<T>> {
        if a >= self.priors.len() {
            return Err(Error::ElementOutOfRange {
                element: a,
                size: self.priors.len(),
            });
        }
        let mut deployed_at: Vec<Vec<usize>> = vec![Vec::new(); self.horizon];
        for &idx in schedule {
            if idx >= self.size() {
                return Err(Error::ElementOutOfRange {
                    element: idx,
                    size: self.size(),
                });
            }
            let e = self.element(idx);
            deployed_at[e.time - 1].push(e.robot);
        }

        let mut info = self.priors[a].clone();
        if self.identity_dynamics {
            // propagation is a no-op; just accumulate increments
            for robots in &deployed_at {
                for &r in robots {
                    info.add_assign(&self.increments[r]);
                }
            }
        } else {
            let inv = self.dynamics.try_inverse().ok_or(Error::SingularDynamics)?;
            let inv_t = inv.transpose();
            for robots in &deployed_at {
                info = inv_t.matmul(&info).matmul(&inv);
                for &r in robots {
                    info.add_assign(&self.increments[r]);
                }
            }
        }

        let sym_tol = scalar::<T>(SYM_TOL);
        if info.max_asymmetry() > sym_tol {
            return Err(Error::Instance(
                "information matrix drifted from symmetry".into(),
            ));
        }
        Ok(info.symmetrized())
    }

    /// Schedule payoff for prior `a`: log-det growth of the information
    /// matrix plus the rewards of the deployed pairs. Zero on the empty
    /// schedule whenever the dynamics preserve volume (identity dynamics in
    /// particular).
    pub fn payoff(&self, a: usize, schedule: &[usize]) -> Result<T> {
        let info = self.information_matrix_final(a, schedule)?;
        let logdet = info.cholesky_logdet()?;
        let rewards: T = schedule.iter().map(|&b| self.deploy_rewards[b]).sum();
        Ok(logdet - self.prior_logdets[a] + rewards)
    }

    /// Checks the contraction conditions under which the payoff is
    /// order-independent enough for sequence solving: invertible dynamics,
    /// `P - A P Aᵀ` PSD for every prior, and `M - Aᵀ M A` PSD for every
    /// robot increment. Report-only; nothing is rejected here.
    pub fn check_sequence_assumptions(&self) -> SequenceAssumptionReport {
        let tol = scalar::<T>(SYM_TOL);
        let a = &self.dynamics;
        let dynamics_invertible = a.try_inverse().is_some();
        let prior_contraction = self
            .priors
            .iter()
            .map(|p| p.sub(&a.matmul(p).matmul(&a.transpose())).is_psd(tol))
            .collect();
        let measurement_contraction = self
            .increments
            .iter()
            .map(|m| m.sub(&a.transpose().matmul(m).matmul(a)).is_psd(tol))
            .collect();
        SequenceAssumptionReport {
            dynamics_invertible,
            prior_contraction,
            measurement_contraction,
        }
    }
}

/// Pass/fail per contraction condition; see
/// [`DeploymentInstance::check_sequence_assumptions`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceAssumptionReport {
    pub dynamics_invertible: bool,
    /// One flag per prior: `P - A P Aᵀ` is PSD.
    pub prior_contraction: Vec<bool>,
    /// One flag per robot: `M - Aᵀ M A` is PSD.
    pub measurement_contraction: Vec<bool>,
}

impl SequenceAssumptionReport {
    pub fn all_pass(&self) -> bool {
        self.dynamics_invertible
            && self.prior_contraction.iter().all(|&b| b)
            && self.measurement_contraction.iter().all(|&b| b)
    }
}

/// The deployment payoff as a second-phase objective. Construction fails on
/// singular dynamics so evaluation itself stays total.
pub struct InformationGain<'a, T> {
    instance: &'a DeploymentInstance<T>,
}

impl<'a, T: Scalar> InformationGain<'a, T> {
    pub fn new(instance: &'a DeploymentInstance<T>) -> Result<Self> {
        if !instance.identity_dynamics && instance.dynamics.try_inverse().is_none() {
            return Err(Error::SingularDynamics);
        }
        Ok(Self { instance })
    }
}

impl<T: Scalar> InnerObjective<T> for InformationGain<'_, T> {
    fn payoff(&self, element: usize, deployment: &[usize]) -> T {
        self.instance
            .payoff(element, deployment)
            .expect("validated instance evaluates totally")
    }
}
