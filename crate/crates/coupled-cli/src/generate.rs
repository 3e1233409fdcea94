//! Seeded instance generation.
//!
//! One ChaCha8 generator per trial drives every draw, in this fixed order:
//!
//! 1. sizes: |R1|, |D|, |E_req|, p, K, |R2| from their configured ranges
//!    (the three allocation sizes are skipped in deployment-only mode);
//! 2. task rewards `u_a ~ U[0,1)`, one per admissible triplet in sorted
//!    (robot, functionality, requirement) order;
//! 3. sensor rows, one standard-normal `p`-vector per robot (unit noise);
//! 4. priors, one per allocation element: `L Lᵀ + 0.001 I` with `L` a
//!    `p x p` standard-normal draw, filled row-major;
//! 5. deployment rewards `u_b ~ U[0,1)` in time-major element order,
//!    scaled by `reward_weight`;
//! 6. a 64-bit seed for the random-baseline solver.
//!
//! Trial `i` uses stream `i` of the generator seeded with the base seed, so
//! trials are independent and the whole experiment is reproducible from
//! `(config, seed)` alone.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use coupled_core::allocation::AllocationInstance;
use coupled_core::deployment::{DeploymentInstance, SensorModel};
use coupled_core::linalg::Matrix;

use crate::config::ExperimentConfig;
use crate::HarnessError;

/// Everything a trial needs: the two instances plus the solver seed drawn
/// as part of the same stream.
pub struct GeneratedInstance {
    pub allocation: AllocationInstance<f64>,
    pub deployment: DeploymentInstance<f64>,
    pub solver_seed: u64,
}

/// Draws the instance for one trial. `seed` is the base experiment seed;
/// `trial_index` selects the generator stream.
pub fn generate_instance(
    seed: u64,
    trial_index: u64,
    config: &ExperimentConfig,
) -> Result<GeneratedInstance, HarnessError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial_index);

    let draw = |rng: &mut ChaCha8Rng, range: [usize; 2]| rng.random_range(range[0]..=range[1]);

    let (n_r1, n_d, n_req) = if config.deployment_only {
        (1, 1, 1)
    } else {
        let r1 = draw(&mut rng, config.r1_range);
        let d = draw(&mut rng, config.d_range);
        let e = draw(&mut rng, config.e_req_range);
        (r1, d, e)
    };
    let p = draw(&mut rng, config.p_range);
    let k = draw(&mut rng, config.k_range);
    let r2 = draw(&mut rng, config.r2_range);

    let n_elems = n_r1 * n_d * n_req;
    let task_rewards: Vec<f64> = if config.deployment_only {
        vec![0.0] // single pinned element, no first-phase reward
    } else {
        (0..n_elems).map(|_| rng.random::<f64>()).collect()
    };
    let allocation = AllocationInstance::fully_admissible(n_r1, n_d, n_req, task_rewards)
        .map_err(HarnessError::Core)?;
    let allocation = if config.robot_capacity == 1 {
        allocation
    } else {
        rebuild_with_capacity(&allocation, config.robot_capacity)?
    };

    let sensors: Vec<SensorModel<f64>> = (0..r2)
        .map(|_| {
            SensorModel::single_row(
                (0..p)
                    .map(|_| StandardNormal.sample(&mut rng))
                    .collect::<Vec<f64>>(),
            )
        })
        .collect();

    let priors: Vec<Matrix<f64>> = (0..n_elems)
        .map(|_| {
            let l = Matrix::from_fn(p, p, |_, _| StandardNormal.sample(&mut rng));
            let mut j = l.matmul(&l.transpose());
            j.add_assign(&Matrix::scaled_identity(p, 1e-3));
            j
        })
        .collect();

    let deploy_rewards: Vec<f64> = (0..r2 * k)
        .map(|_| rng.random::<f64>() * config.reward_weight)
        .collect();

    let per_time_cap = config.per_time_cap.map_or(r2, |c| c.min(r2));
    let max_active = config.max_active_times.map_or(k, |m| m.min(k));
    let deployment = DeploymentInstance::new(
        k,
        sensors,
        vec![per_time_cap; k],
        max_active,
        Matrix::identity(p),
        priors,
        deploy_rewards,
        p,
    )
    .map_err(HarnessError::Core)?;

    let solver_seed: u64 = rng.random();
    Ok(GeneratedInstance {
        allocation,
        deployment,
        solver_seed,
    })
}

fn rebuild_with_capacity(
    allocation: &AllocationInstance<f64>,
    capacity: usize,
) -> Result<AllocationInstance<f64>, HarnessError> {
    let utility = allocation.utility();
    let admissible = allocation
        .admissible()
        .iter()
        .enumerate()
        .map(|(i, t)| (*t, utility.weight(i)))
        .collect();
    AllocationInstance::new(
        allocation.robots().to_vec(),
        allocation.tasks().to_vec(),
        admissible,
        Some(vec![capacity; allocation.robots().len()]),
    )
    .map_err(HarnessError::Core)
}
