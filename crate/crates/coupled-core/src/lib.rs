//! Solver library for two-phase coupled submodular maximization under
//! matroid-intersection constraints.
//!
//! The problem shape: pick a first-phase selection `A` (task allocations)
//! and a second-phase selection `B` (robot/time deployments) to maximize
//! `g(A) + max_B f(A, B)`, where `f(A, B)` is the best per-element payoff
//! `max_{a ∈ A} s(a, B)` and both selections must be independent in their
//! constraint families. The crate provides:
//!
//! * [`constraints`]: uniform / partition / active-window families,
//!   intersections, and an exhaustive matroid-axiom auditor;
//! * [`objectives`]: modular rewards, the max-aggregated inner objective,
//!   and brute-force monotonicity/submodularity checkers;
//! * [`allocation`] / [`deployment`]: the two concrete domains, including
//!   the log-det information-gain payoff of deployment schedules;
//! * [`solvers`]: the nested greedy, an exact enumeration oracle, a
//!   decoupled heuristic, a seeded random baseline, and worst-case bound
//!   arithmetic.
//!
//! Core math is generic over the scalar type (any [`scalar::Scalar`], i.e.
//! a `num-traits` float); the aliases at the crate root pin the common
//! `f64` instantiation.

pub mod allocation;
pub mod constraints;
pub mod deployment;
pub mod error;
pub mod ground;
pub mod linalg;
pub mod objectives;
pub mod scalar;
pub mod solvers;

pub use constraints::{AxiomReport, ConstraintFamily, FamilyKind};
pub use error::{Error, Result};
pub use ground::GroundSet;
pub use objectives::{coupled_value, inner_value, CoupledValue, InnerObjective, SetFunction};
pub use scalar::Scalar;
pub use solvers::{InnerMode, SolverResult};

/// `f64` instantiations used by the experiment harness.
pub type ModularRewardF64 = objectives::ModularReward<f64>;
pub type CoupledValueF64 = objectives::CoupledValue<f64>;
pub type AllocationInstanceF64 = allocation::AllocationInstance<f64>;
pub type DeploymentInstanceF64 = deployment::DeploymentInstance<f64>;
pub type SolverResultF64 = solvers::SolverResult<f64>;
pub type MatrixF64 = linalg::Matrix<f64>;
