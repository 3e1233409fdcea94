//! Set-function abstractions: additive rewards, the max-aggregated two-phase
//! objective, marginal gains, and brute-force property checkers for
//! monotonicity and submodularity.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constraints::DEFAULT_EXHAUSTIVE_CAP;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A real value for every subset of the ground set, queried through sorted
/// or unsorted index slices. Implementations must not depend on slice order.
pub trait SetFunction<T: Scalar> {
    fn value(&self, selection: &[usize]) -> T;
}

impl<T: Scalar, F: Fn(&[usize]) -> T> SetFunction<T> for F {
    fn value(&self, selection: &[usize]) -> T {
        self(selection)
    }
}

/// Additive reward: `value(S) = Σ_{e ∈ S} weights[e]`, so `value(∅) = 0`.
///
/// Weights may be negative; the monotonicity checker is the place where
/// that matters.
#[derive(Debug, Clone, PartialEq)]
pub struct ModularReward<T> {
    weights: Vec<T>,
}

impl<T: Scalar> ModularReward<T> {
    pub fn new(weights: Vec<T>) -> Self {
        Self { weights }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weight(&self, element: usize) -> T {
        self.weights[element]
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }
}

impl<T: Scalar> SetFunction<T> for ModularReward<T> {
    fn value(&self, selection: &[usize]) -> T {
        selection.iter().map(|&e| self.weights[e]).sum()
    }
}

/// Payoff of one first-phase element paired with a second-phase selection.
///
/// The selection is passed in pick order so order-aware payoffs can use it;
/// plain set payoffs ignore the order. Normalization (`payoff(a, []) == 0`)
/// is part of the contract.
pub trait InnerObjective<T: Scalar> {
    fn payoff(&self, element: usize, deployment: &[usize]) -> T;
}

impl<T: Scalar, F: Fn(usize, &[usize]) -> T> InnerObjective<T> for F {
    fn payoff(&self, element: usize, deployment: &[usize]) -> T {
        self(element, deployment)
    }
}

/// Best payoff across the first-phase selection: `max_{a ∈ A} s(a, B)`,
/// zero when `A` is empty.
pub fn inner_value<T: Scalar>(
    objective: &impl InnerObjective<T>,
    elements: &[usize],
    deployment: &[usize],
) -> T {
    elements
        .iter()
        .map(|&a| objective.payoff(a, deployment))
        .fold(T::zero(), T::max)
}

/// Two-phase objective split into its parts; `total = g_value + h_value`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoupledValue<T> {
    pub g_value: T,
    pub h_value: T,
    pub total: T,
}

impl<T: Scalar> CoupledValue<T> {
    pub fn zero() -> Self {
        Self {
            g_value: T::zero(),
            h_value: T::zero(),
            total: T::zero(),
        }
    }
}

/// Evaluates both phases for a candidate pair of selections.
pub fn coupled_value<T: Scalar>(
    g: &impl SetFunction<T>,
    objective: &impl InnerObjective<T>,
    elements: &[usize],
    deployment: &[usize],
) -> CoupledValue<T> {
    let g_value = g.value(elements);
    let h_value = inner_value(objective, elements, deployment);
    CoupledValue {
        g_value,
        h_value,
        total: g_value + h_value,
    }
}

/// `f(S ∪ {e}) - f(S)`; `e` must not already be selected.
pub fn marginal_gain<T: Scalar>(
    f: &impl SetFunction<T>,
    selection: &[usize],
    element: usize,
) -> Result<T> {
    if selection.contains(&element) {
        return Err(Error::DuplicateElement(element));
    }
    let base = f.value(selection);
    let mut extended = Vec::with_capacity(selection.len() + 1);
    extended.extend_from_slice(selection);
    extended.push(element);
    Ok(f.value(&extended) - base)
}

/// Outcome of a property check; when `holds` is false the witness pair
/// reproduces the violation by direct evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyReport {
    pub holds: bool,
    pub witness: Option<(Vec<usize>, Vec<usize>)>,
    pub pairs_checked: usize,
}

/// Exhaustive submodularity check: `f(A) + f(B) >= f(A∪B) + f(A∩B)` for all
/// pairs, up to `tol` of slack. Ground sets above the exhaustive cap must go
/// through [`check_submodular_sampled`].
pub fn check_submodular<T: Scalar>(
    f: &impl SetFunction<T>,
    ground_size: usize,
    tol: T,
) -> Result<PropertyReport> {
    if ground_size > DEFAULT_EXHAUSTIVE_CAP {
        return Err(Error::ExhaustiveCapExceeded {
            size: ground_size,
            cap: DEFAULT_EXHAUSTIVE_CAP,
        });
    }
    let total = 1u32 << ground_size;
    let values: Vec<T> = (0..total)
        .map(|mask| f.value(&mask_to_elements(mask, ground_size)))
        .collect();
    let mut pairs_checked = 0usize;
    for a in 0..total {
        for b in 0..total {
            pairs_checked += 1;
            let lhs = values[a as usize] + values[b as usize];
            let rhs = values[(a | b) as usize] + values[(a & b) as usize];
            if lhs + tol < rhs {
                return Ok(PropertyReport {
                    holds: false,
                    witness: Some((
                        mask_to_elements(a, ground_size),
                        mask_to_elements(b, ground_size),
                    )),
                    pairs_checked,
                });
            }
        }
    }
    Ok(PropertyReport {
        holds: true,
        witness: None,
        pairs_checked,
    })
}

/// Sampled submodularity check for larger ground sets; non-exhaustive.
pub fn check_submodular_sampled<T: Scalar>(
    f: &impl SetFunction<T>,
    ground_size: usize,
    samples: usize,
    seed: u64,
    tol: T,
) -> PropertyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for checked in 0..samples {
        let a = random_subset(&mut rng, ground_size);
        let b = random_subset(&mut rng, ground_size);
        let union: Vec<usize> = (0..ground_size)
            .filter(|e| a.contains(e) || b.contains(e))
            .collect();
        let inter: Vec<usize> = (0..ground_size)
            .filter(|e| a.contains(e) && b.contains(e))
            .collect();
        if f.value(&a) + f.value(&b) + tol < f.value(&union) + f.value(&inter) {
            return PropertyReport {
                holds: false,
                witness: Some((a, b)),
                pairs_checked: checked + 1,
            };
        }
    }
    PropertyReport {
        holds: true,
        witness: None,
        pairs_checked: samples,
    }
}

/// Exhaustive monotonicity check: `f(S) <= f(S ∪ {e})` for every set and
/// element, up to `tol` of slack. The witness is `(S, S ∪ {e})`.
pub fn check_nondecreasing<T: Scalar>(
    f: &impl SetFunction<T>,
    ground_size: usize,
    tol: T,
) -> Result<PropertyReport> {
    if ground_size > DEFAULT_EXHAUSTIVE_CAP {
        return Err(Error::ExhaustiveCapExceeded {
            size: ground_size,
            cap: DEFAULT_EXHAUSTIVE_CAP,
        });
    }
    let total = 1u32 << ground_size;
    let values: Vec<T> = (0..total)
        .map(|mask| f.value(&mask_to_elements(mask, ground_size)))
        .collect();
    let mut pairs_checked = 0usize;
    for mask in 0..total {
        for e in 0..ground_size {
            if mask & (1 << e) != 0 {
                continue;
            }
            pairs_checked += 1;
            let grown = mask | (1 << e);
            if values[grown as usize] + tol < values[mask as usize] {
                return Ok(PropertyReport {
                    holds: false,
                    witness: Some((
                        mask_to_elements(mask, ground_size),
                        mask_to_elements(grown, ground_size),
                    )),
                    pairs_checked,
                });
            }
        }
    }
    Ok(PropertyReport {
        holds: true,
        witness: None,
        pairs_checked,
    })
}

/// Sampled monotonicity check for larger ground sets; non-exhaustive.
pub fn check_nondecreasing_sampled<T: Scalar>(
    f: &impl SetFunction<T>,
    ground_size: usize,
    samples: usize,
    seed: u64,
    tol: T,
) -> PropertyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for checked in 0..samples {
        let s = random_subset(&mut rng, ground_size);
        let outside: Vec<usize> = (0..ground_size).filter(|e| !s.contains(e)).collect();
        if outside.is_empty() {
            continue;
        }
        let e = outside[rng.random_range(0..outside.len())];
        let mut grown = s.clone();
        grown.push(e);
        grown.sort_unstable();
        if f.value(&grown) + tol < f.value(&s) {
            return PropertyReport {
                holds: false,
                witness: Some((s, grown)),
                pairs_checked: checked + 1,
            };
        }
    }
    PropertyReport {
        holds: true,
        witness: None,
        pairs_checked: samples,
    }
}

fn mask_to_elements(mask: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|&e| mask & (1 << e) != 0).collect()
}

fn random_subset(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    (0..n).filter(|_| rng.random_bool(0.5)).collect()
}
