//! Short-term task-allocation domain: robots take on (functionality,
//! requirement) tasks, each admissible robot/task combination is one ground
//! element, and feasibility is the intersection of a per-robot capacity
//! family with a per-task uniqueness family.

use crate::constraints::ConstraintFamily;
use crate::error::{Error, Result};
use crate::ground::GroundSet;
use crate::objectives::ModularReward;
use crate::scalar::Scalar;

/// "Robot `robot` performs functionality `functionality` for requirement
/// `requirement`". Ordering is the canonical ground-set order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AllocationElement {
    pub robot: usize,
    pub functionality: usize,
    pub requirement: usize,
}

impl AllocationElement {
    pub fn new(robot: usize, functionality: usize, requirement: usize) -> Self {
        Self {
            robot,
            functionality,
            requirement,
        }
    }

    pub fn task(&self) -> (usize, usize) {
        (self.functionality, self.requirement)
    }
}

/// The allocation problem data: declared robots and tasks, the admissible
/// triplets with their rewards, and per-robot capacities. Immutable once
/// built; admissible triplets are stored sorted by (robot, functionality,
/// requirement) so element indices are reproducible.
#[derive(Debug, Clone, PartialEq)]
pub struct AllocationInstance<T> {
    robots: Vec<usize>,
    tasks: Vec<(usize, usize)>,
    admissible: Vec<AllocationElement>,
    rewards: Vec<T>,
    robot_capacity: Vec<usize>,
}

impl<T: Scalar> AllocationInstance<T> {
    /// Builds and validates an instance. `admissible` pairs each triplet
    /// with its nonnegative reward; `capacities` (one per robot, default 1
    /// when `None`) bound how many triplets a robot may take.
    pub fn new(
        robots: Vec<usize>,
        tasks: Vec<(usize, usize)>,
        admissible: Vec<(AllocationElement, T)>,
        capacities: Option<Vec<usize>>,
    ) -> Result<Self> {
        if admissible.is_empty() {
            return Err(Error::Instance("no admissible triplets".into()));
        }
        let robot_capacity = capacities.unwrap_or_else(|| vec![1; robots.len()]);
        if robot_capacity.len() != robots.len() {
            return Err(Error::Instance(
                "one capacity per declared robot is required".into(),
            ));
        }
        if robot_capacity.contains(&0) {
            return Err(Error::Instance("robot capacities must be positive".into()));
        }
        let mut entries = admissible;
        entries.sort_by_key(|(t, _)| *t);
        for pair in entries.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(Error::Instance(format!(
                    "duplicate admissible triplet {:?}",
                    pair[0].0
                )));
            }
        }
        for (triplet, reward) in &entries {
            if !robots.contains(&triplet.robot) {
                return Err(Error::Instance(format!(
                    "triplet {triplet:?} references undeclared robot {}",
                    triplet.robot
                )));
            }
            if !tasks.contains(&triplet.task()) {
                return Err(Error::Instance(format!(
                    "triplet {triplet:?} references undeclared task {:?}",
                    triplet.task()
                )));
            }
            if *reward < T::zero() {
                return Err(Error::Instance(format!(
                    "negative reward for triplet {triplet:?}"
                )));
            }
        }
        let (admissible, rewards) = entries.into_iter().unzip();
        Ok(Self {
            robots,
            tasks,
            admissible,
            rewards,
            robot_capacity,
        })
    }

    /// Grid instance where every robot can take every task. Rewards are
    /// supplied per (robot, functionality, requirement) in sorted order.
    pub fn fully_admissible(
        n_robots: usize,
        n_functionalities: usize,
        n_requirements: usize,
        rewards: Vec<T>,
    ) -> Result<Self> {
        let expected = n_robots * n_functionalities * n_requirements;
        if rewards.len() != expected {
            return Err(Error::Instance(format!(
                "expected {expected} rewards, got {}",
                rewards.len()
            )));
        }
        let robots: Vec<usize> = (0..n_robots).collect();
        let mut tasks = Vec::new();
        for f in 0..n_functionalities {
            for q in 0..n_requirements {
                tasks.push((f, q));
            }
        }
        let mut admissible = Vec::with_capacity(expected);
        let mut it = rewards.into_iter();
        for r in 0..n_robots {
            for f in 0..n_functionalities {
                for q in 0..n_requirements {
                    admissible.push((AllocationElement::new(r, f, q), it.next().unwrap()));
                }
            }
        }
        Self::new(robots, tasks, admissible, None)
    }

    pub fn size(&self) -> usize {
        self.admissible.len()
    }

    pub fn robots(&self) -> &[usize] {
        &self.robots
    }

    pub fn tasks(&self) -> &[(usize, usize)] {
        &self.tasks
    }

    pub fn admissible(&self) -> &[AllocationElement] {
        &self.admissible
    }

    /// One ground element per admissible triplet, in sorted triplet order.
    pub fn ground_set(&self) -> GroundSet<AllocationElement> {
        GroundSet::new(self.admissible.clone())
    }

    /// Per-robot capacity family: cell = robot, cap = its capacity.
    /// Admissibility itself is already enforced by the ground set, which
    /// only contains admissible triplets.
    pub fn independence_constraint(&self) -> ConstraintFamily {
        let cell_of = self
            .admissible
            .iter()
            .map(|t| self.robot_index(t.robot))
            .collect();
        ConstraintFamily::partition(cell_of, self.robot_capacity.clone())
            .expect("robot cells are in range")
    }

    /// Per-task uniqueness family: cell = (functionality, requirement),
    /// cap = 1.
    pub fn uniqueness_constraint(&self) -> ConstraintFamily {
        let cell_of = self
            .admissible
            .iter()
            .map(|t| self.task_index(t.task()))
            .collect();
        ConstraintFamily::partition(cell_of, vec![1; self.tasks.len()])
            .expect("task cells are in range")
    }

    /// Intersection of the capacity and uniqueness families; cardinality 2.
    pub fn intersection_constraint(&self) -> ConstraintFamily {
        ConstraintFamily::intersection(vec![
            self.independence_constraint(),
            self.uniqueness_constraint(),
        ])
        .expect("families share the ground set")
    }

    /// Additive utility over the admissible triplets.
    pub fn utility(&self) -> ModularReward<T> {
        ModularReward::new(self.rewards.clone())
    }

    fn robot_index(&self, robot: usize) -> usize {
        self.robots
            .iter()
            .position(|&r| r == robot)
            .expect("validated at construction")
    }

    fn task_index(&self, task: (usize, usize)) -> usize {
        self.tasks
            .iter()
            .position(|&t| t == task)
            .expect("validated at construction")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::{check_nondecreasing, check_submodular, marginal_gain, SetFunction};

    /// Two robots, two tasks; the ground robot can only do the second task,
    /// the aerial robot can do both.
    fn two_robot_instance() -> AllocationInstance<f64> {
        AllocationInstance::new(
            vec![1, 2],
            vec![(1, 1), (2, 2)],
            vec![
                (AllocationElement::new(1, 2, 2), 0.3),
                (AllocationElement::new(2, 1, 1), 0.5),
                (AllocationElement::new(2, 2, 2), 0.4),
            ],
            None,
        )
        .unwrap()
    }

    #[test]
    fn ground_set_is_sorted_triplets() {
        let inst = two_robot_instance();
        let ground = inst.ground_set();
        assert_eq!(ground.size(), 3);
        assert_eq!(*ground.label(0), AllocationElement::new(1, 2, 2));
        assert_eq!(*ground.label(1), AllocationElement::new(2, 1, 1));
        assert_eq!(*ground.label(2), AllocationElement::new(2, 2, 2));
    }

    #[test]
    fn singleton_and_grid_sizes() {
        let single = AllocationInstance::new(
            vec![0],
            vec![(0, 0)],
            vec![(AllocationElement::new(0, 0, 0), 1.0)],
            None,
        )
        .unwrap();
        assert_eq!(single.ground_set().size(), 1);

        let grid = AllocationInstance::fully_admissible(6, 6, 6, vec![0.5; 216]).unwrap();
        assert_eq!(grid.ground_set().size(), 216);
    }

    #[test]
    fn empty_admissible_is_error() {
        let err = AllocationInstance::<f64>::new(vec![0], vec![(0, 0)], vec![], None);
        assert!(matches!(err, Err(Error::Instance(_))));
    }

    #[test]
    fn capacity_family_caps_robots() {
        let inst = two_robot_instance();
        let m = inst.independence_constraint();
        // {(1,d2,e2), (2,d1,e1)} is fine; robot 2 twice is not at cap 1
        assert!(m.is_independent(&[0, 1]).unwrap());
        assert!(!m.is_independent(&[1, 2]).unwrap());

        let relaxed = AllocationInstance::new(
            inst.robots.clone(),
            inst.tasks.clone(),
            inst.admissible
                .iter()
                .zip(&inst.rewards)
                .map(|(t, r)| (*t, *r))
                .collect(),
            Some(vec![1, 2]),
        )
        .unwrap();
        assert!(relaxed
            .independence_constraint()
            .is_independent(&[1, 2])
            .unwrap());
    }

    #[test]
    fn uniqueness_family_caps_tasks() {
        let inst = two_robot_instance();
        let m = inst.uniqueness_constraint();
        // same task (2,2) taken twice
        assert!(!m.is_independent(&[0, 2]).unwrap());
        assert!(m.is_independent(&[0, 1]).unwrap());
        assert!(m.is_independent(&[]).unwrap());
    }

    #[test]
    fn utility_is_the_reward_sum() {
        let inst = two_robot_instance();
        let g = inst.utility();
        assert!((g.value(&[0, 1]) - 0.8).abs() < 1e-15);
        assert_eq!(g.value(&[]), 0.0);
        // brute-force summation oracle over all subsets
        for mask in 0u32..8 {
            let sel: Vec<usize> = (0..3).filter(|&e| mask & (1 << e) != 0).collect();
            let direct: f64 = sel.iter().map(|&e| inst.rewards[e]).sum();
            assert!((g.value(&sel) - direct).abs() < 1e-15);
        }
    }

    #[test]
    fn both_families_are_matroids_here() {
        let inst = two_robot_instance();
        assert!(inst
            .independence_constraint()
            .verify_axioms()
            .unwrap()
            .is_matroid());
        assert!(inst
            .uniqueness_constraint()
            .verify_axioms()
            .unwrap()
            .is_matroid());
        assert_eq!(inst.intersection_constraint().intersection_cardinality(), 2);

        // same audit on a full 8-triplet grid
        let grid = AllocationInstance::fully_admissible(2, 2, 2, vec![0.5; 8]).unwrap();
        assert!(grid
            .independence_constraint()
            .verify_axioms()
            .unwrap()
            .is_matroid());
        assert!(grid
            .uniqueness_constraint()
            .verify_axioms()
            .unwrap()
            .is_matroid());
    }

    #[test]
    fn utility_is_normalized_monotone_modular() {
        let inst = two_robot_instance();
        let g = inst.utility();
        assert_eq!(g.value(&[]), 0.0);
        assert!(check_nondecreasing(&g, 3, 1e-12).unwrap().holds);
        assert!(check_submodular(&g, 3, 1e-12).unwrap().holds);
        // modularity: the gain of an element never depends on the base set
        for e in 0..3 {
            let alone = marginal_gain(&g, &[], e).unwrap();
            for base in 0..3usize {
                if base == e {
                    continue;
                }
                let gain = marginal_gain(&g, &[base], e).unwrap();
                assert!((gain - alone).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn undeclared_references_are_rejected() {
        let err = AllocationInstance::new(
            vec![1],
            vec![(0, 0)],
            vec![(AllocationElement::new(2, 0, 0), 0.1)],
            None,
        );
        assert!(matches!(err, Err(Error::Instance(_))));

        let err = AllocationInstance::new(
            vec![1],
            vec![(0, 0)],
            vec![(AllocationElement::new(1, 0, 0), -0.1)],
            None,
        );
        assert!(matches!(err, Err(Error::Instance(_))));
    }
}
