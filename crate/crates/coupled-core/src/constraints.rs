//! Independence systems over dense ground sets: uniform, partition and
//! active-window families, intersections of families, and an exhaustive
//! axiom checker with re-verifiable counterexample witnesses.
//!
//! All families here are downward-closed by construction. Uniform and
//! partition families additionally satisfy the matroid exchange axiom; the
//! active-window family does not in general, which is exactly what
//! [`ConstraintFamily::verify_axioms`] is there to audit.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Default ground-set size cap for the exhaustive axiom checker. The check
/// enumerates every subset and is quadratic in the number of accepted sets.
pub const DEFAULT_EXHAUSTIVE_CAP: usize = 10;

/// Acceptance rule of one independence family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyKind {
    /// `S` accepted iff `|S| <= limit`.
    Uniform { limit: usize },
    /// `S` accepted iff every cell `c` holds at most `cap_per_cell[c]`
    /// selected elements, with `cell_of[e]` mapping elements to cells.
    Partition {
        cell_of: Vec<usize>,
        cap_per_cell: Vec<usize>,
    },
    /// `S` accepted iff the selected elements touch at most
    /// `max_active_windows` distinct windows.
    ActiveWindow {
        window_of: Vec<usize>,
        max_active_windows: usize,
    },
    /// `S` accepted iff every member family accepts it.
    Intersection(Vec<ConstraintFamily>),
}

/// A declared independence structure over the ground set `0..ground_size`,
/// answering membership queries. Values are immutable once built and all
/// queries are pure, so they can be shared freely across workers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintFamily {
    ground_size: usize,
    kind: FamilyKind,
}

impl ConstraintFamily {
    /// At most `limit` elements in total.
    pub fn uniform(ground_size: usize, limit: usize) -> Self {
        Self {
            ground_size,
            kind: FamilyKind::Uniform { limit },
        }
    }

    /// Per-cell caps; `cell_of` maps each element to its cell.
    pub fn partition(cell_of: Vec<usize>, cap_per_cell: Vec<usize>) -> Result<Self> {
        if let Some(&bad) = cell_of.iter().find(|&&c| c >= cap_per_cell.len()) {
            return Err(Error::Instance(format!(
                "cell index {bad} out of range for {} cells",
                cap_per_cell.len()
            )));
        }
        Ok(Self {
            ground_size: cell_of.len(),
            kind: FamilyKind::Partition {
                cell_of,
                cap_per_cell,
            },
        })
    }

    /// At most `max_active_windows` distinct windows touched.
    pub fn active_window(window_of: Vec<usize>, max_active_windows: usize) -> Self {
        Self {
            ground_size: window_of.len(),
            kind: FamilyKind::ActiveWindow {
                window_of,
                max_active_windows,
            },
        }
    }

    /// Simultaneous membership in every member family.
    pub fn intersection(members: Vec<ConstraintFamily>) -> Result<Self> {
        let Some(first) = members.first() else {
            return Err(Error::Instance("intersection of zero families".into()));
        };
        let ground_size = first.ground_size;
        if members.iter().any(|m| m.ground_size != ground_size) {
            return Err(Error::Instance(
                "intersection members disagree on ground-set size".into(),
            ));
        }
        Ok(Self {
            ground_size,
            kind: FamilyKind::Intersection(members),
        })
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn kind(&self) -> &FamilyKind {
        &self.kind
    }

    /// Number of member families: `n` for an intersection, 1 otherwise.
    /// This is the cardinality that enters the worst-case bounds.
    pub fn intersection_cardinality(&self) -> usize {
        match &self.kind {
            FamilyKind::Intersection(members) => members.len(),
            _ => 1,
        }
    }

    /// Does `selection` satisfy the family's acceptance rule?
    ///
    /// The empty selection is always accepted. Out-of-range indices and
    /// repeated elements are input errors.
    pub fn is_independent(&self, selection: &[usize]) -> Result<bool> {
        self.validate_selection(selection)?;
        Ok(self.accepts(selection))
    }

    /// Incremental feasibility: would `selection + {element}` still be
    /// accepted? Equivalent to the full check on the extended selection.
    pub fn can_extend(&self, selection: &[usize], element: usize) -> Result<bool> {
        self.validate_selection(selection)?;
        if element >= self.ground_size {
            return Err(Error::ElementOutOfRange {
                element,
                size: self.ground_size,
            });
        }
        if selection.contains(&element) {
            return Err(Error::DuplicateElement(element));
        }
        let mut extended = Vec::with_capacity(selection.len() + 1);
        extended.extend_from_slice(selection);
        extended.push(element);
        Ok(self.accepts(&extended))
    }

    fn validate_selection(&self, selection: &[usize]) -> Result<()> {
        let mut seen = vec![false; self.ground_size];
        for &e in selection {
            if e >= self.ground_size {
                return Err(Error::ElementOutOfRange {
                    element: e,
                    size: self.ground_size,
                });
            }
            if seen[e] {
                return Err(Error::DuplicateElement(e));
            }
            seen[e] = true;
        }
        Ok(())
    }

    /// Membership rule on an index slice known to be valid and duplicate-free.
    fn accepts(&self, selection: &[usize]) -> bool {
        match &self.kind {
            FamilyKind::Uniform { limit } => selection.len() <= *limit,
            FamilyKind::Partition {
                cell_of,
                cap_per_cell,
            } => {
                let mut counts = vec![0usize; cap_per_cell.len()];
                for &e in selection {
                    let c = cell_of[e];
                    counts[c] += 1;
                    if counts[c] > cap_per_cell[c] {
                        return false;
                    }
                }
                true
            }
            FamilyKind::ActiveWindow {
                window_of,
                max_active_windows,
            } => {
                let n_windows = window_of.iter().max().map_or(0, |&w| w + 1);
                let mut touched = vec![false; n_windows];
                let mut active = 0usize;
                for &e in selection {
                    let w = window_of[e];
                    if !touched[w] {
                        touched[w] = true;
                        active += 1;
                        if active > *max_active_windows {
                            return false;
                        }
                    }
                }
                true
            }
            FamilyKind::Intersection(members) => members.iter().all(|m| m.accepts(selection)),
        }
    }

    fn accepts_mask(&self, mask: u32) -> bool {
        let elems = mask_to_elements(mask, self.ground_size);
        self.accepts(&elems)
    }

    /// Exhaustive audit of the matroid axioms with the default size cap.
    ///
    /// Enumerates every accepted subset, checks downward closure over all
    /// single-element removals and the exchange property over all accepted
    /// pairs `(X, Y)` with `|Y| < |X|`. When a flag comes back `false` the
    /// corresponding witness re-validates through plain membership queries.
    pub fn verify_axioms(&self) -> Result<AxiomReport> {
        self.verify_axioms_capped(DEFAULT_EXHAUSTIVE_CAP)
    }

    /// Exhaustive audit with an explicit ground-size cap.
    pub fn verify_axioms_capped(&self, cap: usize) -> Result<AxiomReport> {
        let n = self.ground_size;
        if n > cap {
            return Err(Error::ExhaustiveCapExceeded { size: n, cap });
        }
        let total = 1u32 << n;
        let mut accepted_lookup = vec![false; total as usize];
        let mut accepted = Vec::new();
        for mask in 0..total {
            if self.accepts_mask(mask) {
                accepted_lookup[mask as usize] = true;
                accepted.push(mask);
            }
        }

        let mut downward_closed = true;
        let mut downward_witness = None;
        'down: for &mask in &accepted {
            let mut bits = mask;
            while bits != 0 {
                let bit = bits & bits.wrapping_neg();
                let sub = mask & !bit;
                if !accepted_lookup[sub as usize] {
                    downward_closed = false;
                    downward_witness = Some((mask_to_elements(mask, n), mask_to_elements(sub, n)));
                    break 'down;
                }
                bits &= bits - 1;
            }
        }

        let mut exchange_holds = true;
        let mut exchange_witness = None;
        'exch: for &x in &accepted {
            for &y in &accepted {
                if (y.count_ones()) >= x.count_ones() {
                    continue;
                }
                let candidates = x & !y;
                let mut extendable = false;
                let mut bits = candidates;
                while bits != 0 {
                    let bit = bits & bits.wrapping_neg();
                    if accepted_lookup[(y | bit) as usize] {
                        extendable = true;
                        break;
                    }
                    bits &= bits - 1;
                }
                if !extendable {
                    exchange_holds = false;
                    exchange_witness = Some((mask_to_elements(x, n), mask_to_elements(y, n)));
                    break 'exch;
                }
            }
        }

        Ok(AxiomReport {
            downward_closed,
            downward_witness,
            exchange_holds,
            exchange_witness,
            sets_checked: accepted.len(),
        })
    }

    /// Randomized, non-exhaustive audit for ground sets above the cap.
    /// Draws random accepted sets and checks random removals and random
    /// accepted pairs; a clean report is evidence, not proof.
    pub fn verify_axioms_sampled(&self, samples: usize, seed: u64) -> AxiomReport {
        let n = self.ground_size;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut accepted: Vec<Vec<usize>> = vec![Vec::new()];
        // Random accepted sets, grown element by element so sampling works
        // on any downward-closed family.
        for _ in 0..samples {
            let mut sel: Vec<usize> = Vec::new();
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            let keep = rng.random_range(0..=n);
            for &e in order.iter().take(keep) {
                if self.can_extend(&sel, e).unwrap_or(false) {
                    sel.push(e);
                }
            }
            sel.sort_unstable();
            accepted.push(sel);
        }

        let mut downward_closed = true;
        let mut downward_witness = None;
        for sel in &accepted {
            if sel.is_empty() {
                continue;
            }
            let drop = rng.random_range(0..sel.len());
            let sub: Vec<usize> = sel
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != drop)
                .map(|(_, &e)| e)
                .collect();
            if !self.accepts(&sub) {
                downward_closed = false;
                downward_witness = Some((sel.clone(), sub));
                break;
            }
        }

        let mut exchange_holds = true;
        let mut exchange_witness = None;
        for _ in 0..samples {
            let x = &accepted[rng.random_range(0..accepted.len())];
            let y = &accepted[rng.random_range(0..accepted.len())];
            if y.len() >= x.len() {
                continue;
            }
            let extendable = x
                .iter()
                .filter(|e| !y.contains(e))
                .any(|&e| self.can_extend(y, e).unwrap_or(false));
            if !extendable {
                exchange_holds = false;
                exchange_witness = Some((x.clone(), y.clone()));
                break;
            }
        }

        AxiomReport {
            downward_closed,
            downward_witness,
            exchange_holds,
            exchange_witness,
            sets_checked: accepted.len(),
        }
    }
}

/// Outcome of an axiom audit. Witnesses are sorted element lists that
/// reproduce the violation when replayed through `is_independent`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub downward_closed: bool,
    /// `(S, T)` with `S` accepted, `T ⊂ S` rejected.
    pub downward_witness: Option<(Vec<usize>, Vec<usize>)>,
    pub exchange_holds: bool,
    /// `(X, Y)` accepted with `|Y| < |X|` and no `x ∈ X∖Y` extending `Y`.
    pub exchange_witness: Option<(Vec<usize>, Vec<usize>)>,
    pub sets_checked: usize,
}

impl AxiomReport {
    pub fn is_matroid(&self) -> bool {
        self.downward_closed && self.exchange_holds
    }
}

fn mask_to_elements(mask: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|&e| mask & (1 << e) != 0).collect()
}
