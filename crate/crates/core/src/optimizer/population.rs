use std::cmp::Ordering;

use crate::model::{Allocation, Evaluation};

/// Rounds each gene half-up and clamps it into `[1, u_i]`.
pub fn decode(genotype: &[f64], bounds: &[u32]) -> Allocation {
    debug_assert_eq!(genotype.len(), bounds.len());
    genotype
        .iter()
        .zip(bounds)
        .map(|(&g, &upper)| {
            let rounded = (g + 0.5).floor();
            rounded.clamp(1.0, f64::from(upper)) as u32
        })
        .collect::<Vec<_>>()
        .into()
}

/// Keeps every gene inside `[1, u_i]`.
pub(crate) fn clamp_genotype(genotype: &mut [f64], bounds: &[u32]) {
    for (g, &upper) in genotype.iter_mut().zip(bounds) {
        *g = g.clamp(1.0, f64::from(upper));
    }
}

/// A real-valued genotype together with the evaluation of its decoded
/// allocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    genotype: Vec<f64>,
    allocation: Allocation,
    evaluation: Evaluation,
}

impl Candidate {
    pub(crate) fn new(genotype: Vec<f64>, allocation: Allocation, evaluation: Evaluation) -> Self {
        Self {
            genotype,
            allocation,
            evaluation,
        }
    }

    pub fn genotype(&self) -> &[f64] {
        &self.genotype
    }

    pub fn allocation(&self) -> &Allocation {
        &self.allocation
    }

    pub fn evaluation(&self) -> &Evaluation {
        &self.evaluation
    }

    pub fn beats(&self, other: &Candidate) -> bool {
        self.evaluation.beats(&other.evaluation)
    }
}

/// Fixed-size memory shared by both phases of the hybrid.
#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    members: Vec<Candidate>,
    best_index: usize,
}

impl Population {
    pub(crate) fn new(members: Vec<Candidate>) -> Self {
        assert!(!members.is_empty(), "population cannot be empty");
        let mut pop = Self {
            members,
            best_index: 0,
        };
        pop.best_index = pop.extreme(Ordering::Greater);
        pop
    }

    pub fn members(&self) -> &[Candidate] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn best_index(&self) -> usize {
        self.best_index
    }

    pub fn best(&self) -> &Candidate {
        &self.members[self.best_index]
    }

    /// First member that no other member is worse than.
    pub fn worst_index(&self) -> usize {
        self.extreme(Ordering::Less)
    }

    fn extreme(&self, wanted: Ordering) -> usize {
        let mut pick = 0;
        for (i, m) in self.members.iter().enumerate().skip(1) {
            if m.evaluation.compare(&self.members[pick].evaluation) == wanted {
                pick = i;
            }
        }
        pick
    }

    /// Harmony-search replacement: the newcomer takes the worst member's
    /// slot only if it is strictly better than that member and its
    /// allocation is not already held by another member.
    pub(crate) fn replace_worst(&mut self, candidate: Candidate) -> bool {
        let worst = self.worst_index();
        if !candidate.beats(&self.members[worst]) {
            return false;
        }
        if self
            .members
            .iter()
            .any(|m| m.allocation == candidate.allocation)
        {
            return false;
        }
        self.members[worst] = candidate;
        if self.members[worst].beats(&self.members[self.best_index]) {
            self.best_index = worst;
        } else if worst == self.best_index {
            // Only reachable when every member ties.
            self.best_index = self.extreme(Ordering::Greater);
        }
        true
    }
}
