use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::population::{clamp_genotype, decode, Candidate, Population};
use super::{CurvePoint, HybridConfig, Objective, RunTrace, StopReason, Variant, TARGET_TOLERANCE};
use crate::model::{Allocation, Evaluation};

/// State of one optimizer run: the objective, the RNG stream, the
/// evaluation counter and the incumbent history.
///
/// Phases borrow the population mutably, so any sequence of phases can be
/// composed on the same memory.
pub struct Search<'a, O: Objective> {
    objective: &'a O,
    pub(super) config: HybridConfig,
    pub(super) bounds: Vec<u32>,
    pub(super) rng: ChaCha8Rng,
    fe_used: u64,
    target: Option<f64>,
    fe_to_target: Option<u64>,
    curve: Vec<CurvePoint>,
    incumbent: Option<(Allocation, Evaluation)>,
}

impl<'a, O: Objective> Search<'a, O> {
    pub fn new(objective: &'a O, config: HybridConfig, target: Option<f64>) -> Self {
        Self {
            objective,
            bounds: objective.upper_bounds(),
            rng: ChaCha8Rng::seed_from_u64(config.seed),
            config,
            fe_used: 0,
            target,
            fe_to_target: None,
            curve: Vec::new(),
            incumbent: None,
        }
    }

    pub fn bounds(&self) -> &[u32] {
        &self.bounds
    }

    pub fn fe_used(&self) -> u64 {
        self.fe_used
    }

    pub fn best_curve(&self) -> &[CurvePoint] {
        &self.curve
    }

    pub(super) fn improvements(&self) -> usize {
        self.curve.len()
    }

    pub fn budget_exhausted(&self) -> bool {
        self.fe_used >= self.config.max_fe
    }

    pub fn target_reached(&self) -> bool {
        self.fe_to_target.is_some()
    }

    pub(super) fn should_stop(&self) -> bool {
        self.budget_exhausted() || self.target_reached()
    }

    pub fn single_point(&self) -> bool {
        self.bounds.iter().all(|&u| u == 1)
    }

    pub(super) fn uniform_gene(&mut self, j: usize) -> f64 {
        let upper = f64::from(self.bounds[j]);
        1.0 + self.rng.random::<f64>() * (upper - 1.0)
    }

    /// Samples `population_size` genotypes uniformly inside the bounds and
    /// evaluates each one.
    pub fn init_population(&mut self) -> Population {
        let genotypes: Vec<Vec<f64>> = (0..self.config.population_size)
            .map(|_| {
                (0..self.bounds.len())
                    .map(|j| self.uniform_gene(j))
                    .collect()
            })
            .collect();
        self.population_from(genotypes)
    }

    /// Evaluates the given genotypes (one evaluation each) as a population.
    pub fn population_from(&mut self, genotypes: Vec<Vec<f64>>) -> Population {
        let members: Vec<Candidate> = genotypes.into_iter().map(|g| self.evaluate(g)).collect();
        for m in &members {
            self.observe(m);
        }
        Population::new(members)
    }

    pub(super) fn evaluate(&mut self, mut genotype: Vec<f64>) -> Candidate {
        clamp_genotype(&mut genotype, &self.bounds);
        let allocation = decode(&genotype, &self.bounds);
        let evaluation = self.objective.evaluate(&allocation);
        self.fe_used += 1;
        Candidate::new(genotype, allocation, evaluation)
    }

    /// Offers a candidate to the population under worst-member replacement.
    pub(super) fn offer(&mut self, pop: &mut Population, candidate: Candidate) -> bool {
        let accepted = pop.replace_worst(candidate);
        if accepted {
            let best = pop.best().clone();
            self.observe(&best);
        }
        accepted
    }

    fn observe(&mut self, candidate: &Candidate) {
        let improved = match &self.incumbent {
            None => true,
            Some((_, e)) => candidate.evaluation().beats(e),
        };
        if !improved {
            return;
        }
        let e = *candidate.evaluation();
        self.curve.push(CurvePoint::new(self.fe_used, &e));
        self.incumbent = Some((candidate.allocation().clone(), e));
        if let Some(target) = self.target {
            if self.fe_to_target.is_none()
                && e.feasible
                && e.system_reliability >= target - TARGET_TOLERANCE
            {
                self.fe_to_target = Some(self.fe_used);
            }
        }
    }

    /// Alternates (or repeats) phases on `pop` until the target, the budget
    /// or the stall window ends the run.
    pub fn run(mut self, mut pop: Population, variant: Variant) -> RunTrace {
        if self.single_point() {
            return self.finish(variant, &pop, StopReason::SinglePoint);
        }
        let mut stalled = 0;
        let mut phase = 0usize;
        let stop = loop {
            if self.target_reached() {
                break StopReason::TargetReached;
            }
            if self.budget_exhausted() {
                break StopReason::BudgetExhausted;
            }
            if stalled >= self.config.stall_phases {
                break StopReason::Stalled;
            }
            let improvements = self.improvements();
            let harmony = match variant {
                Variant::Hybrid => phase.is_multiple_of(2),
                Variant::Imhs => true,
                Variant::Mde => false,
            };
            if harmony {
                self.imhs_phase(&mut pop);
            } else {
                self.mde_phase(&mut pop);
            }
            phase += 1;
            if self.improvements() > improvements {
                stalled = 0;
            } else {
                stalled += 1;
            }
        };
        self.finish(variant, &pop, stop)
    }

    pub fn finish(self, variant: Variant, pop: &Population, stop_reason: StopReason) -> RunTrace {
        let best = pop.best();
        RunTrace {
            algorithm: variant,
            seed: self.config.seed,
            target: self.target,
            fe_used: self.fe_used,
            fe_to_target: self.fe_to_target,
            stop_reason,
            best_curve: self.curve,
            final_allocation: best.allocation().clone(),
            final_evaluation: *best.evaluation(),
        }
    }
}
