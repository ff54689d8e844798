//! Harmony-search phase.

use rand::Rng;

use super::population::Population;
use super::{Objective, Search};

impl<O: Objective> Search<'_, O> {
    /// Builds one harmony component by component: memory consideration
    /// with optional pitch adjustment, or a fresh uniform draw.
    fn improvise(&mut self, pop: &Population) -> Vec<f64> {
        let (hmcr, par, bw) = (self.config.hmcr, self.config.par, self.config.bw);
        (0..self.bounds.len())
            .map(|j| {
                if self.rng.random::<f64>() < hmcr {
                    let k = self.rng.random_range(0..pop.len());
                    let mut gene = pop.members()[k].genotype()[j];
                    if self.rng.random::<f64>() < par {
                        gene += self.rng.random_range(-bw..=bw);
                    }
                    gene
                } else {
                    self.uniform_gene(j)
                }
            })
            .collect()
    }

    /// Runs `phase_length` generations of `population_size` improvisations,
    /// each costing one evaluation, stopping early when the budget or the
    /// target is reached.
    pub fn imhs_phase(&mut self, pop: &mut Population) {
        for _ in 0..self.config.phase_length * pop.len() {
            if self.should_stop() {
                return;
            }
            let harmony = self.improvise(pop);
            let candidate = self.evaluate(harmony);
            self.offer(pop, candidate);
        }
    }
}
