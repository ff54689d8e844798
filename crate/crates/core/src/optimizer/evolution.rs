//! Differential-evolution phase with harmony-search selection.

use rand::Rng;

use super::population::Population;
use super::{Objective, Search};

impl<O: Objective> Search<'_, O> {
    /// Three distinct member indices, none equal to `exclude`.
    fn pick_three(&mut self, size: usize, exclude: usize) -> [usize; 3] {
        let mut picked = [exclude; 3];
        for slot in 0..3 {
            picked[slot] = loop {
                let r = self.rng.random_range(0..size);
                if r != exclude && !picked[..slot].contains(&r) {
                    break r;
                }
            };
        }
        picked
    }

    /// DE/rand/1/bin trial vector for member `i`.
    fn trial(&mut self, pop: &Population, i: usize) -> Vec<f64> {
        let [r1, r2, r3] = self.pick_three(pop.len(), i);
        let members = pop.members();
        let (base, a, b) = (
            members[r1].genotype(),
            members[r2].genotype(),
            members[r3].genotype(),
        );
        let target = members[i].genotype();
        let dim = target.len();
        let forced = self.rng.random_range(0..dim);
        (0..dim)
            .map(|j| {
                if j == forced || self.rng.random::<f64>() < self.config.cr {
                    base[j] + self.config.f * (a[j] - b[j])
                } else {
                    target[j]
                }
            })
            .collect()
    }

    /// Runs `phase_length` generations of one trial per member. A trial
    /// replaces the current worst member, not its parent, when it beats it.
    pub fn mde_phase(&mut self, pop: &mut Population) {
        for _ in 0..self.config.phase_length {
            for i in 0..pop.len() {
                if self.should_stop() {
                    return;
                }
                let trial = self.trial(pop, i);
                let candidate = self.evaluate(trial);
                self.offer(pop, candidate);
            }
        }
    }
}
