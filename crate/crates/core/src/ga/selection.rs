use alloc::vec::Vec;

use rand::Rng;

use crate::error::{invalid, Result};

/// Fitness-proportionate sampling for a minimized fitness.
///
/// Individual `i` gets weight `worst - f_i + eps` with
/// `eps = 1e-6 * worst + 1e-12`, so the best individual is the most likely
/// pick and equal fitnesses give a uniform wheel.
#[derive(Debug, Clone)]
pub struct RouletteWheel {
    cumulative: Vec<f64>,
}

impl RouletteWheel {
    pub fn new(fitness: &[f64]) -> Result<RouletteWheel> {
        if fitness.is_empty() {
            return Err(invalid!("roulette wheel over an empty population"));
        }
        if fitness.iter().any(|f| !f.is_finite() || *f < 0.0) {
            return Err(invalid!("fitness values must be finite and non-negative"));
        }
        let cumulative = Self::weights(fitness)
            .scan(0.0, |acc, w| {
                *acc += w;
                Some(*acc)
            })
            .collect();
        Ok(RouletteWheel { cumulative })
    }

    pub fn weights(fitness: &[f64]) -> impl Iterator<Item = f64> + '_ {
        let worst = fitness.iter().copied().fold(0.0, f64::max);
        let eps = 1e-6 * worst + 1e-12;
        fitness.iter().map(move |f| worst - f + eps)
    }

    pub fn len(&self) -> usize {
        self.cumulative.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cumulative.is_empty()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let total = *self.cumulative.last().expect("non-empty wheel");
        let x = rng.random::<f64>() * total;
        self.cumulative.partition_point(|&c| c <= x).min(self.cumulative.len() - 1)
    }
}
