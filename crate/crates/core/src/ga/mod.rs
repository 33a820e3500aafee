//! The evolutionary loop.
//!
//! Each generation copies the best `elite_count` chromosomes unchanged and
//! fills the remaining slots with children of roulette-selected parent pairs.
//! Every child draws from its own RNG stream keyed by (generation, slot), so
//! the result is the same however the work is spread over threads.

mod crossover;
mod selection;

use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use crossover::{complete_randomly, crossover, random_chromosome};
pub use selection::RouletteWheel;

use crate::chromosome::{Chromosome, Placement};
use crate::compat::{CompatibilityTable, TableOptions};
use crate::error::{invalid, Result};
use crate::par;
use crate::tile::{EdgeRef, Piece};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaConfig {
    pub population_size: usize,
    /// Breeding iterations after the initial population.
    pub generations: usize,
    pub elite_count: usize,
    /// Probability of dropping a shared or best-buddy relation during crossover.
    pub shared_relation_skip_prob: f64,
    pub seed: u64,
    pub table: TableOptions,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population_size: 300,
            generations: 100,
            elite_count: 4,
            shared_relation_skip_prob: 0.001,
            seed: 0,
            table: TableOptions::default(),
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population_size == 0 {
            return Err(invalid!("population size must be positive"));
        }
        if self.elite_count >= self.population_size {
            return Err(invalid!(
                "elite count {} must be below population size {}",
                self.elite_count,
                self.population_size
            ));
        }
        if !(0.0..=1.0).contains(&self.shared_relation_skip_prob) {
            return Err(invalid!("skip probability {} outside [0, 1]", self.shared_relation_skip_prob));
        }
        Ok(())
    }
}

/// Sum over all `4n` edges of the dissimilarity to the linked edge, with the
/// table's none-penalty for unlinked edges. Every adjacency counts twice.
pub fn fitness(chromosome: &Chromosome, table: &CompatibilityTable) -> Result<f64> {
    if chromosome.piece_count() != table.piece_count() {
        return Err(invalid!(
            "chromosome covers {} pieces, table covers {}",
            chromosome.piece_count(),
            table.piece_count()
        ));
    }
    Ok(chromosome
        .links()
        .iter()
        .enumerate()
        .map(|(u, link)| match link {
            Some(other) => table.get(EdgeRef::from_index(u), *other),
            None => table.none_penalty(),
        })
        .sum())
}

/// RNG for one (generation, slot) pair. Generation 0 is the initial population.
pub fn stream_rng(seed: u64, generation: u64, slot: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((generation << 32) | slot);
    rng
}

#[derive(Debug, Clone)]
pub struct Individual {
    pub chromosome: Chromosome,
    pub fitness: f64,
}

#[derive(Debug, Clone)]
pub struct Population {
    /// Sorted by fitness, best first.
    individuals: Vec<Individual>,
    generation: usize,
}

impl Population {
    fn new(mut individuals: Vec<Individual>, generation: usize) -> Population {
        // Stable: equal fitness keeps slot order, which keeps runs reproducible.
        individuals.sort_by(|a, b| a.fitness.total_cmp(&b.fitness));
        Population { individuals, generation }
    }

    pub fn individuals(&self) -> &[Individual] {
        &self.individuals
    }

    pub fn generation(&self) -> usize {
        self.generation
    }

    pub fn best(&self) -> &Individual {
        &self.individuals[0]
    }

    pub fn len(&self) -> usize {
        self.individuals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.individuals.is_empty()
    }

    pub fn wheel(&self) -> Result<RouletteWheel> {
        let f: Vec<f64> = self.individuals.iter().map(|i| i.fitness).collect();
        RouletteWheel::new(&f)
    }
}

/// Passed to the per-generation hook.
#[derive(Debug, Clone, Copy)]
pub struct GenerationReport<'a> {
    /// 1-based breeding iteration.
    pub generation: usize,
    pub best_fitness: f64,
    pub best: &'a Chromosome,
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub chromosome: Chromosome,
    pub placement: Placement,
    pub fitness: f64,
}

pub fn evolve(pieces: &[Piece], config: &GaConfig, hook: impl FnMut(&GenerationReport<'_>)) -> Result<Solution> {
    config.validate()?;
    let table = CompatibilityTable::build_with(pieces, config.table)?;
    evolve_with_table(&table, config, hook)
}

pub fn evolve_with_table(
    table: &CompatibilityTable,
    config: &GaConfig,
    mut hook: impl FnMut(&GenerationReport<'_>),
) -> Result<Solution> {
    config.validate()?;
    let n = table.piece_count();
    let seed = config.seed;

    let initial = par::map_indexed(config.population_size, |slot| -> Result<Individual> {
        let mut rng = stream_rng(seed, 0, slot as u64);
        let (chromosome, _) = random_chromosome(n, &mut rng)?;
        let fitness = fitness(&chromosome, table)?;
        Ok(Individual { chromosome: chromosome.with_fitness(fitness), fitness })
    });
    let mut population = Population::new(initial.into_iter().collect::<Result<_>>()?, 0);

    for generation in 1..=config.generations {
        let wheel = population.wheel()?;
        let parents = &population.individuals;
        let bred = par::map_indexed(config.population_size - config.elite_count, |i| -> Result<Individual> {
            let slot = config.elite_count + i;
            let mut rng = stream_rng(seed, generation as u64, slot as u64);
            let a = &parents[wheel.sample(&mut rng)].chromosome;
            let b = &parents[wheel.sample(&mut rng)].chromosome;
            let child = crossover(a, b, table, config.shared_relation_skip_prob, &mut rng)?;
            let fitness = fitness(&child, table)?;
            Ok(Individual { chromosome: child.with_fitness(fitness), fitness })
        });
        let mut next: Vec<Individual> = parents[..config.elite_count].to_vec();
        for child in bred {
            next.push(child?);
        }
        population = Population::new(next, generation);
        let best = population.best();
        hook(&GenerationReport { generation, best_fitness: best.fitness, best: &best.chromosome });
    }

    let best = population.best().clone();
    let placement = best.chromosome.placement()?.normalized();
    Ok(Solution { chromosome: best.chromosome, placement, fitness: best.fitness })
}
