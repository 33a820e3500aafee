//! Run record written next to every solution.

use std::path::Path;

use jigsaw_core::GaConfig;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub tool_version: String,
    pub seed: u64,
    pub config: ConfigEcho,
    /// Path of the metrics document, once one has been written.
    pub metrics: Option<String>,
    pub generations: Vec<GenerationRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub population_size: usize,
    pub generations: usize,
    pub elite_count: usize,
    pub shared_relation_skip_prob: f64,
    pub threads: Option<usize>,
    pub table_mode: String,
    pub piece_count: usize,
    pub bundle_hash: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationRow {
    pub generation: usize,
    pub best_fitness: f64,
    pub elapsed_seconds: f64,
}

impl ConfigEcho {
    pub fn new(config: &GaConfig, threads: Option<usize>, table_mode: String, piece_count: usize, bundle_hash: String) -> Self {
        ConfigEcho {
            population_size: config.population_size,
            generations: config.generations,
            elite_count: config.elite_count,
            shared_relation_skip_prob: config.shared_relation_skip_prob,
            threads,
            table_mode,
            piece_count,
            bundle_hash,
        }
    }
}

impl RunRecord {
    pub fn new(seed: u64, config: ConfigEcho) -> Self {
        RunRecord { tool_version: env!("CARGO_PKG_VERSION").to_string(), seed, config, metrics: None, generations: Vec::new() }
    }

    /// Rows must arrive in increasing generation order; elapsed time is clamped
    /// so it never goes backwards.
    pub fn push(&mut self, generation: usize, best_fitness: f64, elapsed_seconds: f64) {
        let last = self.generations.last();
        debug_assert!(last.map_or(true, |r| r.generation < generation));
        let elapsed_seconds = last.map_or(elapsed_seconds, |r| elapsed_seconds.max(r.elapsed_seconds));
        self.generations.push(GenerationRow { generation, best_fitness, elapsed_seconds });
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run record serializes")
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_toml()).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<RunRecord> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        toml::from_str(&text).map_err(|e| Error::parse(path, e))
    }
}
