//! Ground-truth record written next to every tile bundle.

use std::collections::HashMap;
use std::path::Path;

use jigsaw_core::eval::{self, SourceTruth, TileOrigin};
use jigsaw_core::{Chromosome, Placement, Rotation};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub seed: u64,
    /// Tile side in pixels.
    pub tile_size: u32,
    pub sources: Vec<SourceInfo>,
    /// Presentation order: entry `i` is piece `i`.
    pub tiles: Vec<TileRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceInfo {
    pub image_id: String,
    pub rows: u32,
    pub cols: u32,
    /// Size of the original image before cropping to whole tiles.
    pub original_width: u32,
    pub original_height: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TileRecord {
    pub tile_file: String,
    pub source_image_id: String,
    pub source_row: u32,
    pub source_col: u32,
    /// Degrees clockwise that turn the stored tile back upright. The stored
    /// pixels are the source tile turned counterclockwise by this amount.
    pub applied_rotation: u32,
}

pub fn tile_file_name(piece: usize) -> String {
    format!("tile_{:06}.png", piece + 1)
}

impl Manifest {
    pub fn piece_count(&self) -> usize {
        self.tiles.len()
    }

    pub fn read(path: &Path) -> Result<Manifest> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let manifest: Manifest = toml::from_str(&text).map_err(|e| Error::parse(path, e))?;
        manifest.validate().map_err(|e| Error::parse(path, e))?;
        Ok(manifest)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("manifest serializes")
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_toml()).map_err(|e| Error::io(path, e))
    }

    pub fn validate(&self) -> Result<()> {
        if self.tile_size < 2 {
            return Err(Error::Invalid(format!("tile size {} is below 2", self.tile_size)));
        }
        let expected: u64 = self.sources.iter().map(|s| s.rows as u64 * s.cols as u64).sum();
        if expected != self.tiles.len() as u64 {
            return Err(Error::Invalid(format!("sources describe {expected} tiles, manifest lists {}", self.tiles.len())));
        }
        let origins = self.origins()?;
        for (t, o) in self.tiles.iter().zip(&origins) {
            let s = &self.sources[o.source];
            if t.source_row >= s.rows || t.source_col >= s.cols {
                return Err(Error::Invalid(format!("tile {} lies outside source {}", t.tile_file, s.image_id)));
            }
        }
        // Uniqueness of source cells.
        eval::ground_truth_relations(&origins)?;
        Ok(())
    }

    /// Per-piece origin with sources numbered by their position in `sources`.
    pub fn origins(&self) -> Result<Vec<TileOrigin>> {
        let mut index = HashMap::new();
        for (i, s) in self.sources.iter().enumerate() {
            if index.insert(s.image_id.as_str(), i).is_some() {
                return Err(Error::Invalid(format!("duplicate source image id `{}`", s.image_id)));
            }
        }
        self.tiles
            .iter()
            .map(|t| {
                let source = *index
                    .get(t.source_image_id.as_str())
                    .ok_or_else(|| Error::Invalid(format!("tile {} names unknown source `{}`", t.tile_file, t.source_image_id)))?;
                let rotation = Rotation::from_degrees(t.applied_rotation)
                    .ok_or_else(|| Error::Invalid(format!("tile {} has rotation {}", t.tile_file, t.applied_rotation)))?;
                Ok(TileOrigin { source, row: t.source_row as usize, col: t.source_col as usize, rotation })
            })
            .collect()
    }

    pub fn ground_truth_relations(&self) -> Result<Vec<SourceTruth>> {
        Ok(eval::ground_truth_relations(&self.origins()?)?)
    }

    /// Sources upright and side by side.
    pub fn ground_truth_placement(&self) -> Result<Placement> {
        Ok(eval::ground_truth_placement(&self.origins()?)?)
    }

    pub fn ground_truth_chromosome(&self) -> Result<Chromosome> {
        Ok(eval::ground_truth_chromosome(&self.origins()?)?)
    }
}
