//! Solver output: per-piece cell and rotation plus the full relation matrix.

use std::path::Path;

use jigsaw_core::{chromosome_from_placement, Cell, Chromosome, EdgeLabel, EdgeRef, Placement, Pose, Rotation};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const NO_NEIGHBOR: &str = "-";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionDoc {
    pub piece_count: usize,
    pub fitness: Option<f64>,
    pub rows: usize,
    pub cols: usize,
    pub pieces: Vec<PieceEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceEntry {
    pub id: usize,
    pub row: i64,
    pub col: i64,
    /// Degrees clockwise.
    pub rotation: u32,
    /// Neighbours of edges a, b, c, d as `<piece>.<label>`, or `-`.
    pub links: [String; 4],
}

impl SolutionDoc {
    pub fn new(chromosome: &Chromosome, placement: &Placement, fitness: Option<f64>) -> Result<SolutionDoc> {
        let n = chromosome.piece_count();
        if placement.len() != n {
            return Err(Error::Invalid(format!("placement has {} pieces, chromosome has {n}", placement.len())));
        }
        let placement = placement.normalized();
        let (rows, cols) = placement.bounding_box();
        let pieces = placement
            .poses()
            .iter()
            .enumerate()
            .map(|(id, pose)| PieceEntry {
                id,
                row: pose.cell.row as i64,
                col: pose.cell.col as i64,
                rotation: pose.rotation.degrees(),
                links: EdgeLabel::ALL.map(|e| match chromosome.neighbor(EdgeRef::new(id, e)) {
                    Some(other) => other.to_string(),
                    None => NO_NEIGHBOR.to_string(),
                }),
            })
            .collect();
        Ok(SolutionDoc { piece_count: n, fitness, rows, cols, pieces })
    }

    pub fn placement(&self) -> Result<Placement> {
        let poses = self
            .pieces
            .iter()
            .enumerate()
            .map(|(i, p)| {
                if p.id != i {
                    return Err(Error::Invalid(format!("piece entry {i} has id {}", p.id)));
                }
                let rotation = Rotation::from_degrees(p.rotation)
                    .ok_or_else(|| Error::Invalid(format!("piece {i} has rotation {}", p.rotation)))?;
                let cell = Cell::new(
                    i32::try_from(p.row).map_err(|_| Error::Invalid(format!("piece {i} row out of range")))?,
                    i32::try_from(p.col).map_err(|_| Error::Invalid(format!("piece {i} column out of range")))?,
                );
                Ok(Pose::new(cell, rotation))
            })
            .collect::<Result<_>>()?;
        Ok(Placement::new(poses))
    }

    /// Parses and validates the relation matrix, and checks that it matches the placement.
    pub fn chromosome(&self) -> Result<Chromosome> {
        if self.pieces.len() != self.piece_count {
            return Err(Error::Invalid(format!("{} piece entries for piece_count {}", self.pieces.len(), self.piece_count)));
        }
        let mut links = Vec::with_capacity(4 * self.piece_count);
        for p in &self.pieces {
            for l in &p.links {
                links.push(if l == NO_NEIGHBOR { None } else { Some(l.parse::<EdgeRef>()?) });
            }
        }
        let chromosome = Chromosome::from_links(links)?;
        let from_placement = chromosome_from_placement(&self.placement()?, self.piece_count)?;
        if from_placement != chromosome {
            return Err(Error::Invalid("relation matrix does not match piece positions".into()));
        }
        Ok(chromosome)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("solution serializes")
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_toml()).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<SolutionDoc> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        toml::from_str(&text).map_err(|e| Error::parse(path, e))
    }
}
