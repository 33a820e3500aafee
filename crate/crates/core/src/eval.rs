//! Neighbour-comparison scoring against ground truth.
//!
//! A tile's origin records where it came from and the clockwise rotation that
//! turns its stored pixels back upright. Truth relations are the adjacencies
//! of every source image expressed in stored edge labels; a solution is scored
//! by how many of them it reproduces. The measure ignores where the solution
//! sits and which way it faces.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::chromosome::{chromosome_from_placement, Chromosome, Placement, Pose};
use crate::error::{invalid, Result};
use crate::tile::{edge_facing, Cell, Direction, EdgeRef, RelativeRelation, Rotation};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TileOrigin {
    pub source: usize,
    pub row: usize,
    pub col: usize,
    /// Clockwise turn that restores the stored tile to its source orientation.
    pub rotation: Rotation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceTruth {
    pub source: usize,
    pub rows: usize,
    pub cols: usize,
    pub relations: Vec<RelativeRelation>,
}

fn index_sources(origins: &[TileOrigin]) -> Result<BTreeMap<usize, BTreeMap<(usize, usize), usize>>> {
    let mut sources: BTreeMap<usize, BTreeMap<(usize, usize), usize>> = BTreeMap::new();
    for (piece, o) in origins.iter().enumerate() {
        if let Some(prev) = sources.entry(o.source).or_default().insert((o.row, o.col), piece) {
            return Err(invalid!(
                "pieces {prev} and {piece} both claim source {} cell ({}, {})",
                o.source,
                o.row,
                o.col
            ));
        }
    }
    for (source, cells) in &sources {
        let rows = cells.keys().map(|k| k.0).max().unwrap_or(0) + 1;
        let cols = cells.keys().map(|k| k.1).max().unwrap_or(0) + 1;
        if rows * cols != cells.len() {
            return Err(invalid!("source {source} does not form a full {rows}x{cols} grid"));
        }
    }
    Ok(sources)
}

/// Adjacent tile pairs of every source, in stored edge labels. Sources are
/// returned in ascending id order.
pub fn ground_truth_relations(origins: &[TileOrigin]) -> Result<Vec<SourceTruth>> {
    let sources = index_sources(origins)?;
    let mut out = Vec::with_capacity(sources.len());
    for (&source, cells) in &sources {
        let mut relations = Vec::new();
        let facing = |piece: usize, dir: Direction| EdgeRef::new(piece, edge_facing(dir, origins[piece].rotation));
        for (&(row, col), &p) in cells {
            if let Some(&q) = cells.get(&(row, col + 1)) {
                relations.push(RelativeRelation::new_unchecked(facing(p, Direction::Right), facing(q, Direction::Left)));
            }
            if let Some(&q) = cells.get(&(row + 1, col)) {
                relations.push(RelativeRelation::new_unchecked(facing(p, Direction::Down), facing(q, Direction::Up)));
            }
        }
        let rows = cells.keys().map(|k| k.0).max().unwrap_or(0) + 1;
        let cols = cells.keys().map(|k| k.1).max().unwrap_or(0) + 1;
        out.push(SourceTruth { source, rows, cols, relations });
    }
    Ok(out)
}

/// Every source laid out upright, side by side from left to right in source-id order.
pub fn ground_truth_placement(origins: &[TileOrigin]) -> Result<Placement> {
    let sources = index_sources(origins)?;
    let mut poses = alloc::vec![Pose::default(); origins.len()];
    let mut offset = 0;
    for cells in sources.values() {
        let cols = cells.keys().map(|k| k.1).max().unwrap_or(0) + 1;
        for (&(row, col), &p) in cells {
            poses[p] = Pose::new(Cell::new(row as i32, (offset + col) as i32), origins[p].rotation);
        }
        offset += cols;
    }
    Ok(Placement::new(poses))
}

pub fn ground_truth_chromosome(origins: &[TileOrigin]) -> Result<Chromosome> {
    chromosome_from_placement(&ground_truth_placement(origins)?, origins.len())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SourceMetrics {
    pub source: usize,
    pub matched: usize,
    pub total: usize,
    pub neighbor_accuracy: f64,
    pub perfect: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Metrics {
    pub neighbor_accuracy: f64,
    pub perfect: bool,
    pub per_source: Vec<SourceMetrics>,
    /// `(rows, cols)`
    pub solution_bounding_box: (usize, usize),
    /// Relations in the solution, counted once per adjacent pair.
    pub explicit_relation_count: usize,
}

fn ratio(matched: usize, total: usize) -> f64 {
    if total == 0 {
        1.0
    } else {
        matched as f64 / total as f64
    }
}

pub fn score(chromosome: &Chromosome, origins: &[TileOrigin]) -> Result<Metrics> {
    if chromosome.piece_count() != origins.len() {
        return Err(invalid!(
            "solution covers {} pieces, ground truth covers {}",
            chromosome.piece_count(),
            origins.len()
        ));
    }
    let placement = chromosome.placement()?;
    let truth = ground_truth_relations(origins)?;
    let per_source: Vec<SourceMetrics> = truth
        .iter()
        .map(|t| {
            let matched = t.relations.iter().filter(|r| chromosome.contains(r)).count();
            let total = t.relations.len();
            SourceMetrics { source: t.source, matched, total, neighbor_accuracy: ratio(matched, total), perfect: matched == total }
        })
        .collect();
    let matched: usize = per_source.iter().map(|s| s.matched).sum();
    let total: usize = per_source.iter().map(|s| s.total).sum();
    Ok(Metrics {
        neighbor_accuracy: ratio(matched, total),
        perfect: per_source.iter().all(|s| s.perfect),
        per_source,
        solution_bounding_box: placement.bounding_box(),
        explicit_relation_count: chromosome.relation_count(),
    })
}
