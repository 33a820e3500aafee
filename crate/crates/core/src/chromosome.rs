//! Candidate solutions as an `n x 4` matrix of edge-to-edge links, and the
//! absolute placements they describe.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::error::{Error, Result};
use crate::tile::{edge_direction, edge_facing, rotation_for, Cell, Direction, EdgeLabel, EdgeRef, RelativeRelation, Rotation};

macro_rules! bad_chromosome {
    ($($arg:tt)*) => {
        Error::InvalidChromosome(alloc::format!($($arg)*))
    };
}

macro_rules! bad_placement {
    ($($arg:tt)*) => {
        Error::InvalidPlacement(alloc::format!($($arg)*))
    };
}

/// Where one piece sits and how it is turned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Pose {
    pub cell: Cell,
    pub rotation: Rotation,
}

impl Pose {
    pub fn new(cell: Cell, rotation: Rotation) -> Pose {
        Pose { cell, rotation }
    }

    /// Cell on the far side of `edge`.
    pub fn across(&self, edge: EdgeLabel) -> Cell {
        self.cell.step(edge_direction(edge, self.rotation))
    }
}

/// Absolute layout of all pieces, indexed by piece id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Placement {
    poses: Vec<Pose>,
}

impl Placement {
    pub fn new(poses: Vec<Pose>) -> Placement {
        Placement { poses }
    }

    pub fn poses(&self) -> &[Pose] {
        &self.poses
    }

    pub fn len(&self) -> usize {
        self.poses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poses.is_empty()
    }

    /// `(min, max)` corners, inclusive.
    pub fn bounds(&self) -> Option<(Cell, Cell)> {
        let first = self.poses.first()?.cell;
        Some(self.poses.iter().fold((first, first), |(lo, hi), p| {
            (
                Cell::new(lo.row.min(p.cell.row), lo.col.min(p.cell.col)),
                Cell::new(hi.row.max(p.cell.row), hi.col.max(p.cell.col)),
            )
        }))
    }

    /// `(rows, cols)` of the bounding box.
    pub fn bounding_box(&self) -> (usize, usize) {
        match self.bounds() {
            Some((lo, hi)) => ((hi.row - lo.row + 1) as usize, (hi.col - lo.col + 1) as usize),
            None => (0, 0),
        }
    }

    /// Shifts so the bounding box starts at `(0, 0)`.
    pub fn normalized(&self) -> Placement {
        let Some((lo, _)) = self.bounds() else { return self.clone() };
        Placement { poses: self.poses.iter().map(|p| Pose::new(p.cell - lo, p.rotation)).collect() }
    }

    /// Rigid clockwise rotation of the whole layout, then normalized.
    pub fn rotated(&self, rotation: Rotation) -> Placement {
        Placement {
            poses: self.poses.iter().map(|p| Pose::new(rotation.apply(p.cell), p.rotation + rotation)).collect(),
        }
        .normalized()
    }

    fn occupancy(&self) -> Result<HashMap<Cell, usize>> {
        let mut grid = HashMap::with_capacity(self.poses.len());
        for (id, pose) in self.poses.iter().enumerate() {
            if let Some(other) = grid.insert(pose.cell, id) {
                return Err(bad_placement!("pieces {other} and {id} overlap at {:?}", pose.cell));
            }
        }
        Ok(grid)
    }
}

/// Every edge of every piece mapped to the edge it abuts, or `None`.
#[derive(Debug, Clone)]
pub struct Chromosome {
    links: Vec<Option<EdgeRef>>,
    fitness: Option<f64>,
}

impl PartialEq for Chromosome {
    /// Relation-set equality; cached fitness is ignored.
    fn eq(&self, other: &Self) -> bool {
        self.links == other.links
    }
}

impl Eq for Chromosome {}

impl Chromosome {
    /// Builds from a full `4n` link table (entry `4 * piece + label`) and validates it.
    pub fn from_links(links: Vec<Option<EdgeRef>>) -> Result<Chromosome> {
        let c = Chromosome { links, fitness: None };
        c.validate()?;
        Ok(c)
    }

    pub(crate) fn from_links_unchecked(links: Vec<Option<EdgeRef>>) -> Chromosome {
        Chromosome { links, fitness: None }
    }

    pub fn piece_count(&self) -> usize {
        self.links.len() / 4
    }

    pub fn neighbor(&self, edge: EdgeRef) -> Option<EdgeRef> {
        self.links[edge.index()]
    }

    pub fn links(&self) -> &[Option<EdgeRef>] {
        &self.links
    }

    /// Each relation once, in ascending order of its lower edge.
    pub fn relations(&self) -> impl Iterator<Item = RelativeRelation> + '_ {
        self.links.iter().enumerate().filter_map(|(u, link)| {
            let other = (*link)?;
            (u < other.index()).then(|| RelativeRelation::new_unchecked(EdgeRef::from_index(u), other))
        })
    }

    pub fn relation_count(&self) -> usize {
        self.links.iter().filter(|l| l.is_some()).count() / 2
    }

    pub fn contains(&self, rel: &RelativeRelation) -> bool {
        rel.first().index() < self.links.len() && self.links[rel.first().index()] == Some(rel.second())
    }

    pub fn fitness(&self) -> Option<f64> {
        self.fitness
    }

    pub fn with_fitness(mut self, fitness: f64) -> Chromosome {
        self.fitness = Some(fitness);
        self
    }

    /// Checks symmetry, the absence of self-links, connectivity, and that the
    /// links are exactly the adjacencies of an overlap-free layout.
    pub fn validate(&self) -> Result<()> {
        self.placement().map(|_| ())
    }

    /// Derives a layout by walking links outward from piece 0 at the origin
    /// (unrotated). Fails if the links are not those of a single overlap-free layout.
    pub fn placement(&self) -> Result<Placement> {
        if self.links.len() % 4 != 0 || self.links.is_empty() {
            return Err(bad_chromosome!("link table of length {} is not 4n", self.links.len()));
        }
        let n = self.piece_count();
        for (u, link) in self.links.iter().enumerate() {
            let Some(other) = link else { continue };
            let here = EdgeRef::from_index(u);
            if other.piece >= n {
                return Err(bad_chromosome!("{here} links to out-of-range {other}"));
            }
            if other.piece == here.piece {
                return Err(bad_chromosome!("{here} links to its own piece"));
            }
            if self.links[other.index()] != Some(here) {
                return Err(bad_chromosome!("{here} -> {other} is not mirrored"));
            }
        }

        let mut poses: Vec<Option<Pose>> = vec![None; n];
        let mut grid: HashMap<Cell, usize> = HashMap::with_capacity(n);
        poses[0] = Some(Pose::default());
        grid.insert(Cell::default(), 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(p) = queue.pop_front() {
            let pose = poses[p].expect("queued pieces are posed");
            for label in EdgeLabel::ALL {
                let Some(other) = self.links[EdgeRef::new(p, label).index()] else { continue };
                let dir = edge_direction(label, pose.rotation);
                let expected = Pose::new(pose.cell.step(dir), rotation_for(other.edge, dir.opposite()));
                match poses[other.piece] {
                    Some(actual) if actual != expected => {
                        return Err(bad_chromosome!("links around piece {} are geometrically inconsistent", other.piece));
                    }
                    Some(_) => {}
                    None => {
                        if let Some(occupant) = grid.insert(expected.cell, other.piece) {
                            return Err(bad_chromosome!("pieces {occupant} and {} collide", other.piece));
                        }
                        poses[other.piece] = Some(expected);
                        queue.push_back(other.piece);
                    }
                }
            }
        }
        let poses: Vec<Pose> = poses
            .into_iter()
            .enumerate()
            .map(|(i, p)| p.ok_or_else(|| bad_chromosome!("piece {i} is not connected to piece 0")))
            .collect::<Result<_>>()?;

        // Every geometric adjacency must be recorded.
        for (p, pose) in poses.iter().enumerate() {
            for dir in [Direction::Right, Direction::Down] {
                if let Some(&q) = grid.get(&pose.cell.step(dir)) {
                    let here = EdgeRef::new(p, edge_facing(dir, pose.rotation));
                    let there = EdgeRef::new(q, edge_facing(dir.opposite(), poses[q].rotation));
                    if self.links[here.index()] != Some(there) {
                        return Err(bad_chromosome!("adjacency {here}--{there} is not recorded"));
                    }
                }
            }
        }
        Ok(Placement::new(poses))
    }
}

/// Records every pair of 4-adjacent pieces in `placement` as a mutual link.
pub fn chromosome_from_placement(placement: &Placement, n: usize) -> Result<Chromosome> {
    if placement.len() != n {
        return Err(bad_placement!("placement covers {} pieces, expected {n}", placement.len()));
    }
    if n == 0 {
        return Err(bad_placement!("empty placement"));
    }
    let grid = placement.occupancy()?;
    let poses = placement.poses();

    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut reached = 1;
    while let Some(p) = stack.pop() {
        for dir in Direction::ALL {
            if let Some(&q) = grid.get(&poses[p].cell.step(dir)) {
                if !seen[q] {
                    seen[q] = true;
                    reached += 1;
                    stack.push(q);
                }
            }
        }
    }
    if reached != n {
        return Err(bad_placement!("placement is not 4-connected ({reached} of {n} pieces reachable)"));
    }

    let mut links = vec![None; 4 * n];
    for (p, pose) in poses.iter().enumerate() {
        for dir in [Direction::Right, Direction::Down] {
            if let Some(&q) = grid.get(&pose.cell.step(dir)) {
                let here = EdgeRef::new(p, edge_facing(dir, pose.rotation));
                let there = EdgeRef::new(q, edge_facing(dir.opposite(), poses[q].rotation));
                links[here.index()] = Some(there);
                links[there.index()] = Some(here);
            }
        }
    }
    Ok(Chromosome::from_links_unchecked(links))
}
