//! The relative-relation assignment engine used by crossover.
//!
//! Pieces start detached. Each accepted relation either founds a two-piece
//! group, attaches a detached piece to a group, or merges two groups by
//! turning and shifting the smaller one as a rigid body. Every group lives in
//! its own unbounded integer frame; a relation that would make two pieces
//! share a cell is rejected without touching any state.

use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::chromosome::{chromosome_from_placement, Chromosome, Placement, Pose};
use crate::error::{invalid, Error, Result};
use crate::tile::{edge_direction, edge_facing, rotation_for, Cell, Direction, EdgeRef, RelativeRelation, Rotation};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AssignOutcome {
    Accepted,
    /// One of the edges already has a neighbour.
    RejectedEdgeTaken,
    /// Both pieces already belong to the same group.
    RejectedSameGroup,
    /// Honouring the relation would put two pieces in one cell.
    RejectedCollision,
}

impl AssignOutcome {
    pub fn is_accepted(self) -> bool {
        self == AssignOutcome::Accepted
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MergeOutcome {
    Merged(GroupId),
    Collision,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupId(usize);

/// A rigid sub-assembly on a sparse grid. Poses are held by [`AssemblyState`].
#[derive(Debug, Clone, PartialEq)]
pub struct PieceGroup {
    members: Vec<usize>,
    grid: HashMap<Cell, usize>,
    relations: Vec<RelativeRelation>,
}

impl PieceGroup {
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn occupant(&self, cell: Cell) -> Option<usize> {
        self.grid.get(&cell).copied()
    }

    /// Relations explicitly accepted into this group (implicit adjacencies excluded).
    pub fn relations(&self) -> &[RelativeRelation] {
        &self.relations
    }
}

#[derive(Debug, Clone)]
pub struct AssemblyState {
    n: usize,
    poses: Vec<Pose>,
    group_of: Vec<Option<GroupId>>,
    groups: Vec<Option<PieceGroup>>,
    assigned: Vec<bool>,
    accepted: usize,
    live_groups: usize,
    scratch: Vec<Cell>,
}

impl AssemblyState {
    pub fn new(n: usize) -> AssemblyState {
        AssemblyState {
            n,
            poses: vec![Pose::default(); n],
            group_of: vec![None; n],
            groups: Vec::new(),
            assigned: vec![false; 4 * n],
            accepted: 0,
            live_groups: 0,
            scratch: Vec::new(),
        }
    }

    pub fn piece_count(&self) -> usize {
        self.n
    }

    pub fn accepted_count(&self) -> usize {
        self.accepted
    }

    pub fn is_complete(&self) -> bool {
        self.accepted + 1 >= self.n
    }

    pub fn group_count(&self) -> usize {
        self.live_groups
    }

    pub fn group_of(&self, piece: usize) -> Option<GroupId> {
        self.group_of[piece]
    }

    pub fn group(&self, id: GroupId) -> Option<&PieceGroup> {
        self.groups.get(id.0)?.as_ref()
    }

    pub fn groups(&self) -> impl Iterator<Item = (GroupId, &PieceGroup)> {
        self.groups.iter().enumerate().filter_map(|(i, g)| g.as_ref().map(|g| (GroupId(i), g)))
    }

    /// Pose within the piece's group frame; `None` while detached.
    pub fn pose(&self, piece: usize) -> Option<Pose> {
        self.group_of[piece].map(|_| self.poses[piece])
    }

    /// Whether `edge` already has a neighbour (explicitly or implicitly).
    pub fn is_assigned(&self, edge: EdgeRef) -> bool {
        self.assigned[edge.index()]
    }

    pub fn try_assign(&mut self, rel: RelativeRelation) -> Result<AssignOutcome> {
        let (e1, e2) = (rel.first(), rel.second());
        if e1.piece >= self.n || e2.piece >= self.n {
            return Err(invalid!("relation {rel} is out of range for {} pieces", self.n));
        }
        if e1.piece == e2.piece {
            return Err(invalid!("relation {rel} joins a piece to itself"));
        }
        if self.assigned[e1.index()] || self.assigned[e2.index()] {
            return Ok(AssignOutcome::RejectedEdgeTaken);
        }
        match (self.group_of[e1.piece], self.group_of[e2.piece]) {
            (None, None) => {
                self.found_group(rel);
                Ok(AssignOutcome::Accepted)
            }
            (Some(g), None) => Ok(self.attach(g, e1, e2, rel)),
            (None, Some(g)) => Ok(self.attach(g, e2, e1, rel)),
            (Some(g1), Some(g2)) if g1 == g2 => Ok(AssignOutcome::RejectedSameGroup),
            (Some(g1), Some(g2)) => {
                let (big, small) = if self.group_len(g2) > self.group_len(g1) { (g2, g1) } else { (g1, g2) };
                Ok(match self.merge_groups(big, small, rel)? {
                    MergeOutcome::Merged(_) => AssignOutcome::Accepted,
                    MergeOutcome::Collision => AssignOutcome::RejectedCollision,
                })
            }
        }
    }

    fn group_len(&self, id: GroupId) -> usize {
        self.groups[id.0].as_ref().map_or(0, |g| g.len())
    }

    fn found_group(&mut self, rel: RelativeRelation) {
        let (e1, e2) = (rel.first(), rel.second());
        let dir = edge_direction(e1.edge, Rotation::R0);
        let first = Pose::new(Cell::default(), Rotation::R0);
        let second = Pose::new(Cell::default().step(dir), rotation_for(e2.edge, dir.opposite()));
        let id = GroupId(self.groups.len());
        let mut grid = HashMap::new();
        grid.insert(first.cell, e1.piece);
        grid.insert(second.cell, e2.piece);
        self.groups.push(Some(PieceGroup { members: vec![e1.piece, e2.piece], grid, relations: vec![rel] }));
        self.poses[e1.piece] = first;
        self.poses[e2.piece] = second;
        self.group_of[e1.piece] = Some(id);
        self.group_of[e2.piece] = Some(id);
        self.assigned[e1.index()] = true;
        self.assigned[e2.index()] = true;
        self.accepted += 1;
        self.live_groups += 1;
    }

    fn attach(&mut self, id: GroupId, anchor: EdgeRef, incoming: EdgeRef, rel: RelativeRelation) -> AssignOutcome {
        let anchor_pose = self.poses[anchor.piece];
        let dir = edge_direction(anchor.edge, anchor_pose.rotation);
        let cell = anchor_pose.cell.step(dir);
        let group = self.groups[id.0].as_mut().expect("live group");
        if group.grid.contains_key(&cell) {
            return AssignOutcome::RejectedCollision;
        }
        group.grid.insert(cell, incoming.piece);
        group.members.push(incoming.piece);
        group.relations.push(rel);
        self.poses[incoming.piece] = Pose::new(cell, rotation_for(incoming.edge, dir.opposite()));
        self.group_of[incoming.piece] = Some(id);
        self.seal(id, incoming.piece);
        self.accepted += 1;
        AssignOutcome::Accepted
    }

    /// Marks every edge of `piece` that now touches a neighbour, and the neighbour's facing edge.
    fn seal(&mut self, id: GroupId, piece: usize) {
        let group = self.groups[id.0].as_ref().expect("live group");
        let pose = self.poses[piece];
        for dir in Direction::ALL {
            if let Some(&q) = group.grid.get(&pose.cell.step(dir)) {
                self.assigned[EdgeRef::new(piece, edge_facing(dir, pose.rotation)).index()] = true;
                self.assigned[EdgeRef::new(q, edge_facing(dir.opposite(), self.poses[q].rotation)).index()] = true;
            }
        }
    }

    /// Moves `small` into `big` so the two edges of `rel` face each other.
    ///
    /// `small` is turned by the unique quarter-turn count that makes its edge
    /// face the anchor edge, shifted next to the anchor piece, and inserted.
    /// On any cell conflict nothing changes.
    pub fn merge_groups(&mut self, big: GroupId, small: GroupId, rel: RelativeRelation) -> Result<MergeOutcome> {
        if big == small {
            return Err(invalid!("cannot merge a group with itself"));
        }
        let (Some(big_group), Some(small_group)) = (self.group(big), self.group(small)) else {
            return Err(invalid!("merge of a group that does not exist"));
        };
        if small_group.len() > big_group.len() {
            return Err(invalid!("merge source ({}) is larger than target ({})", small_group.len(), big_group.len()));
        }
        let (e1, e2) = (rel.first(), rel.second());
        let (anchor, mover) = match (self.group_of[e1.piece], self.group_of[e2.piece]) {
            (Some(a), Some(b)) if a == big && b == small => (e1, e2),
            (Some(a), Some(b)) if a == small && b == big => (e2, e1),
            _ => return Err(invalid!("relation {rel} does not span the two groups")),
        };

        let anchor_pose = self.poses[anchor.piece];
        let mover_pose = self.poses[mover.piece];
        let dir = edge_direction(anchor.edge, anchor_pose.rotation);
        let target = anchor_pose.cell.step(dir);
        let turn = Rotation::from_quarter_turns(
            rotation_for(mover.edge, dir.opposite()).quarter_turns() as i64 - mover_pose.rotation.quarter_turns() as i64,
        );

        let big_group = self.groups[big.0].as_ref().expect("checked above");
        let small_group = self.groups[small.0].as_ref().expect("checked above");
        self.scratch.clear();
        for &m in &small_group.members {
            let cell = target + turn.apply(self.poses[m].cell - mover_pose.cell);
            if big_group.grid.contains_key(&cell) {
                return Ok(MergeOutcome::Collision);
            }
            self.scratch.push(cell);
        }

        let small_group = self.groups[small.0].take().expect("checked above");
        for (&m, &cell) in small_group.members.iter().zip(&self.scratch) {
            self.poses[m] = Pose::new(cell, self.poses[m].rotation + turn);
            self.group_of[m] = Some(big);
        }
        let big_group = self.groups[big.0].as_mut().expect("checked above");
        for (&m, &cell) in small_group.members.iter().zip(&self.scratch) {
            big_group.grid.insert(cell, m);
        }
        big_group.members.extend_from_slice(&small_group.members);
        big_group.relations.extend_from_slice(&small_group.relations);
        big_group.relations.push(rel);
        for &m in &small_group.members {
            self.seal(big, m);
        }
        self.accepted += 1;
        self.live_groups -= 1;

        #[cfg(debug_assertions)]
        for r in small_group.relations.iter().chain(core::iter::once(&rel)) {
            debug_assert!(self.satisfied(r), "relation {r} broken by merge");
        }
        Ok(MergeOutcome::Merged(big))
    }

    /// Whether both pieces of `rel` are posed so its edges face each other.
    pub fn satisfied(&self, rel: &RelativeRelation) -> bool {
        let (a, b) = (rel.first(), rel.second());
        match (self.group_of[a.piece], self.group_of[b.piece]) {
            (Some(x), Some(y)) if x == y => {
                let (pa, pb) = (self.poses[a.piece], self.poses[b.piece]);
                pa.across(a.edge) == pb.cell && pb.across(b.edge) == pa.cell
            }
            _ => false,
        }
    }

    /// Scans the finished assembly and returns the full chromosome, implicit
    /// adjacencies included, with the placement shifted to non-negative cells.
    pub fn finalize(&self) -> Result<(Chromosome, Placement)> {
        if !self.is_complete() {
            return Err(Error::State(alloc::format!(
                "assembly incomplete: {} of {} assignments",
                self.accepted,
                self.n.saturating_sub(1)
            )));
        }
        if self.n == 0 {
            return Err(invalid!("no pieces"));
        }
        let placement = Placement::new(self.poses.clone()).normalized();
        let chromosome = chromosome_from_placement(&placement, self.n)?;
        Ok((chromosome, placement))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tile::EdgeLabel::{self, *};

    fn rel(p: usize, e: EdgeLabel, q: usize, f: EdgeLabel) -> RelativeRelation {
        RelativeRelation::new(EdgeRef::new(p, e), EdgeRef::new(q, f)).unwrap()
    }

    #[test]
    fn first_assignment_founds_group() {
        let mut s = AssemblyState::new(8);
        assert_eq!(s.try_assign(rel(4, B, 7, C)).unwrap(), AssignOutcome::Accepted);
        let g = s.group_of(4).unwrap();
        assert_eq!(s.group_of(7), Some(g));
        let (p4, p7) = (s.pose(4).unwrap(), s.pose(7).unwrap());
        assert_eq!(p4.across(B), p7.cell);
        assert_eq!(p7.across(C), p4.cell);
        assert_eq!(s.accepted_count(), 1);
        assert!(s.is_assigned(EdgeRef::new(4, B)) && s.is_assigned(EdgeRef::new(7, C)));
    }

    #[test]
    fn taken_edge_and_same_group() {
        let mut s = AssemblyState::new(4);
        s.try_assign(rel(0, B, 1, D)).unwrap();
        assert_eq!(s.try_assign(rel(0, B, 2, D)).unwrap(), AssignOutcome::RejectedEdgeTaken);
        s.try_assign(rel(1, B, 2, D)).unwrap();
        assert_eq!(s.try_assign(rel(0, A, 2, A)).unwrap(), AssignOutcome::RejectedSameGroup);
        assert_eq!(s.accepted_count(), 2);
    }

    #[test]
    fn self_relation_is_invalid() {
        let mut s = AssemblyState::new(2);
        let bad = RelativeRelation::new_unchecked(EdgeRef::new(0, A), EdgeRef::new(0, B));
        assert!(s.try_assign(bad).is_err());
        assert!(s.try_assign(rel(0, A, 5, B)).is_err());
    }

    #[test]
    fn attach_detects_collision() {
        let mut s = AssemblyState::new(5);
        s.try_assign(rel(0, B, 1, D)).unwrap();
        s.try_assign(rel(0, C, 2, A)).unwrap();
        assert_eq!(s.try_assign(rel(2, B, 3, D)).unwrap(), AssignOutcome::Accepted);
        // 3 now sits under 1, implicitly sealing 1.c and 3.a.
        assert!(s.is_assigned(EdgeRef::new(1, C)) && s.is_assigned(EdgeRef::new(3, A)));
        assert_eq!(s.try_assign(rel(1, C, 4, A)).unwrap(), AssignOutcome::RejectedEdgeTaken);
    }

    #[test]
    fn finalize_records_implicit_relation() {
        // L-tromino 0,1,2 completed by 3 with one explicit relation.
        let mut s = AssemblyState::new(4);
        s.try_assign(rel(0, B, 1, D)).unwrap();
        s.try_assign(rel(0, C, 2, A)).unwrap();
        assert!(s.finalize().is_err());
        s.try_assign(rel(2, B, 3, D)).unwrap();
        let (c, placement) = s.finalize().unwrap();
        assert!(c.contains(&rel(1, C, 3, A)));
        assert_eq!(c.relation_count(), 4);
        assert_eq!(placement.bounding_box(), (2, 2));
        c.validate().unwrap();
    }

    #[test]
    fn chain_has_no_extras() {
        let n = 6;
        let mut s = AssemblyState::new(n);
        for i in 0..n - 1 {
            assert!(s.try_assign(rel(i, B, i + 1, D)).unwrap().is_accepted());
        }
        let (c, placement) = s.finalize().unwrap();
        assert_eq!(c.relation_count(), n - 1);
        assert_eq!(placement.bounding_box(), (1, n));
    }

    #[test]
    fn dominoes_merge_into_block() {
        let mut s = AssemblyState::new(4);
        s.try_assign(rel(0, B, 1, D)).unwrap();
        // Second domino built rotated: 3 is *above* 2 via 2.a--3.c, both unrotated.
        s.try_assign(rel(2, A, 3, C)).unwrap();
        assert_eq!(s.group_count(), 2);
        // Put 2 under 0: requires turning the vertical domino so that 3 ends under 1.
        assert_eq!(s.try_assign(rel(0, C, 2, D)).unwrap(), AssignOutcome::Accepted);
        assert_eq!(s.group_count(), 1);
        let (c, placement) = s.finalize().unwrap();
        assert_eq!(placement.bounding_box(), (2, 2));
        assert_eq!(c.relation_count(), 4);
        assert_eq!(s.group(s.group_of(0).unwrap()).unwrap().len(), 4);
    }

    #[test]
    fn colliding_merge_leaves_state_untouched() {
        // A bar 0-1-2 and an L: 3-4 with 5 on top of 4.
        let mut s = AssemblyState::new(6);
        s.try_assign(rel(0, B, 1, D)).unwrap();
        s.try_assign(rel(1, B, 2, D)).unwrap();
        s.try_assign(rel(3, B, 4, D)).unwrap();
        s.try_assign(rel(4, A, 5, C)).unwrap();
        let before = s.clone();
        // Hanging 3 under 0 puts 4 under 1 and 5 on top of 1.
        assert_eq!(s.try_assign(rel(0, C, 3, A)).unwrap(), AssignOutcome::RejectedCollision);
        assert_eq!(s.group_count(), before.group_count());
        assert_eq!(s.accepted_count(), before.accepted_count());
        for p in 0..6 {
            assert_eq!(s.pose(p), before.pose(p));
            assert_eq!(s.group_of(p), before.group_of(p));
        }
        for u in 0..24 {
            assert_eq!(s.is_assigned(EdgeRef::from_index(u)), before.is_assigned(EdgeRef::from_index(u)));
        }
    }

    #[test]
    fn merge_preconditions() {
        let mut s = AssemblyState::new(5);
        s.try_assign(rel(0, B, 1, D)).unwrap();
        s.try_assign(rel(1, B, 2, D)).unwrap();
        s.try_assign(rel(3, B, 4, D)).unwrap();
        let big = s.group_of(0).unwrap();
        let small = s.group_of(3).unwrap();
        assert!(s.merge_groups(small, big, rel(0, A, 3, A)).is_err());
        assert!(s.merge_groups(big, small, rel(0, A, 1, A)).is_err());
        assert!(s.merge_groups(big, big, rel(0, A, 3, A)).is_err());
        assert_eq!(s.merge_groups(big, small, rel(0, A, 3, C)).unwrap(), MergeOutcome::Merged(big));
    }
}
