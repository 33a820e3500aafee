//! Pieces, edge labels, and the rotation arithmetic every other module leans on.
//!
//! Edge labels run clockwise over the *stored* pixels: `a` is the top row,
//! `b` the right column, `c` the bottom row, `d` the left column. A piece
//! placed with rotation `r` has its stored pixels turned clockwise by `r`.

use alloc::vec::Vec;
use core::fmt;
use core::ops::Add;

use crate::color;
use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum EdgeLabel {
    A = 0,
    B = 1,
    C = 2,
    D = 3,
}

impl EdgeLabel {
    pub const ALL: [EdgeLabel; 4] = [EdgeLabel::A, EdgeLabel::B, EdgeLabel::C, EdgeLabel::D];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> EdgeLabel {
        Self::ALL[index & 3]
    }

    pub fn as_char(self) -> char {
        (b'a' + self as u8) as char
    }

    pub fn from_char(c: char) -> Option<EdgeLabel> {
        match c {
            'a' => Some(EdgeLabel::A),
            'b' => Some(EdgeLabel::B),
            'c' => Some(EdgeLabel::C),
            'd' => Some(EdgeLabel::D),
            _ => None,
        }
    }
}

impl fmt::Display for EdgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Compass direction on the assembly grid. Rows grow downward.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Direction {
    Up = 0,
    Right = 1,
    Down = 2,
    Left = 3,
}

impl Direction {
    pub const ALL: [Direction; 4] = [Direction::Up, Direction::Right, Direction::Down, Direction::Left];

    pub fn from_index(index: usize) -> Direction {
        Self::ALL[index & 3]
    }

    pub fn opposite(self) -> Direction {
        Self::from_index(self as usize + 2)
    }

    /// One quarter turn clockwise.
    pub fn rotate90(self) -> Direction {
        Self::from_index(self as usize + 1)
    }

    pub fn offset(self) -> Cell {
        match self {
            Direction::Up => Cell::new(-1, 0),
            Direction::Right => Cell::new(0, 1),
            Direction::Down => Cell::new(1, 0),
            Direction::Left => Cell::new(0, -1),
        }
    }
}

/// Clockwise rotation in quarter turns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rotation(u8);

impl Rotation {
    pub const R0: Rotation = Rotation(0);
    pub const R90: Rotation = Rotation(1);
    pub const R180: Rotation = Rotation(2);
    pub const R270: Rotation = Rotation(3);
    pub const ALL: [Rotation; 4] = [Self::R0, Self::R90, Self::R180, Self::R270];

    pub fn from_quarter_turns(turns: i64) -> Rotation {
        Rotation(turns.rem_euclid(4) as u8)
    }

    pub fn from_degrees(degrees: u32) -> Option<Rotation> {
        match degrees {
            0 | 90 | 180 | 270 => Some(Rotation((degrees / 90) as u8)),
            _ => None,
        }
    }

    pub fn quarter_turns(self) -> u8 {
        self.0
    }

    pub fn degrees(self) -> u32 {
        self.0 as u32 * 90
    }

    pub fn inverse(self) -> Rotation {
        Rotation((4 - self.0) & 3)
    }

    /// Rotates a grid offset clockwise about the origin.
    pub fn apply(self, cell: Cell) -> Cell {
        let mut c = cell;
        for _ in 0..self.0 {
            c = Cell::new(c.col, -c.row);
        }
        c
    }
}

impl Add for Rotation {
    type Output = Rotation;

    fn add(self, rhs: Rotation) -> Rotation {
        Rotation((self.0 + rhs.0) & 3)
    }
}

/// Direction that `edge` faces once the stored pixels are turned clockwise by `rotation`.
pub fn edge_direction(edge: EdgeLabel, rotation: Rotation) -> Direction {
    Direction::from_index(edge as usize + rotation.0 as usize)
}

/// Inverse of [`edge_direction`]: which label ends up facing `direction`.
pub fn edge_facing(direction: Direction, rotation: Rotation) -> EdgeLabel {
    EdgeLabel::from_index(direction as usize + 4 - rotation.0 as usize)
}

/// Rotation that makes `edge` face `direction`.
pub fn rotation_for(edge: EdgeLabel, direction: Direction) -> Rotation {
    Rotation::from_quarter_turns(direction as i64 - edge as i64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Cell {
    pub row: i32,
    pub col: i32,
}

impl Cell {
    pub const fn new(row: i32, col: i32) -> Cell {
        Cell { row, col }
    }

    pub fn step(self, direction: Direction) -> Cell {
        self + direction.offset()
    }
}

impl Add for Cell {
    type Output = Cell;

    fn add(self, rhs: Cell) -> Cell {
        Cell::new(self.row + rhs.row, self.col + rhs.col)
    }
}

impl core::ops::Sub for Cell {
    type Output = Cell;

    fn sub(self, rhs: Cell) -> Cell {
        Cell::new(self.row - rhs.row, self.col - rhs.col)
    }
}

/// One edge of one piece.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeRef {
    pub piece: usize,
    pub edge: EdgeLabel,
}

impl EdgeRef {
    pub fn new(piece: usize, edge: EdgeLabel) -> EdgeRef {
        EdgeRef { piece, edge }
    }

    /// Dense index `4 * piece + label`; orders edges by (piece, label).
    pub fn index(self) -> usize {
        self.piece * 4 + self.edge as usize
    }

    pub fn from_index(index: usize) -> EdgeRef {
        EdgeRef { piece: index / 4, edge: EdgeLabel::from_index(index) }
    }
}

impl fmt::Display for EdgeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.piece, self.edge)
    }
}

impl core::str::FromStr for EdgeRef {
    type Err = Error;

    fn from_str(s: &str) -> Result<EdgeRef> {
        let (piece, label) = s.split_once('.').ok_or_else(|| invalid!("edge `{s}` is not <piece>.<label>"))?;
        let piece = piece.parse().map_err(|_| invalid!("bad piece id in `{s}`"))?;
        let mut chars = label.chars();
        let edge = match (chars.next(), chars.next()) {
            (Some(c), None) => EdgeLabel::from_char(c),
            _ => None,
        }
        .ok_or_else(|| invalid!("bad edge label in `{s}`"))?;
        Ok(EdgeRef { piece, edge })
    }
}

/// Unordered statement that two edges of distinct pieces abut.
///
/// Stored canonically with `first < second`, so `(A.e1, B.e2)` and
/// `(B.e2, A.e1)` compare equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RelativeRelation {
    first: EdgeRef,
    second: EdgeRef,
}

impl RelativeRelation {
    pub fn new(a: EdgeRef, b: EdgeRef) -> Result<RelativeRelation> {
        if a.piece == b.piece {
            return Err(invalid!("relation {a}--{b} joins a piece to itself"));
        }
        Ok(Self::new_unchecked(a, b))
    }

    pub(crate) fn new_unchecked(a: EdgeRef, b: EdgeRef) -> RelativeRelation {
        if a <= b {
            RelativeRelation { first: a, second: b }
        } else {
            RelativeRelation { first: b, second: a }
        }
    }

    pub fn first(&self) -> EdgeRef {
        self.first
    }

    pub fn second(&self) -> EdgeRef {
        self.second
    }
}

impl fmt::Display for RelativeRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.first, self.second)
    }
}

/// A `K x K` tile in normalized L*a*b*, every channel in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Piece {
    id: usize,
    side: usize,
    pixels: Vec<[f64; 3]>,
}

impl Piece {
    /// `pixels` are row-major, `side * side` entries.
    pub fn new(id: usize, side: usize, pixels: Vec<[f64; 3]>) -> Result<Piece> {
        if side < 2 {
            return Err(invalid!("tile side must be at least 2, got {side}"));
        }
        if pixels.len() != side * side {
            return Err(invalid!("piece {id}: expected {} pixels, got {}", side * side, pixels.len()));
        }
        if pixels.iter().flatten().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(invalid!("piece {id}: channel value outside [0, 1]"));
        }
        Ok(Piece { id, side, pixels })
    }

    /// Converts interleaved 8-bit sRGB into a normalized L*a*b* piece.
    pub fn from_rgb8(id: usize, side: usize, rgb: &[u8]) -> Result<Piece> {
        if rgb.len() != side * side * 3 {
            return Err(invalid!("piece {id}: expected {} bytes, got {}", side * side * 3, rgb.len()));
        }
        let pixels = rgb.chunks_exact(3).map(|p| color::srgb8_to_normalized_lab([p[0], p[1], p[2]])).collect();
        Piece::new(id, side, pixels)
    }

    pub fn id(&self) -> usize {
        self.id
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn pixels(&self) -> &[[f64; 3]] {
        &self.pixels
    }

    pub fn pixel(&self, row: usize, col: usize) -> [f64; 3] {
        self.pixels[row * self.side + col]
    }

    /// Boundary pixels of `edge`, walking clockwise around the piece.
    pub fn strip_clockwise(&self, edge: EdgeLabel) -> impl Iterator<Item = [f64; 3]> + '_ {
        let k = self.side;
        (0..k).map(move |i| match edge {
            EdgeLabel::A => self.pixel(0, i),
            EdgeLabel::B => self.pixel(i, k - 1),
            EdgeLabel::C => self.pixel(k - 1, k - 1 - i),
            EdgeLabel::D => self.pixel(k - 1 - i, 0),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn direction_table() {
        assert_eq!(edge_direction(EdgeLabel::B, Rotation::R0), Direction::Right);
        assert_eq!(edge_direction(EdgeLabel::B, Rotation::R90), Direction::Down);
        assert_eq!(edge_direction(EdgeLabel::A, Rotation::R270), Direction::Left);
        for e in EdgeLabel::ALL {
            for r in Rotation::ALL {
                let d = edge_direction(e, r);
                assert_eq!(edge_facing(d, r), e);
                assert_eq!(rotation_for(e, d), r);
                let prev = Rotation::from_quarter_turns(r.quarter_turns() as i64 - 1);
                assert_eq!(d, edge_direction(e, prev).rotate90());
            }
        }
    }

    #[test]
    fn rotation_moves_offsets_clockwise() {
        for d in Direction::ALL {
            assert_eq!(Rotation::R90.apply(d.offset()), d.rotate90().offset());
        }
        assert_eq!(Rotation::R180.apply(Cell::new(2, 3)), Cell::new(-2, -3));
    }

    #[test]
    fn relation_is_unordered() {
        let x = EdgeRef::new(4, EdgeLabel::B);
        let y = EdgeRef::new(7, EdgeLabel::C);
        assert_eq!(RelativeRelation::new(x, y).unwrap(), RelativeRelation::new(y, x).unwrap());
        assert!(RelativeRelation::new(x, EdgeRef::new(4, EdgeLabel::A)).is_err());
    }

    #[test]
    fn edge_ref_parses() {
        let e: EdgeRef = "12.c".parse().unwrap();
        assert_eq!(e, EdgeRef::new(12, EdgeLabel::C));
        assert_eq!(alloc::format!("{e}"), "12.c");
        assert!("12.e".parse::<EdgeRef>().is_err());
        assert!("x.a".parse::<EdgeRef>().is_err());
        assert!("3.ab".parse::<EdgeRef>().is_err());
    }

    #[test]
    fn piece_validation() {
        assert!(Piece::new(0, 1, alloc::vec![[0.0; 3]]).is_err());
        assert!(Piece::new(0, 2, alloc::vec![[0.0; 3]; 3]).is_err());
        assert!(Piece::new(0, 2, alloc::vec![[1.5, 0.0, 0.0]; 4]).is_err());
        assert!(Piece::new(0, 2, alloc::vec![[0.5; 3]; 4]).is_ok());
    }

    #[test]
    fn clockwise_strips() {
        // 2x2 with distinct L values: 0 1 / 2 3
        let px = (0..4).map(|v| [v as f64 / 4.0, 0.0, 0.0]).collect();
        let p = Piece::new(0, 2, px).unwrap();
        let l = |e| p.strip_clockwise(e).map(|c| (c[0] * 4.0) as u8).collect::<Vec<_>>();
        assert_eq!(l(EdgeLabel::A), [0, 1]);
        assert_eq!(l(EdgeLabel::B), [1, 3]);
        assert_eq!(l(EdgeLabel::C), [3, 2]);
        assert_eq!(l(EdgeLabel::D), [2, 0]);
    }
}
