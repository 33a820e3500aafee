//! Genetic-algorithm solver for square-piece jigsaw puzzles whose dimensions,
//! piece positions and piece orientations are all unknown.
//!
//! A candidate solution never stores absolute positions. It records, for every
//! piece edge, which edge of which other piece abuts it (or nothing). Crossover
//! rebuilds children by replaying such relative relations on a sparse grid of
//! rigid piece groups, so correctly assembled segments survive translation and
//! rotation from parent to child.
//!
//! The crate is `no_std` (with `alloc`). The default `std` feature enables a
//! memo cache for on-demand compatibility tables; `parallel` spreads table
//! construction, fitness evaluation and crossover over a rayon pool.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod assembly;
pub mod chromosome;
pub mod color;
pub mod compat;
pub mod error;
pub mod eval;
pub mod ga;
mod par;
pub mod tile;

pub use assembly::{AssemblyState, AssignOutcome, GroupId, PieceGroup};
pub use chromosome::{chromosome_from_placement, Chromosome, Placement, Pose};
pub use compat::{dissimilarity, CompatibilityTable, TableMode, TableOptions};
pub use error::{Error, Result};
pub use eval::{ground_truth_relations, score, Metrics, SourceMetrics, SourceTruth, TileOrigin};
pub use ga::{evolve, evolve_with_table, GaConfig, GenerationReport, Solution};
pub use tile::{edge_direction, Cell, Direction, EdgeLabel, EdgeRef, Piece, RelativeRelation, Rotation};
