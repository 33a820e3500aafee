//! File formats, shredding, rendering and the table cache around `jigsaw-core`.

pub mod bundle;
pub mod error;
pub mod manifest;
pub mod metrics;
pub mod record;
pub mod render;
pub mod solution;
pub mod table_cache;

pub use bundle::{mix, shred, TileBundle};
pub use error::{Error, Result};
pub use manifest::Manifest;
pub use solution::SolutionDoc;
