//! Binary cache of a materialized compatibility table.
//!
//! Layout, little endian: magic `JGTC`, u32 version, u64 piece count, u32 tile
//! side, u8 mode (0 materialized, 1 on demand), u64 value count, then that many
//! f64 values. On-demand tables store no values.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use jigsaw_core::{CompatibilityTable, Piece, TableMode, TableOptions};

use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"JGTC";
const VERSION: u32 = 1;

pub fn cache_path(dir: &Path, content_hash: &str) -> PathBuf {
    dir.join(format!("{content_hash}.jgtc"))
}

pub fn write(path: &Path, table: &CompatibilityTable) -> Result<()> {
    let values = table.materialized_values().unwrap_or(&[]);
    let mut buf = Vec::with_capacity(29 + 8 * values.len());
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&VERSION.to_le_bytes());
    buf.extend_from_slice(&(table.piece_count() as u64).to_le_bytes());
    buf.extend_from_slice(&(table.side() as u32).to_le_bytes());
    buf.push(match table.mode() {
        TableMode::Materialized => 0,
        TableMode::OnDemand => 1,
    });
    buf.extend_from_slice(&(values.len() as u64).to_le_bytes());
    for v in values {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    let mut f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(&buf).map_err(|e| Error::io(path, e))
}

/// Loads a cached table for `pieces`. Returns `Ok(None)` when the file is
/// missing, describes another puzzle, or holds no values.
pub fn read(path: &Path, pieces: &[Piece]) -> Result<Option<CompatibilityTable>> {
    let mut f = match std::fs::File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(Error::io(path, e)),
    };
    let mut buf = Vec::new();
    f.read_to_end(&mut buf).map_err(|e| Error::io(path, e))?;
    if buf.len() < 29 || &buf[..4] != MAGIC {
        return Err(Error::parse(path, "not a table cache"));
    }
    let u32_at = |o: usize| u32::from_le_bytes(buf[o..o + 4].try_into().unwrap());
    let u64_at = |o: usize| u64::from_le_bytes(buf[o..o + 8].try_into().unwrap());
    if u32_at(4) != VERSION {
        return Err(Error::parse(path, format!("unsupported cache version {}", u32_at(4))));
    }
    let (n, side, mode, count) = (u64_at(8), u32_at(16), buf[20], u64_at(21));
    if n != pieces.len() as u64 || pieces.first().map_or(true, |p| p.side() as u32 != side) || mode != 0 {
        return Ok(None);
    }
    let body = &buf[29..];
    if body.len() as u64 != count * 8 {
        return Err(Error::parse(path, "truncated table cache"));
    }
    let values = body.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
    Ok(Some(CompatibilityTable::from_materialized_values(pieces, values)?))
}

/// Reads the cache if it matches, otherwise builds the table and, when it is
/// materialized, writes it back.
pub fn load_or_build(path: &Path, pieces: &[Piece], options: TableOptions) -> Result<CompatibilityTable> {
    if options.resolve(pieces.len()) == TableMode::Materialized {
        if let Some(t) = read(path, pieces)? {
            log::info!("loaded compatibility table from {}", path.display());
            return Ok(t);
        }
    }
    let table = CompatibilityTable::build_with(pieces, options)?;
    if table.mode() == TableMode::Materialized {
        write(path, &table)?;
    }
    Ok(table)
}
