//! Tile bundles: a directory of numbered lossless tiles plus `manifest.toml`.

use std::path::Path;

use image::RgbImage;
use jigsaw_core::Piece;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::manifest::{tile_file_name, Manifest, SourceInfo, TileRecord};

pub const MANIFEST_FILE: &str = "manifest.toml";

#[derive(Debug, Clone, PartialEq)]
pub struct TileBundle {
    pub manifest: Manifest,
    /// Stored (already rotated) tiles, in piece order.
    pub tiles: Vec<RgbImage>,
}

impl TileBundle {
    pub fn tile_size(&self) -> u32 {
        self.manifest.tile_size
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        for (tile, record) in self.tiles.iter().zip(&self.manifest.tiles) {
            let path = dir.join(&record.tile_file);
            tile.save_with_format(&path, image::ImageFormat::Png).map_err(|e| Error::image(&path, e))?;
        }
        self.manifest.write(&dir.join(MANIFEST_FILE))
    }

    pub fn read(dir: &Path) -> Result<TileBundle> {
        let manifest = Manifest::read(&dir.join(MANIFEST_FILE))?;
        let k = manifest.tile_size;
        let tiles = manifest
            .tiles
            .iter()
            .map(|record| {
                let path = dir.join(&record.tile_file);
                let img = image::open(&path).map_err(|e| Error::image(&path, e))?.to_rgb8();
                if img.dimensions() != (k, k) {
                    return Err(Error::parse(&path, format!("tile is {:?}, expected {k}x{k}", img.dimensions())));
                }
                Ok(img)
            })
            .collect::<Result<_>>()?;
        Ok(TileBundle { manifest, tiles })
    }

    /// Pieces in normalized L*a*b*, as the solver sees them.
    pub fn pieces(&self) -> Result<Vec<Piece>> {
        let k = self.tile_size() as usize;
        Ok(self.tiles.iter().enumerate().map(|(i, t)| Piece::from_rgb8(i, k, t.as_raw())).collect::<jigsaw_core::Result<_>>()?)
    }

    /// SHA-256 over the tile size and every tile's pixels, in piece order.
    pub fn content_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.tile_size().to_le_bytes());
        h.update((self.tiles.len() as u64).to_le_bytes());
        for t in &self.tiles {
            h.update(t.as_raw());
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Turns `tile` counterclockwise by `degrees`.
fn turn_counterclockwise(tile: &RgbImage, degrees: u32) -> RgbImage {
    match degrees {
        0 => tile.clone(),
        90 => image::imageops::rotate270(tile),
        180 => image::imageops::rotate180(tile),
        270 => image::imageops::rotate90(tile),
        _ => unreachable!("rotation is a multiple of 90"),
    }
}

/// Turns `tile` clockwise by `degrees`.
pub fn turn_clockwise(tile: &RgbImage, degrees: u32) -> RgbImage {
    turn_counterclockwise(tile, (360 - degrees % 360) % 360)
}

/// Cuts `image` into `tile_size` squares, crops any remainder off the right and
/// bottom, turns each tile by an independent random quarter turn, and shuffles
/// them. Everything random comes from `seed`.
pub fn shred(image: &RgbImage, image_id: &str, tile_size: u32, seed: u64) -> Result<TileBundle> {
    if tile_size < 2 {
        return Err(Error::Invalid(format!("tile size must be at least 2, got {tile_size}")));
    }
    let (width, height) = image.dimensions();
    let (rows, cols) = (height / tile_size, width / tile_size);
    if rows == 0 || cols == 0 {
        return Err(Error::Invalid(format!("image {width}x{height} is smaller than one {tile_size}x{tile_size} tile")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cut = Vec::with_capacity((rows * cols) as usize);
    for row in 0..rows {
        for col in 0..cols {
            let tile = image::imageops::crop_imm(image, col * tile_size, row * tile_size, tile_size, tile_size).to_image();
            let degrees = 90 * rng.random_range(0..4u32);
            cut.push((turn_counterclockwise(&tile, degrees), row, col, degrees));
        }
    }
    cut.shuffle(&mut rng);

    let mut tiles = Vec::with_capacity(cut.len());
    let mut records = Vec::with_capacity(cut.len());
    for (piece, (tile, row, col, degrees)) in cut.into_iter().enumerate() {
        tiles.push(tile);
        records.push(TileRecord {
            tile_file: tile_file_name(piece),
            source_image_id: image_id.to_string(),
            source_row: row,
            source_col: col,
            applied_rotation: degrees,
        });
    }
    let manifest = Manifest {
        seed,
        tile_size,
        sources: vec![SourceInfo { image_id: image_id.to_string(), rows, cols, original_width: width, original_height: height }],
        tiles: records,
    };
    Ok(TileBundle { manifest, tiles })
}

/// Concatenates bundles into one mixed bag and reshuffles it.
pub fn mix(bundles: &[TileBundle], seed: u64) -> Result<TileBundle> {
    let first = bundles.first().ok_or_else(|| Error::Invalid("nothing to mix".into()))?;
    let tile_size = first.tile_size();
    let mut sources = Vec::new();
    let mut entries = Vec::new();
    for b in bundles {
        if b.tile_size() != tile_size {
            return Err(Error::Invalid(format!("tile sizes differ: {} vs {}", tile_size, b.tile_size())));
        }
        for s in &b.manifest.sources {
            if sources.iter().any(|x: &SourceInfo| x.image_id == s.image_id) {
                return Err(Error::Invalid(format!("source `{}` appears in more than one bundle", s.image_id)));
            }
            sources.push(s.clone());
        }
        entries.extend(b.tiles.iter().cloned().zip(b.manifest.tiles.iter().cloned()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    entries.shuffle(&mut rng);
    let (tiles, records): (Vec<_>, Vec<_>) = entries
        .into_iter()
        .enumerate()
        .map(|(piece, (tile, record))| (tile, TileRecord { tile_file: tile_file_name(piece), ..record }))
        .unzip();
    let bundle = TileBundle { manifest: Manifest { seed, tile_size, sources, tiles: records }, tiles };
    bundle.manifest.validate()?;
    Ok(bundle)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gradient(w: u32, h: u32) -> RgbImage {
        RgbImage::from_fn(w, h, |x, y| image::Rgb([(x * 7 % 256) as u8, (y * 5 % 256) as u8, ((x + y) % 256) as u8]))
    }

    #[test]
    fn turning_round_trips() {
        let t = gradient(4, 4);
        for d in [0, 90, 180, 270] {
            assert_eq!(turn_clockwise(&turn_counterclockwise(&t, d), d), t);
        }
        // Clockwise quarter turn: top-left goes to top-right.
        let r = turn_clockwise(&t, 90);
        assert_eq!(r.get_pixel(3, 0), t.get_pixel(0, 0));
    }

    #[test]
    fn shred_counts_and_crop() {
        let b = shred(&gradient(100, 61), "g", 20, 1).unwrap();
        assert_eq!(b.len(), 15);
        let s = &b.manifest.sources[0];
        assert_eq!((s.rows, s.cols, s.original_width, s.original_height), (3, 5, 100, 61));
        b.manifest.validate().unwrap();
    }

    #[test]
    fn shred_rejects_tiny_images() {
        assert!(shred(&gradient(10, 40), "g", 20, 1).is_err());
        assert!(shred(&gradient(10, 40), "g", 0, 1).is_err());
    }

    #[test]
    fn single_tile() {
        let b = shred(&gradient(8, 8), "g", 8, 3).unwrap();
        assert_eq!(b.len(), 1);
    }

    #[test]
    fn mix_checks_tile_size_and_ids() {
        let a = shred(&gradient(40, 40), "a", 10, 1).unwrap();
        let b = shred(&gradient(40, 40), "b", 20, 1).unwrap();
        assert!(mix(&[a.clone(), b], 1).is_err());
        assert!(mix(&[a.clone(), a.clone()], 1).is_err());
        let c = shred(&gradient(30, 20), "c", 10, 2).unwrap();
        let m = mix(&[a, c], 9).unwrap();
        assert_eq!(m.len(), 22);
        assert_eq!(m.manifest.sources.len(), 2);
    }
}
