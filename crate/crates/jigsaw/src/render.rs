use image::{Rgb, RgbImage};
use jigsaw_core::Placement;

use crate::bundle::{turn_clockwise, TileBundle};
use crate::error::{Error, Result};

/// Paints every tile at its cell, turned by its pose, on a canvas the size of
/// the placement's bounding box. Empty cells get `background`.
pub fn render(bundle: &TileBundle, placement: &Placement, background: Rgb<u8>) -> Result<RgbImage> {
    if placement.len() != bundle.len() {
        return Err(Error::Invalid(format!("placement has {} pieces, bundle has {}", placement.len(), bundle.len())));
    }
    let k = bundle.tile_size();
    let placement = placement.normalized();
    let (rows, cols) = placement.bounding_box();
    let mut canvas = RgbImage::from_pixel(cols as u32 * k, rows as u32 * k, background);
    for (tile, pose) in bundle.tiles.iter().zip(placement.poses()) {
        let turned = turn_clockwise(tile, pose.rotation.degrees());
        image::imageops::replace(&mut canvas, &turned, pose.cell.col as i64 * k as i64, pose.cell.row as i64 * k as i64);
    }
    Ok(canvas)
}

/// Nearest-neighbour shrink so the image holds at most `max_pixels` pixels.
pub fn downscale_to_budget(image: RgbImage, max_pixels: u64) -> RgbImage {
    let (w, h) = image.dimensions();
    let pixels = w as u64 * h as u64;
    if max_pixels == 0 || pixels <= max_pixels {
        return image;
    }
    let scale = (max_pixels as f64 / pixels as f64).sqrt();
    let nw = ((w as f64 * scale).floor() as u32).max(1);
    let nh = ((h as f64 * scale).floor() as u32).max(1);
    image::imageops::resize(&image, nw, nh, image::imageops::FilterType::Nearest)
}

pub fn parse_color(s: &str) -> std::result::Result<Rgb<u8>, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected R,G,B, got `{s}`"));
    }
    let mut c = [0u8; 3];
    for (slot, p) in c.iter_mut().zip(parts) {
        *slot = p.parse().map_err(|_| format!("bad channel `{p}` in `{s}`"))?;
    }
    Ok(Rgb(c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budget() {
        let img = RgbImage::new(200, 100);
        assert_eq!(downscale_to_budget(img.clone(), 0).dimensions(), (200, 100));
        assert_eq!(downscale_to_budget(img.clone(), 20_000).dimensions(), (200, 100));
        let small = downscale_to_budget(img, 5_000);
        assert!(small.width() as u64 * small.height() as u64 <= 5_000);
        assert_eq!(small.dimensions(), (100, 50));
    }

    #[test]
    fn colors() {
        assert_eq!(parse_color("1, 2,3").unwrap(), Rgb([1, 2, 3]));
        assert!(parse_color("1,2").is_err());
        assert!(parse_color("1,2,300").is_err());
    }
}
