//! sRGB to CIE L*a*b* (D65), scaled so each channel lands in `[0, 1]`.
//!
//! L* spans `[0, 100]`; a* and b* use the conventional 8-bit range
//! `[-128, 127]`. The sRGB gamut sits well inside both.

const XN: f64 = 0.950_47;
const YN: f64 = 1.0;
const ZN: f64 = 1.088_83;

fn srgb_to_linear(c: u8) -> f64 {
    let v = c as f64 / 255.0;
    if v <= 0.040_45 {
        v / 12.92
    } else {
        libm::pow((v + 0.055) / 1.055, 2.4)
    }
}

fn lab_f(t: f64) -> f64 {
    const DELTA: f64 = 6.0 / 29.0;
    if t > DELTA * DELTA * DELTA {
        libm::cbrt(t)
    } else {
        t / (3.0 * DELTA * DELTA) + 4.0 / 29.0
    }
}

/// Unscaled L*a*b* for an 8-bit sRGB triple.
pub fn srgb8_to_lab(rgb: [u8; 3]) -> [f64; 3] {
    let r = srgb_to_linear(rgb[0]);
    let g = srgb_to_linear(rgb[1]);
    let b = srgb_to_linear(rgb[2]);
    let x = 0.412_456_4 * r + 0.357_576_1 * g + 0.180_437_5 * b;
    let y = 0.212_672_9 * r + 0.715_152_2 * g + 0.072_175_0 * b;
    let z = 0.019_333_9 * r + 0.119_192_0 * g + 0.950_304_1 * b;
    let (fx, fy, fz) = (lab_f(x / XN), lab_f(y / YN), lab_f(z / ZN));
    [116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)]
}

pub fn normalize_lab(lab: [f64; 3]) -> [f64; 3] {
    [
        (lab[0] / 100.0).clamp(0.0, 1.0),
        ((lab[1] + 128.0) / 255.0).clamp(0.0, 1.0),
        ((lab[2] + 128.0) / 255.0).clamp(0.0, 1.0),
    ]
}

pub fn srgb8_to_normalized_lab(rgb: [u8; 3]) -> [f64; 3] {
    normalize_lab(srgb8_to_lab(rgb))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: [f64; 3], b: [f64; 3], tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() < tol)
    }

    #[test]
    fn reference_colors() {
        assert!(close(srgb8_to_lab([0, 0, 0]), [0.0, 0.0, 0.0], 1e-9));
        assert!(close(srgb8_to_lab([255, 255, 255]), [100.0, 0.0, 0.0], 1e-2));
        // Published CIELAB values for pure sRGB primaries.
        assert!(close(srgb8_to_lab([255, 0, 0]), [53.24, 80.09, 67.20], 0.05));
        assert!(close(srgb8_to_lab([0, 255, 0]), [87.73, -86.18, 83.18], 0.05));
        assert!(close(srgb8_to_lab([0, 0, 255]), [32.30, 79.19, -107.86], 0.05));
    }

    #[test]
    fn normalized_range() {
        for r in (0..=255).step_by(15) {
            for g in (0..=255).step_by(15) {
                for b in (0..=255).step_by(15) {
                    let lab = srgb8_to_lab([r as u8, g as u8, b as u8]);
                    assert!(lab[1] > -128.0 && lab[1] < 127.0 && lab[2] > -128.0 && lab[2] < 127.0);
                    let n = normalize_lab(lab);
                    assert!(n.iter().all(|v| (0.0..=1.0).contains(v)));
                }
            }
        }
    }
}
