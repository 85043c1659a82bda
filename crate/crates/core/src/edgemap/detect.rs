//! Fallback gradient-threshold edge detector for inputs without a
//! precomputed edge map.

use image::GrayImage;

use super::EdgeMap;
use crate::error::{Error, Result};

/// Central-difference gradient magnitude, thresholded and thinned by
/// non-maximum suppression along the quantized gradient direction.
pub fn detect_edges(image: &GrayImage, threshold: f64) -> Result<EdgeMap> {
    if threshold.is_nan() || threshold <= 0.0 {
        return Err(Error::InvalidParameter(format!("threshold must be > 0, got {threshold}")));
    }
    let (w, h) = (image.width() as usize, image.height() as usize);
    if w < 3 || h < 3 {
        return Err(Error::InvalidParameter(format!("image must be at least 3x3 for edge detection, got {w}x{h}")));
    }
    let at = |x: usize, y: usize| f64::from(image.get_pixel(x as u32, y as u32)[0]);
    let mut gx = vec![0.0; w * h];
    let mut gy = vec![0.0; w * h];
    let mut mag = vec![0.0; w * h];
    for y in 1..h - 1 {
        for x in 1..w - 1 {
            let i = y * w + x;
            gx[i] = (at(x + 1, y) - at(x - 1, y)) / 2.0;
            gy[i] = (at(x, y + 1) - at(x, y - 1)) / 2.0;
            mag[i] = gx[i].hypot(gy[i]);
        }
    }
    let mut mask = vec![false; w * h];
    for y in 1..h - 1 {
        for x in 1..w - 1 {
            let i = y * w + x;
            let m = mag[i];
            if m < threshold {
                continue;
            }
            let (dx, dy) = quantize(gx[i], gy[i]);
            let before = mag[((y as i64 - dy) as usize) * w + (x as i64 - dx) as usize];
            let after = mag[((y as i64 + dy) as usize) * w + (x as i64 + dx) as usize];
            // Strict on one side so a two-pixel plateau keeps exactly one pixel.
            mask[i] = m > before && m >= after;
        }
    }
    EdgeMap::new(w, h, mask)
}

/// Gradient direction snapped to one of four neighbor offsets.
fn quantize(gx: f64, gy: f64) -> (i64, i64) {
    let mut a = gy.atan2(gx).to_degrees();
    if a < 0.0 {
        a += 180.0;
    }
    if !(22.5..157.5).contains(&a) {
        (1, 0)
    } else if a < 67.5 {
        (1, 1)
    } else if a < 112.5 {
        (0, 1)
    } else {
        (-1, 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use image::Luma;

    #[test]
    fn constant_image_has_no_edges() {
        let img = GrayImage::from_pixel(8, 8, Luma([120]));
        assert_eq!(detect_edges(&img, 1.0).unwrap().edgel_count(), 0);
    }

    #[test]
    fn vertical_step_gives_single_column() {
        let img = GrayImage::from_fn(12, 9, |x, _| Luma([if x < 6 { 10 } else { 200 }]));
        let map = detect_edges(&img, 20.0).unwrap();
        let xs: std::collections::BTreeSet<i64> = map.edgels().map(|p| p.x).collect();
        assert_eq!(xs.len(), 1);
        // Every interior row carries exactly one edgel.
        assert_eq!(map.edgel_count(), 7);
    }

    #[test]
    fn ramp_below_threshold() {
        let img = GrayImage::from_fn(10, 10, |x, _| Luma([(x * 2) as u8]));
        assert_eq!(detect_edges(&img, 5.0).unwrap().edgel_count(), 0);
    }

    #[test]
    fn tiny_image_rejected() {
        let img = GrayImage::new(2, 5);
        assert!(detect_edges(&img, 1.0).is_err());
        assert!(detect_edges(&GrayImage::new(5, 5), 0.0).is_err());
    }
}
